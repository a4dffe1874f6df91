import pytest

from swanson_ep.exceptions import InputError
from swanson_ep.models.swanson import QuarticCoeffs, char_coeffs_closed
from swanson_ep.sweep.verify import verify_suite


def _dropped_factor(params):
    # r without the doubled cross term, a plausible transcription slip
    c = char_coeffs_closed(params)
    slip = 8j * params.delta * (params.eta + params.epsilon) * params.rho
    return QuarticCoeffs(c.p, c.q, c.r - slip, c.s)


def _nudged_p(params):
    # p = -4 omega is small next to s, so only a per-coefficient error sees this
    c = char_coeffs_closed(params)
    return QuarticCoeffs(c.p + 5e-9, c.q, c.r, c.s)


@pytest.mark.timeout(900)
def test_verify_default_run_passes():
    report = verify_suite(1000, 42)
    assert report.passed, report.format()
    assert [c.name for c in report.checks] == [
        "coefficients",
        "closed form",
        "pinned pair",
        "branch spectra",
        "EP structure",
    ]
    assert report.checks[0].draws == 2000
    assert report.checks[1].draws == 1000
    assert all(c.draws == 400 for c in report.checks[2:])
    assert report.format().endswith("all checks passed")


def test_verify_single_sample():
    report = verify_suite(1, 7)
    assert report.passed, report.format()
    assert [c.draws for c in report.checks] == [2, 1, 2, 2, 2]


def test_verify_is_deterministic():
    assert verify_suite(25, 3).format() == verify_suite(25, 3).format()


def test_verify_catches_coefficient_slip():
    report = verify_suite(20, 42, coeffs_fn=_dropped_factor)
    assert not report.passed
    coeffs = report.checks[0]
    assert coeffs.draws == 40
    assert coeffs.failures >= 38
    assert any("differing term r" in note for note in coeffs.notes)
    assert all(c.passed for c in report.checks[1:])
    assert "MISMATCH FOUND" in report.format()


@pytest.mark.parametrize("samples", [0, -5])
def test_verify_rejects_sample_count(samples):
    with pytest.raises(InputError):
        verify_suite(samples, 42)


def test_verify_coefficients_relative_per_term():
    coeffs = verify_suite(20, 42, coeffs_fn=_nudged_p).checks[0]
    assert coeffs.failures == coeffs.draws == 40
    assert all("differing term p" in note for note in coeffs.notes)


def test_verify_checks_both_branches_equally():
    report = verify_suite(10, 5)
    assert [c.draws for c in report.checks[2:]] == [4, 4, 4]

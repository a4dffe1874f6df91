#!/usr/bin/env python
# -*- coding: utf-8 -*-

from setuptools import setup, find_packages

with open("README.md") as readme_file:
    readme = readme_file.read()

requirements = [
    "numpy>=1.23.5",
    "scipy>=1.9",
    "tqdm>=4.65.0",
]

test_requirements = [
    "pytest",
    "pytest-timeout",
]

dev_requirements = [
    "black==23.1.0",
]

setup(
    name="swanson_ep",
    version="0.1.0",
    description="Spectra and exceptional points of coupled non-Hermitian Swanson oscillators",
    long_description=readme,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests"]),
    package_data={"swanson_ep": ["sweep/configs/*.cfg", "sweep/sweep_scripts/*.sh"]},
    install_requires=requirements,
    extras_require={"test": test_requirements, "dev": dev_requirements + test_requirements},
    entry_points={"console_scripts": ["swanson-ep=swanson_ep.sweep.cli:main"]},
    python_requires=">=3.8",
    license="MIT license",
    zip_safe=False,
    keywords="non-Hermitian, PT symmetry, exceptional points, "
    "coupled oscillators, eigenvalue branch tracking",
    test_suite="tests",
    tests_require=test_requirements,
)

from swanson_ep.sweep.cli import main

if __name__ == "__main__":
    main()

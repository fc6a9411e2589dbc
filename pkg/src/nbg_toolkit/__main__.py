# src/nbg_toolkit/__main__.py
from nbg_toolkit.cli import main

if __name__ == "__main__":
    main()

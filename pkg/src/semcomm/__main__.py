"""Entry point for ``python -m semcomm``."""

import sys

from .cli.main import main

if __name__ == "__main__":
    sys.exit(main())

r"""Run the command line with ``python -m posetlab``."""

from __future__ import annotations

from posetlab.cli import main

if __name__ == "__main__":
    main()

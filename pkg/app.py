"""
Planar Congestion Router - command-line entry point

Run ``python app.py --help`` for the list of subcommands.
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())

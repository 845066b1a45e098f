#!/usr/bin/env python3
"""Run the closed-form identity suite (same as `besqint validate`)."""

import sys

from besqint.cli import main

if __name__ == "__main__":
    sys.exit(main(["validate", *sys.argv[1:]]))

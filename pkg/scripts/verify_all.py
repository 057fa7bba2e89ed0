#!/usr/bin/env python3
"""Check every product identity plus the oracle triangles and print a table.

    python3 scripts/verify_all.py            # full caps
    python3 scripts/verify_all.py --quick    # smoke run
"""
import sys

from multigrounded.cli import parse_and_run as main

if __name__ == "__main__":
    sys.exit(main(["verify-all", "--timings", *sys.argv[1:]]))

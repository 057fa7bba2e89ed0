#!/usr/bin/env python3
"""Print the energy matrix, D and ground integers for each family at its two smallest ranks."""
import sys

from multigrounded.character import MODULE_WEIGHTS
from multigrounded.cli import parse_and_run as main
from multigrounded.crystal import FAMILIES, FAMILY_MIN_N


def run():
    for family in FAMILIES:
        for n in (FAMILY_MIN_N[family], FAMILY_MIN_N[family] + 1):
            print(f"== {family} n={n}")
            main(["energy", "--family", family, "--n", str(n)])
            for weight in MODULE_WEIGHTS[family]:
                main(["gsp", "--family", family, "--n", str(n), "--weight", weight])
            print()
    return 0


if __name__ == "__main__":
    sys.exit(run())

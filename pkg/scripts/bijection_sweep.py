#!/usr/bin/env python3
"""Round-trip both bijections on the three modules used for acceptance.

The Dn_1 sweep streams about 2.5 million partitions and takes a few minutes.
Pass --cap to shrink it.
"""
import argparse
import sys
import time

from multigrounded.character import bijection_suite, build_module

MODULES = [("A2nm1_2", 3, "L0"), ("A2nm1_2", 3, "L1"), ("Dn_1", 4, "Ln-1")]


def run(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=int, default=4)
    ap.add_argument("--cap", type=int, default=10)
    args = ap.parse_args(argv)
    ok = True
    for family, n, weight in MODULES:
        t0 = time.perf_counter()
        res = bijection_suite(build_module(family, n, weight), args.L, args.cap)
        ok &= res["ok"]
        print(f"{family} n={n} {weight}: paths {res['phi_roundtrips']}/{res['paths']}, "
              f"flexible {res['phi_d_roundtrips']}/{res['flexible_partitions']}, "
              f"{'ok' if res['ok'] else 'FAILED'} ({time.perf_counter() - t0:.1f} s)")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(run())

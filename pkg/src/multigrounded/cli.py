"""Command-line front end.

Exit codes: 0 success, 1 verification inequality, 2 usage error,
3 enumeration did not stabilise.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from typing import List, Optional

from .character import (MODULE_WEIGHTS, THEOREMS, StabilityPolicy, bijection_suite,
                        build_module, character_enumerative, character_flexible, display_order,
                        module_for_theorem, path_character_oracle, verify_theorem)
from .crystal import FAMILIES, FAMILY_MIN_N, CrystalError, build_family, load_crystal, pretty
from .energy import EnergyError, solve_energy
from .mgp import EXACT, FLEX, EnumerationUnstable, enumerate_mgp
from .paths import WEIGHT_TAGS, enumerate_paths, path_weight
from .series import format_poly, poch_expand, series_mul, unit_monomial

THREADS_ENV = "MULTIGROUNDED_THREADS"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: Optional[str] = None
    n: Optional[int] = None
    weight: Optional[str] = None
    theorem: Optional[str] = None
    cap: int = 10
    d: Optional[int] = None
    D: Optional[int] = None
    L: int = 4
    fmt: str = "table"
    output: Optional[str] = None
    threads: Optional[int] = None
    crystal_file: Optional[str] = None

    @classmethod
    def from_args(cls, ns) -> "RunConfig":
        threads = getattr(ns, "threads", None)
        if threads is None and os.environ.get(THREADS_ENV, "").isdigit():
            threads = int(os.environ[THREADS_ENV])
        cfg = cls(ns.command, getattr(ns, "family", None), getattr(ns, "n", None),
                  getattr(ns, "weight", None), getattr(ns, "theorem", None),
                  getattr(ns, "cap", 10), getattr(ns, "d", None), getattr(ns, "D", None),
                  getattr(ns, "L", 4), getattr(ns, "format", "table"),
                  getattr(ns, "output", None), threads, getattr(ns, "crystal_file", None))
        cfg.validate()
        return cfg

    def validate(self):
        if self.family is not None and self.crystal_file is None:
            if self.n is None:
                raise UsageError("--n is required")
            if self.n < FAMILY_MIN_N[self.family]:
                raise UsageError(f"{self.family} needs n >= {FAMILY_MIN_N[self.family]}")
            if self.weight is not None and self.weight not in MODULE_WEIGHTS[self.family]:
                raise UsageError(f"weight {self.weight} is not a level-one module of {self.family}; "
                                 f"valid: {', '.join(MODULE_WEIGHTS[self.family])}")
        if self.d is not None and self.d < 1:
            raise UsageError("--d must be positive")
        if self.L < 0:
            raise UsageError("--L must be nonnegative")


# ---------------------------------------------------------------------------


def _crystal(cfg: RunConfig):
    if cfg.crystal_file:
        return load_crystal(cfg.crystal_file)
    if cfg.family is None:
        raise UsageError("give --family/--n or --crystal-file")
    return build_family(cfg.family, cfg.n)


def _module(cfg: RunConfig):
    if cfg.crystal_file:
        crystal = load_crystal(cfg.crystal_file)
        return build_module("custom", crystal.n, cfg.weight, cfg.d or 1, cfg.D, crystal=crystal)
    return build_module(cfg.family, cfg.n, cfg.weight, cfg.d, cfg.D)


def _series_table(s, labels=None) -> str:
    lines = [f"{'q':>5} | coefficient"]
    for e in s.exponents():
        lines.append(f"{e:>5} | {format_poly(s.coefficient(e))}")
    return "\n".join(lines)


def cmd_energy(cfg: RunConfig):
    crystal = _crystal(cfg)
    if cfg.crystal_file:
        order = list(crystal.labels)
        H = solve_energy(crystal, (0, 0), 0)
    else:
        from .character import seed_for
        order = display_order(cfg.family, cfg.n)
        H = solve_energy(crystal, *seed_for(cfg.family, crystal))
    idx = [crystal.index(x) for x in order]
    values = [[H.entry(r, c) for c in idx] for r in idx]
    if cfg.fmt == "json":
        return {"rows": order, "cols": order, "values": values}, 0
    width = max(4, max(len(str(v)) for row in values for v in row) + 1)
    head = " " * 6 + "".join(f"{pretty(x):>{width}}" for x in order)
    rows = [f"{pretty(lab):>5} " + "".join(f"{v:>{width}}" for v in row)
            for lab, row in zip(order, values)]
    return "\n".join([head] + rows), 0


def cmd_gsp(cfg: RunConfig):
    md = _module(cfg)
    data = {"family": md.family, "n": md.n, "weight": md.weight, "t": md.t,
            "g": md.gsp.labels(), "lambdas": [list(x) for x in md.gsp.lambdas],
            "D": md.D, "u": list(md.u.u), "shift": str(md.energy.shift),
            "q_unit": f"delta*{md.unit}"}
    if cfg.fmt == "json":
        return data, 0
    lines = [f"period t = {md.t}",
             "g (g_0 first) = (" + ", ".join(pretty(x) for x in data["g"]) + ")",
             f"D = {md.D}", f"u = {tuple(md.u.u)}", f"q = exp(-{md.unit} delta)"]
    return "\n".join(lines), 0


def cmd_character(cfg: RunConfig, method: str):
    md = _module(cfg)
    tel = {}
    policy = StabilityPolicy()
    if method == "enumerative":
        s = character_enumerative(md, cfg.cap, policy, tel)
    elif method == "flexible":
        s = character_flexible(md, cfg.cap, cfg.d, policy, tel)
    else:
        s = path_character_oracle(md, cfg.cap, telemetry=tel)
    if cfg.fmt == "json":
        return {"module": md.label(), "method": method, "series": s.to_json(),
                "telemetry": tel}, 0
    return _series_table(s), 0


def cmd_verify(cfg: RunConfig):
    if cfg.theorem not in THEOREMS:
        raise UsageError(f"unknown theorem {cfg.theorem!r}; valid: {', '.join(THEOREMS)}")
    report = verify_theorem(cfg.theorem, cfg.n, cfg.cap)
    code = 0 if report.equal else 1
    if cfg.fmt == "json":
        return report.to_json(timings=False), code
    status = "EQUAL" if report.equal else f"DIFFER at q^{report.first_diff['q']}"
    return f"Theorem {cfg.theorem} n={cfg.n} cap={cfg.cap}: {status}", code


def cmd_enumerate(cfg: RunConfig, mode: str):
    md = _module(cfg)
    d = md.d if mode == FLEX else 1
    parts = enumerate_mgp(md.dh, md.ground, md.crystal.elements, mode, d, cfg.cap)
    labels = md.crystal.labels
    if cfg.fmt == "json":
        return {"module": md.label(), "mode": mode, "d": d,
                "partitions": [p.to_json(labels) for p in parts]}, 0
    lines = []
    for p in parts:
        seq = ", ".join(f"{x.size}_{pretty(labels[x.colour])}" for x in p.sequence)
        lines.append(f"{p.weight:>4} | ({seq})")
    return "\n".join(lines), 0


def cmd_paths(cfg: RunConfig):
    md = _module(cfg)
    rows = []
    for path in enumerate_paths(md.crystal, md.gsp, cfg.L):
        w = path_weight(path, md.energy, md.gsp)
        if w[0] <= cfg.cap:
            rows.append((w, path))
    rows.sort(key=lambda r: (r[0][0], r[1].prefix))
    if cfg.fmt == "json":
        return {"module": md.label(), "L": cfg.L,
                "paths": [p.to_json(w) for w, p in rows]}, 0
    lines = [f"{w[0]:>4} | " + " ".join(pretty(x) for x in reversed(p.labels())) for w, p in rows]
    return "\n".join(lines), 0


def cmd_bijection(cfg: RunConfig):
    md = _module(cfg)
    res = bijection_suite(md, cfg.L, cfg.cap)
    code = 0 if res["ok"] else 1
    if cfg.fmt == "json":
        return {"module": md.label(), **res}, code
    return "\n".join(f"{k:>20}: {v}" for k, v in res.items() if k != "telemetry"), code


ACCEPTANCE_THEOREMS = [("1.2", 2, 20), ("1.2", 3, 20), ("1.3a", 2, 20), ("1.3a", 3, 20),
                       ("1.3b", 2, 20), ("1.3b", 3, 20), ("1.4a", 3, 16), ("1.4b", 3, 16),
                       ("1.5a", 3, 16), ("1.5b", 3, 16), ("1.6a", 4, 16), ("1.6b", 4, 16),
                       ("1.6c", 4, 16), ("1.6d", 4, 16)]


def triangle(theorem: str, n: int, cap: int) -> dict:
    md = module_for_theorem(theorem, n)
    tel = {}
    a = character_enumerative(md, cap, telemetry=tel)
    b = path_character_oracle(md, cap, telemetry=tel)
    f = character_flexible(md, cap, telemetry=tel)
    g = series_mul(f, poch_expand(1, unit_monomial(md.rank), md.d, md.d, cap, md.unit))
    return {"equal": a == b == g.truncate(cap), "telemetry": tel}


def cmd_verify_all(cfg: RunConfig, quick: bool, timings: bool = False):
    rows = []
    for th, n, cap in ACCEPTANCE_THEOREMS:
        cap = min(cap, 6) if quick else cap
        t0 = time.perf_counter()
        rep = verify_theorem(th, n, cap)
        rows.append({"check": f"theorem {th}", "n": n, "cap": cap, "ok": rep.equal,
                     "seconds": round(time.perf_counter() - t0, 2)})
    seen = set()
    for th, n, _ in ACCEPTANCE_THEOREMS:
        if th in seen:
            continue
        seen.add(th)
        cap = 4 if quick else 10
        t0 = time.perf_counter()
        res = triangle(th, n, cap)
        rows.append({"check": f"triangle {th}", "n": n, "cap": cap, "ok": res["equal"],
                     "seconds": round(time.perf_counter() - t0, 2)})
    code = 0 if all(r["ok"] for r in rows) else 1
    if not timings:
        for r in rows:
            r["seconds"] = "-"
    if cfg.fmt == "json":
        return {"rows": rows, "all_ok": code == 0}, code
    lines = [f"{'check':<16}{'n':>3}{'cap':>5}  result  seconds"]
    for r in rows:
        lines.append(f"{r['check']:<16}{r['n']:>3}{r['cap']:>5}  {'PASS' if r['ok'] else 'FAIL':<6}"
                     f"  {r['seconds']:>7}")
    lines.append(f"{sum(r['ok'] for r in rows)}/{len(rows)} checks passed")
    return "\n".join(lines), code


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multigrounded",
                                description="Perfect crystals, multi-grounded partitions and "
                                            "level-one affine characters.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, weight=True, cap=True):
        sp.add_argument("--family", choices=FAMILIES)
        sp.add_argument("--n", type=int)
        if weight:
            sp.add_argument("--weight", choices=WEIGHT_TAGS, default="L0")
        if cap:
            sp.add_argument("--cap", type=int, default=10)
        sp.add_argument("--d", type=int)
        sp.add_argument("--D", type=int)
        sp.add_argument("--crystal-file")
        sp.add_argument("--format", choices=("table", "json"), default="table")
        sp.add_argument("--output")
        sp.add_argument("--threads", type=int, help="thread-count hint (advisory only)")

    common(sub.add_parser("energy", help="energy matrix"), weight=False, cap=False)
    common(sub.add_parser("gsp", help="ground state path, D and ground integers"), cap=False)
    sp = sub.add_parser("character", help="character series")
    common(sp)
    sp.add_argument("--method", choices=("enumerative", "flexible", "paths"), default="enumerative")
    sp = sub.add_parser("verify", help="check one product formula")
    sp.add_argument("--theorem", required=True, choices=THEOREMS)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--cap", type=int, default=10)
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp.add_argument("--output")
    sp.add_argument("--threads", type=int)
    sp = sub.add_parser("enumerate", help="list multi-grounded partitions")
    common(sp)
    sp.add_argument("--mode", choices=(EXACT, FLEX), default=EXACT)
    sp = sub.add_parser("paths", help="list lambda-paths with bounded defect")
    common(sp)
    sp.add_argument("--L", type=int, default=2)
    sp = sub.add_parser("bijection-check", help="round-trip both bijections")
    common(sp)
    sp.add_argument("--L", type=int, default=4)
    sp = sub.add_parser("verify-all", help="run the acceptance matrix")
    sp.add_argument("--quick", action="store_true", help="small caps for a smoke run")
    sp.add_argument("--timings", action="store_true", help="report wall-clock seconds")
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp.add_argument("--output")
    sp.add_argument("--threads", type=int)
    return p


def run(ns) -> tuple:
    cfg = RunConfig.from_args(ns)
    if cfg.command == "energy":
        return cmd_energy(cfg)
    if cfg.command == "gsp":
        return cmd_gsp(cfg)
    if cfg.command == "character":
        return cmd_character(cfg, ns.method)
    if cfg.command == "verify":
        return cmd_verify(cfg)
    if cfg.command == "enumerate":
        return cmd_enumerate(cfg, ns.mode)
    if cfg.command == "paths":
        return cmd_paths(cfg)
    if cfg.command == "bijection-check":
        return cmd_bijection(cfg)
    if cfg.command == "verify-all":
        return cmd_verify_all(cfg, ns.quick, ns.timings)
    raise UsageError(f"unknown command {cfg.command}")  # pragma: no cover


def parse_and_run(argv: Optional[List[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out, code = run(ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (CrystalError, EnergyError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EnumerationUnstable as exc:
        print(f"unstable: {exc} {json.dumps(exc.telemetry)}", file=sys.stderr)
        return 3
    text = json.dumps(out, indent=2, sort_keys=True) if not isinstance(out, str) else out
    if getattr(ns, "output", None):
        with open(ns.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stdout)
    return code


def main():  # pragma: no cover
    sys.exit(parse_and_run())


if __name__ == "__main__":  # pragma: no cover
    main()

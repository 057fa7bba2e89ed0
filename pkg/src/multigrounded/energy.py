"""Energy function on B (x) B by seeded propagation, its ground-normalised
form H_lambda, the divisor D and the ground integers u^(k)."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .crystal import (ANTI_KASHIWARA, DEFAULT_CONVENTION, KASHIWARA, CrystalError,
                      PerfectCrystal, tensor_e)

Pair = Tuple[int, int]


class EnergyError(ValueError):
    pass


@dataclass(frozen=True)
class EnergyFunction:
    """values[(left, right)] = H(left (x) right).

    The displayed matrix has entry(row b, col b') = H(b' (x) b).
    """
    crystal: PerfectCrystal
    values: Dict[Pair, int]
    seed: Tuple[Pair, int]
    convention: str = DEFAULT_CONVENTION

    def __call__(self, left: int, right: int) -> int:
        return self.values[(left, right)]

    def entry(self, row: int, col: int) -> int:
        return self.values[(col, row)]

    def matrix(self, order=None) -> List[List[int]]:
        order = list(self.crystal.elements) if order is None else list(order)
        return [[self.entry(r, c) for c in order] for r in order]


def _zero_step(crystal, pair, convention) -> int:
    """+1 when e_0 moves the factor that the convention treats as first."""
    b1, b2 = pair
    if convention == KASHIWARA:
        return 1 if crystal.phi(b1, 0) >= crystal.eps(b2, 0) else -1
    if convention == ANTI_KASHIWARA:
        return 1 if crystal.phi(b2, 0) >= crystal.eps(b1, 0) else -1
    raise CrystalError(f"unknown tensor convention {convention!r}")


def tensor_edges(crystal: PerfectCrystal, convention: str = DEFAULT_CONVENTION):
    """Yield (source, i, target, delta) for every e_i-arrow of B (x) B,
    where delta is the required change H(target) - H(source)."""
    for b1 in crystal.elements:
        for b2 in crystal.elements:
            p = (b1, b2)
            for i in range(crystal.rank):
                q = tensor_e(crystal, p, i, convention)
                if q is None:
                    continue
                yield p, i, q, (_zero_step(crystal, p, convention) if i == 0 else 0)


def solve_energy(crystal: PerfectCrystal, seed_pair: Pair, seed_value: int,
                 convention: str = DEFAULT_CONVENTION) -> EnergyFunction:
    adj: Dict[Pair, list] = {}
    for p, _i, q, delta in tensor_edges(crystal, convention):
        adj.setdefault(p, []).append((q, delta))
        adj.setdefault(q, []).append((p, -delta))
    seed_pair = tuple(seed_pair)
    values = {seed_pair: int(seed_value)}
    queue = deque([seed_pair])
    while queue:
        p = queue.popleft()
        for q, delta in adj.get(p, ()):
            want = values[p] + delta
            have = values.get(q)
            if have is None:
                values[q] = want
                queue.append(q)
            elif have != want:
                lab = crystal.labels
                raise EnergyError(
                    f"inconsistent energy at {lab[q[0]]}(x){lab[q[1]]}: {have} vs {want}")
    if len(values) != len(crystal) ** 2:
        raise EnergyError("B (x) B is not connected: not a perfect crystal")
    return EnergyFunction(crystal, values, (seed_pair, int(seed_value)), convention)


def check_energy(H: EnergyFunction) -> List[str]:
    """Every tensor arrow checked against the propagation law; returns violations."""
    bad = []
    for p, i, q, delta in tensor_edges(H.crystal, H.convention):
        if H.values[q] - H.values[p] != delta:
            bad.append(f"{p} -{i}-> {q}")
    return bad


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalizedEnergy:
    h_lambda: Dict[Pair, Fraction]
    D: int
    dh_lambda: Dict[Pair, int]
    shift: Fraction
    t: int

    def dh(self, left: int, right: int) -> int:
        return self.dh_lambda[(left, right)]


@dataclass(frozen=True)
class GroundIntegers:
    u: Tuple[int, ...]

    def __getitem__(self, k):
        return self.u[k % len(self.u)]

    def __len__(self):
        return len(self.u)


def ground_cycle(gsp) -> List[Pair]:
    """The pairs g_{k+1} (x) g_k, k = 0..t-1, indices mod t."""
    g, t = gsp.g, gsp.t
    return [(g[(k + 1) % t], g[k]) for k in range(t)]


def divisors(m: int) -> List[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def valid_divisor(h_lambda: Dict[Pair, Fraction], cycle: List[Pair], D: int) -> bool:
    t = len(cycle)
    if any((D * v).denominator != 1 for v in h_lambda.values()):
        return False
    total = sum((k + 1) * D * h_lambda[p] for k, p in enumerate(cycle))
    return (total / t).denominator == 1


def normalize(H: EnergyFunction, gsp, D: Optional[int] = None) -> NormalizedEnergy:
    cycle = ground_cycle(gsp)
    t = len(cycle)
    shift = Fraction(sum(H.values[p] for p in cycle), t)
    h_lambda = {p: v - shift for p, v in H.values.items()}
    if D is None:
        for cand in divisors(2 * t):
            if valid_divisor(h_lambda, cycle, cand):
                D = cand
                break
        else:  # pragma: no cover - 2t always works
            raise EnergyError("no valid divisor of 2t")
    elif D < 1 or not valid_divisor(h_lambda, cycle, D):
        raise EnergyError(f"D={D} does not make D*H_lambda and the ground integers integral")
    dh = {p: int(D * v) for p, v in h_lambda.items()}
    return NormalizedEnergy(h_lambda, D, dh, shift, t)


def ground_integers(ne: NormalizedEnergy, gsp) -> GroundIntegers:
    cycle = ground_cycle(gsp)
    t = len(cycle)
    steps = [ne.dh_lambda[p] for p in cycle]
    base = Fraction(-sum((l + 1) * s for l, s in enumerate(steps)), t)
    u = []
    for k in range(t):
        val = base + sum(steps[k:])
        if val.denominator != 1:
            raise EnergyError("ground integers are not integral for this D")
        u.append(int(val))
    return GroundIntegers(tuple(u))


def ground_integers_from_invariants(steps) -> Tuple[Fraction, ...]:
    """Solve sum(u) = 0 and u_k - u_{k+1} = steps[k] without the closed formula."""
    t = len(steps)
    # u_k = u_0 - (steps[0] + ... + steps[k-1])
    partial = [Fraction(0)]
    for s in steps[:-1]:
        partial.append(partial[-1] - s)
    u0 = -sum(partial) / t
    return tuple(u0 + p for p in partial)

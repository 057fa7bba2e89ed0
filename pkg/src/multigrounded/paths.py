"""Ground state paths, lambda-paths and their weights.

Paths are stored rightmost-first: index 0 is the rightmost tensor factor,
so a path reads  ... (x) p_2 (x) p_1 (x) p_0.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

from .crystal import CrystalError, PerfectCrystal, fundamental_weight
from .energy import EnergyFunction, NormalizedEnergy
from .series import Monomial, mono_inv, mono_mul, unit_monomial

WEIGHT_TAGS = ("L0", "L1", "Ln-1", "Ln")


def weight_index(tag: str, n: int) -> int:
    table = {"L0": 0, "L1": 1, "Ln-1": n - 1, "Ln": n}
    if tag not in table:
        raise CrystalError(f"unknown weight {tag!r}; expected one of {', '.join(WEIGHT_TAGS)}")
    return table[tag]


def weight_from_tag(tag: str, n: int) -> Tuple[int, ...]:
    return fundamental_weight(n, weight_index(tag, n))


@dataclass(frozen=True)
class GroundStatePath:
    crystal: PerfectCrystal
    g: Tuple[int, ...]
    lambdas: Tuple[Tuple[int, ...], ...]

    @property
    def t(self) -> int:
        return len(self.g)

    def at(self, k: int) -> int:
        return self.g[k % len(self.g)]

    def labels(self) -> List[str]:
        return [self.crystal.labels[b] for b in self.g]


def _unique(found, what, lam):
    if not found:
        raise CrystalError(f"weight {lam} not realizable in this crystal")
    if len(found) > 1:
        raise CrystalError(f"weight {lam} has several elements with {what} equal to it")
    return found[0]


def ground_state_path(crystal: PerfectCrystal, lam: Sequence[int]) -> GroundStatePath:
    lam = tuple(lam)
    g, lambdas = [], []
    cur = lam
    while True:
        b = _unique(crystal.elements_with_phi(cur), "phi", cur)
        if g and b == g[0]:
            break
        if b in g:  # pragma: no cover - would need a non-perfect crystal
            raise CrystalError("ground state path enters a cycle avoiding g_0")
        g.append(b)
        lambdas.append(cur)
        cur = crystal.eps_vec(b)
    return GroundStatePath(crystal, tuple(g), tuple(lambdas))


@dataclass(frozen=True)
class LambdaPath:
    """Finite prefix (p_0..p_{L-1}); beyond it the path follows the ground."""
    prefix: Tuple[int, ...]
    gsp: GroundStatePath

    def canonical(self) -> "LambdaPath":
        p = list(self.prefix)
        while p and p[-1] == self.gsp.at(len(p) - 1):
            p.pop()
        return LambdaPath(tuple(p), self.gsp)

    def at(self, k: int) -> int:
        return self.prefix[k] if k < len(self.prefix) else self.gsp.at(k)

    @property
    def m(self) -> int:
        """Number of t-blocks up to and including the last one off the ground."""
        L = len(self.canonical().prefix)
        t = self.gsp.t
        return -(-L // t)

    def labels(self) -> List[str]:
        return [self.gsp.crystal.labels[b] for b in self.prefix]

    def to_json(self, weight=None) -> dict:
        out = {"prefix": self.canonical().labels()}
        if weight is not None:
            out["weight"] = {"q": weight[0], "colour": list(weight[1])}
        return out


def enumerate_paths(crystal: PerfectCrystal, gsp: GroundStatePath, L: int) -> List[LambdaPath]:
    """Every path agreeing with the ground from position L on (|B|^L prefixes)."""
    if L < 0:
        raise ValueError("defect bound must be nonnegative")
    seen = set()
    out = []
    for prefix in itertools.product(crystal.elements, repeat=L):
        path = LambdaPath(tuple(prefix), gsp).canonical()
        if path.prefix not in seen:
            seen.add(path.prefix)
            out.append(path)
    out.sort(key=lambda p: (len(p.prefix), p.prefix))
    return out


def path_weight(path: LambdaPath, ne: NormalizedEnergy, gsp: GroundStatePath) -> Tuple[int, Monomial]:
    """(q-exponent in internal units, colour) from the D*H_lambda part sums."""
    crystal = gsp.crystal
    p = path.canonical()
    mt = p.m * gsp.t
    steps = [ne.dh(p.at(l + 1), p.at(l)) for l in range(mt)]
    cycle = [ne.dh(gsp.at(l + 1), gsp.at(l)) for l in range(gsp.t)]
    u0 = -sum((l + 1) * s for l, s in enumerate(cycle))
    if u0 % gsp.t:
        raise ValueError("D does not make the ground integers integral")
    u0 //= gsp.t
    total, tail = 0, 0
    colour = unit_monomial(crystal.colour_rank)
    for k in range(mt - 1, -1, -1):
        tail += steps[k]
        total += u0 + tail
        colour = mono_mul(colour, crystal.colours[p.at(k)])
    return total, colour


def kmn_weight(prefix: Sequence[int], H: EnergyFunction, gsp: GroundStatePath, D: int
               ) -> Tuple[int, Monomial]:
    """Weight straight from the path-realization formula with the raw energy H:
    D * sum_k (k+1) [H(p_{k+1} (x) p_k) - H(g_{k+1} (x) g_k)] and prod c_{p_k}/c_{g_k}."""
    crystal = gsp.crystal
    L = len(prefix)

    def p(k):
        return prefix[k] if k < L else gsp.at(k)

    q = 0
    colour = unit_monomial(crystal.colour_rank)
    for k in range(L):
        q += (k + 1) * (H(p(k + 1), p(k)) - H(gsp.at(k + 1), gsp.at(k)))
        colour = mono_mul(colour, mono_mul(crystal.colours[p(k)], mono_inv(crystal.colours[gsp.at(k)])))
    return D * q, colour


def _position_bounds(H: EnergyFunction, gsp: GroundStatePath, D: int, length: int):
    """lb[k][b] = least possible sum of the first k weight terms when p_k = b."""
    crystal = gsp.crystal
    elems = list(crystal.elements)
    lb = [[0] * len(crystal)]
    for k in range(1, length + 1):
        base = H(gsp.at(k), gsp.at(k - 1))
        prev = lb[-1]
        row = []
        for b in elems:
            row.append(min(k * D * (H(b, b2) - base) + prev[b2] for b2 in elems))
        lb.append(row)
    return lb


def bounded_paths(H: EnergyFunction, gsp: GroundStatePath, D: int, length: int, cap: int
                  ) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """All length-``length`` prefixes whose weight is <= cap, with that weight.

    Tail-first DFS; the bound table is exact, so every visited node has at
    least one surviving leaf.
    """
    crystal = gsp.crystal
    elems = list(crystal.elements)
    lb = _position_bounds(H, gsp, D, length)
    seq = [0] * length

    def rec(k, nxt, acc):
        # choose p_k given p_{k+1} = nxt; acc is the sum of terms at positions > k
        base = H(gsp.at(k + 1), gsp.at(k))
        for b in elems:
            a2 = acc + (k + 1) * D * (H(nxt, b) - base)
            if a2 + lb[k][b] > cap:
                continue
            seq[k] = b
            if k == 0:
                yield tuple(seq), a2
            else:
                yield from rec(k - 1, b, a2)

    if length == 0:
        yield (), 0
        return
    yield from rec(length - 1, gsp.at(length), 0)


def path_sum(H: EnergyFunction, gsp: GroundStatePath, D: int, length: int, cap: int
             ) -> Dict[int, Dict[Monomial, int]]:
    """Aggregated form of ``bounded_paths``: q-exponent -> colour polynomial.

    Same recursion, right to left, but paths sharing (position, element,
    weight so far) are merged with their colour polynomials.
    """
    crystal = gsp.crystal
    elems = list(crystal.elements)
    lb = _position_bounds(H, gsp, D, length)
    rank = crystal.colour_rank
    if length == 0:
        return {0: {unit_monomial(rank): 1}} if cap >= 0 else {}
    rel = {}
    for k in range(gsp.t):
        for b in elems:
            rel[(k, b)] = mono_mul(crystal.colours[b], mono_inv(crystal.colours[gsp.at(k)]))
    states = {gsp.at(length): {0: {unit_monomial(rank): 1}}}
    for k in range(length - 1, -1, -1):
        base = H(gsp.at(k + 1), gsp.at(k))
        nxt: Dict[int, Dict[int, Dict]] = {}
        for prev_b, wmap in states.items():
            for b in elems:
                term = (k + 1) * D * (H(prev_b, b) - base)
                bound = lb[k][b]
                col = rel[(k % gsp.t, b)]
                for acc, poly in wmap.items():
                    a2 = acc + term
                    if a2 + bound > cap:
                        continue
                    tgt = nxt.setdefault(b, {}).setdefault(a2, {})
                    for mono, c in poly.items():
                        m2 = mono_mul(mono, col)
                        tgt[m2] = tgt.get(m2, 0) + c
        states = nxt
    out: Dict[int, Dict[Monomial, int]] = {}
    for wmap in states.values():
        for acc, poly in wmap.items():
            tgt = out.setdefault(acc, {})
            for mono, c in poly.items():
                tgt[mono] = tgt.get(mono, 0) + c
    return {e: {m: c for m, c in p.items() if c} for e, p in out.items()}

"""Multi-grounded partitions: relations, validation, enumeration and the
two bijections (paths <-> minimal partitions, flexible <-> minimal x d-partitions).

Relation data ``dh`` is any mapping (left, right) -> int standing for
D*H_lambda(left (x) right).  A part k_{c_b} followed by k'_{c_b'} is
related iff k - k' compares with dh[(b', b)].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .paths import GroundStatePath, LambdaPath

EXACT = "exact"      # k - k' == dh
FLEX = "flex"        # k - k' - dh in d * Z_{>=0}
MODES = (EXACT, FLEX)


class EnumerationUnstable(RuntimeError):
    def __init__(self, msg, telemetry=None):
        super().__init__(msg)
        self.telemetry = telemetry or {}


@dataclass(frozen=True, order=True)
class ColouredInteger:
    size: int
    colour: int

    def __iter__(self):
        yield self.size
        yield self.colour


@dataclass(frozen=True)
class Ground:
    """Ground colours g_0..g_{t-1} with their ground integers u^(0)..u^(t-1)."""
    g: Tuple[int, ...]
    u: Tuple[int, ...]

    @property
    def t(self) -> int:
        return len(self.g)

    @property
    def tail(self) -> Tuple[ColouredInteger, ...]:
        return tuple(ColouredInteger(x, c) for x, c in zip(self.u, self.g))

    def rotate(self, i: int) -> "Ground":
        i %= self.t
        return Ground(self.g[i:] + self.g[:i], self.u[i:] + self.u[:i])


@dataclass(frozen=True)
class MultiGroundedPartition:
    parts: Tuple[ColouredInteger, ...]
    ground: Ground

    @property
    def weight(self) -> int:
        return sum(p.size for p in self.parts) + sum(self.ground.u)

    @property
    def sequence(self) -> Tuple[ColouredInteger, ...]:
        return self.parts + self.ground.tail

    def colour(self, colours) -> Tuple[int, ...]:
        """C(pi) over the non-tail parts (the tail colours multiply to 1)."""
        rank = len(colours[0])
        out = [0] * rank
        for p in self.parts:
            for i, x in enumerate(colours[p.colour]):
                out[i] += x
        return tuple(out)

    def to_json(self, labels) -> dict:
        return {"parts": [{"size": p.size, "colour": labels[p.colour]} for p in self.parts],
                "tail": [{"size": p.size, "colour": labels[p.colour]} for p in self.ground.tail],
                "weight": self.weight}


def relation_check(a, b, mode: str, d: int, dh: Mapping) -> bool:
    """Does a (left) relate to b (right)?"""
    k, cb = a
    k2, cb2 = b
    diff = k - k2 - dh[(cb2, cb)]
    if mode == EXACT:
        return diff == 0
    if mode == FLEX:
        return diff >= 0 and diff % d == 0
    raise ValueError(f"unknown mode {mode!r}")


def matrix_relation(M, colours: Sequence) -> Dict[Tuple, int]:
    """Relation data from a displayed matrix (row b, column b' holds M(b' (x) b))."""
    return {(cb2, cb): M[r][c] for r, cb in enumerate(colours) for c, cb2 in enumerate(colours)}


def validate(seq: Sequence, ground: Ground, mode: str, d: int, dh: Mapping,
             multiple_of_t: bool = False) -> bool:
    seq = [ColouredInteger(*x) for x in seq]
    t = ground.t
    if len(seq) < t or tuple(seq[-t:]) != ground.tail:
        return False
    if multiple_of_t and len(seq) % t:
        return False
    s = len(seq) - t
    if s >= t and tuple(seq[s - t:s]) == ground.tail:
        return False
    for a, b in zip(seq, seq[1:]):
        if not relation_check(a, b, mode, d, dh):
            return False
    return True


def ground_from_relation(dh: Mapping, g: Sequence) -> Ground:
    """The unique ground integers for colours g under dh (sum zero, tight cycle)."""
    from .energy import ground_integers_from_invariants
    t = len(g)
    steps = [dh[(g[(k + 1) % t], g[k])] for k in range(t)]
    if sum(steps) != 0:
        raise ValueError("the ground cycle of dh does not sum to zero")
    u = ground_integers_from_invariants(steps)
    if any(x.denominator != 1 for x in u):
        raise ValueError(f"ground integers {u} are not integral")
    return Ground(tuple(g), tuple(int(x) for x in u))


# ---------------------------------------------------------------------------
# enumeration (tail-first)


@dataclass
class SweepTelemetry:
    caps: List[int] = field(default_factory=list)
    counts: List[int] = field(default_factory=list)
    converged: bool = False

    def as_dict(self):
        return {"caps": list(self.caps), "counts": list(self.counts), "converged": self.converged}


class _Layers:
    """Excess bookkeeping shared by the DFS and the aggregated DP.

    Adding a part to the left of a part of colour b (at phase ph = position
    mod t) gives it colour b' and excess e' = e + E + d*m, where
    E = dh(b (x) b') - dh(g_ph (x) g_{ph-1}); the part's size is e' + u^(ph-1).
    """

    def __init__(self, dh: Mapping, ground: Ground, elements: Sequence[int]):
        self.dh = dh
        self.ground = ground
        self.elements = list(elements)
        t = ground.t
        self.step = {}
        for ph in range(t):
            g_now, g_new = ground.g[ph], ground.g[(ph - 1) % t]
            base = dh[(g_now, g_new)]
            for b in self.elements:
                for b2 in self.elements:
                    self.step[(ph, b, b2)] = dh[(b, b2)] - base
        self._G = [{(ph, b): 0 for ph in range(t) for b in self.elements}]
        self._lb = {}

    def G(self, r: int):
        """G(r)[(ph, b)]: least sum of excess increments over r more parts."""
        t = self.ground.t
        while len(self._G) <= r:
            rr = len(self._G)
            prev = self._G[-1]
            cur = {}
            for ph in range(t):
                nph = (ph - 1) % t
                for b in self.elements:
                    cur[(ph, b)] = min(rr * self.step[(ph, b, b2)] + prev[(nph, b2)]
                                       for b2 in self.elements)
            self._G.append(cur)
        return self._G[r]

    def lower_bound(self, j: int, ph: int, b: int, e: int, max_parts: int,
                    multiple_of_t: bool) -> int:
        key = (j, ph, b, e, max_parts, multiple_of_t)
        if key in self._lb:
            return self._lb[key]
        t = self.ground.t
        best = None
        for r in range(0, max_parts - j + 1):
            total = j + r
            if total == 0 or (multiple_of_t and total % t):
                continue
            v = r * e + self.G(r)[(ph, b)]
            if best is None or v < best:
                best = v
        self._lb[key] = best
        return best


def iter_mgp(dh: Mapping, ground: Ground, elements: Sequence[int], mode: str, d: int,
             max_q: int, max_parts: int, multiple_of_t: bool = True):
    """Stream the non-bare partitions with at most ``max_parts`` parts before the tail.

    Tail-first DFS: each new leftmost part is the previous one plus dh (plus
    d*m in flexible mode); branches are cut by an exact lower bound on what
    the remaining parts can add.
    """
    layers = _Layers(dh, ground, elements)
    t = ground.t
    parts: List[ColouredInteger] = []

    def rec(j, ph, b, e, w, on_ground):
        # j parts placed; the leftmost has colour b, phase ph, excess e
        if j == max_parts:
            return
        nph = (ph - 1) % t
        for b2 in layers.elements:
            base_e = e + layers.step[(ph, b, b2)]
            m = 0
            while True:
                e2 = base_e + d * m
                w2 = w + e2
                lb = layers.lower_bound(j + 1, nph, b2, e2, max_parts, multiple_of_t)
                if lb is None or w2 + lb > max_q:
                    break
                flag = on_ground and b2 == ground.g[nph] and e2 == 0
                # a first block equal to the ground is forbidden; larger m may still work
                if not (j + 1 == t and flag):
                    parts.append(ColouredInteger(e2 + ground.u[nph], b2))
                    if (not multiple_of_t or (j + 1) % t == 0) and w2 <= max_q:
                        yield MultiGroundedPartition(tuple(reversed(parts)), ground)
                    yield from rec(j + 1, nph, b2, e2, w2, flag if j + 1 < t else False)
                    parts.pop()
                if mode == EXACT:
                    break
                m += 1

    yield from rec(0, 0, ground.g[0], 0, 0, True)


def enumerate_mgp(dh: Mapping, ground: Ground, elements: Sequence[int], mode: str = EXACT,
                  d: int = 1, max_q: int = 0, multiple_of_t: bool = True,
                  start_parts: int = 4, max_parts_ceiling: int = 256,
                  telemetry: Optional[SweepTelemetry] = None) -> List[MultiGroundedPartition]:
    """All multi-grounded partitions of weight <= max_q (the bare ground included).

    The part-count cap is doubled until two consecutive sweeps agree.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if d < 1:
        raise ValueError("d must be positive")
    tel = telemetry if telemetry is not None else SweepTelemetry()
    t = ground.t
    cap = max(t, start_parts - start_parts % t if multiple_of_t else start_parts)
    prev = None
    while cap <= max_parts_ceiling:
        found = list(iter_mgp(dh, ground, elements, mode, d, max_q, cap, multiple_of_t))
        key = sorted((p.weight, p.parts) for p in found)
        tel.caps.append(cap)
        tel.counts.append(len(found))
        if prev is not None and key == prev:
            tel.converged = True
            base = MultiGroundedPartition((), ground)
            result = found + ([base] if base.weight <= max_q else [])
            return sorted(result, key=lambda p: (p.weight, len(p.parts), p.parts))
        prev = key
        cap *= 2
    raise EnumerationUnstable(f"partition sweep did not settle below {max_parts_ceiling} parts",
                              tel.as_dict())


def character_dp(dh: Mapping, ground: Ground, elements: Sequence[int], colours,
                 mode: str, d: int, max_q: int, max_parts: int,
                 multiple_of_t: bool = True) -> Dict[int, Dict[Tuple[int, ...], int]]:
    """sum C(pi) q^|pi| over the same set as the DFS, aggregated by state.

    States are (phase, leftmost colour, excess, still-on-ground flag); each
    carries a map weight -> colour polynomial.
    """
    layers = _Layers(dh, ground, elements)
    t = ground.t
    rank = len(colours[0])
    one = (0,) * rank
    result: Dict[int, Dict[Tuple[int, ...], int]] = {0: {one: 1}} if max_q >= 0 else {}
    states = {(0, ground.g[0], 0, True): {0: {one: 1}}}
    for j in range(max_parts):
        nxt: Dict = {}
        for (ph, b, e, flag), wmap in states.items():
            nph = (ph - 1) % t
            for b2 in layers.elements:
                base_e = e + layers.step[(ph, b, b2)]
                col = colours[b2]
                m = 0
                while True:
                    e2 = base_e + d * m
                    lb = layers.lower_bound(j + 1, nph, b2, e2, max_parts, multiple_of_t)
                    wmin = min(wmap)
                    if lb is None or wmin + e2 + lb > max_q:
                        break
                    f2 = flag and b2 == ground.g[nph] and e2 == 0
                    if not (j + 1 == t and f2):
                        key = (nph, b2, e2, f2 if j + 1 < t else False)
                        tgt = nxt.setdefault(key, {})
                        for w, poly in wmap.items():
                            w2 = w + e2
                            if w2 + lb > max_q:
                                continue
                            tp = tgt.setdefault(w2, {})
                            for mono, c in poly.items():
                                m2 = tuple(x + y for x, y in zip(mono, col))
                                tp[m2] = tp.get(m2, 0) + c
                    if mode == EXACT:
                        break
                    m += 1
        states = {k: v for k, v in nxt.items() if v}
        if not multiple_of_t or (j + 1) % t == 0:
            for (ph, b, e, flag), wmap in states.items():
                for w, poly in wmap.items():
                    if w > max_q:
                        continue
                    tgt = result.setdefault(w, {})
                    for mono, c in poly.items():
                        tgt[mono] = tgt.get(mono, 0) + c
        if not states:
            break
    return {w: {m: c for m, c in p.items() if c} for w, p in result.items()}


# ---------------------------------------------------------------------------
# bijections


def phi_forward(path: LambdaPath, dh: Mapping, ground: Ground) -> MultiGroundedPartition:
    """Path -> minimal partition: pi_k = u^(0) + sum_{l >= k} dh(p_{l+1} (x) p_l)."""
    p = path.canonical()
    mt = p.m * ground.t
    size = ground.u[0]
    parts = []
    for k in range(mt - 1, -1, -1):
        size += dh[(p.at(k + 1), p.at(k))]
        parts.append(ColouredInteger(size, p.at(k)))
    return MultiGroundedPartition(tuple(reversed(parts)), ground)


def phi_inverse(pi: MultiGroundedPartition, dh: Mapping, gsp: GroundStatePath) -> LambdaPath:
    if not validate(pi.sequence, pi.ground, EXACT, 1, dh, multiple_of_t=True):
        raise ValueError("not a minimal multi-grounded partition with part count divisible by t")
    return LambdaPath(tuple(p.colour for p in pi.parts), gsp)


@dataclass(frozen=True)
class DecompositionPair:
    minimal: MultiGroundedPartition
    free: Tuple[int, ...]   # non-increasing multiples of d, length divisible by t

    @property
    def free_weight(self) -> int:
        return sum(self.free)


def _last_off_ground_block(colours: Sequence[int], ground: Ground) -> int:
    t = ground.t
    s = len(colours) // t
    for k in range(s, 0, -1):
        if tuple(colours[(k - 1) * t:k * t]) != ground.g:
            return k
    return 0


def phi_d_forward(pi: MultiGroundedPartition, d: int, dh: Mapping, gsp: GroundStatePath,
                  check: bool = True) -> DecompositionPair:
    """``check=False`` skips input validation, for partitions that come
    straight out of the enumerator."""
    ground = pi.ground
    t = ground.t
    if check and not validate(pi.sequence, ground, FLEX, d, dh, multiple_of_t=True):
        raise ValueError("not a flexible multi-grounded partition for this d")
    colours = [p.colour for p in pi.parts]
    m = _last_off_ground_block(colours, ground)
    mu = phi_forward(LambdaPath(tuple(colours[:m * t]), gsp), dh, ground)
    nu = []
    for k, part in enumerate(pi.parts):
        ref = mu.parts[k].size if k < m * t else ground.u[k % t]
        nu.append(part.size - ref)
    while len(nu) >= t and not any(nu[-t:]):
        del nu[-t:]
    return DecompositionPair(mu, tuple(nu))


def phi_d_inverse(pair: DecompositionPair, d: int, dh: Mapping,
                  check: bool = True) -> MultiGroundedPartition:
    mu, nu = pair.minimal, list(pair.free)
    ground = mu.ground
    t = ground.t
    if len(nu) % t or any(x < 0 or x % d for x in nu) or any(a < b for a, b in zip(nu, nu[1:])):
        raise ValueError("free part must be a non-increasing list of nonnegative multiples of d "
                         "with length divisible by t")
    if nu and nu[len(nu) - t] == 0:
        raise ValueError("free part has a trailing all-zero block")
    parts = list(mu.parts)
    for k in range(len(parts), len(nu)):
        parts.append(ColouredInteger(ground.u[k % t], ground.g[k % t]))
    nu += [0] * (len(parts) - len(nu))
    out = tuple(ColouredInteger(p.size + x, p.colour) for p, x in zip(parts, nu))
    pi = MultiGroundedPartition(out, ground)
    if check and not validate(pi.sequence, ground, FLEX, d, dh, multiple_of_t=True):
        raise ValueError("pair does not map to a valid flexible partition")
    return pi

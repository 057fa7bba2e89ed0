"""Exact truncated Laurent series in q with Laurent-polynomial coefficients
in colour variables c_0..c_{r-1}.

Monomials are tuples of integer exponents (slot i = exponent of c_i).
A coefficient polynomial is a plain dict monomial -> nonzero int.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

Monomial = Tuple[int, ...]
Polynomial = Dict[Monomial, int]


class SeriesError(ValueError):
    pass


def unit_monomial(rank: int) -> Monomial:
    return (0,) * rank


def basis_monomial(rank: int, slot: int, power: int = 1) -> Monomial:
    exps = [0] * rank
    exps[slot] = power
    return tuple(exps)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_inv(a: Monomial) -> Monomial:
    return tuple(-x for x in a)


def _poly_add_into(target: Polynomial, src: Mapping[Monomial, int], scale: int = 1) -> None:
    for m, c in src.items():
        v = target.get(m, 0) + scale * c
        if v:
            target[m] = v
        else:
            target.pop(m, None)


class TruncatedSeries:
    """Sum of poly_e(c) q^e for e <= cap, exact in that range.

    ``unit`` records what one step of q means as a fraction of the null root
    (the series is in q = exp(-unit * delta)); it is metadata only.
    Instances are treated as immutable.
    """

    __slots__ = ("rank", "unit", "cap", "_terms")

    def __init__(self, rank: int, cap: int, terms=None, unit=Fraction(1)):
        self.rank = rank
        self.unit = Fraction(unit)
        self.cap = cap
        clean: Dict[int, Polynomial] = {}
        if terms:
            for e, poly in terms.items():
                if e > cap:
                    continue
                p = {}
                for m, c in poly.items():
                    if len(m) != rank:
                        raise SeriesError(f"monomial {m} does not have rank {rank}")
                    if c:
                        p[tuple(m)] = p.get(tuple(m), 0) + c
                p = {m: c for m, c in p.items() if c}
                if p:
                    clean[e] = p
        self._terms = clean

    # construction helpers
    @classmethod
    def zero(cls, rank, cap, unit=Fraction(1)):
        return cls(rank, cap, None, unit)

    @classmethod
    def one(cls, rank, cap, unit=Fraction(1)):
        return cls.monomial(rank, cap, 0, unit_monomial(rank), 1, unit)

    @classmethod
    def monomial(cls, rank, cap, q_exp, mono, coeff=1, unit=Fraction(1)):
        return cls(rank, cap, {q_exp: {tuple(mono): coeff}}, unit)

    @classmethod
    def _raw(cls, rank, cap, terms, unit):
        s = cls.__new__(cls)
        s.rank = rank
        s.unit = unit
        s.cap = cap
        s._terms = terms
        return s

    # access
    @property
    def terms(self) -> Dict[int, Polynomial]:
        return {e: dict(p) for e, p in self._terms.items()}

    def coefficient(self, q_exp: int) -> Polynomial:
        if q_exp > self.cap:
            raise SeriesError(f"q^{q_exp} lies beyond the truncation cap {self.cap}")
        return dict(self._terms.get(q_exp, {}))

    def exponents(self):
        return sorted(self._terms)

    def valuation(self) -> int:
        """Lowest q-exponent with a nonzero coefficient (cap + 1 if none)."""
        return min(self._terms) if self._terms else self.cap + 1

    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        for e in sorted(self._terms):
            p = self._terms[e]
            for m in sorted(p):
                yield e, m, p[m]

    def num_terms(self) -> int:
        return sum(len(p) for p in self._terms.values())

    def truncate(self, cap: int) -> "TruncatedSeries":
        if cap > self.cap:
            raise SeriesError(f"cannot raise cap from {self.cap} to {cap}")
        return TruncatedSeries._raw(
            self.rank, cap,
            {e: dict(p) for e, p in self._terms.items() if e <= cap}, self.unit)

    def with_cap(self, cap: int) -> "TruncatedSeries":
        return self.truncate(min(cap, self.cap))

    def map_exponents(self, factor: int, unit=None) -> "TruncatedSeries":
        """Relabel q -> q^factor (factor > 0); the series itself is unchanged."""
        if factor <= 0:
            raise SeriesError("exponent factor must be positive")
        new_unit = self.unit / factor if unit is None else Fraction(unit)
        return TruncatedSeries._raw(
            self.rank, self.cap * factor,
            {e * factor: dict(p) for e, p in self._terms.items()}, new_unit)

    def contract_exponents(self, factor: int, unit=None) -> "TruncatedSeries":
        """Inverse of map_exponents; every stored exponent must be divisible."""
        bad = [e for e in self._terms if e % factor]
        if bad:
            raise SeriesError(f"exponents {bad[:5]} not divisible by {factor}")
        new_unit = self.unit * factor if unit is None else Fraction(unit)
        return TruncatedSeries._raw(
            self.rank, self.cap // factor,
            {e // factor: dict(p) for e, p in self._terms.items()}, new_unit)

    # arithmetic
    def _check(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise SeriesError(f"expected TruncatedSeries, got {type(other).__name__}")
        if self.rank != other.rank:
            raise SeriesError(f"rank mismatch: {self.rank} vs {other.rank}")
        if self.unit != other.unit:
            raise SeriesError(f"q-unit mismatch: {self.unit} vs {other.unit}")

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, -other)

    def __neg__(self):
        return TruncatedSeries._raw(
            self.rank, self.cap,
            {e: {m: -c for m, c in p.items()} for e, p in self._terms.items()}, self.unit)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return series_mul(self, other)

    __rmul__ = __mul__

    def scale(self, k: int) -> "TruncatedSeries":
        if k == 0:
            return TruncatedSeries.zero(self.rank, self.cap, self.unit)
        return TruncatedSeries._raw(
            self.rank, self.cap,
            {e: {m: k * c for m, c in p.items()} for e, p in self._terms.items()}, self.unit)

    def exact_div(self, k: int) -> "TruncatedSeries":
        out = {}
        for e, p in self._terms.items():
            q = {}
            for m, c in p.items():
                if c % k:
                    raise SeriesError(f"coefficient {c} at q^{e} not divisible by {k}")
                q[m] = c // k
            out[e] = q
        return TruncatedSeries._raw(self.rank, self.cap, out, self.unit)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.rank == other.rank and self.unit == other.unit
                and self.cap == other.cap and self._terms == other._terms)

    def __hash__(self):
        return hash((self.rank, self.unit, self.cap, tuple(self.items())))

    def __repr__(self):
        body = format_series(self, max_terms=8)
        return f"TruncatedSeries(rank={self.rank}, cap={self.cap}, unit={self.unit}: {body})"

    # serialization
    def to_json(self) -> dict:
        return {
            "unit_num": self.unit.numerator,
            "unit_den": self.unit.denominator,
            "cap": self.cap,
            "rank": self.rank,
            "terms": [
                {"q": e,
                 "monomials": [{"coeff": self._terms[e][m], "exps": list(m)}
                               for m in sorted(self._terms[e])]}
                for e in sorted(self._terms)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedSeries":
        terms = {}
        rank = data.get("rank")
        for t in data["terms"]:
            poly = {}
            for mono in t["monomials"]:
                exps = tuple(int(x) for x in mono["exps"])
                if rank is None:
                    rank = len(exps)
                poly[exps] = int(mono["coeff"])
            terms[int(t["q"])] = poly
        if rank is None:
            raise SeriesError("cannot infer rank of an empty series without a 'rank' field")
        return cls(rank, int(data["cap"]), terms,
                   Fraction(int(data["unit_num"]), int(data["unit_den"])))


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    a._check(b)
    cap = min(a.cap, b.cap)
    out: Dict[int, Polynomial] = {}
    for src in (a, b):
        for e, p in src._terms.items():
            if e > cap:
                continue
            tgt = out.setdefault(e, {})
            _poly_add_into(tgt, p)
    return TruncatedSeries._raw(a.rank, cap, {e: p for e, p in out.items() if p}, a.unit)


def product_cap(a: TruncatedSeries, b: TruncatedSeries) -> int:
    # a is exact through a.cap; unknown terms of a meet b no lower than b's valuation
    return min(a.cap + min(0, b.valuation()), b.cap + min(0, a.valuation()))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    a._check(b)
    cap = product_cap(a, b)
    out: Dict[int, Polynomial] = {}
    bt = sorted(b._terms.items())
    for ea, pa in a._terms.items():
        for eb, pb in bt:
            e = ea + eb
            if e > cap:
                break
            tgt = out.setdefault(e, {})
            for ma, ca in pa.items():
                for mb, cb in pb.items():
                    m = tuple(x + y for x, y in zip(ma, mb))
                    v = tgt.get(m, 0) + ca * cb
                    if v:
                        tgt[m] = v
                    else:
                        del tgt[m]
    return TruncatedSeries._raw(a.rank, cap, {e: p for e, p in out.items() if p}, a.unit)


def mul_binomial(s: TruncatedSeries, coeff: int, mono: Monomial, q_exp: int,
                 cap=None) -> TruncatedSeries:
    """s * (1 + coeff * mono * q^q_exp), truncated at ``cap`` (default s.cap)."""
    cap = s.cap if cap is None else cap
    out: Dict[int, Polynomial] = {e: dict(p) for e, p in s._terms.items() if e <= cap}
    for e, p in s._terms.items():
        e2 = e + q_exp
        if e2 > cap:
            continue
        tgt = out.setdefault(e2, {})
        for m, c in p.items():
            m2 = tuple(x + y for x, y in zip(m, mono))
            v = tgt.get(m2, 0) + coeff * c
            if v:
                tgt[m2] = v
            else:
                del tgt[m2]
    return TruncatedSeries._raw(s.rank, cap, {e: p for e, p in out.items() if p}, s.unit)


def poch_expand(sign: int, mono: Monomial, j: int, step: int, cap: int,
                unit=Fraction(1)) -> TruncatedSeries:
    """prod_{k>=0} (1 - sign * mono * q^(j + k*step)), exact through q^cap.

    sign = -1 gives (-mono q^j; q^step)_inf. A negative ``j`` is allowed:
    the product then starts below q^0 and every factor that can still
    reach the window (after pairing with the negative ones) is included.
    """
    if sign not in (1, -1):
        raise SeriesError("sign must be +1 or -1")
    if step <= 0:
        raise SeriesError(f"step must be positive, got {step}")
    rank = len(mono)
    exps = []
    k = 0
    while j + k * step < 0:
        exps.append(j + k * step)
        k += 1
    floor = sum(exps)
    reach = cap - floor
    while j + k * step <= reach:
        exps.append(j + k * step)
        k += 1
    # negative factors first; after them every factor only raises exponents
    neg_left = floor
    s = TruncatedSeries.one(rank, reach, unit)
    for e in exps:
        if e < 0:
            neg_left -= e
        s = mul_binomial(s, -sign, mono, e, cap=cap - neg_left)
    return TruncatedSeries._raw(rank, cap, s._terms, s.unit) if s.cap != cap else s


def even_extract(s: TruncatedSeries, subset: Iterable[int]) -> TruncatedSeries:
    """Keep the terms whose total degree in the colour slots ``subset`` is even."""
    idx = sorted(set(subset))
    for i in idx:
        if not 0 <= i < s.rank:
            raise SeriesError(f"slot {i} outside 0..{s.rank - 1}")
    out = {}
    for e, p in s._terms.items():
        kept = {m: c for m, c in p.items() if sum(m[i] for i in idx) % 2 == 0}
        if kept:
            out[e] = kept
    return TruncatedSeries._raw(s.rank, s.cap, out, s.unit)


def specialize(s: TruncatedSeries, assignment: Mapping[int, int]) -> TruncatedSeries:
    """Substitute c_slot -> value (value in {+1, -1}) and collect terms."""
    for slot, v in assignment.items():
        if not 0 <= slot < s.rank:
            raise SeriesError(f"slot {slot} outside 0..{s.rank - 1}")
        if v not in (1, -1):
            raise SeriesError(f"only +1/-1 substitutions are supported, got {v}")
    out = {}
    for e, p in s._terms.items():
        tgt: Polynomial = {}
        for m, c in p.items():
            sign = 1
            m2 = list(m)
            for slot, v in assignment.items():
                if v == -1 and m2[slot] % 2:
                    sign = -sign
                m2[slot] = 0
            key = tuple(m2)
            val = tgt.get(key, 0) + sign * c
            if val:
                tgt[key] = val
            else:
                del tgt[key]
        if tgt:
            out[e] = tgt
    return TruncatedSeries._raw(s.rank, s.cap, out, s.unit)


def flip_signs(s: TruncatedSeries, subset: Iterable[int]) -> TruncatedSeries:
    """G(c) -> G(c') where c'_i = -c_i for i in subset."""
    idx = sorted(set(subset))
    out = {}
    for e, p in s._terms.items():
        out[e] = {m: (-c if sum(m[i] for i in idx) % 2 else c) for m, c in p.items()}
    return TruncatedSeries._raw(s.rank, s.cap, out, s.unit)


def inverse_poch(j: int, step: int, rank: int, cap: int, unit=Fraction(1)) -> TruncatedSeries:
    """1 / (q^j; q^step)_inf for j >= 1: partitions into parts j + k*step."""
    if j <= 0 or step <= 0:
        raise SeriesError("inverse_poch needs j >= 1 and step >= 1")
    counts = [0] * (cap + 1) if cap >= 0 else []
    if cap >= 0:
        counts[0] = 1
        for part in range(j, cap + 1, step):
            for w in range(part, cap + 1):
                counts[w] += counts[w - part]
    one = unit_monomial(rank)
    return TruncatedSeries(rank, cap, {w: {one: c} for w, c in enumerate(counts) if c}, unit)


def inverse_poch_q(d: int, rank: int, cap: int, unit=Fraction(1)) -> TruncatedSeries:
    """1 / (q^d; q^d)_inf: partitions into parts divisible by d, through q^cap."""
    if d <= 0:
        raise SeriesError("d must be positive")
    return inverse_poch(d, d, rank, cap, unit)


def _fmt_mono(m: Monomial) -> str:
    parts = []
    for i, x in enumerate(m):
        if x == 1:
            parts.append(f"c{i}")
        elif x:
            parts.append(f"c{i}^{x}")
    return "*".join(parts)


def format_poly(p: Mapping[Monomial, int]) -> str:
    if not p:
        return "0"
    out = []
    for m in sorted(p):
        c = p[m]
        body = _fmt_mono(m)
        if not body:
            out.append(str(c))
        elif c == 1:
            out.append(body)
        elif c == -1:
            out.append("-" + body)
        else:
            out.append(f"{c}*{body}")
    return " + ".join(out).replace("+ -", "- ")


def format_series(s: TruncatedSeries, max_terms=None) -> str:
    chunks = []
    for e in s.exponents():
        chunks.append(f"({format_poly(s._terms[e])})*q^{e}")
        if max_terms is not None and len(chunks) >= max_terms:
            chunks.append("...")
            break
    return " + ".join(chunks) if chunks else "0"

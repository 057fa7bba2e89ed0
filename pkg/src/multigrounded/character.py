"""Characters three ways: partition sums, closed-form products, path sums."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .crystal import DEFAULT_CONVENTION, PerfectCrystal, build_family
from .energy import (EnergyFunction, GroundIntegers, NormalizedEnergy, ground_integers,
                     normalize, solve_energy)
from .mgp import (EXACT, FLEX, EnumerationUnstable, Ground, SweepTelemetry, character_dp, iter_mgp,
                  MultiGroundedPartition,
                  phi_d_forward, phi_d_inverse, phi_forward, phi_inverse)
from .paths import (GroundStatePath, WEIGHT_TAGS, enumerate_paths, ground_state_path, kmn_weight,
                    path_sum, path_weight, weight_from_tag)
from .series import (TruncatedSeries, basis_monomial, even_extract, flip_signs, inverse_poch,
                     poch_expand, series_add, series_mul, specialize,
                     unit_monomial)


def seed_for(family: str, crystal: PerfectCrystal):
    """The normalisation used in the printed matrices."""
    n = crystal.n
    ix = crystal.index
    if family in ("A2n_2", "Dnp1_2", "Bn_1"):
        return (ix("0"), ix("0")), 0
    if family == "A2nm1_2":
        return (ix("1"), ix("1bar")), -1
    if family == "Dn_1":
        return (ix(f"{n}bar"), ix(str(n))), 0
    raise ValueError(f"no default seed for {family}")


def display_order(family: str, n: int) -> List[str]:
    ups = [str(u) for u in range(1, n + 1)]
    downs = [f"{u}bar" for u in range(n, 0, -1)]
    return {
        "A2n_2": ups + downs + ["0"],
        "Dnp1_2": ups + ["0bar"] + downs + ["0"],
        "A2nm1_2": ups + downs,
        "Bn_1": ups + ["0"] + downs,
        "Dn_1": ups + downs,
    }[family]


MODULE_WEIGHTS = {
    "A2n_2": ("L0",),
    "Dnp1_2": ("L0", "Ln"),
    "A2nm1_2": ("L0", "L1"),
    "Bn_1": ("L0", "L1", "Ln"),
    "Dn_1": ("L0", "L1", "Ln-1", "Ln"),
}


def default_d(family: str, weight: str) -> int:
    return 1 if family == "Dn_1" and weight in ("Ln-1", "Ln") else 2


@dataclass(frozen=True)
class ModuleDescriptor:
    family: str
    n: int
    weight: str
    crystal: PerfectCrystal
    H: EnergyFunction
    gsp: GroundStatePath
    energy: NormalizedEnergy
    u: GroundIntegers
    d: int

    @property
    def D(self) -> int:
        return self.energy.D

    @property
    def t(self) -> int:
        return self.gsp.t

    @property
    def unit(self) -> Fraction:
        """Internal q step as a fraction of the null root."""
        return Fraction(1, self.crystal.d0 * self.D)

    @property
    def ground(self) -> Ground:
        return Ground(self.gsp.g, self.u.u)

    @property
    def rank(self) -> int:
        return self.crystal.colour_rank

    @property
    def dh(self):
        return self.energy.dh_lambda

    def label(self) -> str:
        return f"{self.family} n={self.n} {self.weight}"


def build_module(family: str, n: int, weight: str, d: Optional[int] = None,
                 D: Optional[int] = None, crystal: Optional[PerfectCrystal] = None,
                 convention: str = DEFAULT_CONVENTION) -> ModuleDescriptor:
    if crystal is None:
        crystal = build_family(family, n)
        seed_pair, seed_value = seed_for(family, crystal)
    else:
        seed_pair, seed_value = (0, 0), 0
    if weight not in WEIGHT_TAGS:
        raise ValueError(f"unknown weight {weight!r}; expected one of {', '.join(WEIGHT_TAGS)}")
    H = solve_energy(crystal, seed_pair, seed_value, convention)
    gsp = ground_state_path(crystal, weight_from_tag(weight, crystal.n))
    ne = normalize(H, gsp, D)
    u = ground_integers(ne, gsp)
    if d is None:
        d = default_d(family, weight)
    if d < 1:
        raise ValueError("d must be positive")
    return ModuleDescriptor(family, crystal.n, weight, crystal, H, gsp, ne, u, d)


# ---------------------------------------------------------------------------
# stability sweeps


@dataclass
class StabilityPolicy:
    start: int = 4
    ceiling: int = 512


def _sweep(compute, start, ceiling, what):
    tel = SweepTelemetry()
    prev = None
    size = start
    while size <= ceiling:
        cur = compute(size)
        tel.caps.append(size)
        tel.counts.append(cur.num_terms())
        if prev is not None and cur == prev:
            tel.converged = True
            return cur, tel
        prev = cur
        size *= 2
    raise EnumerationUnstable(f"{what} did not settle below {ceiling}", tel.as_dict())


def _series_from_map(md: ModuleDescriptor, cap: int, terms) -> TruncatedSeries:
    return TruncatedSeries(md.rank, cap, terms, md.unit)


def character_enumerative(md: ModuleDescriptor, cap: int,
                          policy: StabilityPolicy = StabilityPolicy(),
                          telemetry: Optional[dict] = None) -> TruncatedSeries:
    """sum of C(pi) q^|pi| over minimal partitions with part count divisible by t."""
    def compute(parts):
        return _series_from_map(md, cap, character_dp(
            md.dh, md.ground, md.crystal.elements, md.crystal.colours, EXACT, 1, cap, parts))
    start = max(md.t, policy.start - policy.start % md.t)
    s, tel = _sweep(compute, start, policy.ceiling, "partition sweep")
    if telemetry is not None:
        telemetry["enumerative"] = tel.as_dict()
    return s


def character_flexible(md: ModuleDescriptor, cap: int, d: Optional[int] = None,
                       policy: StabilityPolicy = StabilityPolicy(),
                       telemetry: Optional[dict] = None) -> TruncatedSeries:
    d = md.d if d is None else d

    def compute(parts):
        return _series_from_map(md, cap, character_dp(
            md.dh, md.ground, md.crystal.elements, md.crystal.colours, FLEX, d, cap, parts))
    start = max(md.t, policy.start - policy.start % md.t)
    s, tel = _sweep(compute, start, policy.ceiling, "flexible partition sweep")
    if telemetry is not None:
        telemetry["flexible"] = tel.as_dict()
    return s


def path_character_oracle(md: ModuleDescriptor, cap: int, L0: Optional[int] = None,
                          ceiling: int = 1024, telemetry: Optional[dict] = None) -> TruncatedSeries:
    """sum over lambda-paths of e^{-lambda + wt p}, with the raw energy H.

    Paths are cut at a fixed length that is doubled until two sweeps agree.
    """

    def compute(length):
        return TruncatedSeries(md.rank, cap, path_sum(md.H, md.gsp, md.D, length, cap), md.unit)

    t = md.t
    start = L0 if L0 is not None else max(2 * t, t * (-(-max(cap, 1) // t)))
    start = max(t, start - start % t)
    s, tel = _sweep(compute, start, ceiling, "path sweep")
    if telemetry is not None:
        telemetry["paths"] = tel.as_dict()
    return s


# ---------------------------------------------------------------------------
# closed-form right-hand sides, as data


@dataclass(frozen=True)
class Factor:
    """One Pochhammer factor prod_k (1 - sign * c_slot^power q^(j + k step)).

    slot None means the unit monomial.  ``inverse`` puts it in a denominator
    (only for unit monomials).
    """
    sign: int
    slot: Optional[int]
    power: int
    j: int
    step: int
    inverse: bool = False


@dataclass(frozen=True)
class ProductFormula:
    family: str
    weight: str
    q_unit: Fraction                 # theorem's q = exp(-q_unit * delta)
    factors: Tuple[Factor, ...]
    even_slots: Tuple[int, ...] = ()
    set_to_one: Tuple[int, ...] = ()


def _pair(k, j_plus, j_minus, step=2):
    return (Factor(-1, k, 1, j_plus, step), Factor(-1, k, -1, j_minus, step))


def theorem_formula(theorem: str, n: int) -> ProductFormula:
    half, whole = Fraction(1, 2), Fraction(1)
    all_slots = tuple(range(1, n + 1))
    plain = tuple(f for k in range(1, n + 1) for f in _pair(k, 1, 1))
    shifted = _pair(1, 3, -1) + tuple(f for k in range(2, n + 1) for f in _pair(k, 1, 1))
    odd_parts = Factor(1, None, 0, 1, 2, inverse=True)
    q2q4 = Factor(1, None, 0, 2, 4)
    c0 = Factor(-1, 0, 1, 1, 2)
    evens = tuple(f for k in range(1, n) for f in _pair(k, 2, 0))
    table = {
        "1.2": ProductFormula("A2n_2", "L0", half, plain),
        "1.3a": ProductFormula("Dnp1_2", "L0", whole, (odd_parts,) + plain),
        "1.3b": ProductFormula("Dnp1_2", "Ln", whole,
                               (odd_parts,) + tuple(f for k in range(1, n + 1) for f in _pair(k, 2, 0))),
        "1.4a": ProductFormula("A2nm1_2", "L0", half, (q2q4,) + plain, all_slots),
        "1.4b": ProductFormula("A2nm1_2", "L1", half, (q2q4,) + shifted, all_slots),
        "1.5a": ProductFormula("Bn_1", "L0", half, (c0,) + plain, (0,) + all_slots, (0,)),
        "1.5b": ProductFormula("Bn_1", "L1", half, (c0,) + shifted, (0,) + all_slots, (0,)),
        "1.6a": ProductFormula("Dn_1", "L0", half, plain, all_slots),
        "1.6b": ProductFormula("Dn_1", "L1", half, shifted, all_slots),
        "1.6c": ProductFormula("Dn_1", "Ln-1", half, _pair(n, 0, 2) + evens, all_slots),
        "1.6d": ProductFormula("Dn_1", "Ln", half, _pair(n, 2, 0) + evens, all_slots),
    }
    if theorem not in table:
        raise KeyError(f"unknown theorem {theorem!r}; expected one of {', '.join(THEOREMS)}")
    return table[theorem]


THEOREMS = ("1.2", "1.3a", "1.3b", "1.4a", "1.4b", "1.5a", "1.5b", "1.6a", "1.6b", "1.6c", "1.6d")


def _factor_valuation(f: Factor) -> int:
    """Lowest q-exponent the factor can contribute (sum of its negative exponents)."""
    if f.inverse:
        return 0
    total, e = 0, f.j
    while e < 0:
        total += e
        e += f.step
    return total


def _expand_factor(f: Factor, rank: int, cap: int, unit) -> TruncatedSeries:
    if f.inverse:
        if f.slot is not None or f.sign != 1:
            raise ValueError("only (q^j; q^step) may appear in a denominator")
        return inverse_poch(f.j, f.step, rank, cap, unit)
    mono = unit_monomial(rank) if f.slot is None else basis_monomial(rank, f.slot, f.power)
    return poch_expand(f.sign, mono, f.j, f.step, cap, unit)


def _raw_product(factors: Sequence[Factor], rank: int, cap: int, unit,
                 perturb: Optional[int] = None) -> TruncatedSeries:
    vals = [_factor_valuation(f) for f in factors]
    floor = sum(vals)
    out = TruncatedSeries.one(rank, cap - floor, unit)
    for i, f in enumerate(factors):
        if perturb is not None and i == perturb:
            f = Factor(f.sign, f.slot, f.power, f.j, f.step * 2, f.inverse)
        # the other factors can pull terms down by at most floor - vals[i]
        out = series_mul(out, _expand_factor(f, rank, cap - (floor - vals[i]), unit))
    return out.truncate(cap)


def product_series(formula: ProductFormula, n: int, cap: int,
                   perturb: Optional[int] = None, explicit_even: bool = False) -> TruncatedSeries:
    """Expansion of the right-hand side in the theorem's own q, through q^cap.

    ``perturb`` doubles the step of one factor (negative control).
    ``explicit_even`` uses the half-sum of sign-flipped products instead of E.
    """
    rank = n + 1
    unit = formula.q_unit
    s = _raw_product(formula.factors, rank, cap, unit, perturb)
    if formula.even_slots:
        if explicit_even:
            s = series_add(s, flip_signs(s, formula.even_slots)).exact_div(2)
        else:
            s = even_extract(s, formula.even_slots)
    if formula.set_to_one:
        s = specialize(s, {slot: 1 for slot in formula.set_to_one})
    return s


def character_product(theorem: str, n: int, cap: int, perturb: Optional[int] = None,
                      explicit_even: bool = False) -> TruncatedSeries:
    return product_series(theorem_formula(theorem, n), n, cap, perturb, explicit_even)


def align_factor(internal_unit: Fraction, theorem_unit: Fraction) -> int:
    """k such that internal exponent e equals theorem exponent k*e."""
    ratio = Fraction(internal_unit) / Fraction(theorem_unit)
    if ratio.denominator != 1:
        raise ValueError(f"theorem unit {theorem_unit} is coarser than the internal unit "
                         f"{internal_unit}")
    return int(ratio)


def product_in_internal_units(theorem: str, md: ModuleDescriptor, cap: int,
                              perturb: Optional[int] = None) -> TruncatedSeries:
    formula = theorem_formula(theorem, md.n)
    k = align_factor(md.unit, formula.q_unit)
    s = product_series(formula, md.n, cap * k, perturb)
    return s.contract_exponents(k) if k > 1 else s


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    theorem: str
    n: int
    cap: int
    equal: bool
    first_diff: Optional[dict] = None
    timings: Dict[str, float] = field(default_factory=dict)
    telemetry: Dict[str, dict] = field(default_factory=dict)

    def to_json(self, timings: bool = True) -> dict:
        out = {"theorem": self.theorem, "n": self.n, "cap": self.cap, "equal": self.equal,
               "first_diff": self.first_diff, "telemetry": self.telemetry}
        if timings:
            out["timings"] = self.timings
        return out


def _mono_str(m) -> str:
    return "*".join(f"c{i}^{x}" for i, x in enumerate(m) if x) or "1"


def first_difference(a: TruncatedSeries, b: TruncatedSeries) -> Optional[dict]:
    """First q-exponent where a (expected) and b (found) differ."""
    cap = min(a.cap, b.cap)
    for e in sorted(set(a.exponents()) | set(b.exponents())):
        if e > cap:
            break
        pa, pb = a.coefficient(e), b.coefficient(e)
        if pa != pb:
            missing = [{"coeff": pa[m] - pb.get(m, 0), "monomial": _mono_str(m)}
                       for m in sorted(pa) if pa[m] > pb.get(m, 0)]
            extra = [{"coeff": pb[m] - pa.get(m, 0), "monomial": _mono_str(m)}
                     for m in sorted(pb) if pb[m] > pa.get(m, 0)]
            return {"q": e, "missing": missing, "extra": extra}
    return None


def module_for_theorem(theorem: str, n: int, d: Optional[int] = None) -> ModuleDescriptor:
    f = theorem_formula(theorem, n)
    return build_module(f.family, n, f.weight, d)


def verify_theorem(theorem: str, n: int, cap: int, perturb: Optional[int] = None,
                   policy: StabilityPolicy = StabilityPolicy()) -> VerificationReport:
    md = module_for_theorem(theorem, n)
    tel: Dict[str, dict] = {}
    t0 = time.perf_counter()
    lhs = character_enumerative(md, cap, policy, tel)
    t1 = time.perf_counter()
    rhs = product_in_internal_units(theorem, md, cap, perturb)
    t2 = time.perf_counter()
    diff = first_difference(rhs, lhs)
    return VerificationReport(theorem, n, cap, diff is None, diff,
                              {"enumerative": round(t1 - t0, 4), "product": round(t2 - t1, 4)},
                              tel)


# ---------------------------------------------------------------------------
# bijection sweeps


def bijection_suite(md: ModuleDescriptor, L: int, cap: int,
                    policy: StabilityPolicy = StabilityPolicy()) -> dict:
    """Round-trip phi on every path with defect < L, and Phi_d on every
    flexible partition of weight <= cap.

    The flexible partitions are streamed, not stored.  Their number is
    checked against the coefficient sum of the (independently swept)
    flexible character, so a silently truncated stream shows up.
    """
    paths = enumerate_paths(md.crystal, md.gsp, L)
    colours = md.crystal.colours
    phi_ok = transport_ok = 0
    for p in paths:
        pi = phi_forward(p, md.dh, md.ground)
        if phi_inverse(pi, md.dh, md.gsp).canonical() == p:
            phi_ok += 1
        w = path_weight(p, md.energy, md.gsp)
        if w == (pi.weight, pi.colour(colours)) and kmn_weight(p.prefix, md.H, md.gsp, md.D) == w:
            transport_ok += 1

    tel: Dict[str, dict] = {}
    flex = character_flexible(md, cap, policy=policy, telemetry=tel)
    expected = sum(c for _, _, c in flex.items())
    parts_cap = tel["flexible"]["caps"][-1]
    seen = 1   # the bare ground, which iter_mgp does not yield
    phid_ok = int(_phi_d_roundtrip(MultiGroundedPartition((), md.ground), md, check=True))
    for pi in iter_mgp(md.dh, md.ground, md.crystal.elements, FLEX, md.d, cap, parts_cap):
        seen += 1
        phid_ok += _phi_d_roundtrip(pi, md)
    return {"paths": len(paths), "phi_roundtrips": phi_ok, "weight_transport": transport_ok,
            "flexible_partitions": seen, "expected_flexible": expected,
            "phi_d_roundtrips": phid_ok, "telemetry": tel,
            "ok": (phi_ok == transport_ok == len(paths) and seen == expected
                   and phid_ok == seen)}


def _phi_d_roundtrip(pi, md: ModuleDescriptor, check: bool = False) -> bool:
    pair = phi_d_forward(pi, md.d, md.dh, md.gsp, check=check)
    if pi.weight != pair.minimal.weight + pair.free_weight:
        return False
    return phi_d_inverse(pair, md.d, md.dh, check=check) == pi

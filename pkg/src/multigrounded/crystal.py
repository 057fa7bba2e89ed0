"""Level-one perfect crystals given as labelled arrow lists, plus the
tensor-product crystal structure on B (x) B.

Elements are dense integer ids; ``labels[id]`` is "0", "0bar", "u" or "ubar".
A pair (left, right) stands for left (x) right.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .series import Monomial, basis_monomial, mono_inv, unit_monomial

FAMILIES = ("A2n_2", "Dnp1_2", "A2nm1_2", "Bn_1", "Dn_1")
FAMILY_MIN_N = {"A2n_2": 2, "Dnp1_2": 2, "A2nm1_2": 3, "Bn_1": 3, "Dn_1": 4}

KASHIWARA = "kashiwara"
ANTI_KASHIWARA = "anti-kashiwara"
CONVENTIONS = (KASHIWARA, ANTI_KASHIWARA)
# Reproduces every printed energy matrix; see tests/test_energy.py.
DEFAULT_CONVENTION = KASHIWARA


class CrystalError(ValueError):
    pass


def bar(u) -> str:
    return f"{u}bar"


def pretty(label: str) -> str:
    """'3bar' -> '3̄' for table output."""
    if label.endswith("bar"):
        return label[:-3] + "̄"
    return label


@dataclass(frozen=True)
class PerfectCrystal:
    name: str
    n: int
    d0: int
    labels: Tuple[str, ...]
    arrows: Tuple[Tuple[int, int, int], ...]   # (source, index, target) for f_index
    colours: Tuple[Monomial, ...]
    null_root: Optional[Tuple[Fraction, ...]] = None
    colour_roots: Optional[Dict[int, Tuple[Fraction, ...]]] = None
    _f: Dict[Tuple[int, int], int] = field(default_factory=dict, repr=False, compare=False)
    _e: Dict[Tuple[int, int], int] = field(default_factory=dict, repr=False, compare=False)
    _eps: List[Tuple[int, ...]] = field(default_factory=list, repr=False, compare=False)
    _phi: List[Tuple[int, ...]] = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        size = len(self.labels)
        if len(set(self.labels)) != size:
            raise CrystalError("element labels must be unique")
        if len(self.colours) != size:
            raise CrystalError("one colour monomial per element is required")
        for src, i, dst in self.arrows:
            if not (0 <= src < size and 0 <= dst < size):
                raise CrystalError(f"arrow {src}->{dst} references an unknown element")
            if not 0 <= i <= self.n:
                raise CrystalError(f"arrow index {i} outside 0..{self.n}")
            if (src, i) in self._f:
                raise CrystalError(f"two {i}-arrows leave {self.labels[src]}")
            if (dst, i) in self._e:
                raise CrystalError(f"two {i}-arrows enter {self.labels[dst]}")
            self._f[(src, i)] = dst
            self._e[(dst, i)] = src
        for b in range(size):
            self._eps.append(tuple(self._chain(b, i, self._e) for i in range(self.rank)))
            self._phi.append(tuple(self._chain(b, i, self._f) for i in range(self.rank)))

    def _chain(self, b, i, arrows):
        k, cur, seen = 0, b, {b}
        while (cur, i) in arrows:
            cur = arrows[(cur, i)]
            if cur in seen:
                raise CrystalError(f"{i}-arrows form a cycle through {self.labels[b]}")
            seen.add(cur)
            k += 1
        return k

    @property
    def rank(self) -> int:
        """Number of Kashiwara indices (0..n)."""
        return self.n + 1

    @property
    def colour_rank(self) -> int:
        return len(self.colours[0]) if self.colours else 0

    def __len__(self):
        return len(self.labels)

    @property
    def elements(self) -> range:
        return range(len(self.labels))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise CrystalError(f"no element labelled {label!r} in {self.name}") from None

    def f(self, b: int, i: int) -> Optional[int]:
        return self._f.get((b, i))

    def e(self, b: int, i: int) -> Optional[int]:
        return self._e.get((b, i))

    def eps(self, b: int, i: int) -> int:
        return self._eps[b][i]

    def phi(self, b: int, i: int) -> int:
        return self._phi[b][i]

    def eps_phi(self, b: int, i: int) -> Tuple[int, int]:
        return self._eps[b][i], self._phi[b][i]

    def eps_vec(self, b: int) -> Tuple[int, ...]:
        return self._eps[b]

    def phi_vec(self, b: int) -> Tuple[int, ...]:
        return self._phi[b]

    def weight(self, b: int) -> Tuple[int, ...]:
        """Classical weight phi(b) - eps(b) in fundamental-weight coordinates."""
        return tuple(p - e for p, e in zip(self._phi[b], self._eps[b]))

    def classical_weight(self, b: int) -> Tuple[Tuple[int, ...], Monomial]:
        return self.weight(b), self.colours[b]

    def elements_with_phi(self, lam: Sequence[int]) -> List[int]:
        lam = tuple(lam)
        return [b for b in self.elements if self._phi[b] == lam]

    def elements_with_eps(self, lam: Sequence[int]) -> List[int]:
        lam = tuple(lam)
        return [b for b in self.elements if self._eps[b] == lam]

    def simple_root(self, i: int) -> Tuple[int, ...]:
        """alpha_i in fundamental-weight coordinates, read off any i-arrow."""
        for (src, j), dst in self._f.items():
            if j == i:
                return tuple(a - b for a, b in zip(self.weight(src), self.weight(dst)))
        raise CrystalError(f"no {i}-arrow in {self.name}")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "d0": self.d0,
            "elements": list(self.labels),
            "arrows": [{"from": self.labels[s], "label": i, "to": self.labels[t]}
                       for s, i, t in self.arrows],
            "colour_monomials": {self.labels[b]: list(self.colours[b]) for b in self.elements},
        }


def weight_vector(n: int, **coeffs) -> Tuple[int, ...]:
    """weight_vector(n, L0=1) -> (1, 0, ..., 0) of length n + 1."""
    v = [0] * (n + 1)
    for key, c in coeffs.items():
        v[int(key[1:])] += c
    return tuple(v)


def fundamental_weight(n: int, i: int) -> Tuple[int, ...]:
    v = [0] * (n + 1)
    v[i] = 1
    return tuple(v)


# ---------------------------------------------------------------------------
# the five families


def _family_data(family: str, n: int):
    """Edge list, labels, d0, null root and colour roots for a family."""
    ups = [str(u) for u in range(1, n + 1)]
    downs = [bar(u) for u in range(n, 0, -1)]
    chain = [(str(u), u, str(u + 1)) for u in range(1, n)]
    chain += [(bar(u + 1), u, bar(u)) for u in range(1, n)]
    half = Fraction(1, 2)

    def roots_from(start, coeff):
        # c_u = sum_{i >= u} coeff(i) alpha_i
        return {u: tuple(coeff(i) if i >= u else Fraction(0) for i in range(n + 1))
                for u in range(start, n + 1)}

    if family == "A2n_2":
        labels = ["0"] + ups + downs
        edges = [("0", 0, "1"), (bar(1), 0, "0")] + chain + [(str(n), n, bar(n))]
        d0 = 2
        null = [2] * n + [1]
        roots = roots_from(1, lambda i: half if i == n else Fraction(1))
    elif family == "Dnp1_2":
        labels = ["0"] + ups + ["0bar"] + downs
        edges = ([("0", 0, "1"), (bar(1), 0, "0")] + chain
                 + [(str(n), n, "0bar"), ("0bar", n, bar(n))])
        d0 = 1
        null = [1] * (n + 1)
        roots = roots_from(1, lambda i: Fraction(1))
    elif family == "A2nm1_2":
        labels = ups + downs
        edges = [(bar(2), 0, "1"), (bar(1), 0, "2")] + chain + [(str(n), n, bar(n))]
        d0 = 1
        null = [1, 1] + [2] * (n - 2) + [1]
        roots = roots_from(1, lambda i: half if i == n else Fraction(1))
    elif family == "Bn_1":
        labels = ups + ["0"] + downs
        edges = ([(bar(2), 0, "1"), (bar(1), 0, "2")] + chain
                 + [(str(n), n, "0"), ("0", n, bar(n))])
        d0 = 1
        null = [1, 1] + [2] * (n - 1)
        roots = roots_from(1, lambda i: Fraction(1))
    elif family == "Dn_1":
        labels = ups + downs
        chain_d = [(str(u), u, str(u + 1)) for u in range(1, n - 1)]
        chain_d += [(bar(u + 1), u, bar(u)) for u in range(1, n - 1)]
        chain_d += [(str(n - 1), n - 1, str(n)), (bar(n), n - 1, bar(n - 1))]
        edges = ([(bar(2), 0, "1"), (bar(1), 0, "2")] + chain_d
                 + [(str(n - 1), n, bar(n)), (str(n), n, bar(n - 1))])
        d0 = 1
        null = [1, 1] + [2] * (n - 3) + [1, 1]
        roots = roots_from(1, lambda i: half if i >= n - 1 else Fraction(1))
        # eps_n = (alpha_n - alpha_{n-1}) / 2
        roots[n] = tuple(-half if i == n - 1 else half if i == n else Fraction(0)
                         for i in range(n + 1))
    else:
        raise CrystalError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    return labels, edges, d0, tuple(Fraction(x) for x in null), roots


def build_family(family: str, n: int) -> PerfectCrystal:
    if family not in FAMILY_MIN_N:
        raise CrystalError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if n < FAMILY_MIN_N[family]:
        raise CrystalError(f"{family} needs n >= {FAMILY_MIN_N[family]}, got {n}")
    labels, edges, d0, null, roots = _family_data(family, n)
    pos = {lab: k for k, lab in enumerate(labels)}
    # colour slots 0..n; slot u carries c_u, slot 0 is reserved for c_0
    colours = []
    for lab in labels:
        if lab in ("0", "0bar"):
            colours.append(unit_monomial(n + 1))
        elif lab.endswith("bar"):
            colours.append(mono_inv(basis_monomial(n + 1, int(lab[:-3]))))
        else:
            colours.append(basis_monomial(n + 1, int(lab)))
    arrows = tuple((pos[s], i, pos[t]) for s, i, t in edges)
    return PerfectCrystal(f"{family}(n={n})", n, d0, tuple(labels), arrows, tuple(colours),
                          null, roots)


def load_crystal(data) -> PerfectCrystal:
    """Build a crystal from the custom JSON schema (dict, str or path)."""
    if isinstance(data, str):
        if data.lstrip().startswith("{"):
            data = json.loads(data)
        else:
            with open(data) as fh:
                data = json.load(fh)
    try:
        labels = [str(x) for x in data["elements"]]
        n = int(data["n"])
        pos = {lab: k for k, lab in enumerate(labels)}
        arrows = tuple((pos[a["from"]], int(a["label"]), pos[a["to"]]) for a in data["arrows"])
        cm = data["colour_monomials"]
        colours = tuple(tuple(int(x) for x in cm[lab]) for lab in labels)
    except KeyError as exc:
        raise CrystalError(f"crystal JSON is missing or references unknown key {exc}") from None
    if len({len(c) for c in colours}) > 1:
        raise CrystalError("colour monomials must all have the same length")
    crystal = PerfectCrystal(str(data.get("name", "custom")), n, int(data.get("d0", 1)),
                             tuple(labels), arrows, colours)
    validate_crystal(crystal)
    return crystal


def validate_crystal(crystal: PerfectCrystal) -> None:
    """Checks shared by every crystal: monomial involution and B(x)B connectivity."""
    for b in crystal.elements:
        lab = crystal.labels[b]
        if lab.endswith("bar") and lab[:-3] in crystal.labels and lab[:-3] != "0":
            u = crystal.index(lab[:-3])
            if crystal.colours[b] != mono_inv(crystal.colours[u]):
                raise CrystalError(f"colour of {lab} is not the inverse of colour of {lab[:-3]}")
    if not tensor_connected(crystal):
        raise CrystalError("B (x) B is not connected: not a perfect crystal")


# ---------------------------------------------------------------------------
# tensor product B (x) B


def tensor_f(crystal: PerfectCrystal, pair, i: int, convention: str = DEFAULT_CONVENTION):
    b1, b2 = pair
    if convention == KASHIWARA:
        if crystal.phi(b1, i) > crystal.eps(b2, i):
            t = crystal.f(b1, i)
            return None if t is None else (t, b2)
        t = crystal.f(b2, i)
        return None if t is None else (b1, t)
    if convention == ANTI_KASHIWARA:
        if crystal.phi(b2, i) > crystal.eps(b1, i):
            t = crystal.f(b2, i)
            return None if t is None else (b1, t)
        t = crystal.f(b1, i)
        return None if t is None else (t, b2)
    raise CrystalError(f"unknown tensor convention {convention!r}")


def tensor_e(crystal: PerfectCrystal, pair, i: int, convention: str = DEFAULT_CONVENTION):
    b1, b2 = pair
    if convention == KASHIWARA:
        if crystal.phi(b1, i) >= crystal.eps(b2, i):
            t = crystal.e(b1, i)
            return None if t is None else (t, b2)
        t = crystal.e(b2, i)
        return None if t is None else (b1, t)
    if convention == ANTI_KASHIWARA:
        if crystal.phi(b2, i) >= crystal.eps(b1, i):
            t = crystal.e(b2, i)
            return None if t is None else (b1, t)
        t = crystal.e(b1, i)
        return None if t is None else (t, b2)
    raise CrystalError(f"unknown tensor convention {convention!r}")


def tensor_eps_phi(crystal: PerfectCrystal, pair, i: int, convention: str = DEFAULT_CONVENTION):
    """Chain lengths of a pair, obtained by walking tensor arrows."""
    eps = 0
    cur = pair
    while True:
        cur = tensor_e(crystal, cur, i, convention)
        if cur is None:
            break
        eps += 1
    phi = 0
    cur = pair
    while True:
        cur = tensor_f(crystal, cur, i, convention)
        if cur is None:
            break
        phi += 1
    return eps, phi


def tensor_connected(crystal: PerfectCrystal, convention: str = DEFAULT_CONVENTION) -> bool:
    start = (0, 0)
    seen = {start}
    stack = [start]
    while stack:
        p = stack.pop()
        for i in range(crystal.rank):
            for nxt in (tensor_f(crystal, p, i, convention), tensor_e(crystal, p, i, convention)):
                if nxt is not None and nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return len(seen) == len(crystal) ** 2

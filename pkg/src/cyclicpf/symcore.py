"""Symmetric polynomials in finitely many variables.

A ``SymPoly`` stores one coefficient per orbit of monomials, keyed by the
weakly decreasing exponent vector (a partition).  The classical bases, the
Hall inner product, omega, e-skewing and the few plethystic substitutions
needed elsewhere are built on top of it.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from sympy import Matrix, Rational
from sympy.utilities.iterables import multiset_permutations

from .exactalg import QTCoeff, QTRatFun, ONE, T, coeff_to_json


class DegreeExceedsVars(ValueError):
    """A homogeneous piece has degree larger than the number of variables."""


class UnsupportedAlphabet(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def durfee(self) -> int:
        return sum(1 for i, p in enumerate(self, start=1) if p >= i)

    def cells(self) -> Iterator[Tuple[int, int]]:
        """Cells (row, column), 1-based, rows of length self[row-1]."""
        for i, p in enumerate(self, start=1):
            for j in range(1, p + 1):
                yield (i, j)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


class Composition(tuple):
    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"composition parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def __repr__(self) -> str:
        return f"Composition({list(self)})"


def partitions(n: int, max_part: Optional[int] = None, max_len: Optional[int] = None) -> List[Partition]:
    """Partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if max_len is None:
        max_len = n
    out: List[Partition] = []

    def rec(rem: int, cap: int, prefix: Tuple[int, ...]) -> None:
        if rem == 0:
            out.append(Partition(prefix))
            return
        if len(prefix) == max_len:
            return
        for p in range(min(rem, cap), 0, -1):
            rec(rem - p, p, prefix + (p,))

    rec(n, max_part, ())
    return out


def compositions(n: int) -> List[Composition]:
    if n == 0:
        return [Composition()]
    out = []
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            out.append(Composition((first,) + tuple(rest)))
    return out


def z_lambda(lam: Partition) -> int:
    z = 1
    for part in set(lam):
        mult = lam.count(part)
        z *= part ** mult * factorial(mult)
    return z


def is_vertical_strip(outer: Tuple[int, ...], inner: Tuple[int, ...]) -> bool:
    inner = tuple(inner) + (0,) * (len(outer) - len(inner))
    return len(inner) == len(outer) and all(0 <= o - i <= 1 for o, i in zip(outer, inner))


def is_horizontal_strip(outer: Tuple[int, ...], inner: Tuple[int, ...]) -> bool:
    inner = tuple(inner) + (0,) * (len(outer) - len(inner))
    if len(inner) != len(outer):
        return False
    return all(outer[i] >= inner[i] for i in range(len(outer))) and all(
        inner[i] >= outer[i + 1] for i in range(len(outer) - 1)
    )


def vertical_strip_removals(mu: Partition, i: int) -> List[Partition]:
    """Partitions nu with mu/nu a vertical strip of size i."""
    out = []
    rows = range(len(mu))
    for chosen in combinations(rows, i):
        nu = list(mu)
        for r in chosen:
            nu[r] -= 1
        if all(nu[r] >= nu[r + 1] for r in range(len(nu) - 1)):
            out.append(Partition(nu))
    return out


@lru_cache(maxsize=None)
def kostka(lam: Partition, content: Tuple[int, ...]) -> int:
    """Number of semistandard tableaux of shape lam and the given content."""
    content = tuple(content)
    while content and content[-1] == 0:
        content = content[:-1]
    if sum(lam) != sum(content):
        return 0
    if not content:
        return 1
    last = content[-1]
    total = 0
    # the cells holding the largest letter form a horizontal strip
    for inner in _horizontal_inner(lam, last):
        total += kostka(inner, content[:-1])
    return total


def _horizontal_inner(lam: Partition, size: int) -> List[Partition]:
    out = []
    n = len(lam)

    def rec(r: int, rem: int, acc: List[int]) -> None:
        if r == n:
            if rem == 0:
                out.append(Partition(acc))
            return
        lo = lam[r + 1] if r + 1 < n else 0
        for new in range(lam[r], lo - 1, -1):
            take = lam[r] - new
            if take > rem:
                break
            rec(r + 1, rem - take, acc + [new])

    rec(0, size, [])
    return out


@lru_cache(maxsize=None)
def _orbit(lam: Tuple[int, ...], nvars: int) -> Tuple[Tuple[int, ...], ...]:
    padded = list(lam) + [0] * (nvars - len(lam))
    return tuple(tuple(p) for p in multiset_permutations(padded))


@lru_cache(maxsize=None)
def _monomial_product(lam: Tuple[int, ...], mu: Tuple[int, ...], nvars: int) -> Tuple[Tuple[Partition, int], ...]:
    """m_lam * m_mu in nvars variables, as (nu, coefficient) pairs."""
    d = sum(lam) + sum(mu)
    target = sorted(lam)
    out = []
    mu_orbit = _orbit(mu, nvars)
    for nu in partitions(d, max_len=nvars):
        nu_vec = list(nu) + [0] * (nvars - len(nu))
        count = 0
        for beta in mu_orbit:
            alpha = [a - b for a, b in zip(nu_vec, beta)]
            if min(alpha) >= 0 and sorted(a for a in alpha if a) == target:
                count += 1
        if count:
            out.append((nu, count))
    return tuple(out)


def _is_zero(c: object) -> bool:
    return c == 0


class SymPoly:
    """Symmetric polynomial in x_1..x_N, stored on dominant exponent vectors."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Tuple[int, ...], object] | None = None):
        if nvars < 1:
            raise ValueError("need at least one variable")
        self.nvars = nvars
        acc: Dict[Partition, object] = {}
        for lam, c in (terms or {}).items():
            lam = Partition(lam)
            if len(lam) > nvars:
                continue
            acc[lam] = acc[lam] + c if lam in acc else c
        self.terms = {k: v for k, v in acc.items() if not _is_zero(v)}

    @classmethod
    def one(cls, nvars: int) -> "SymPoly":
        return cls(nvars, {(): 1})

    @classmethod
    def zero(cls, nvars: int) -> "SymPoly":
        return cls(nvars)

    def coefficient(self, lam: Iterable[int]) -> object:
        return self.terms.get(Partition(lam), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> List[int]:
        return sorted({sum(k) for k in self.terms})

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def homogeneous_part(self, d: int) -> "SymPoly":
        return SymPoly(self.nvars, {k: v for k, v in self.terms.items() if sum(k) == d})

    def map_coeffs(self, fn) -> "SymPoly":
        return SymPoly(self.nvars, {k: fn(v) for k, v in self.terms.items()})

    def with_nvars(self, nvars: int) -> "SymPoly":
        return SymPoly(nvars, self.terms)

    def _check(self, other: "SymPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable counts differ: {self.nvars} vs {other.nvars}")

    def __add__(self, other: object) -> "SymPoly":
        if not isinstance(other, SymPoly):
            if other == 0:
                return self
            other = SymPoly(self.nvars, {(): other})
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return SymPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "SymPoly":
        return SymPoly(self.nvars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: object) -> "SymPoly":
        return self + (-other)  # type: ignore[operator]

    def __rsub__(self, other: object) -> "SymPoly":
        return (-self) + other

    def __mul__(self, other: object) -> "SymPoly":
        if isinstance(other, SymPoly):
            self._check(other)
            out: Dict[Partition, object] = {}
            for lam, a in self.terms.items():
                for mu, b in other.terms.items():
                    ab = a * b
                    for nu, c in _monomial_product(lam, mu, self.nvars):
                        term = ab * c
                        out[nu] = out[nu] + term if nu in out else term
            return SymPoly(self.nvars, out)
        return SymPoly(self.nvars, {k: v * other for k, v in self.terms.items()})

    def __rmul__(self, other: object) -> "SymPoly":
        return SymPoly(self.nvars, {k: other * v for k, v in self.terms.items()})

    def __pow__(self, e: int) -> "SymPoly":
        out = SymPoly.one(self.nvars)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SymPoly):
            keys = set(self.terms) | set(other.terms)
            return all(self.coefficient(k) == other.coefficient(k) for k in keys)
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms)))

    def expand(self) -> Dict[Tuple[int, ...], object]:
        """Every monomial, keyed by full exponent vector."""
        out = {}
        for lam, c in self.terms.items():
            for v in _orbit(tuple(lam), self.nvars):
                out[v] = c
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return f"SymPoly[{self.nvars}](0)"
        body = " + ".join(f"({v})*m{list(k)}" for k, v in sorted(self.terms.items(), reverse=True))
        return f"SymPoly[{self.nvars}]({body})"

    def to_json(self) -> list:
        return [
            {"xexp": list(k), "coeff": coeff_to_json(v)}
            for k, v in sorted(self.terms.items(), reverse=True)
        ]


BASES = ("m", "e", "h", "p", "s")


@lru_cache(maxsize=None)
def _basis_mono(kind: str, lam: Partition, nvars: int) -> Tuple[Tuple[Partition, object], ...]:
    """m-expansion of a basis element, restricted to partitions of length <= nvars."""
    if kind == "m":
        return ((lam, 1),) if len(lam) <= nvars else ()
    if kind == "s":
        if len(lam) > nvars:
            return ()
        return tuple(
            (nu, kostka(lam, tuple(nu)))
            for nu in partitions(lam.size, max_len=nvars)
            if kostka(lam, tuple(nu))
        )
    if kind in ("e", "h", "p"):
        result = SymPoly.one(nvars)
        for r in lam:
            result = result * _single(kind, r, nvars)
        return tuple(result.terms.items())
    raise ValueError(f"unknown basis {kind!r}")


def _single(kind: str, r: int, nvars: int) -> SymPoly:
    if kind == "e":
        return SymPoly(nvars, {(1,) * r: 1}) if r <= nvars else SymPoly(nvars)
    if kind == "h":
        return SymPoly(nvars, {nu: 1 for nu in partitions(r, max_len=nvars)})
    return SymPoly(nvars, {(r,): 1})


def basis_vector(kind: str, lam: Iterable[int], nvars: int) -> SymPoly:
    if nvars < 1:
        raise ValueError("N must be at least 1")
    return SymPoly(nvars, dict(_basis_mono(kind, Partition(lam), nvars)))


@lru_cache(maxsize=None)
def _inverse_transition(kind: str, d: int) -> Tuple[Tuple[Partition, ...], Tuple[Tuple[Fraction, ...], ...]]:
    """Rows: m_nu expressed in the given basis, for all nu |- d."""
    parts = partitions(d)
    idx = {p: i for i, p in enumerate(parts)}
    mat = [[0] * len(parts) for _ in parts]
    for i, lam in enumerate(parts):
        for nu, c in _basis_mono(kind, lam, max(d, 1)):
            mat[i][idx[nu]] = c
    inv = Matrix([[Rational(x) for x in row] for row in mat]).inv()
    rows = tuple(
        tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(len(parts)))
        for i in range(len(parts))
    )
    return tuple(parts), rows


class BasisExpansion:
    """Coefficients of a symmetric function in one of the bases m, e, h, p, s."""

    __slots__ = ("basis", "coeffs", "nvars")

    def __init__(self, basis: str, coeffs: Mapping[Tuple[int, ...], object], nvars: int):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.basis = basis
        self.coeffs = {Partition(k): v for k, v in coeffs.items() if not _is_zero(v)}
        self.nvars = nvars

    def to_sympoly(self) -> SymPoly:
        out = SymPoly(self.nvars)
        for lam, c in self.coeffs.items():
            out = out + basis_vector(self.basis, lam, self.nvars) * c
        return out

    def coefficient(self, lam: Iterable[int]) -> object:
        return self.coeffs.get(Partition(lam), 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BasisExpansion):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return self.basis == other.basis and all(
            self.coefficient(k) == other.coefficient(k) for k in keys
        )

    def __repr__(self) -> str:
        body = " + ".join(f"({v})*{self.basis}{list(k)}" for k, v in sorted(self.coeffs.items(), reverse=True))
        return f"BasisExpansion({body or 0})"

    def to_json(self) -> dict:
        return {
            "basis": self.basis,
            "coeffs": [
                {"partition": list(k), "value": coeff_to_json(v)}
                for k, v in sorted(self.coeffs.items(), reverse=True)
            ],
        }


def expand_in_basis(f: SymPoly, kind: str) -> BasisExpansion:
    coeffs: Dict[Partition, object] = {}
    for d in f.degrees():
        if d > f.nvars:
            raise DegreeExceedsVars(f"degree {d} component needs at least {d} variables, have {f.nvars}")
        parts, inv = _inverse_transition(kind, d)
        for i, nu in enumerate(parts):
            c = f.terms.get(nu)
            if c is None:
                continue
            for j, lam in enumerate(parts):
                w = inv[i][j]
                if w:
                    term = c * w
                    coeffs[lam] = coeffs[lam] + term if lam in coeffs else term
    return BasisExpansion(kind, coeffs, f.nvars)


def _as_expansion(f: SymPoly | BasisExpansion, kind: str) -> BasisExpansion:
    if isinstance(f, BasisExpansion):
        if f.basis == kind:
            return f
        return expand_in_basis(f.to_sympoly(), kind)
    return expand_in_basis(f, kind)


def inner_product(f: SymPoly, g: SymPoly) -> object:
    df, dg = f.degrees(), g.degrees()
    if len(df) > 1 or len(dg) > 1 or (df and dg and df != dg):
        raise DegreeMismatch(f"inner product needs equal homogeneous degrees, got {df} and {dg}")
    pf, pg = expand_in_basis(f, "p"), expand_in_basis(g, "p")
    total: object = 0
    for lam, a in pf.coeffs.items():
        b = pg.coeffs.get(lam)
        if b is not None:
            total = total + a * b * z_lambda(lam)
    return total


def omega_involution(f: SymPoly | BasisExpansion) -> BasisExpansion:
    fs = _as_expansion(f, "s")
    return BasisExpansion("s", {lam.conjugate(): c for lam, c in fs.coeffs.items()}, fs.nvars)


def skew_by_e(i: int, f: SymPoly | BasisExpansion) -> BasisExpansion:
    if i < 0:
        raise ValueError("i must be nonnegative")
    fs = _as_expansion(f, "s")
    out: Dict[Partition, object] = {}
    for mu, c in fs.coeffs.items():
        for nu in vertical_strip_removals(mu, i):
            out[nu] = out[nu] + c if nu in out else c
    return BasisExpansion("s", out, fs.nvars)


# plethysm -----------------------------------------------------------------

class Alphabet(enum.Enum):
    X = "X"
    ONE_MINUS_T = "(1-t)Y"
    Y_MINUS_Z = "Y-Z"
    HMZ_SHIFT = "X-(q-1)/(qz)"
    A_MINUS_AINV = "a-1/a"


def _p_product(parts: Iterable[int], nvars: int) -> SymPoly:
    return basis_vector("p", Partition(sorted(parts, reverse=True)), nvars)


@lru_cache(maxsize=None)
def _p_in_h(rho: Partition) -> Tuple[Tuple[Partition, Fraction], ...]:
    d = rho.size
    if d == 0:
        return ((Partition(), Fraction(1)),)
    return tuple(expand_in_basis(basis_vector("p", rho, d), "h").coeffs.items())


def plethysm(f: SymPoly | BasisExpansion, alphabet: Alphabet | str):
    """Substitute an alphabet into f.

    Return type depends on the alphabet: a SymPoly for X and (1-t)Y; a map
    (lam, mu) -> coefficient of h_lam[Y] h_mu[Z] for Y-Z; a map
    z-exponent -> SymPoly for the HMZ shift; a map a-exponent -> coefficient
    for a - 1/a.
    """
    try:
        alphabet = Alphabet(alphabet)
    except ValueError:
        raise UnsupportedAlphabet(f"unsupported alphabet {alphabet!r}") from None
    fp = _as_expansion(f, "p")
    nvars = fp.nvars
    if alphabet is Alphabet.X:
        return fp.to_sympoly()
    if alphabet is Alphabet.ONE_MINUS_T:
        out = SymPoly(nvars)
        for rho, c in fp.coeffs.items():
            scale = ONE
            for r in rho:
                scale = scale * (1 - T ** r)
            out = out + _p_product(rho, nvars) * (c * scale)
        return out
    if alphabet is Alphabet.A_MINUS_AINV:
        acc: Dict[int, object] = {}
        for rho, c in fp.coeffs.items():
            poly = {0: 1}
            for r in rho:
                nxt: Dict[int, object] = {}
                for e, v in poly.items():
                    nxt[e + r] = nxt.get(e + r, 0) + v
                    nxt[e - r] = nxt.get(e - r, 0) - v
                poly = nxt
            for e, v in poly.items():
                if v:
                    acc[e] = acc[e] + c * v if e in acc else c * v
        return {e: v for e, v in sorted(acc.items()) if not _is_zero(v)}
    if alphabet is Alphabet.Y_MINUS_Z:
        acc2: Dict[Tuple[Partition, Partition], object] = {}
        for rho, c in fp.coeffs.items():
            idx = range(len(rho))
            for size in range(len(rho) + 1):
                for zset in combinations(idx, size):
                    ypart = Partition(sorted((rho[i] for i in idx if i not in zset), reverse=True))
                    zpart = Partition(sorted((rho[i] for i in zset), reverse=True))
                    sign = -1 if size % 2 else 1
                    for lam, a in _p_in_h(ypart):
                        for mu, b in _p_in_h(zpart):
                            term = c * (sign * a * b)
                            key = (lam, mu)
                            acc2[key] = acc2[key] + term if key in acc2 else term
        return {k: v for k, v in acc2.items() if not _is_zero(v)}
    # HMZ shift: p_k -> p_k - (1 - q^{-k}) z^{-k}
    acc3: Dict[int, SymPoly] = {}
    for rho, c in fp.coeffs.items():
        idx = range(len(rho))
        for size in range(len(rho) + 1):
            for zset in combinations(idx, size):
                weight = ONE
                for i in zset:
                    weight = weight * (QTCoeff.monomial(-rho[i], 0) - 1)
                zexp = -sum(rho[i] for i in zset)
                rest = [rho[i] for i in idx if i not in zset]
                term = _p_product(rest, nvars) * (c * weight)
                acc3[zexp] = acc3[zexp] + term if zexp in acc3 else term
    return {e: v for e, v in sorted(acc3.items()) if not v.is_zero()}

"""Modified Macdonald polynomials, nabla, and the HMZ operators C_a."""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Tuple

from sympy.utilities.iterables import multiset_permutations

from .exactalg import ONE, QTCoeff, QTRatFun
from .symcore import (
    Alphabet,
    Composition,
    Partition,
    SymPoly,
    basis_vector,
    expand_in_basis,
    partitions,
    plethysm,
    skew_by_e,
)


class TooFewVariables(ValueError):
    pass


class SingularTable(ArithmeticError):
    pass


def t_mu(mu: Partition) -> QTCoeff:
    """T_mu: product of t^(i-1) q^(j-1) over the cells (i, j) of mu."""
    qe = sum(j - 1 for _, j in mu.cells())
    te = sum(i - 1 for i, _ in mu.cells())
    return QTCoeff.monomial(qe, te)


def _filling_weight(mu: Partition, filling: Dict[Tuple[int, int], int]) -> Tuple[int, int]:
    """(inv, maj) of a filling, French convention: row 1 is the bottom row."""
    conj = mu.conjugate()
    maj = 0
    arm_sum = 0
    for (i, j), v in filling.items():
        below = filling.get((i - 1, j))
        if below is not None and v > below:
            maj += conj[j - 1] - i + 1  # leg + 1
            arm_sum += mu[i - 1] - j
    inversions = 0
    for (i, j), v in filling.items():
        # same row, cell to the right
        for j2 in range(j + 1, mu[i - 1] + 1):
            if v > filling[(i, j2)]:
                inversions += 1
        # row below, strictly to the left
        if i >= 2:
            for j2 in range(1, min(j - 1, mu[i - 2]) + 1):
                if v > filling[(i - 1, j2)]:
                    inversions += 1
    return inversions - arm_sum, maj


@lru_cache(maxsize=None)
def _htilde_terms(mu: Partition, nvars: int) -> Tuple[Tuple[Partition, QTCoeff], ...]:
    cells = list(mu.cells())
    out = []
    for nu in partitions(mu.size, max_len=nvars):
        word = [letter for letter, mult in enumerate(nu, start=1) for _ in range(mult)]
        acc: Dict[Tuple[int, int], int] = {}
        for perm in multiset_permutations(word):
            w = _filling_weight(mu, dict(zip(cells, perm)))
            acc[w] = acc.get(w, 0) + 1
        out.append((nu, QTCoeff(acc)))
    return tuple(out)


def htilde(mu: Partition | Tuple[int, ...], nvars: int) -> SymPoly:
    """Modified Macdonald polynomial via the inv/maj fillings sum."""
    mu = Partition(mu)
    if nvars < mu.size:
        raise TooFewVariables(f"H~_{list(mu)} needs at least {mu.size} variables")
    return SymPoly(nvars, dict(_htilde_terms(mu, nvars)))


def _solve_inverse(mat: List[List[QTRatFun]]) -> List[List[QTRatFun]]:
    """Inverse by Gauss-Jordan, pivoting on the entry of lowest total degree."""
    size = len(mat)
    a = [row[:] + [QTRatFun(1 if i == j else 0) for j in range(size)] for i, row in enumerate(mat)]

    def weight(x: QTRatFun) -> int:
        terms = x.num.terms
        return min(qe + te for qe, te in terms) + len(terms) + 10 * len(x.den.terms)

    for col in range(size):
        candidates = [r for r in range(col, size) if not a[r][col].is_zero()]
        if not candidates:
            raise SingularTable("Macdonald table is singular")
        piv = min(candidates, key=lambda r: weight(a[r][col]))
        a[col], a[piv] = a[piv], a[col]
        inv = QTRatFun(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(size):
            if r != col and not a[r][col].is_zero():
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [row[size:] for row in a]


class MacdonaldTable:
    """H~_mu for all mu |- d in N variables, with eigenvalues and inverse matrix."""

    def __init__(self, d: int, nvars: int):
        if nvars < d:
            raise TooFewVariables(f"degree {d} table needs at least {d} variables")
        self.degree = d
        self.nvars = nvars
        self.shapes = partitions(d)
        self.entries = {mu: htilde(mu, nvars) for mu in self.shapes}
        self.eigen = {mu: t_mu(mu) for mu in self.shapes}
        mat = [
            [QTRatFun(self.entries[mu].coefficient(nu)) for mu in self.shapes]
            for nu in self.shapes
        ]
        self._inverse = _solve_inverse(mat)

    def coordinates(self, f: SymPoly) -> Dict[Partition, QTRatFun]:
        """Coefficients c_mu with f = sum c_mu H~_mu, f homogeneous of this degree."""
        vec = [QTRatFun.coerce(f.coefficient(nu)) for nu in self.shapes]
        out = {}
        for i, mu in enumerate(self.shapes):
            acc = QTRatFun(0)
            for j, v in enumerate(vec):
                if not v.is_zero():
                    acc = acc + self._inverse[i][j] * v
            out[mu] = acc
        return out

    def to_json(self) -> dict:
        return {
            ",".join(map(str, mu)): {
                "eigen": self.eigen[mu].to_json(),
                "terms": self.entries[mu].to_json(),
            }
            for mu in self.shapes
        }


@lru_cache(maxsize=None)
def macdonald_table(d: int, nvars: int) -> MacdonaldTable:
    return MacdonaldTable(d, nvars)


def _simplify(x: object) -> object:
    if isinstance(x, QTRatFun) and x.is_polynomial():
        return x.num
    return x


def nabla_power(f: SymPoly, m: int, nvars: int | None = None) -> SymPoly:
    """Apply nabla^m (m may be negative) through the H~ eigenbasis."""
    nvars = f.nvars if nvars is None else nvars
    f = f.with_nvars(nvars)
    out = SymPoly(nvars)
    for d in f.degrees():
        if d > nvars:
            raise TooFewVariables(f"degree {d} exceeds {nvars} variables")
        table = macdonald_table(d, nvars)
        coords = table.coordinates(f.homogeneous_part(d))
        for mu, c in coords.items():
            if c.is_zero():
                continue
            ev = table.eigen[mu]
            scale = QTRatFun(ev ** m) if m >= 0 else QTRatFun(1) / QTRatFun(ev ** (-m))
            out = out + table.entries[mu] * (c * scale)
    return out.map_coeffs(_simplify)


def hmz_c(a: int, f: SymPoly) -> SymPoly:
    """(-q)^(1-a) f[X - (q-1)/(qz)] * sum_r z^r h_r, coefficient of z^a."""
    if a < 1:
        raise ValueError("a must be at least 1")
    nvars = f.nvars
    if f.degree() + a > nvars:
        raise TooFewVariables(f"C_{a} on degree {f.degree()} needs {f.degree() + a} variables")
    shifted = plethysm(f, Alphabet.HMZ_SHIFT)
    out = SymPoly(nvars)
    for zexp, g in shifted.items():
        out = out + g * basis_vector("h", (a - zexp,), nvars)
    sign = -1 if (1 - a) % 2 else 1
    return out * QTCoeff.monomial(1 - a, 0, sign)


def c_alpha(alpha: Composition | Tuple[int, ...], nvars: int) -> SymPoly:
    """C_alpha = C_{alpha_1} C_{alpha_2} ... C_{alpha_k} 1; the last part acts first."""
    f = SymPoly.one(nvars)
    for part in reversed(tuple(alpha)):
        f = hmz_c(part, f)
    return f


@lru_cache(maxsize=None)
def _schur_to_calpha(lam: Partition) -> Tuple[Tuple[Composition, QTCoeff], ...]:
    if not lam:
        return ((Composition(), ONE),)
    first, rest = lam[0], Partition(lam[1:])
    sign = -1 if (first - 1) % 2 else 1
    pref = QTCoeff.monomial(first - 1, 0, sign)
    acc: Dict[Composition, QTCoeff] = {}
    for i in range(len(rest) + 1):
        for nu, c in skew_by_e(i, basis_vector("s", rest, max(rest.size, 1))).coeffs.items():
            for beta, d in _schur_to_calpha(nu):
                key = Composition((first + i,) + tuple(beta))
                acc[key] = acc.get(key, 0) + pref * d * c
    return tuple((k, v) for k, v in sorted(acc.items()) if v != 0)


def schur_to_calpha(lam: Partition | Tuple[int, ...]) -> Dict[Composition, QTCoeff]:
    """d_{lam,alpha} with s_lam = sum_alpha d_{lam,alpha} C_alpha."""
    return dict(_schur_to_calpha(Partition(lam)))

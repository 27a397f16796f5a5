"""Chain-appending operators h/hhat/hbar on tuple series, operator
determinants, the matrices H, J, J', the map Phi and the Omega specialization."""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .exactalg import ONE, T, QTCoeff
from .paths import CpfUniverse, PathTuple, Skeleton, stat_constant
from .symcore import (
    Alphabet,
    BasisExpansion,
    Composition,
    Partition,
    SymPoly,
    expand_in_basis,
    partitions,
    plethysm,
)

KINDS = ("h", "hhat", "hbar")
_CHAIN_KIND = {"h": "all", "hhat": "hat", "hbar": "bar"}


# symbols and words -------------------------------------------------------------

@dataclass(frozen=True, order=True)
class OperatorSymbol:
    kind: str
    index: int

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")

    def normalize(self) -> "OperatorSymbol | int":
        """The symbol itself, or the scalar 1 / 0 it reduces to."""
        if self.index < 0:
            return 0
        if self.index == 0:
            return 0 if self.kind == "hbar" else 1
        return self

    def shifted(self, delta: int) -> "OperatorSymbol":
        return OperatorSymbol(self.kind, self.index + delta)

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "OperatorSymbol":
        for kind in ("hhat", "hbar", "h"):
            if text.startswith(kind):
                return cls(kind, int(text[len(kind):]))
        raise ValueError(f"cannot parse operator symbol {text!r}")


def h(a: int) -> OperatorSymbol:
    return OperatorSymbol("h", a)


def hhat(a: int) -> OperatorSymbol:
    return OperatorSymbol("hhat", a)


def hbar(a: int) -> OperatorSymbol:
    return OperatorSymbol("hbar", a)


Word = Tuple[OperatorSymbol, ...]


def word_str(word: Word) -> str:
    return "*".join(map(str, word)) if word else "1"


class SignedWordSum:
    """Linear combination of operator words; words act right-to-left on 1."""

    def __init__(self, terms: Iterable[Tuple[object, Word]] = ()):
        acc: Dict[Word, QTCoeff] = {}
        for c, word in terms:
            word = tuple(word)
            acc[word] = acc.get(word, QTCoeff()) + QTCoeff.coerce(c)
        self.terms = {w: c for w, c in sorted(acc.items()) if not c.is_zero()}

    @classmethod
    def word(cls, *symbols: OperatorSymbol) -> "SignedWordSum":
        scalar, word = _normalize_word(symbols)
        return cls([(scalar, word)] if scalar else [])

    def items(self) -> List[Tuple[QTCoeff, Word]]:
        return [(c, w) for w, c in self.terms.items()]

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "SignedWordSum") -> "SignedWordSum":
        return SignedWordSum(self.items() + other.items())

    def __neg__(self) -> "SignedWordSum":
        return SignedWordSum((-c, w) for c, w in self.items())

    def __sub__(self, other: "SignedWordSum") -> "SignedWordSum":
        return self + (-other)

    def __mul__(self, other: object) -> "SignedWordSum":
        if isinstance(other, SignedWordSum):
            return SignedWordSum(
                (c1 * c2, w1 + w2) for c1, w1 in self.items() for c2, w2 in other.items()
            )
        return SignedWordSum((c * QTCoeff.coerce(other), w) for c, w in self.items())

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SignedWordSum) and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{word_str(w)}" for c, w in self.items())

    def to_json(self) -> list:
        return [{"coeff": c.to_json(), "word": [str(s) for s in w]} for c, w in self.items()]


def _normalize_word(symbols: Iterable[OperatorSymbol]) -> Tuple[int, Word]:
    out = []
    for s in symbols:
        r = s.normalize()
        if r == 0:
            return 0, ()
        if r != 1:
            out.append(r)
    return 1, tuple(out)


# matrices and determinants -------------------------------------------------------

@dataclass(frozen=True)
class OperatorMatrix:
    """Square matrix fixed by its first row; row r lowers every index by r."""

    first_row: Tuple[OperatorSymbol, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "first_row", tuple(self.first_row))

    @property
    def size(self) -> int:
        return len(self.first_row)

    def entry(self, r: int, c: int) -> OperatorSymbol:
        """Entry at 0-based row r and column c."""
        return self.first_row[c].shifted(-r)

    def rows(self) -> List[List[str]]:
        out = []
        for r in range(self.size):
            row = []
            for c in range(self.size):
                v = self.entry(r, c).normalize()
                row.append(str(v))
            out.append(row)
        return out

    def __str__(self) -> str:
        return "[" + ", ".join(map(str, self.first_row)) + "]"


def _sign(perm: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def det_expand(mat: OperatorMatrix) -> SignedWordSum:
    """sum_w sign(w) A[w1,1] A[w2,2] ... A[wl,l], zero entries pruned."""
    size = mat.size
    terms = []
    for w in permutations(range(size)):
        scalar, word = _normalize_word(mat.entry(w[c], c) for c in range(size))
        if scalar:
            terms.append((_sign(w), word))
    return SignedWordSum(terms)


def build_H(alpha: Sequence[int]) -> OperatorMatrix:
    alpha = Composition(alpha)
    bars = set()
    acc = 0
    for part in reversed(alpha):
        acc += part
        bars.add(acc)
    return OperatorMatrix(tuple(hbar(i) if i in bars else hhat(i) for i in range(1, alpha.size + 1)))


def build_J(lam: Sequence[int]) -> OperatorMatrix:
    lam = Partition(lam)
    if not lam:
        raise ValueError("partition must be nonempty")
    ell = lam.length
    row = [h(lam[ell - i] + i - 1) for i in range(1, ell + 1)]
    row += [hhat(i) for i in range(ell, lam[0] + ell)]
    return OperatorMatrix(tuple(row))


@dataclass(frozen=True)
class JPrimeData:
    matrix: OperatorMatrix
    adj: int
    v: Tuple[int, ...]
    piv: Tuple[int, ...]
    bo: Tuple[int, ...]


def build_Jprime(lam: Sequence[int]) -> JPrimeData:
    lam = Partition(lam)
    if not lam:
        raise ValueError("partition must be nonempty")
    ell, s = lam.length, lam.durfee()
    adj = sum(lam[i - 1] - i for i in range(1, s + 1))
    raw = [lam[i - 1] + ell - i for i in range(1, ell + 1)] + list(range(ell, lam[0] + ell))
    v = tuple(sorted(raw))
    piv = []
    for i in range(1, s + 1):
        target = lam[s - i] + ell - (s + 1 - i)
        piv.append(next(a for a in range(1, len(v)) if v[a - 1] == v[a] == target))
    bo = tuple(s + i - vi for i, vi in enumerate(v, start=1))
    row = []
    for i, vi in enumerate(v, start=1):
        if i <= ell - s:
            row.append(h(vi))
        elif i in piv:
            row.append(hbar(vi))
        else:
            row.append(hhat(vi))
    return JPrimeData(OperatorMatrix(tuple(row)), adj, v, tuple(piv), bo)


def phi_operator(f: SymPoly | BasisExpansion) -> SignedWordSum:
    """Phi(f): h_lam[Y] h_mu[Z] -> h_lam hhat_mu.

    Inside each block the largest part acts first, so it is written last.
    """
    terms = []
    for (lam, mu), c in plethysm(f, Alphabet.Y_MINUS_Z).items():
        word = tuple(h(a) for a in sorted(lam)) + tuple(hhat(b) for b in sorted(mu))
        terms.append((c, word))
    return SignedWordSum(terms)


# tuple series ----------------------------------------------------------------------

@dataclass(frozen=True)
class Budget:
    m: int
    n: int
    area: int
    labels: int

    def universe(self) -> CpfUniverse:
        return CpfUniverse.get(self.m, self.n, self.area, self.labels)


@dataclass(frozen=True)
class ChainEntry:
    chain: Tuple[int, ...]
    area: int
    inv: int
    counts: Tuple[int, ...]


class WordEngine:
    """Streams the tuples produced by operator words on 1 within a budget."""

    _cache: Dict[Budget, "WordEngine"] = {}

    def __init__(self, budget: Budget):
        self.budget = budget
        self.u = budget.universe()
        self._pairs: Dict[Tuple[int, int], int] = {}
        self._chains: Dict[Tuple[str, int], List[ChainEntry]] = {}
        nl = budget.labels
        self.counts = []
        for p in self.u.paths:
            c = [0] * nl
            for lab in p.labels:
                c[lab - 1] += 1
            self.counts.append(tuple(c))

    @classmethod
    def get(cls, budget: Budget) -> "WordEngine":
        if budget not in cls._cache:
            cls._cache[budget] = cls(budget)
        return cls._cache[budget]

    def pair(self, i: int, j: int) -> int:
        key = (i, j)
        v = self._pairs.get(key)
        if v is None:
            v = self._pairs[key] = self.u.pair(i, j)
        return v

    def chain_entries(self, sym: OperatorSymbol) -> List[ChainEntry]:
        key = (sym.kind, sym.index)
        if key not in self._chains:
            out = []
            for chain, area in self.u.chains(_CHAIN_KIND[sym.kind], sym.index, self.budget.area):
                inv = sum(self.u.self_inv[i] for i in chain)
                inv += sum(self.pair(a, b) for x, a in enumerate(chain) for b in chain[x + 1:])
                counts = tuple(map(sum, zip(*(self.counts[i] for i in chain))))
                out.append(ChainEntry(chain, area, inv, counts))
            out.sort(key=lambda e: (e.area, e.chain))
            self._chains[key] = out
        return self._chains[key]

    def extend(
        self, prefix: Tuple[int, ...], area: int, inv: int, sym: OperatorSymbol,
        quota: Optional[List[int]] = None,
    ) -> Iterator[Tuple[Tuple[int, ...], int, int]]:
        room = self.budget.area - area
        for e in self.chain_entries(sym):
            if e.area > room:
                break
            if quota is not None and any(c > q for c, q in zip(e.counts, quota)):
                continue
            cross = sum(self.pair(i, j) for i in prefix for j in e.chain)
            yield prefix + e.chain, area + e.area, inv + e.inv + cross

    def run(
        self, word: Word, start: Tuple[Tuple[int, ...], int, int] = ((), 0, 0),
        quota: Optional[Sequence[int]] = None,
    ) -> Iterator[Tuple[Tuple[int, ...], int, int]]:
        """(tuple indices, area, inversions) for word applied to a start tuple."""
        syms = list(reversed(word))
        q = list(quota) if quota is not None else None

        def rec(depth: int, state: Tuple[Tuple[int, ...], int, int]) -> Iterator:
            if depth == len(syms):
                yield state
                return
            for nxt in self.extend(*state, syms[depth], quota=q):
                added = nxt[0][len(state[0]):]
                if q is not None:
                    for i in added:
                        for lab in self.u.paths[i].labels:
                            q[lab - 1] -= 1
                yield from rec(depth + 1, nxt)
                if q is not None:
                    for i in added:
                        for lab in self.u.paths[i].labels:
                            q[lab - 1] += 1

        yield from rec(0, start)

    def stat(self, state: Tuple[Tuple[int, ...], int, int]) -> int:
        b = self.budget
        return stat_constant(b.m, b.n, len(state[0])) - state[2]

    def inversions(self, indices: Sequence[int]) -> int:
        inv = sum(self.u.self_inv[i] for i in indices)
        return inv + sum(self.pair(a, b) for x, a in enumerate(indices) for b in indices[x + 1:])

    def path_tuple(self, indices: Sequence[int]) -> PathTuple:
        return PathTuple(tuple(self.u.paths[i] for i in indices))


class TupleSeries:
    """Finite combination of cyclic parking function tuples within a budget."""

    def __init__(self, budget: Budget, terms: Optional[Dict[Tuple[int, ...], QTCoeff]] = None):
        self.budget = budget
        self.engine = WordEngine.get(budget)
        self.terms = {k: v for k, v in sorted((terms or {}).items()) if not v.is_zero()}

    @classmethod
    def one(cls, budget: Budget) -> "TupleSeries":
        return cls(budget, {(): ONE})

    @classmethod
    def from_tuples(cls, budget: Budget, items: Dict[PathTuple, QTCoeff]) -> "TupleSeries":
        eng = WordEngine.get(budget)
        terms = {}
        for t, c in items.items():
            if t.perm is not None and t.perm != tuple(range(t.k)):
                raise ValueError("series elements must be tuples of cyclic parking functions")
            key = tuple(eng.u.index[p] for p in t.components)
            terms[key] = terms.get(key, QTCoeff()) + QTCoeff.coerce(c)
        return cls(budget, terms)

    def __add__(self, other: "TupleSeries") -> "TupleSeries":
        self._check(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, QTCoeff()) + v
        return TupleSeries(self.budget, acc)

    def __sub__(self, other: "TupleSeries") -> "TupleSeries":
        return self + other.scale(-1)

    def scale(self, c: object) -> "TupleSeries":
        c = QTCoeff.coerce(c)
        return TupleSeries(self.budget, {k: v * c for k, v in self.terms.items()})

    def _check(self, other: "TupleSeries") -> None:
        if self.budget != other.budget:
            raise ValueError("series budgets differ")

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TupleSeries) and self.budget == other.budget and self.terms == other.terms

    def items(self) -> List[Tuple[PathTuple, QTCoeff]]:
        return [(self.engine.path_tuple(k), v) for k, v in self.terms.items()]

    def skeleton_projection(self) -> Dict[Skeleton, QTCoeff]:
        u = self.engine.u
        acc: Dict[Skeleton, QTCoeff] = {}
        for key, c in self.terms.items():
            z = tuple(sorted(x for i in key for x in u.skel[i]))
            acc[z] = acc.get(z, QTCoeff()) + c
        return {z: c for z, c in sorted(acc.items()) if not c.is_zero()}

    def to_json(self) -> list:
        return [{"tuple": t.to_json(), "coeff": c.to_json()} for t, c in self.items()]


def apply_symbol(sym: OperatorSymbol, x: TupleSeries) -> TupleSeries:
    r = sym.normalize()
    if r == 0:
        return TupleSeries(x.budget)
    if r == 1:
        return x
    eng = x.engine
    acc: Dict[Tuple[int, ...], QTCoeff] = {}
    for key, c in x.terms.items():
        area = sum(eng.u.area[i] for i in key)
        inv = eng.inversions(key)
        before = eng.stat((key, area, inv))
        for state in eng.extend(key, area, inv, r):
            acc[state[0]] = acc.get(state[0], QTCoeff()) + c * QTCoeff.monomial(eng.stat(state) - before)
    return TupleSeries(x.budget, acc)


def apply_words(ws: SignedWordSum, x: TupleSeries) -> TupleSeries:
    out = TupleSeries(x.budget)
    for c, word in ws.items():
        y = x
        for sym in reversed(word):
            y = apply_symbol(sym, y)
        out = out + y.scale(c)
    return out


def det_apply(mat: OperatorMatrix, x: TupleSeries) -> TupleSeries:
    return apply_words(det_expand(mat), x)


# streaming evaluation on 1 ---------------------------------------------------------

def _threads() -> int:
    try:
        return max(1, int(os.environ.get("VERIFY_THREADS", "1")))
    except ValueError:
        return 1


def _parallel_map(fn, jobs: List[tuple]) -> List:
    """Ordered map; worker count from VERIFY_THREADS."""
    workers = min(_threads(), len(jobs))
    if workers <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def _skeleton_counts(budget: Budget, word: Word) -> Dict[Tuple[Skeleton, int], int]:
    eng = WordEngine.get(budget)
    skel = eng.u.skel
    acc: Counter = Counter()
    for state in eng.run(word):
        z = tuple(sorted(x for i in state[0] for x in skel[i]))
        acc[(z, eng.stat(state))] += 1
    return dict(acc)


def skeleton_projection(ws: SignedWordSum, budget: Budget) -> Dict[Skeleton, QTCoeff]:
    """Words applied to 1, summed by skeleton; coefficients are q-polynomials."""
    results = _parallel_map(_skeleton_counts, [(budget, w) for _, w in ws.items()])
    acc: Dict[Skeleton, QTCoeff] = {}
    for (c, _), counts in zip(ws.items(), results):
        for (z, st), mult in counts.items():
            acc[z] = acc.get(z, QTCoeff()) + c * QTCoeff.monomial(st, 0, mult)
    return {z: v for z, v in sorted(acc.items()) if not v.is_zero()}


def dominant_contents(size: int, nvars: int) -> List[Partition]:
    return partitions(size, max_len=nvars)


def _omega_counts(budget: Budget, word: Word, nvars: int) -> Dict[Tuple[Partition, int, int], int]:
    """(content, stat, area) counts of word * 1 restricted to dominant contents."""
    eng = WordEngine.get(budget)
    k = sum(s.index for s in word)
    acc: Counter = Counter()
    for lam in dominant_contents(k * budget.n, min(nvars, budget.labels)):
        quota = list(lam) + [0] * (budget.labels - len(lam))
        for state in eng.run(word, quota=quota):
            acc[(lam, eng.stat(state), state[1])] += 1
    return dict(acc)


@dataclass
class OmegaSeries:
    """Symmetric polynomial in x with (q,t) coefficients, exact for t-degree <= t_max."""

    poly: SymPoly
    t_max: int

    def window(self, lo: int, hi: int) -> SymPoly:
        return self.poly.map_coeffs(lambda c: _t_window(QTCoeff.coerce(c), lo, hi))

    def truncated(self) -> "OmegaSeries":
        return OmegaSeries(self.window(0, self.t_max), self.t_max)

    def scaled(self, c: QTCoeff, lost: int = 0) -> "OmegaSeries":
        """Multiply by a (q,t)-polynomial; ``lost`` lowers the guaranteed degree."""
        return OmegaSeries(self.poly * c, self.t_max - lost).truncated()

    def __add__(self, other: "OmegaSeries") -> "OmegaSeries":
        return OmegaSeries(self.poly + other.poly, min(self.t_max, other.t_max)).truncated()

    def to_json(self) -> list:
        return omega_json(self.poly)


def _t_window(c: QTCoeff, lo: int, hi: int) -> QTCoeff:
    return QTCoeff({(qe, te): v for (qe, te), v in c.items() if lo <= te <= hi})


def omega_json(poly: SymPoly) -> list:
    rows = []
    for lam, c in poly.terms.items():
        c = QTCoeff.coerce(c)
        for te in sorted({te for _, te in c.terms}):
            rows.append({"t": te, "xexp": list(lam), "coeff": c.t_part(te).shift(0, -te).to_json()})
    rows.sort(key=lambda r: (r["t"], [-x for x in r["xexp"]]))
    return rows


def omega_words(ws: SignedWordSum, budget: Budget, nvars: Optional[int] = None) -> OmegaSeries:
    """Omega(ws * 1): sum over tuples of coeff q^stat t^area x^content."""
    nvars = budget.labels if nvars is None else nvars
    if budget.labels > nvars:
        raise ValueError("label cap exceeds the number of variables")
    results = _parallel_map(_omega_counts, [(budget, w, nvars) for _, w in ws.items()])
    acc: Dict[Partition, QTCoeff] = {}
    for (c, _), counts in zip(ws.items(), results):
        for (lam, st, area), mult in counts.items():
            key = Partition(lam)
            acc[key] = acc.get(key, QTCoeff()) + c * QTCoeff.monomial(st, area, mult)
    padded = {tuple(lam) + (0,) * (nvars - len(lam)): v for lam, v in acc.items()}
    return OmegaSeries(SymPoly(nvars, padded), budget.area)


def omega_spec(x: TupleSeries, nvars: Optional[int] = None) -> OmegaSeries:
    """Omega of an explicit series; non-dominant monomials are folded by symmetry."""
    nvars = x.budget.labels if nvars is None else nvars
    eng = x.engine
    acc: Dict[Tuple[int, ...], QTCoeff] = {}
    for key, c in x.terms.items():
        xexp = [0] * nvars
        for i in key:
            for lab in eng.u.paths[i].labels:
                xexp[lab - 1] += 1
        if any(a < b for a, b in zip(xexp, xexp[1:])):
            continue
        area = sum(eng.u.area[i] for i in key)
        acc[tuple(xexp)] = acc.get(tuple(xexp), QTCoeff()) + c * QTCoeff.monomial(0, area)
    return OmegaSeries(SymPoly(nvars, acc), x.budget.area)


# right-hand sides ---------------------------------------------------------------------

def _one_minus_t_power(k: int) -> QTCoeff:
    return (ONE - T) ** k


def rhs_main(m: int, n: int, k: int, area: int, labels: int, nvars: Optional[int] = None) -> OmegaSeries:
    """(1-t)^k Omega(h_1^k * 1), exact through t-degree ``area``."""
    ws = SignedWordSum.word(*(h(1),) * k)
    om = omega_words(ws, Budget(m, n, area, labels), nvars)
    return om.scaled(_one_minus_t_power(k))


def rhs_wilson(m: int, n: int, k: int, area: int, labels: int, nvars: Optional[int] = None) -> OmegaSeries:
    """(1-t)^(k-1) Omega(h_1^(k-1) hbar_1 * 1)."""
    ws = SignedWordSum.word(*(h(1),) * (k - 1), hbar(1))
    om = omega_words(ws, Budget(m, n, area, labels), nvars)
    return om.scaled(_one_minus_t_power(k - 1))


def clambda(f: SymPoly) -> Dict[Partition, QTCoeff]:
    """h-expansion coefficients of f[(1-t)Y]."""
    g = plethysm(f, Alphabet.ONE_MINUS_T)
    return {
        Partition(lam): QTCoeff.coerce(c)
        for lam, c in expand_in_basis(g, "h").coeffs.items()
        if not QTCoeff.coerce(c).is_zero()
    }

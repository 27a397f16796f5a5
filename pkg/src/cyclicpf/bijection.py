"""Crossings, global (km,kn)-parking functions, mix, Gamma/Psi and up."""

from __future__ import annotations

from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from itertools import permutations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .paths import (
    LabeledPath,
    PathTuple,
    _extends,
    check_connecting_perm,
    InvalidConnectingPermutation,
    floor_line,
    precedes,
    stat_constant,
    validate_cpf,
)
from .exactalg import QTCoeff
from .symcore import Composition, SymPoly, partitions

Step = Tuple[int, int]  # (x, label)


class StripConditionViolated(ValueError):
    pass


class NoCrossing(ValueError):
    pass


def crossings(s1: Sequence[Step], s2: Sequence[Step]) -> List[Tuple[int, int, bool]]:
    """Crossings of two extended step sequences (n + 1 steps each).

    Returns (height y, x, positive) for every y in 1..n where step y of each
    path can be followed by step y + 1 of the other.  ``positive`` means the
    first path's step y lies to the left of the second's.
    """
    out = []
    for y in range(1, len(s1)):
        (x1, a1), (x2, a2) = s1[y - 1], s2[y - 1]
        (u1, b1), (u2, b2) = s1[y], s2[y]
        if _extends(x1, a1, u2, b2) and _extends(x2, a2, u1, b1):
            positive = x1 < x2 or (x1 == x2 and a1 < a2)
            out.append((y, min(u1, u2), positive))
    return out


def extended_steps(t: PathTuple, ell: int) -> List[Step]:
    comp = t.components[ell]
    nxt = t.components[t.target(ell)]
    return list(zip(comp.north_x, comp.labels)) + [(nxt.start_x + t.m, nxt.labels[0])]


def pos_crossings(t: PathTuple) -> int:
    check_connecting_perm(t)
    ext = [extended_steps(t, ell) for ell in range(t.k)]
    return sum(
        1
        for i in range(t.k)
        for j in range(i + 1, t.k)
        for _, _, positive in crossings(ext[i], ext[j])
        if positive
    )


# global parking functions ------------------------------------------------------

@dataclass(frozen=True)
class GlobalParkingFunction:
    """Labeled lattice path from (0,0) to (km,kn) weakly above my = nx."""

    m: int
    n: int
    k: int
    north_x: Tuple[int, ...]
    labels: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "north_x", tuple(self.north_x))
        object.__setattr__(self, "labels", tuple(self.labels))
        problems = self.problems()
        if problems:
            raise StripConditionViolated(problems[0])

    def problems(self) -> List[str]:
        m, n, k, xs, labs = self.m, self.n, self.k, self.north_x, self.labels
        if len(xs) != k * n or len(labs) != k * n:
            return [f"need {k * n} north steps and labels"]
        out = []
        if xs[0] != 0:
            out.append("path must start at the origin")
        for y, x in enumerate(xs):
            if x > floor_line(m, n, y):
                out.append(f"({x},{y}) lies below the line")
            if y and xs[y - 1] > x:
                out.append("north_x must be weakly increasing")
            if y and xs[y - 1] == x and labs[y - 1] >= labs[y]:
                out.append(f"labels must increase up the column at height {y}")
        if xs[-1] > k * m:
            out.append("path overshoots the end point")
        return out

    def aseq(self) -> Tuple[int, ...]:
        return tuple(floor_line(self.m, self.n, y) - x for y, x in enumerate(self.north_x))

    def area(self) -> int:
        return sum(self.aseq())

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "k": self.k, "north_x": list(self.north_x), "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data: dict) -> "GlobalParkingFunction":
        return cls(data["m"], data["n"], data["k"], tuple(data["north_x"]), tuple(data["labels"]))


def pf_stats(g: GlobalParkingFunction) -> Tuple[int, int, int]:
    """(pdinv, ldinv, stat) of a (km,kn)-parking function.

    Steps are ranked by (m*y - n*x, floor(x/m)) with (x, y) the SE corner of
    the relevant cell in global coordinates; the second entry breaks ties
    between translates of the same diagonal.
    """
    m, n, k, xs, labs = g.m, g.n, g.k, g.north_x, g.labels
    norths = [((m * y - n * x, x // m), labs[y]) for y, x in enumerate(xs)]
    easts = []
    for y in range(1, k * n + 1):
        stop = xs[y] if y < k * n else k * m
        for x in range(xs[y - 1], stop):
            easts.append((m * (y - 1) - n * (x + 1), (x + 1) // m))
    easts.sort()
    pdinv = sum(len(easts) - bisect_right(easts, r) for r, _ in norths)
    ldinv = 0
    for r, f in norths:
        upper = (r[0] + m, r[1])
        ldinv += sum(1 for r2, f2 in norths if r < r2 < upper and f >= f2)
    return pdinv, ldinv, stat_constant(m, n, k) - pdinv - ldinv


def touch(g: GlobalParkingFunction) -> Composition:
    contacts = [j for j in range(g.k) if g.north_x[j * g.n] == j * g.m] + [g.k]
    return Composition(b - a for a, b in zip(contacts, contacts[1:]))


def _cyclic_perm(k: int) -> Optional[Tuple[int, ...]]:
    return tuple((ell + 1) % k for ell in range(k)) if k > 1 else None


def decompose_pf(g: GlobalParkingFunction) -> PathTuple:
    m, n = g.m, g.n
    comps = tuple(
        LabeledPath(
            m, n,
            tuple(x - ell * m for x in g.north_x[ell * n:(ell + 1) * n]),
            g.labels[ell * n:(ell + 1) * n],
        )
        for ell in range(g.k)
    )
    t = PathTuple(comps, _cyclic_perm(g.k))
    try:
        check_connecting_perm(t)
    except InvalidConnectingPermutation as exc:
        raise StripConditionViolated(str(exc)) from None
    return t


def recompose(t: PathTuple) -> GlobalParkingFunction:
    k, m = t.k, t.m
    expected = _cyclic_perm(k)
    if (t.perm or None) != expected and not (k == 1 and t.perm in (None, (0,))):
        raise StripConditionViolated("connecting permutation must be the cyclic shift")
    if t.components[0].start_x != 0:
        raise StripConditionViolated("first strip must start at the origin")
    try:
        check_connecting_perm(t)
    except InvalidConnectingPermutation as exc:
        raise StripConditionViolated(str(exc)) from None
    xs: List[int] = []
    labs: List[int] = []
    for ell, comp in enumerate(t.components):
        xs.extend(x + ell * m for x in comp.north_x)
        labs.extend(comp.labels)
    return GlobalParkingFunction(m, t.n, k, tuple(xs), tuple(labs))


def _splice(a: LabeledPath, b: LabeledPath, y: int) -> LabeledPath:
    """First y north steps of a followed by the remaining steps of b."""
    return LabeledPath(a.m, a.n, a.north_x[:y] + b.north_x[y:], a.labels[:y] + b.labels[y:])


def _cyclic_steps(p: LabeledPath) -> List[Step]:
    return list(zip(p.north_x, p.labels)) + [(p.start_x + p.m, p.labels[0])]


def mix(tau: LabeledPath, g: GlobalParkingFunction) -> GlobalParkingFunction:
    t = decompose_pf(g)
    tau_ext = _cyclic_steps(tau)
    chosen = None
    for ell in range(t.k):
        cr = crossings(extended_steps(t, ell), tau_ext)
        if cr:
            chosen = (ell, max(y for y, _, _ in cr))
    if chosen is None:
        raise NoCrossing("tau crosses no component")
    ell, y = chosen
    comp = t.components[ell]
    comps = list(t.components)
    comps[ell:ell + 1] = [_splice(comp, tau, y), _splice(tau, comp, y)]
    return recompose(PathTuple(tuple(comps), _cyclic_perm(len(comps))))


def is_ptableau(t: PathTuple) -> bool:
    comps = t.components
    if comps[0].start_x != 0:
        return False
    return all(not precedes(a, b) for a, b in zip(comps, comps[1:]))


def gamma(t: PathTuple) -> GlobalParkingFunction:
    first = t.components[0]
    if first.start_x != 0:
        raise NoCrossing("first component must pass through the origin")
    g = GlobalParkingFunction(first.m, first.n, 1, first.north_x, first.labels)
    for tau in t.components[1:]:
        g = mix(tau, g)
    return g


def psi(g: GlobalParkingFunction) -> PathTuple:
    t = decompose_pf(g)
    comps = list(t.components)
    peeled: List[LabeledPath] = []
    while len(comps) > 1:
        cur = PathTuple(tuple(comps), _cyclic_perm(len(comps)))
        found = None
        for i in range(len(comps) - 1):
            cr = crossings(extended_steps(cur, i), extended_steps(cur, i + 1))
            if cr:
                found = (i, max(y for y, _, _ in cr))
        if found is None:
            raise NoCrossing("no adjacent components cross")
        i, y = found
        tau = _splice(comps[i + 1], comps[i], y)
        comps[i:i + 2] = [_splice(comps[i], comps[i + 1], y)]
        peeled.append(tau)
    return PathTuple(tuple([comps[0]] + peeled[::-1]))


def ptab_filter(tuples: Sequence[PathTuple], alpha: Sequence[int]) -> List[PathTuple]:
    starts = set()
    acc = 0
    for part in alpha:
        starts.add(acc)
        acc += part
    out = []
    for t in tuples:
        if acc != t.k or not is_ptableau(t):
            continue
        if all((c.start_x == 0) == (i in starts) for i, c in enumerate(t.components)):
            out.append(t)
    return out


def bezout_shift(m: int, n: int) -> Tuple[int, int]:
    """(a, b) with n*a - m*b = 1 and 0 <= b < n."""
    for b in range(n):
        if (1 + m * b) % n == 0:
            return (1 + m * b) // n, b
    raise ValueError(f"({m},{n}) are not coprime")


def up(p: LabeledPath) -> LabeledPath:
    m, n = p.m, p.n
    a, b = bezout_shift(m, n)
    xs, labs = [], []
    for y in range(b, b + n):
        q, r = divmod(y, n)
        xs.append(p.north_x[r] + q * m - a)
        labs.append(p.labels[r])
    return LabeledPath(m, n, tuple(xs), tuple(labs))


def down(p: LabeledPath) -> LabeledPath:
    """Inverse of up on paths avoiding the origin."""
    m, n = p.m, p.n
    a, b = bezout_shift(m, n)
    xs, labs = [], []
    for y in range(-b, n - b):
        q, r = divmod(y, n)
        xs.append(p.north_x[r] + q * m + a)
        labs.append(p.labels[r])
    return LabeledPath(m, n, tuple(xs), tuple(labs))


# enumeration of the two sides ---------------------------------------------------

def _column_labelings(xs: Sequence[int], max_label: int) -> Iterator[Tuple[int, ...]]:
    """Labelings strictly increasing along maximal vertical runs."""
    for labels in product(range(1, max_label + 1), repeat=len(xs)):
        if all(not (xs[y] == xs[y + 1] and labels[y] >= labels[y + 1]) for y in range(len(xs) - 1)):
            yield labels


def pf_shapes(m: int, n: int, k: int) -> List[Tuple[int, ...]]:
    out: List[Tuple[int, ...]] = []

    def rec(prefix: List[int]) -> None:
        y = len(prefix)
        if y == k * n:
            out.append(tuple(prefix))
            return
        for x in range(prefix[-1], floor_line(m, n, y) + 1):
            prefix.append(x)
            rec(prefix)
            prefix.pop()

    rec([0])
    return out


def enumerate_pf(m: int, n: int, k: int, max_label: int) -> List[GlobalParkingFunction]:
    out = [
        GlobalParkingFunction(m, n, k, xs, labels)
        for xs in pf_shapes(m, n, k)
        for labels in _column_labelings(xs, max_label)
    ]
    out.sort(key=lambda g: (g.area(), g.north_x, g.labels))
    return out


def enumerate_ptab(m: int, n: int, k: int, max_label: int) -> List[PathTuple]:
    """All P-tableaux of k components; their area never exceeds C(m,n,k)."""
    from .paths import CpfUniverse

    budget = stat_constant(m, n, k)
    uni = CpfUniverse.get(m, n, budget, max_label)
    out: List[PathTuple] = []

    def rec(chain: List[int], used: int) -> None:
        if len(chain) == k:
            out.append(PathTuple(tuple(uni.paths[i] for i in chain)))
            return
        last = uni.paths[chain[-1]]
        for j, p in enumerate(uni.paths):
            if used + uni.area[j] > budget:
                break
            if not precedes(last, p):
                chain.append(j)
                rec(chain, used + uni.area[j])
                chain.pop()

    for i in uni.starters("bar", budget):
        rec([i], uni.area[i])
    return out


def _content_labelings(xs: Sequence[int], content: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """Column-strict labelings using label i exactly content[i-1] times."""
    quota = list(content)
    labels: List[int] = []

    def rec(y: int) -> Iterator[Tuple[int, ...]]:
        if y == len(xs):
            yield tuple(labels)
            return
        low = labels[-1] + 1 if y and xs[y - 1] == xs[y] else 1
        for lab in range(low, len(quota) + 1):
            if quota[lab - 1]:
                quota[lab - 1] -= 1
                labels.append(lab)
                yield from rec(y + 1)
                labels.pop()
                quota[lab - 1] += 1

    yield from rec(0)


def pf_touch_sum(m: int, n: int, k: int, alpha: Optional[Sequence[int]], nvars: int) -> SymPoly:
    """Sum of q^stat t^area x^labels over (km,kn)-parking functions touching as alpha.

    Only dominant label contents are enumerated; the sum is symmetric in x.
    ``alpha=None`` takes every touch composition.
    """
    want = None if alpha is None else Composition(alpha)
    shapes = []
    for xs in pf_shapes(m, n, k):
        g0 = GlobalParkingFunction(m, n, k, xs, tuple(range(1, k * n + 1)))
        if want is None or touch(g0) == want:
            shapes.append((xs, g0.area()))
    acc: Dict[Tuple[int, ...], QTCoeff] = {}
    for lam in partitions(k * n, max_len=nvars):
        content = tuple(lam) + (0,) * (nvars - len(lam))
        counts: Counter = Counter()
        for xs, area in shapes:
            for labels in _content_labelings(xs, content):
                counts[(pf_stats(GlobalParkingFunction(m, n, k, xs, labels))[2], area)] += 1
        if counts:
            acc[content] = QTCoeff(dict(counts))
    return SymPoly(nvars, acc)


def valid_connecting_perms(components: Sequence[LabeledPath]) -> List[Optional[Tuple[int, ...]]]:
    """Every connecting permutation the components admit (None = identity)."""
    k = len(components)
    out: List[Optional[Tuple[int, ...]]] = []
    for phi in permutations(range(k)):
        perm = None if phi == tuple(range(k)) else phi
        try:
            check_connecting_perm(PathTuple(tuple(components), perm))
        except InvalidConnectingPermutation:
            continue
        out.append(perm)
    return out


def same_skeleton_tuples(t: PathTuple, identity_only: bool = True) -> List[PathTuple]:
    """Tuples obtained by redistributing each row's steps among the components.

    Covers every sheet order; with ``identity_only`` only tuples of cyclic
    parking functions are kept, otherwise every admissible connecting
    permutation is tried.
    """
    m, n, k = t.m, t.n, t.k
    rows = [[(c.north_x[y], c.labels[y]) for c in t.components] for y in range(n)]
    seen = set()
    out: List[PathTuple] = []
    for choice in product(*(sorted(set(permutations(r))) for r in rows)):
        comps = tuple(
            LabeledPath(m, n, tuple(choice[y][ell][0] for y in range(n)), tuple(choice[y][ell][1] for y in range(n)))
            for ell in range(k)
        )
        if comps in seen:
            continue
        seen.add(comps)
        if identity_only:
            if all(validate_cpf(c) for c in comps):
                out.append(PathTuple(comps))
        else:
            out.extend(PathTuple(comps, perm) for perm in valid_connecting_perms(comps))
    return out

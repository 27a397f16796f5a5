"""Cyclic (m,n)-parking functions, tuples of them, and their statistics.

A path is stored as the x-coordinates of its n north steps together with
their labels.  The north step at height y runs from (north_x[y], y) to
(north_x[y], y + 1); the path starts at (north_x[0], 0).  Every other
quantity (east steps, area sequence, contents) is derived.

Step contents only enter through comparisons, and k*d + (sheet - 1) orders
exactly like the pair (d, sheet) where d = m*y - n*x is the k = 1 content.
The fast routines below exploit this to split statistics into per-component
and per-pair contributions.
"""

from __future__ import annotations

import json
from collections import Counter
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple


class InvalidConnectingPermutation(ValueError):
    pass


Skeleton = Tuple[Tuple[int, int, int], ...]


def floor_line(m: int, n: int, y: int) -> int:
    """Largest x with (x, y) weakly above the line my = nx."""
    return (m * y) // n


def stat_constant(m: int, n: int, k: int) -> int:
    return ((m * k - 1) * (n * k - 1) + k - 1) // 2


@dataclass(frozen=True, order=True)
class LabeledPath:
    m: int
    n: int
    north_x: Tuple[int, ...]
    labels: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "north_x", tuple(self.north_x))
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def start_x(self) -> int:
        return self.north_x[0]

    @property
    def end_x(self) -> int:
        """End point x-coordinate of the path read as a cyclic parking function."""
        return self.north_x[0] + self.m

    def aseq(self) -> Tuple[int, ...]:
        return tuple(floor_line(self.m, self.n, y) - x for y, x in enumerate(self.north_x))

    def area(self) -> int:
        return sum(self.aseq())

    def passes_origin(self) -> bool:
        return self.north_x[0] == 0

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "start_x": self.start_x,
            "north_x": list(self.north_x),
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data: dict) -> "LabeledPath":
        path = cls(data["m"], data["n"], tuple(data["north_x"]), tuple(data["labels"]))
        if "start_x" in data and data["start_x"] != path.start_x:
            raise ValueError("start_x must equal north_x[0]")
        return path


class Validation:
    """Boolean verdict with a list of violated clauses."""

    def __init__(self, problems: List[str]):
        self.problems = problems

    def __bool__(self) -> bool:
        return not self.problems

    def __repr__(self) -> str:
        return "Validation(ok)" if not self.problems else f"Validation({self.problems})"


def _segment_problems(m: int, n: int, xs: Sequence[int], labels: Sequence[int], end_x: int) -> List[str]:
    problems = []
    if len(xs) != n or len(labels) != n:
        return [f"need exactly n={n} north steps and labels"]
    if any(lab < 1 for lab in labels):
        problems.append("labels must be positive integers")
    if xs[0] > 0:
        problems.append("start_x must be <= 0")
    for y in range(n - 1):
        if xs[y] > xs[y + 1]:
            problems.append(f"north_x must be weakly increasing (height {y})")
    for y, x in enumerate(xs):
        if x > floor_line(m, n, y):
            problems.append(f"point ({x},{y}) lies strictly below the line {m}y={n}x")
    if end_x < xs[-1]:
        problems.append("fewer than zero final east steps: end_x < north_x[n-1]")
    for y in range(n - 1):
        if xs[y] == xs[y + 1] and not labels[y] < labels[y + 1]:
            problems.append(f"labels must increase up the column at heights {y},{y + 1}")
    return problems


def validate_cpf(path: LabeledPath) -> Validation:
    m, n = path.m, path.n
    if m < 1 or n < 1 or gcd(m, n) != 1:
        return Validation([f"(m,n)=({m},{n}) must be coprime positive integers"])
    problems = _segment_problems(m, n, path.north_x, path.labels, path.end_x)
    if not problems and path.north_x[-1] == path.end_x and not path.labels[0] > path.labels[-1]:
        problems.append("path ends with a north step: first label must exceed last label")
    return Validation(problems)


def area_and_aseq(path: LabeledPath) -> Tuple[int, Tuple[int, ...]]:
    a = path.aseq()
    return sum(a), a


# geometry ------------------------------------------------------------------

@lru_cache(maxsize=None)
def north_d(m: int, n: int, xs: Tuple[int, ...]) -> Tuple[int, ...]:
    """k = 1 contents of the north steps: cell to the left has SE corner (x, y)."""
    return tuple(m * y - n * x for y, x in enumerate(xs))


@lru_cache(maxsize=None)
def east_d(m: int, n: int, xs: Tuple[int, ...], end_x: int) -> Tuple[int, ...]:
    """k = 1 contents of the east steps: cell below has SE corner (x + 1, y - 1)."""
    out = []
    for y in range(1, n + 1):
        stop = xs[y] if y < n else end_x
        for x in range(xs[y - 1], stop):
            out.append(m * (y - 1) - n * (x + 1))
    return tuple(out)


@dataclass(frozen=True)
class PathTuple:
    """Ordered k-tuple of paths; component l lives in sheet l + 1.

    ``perm`` is the connecting permutation (0-based, perm[l] is the index of
    the component whose start, shifted by (m, n), is the end of component l).
    ``None`` means the identity, i.e. a tuple of cyclic parking functions.
    """

    components: Tuple[LabeledPath, ...]
    perm: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if self.perm is not None:
            object.__setattr__(self, "perm", tuple(self.perm))

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def m(self) -> int:
        return self.components[0].m

    @property
    def n(self) -> int:
        return self.components[0].n

    def target(self, ell: int) -> int:
        return ell if self.perm is None else self.perm[ell]

    def end_x(self, ell: int) -> int:
        return self.components[self.target(ell)].start_x + self.m

    def area(self) -> int:
        return sum(c.area() for c in self.components)

    def to_json(self) -> dict:
        out: dict = {"components": [c.to_json() for c in self.components]}
        if self.perm is not None:
            out["perm"] = [p + 1 for p in self.perm]
        return out

    @classmethod
    def from_json(cls, data: dict | list) -> "PathTuple":
        if isinstance(data, list):
            return cls(tuple(LabeledPath.from_json(c) for c in data))
        perm = data.get("perm")
        return cls(
            tuple(LabeledPath.from_json(c) for c in data["components"]),
            None if perm is None else tuple(p - 1 for p in perm),
        )


def check_connecting_perm(t: PathTuple) -> None:
    """Raise InvalidConnectingPermutation unless every component joins its target."""
    k = t.k
    if t.perm is not None and sorted(t.perm) != list(range(k)):
        raise InvalidConnectingPermutation(f"{t.perm} is not a permutation of {k} components")
    for ell, comp in enumerate(t.components):
        if comp.m != t.m or comp.n != t.n:
            raise InvalidConnectingPermutation("components have different (m,n)")
        nxt = t.components[t.target(ell)]
        end = nxt.start_x + t.m
        problems = _segment_problems(t.m, t.n, comp.north_x, comp.labels, end)
        if problems:
            raise InvalidConnectingPermutation(f"component {ell + 1}: {problems[0]}")
        if comp.north_x[-1] == end and not comp.labels[-1] < nxt.labels[0]:
            raise InvalidConnectingPermutation(
                f"component {ell + 1} ends with a north step whose label is not below the next one"
            )


def step_contents(t: PathTuple) -> List[Tuple[List[int], List[int]]]:
    """Contents k(my - nx) + i - 1 of (north steps, east steps) per component."""
    k, m, n = t.k, t.m, t.n
    out = []
    for ell, comp in enumerate(t.components):
        nd = north_d(m, n, comp.north_x)
        ed = east_d(m, n, comp.north_x, t.end_x(ell))
        out.append(([k * d + ell for d in nd], [k * d + ell for d in ed]))
    return out


def tuple_stats(t: PathTuple) -> Tuple[int, int, int]:
    """(pdinv, ldinv, stat) straight from the content definitions."""
    k, m = t.k, t.m
    conts = step_contents(t)
    norths = [(c, lab) for (nc, _), comp in zip(conts, t.components) for c, lab in zip(nc, comp.labels)]
    easts = [c for _, ec in conts for c in ec]
    pdinv = sum(1 for cn, _ in norths for ce in easts if cn < ce)
    ldinv = sum(
        1
        for c1, f1 in norths
        for c2, f2 in norths
        if c1 < c2 < c1 + k * m and f1 >= f2
    )
    return pdinv, ldinv, stat_constant(t.m, t.n, k) - pdinv - ldinv


def skeleton(t: PathTuple | Sequence[LabeledPath]) -> Skeleton:
    comps = t.components if isinstance(t, PathTuple) else t
    triples = []
    for c in comps:
        for i, (a, lab) in enumerate(zip(c.aseq(), c.labels), start=1):
            triples.append((i, a, lab))
    return tuple(sorted(triples))


def skeleton_omega(z: Skeleton, nvars: int) -> Tuple[int, Tuple[int, ...]]:
    """Image of a skeleton under z_{i,j,k} -> t^j x_k as (t exponent, x exponents)."""
    xexp = [0] * nvars
    for _, _, lab in z:
        xexp[lab - 1] += 1
    return sum(j for _, j, _ in z), tuple(xexp)


def _extends(x: int, a: int, x2: int, a2: int) -> bool:
    """(x, a) can be followed by the north step (x2, a2)."""
    return x < x2 or (x == x2 and a < a2)


def precedes(p: LabeledPath, p2: LabeledPath) -> bool:
    """p < p2 in the chain order, tested on the periodic extensions."""
    if (p.m, p.n) != (p2.m, p2.n):
        raise ValueError("paths must share (m,n)")
    n = p.n
    for y in range(n):
        if y + 1 < n:
            x2, a2 = p2.north_x[y + 1], p2.labels[y + 1]
        else:
            x2, a2 = p2.north_x[0] + p2.m, p2.labels[0]
        if _extends(p.north_x[y], p.labels[y], x2, a2):
            return False
    return True


# enumeration ----------------------------------------------------------------

@lru_cache(maxsize=None)
def cpf_shapes(m: int, n: int, max_area: int) -> Tuple[Tuple[int, ...], ...]:
    """All north_x vectors of cyclic (m,n) paths with area <= max_area."""
    out: List[Tuple[int, ...]] = []

    def rec(prefix: List[int], used: int) -> None:
        y = len(prefix)
        if y == n:
            if prefix[-1] <= prefix[0] + m:
                out.append(tuple(prefix))
            return
        top = floor_line(m, n, y)
        for x in range(top, prefix[-1] - 1, -1):
            a = top - x
            if used + a > max_area:
                break
            prefix.append(x)
            rec(prefix, used + a)
            prefix.pop()

    for a in range(0, max_area + 1):
        rec([-a], a)
    return tuple(out)


def shape_labelings(m: int, n: int, xs: Tuple[int, ...], max_label: int) -> Iterator[Tuple[int, ...]]:
    for labels in product(range(1, max_label + 1), repeat=n):
        if any(xs[y] == xs[y + 1] and labels[y] >= labels[y + 1] for y in range(n - 1)):
            continue
        if xs[-1] == xs[0] + m and labels[0] <= labels[-1]:
            continue
        yield labels


def enumerate_cpf(m: int, n: int, max_area: int, max_label: int) -> List[LabeledPath]:
    if max_label < 1 or max_area < 0:
        return []
    out = [
        LabeledPath(m, n, xs, labels)
        for xs in cpf_shapes(m, n, max_area)
        for labels in shape_labelings(m, n, xs, max_label)
    ]
    out.sort(key=lambda p: (p.area(), p.north_x, p.labels))
    return out


def enumerate_chains(kind: str, length: int, m: int, n: int, max_area: int, max_label: int) -> List[Tuple[LabeledPath, ...]]:
    """Chains p1 < p2 < ... of the given length with total area <= max_area."""
    universe = CpfUniverse.get(m, n, max_area, max_label)
    return [tuple(universe.paths[i] for i in ch) for ch, _ in universe.chains(kind, length, max_area)]


# fast pair statistics --------------------------------------------------------

@lru_cache(maxsize=None)
def _pd_self(nd: Tuple[int, ...], ed: Tuple[int, ...]) -> int:
    se = sorted(ed)
    return sum(len(se) - bisect_right(se, d) for d in nd)


@lru_cache(maxsize=None)
def _pd_pair(nd1: Tuple[int, ...], ed1: Tuple[int, ...], nd2: Tuple[int, ...], ed2: Tuple[int, ...]) -> int:
    """pdinv pairs between an earlier component 1 and a later component 2."""
    s2, s1 = sorted(ed2), sorted(ed1)
    total = sum(len(s2) - bisect_left(s2, d) for d in nd1)  # d_N <= d_E
    total += sum(len(s1) - bisect_right(s1, d) for d in nd2)  # d_N < d_E
    return total


@lru_cache(maxsize=None)
def _ld_self_window(m: int, nd: Tuple[int, ...]) -> Tuple[Tuple[int, int], ...]:
    return tuple((u, v) for u, du in enumerate(nd) for v, dv in enumerate(nd) if du < dv < du + m)


@lru_cache(maxsize=None)
def _ld_pair_window(m: int, nd1: Tuple[int, ...], nd2: Tuple[int, ...]) -> Tuple[Tuple[Tuple[int, int], ...], Tuple[Tuple[int, int], ...]]:
    """Index pairs (u in 1, v in 2) counted when label1 >= label2, resp. label2 >= label1."""
    first = tuple((u, v) for u, d1 in enumerate(nd1) for v, d2 in enumerate(nd2) if 0 <= d2 - d1 <= m - 1)
    second = tuple((u, v) for u, d1 in enumerate(nd1) for v, d2 in enumerate(nd2) if 1 <= d1 - d2 <= m)
    return first, second


@dataclass(frozen=True)
class ComponentData:
    """Per-component data needed by the fast statistics."""

    nd: Tuple[int, ...]
    ed: Tuple[int, ...]
    labels: Tuple[int, ...]


def component_data(m: int, n: int, xs: Tuple[int, ...], end_x: int, labels: Tuple[int, ...]) -> ComponentData:
    return ComponentData(north_d(m, n, xs), east_d(m, n, xs, end_x), labels)


def self_inversions(m: int, c: ComponentData) -> int:
    lab = c.labels
    ld = sum(1 for u, v in _ld_self_window(m, c.nd) if lab[u] >= lab[v])
    return _pd_self(c.nd, c.ed) + ld


def pair_inversions(m: int, c1: ComponentData, c2: ComponentData) -> int:
    """Inversions between component c1 in an earlier sheet and c2 in a later one."""
    first, second = _ld_pair_window(m, c1.nd, c2.nd)
    l1, l2 = c1.labels, c2.labels
    ld = sum(1 for u, v in first if l1[u] >= l2[v]) + sum(1 for u, v in second if l2[v] >= l1[u])
    return _pd_pair(c1.nd, c1.ed, c2.nd, c2.ed) + ld


def fast_inversions(m: int, comps: Sequence[ComponentData]) -> int:
    total = 0
    for i, c in enumerate(comps):
        total += self_inversions(m, c)
        for c2 in comps[i + 1:]:
            total += pair_inversions(m, c, c2)
    return total


def tuple_data(t: PathTuple) -> List[ComponentData]:
    return [
        component_data(t.m, t.n, c.north_x, t.end_x(ell), c.labels)
        for ell, c in enumerate(t.components)
    ]


def fast_stat(t: PathTuple) -> int:
    return stat_constant(t.m, t.n, t.k) - fast_inversions(t.m, tuple_data(t))


class CpfUniverse:
    """All cyclic parking functions within an (area, label) budget, indexed.

    Holds precomputed per-path data and the chain-order successor lists used
    by the operator evaluation.  Instances are cached per budget.
    """

    _cache: Dict[Tuple[int, int, int, int], "CpfUniverse"] = {}

    def __init__(self, m: int, n: int, max_area: int, max_label: int):
        self.m, self.n, self.max_area, self.max_label = m, n, max_area, max_label
        self.paths = enumerate_cpf(m, n, max_area, max_label)
        self.index = {p: i for i, p in enumerate(self.paths)}
        self.area = [p.area() for p in self.paths]
        self.data = [component_data(m, n, p.north_x, p.end_x, p.labels) for p in self.paths]
        self.self_inv = [self_inversions(m, d) for d in self.data]
        self.origin = [p.passes_origin() for p in self.paths]
        self.skel = [skeleton([p]) for p in self.paths]
        self._succ: Dict[int, List[int]] = {}

    @classmethod
    def get(cls, m: int, n: int, max_area: int, max_label: int) -> "CpfUniverse":
        key = (m, n, max_area, max_label)
        if key not in cls._cache:
            cls._cache[key] = cls(m, n, max_area, max_label)
        return cls._cache[key]

    def pair(self, i: int, j: int) -> int:
        return pair_inversions(self.m, self.data[i], self.data[j])

    def successors(self, i: int) -> List[int]:
        if i not in self._succ:
            p = self.paths[i]
            room = self.max_area
            self._succ[i] = [
                j for j, p2 in enumerate(self.paths)
                if self.area[j] > self.area[i] and self.area[j] <= room and precedes(p, p2)
            ]
        return self._succ[i]

    def starters(self, kind: str, budget: int) -> List[int]:
        if kind not in ("all", "h", "hat", "hhat", "bar", "hbar"):
            raise ValueError(f"unknown chain kind {kind!r}")
        out = []
        for i, a in enumerate(self.area):
            if a > budget:
                break
            if kind in ("bar", "hbar") and not self.origin[i]:
                continue
            if kind in ("hat", "hhat") and self.origin[i]:
                continue
            out.append(i)
        return out

    def chains(self, kind: str, length: int, budget: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
        """(chain of indices, total area) for chains within the area budget."""
        if length == 0:
            yield (), 0
            return

        def rec(chain: List[int], used: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
            if len(chain) == length:
                yield tuple(chain), used
                return
            last = chain[-1]
            rem = length - len(chain)
            for j in self.successors(last):
                a = self.area[j]
                # areas strictly increase along a chain
                if used + a * rem + rem * (rem - 1) // 2 > budget:
                    if used + a > budget:
                        break
                    continue
                chain.append(j)
                yield from rec(chain, used + a)
                chain.pop()

        for i in self.starters(kind, budget):
            a = self.area[i]
            if a * length + length * (length - 1) // 2 > budget:
                break
            yield from rec([i], a)


def dump_paths(paths: Sequence[LabeledPath]) -> str:
    return json.dumps([p.to_json() for p in paths])

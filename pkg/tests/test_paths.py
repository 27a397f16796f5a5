import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclicpf.paths import (
    CpfUniverse,
    InvalidConnectingPermutation,
    LabeledPath,
    PathTuple,
    area_and_aseq,
    check_connecting_perm,
    enumerate_chains,
    enumerate_cpf,
    fast_stat,
    precedes,
    skeleton,
    skeleton_omega,
    stat_constant,
    step_contents,
    tuple_stats,
    validate_cpf,
)


def naive_cpf(m: int, n: int, max_area: int, max_label: int) -> set:
    """Independent enumeration: walk every lattice path and test it point by point."""
    out = set()
    for start in range(-max_area - m, 1):
        for rest in product(range(start, start + m + 1), repeat=n - 1):
            xs = (start,) + rest
            if any(xs[i] > xs[i + 1] for i in range(n - 1)):
                continue
            pts = []
            for y in range(n):
                nxt = xs[y + 1] if y + 1 < n else start + m
                pts += [(xs[y], y), (xs[y], y + 1)] + [(x, y + 1) for x in range(xs[y], nxt + 1)]
            if any(m * y < n * x for x, y in pts):
                continue
            if sum((m * y) // n - x for y, x in enumerate(xs)) > max_area:
                continue
            for labels in product(range(1, max_label + 1), repeat=n):
                if any(xs[i] == xs[i + 1] and labels[i] >= labels[i + 1] for i in range(n - 1)):
                    continue
                if xs[-1] == start + m and labels[-1] >= labels[0]:
                    continue
                out.add((xs, labels))
    return out


def naive_stats(t: PathTuple):
    """pdinv, ldinv from step contents written out pair by pair."""
    conts = step_contents(t)
    norths, easts = [], []
    for (nc, ec), comp in zip(conts, t.components):
        norths += list(zip(nc, comp.labels))
        easts += ec
    pd = 0
    for cn, _ in norths:
        for ce in easts:
            if cn < ce:
                pd += 1
    ld = 0
    for i, (c1, f1) in enumerate(norths):
        for j, (c2, f2) in enumerate(norths):
            if i != j and c1 < c2 < c1 + t.k * t.m and f1 >= f2:
                ld += 1
    return pd, ld


# Figure 1 --------------------------------------------------------------------------

def test_fig_components(fig_tuple):
    left, right = fig_tuple.components
    assert bool(validate_cpf(left)) and bool(validate_cpf(right))
    assert area_and_aseq(left) == (8, (3, 2, 3))
    assert area_and_aseq(right) == (6, (2, 3, 1))


def test_fig_contents(fig_tuple):
    (ln, le), (rn, re) = step_contents(fig_tuple)
    assert (ln, le) == ([18, 14, 22], [12, 6, 16, 10, 4])
    assert (rn, re) == ([13, 21, 11], [15, 9, 3])


def test_fig_stats(fig_tuple):
    assert stat_constant(4, 3, 2) == 18
    assert tuple_stats(fig_tuple) == (7, 3, 8)
    assert fast_stat(fig_tuple) == 8
    assert fig_tuple.area() == 14


def test_fig_skeleton(fig_tuple):
    left, right = fig_tuple.components
    assert skeleton([left]) == ((1, 3, 3), (2, 2, 2), (3, 3, 4))
    assert skeleton([right]) == ((1, 2, 1), (2, 3, 2), (3, 1, 1))
    assert skeleton_omega(skeleton(fig_tuple), 4) == (14, (2, 2, 1, 1))


# single paths -------------------------------------------------------------------------

def test_validate_examples():
    assert bool(validate_cpf(LabeledPath(2, 1, (0,), (1,))))
    assert bool(validate_cpf(LabeledPath(1, 1, (0,), (1,))))
    bad = validate_cpf(LabeledPath(3, 2, (1, 1), (1, 2)))
    assert not bad
    assert any("start_x" in p for p in bad.problems)
    assert any("below the line" in p for p in bad.problems)


def test_cyclic_label_condition():
    # (1,2): north steps at x = -1 and 0 end with a north step at start + m
    assert not validate_cpf(LabeledPath(1, 2, (-1, 0), (1, 2)))
    assert bool(validate_cpf(LabeledPath(1, 2, (-1, 0), (2, 1))))


def test_hugging_path():
    assert area_and_aseq(LabeledPath(2, 1, (0,), (1,))) == (0, (0,))
    t = PathTuple((LabeledPath(2, 1, (0,), (1,)),))
    assert step_contents(t) == [([0], [-1, -2])]
    assert tuple_stats(t) == (0, 0, 0)


def test_shift_keeps_contents():
    p = LabeledPath(3, 2, (-1, 0), (1, 2))
    base = step_contents(PathTuple((p,)))
    # the same geometric path one period further along the line
    shifted = [3 * y - 2 * x for y, x in zip((2, 3), (2, 3))]
    assert shifted == base[0][0]


def test_precedes_examples():
    a, b = LabeledPath(1, 1, (0,), (1,)), LabeledPath(1, 1, (-1,), (1,))
    assert precedes(a, b)
    c, d = LabeledPath(2, 1, (0,), (1,)), LabeledPath(2, 1, (-1,), (1,))
    assert not precedes(c, d)
    for p in enumerate_cpf(3, 2, 3, 2):
        assert not precedes(p, p)


def test_precedes_rejects_mixed_shapes():
    with pytest.raises(ValueError):
        precedes(LabeledPath(1, 1, (0,), (1,)), LabeledPath(2, 1, (0,), (1,)))


def test_enumerate_examples():
    assert enumerate_cpf(2, 1, 1, 1) == [LabeledPath(2, 1, (0,), (1,)), LabeledPath(2, 1, (-1,), (1,))]
    assert enumerate_cpf(2, 1, 3, 0) == []
    assert enumerate_cpf(1, 1, 0, 2) == [LabeledPath(1, 1, (0,), (1,)), LabeledPath(1, 1, (0,), (2,))]


@pytest.mark.parametrize("m, n, area, labels", [(1, 1, 2, 2), (2, 1, 3, 2), (3, 2, 3, 2), (2, 3, 2, 3), (1, 2, 3, 2)])
def test_enumeration_matches_naive(m, n, area, labels):
    got = enumerate_cpf(m, n, area, labels)
    assert {(p.north_x, p.labels) for p in got} == naive_cpf(m, n, area, labels)
    keys = [(p.area(), p.north_x, p.labels) for p in got]
    assert keys == sorted(keys)


def test_enumeration_counts():
    # frozen from the naive enumeration above
    counts = [len(enumerate_cpf(*args)) for args in [(1, 1, 0, 1), (1, 1, 2, 2), (2, 1, 2, 2), (3, 2, 3, 2), (2, 3, 2, 3)]]
    assert counts == [1, 6, 6, 19, 29]


def test_enumeration_is_graded():
    small = set(enumerate_cpf(3, 2, 2, 2))
    assert small <= set(enumerate_cpf(3, 2, 3, 2))
    assert small <= set(enumerate_cpf(3, 2, 2, 3))


def test_chain_split():
    for budget in (0, 1, 3):
        full = set(enumerate_chains("all", 1, 2, 1, budget, 2))
        hat = set(enumerate_chains("hat", 1, 2, 1, budget, 2))
        bar = set(enumerate_chains("bar", 1, 2, 1, budget, 2))
        assert hat | bar == full and not hat & bar
    assert [len(enumerate_chains(k, 1, 2, 1, 3, 2)) for k in ("all", "hat", "bar")] == [8, 6, 2]


def test_chain_examples():
    chains = enumerate_chains("all", 2, 1, 1, 1, 1)
    assert (LabeledPath(1, 1, (0,), (1,)), LabeledPath(1, 1, (-1,), (1,))) in chains
    for chain in enumerate_chains("bar", 2, 2, 1, 0, 2):
        assert chain[0].aseq()[0] == 0
    for chain in enumerate_chains("all", 3, 2, 1, 4, 2):
        assert all(precedes(a, b) for a, b in zip(chain, chain[1:]))


def test_invalid_connecting_perm(fig_tuple):
    left, right = fig_tuple.components
    with pytest.raises(InvalidConnectingPermutation):
        check_connecting_perm(PathTuple((left, right), (0, 0)))
    with pytest.raises(InvalidConnectingPermutation):
        check_connecting_perm(PathTuple((left, LabeledPath(3, 2, (0, 1), (1, 1)))))


def test_json_roundtrip(fig_tuple):
    data = fig_tuple.components[0].to_json()
    assert data == {"m": 4, "n": 3, "start_x": -3, "north_x": [-3, -1, -1], "labels": [3, 2, 4]}
    assert PathTuple.from_json(fig_tuple.to_json()) == fig_tuple


def test_universe_pairs_match_fast_stat():
    uni = CpfUniverse.get(3, 2, 3, 2)
    rng = random.Random(3)
    for _ in range(50):
        i, j = rng.randrange(len(uni.paths)), rng.randrange(len(uni.paths))
        t = PathTuple((uni.paths[i], uni.paths[j]))
        assert fast_stat(t) == tuple_stats(t)[2]


UNI = CpfUniverse.get(3, 2, 4, 3)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, len(UNI.paths) - 1), min_size=1, max_size=3))
def test_stats_agree_with_naive(idx):
    t = PathTuple(tuple(UNI.paths[i] for i in idx))
    pd, ld, stat = tuple_stats(t)
    assert (pd, ld) == naive_stats(t)
    assert stat == fast_stat(t)
    assert t.area() == sum(sum(p.aseq()) for p in t.components)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, len(UNI.paths) - 1))
def test_area_is_aseq_sum(i):
    p = UNI.paths[i]
    assert p.area() == sum(p.aseq())
    assert p.passes_origin() == (p.aseq()[0] == 0)

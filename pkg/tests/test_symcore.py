from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclicpf.exactalg import T, QTCoeff
from cyclicpf.symcore import (
    Alphabet,
    DegreeExceedsVars,
    Partition,
    SymPoly,
    UnsupportedAlphabet,
    basis_vector,
    compositions,
    expand_in_basis,
    inner_product,
    kostka,
    omega_involution,
    partitions,
    plethysm,
    skew_by_e,
)


def ssyt_count(shape, content):
    """Brute-force count of semistandard tableaux of a shape with given content."""
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    letters = [i + 1 for i, mult in enumerate(content) for _ in range(mult)]
    count = 0
    for filling in set(product(sorted(set(letters)), repeat=len(cells))):
        if sorted(filling) != sorted(letters):
            continue
        tab = dict(zip(cells, filling))
        rows = all(tab[(r, c)] <= tab[(r, c + 1)] for r, c in cells if (r, c + 1) in tab)
        cols = all(tab[(r, c)] < tab[(r + 1, c)] for r, c in cells if (r + 1, c) in tab)
        count += rows and cols
    return count


def test_partition_normalizes_and_conjugates():
    lam = Partition((3, 2, 1, 0))
    assert tuple(lam) == (3, 2, 1)
    assert tuple(lam.conjugate()) == (3, 2, 1)
    with pytest.raises(ValueError):
        Partition((1, 3))
    assert tuple(Partition((4, 1)).conjugate()) == (2, 1, 1, 1)
    assert Partition((2, 2)).size == 4


def test_partition_and_composition_counts():
    assert [len(partitions(d)) for d in range(7)] == [1, 1, 2, 3, 5, 7, 11]
    assert [len(compositions(d)) for d in range(1, 6)] == [1, 2, 4, 8, 16]


def test_basis_vector_small_cases():
    assert basis_vector("h", (1,), 2) == SymPoly(2, {(1, 0): 1})
    assert basis_vector("e", (2,), 2) == SymPoly(2, {(1, 1): 1})
    s21 = basis_vector("s", (2, 1), 3)
    assert s21 == SymPoly(3, {(2, 1, 0): 1, (1, 1, 1): 2})


@pytest.mark.parametrize("shape", [(2, 1), (3, 1), (2, 2), (2, 1, 1)])
def test_schur_matches_tableau_oracle(shape):
    d = sum(shape)
    s = basis_vector("s", shape, d)
    for mu in partitions(d):
        assert s.coefficient(tuple(mu) + (0,) * (d - len(mu))) == ssyt_count(shape, mu)
        assert kostka(Partition(shape), tuple(mu)) == ssyt_count(shape, mu)


def test_degree_exceeds_vars():
    with pytest.raises(DegreeExceedsVars):
        expand_in_basis(SymPoly(2, {(2, 1): 1}), "s")
    assert basis_vector("e", (3,), 2).is_zero()


def test_basis_changes():
    e1sq = basis_vector("e", (1, 1), 2)
    assert expand_in_basis(e1sq, "h").coeffs == {Partition((1, 1)): 1}
    assert expand_in_basis(basis_vector("s", (1, 1), 2), "e").coeffs == {Partition((2,)): 1}
    h2p = expand_in_basis(basis_vector("h", (2,), 2), "p").coeffs
    assert h2p == {Partition((2,)): Fraction(1, 2), Partition((1, 1)): Fraction(1, 2)}


def test_inner_products():
    s2, s11 = basis_vector("s", (2,), 2), basis_vector("s", (1, 1), 2)
    assert inner_product(s2, s2) == 1
    assert inner_product(s2, s11) == 0
    # h_2 = s_2, so its norm is 1; the p_2 and h_11 norms are z_(2) = z_(11) = 2
    assert inner_product(basis_vector("h", (2,), 2), basis_vector("h", (2,), 2)) == 1
    assert inner_product(basis_vector("p", (2,), 2), basis_vector("p", (2,), 2)) == 2
    assert inner_product(basis_vector("h", (1, 1), 2), basis_vector("h", (1, 1), 2)) == 2


def test_omega_examples():
    assert omega_involution(basis_vector("s", (2,), 2)).coeffs == {Partition((1, 1)): 1}
    w = omega_involution(basis_vector("e", (3,), 3)).to_sympoly()
    assert w == basis_vector("h", (3,), 3)


def test_skew_by_e_examples():
    s21 = basis_vector("s", (2, 1), 3)
    assert skew_by_e(0, s21).coeffs == {Partition((2, 1)): 1}
    assert skew_by_e(1, s21).coeffs == {Partition((2,)): 1, Partition((1, 1)): 1}
    assert skew_by_e(2, basis_vector("s", (1, 1), 2)).coeffs == {Partition(()): 1}


def test_skew_by_e_vertical_strips():
    # e_i^perp s_mu: sum over nu with mu/nu a vertical i-strip, via Pieri adjointness
    for d in range(1, 6):
        for mu in partitions(d):
            for i in range(0, min(d, 3) + 1):
                got = skew_by_e(i, basis_vector("s", mu, d)).coeffs
                for nu in partitions(d - i):
                    prod = basis_vector("s", nu, d) * basis_vector("e", (i,), d) if i else basis_vector("s", nu, d)
                    want = expand_in_basis(prod, "s").coefficient(mu)
                    assert got.get(nu, 0) == want


def test_plethysm_one_minus_t_on_e_power():
    for k in (1, 2, 3):
        got = plethysm(basis_vector("e", (1,) * k, k), Alphabet.ONE_MINUS_T)
        assert got == basis_vector("h", (1,) * k, k) * (1 - T) ** k


def test_plethysm_difference_alphabet():
    got = plethysm(basis_vector("h", (1,), 1), Alphabet.Y_MINUS_Z)
    assert got == {(Partition((1,)), Partition(())): 1, (Partition(()), Partition((1,))): -1}
    s22 = plethysm(basis_vector("s", (2, 2), 4), Alphabet.Y_MINUS_Z)
    assert s22[(Partition((2, 2)), Partition(()))] == 1
    assert s22[(Partition((3, 1)), Partition(()))] == -1
    assert s22[(Partition((2, 1)), Partition((1,)))] == -1


def test_unsupported_alphabet():
    with pytest.raises(UnsupportedAlphabet):
        plethysm(basis_vector("h", (1,), 1), "X+Y")


def sym_polys(d: int, nvars: int):
    parts = partitions(d)
    return st.lists(st.integers(-3, 3), min_size=len(parts), max_size=len(parts)).map(
        lambda cs: sum((basis_vector("m", p, nvars) * c for p, c in zip(parts, cs)), SymPoly(nvars))
    )


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4).flatmap(lambda d: sym_polys(d, 4)), st.sampled_from("mehps"))
def test_basis_roundtrip(f, kind):
    assert expand_in_basis(f, kind).to_sympoly() == f


@settings(max_examples=20, deadline=None)
@given(sym_polys(2, 4), sym_polys(2, 4))
def test_omega_is_multiplicative(f, g):
    lhs = omega_involution(f * g).to_sympoly()
    rhs = omega_involution(f).to_sympoly() * omega_involution(g).to_sympoly()
    assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(sym_polys(2, 4))
def test_omega_is_an_involution(f):
    assert omega_involution(omega_involution(f).to_sympoly()).to_sympoly() == f


@settings(max_examples=15, deadline=None)
@given(sym_polys(1, 3), sym_polys(2, 3))
def test_plethysm_multiplicative(f, g):
    prod = plethysm(f * g, Alphabet.ONE_MINUS_T)
    assert prod == plethysm(f, Alphabet.ONE_MINUS_T) * plethysm(g, Alphabet.ONE_MINUS_T)
    assert plethysm(f * g, Alphabet.X) == f * g
    a_prod = plethysm(f * g, Alphabet.A_MINUS_AINV)
    fa, ga = plethysm(f, Alphabet.A_MINUS_AINV), plethysm(g, Alphabet.A_MINUS_AINV)
    conv = {}
    for e1, c1 in fa.items():
        for e2, c2 in ga.items():
            conv[e1 + e2] = conv.get(e1 + e2, 0) + c1 * c2
    assert a_prod == {e: c for e, c in conv.items() if c != 0}


def test_json_layout():
    data = expand_in_basis(basis_vector("h", (2,), 2), "s").to_json()
    assert data["basis"] == "s"
    assert [c["partition"] for c in data["coeffs"]] == [[2]]

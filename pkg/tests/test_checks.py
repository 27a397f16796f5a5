import pytest

from cyclicpf.checks import (
    CHECK_NAMES,
    DEFAULTS,
    BudgetTooSmall,
    CheckReport,
    UnknownCheck,
    assembled_rhs,
    compare_polys,
    named_function,
    run_check,
)
from cyclicpf.exactalg import Q, T
from cyclicpf.macdonald import nabla_power
from cyclicpf.symcore import SymPoly, basis_vector


def test_every_check_has_defaults():
    assert set(CHECK_NAMES) == set(DEFAULTS)
    assert len(CHECK_NAMES) == 12


def test_unknown_check():
    with pytest.raises(UnknownCheck):
        run_check("nope")


def test_budget_too_small():
    with pytest.raises(BudgetTooSmall):
        run_check("main", m=2, n=1, k=2, area=1, guard=1)


def test_named_functions():
    assert named_function("s21") == basis_vector("s", (2, 1), 3)
    with pytest.raises(ValueError):
        named_function("s4")


def test_failing_report_carries_witness():
    a = SymPoly(2, {(1, 0): Q})
    b = SymPoly(2, {(1, 0): Q + T})
    rep = CheckReport("synthetic", {})
    rep.record("first", compare_polys(a, b))
    rep.record("second", None)
    assert not rep.passed and rep.cases == 2
    assert rep.witness == {"case": "first", "t": 1, "xexp": [1], "lhs": "0", "rhs": "1"}
    assert "FAIL" in rep.summary()


def test_calpha_single_part():
    rep = run_check("calpha", m=2, n=1, alpha=(1,))
    assert rep.passed and rep.cases == 1


def test_nabla_e1():
    rep = run_check("nabla-n1", m=2, f="e1", max_degree=1)
    assert rep.passed


def test_gamma_small():
    rep = run_check("gamma", m=1, n=1, k=2)
    assert rep.passed
    assert rep.cases > 5


@pytest.mark.parametrize("name, params", [
    ("counts", {"m": 2, "n": 1, "k": 2}),
    ("lw", {"m": 1, "max_degree": 2}),
    ("jacobi-trudi", {"m": 2, "n": 1, "area": 3, "labels": 2, "max_degree": 2}),
    ("sw", {"m": 2, "n": 1, "area": 3, "labels": 2}),
    ("qsw", {"m": 2, "n": 1, "area": 3, "labels": 2}),
    ("main", {"m": 1, "n": 1, "k": 2, "area": 4}),
    ("wilson", {"m": 2, "n": 1, "k": 2, "area": 4}),
    ("cycling", {"m": 2, "n": 1, "area": 3, "labels": 2, "samples": 30}),
])
def test_checks_pass_at_small_budgets(name, params):
    rep = run_check(name, **params)
    assert rep.passed, rep.witness


def test_assembled_rhs_at_n1_is_nabla():
    got = assembled_rhs(1, 1, 2, 2)
    assert got == nabla_power(basis_vector("e", (1, 1), 2), 1)


def test_report_json_roundtrip():
    rep = run_check("counts", m=1, n=1, k=2)
    data = rep.to_json()
    assert data["name"] == "counts" and data["verdict"] == "pass"

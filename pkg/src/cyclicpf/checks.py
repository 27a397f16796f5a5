"""Verification checks over the operator, bijection and symmetric-function layers."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .bijection import (
    decompose_pf,
    enumerate_pf,
    enumerate_ptab,
    gamma,
    pf_stats,
    pf_touch_sum,
    pos_crossings,
    psi,
    same_skeleton_tuples,
    touch,
    up,
    down,
    valid_connecting_perms,
)
from .ehaops import (
    Budget,
    OmegaSeries,
    SignedWordSum,
    WordEngine,
    build_H,
    build_J,
    build_Jprime,
    det_expand,
    h,
    hbar,
    hhat,
    omega_words,
    phi_operator,
    rhs_main,
    rhs_wilson,
    skeleton_projection,
)
from .exactalg import Q, QTCoeff
from .macdonald import c_alpha, nabla_power, schur_to_calpha
from .paths import CpfUniverse, PathTuple, fast_stat, skeleton, stat_constant, tuple_stats, validate_cpf
from .symcore import Partition, SymPoly, basis_vector, compositions, expand_in_basis, partitions

CHECK_NAMES = (
    "sw", "qsw", "calpha", "gamma", "nabla-n1", "jacobi-trudi",
    "lw", "main", "wilson", "cycling", "resheet", "counts",
)


class UnknownCheck(KeyError):
    pass


class BudgetTooSmall(ValueError):
    pass


@dataclass
class CheckReport:
    name: str
    params: Dict[str, object]
    verdict: str = "pass"
    witness: Optional[Dict[str, object]] = None
    timing: float = 0.0
    notes: List[str] = field(default_factory=list)
    cases: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def record(self, label: str, witness: Optional[Dict[str, object]]) -> None:
        """Count one comparison; keep the first failure as the witness."""
        self.cases += 1
        if witness is not None and self.witness is None:
            self.verdict = "fail"
            self.witness = {"case": label, **witness}

    def to_json(self) -> dict:
        return asdict(self)

    def summary(self) -> str:
        p = ", ".join(f"{k}={v}" for k, v in self.params.items())
        line = f"{self.name}({p}): {self.verdict.upper()} [{self.cases} cases, {self.timing:.2f}s]"
        if self.witness:
            line += f" witness={self.witness}"
        return line


# comparison helpers --------------------------------------------------------------

def _coeff_str(c: object) -> str:
    return str(QTCoeff.coerce(c))


def compare_polys(lhs: SymPoly, rhs: SymPoly) -> Optional[Dict[str, object]]:
    """First differing (t-degree, x-partition) coefficient, or None."""
    keys = sorted(set(lhs.terms) | set(rhs.terms), reverse=True)
    for lam in keys:
        a, b = QTCoeff.coerce(lhs.coefficient(lam)), QTCoeff.coerce(rhs.coefficient(lam))
        if a != b:
            degrees = sorted({te for _, te in a.terms} | {te for _, te in b.terms})
            for te in degrees:
                if a.t_part(te) != b.t_part(te):
                    return {
                        "t": te,
                        "xexp": [x for x in lam if x],
                        "lhs": _coeff_str(a.t_part(te)),
                        "rhs": _coeff_str(b.t_part(te)),
                    }
    return None


def compare_projections(lhs: Dict, rhs: Dict) -> Optional[Dict[str, object]]:
    for z in sorted(set(lhs) | set(rhs)):
        a, b = lhs.get(z, QTCoeff()), rhs.get(z, QTCoeff())
        if a != b:
            return {"skeleton": [list(x) for x in z], "lhs": str(a), "rhs": str(b)}
    return None


def compare_values(label: str, lhs: object, rhs: object) -> Optional[Dict[str, object]]:
    if lhs == rhs:
        return None
    return {"quantity": label, "lhs": repr(lhs), "rhs": repr(rhs)}


def _window_hi(area: int, guard: int, k: int) -> int:
    hi = area - guard * k
    if hi < 0:
        raise BudgetTooSmall(f"area budget {area} with guard {guard} leaves no comparable degree")
    return hi


NAMED_FUNCTIONS: Dict[str, Tuple[str, Tuple[int, ...]]] = {
    "e1": ("e", (1,)),
    "e2": ("e", (2,)),
    "h2": ("h", (2,)),
    "s21": ("s", (2, 1)),
    "s111": ("s", (1, 1, 1)),
}


def named_function(name: str) -> SymPoly:
    try:
        kind, lam = NAMED_FUNCTIONS[name]
    except KeyError:
        raise ValueError(f"unknown function {name!r}; choose from {sorted(NAMED_FUNCTIONS)}") from None
    return basis_vector(kind, lam, sum(lam))


_OPS = {"h": h, "hhat": hhat, "hbar": hbar}
_PREFIXES = ((), (h(1),), (hhat(1),), (hbar(1),))


# individual checks ---------------------------------------------------------------------

def check_sw(rep: CheckReport, m: int, n: int, area: int, labels: int, max_index: int = 2) -> None:
    """Same-type commutation, including short prefix contexts."""
    budget = Budget(m, n, area, labels)
    for kind, op in _OPS.items():
        for a, b in product(range(1, max_index + 1), repeat=2):
            if a >= b:
                continue
            for pre in _PREFIXES:
                lhs = skeleton_projection(SignedWordSum.word(*pre, op(a), op(b)), budget)
                rhs = skeleton_projection(SignedWordSum.word(*pre, op(b), op(a)), budget)
                rep.record(f"{kind}{a}{kind}{b} prefix={list(map(str, pre))}", compare_projections(lhs, rhs))


def check_qsw(rep: CheckReport, m: int, n: int, area: int, labels: int, max_index: int = 2) -> None:
    """q(hhat_b hbar_a - hhat_{a-1} hbar_{b+1}) = hbar_a hhat_b - hbar_{b+1} hhat_{a-1}."""
    budget = Budget(m, n, area, labels)
    W = SignedWordSum.word
    for a in range(1, max_index + 1):
        for b in range(0, max_index + 1):
            for pre in _PREFIXES:
                p = W(*pre)
                lhs = p * (W(hhat(b), hbar(a)) - W(hhat(a - 1), hbar(b + 1))) * Q
                rhs = p * (W(hbar(a), hhat(b)) - W(hbar(b + 1), hhat(a - 1)))
                rep.record(
                    f"a={a} b={b} prefix={list(map(str, pre))}",
                    compare_projections(skeleton_projection(lhs, budget), skeleton_projection(rhs, budget)),
                )


def check_calpha(rep: CheckReport, m: int, n: int, k: int, alpha: Optional[Sequence[int]], guard: int) -> None:
    """Omega(det H(alpha) 1) against the parking-function touch sum."""
    alphas = [tuple(alpha)] if alpha else [tuple(a) for a in compositions(k)]
    for al in alphas:
        kk = sum(al)
        labels = kk * n
        top = stat_constant(m, n, kk)
        lhs = omega_words(det_expand(build_H(al)), Budget(m, n, top + guard, labels))
        rhs = pf_touch_sum(m, n, kk, al, labels)
        rep.record(f"alpha={list(al)}", compare_polys(lhs.poly, rhs))


def check_gamma(rep: CheckReport, m: int, n: int, k: int) -> None:
    """Gamma/Psi: counts per touch, round trips, skeleton and statistic."""
    labels = k * n
    ptabs = enumerate_ptab(m, n, k, labels)
    pfs = enumerate_pf(m, n, k, labels)
    images = {}
    for t in ptabs:
        g = gamma(t)
        images[g] = t
        rep.record(f"psi(gamma) {t.to_json()}", compare_values("psi(gamma(T))", psi(g), t))
        rep.record(f"skeleton {t.to_json()}", compare_values("skeleton", skeleton(t), skeleton(decompose_pf(g))))
        pd, ld, _ = tuple_stats(t)
        gpd, gld, _ = pf_stats(g)
        rep.record(f"stat {t.to_json()}", compare_values("pdinv+ldinv", pd + ld, gpd + gld))
    rep.record("image", compare_values("|Gamma image| vs |PF|", len(images), len(pfs)))
    for g in pfs:
        rep.record(f"gamma(psi) {g.to_json()}", compare_values("gamma(psi(g))", gamma(psi(g)), g))
    for al in compositions(k):
        n_pf = sum(1 for g in pfs if touch(g) == al)
        n_pt = sum(1 for g in images if touch(g) == al)
        rep.record(f"count alpha={list(al)}", compare_values("|PTab(alpha)| vs |touch alpha|", n_pt, n_pf))


def check_counts(rep: CheckReport, m: int, n: int, k: int) -> None:
    labels = k * n
    rep.record("total", compare_values(
        "|PTab| vs |PF|", len(enumerate_ptab(m, n, k, labels)), len(enumerate_pf(m, n, k, labels))
    ))


def _n1_area(m: int, d: int, guard: int) -> int:
    return stat_constant(m, 1, d) + guard


def check_nabla_n1(
    rep: CheckReport, m: int, fnames: Sequence[str], max_degree: int, guard: int,
    lam: Optional[Sequence[int]] = None, alpha: Optional[Sequence[int]] = None,
) -> None:
    """Phi, J, J' and H against nabla^m at n = 1."""
    for name in fnames:
        f = named_function(name)
        d = f.degree()
        lhs = omega_words(phi_operator(f), Budget(m, 1, _n1_area(m, d, guard), d))
        rep.record(f"Phi({name})", compare_polys(lhs.poly, nabla_power(f, m)))
    lams = [Partition(lam)] if lam else [p for d in range(1, max_degree + 1) for p in partitions(d)]
    for p in lams:
        d = p.size
        target = nabla_power(basis_vector("s", p, d), m)
        budget = Budget(m, 1, _n1_area(m, d, guard), d)
        rep.record(f"J{list(p)}", compare_polys(omega_words(det_expand(build_J(p)), budget).poly, target))
        jp = build_Jprime(p)
        scale = QTCoeff.monomial(jp.adj, 0, (-1) ** jp.adj)
        rep.record(f"J'{list(p)}", compare_polys(omega_words(det_expand(jp.matrix), budget).poly * scale, target))
    alphas = [tuple(alpha)] if alpha else [tuple(a) for d in range(1, max_degree + 1) for a in compositions(d)]
    for al in alphas:
        d = sum(al)
        lhs = omega_words(det_expand(build_H(al)), Budget(m, 1, _n1_area(m, d, guard), d))
        rep.record(f"H{list(al)}", compare_polys(lhs.poly, nabla_power(c_alpha(al, d), m)))


def check_lw(rep: CheckReport, m: int, max_degree: int, guard: int, lam: Optional[Sequence[int]] = None) -> None:
    """(-q)^adj Omega(det J'(lam) 1) = nabla^m s_lam at n = 1."""
    lams = [Partition(lam)] if lam else [p for d in range(1, max_degree + 1) for p in partitions(d)]
    for p in lams:
        d = p.size
        jp = build_Jprime(p)
        scale = QTCoeff.monomial(jp.adj, 0, (-1) ** jp.adj)
        lhs = omega_words(det_expand(jp.matrix), Budget(m, 1, _n1_area(m, d, guard), d)).poly * scale
        rep.record(f"lambda={list(p)}", compare_polys(lhs, nabla_power(basis_vector("s", p, d), m)))


def check_jacobi_trudi(
    rep: CheckReport, m: int, n: int, area: int, labels: int, max_degree: int,
    lam: Optional[Sequence[int]] = None,
) -> None:
    """Phi(s_lam) 1 = det J(lam) 1 = (-q)^adj det J'(lam) 1 on skeletons."""
    budget = Budget(m, n, area, labels)
    lams = [Partition(lam)] if lam else [p for d in range(1, max_degree + 1) for p in partitions(d)]
    for p in lams:
        phi = skeleton_projection(phi_operator(basis_vector("s", p, p.size)), budget)
        jac = skeleton_projection(det_expand(build_J(p)), budget)
        jp = build_Jprime(p)
        jpr = skeleton_projection(det_expand(jp.matrix) * QTCoeff.monomial(jp.adj, 0, (-1) ** jp.adj), budget)
        rep.record(f"Phi vs J {list(p)}", compare_projections(phi, jac))
        rep.record(f"J vs J' {list(p)}", compare_projections(jac, jpr))


def assembled_rhs(m: int, n: int, k: int, nvars: int) -> SymPoly:
    """sum_lam f^lam sum_alpha d_{lam,alpha} (touch-alpha parking function sum)."""
    total = SymPoly(nvars)
    touch_sums: Dict[Tuple[int, ...], SymPoly] = {}
    for lam in partitions(k):
        f_lam = expand_in_basis(basis_vector("e", (1,) * k, k), "s").coefficient(lam)
        if not f_lam:
            continue
        for al, d in schur_to_calpha(lam).items():
            if al not in touch_sums:
                touch_sums[al] = pf_touch_sum(m, n, k, al, nvars)
            total = total + touch_sums[al] * (d * f_lam)
    return total


def check_main(rep: CheckReport, m: int, n: int, k: int, area: int, labels: int, guard: int) -> None:
    hi = _window_hi(area, guard, k)
    lhs = rhs_main(m, n, k, area, labels)
    if n == 1:
        target = nabla_power(basis_vector("e", (1,) * k, labels), m)
    else:
        target = assembled_rhs(m, n, k, labels)
    target_w = OmegaSeries(target, area).window(0, hi)
    rep.record(f"window t<={hi}", compare_polys(lhs.window(0, hi), target_w))


def check_wilson(
    rep: CheckReport, m: int, n: int, k: int, area: int, labels: int, guard: int, positivity: bool = True,
) -> None:
    hi = _window_hi(area, guard, k)
    a = rhs_main(m, n, k, area, labels).window(0, hi)
    b = rhs_wilson(m, n, k, area, labels).window(0, hi)
    rep.record(f"window t<={hi}", compare_polys(a, b))
    if positivity:
        note = schur_positivity(m, n, k, area, labels, guard)
        if note:
            rep.notes.append(note)


def schur_positivity(m: int, n: int, k: int, area: int, labels: int, guard: int) -> Optional[str]:
    """Warning text if Omega(h_1^(k-1) hbar_1 1) has a negative Schur coefficient."""
    ws = SignedWordSum.word(*(h(1),) * (k - 1), hbar(1))
    om = omega_words(ws, Budget(m, n, area, labels))
    ex = expand_in_basis(om.window(0, area - guard), "s")
    for lam, c in ex.coeffs.items():
        for (qe, te), v in QTCoeff.coerce(c).items():
            if v < 0 or v != int(v):
                return f"WARNING: non-positive Schur coefficient at s{list(lam)} q^{qe} t^{te}: {v}"
    return None


def check_cycling(rep: CheckReport, m: int, n: int, area: int, labels: int, samples: int, seed: int) -> None:
    """up bijectivity and area law, stat cycling on tuples, Omega cycling on words."""
    uni = CpfUniverse.get(m, n, area, labels)
    images = set()
    for p in uni.paths:
        if p.area() >= area:
            continue
        q = up(p)
        ok = bool(validate_cpf(q)) and not q.passes_origin() and q.area() == p.area() + 1 and down(q) == p
        rep.record(f"up {p.to_json()}", None if ok else {"path": p.to_json(), "lhs": q.to_json(), "rhs": "hat path, area+1"})
        images.add(q)
    hats = {p for p in uni.paths if not p.passes_origin() and p.area() >= 1}
    rep.record("up onto hat paths", compare_values("up image", sorted(images - hats, key=str), []))
    rep.record("up covers hat paths", compare_values("missed", sorted(hats - images, key=str), []))
    rng = random.Random(seed)
    pool = [p for p in uni.paths if p.area() < area]
    for _ in range(samples):
        k = rng.randint(1, 3)
        comps = tuple(rng.choice(pool) for _ in range(k))
        t = PathTuple(comps)
        t2 = PathTuple((up(comps[-1]),) + comps[:-1])
        rep.record(f"stat cycling {t.to_json()}", compare_values("stat", fast_stat(t), fast_stat(t2)))
    budget = Budget(m, n, area, labels)
    for a in (1, 2):
        for v in ((), (h(1),), (hhat(1),), (hbar(1),), (hbar(2),), (h(1), hbar(1))):
            lhs = omega_words(SignedWordSum.word(*v, hhat(a)), budget).window(0, area)
            rhs = omega_words(SignedWordSum.word(h(a), *v), budget)
            rhs = OmegaSeries(rhs.poly * QTCoeff.monomial(0, a), area).window(0, area)
            rep.record(f"Omega cycling a={a} v={list(map(str, v))}", compare_polys(lhs, rhs))


def _pos_total(t: PathTuple) -> int:
    pd, ld, _ = tuple_stats(t)
    return pd + ld + pos_crossings(t)


def check_resheet(
    rep: CheckReport, m: int, n: int, area: int, samples: int, seed: int,
    max_k: int = 3, general_perms: bool = False,
) -> None:
    """Skeleton invariance of pdinv+ldinv+pos, pos vs connecting permutation,
    and well-definedness of the stat increment on equal skeletons."""
    rng = random.Random(seed)
    uni = CpfUniverse.get(m, n, area, max_k * n)
    for i in range(samples):
        k = 2 + i % (max_k - 1) if max_k > 1 else 1
        t = PathTuple(tuple(rng.choice(uni.paths) for _ in range(k)))
        cls = same_skeleton_tuples(t, identity_only=not general_perms)
        values = {_pos_total(s) for s in cls}
        rep.record(
            f"resheet {t.to_json()}",
            None if len(values) == 1 else {"tuple": t.to_json(), "lhs": min(values), "rhs": max(values)},
        )
        perms = valid_connecting_perms(t.components)
        if len(perms) > 1:
            pos = {perm: pos_crossings(PathTuple(t.components, perm)) for perm in perms}
            if len(set(pos.values())) > 1:
                rep.record(f"pos vs perm {t.to_json()}", {
                    "tuple": t.to_json(),
                    "lhs": {str(k): v for k, v in pos.items()},
                    "rhs": "independent of the permutation",
                })
            else:
                rep.record("pos vs perm", None)
    check_increment(rep, m, n, min(area, 4), 3, 2)


def check_increment(rep: CheckReport, m: int, n: int, area: int, labels: int, max_k: int) -> None:
    """stat(tau, pi) - stat(tau) depends only on the skeleton of tau."""
    eng = WordEngine.get(Budget(m, n, area, labels))
    u = eng.u
    groups: Dict[Tuple, List[Tuple[int, ...]]] = {}
    for k in range(1, max_k + 1):
        for idx in product(range(len(u.paths)), repeat=k):
            if sum(u.area[i] for i in idx) > area:
                continue
            z = tuple(sorted(x for i in idx for x in u.skel[i]))
            groups.setdefault(z, []).append(idx)
    for z, members in groups.items():
        if len(members) < 2:
            continue
        used = sum(j for _, j, _ in z)
        for p in range(len(u.paths)):
            if u.area[p] + used > area:
                continue
            deltas = {
                (stat_constant(m, n, len(idx) + 1) - eng.inversions(idx + (p,)))
                - (stat_constant(m, n, len(idx)) - eng.inversions(idx))
                for idx in members
            }
            rep.record(
                f"increment skeleton={z} path={p}",
                None if len(deltas) == 1 else {"skeleton": [list(x) for x in z], "lhs": min(deltas), "rhs": max(deltas)},
            )


# dispatch ----------------------------------------------------------------------------------

DEFAULTS: Dict[str, Dict[str, object]] = {
    "sw": {"m": 2, "n": 1, "area": 4, "labels": 4},
    "qsw": {"m": 2, "n": 1, "area": 4, "labels": 4},
    "calpha": {"m": 2, "n": 1, "k": 2, "guard": 1},
    "gamma": {"m": 1, "n": 1, "k": 2},
    "counts": {"m": 1, "n": 1, "k": 2},
    "nabla-n1": {"m": 2, "max_degree": 3, "guard": 1, "f": "all"},
    "lw": {"m": 2, "max_degree": 3, "guard": 1},
    "jacobi-trudi": {"m": 2, "n": 1, "area": 4, "labels": 3, "max_degree": 3},
    "main": {"m": 2, "n": 1, "k": 2, "area": 5, "guard": 1},
    "wilson": {"m": 3, "n": 2, "k": 2, "area": 6, "guard": 1},
    "cycling": {"m": 3, "n": 2, "area": 4, "labels": 3, "samples": 300, "seed": 1},
    "resheet": {"m": 2, "n": 1, "area": 3, "samples": 100, "seed": 1, "max_k": 3},
}


def run_check(name: str, **params: object) -> CheckReport:
    """Run one named check; missing parameters come from DEFAULTS."""
    if name not in CHECK_NAMES:
        raise UnknownCheck(f"unknown check {name!r}; known: {', '.join(CHECK_NAMES)}")
    p = dict(DEFAULTS[name])
    p.update({k: v for k, v in params.items() if v is not None})
    if "labels" not in p and "k" in p and "n" in p and name in ("main", "wilson"):
        p["labels"] = int(p["k"]) * int(p["n"])
    rep = CheckReport(name, dict(p))
    start = time.perf_counter()
    g = lambda key, default=None: p.get(key, default)  # noqa: E731
    if name == "sw":
        check_sw(rep, g("m"), g("n"), g("area"), g("labels"))
    elif name == "qsw":
        check_qsw(rep, g("m"), g("n"), g("area"), g("labels"))
    elif name == "calpha":
        check_calpha(rep, g("m"), g("n"), g("k"), g("alpha"), g("guard"))
    elif name == "gamma":
        check_gamma(rep, g("m"), g("n"), g("k"))
    elif name == "counts":
        check_counts(rep, g("m"), g("n"), g("k"))
    elif name == "nabla-n1":
        f = g("f")
        names = list(NAMED_FUNCTIONS) if f in (None, "all") else [f]
        check_nabla_n1(rep, g("m"), names, g("max_degree"), g("guard"), g("lambda"), g("alpha"))
    elif name == "lw":
        check_lw(rep, g("m"), g("max_degree"), g("guard"), g("lambda"))
    elif name == "jacobi-trudi":
        check_jacobi_trudi(rep, g("m"), g("n"), g("area"), g("labels"), g("max_degree"), g("lambda"))
    elif name == "main":
        check_main(rep, g("m"), g("n"), g("k"), g("area"), g("labels"), g("guard"))
    elif name == "wilson":
        check_wilson(rep, g("m"), g("n"), g("k"), g("area"), g("labels"), g("guard"))
    elif name == "cycling":
        check_cycling(rep, g("m"), g("n"), g("area"), g("labels"), g("samples"), g("seed"))
    elif name == "resheet":
        check_resheet(rep, g("m"), g("n"), g("area"), g("samples"), g("seed"), g("max_k"), bool(g("general_perms", False)))
    rep.timing = time.perf_counter() - start
    return rep

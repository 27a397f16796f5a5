"""Command line harness: verify identities, enumerate objects, emit tables."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from .bijection import enumerate_pf, enumerate_ptab
from .checks import CHECK_NAMES, BudgetTooSmall, CheckReport, UnknownCheck, run_check
from .ehaops import OmegaSeries, phi_operator, rhs_main, rhs_wilson, word_str
from .exactalg import QTCoeff
from .macdonald import macdonald_table, schur_to_calpha
from .paths import enumerate_chains, enumerate_cpf
from .symcore import basis_vector


# emitters ------------------------------------------------------------------------

def _int_list(text: Optional[str]) -> Optional[tuple]:
    if text is None:
        return None
    return tuple(int(x) for x in text.replace(" ", "").strip("()[]").split(",") if x)


def series_rows(series: OmegaSeries, lo: int = 0, hi: Optional[int] = None) -> List[List[str]]:
    """Dense (t-degree, x-partition, q-coefficient) rows over a t window."""
    hi = series.t_max if hi is None else hi
    rows = []
    for lam in sorted(series.poly.terms, reverse=True):
        c = QTCoeff.coerce(series.poly.coefficient(lam))
        part = [x for x in lam if x]
        for te in range(lo, hi + 1):
            rows.append([str(te), " ".join(map(str, part)), str(c.t_part(te))])
    return rows


def report_rows(reports: Iterable[CheckReport]) -> List[List[str]]:
    rows = []
    for r in reports:
        w = r.witness or {}
        rows.append([
            r.name, json.dumps(r.params, sort_keys=True, default=str), r.verdict,
            json.dumps(w, sort_keys=True, default=str), f"{r.timing:.3f}",
        ])
    return rows


def emit(kind: str, payload: object, target: str | Path) -> Path:
    """Write a series, table or report as JSON or CSV (chosen by file suffix)."""
    target = Path(target)
    as_csv = target.suffix.lower() == ".csv"
    if kind == "series":
        series = payload
        if as_csv:
            return _write_csv(target, ["t", "x_partition", "q_coefficient"], series_rows(series))
        return _write_json(target, series.to_json())
    if kind == "table":
        header, rows = payload
        if as_csv:
            return _write_csv(target, header, rows)
        return _write_json(target, [dict(zip(header, r)) for r in rows])
    if kind == "report":
        reports = list(payload)
        if as_csv:
            return _write_csv(target, ["check", "params", "verdict", "witness", "seconds"], report_rows(reports))
        return _write_json(target, [r.to_json() for r in reports])
    raise ValueError(f"unknown emit kind {kind!r}")


def _write_csv(target: Path, header: Sequence[str], rows: Sequence[Sequence[str]]) -> Path:
    with target.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return target


def _write_json(target: Path, data: object) -> Path:
    target.write_text(json.dumps(data, indent=2, default=str) + "\n")
    return target


# tables ----------------------------------------------------------------------------

def macdonald_rows(degree: int, nvars: int) -> tuple:
    table = macdonald_table(degree, nvars)
    rows = []
    for mu in table.shapes:
        for nu, c in sorted(table.entries[mu].terms.items(), reverse=True):
            rows.append([" ".join(map(str, mu)), " ".join(str(x) for x in nu if x), str(c), str(table.eigen[mu])])
    return ["mu", "monomial", "coefficient", "eigenvalue"], rows


def phi_rows(kind: str, lam: Sequence[int]) -> tuple:
    ws = phi_operator(basis_vector(kind, lam, sum(lam)))
    return ["word", "coefficient"], [[word_str(w), str(c)] for c, w in ws.items()]


def calpha_rows(lam: Sequence[int]) -> tuple:
    return ["alpha", "coefficient"], [[" ".join(map(str, al)), str(c)] for al, c in schur_to_calpha(lam).items()]


# configuration -------------------------------------------------------------------------

def load_config(path: Optional[str]) -> Dict[str, object]:
    if not path:
        return {}
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def config_params(config: Dict[str, object], check: str, m, n, k) -> Dict[str, object]:
    """Defaults from the config: top-level "checks" then "budgets" keyed "m,n,k"."""
    out: Dict[str, object] = {}
    out.update(config.get("checks", {}).get(check, {}))
    key = ",".join(str(x) for x in (m, n, k) if x is not None)
    out.update(config.get("budgets", {}).get(key, {}))
    return out


# argument parsing ----------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--area-budget", dest="area", type=int)
    p.add_argument("--labels", type=int)
    p.add_argument("--json", dest="json_out")
    p.add_argument("--csv", dest="csv_out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclicpf", allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification checks", allow_abbrev=False)
    v.add_argument("checks", nargs="+", choices=CHECK_NAMES + ("all",))
    _add_common(v)
    v.add_argument("--alpha")
    v.add_argument("--lambda", dest="lam")
    v.add_argument("--guard", type=int)
    v.add_argument("--f")
    v.add_argument("--max-degree", dest="max_degree", type=int)
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--max-k", dest="max_k", type=int)
    v.add_argument("--config")

    e = sub.add_parser("enumerate", help="list combinatorial objects", allow_abbrev=False)
    e.add_argument("kind", choices=("cpf", "pf", "ptab", "chains"))
    _add_common(e)
    e.add_argument("--chain-kind", dest="chain_kind", default="all", choices=("all", "hat", "bar"))
    e.add_argument("--length", type=int, default=1)

    t = sub.add_parser("table", help="emit lookup tables", allow_abbrev=False)
    t.add_argument("kind", choices=("macdonald", "phi", "calpha"))
    t.add_argument("--degree", type=int, default=2)
    t.add_argument("--nvars", type=int)
    t.add_argument("--lambda", dest="lam", default="2,2")
    t.add_argument("--basis", default="s", choices=("s", "h", "e", "m", "p"))
    t.add_argument("--json", dest="json_out")
    t.add_argument("--csv", dest="csv_out")

    s = sub.add_parser("series", help="emit a right-hand-side series", allow_abbrev=False)
    s.add_argument("kind", choices=("main", "wilson"))
    _add_common(s)
    s.add_argument("--guard", type=int, default=1)
    return parser


def _outputs(args: argparse.Namespace, kind: str, payload: object) -> None:
    if args.json_out:
        emit(kind, payload, args.json_out)
    if args.csv_out:
        emit(kind, payload, args.csv_out)


def cmd_verify(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    names = list(CHECK_NAMES) if "all" in args.checks else args.checks
    reports = []
    for name in names:
        params = config_params(config, name, args.m, args.n, args.k)
        flags = {
            "m": args.m, "n": args.n, "k": args.k, "area": args.area, "labels": args.labels,
            "guard": args.guard, "alpha": _int_list(args.alpha), "lambda": _int_list(args.lam),
            "f": args.f, "max_degree": args.max_degree, "samples": args.samples,
            "seed": args.seed, "max_k": args.max_k,
        }
        params.update({k: v for k, v in flags.items() if v is not None})
        try:
            rep = run_check(name, **params)
        except BudgetTooSmall as exc:
            rep = CheckReport(name, params, verdict="skipped", notes=[str(exc)])
        reports.append(rep)
        print(rep.summary())
        for note in rep.notes:
            print(f"  {note}")
    _outputs(args, "report", reports)
    return 0 if all(r.passed for r in reports) else 1


def cmd_enumerate(args: argparse.Namespace) -> int:
    m, n = args.m or 1, args.n or 1
    if args.kind == "cpf":
        data = [p.to_json() for p in enumerate_cpf(m, n, args.area or 0, args.labels or n)]
    elif args.kind == "pf":
        k = args.k or 1
        data = [g.to_json() for g in enumerate_pf(m, n, k, args.labels or k * n)]
    elif args.kind == "ptab":
        k = args.k or 1
        data = [t.to_json() for t in enumerate_ptab(m, n, k, args.labels or k * n)]
    else:
        chains = enumerate_chains(args.chain_kind, args.length, m, n, args.area or 0, args.labels or n)
        data = [[p.to_json() for p in c] for c in chains]
    text = json.dumps(data, indent=2)
    if args.json_out:
        Path(args.json_out).write_text(text + "\n")
    else:
        print(text)
    print(f"{len(data)} objects", file=sys.stderr)
    return 0


def cmd_table(args: argparse.Namespace) -> int:
    lam = _int_list(args.lam)
    if args.kind == "macdonald":
        payload = macdonald_rows(args.degree, args.nvars or args.degree)
    elif args.kind == "phi":
        payload = phi_rows(args.basis, lam)
    else:
        payload = calpha_rows(lam)
    header, rows = payload
    if not (args.json_out or args.csv_out):
        print(",".join(header))
        for r in rows:
            print(",".join(r))
    _outputs(args, "table", payload)
    return 0


def cmd_series(args: argparse.Namespace) -> int:
    m, n, k = args.m or 1, args.n or 1, args.k or 1
    area, labels = args.area if args.area is not None else 3, args.labels or k * n
    fn = rhs_main if args.kind == "main" else rhs_wilson
    series = fn(m, n, k, area, labels)
    hi = area - args.guard * k
    window = OmegaSeries(series.window(0, hi), hi)
    if not (args.json_out or args.csv_out):
        for row in series_rows(window):
            print(",".join(row))
    _outputs(args, "series", window)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "enumerate":
            return cmd_enumerate(args)
        if args.command == "table":
            return cmd_table(args)
        return cmd_series(args)
    except (UnknownCheck, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

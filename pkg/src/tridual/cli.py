"""Command-line front end.

    tridual theorem-check --n-max 12 --trials 1000 --seed 7
    tridual spectrum --nu 4 --mu 2 --twice-j 1 --parity even
    tridual verify --grid acceptance
    tridual duality --nu 4 --mu 2 --twice-j 1 --parity even
    tridual residue --twice-j 2 --parity even
    tridual plot-data --nu 1 --mu 2 --twice-j 2 --output fig3 --figure fig3.png
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import qes, qmf, schrodinger, sweeps
from .plotting import level_diagram, render_level_diagram
from .qes import Parity, QesParams
from .tridiag import TridiagonalMatrix, char_poly, determinant, is_symmetrizable, negate_diagonal

COMMANDS = ("theorem-check", "spectrum", "verify", "duality", "residue", "plot-data")

DEFAULT_TOL = {
    "theorem-check": 1e-10,
    "spectrum": 1e-12,
    "verify": 1e-6,
    "duality": 1e-10,
    "residue": 0.0,
    "plot-data": 1e-6,
}

# parameter grids used by the acceptance suite
GRIDS = {
    "duality": {
        "nu": ["1/2", "1", "2", "4"],
        "mu": ["-3", "-2", "-1", "0", "1", "2", "3"],
        "twice_j": [1, 2, 3, 4, 5],
        "parity": ["even", "odd"],
    },
    "verify": {
        "nu": ["1", "2", "4"],
        "mu": ["-2", "0", "2"],
        "twice_j": [1, 2, 3],
        "parity": ["even", "odd"],
    },
}


@dataclass
class RunConfig:
    command: str
    params: list = field(default_factory=list)
    seed: int = 0
    tol: float = 1e-10
    output: Path | None = None
    fmt: str = "csv"
    n_max: int = 12
    trials: int = 1000
    levels: int | None = None
    figure: Path | None = None
    matrix: Path | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not self.tol >= 0:
            raise ValueError("tol must be non-negative")


def fmt_num(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return f"{float(v):.12g}"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_num(v) if isinstance(v, (float, Fraction)) else v for v in row])
    return buf.getvalue()


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


def _emit(cfg: RunConfig, text: str, suffix: str | None = None) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
        return
    path = cfg.output
    if suffix is not None:
        path = path.with_name(f"{path.name}_{suffix}.{cfg.fmt}")
    path.write_text(text)


def _table(cfg: RunConfig, header, rows, suffix=None) -> None:
    if cfg.fmt == "json":
        _emit(cfg, _json_text([dict(zip(header, r)) for r in rows]), suffix)
    else:
        _emit(cfg, _csv_text(header, rows), suffix)


def _fail(command: str, failures) -> int:
    record = {"command": command, "status": "failed", "failures": failures}
    sys.stderr.write(json.dumps(record, sort_keys=True, default=str) + "\n")
    return 1


def _row_prefix(p: QesParams):
    return [str(p.nu), str(p.mu), p.twice_j, p.parity.value]


PARAM_HEADER = ["nu", "mu", "twice_j", "parity"]


def cmd_theorem_check(cfg: RunConfig) -> int:
    if cfg.matrix is not None:
        m = TridiagonalMatrix.from_json(json.loads(cfg.matrix.read_text()), exact=True)
        lemma = sweeps.lemma_holds(m)
        poly = sweeps.char_poly_reflection_holds(m)
        doc = {
            "n": m.n,
            "determinant": str(determinant(m)),
            "negated_determinant": str(determinant(negate_diagonal(m))),
            "char_poly": [str(c) for c in char_poly(m).coeffs],
            "negated_char_poly": [str(c) for c in char_poly(negate_diagonal(m)).coeffs],
            "lemma": lemma,
            "char_poly_reflection": poly,
        }
        if is_symmetrizable(m):
            doc["set_negation_residual"] = sweeps.spectrum_negation_residual(m)
        _emit(cfg, _json_text(doc))
        return 0 if lemma and poly else _fail(cfg.command, [doc])

    res = sweeps.theorem_sweep(cfg.trials, cfg.n_max, cfg.seed, cfg.tol)
    if cfg.fmt == "json":
        _emit(cfg, _json_text({
            "exact_passed": res.exact_passed,
            "exact_total": res.exact_total,
            "numeric_passed": res.numeric_passed,
            "numeric_total": res.numeric_total,
            "max_numeric_residual": fmt_num(res.max_numeric_residual),
            "n_max": cfg.n_max,
            "seed": cfg.seed,
            "tol": cfg.tol,
        }))
    else:
        _emit(cfg, (
            f"{res.exact_passed}/{res.exact_total} exact identities hold\n"
            f"{res.numeric_passed}/{res.numeric_total} spectra negate as sets "
            f"within {cfg.tol:g} (max residual {res.max_numeric_residual:.3e})\n"
        ))
    return 0 if res.passed else _fail(cfg.command, res.failures)


def cmd_spectrum(cfg: RunConfig) -> int:
    rows = []
    if cfg.levels:
        header = PARAM_HEADER + ["level", "energy", "nodes", "parity_of_state"]
        for p in cfg.params:
            st = schrodinger.bound_states(p, cfg.levels)
            for i, (e, k, par) in enumerate(zip(st.energies, st.node_counts, st.parities)):
                rows.append(_row_prefix(p) + [i, e, k, par.value])
    else:
        header = PARAM_HEADER + ["level_index", "energy"]
        for p in cfg.params:
            for level, e in qes.algebraic_spectrum(p, tol=cfg.tol).rows():
                rows.append(_row_prefix(p) + [level, e])
    _table(cfg, header, rows)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    header = PARAM_HEADER + ["level", "fd_energy", "algebraic_energy", "residual", "passed"]
    rows, failures = [], []
    for p in cfg.params:
        rep = schrodinger.validate_algebraic_sector(p, tol=cfg.tol)
        for r in rep.rows:
            rows.append(_row_prefix(p) + [r.level, r.fd_energy, r.algebraic_energy,
                                          r.residual, "yes" if r.passed else "no"])
        if not rep.passed:
            failures.append({
                "params": p.to_json(),
                "max_residual": rep.max_residual,
                "oscillation_ok": rep.oscillation_ok,
                "parities_alternate": rep.parities_alternate,
                "opposite_parity_clear": rep.opposite_parity_clear,
            })
    _table(cfg, header, rows)
    return _fail(cfg.command, failures) if failures else 0


def cmd_duality(cfg: RunConfig) -> int:
    header = PARAM_HEADER + ["level", "energy", "dual_level", "dual_energy", "residual"]
    rows, failures = [], []
    for p in cfg.params:
        rep = qes.check_reflection(p, tol=cfg.tol)
        for r in rep.rows:
            rows.append(_row_prefix(p) + [r.level, r.energy, r.dual_level, r.dual_energy, r.residual])
        if not rep.passed:
            failures.append({"params": p.to_json(), "max_residual": rep.max_residual})
    _table(cfg, header, rows)
    return _fail(cfg.command, failures) if failures else 0


def cmd_residue(cfg: RunConfig) -> int:
    reports = [qmf.residue_report(p) for p in cfg.params]
    _emit(cfg, _json_text(reports[0] if len(reports) == 1 else reports))
    return 0


def cmd_plot_data(cfg: RunConfig) -> int:
    if len(cfg.params) != 1:
        raise ValueError("plot-data takes a single parameter point")
    p = cfg.params[0]
    curves, segments = level_diagram(p, levels=cfg.levels or 5)
    _table(cfg, ["mu", "x", "V"], curves, suffix="potential" if cfg.output else None)
    if cfg.output is None and cfg.fmt == "csv":
        sys.stdout.write("\n")
    seg_rows = [
        [s.mu, s.level, s.energy, s.parity.value, "yes" if s.algebraic else "no",
         s.x_left, s.x_right]
        for s in segments
    ]
    _table(cfg, ["mu", "level", "energy", "parity", "algebraic", "x_left", "x_right"],
           seg_rows, suffix="levels" if cfg.output else None)
    if cfg.figure is not None:
        render_level_diagram(curves, segments, cfg.figure)
    return 0


HANDLERS = {
    "theorem-check": cmd_theorem_check,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "duality": cmd_duality,
    "residue": cmd_residue,
    "plot-data": cmd_plot_data,
}


def run(cfg: RunConfig) -> int:
    return HANDLERS[cfg.command](cfg)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tridual",
        description="Diagonal-negation spectra of tridiagonal matrices and sextic QES potentials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", type=Path, default=None)
        sp.add_argument("--seed", type=int, default=0)
        if name == "theorem-check":
            sp.add_argument("--n-max", type=int, default=12)
            sp.add_argument("--trials", type=int, default=1000)
            sp.add_argument("--matrix", type=Path, default=None,
                            help="JSON matrix literal to check instead of a random sweep")
            continue
        sp.add_argument("--nu", type=_rational, nargs="+", default=[Fraction(1)])
        sp.add_argument("--mu", type=_rational, nargs="+", default=[Fraction(0)])
        sp.add_argument("--twice-j", type=int, nargs="+", default=[1])
        sp.add_argument("--parity", nargs="+", choices=("even", "odd"), default=["even"])
        sp.add_argument("--params", type=Path, default=None,
                        help="JSON parameter record (or list of records)")
        sp.add_argument("--levels", type=int, default=None)
        if name in GRIDS:
            sp.add_argument("--grid", choices=("acceptance",), default=None)
        if name == "plot-data":
            sp.add_argument("--figure", type=Path, default=None)
    return parser


def _params_from_args(args) -> list:
    if getattr(args, "params", None) is not None:
        doc = json.loads(args.params.read_text())
        docs = doc if isinstance(doc, list) else [doc]
        return [QesParams.from_json(d) for d in docs]
    if getattr(args, "grid", None) == "acceptance":
        g = GRIDS[args.command]
        grid = itertools.product(g["nu"], g["mu"], g["twice_j"], g["parity"])
    else:
        grid = itertools.product(args.nu, args.mu, args.twice_j, args.parity)
    return [QesParams(nu, mu, tj, Parity(par)) for nu, mu, tj, par in grid]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = [] if args.command == "theorem-check" else _params_from_args(args)
        cfg = RunConfig(
            command=args.command,
            params=params,
            seed=args.seed,
            tol=DEFAULT_TOL[args.command] if args.tol is None else args.tol,
            output=args.output,
            fmt=args.fmt,
            n_max=getattr(args, "n_max", 12),
            trials=getattr(args, "trials", 1000),
            levels=getattr(args, "levels", None),
            figure=getattr(args, "figure", None),
            matrix=getattr(args, "matrix", None),
        )
    except (ValueError, TypeError, KeyError) as exc:
        parser.error(str(exc))
    try:
        return run(cfg)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        return _fail(args.command, [{"error": type(exc).__name__, "message": str(exc)}])


if __name__ == "__main__":
    sys.exit(main())

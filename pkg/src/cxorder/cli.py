"""Command-line interface: ``cxorder <command> ...``.

Exit codes: 0 a verdict was computed, 1 input error, 2 indeterminate,
3 the ``family`` closed form and the engine disagree.

Defaults for the global flags can be set with ``CXORDER_PRECISION``,
``CXORDER_TOL``, ``CXORDER_EXACT`` (``0``/``1``) and ``CXORDER_FORMAT``.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import dataclass

import mpmath

from .catalog import (
    FAMILIES,
    QUADRATURE_NAMES,
    ConstraintError,
    DomainError,
    FamilySpec,
    agrees,
    eval_conditions,
    family_by_cli_name,
    make_family,
    quadrature,
)
from .measure import MeasureError, SignedMeasure, load_measure
from .numeric import DEFAULT_PRECISION, DEFAULT_TOL, format_scalar, parse_scalar, to_mpf
from .oracle import audit, oracle_order
from .ordering import OrderVerdict, Status, build_h_ladder, decide_order, sign_changes

EXIT_OK, EXIT_INPUT, EXIT_INDETERMINATE, EXIT_DISAGREE = 0, 1, 2, 3
HFUNC_POINTS = 512


@dataclass(frozen=True)
class RunConfig:
    precision: int = DEFAULT_PRECISION
    tol: float = DEFAULT_TOL
    exact: bool = True
    format: str = "human"

    def __post_init__(self):
        if self.precision < 53:
            raise ValueError("precision must be at least 53 bits")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.format not in ("human", "structured", "csv"):
            raise ValueError(f"unknown format {self.format!r}")

    def prepare(self, mu: SignedMeasure) -> SignedMeasure:
        return mu if self.exact else mu.lowered(self.precision, self.tol)

    @property
    def engine_tol(self) -> float | None:
        return None if self.exact else self.tol


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for indeterminate
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _env_default(name: str, fallback, convert):
    raw = os.environ.get(f"CXORDER_{name}")
    if raw is None:
        return fallback
    try:
        return convert(raw)
    except ValueError:
        raise _InputError(f"bad value for CXORDER_{name}: {raw!r}") from None


def _env_bool(raw: str) -> bool:
    if raw.lower() in ("1", "true", "yes", "on"):
        return True
    if raw.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=int, default=_env_default("PRECISION", DEFAULT_PRECISION, int),
                        help="working precision in bits for float mode")
    common.add_argument("--tol", type=float, default=_env_default("TOL", DEFAULT_TOL, float),
                        help="tolerance for float sign decisions")
    common.add_argument("--exact", action=argparse.BooleanOptionalAction,
                        default=_env_default("EXACT", True, _env_bool),
                        help="keep rational and radical inputs exact (default on)")
    common.add_argument("--format", choices=("human", "structured", "csv"),
                        default=_env_default("FORMAT", "human", str))

    p = _Parser(prog="cxorder", description="Decide n-convex orders between signed measures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def pair(name, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("lhs", help="measure file for the left side")
        sp.add_argument("rhs", help="measure file for the right side")
        sp.add_argument("-n", "--degree", type=int, default=1, help="test class degree (1 = convex)")
        return sp

    pair("check", "decide lhs <= rhs on n-convex functions")
    sp = pair("crossings", "sign changes of a rung of the H-ladder (rung 0: cdf difference)")
    sp.add_argument("--rung", type=int, default=0)
    pair("hfuncs", "CSV of x, H_0(x), ..., H_n(x)")
    sp = pair("oracle", "brute-force audit by direct integration")
    sp.add_argument("--grid", type=int, default=16, help="grid points per unit length")
    sp.add_argument("--seed", type=int, default=0, help="seed for the sampled-function audit")
    sp.add_argument("--samples", type=int, default=200, help="number of sampled n-convex functions")

    sp = sub.add_parser("family", parents=[common], help="closed form versus engine for a catalog family")
    sp.add_argument("--name", required=True, help="family name, e.g. szostok-left2")
    sp.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    sp.add_argument("--relation", default="")
    sp.add_argument("-n", "--degree", type=int, default=1)
    sp.add_argument("--measure", help="weight or law measure file (fejer, fink)")

    sp = sub.add_parser("matrix", parents=[common], help="verdict table over the quadrature rules")
    sp.add_argument("-n", "--degree", type=int, default=1)
    sp.add_argument("--rules", default=",".join(QUADRATURE_NAMES))

    sub.add_parser("families", parents=[common], help="list catalog families and relations")
    return p


# -- output ---------------------------------------------------------------------


def _emit(records: list[tuple[str, str]], fmt: str, out) -> None:
    if fmt == "structured":
        for k, v in records:
            out.write(f"{k}={v}\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow([k for k, _ in records])
        w.writerow([v for _, v in records])
    else:
        width = max(len(k) for k, _ in records)
        for k, v in records:
            if v != "":
                out.write(f"{k.replace('_', ' '):<{width}}  {v}\n")


def _verdict_exit(v: OrderVerdict) -> int:
    return EXIT_INDETERMINATE if v.status is Status.INDETERMINATE else EXIT_OK


def _load_pair(args, cfg: RunConfig):
    try:
        mu1, mu2 = load_measure(args.lhs), load_measure(args.rhs)
    except MeasureError as exc:
        raise _InputError(str(exc)) from None
    if not (mu1.interval.a == mu2.interval.a and mu1.interval.b == mu2.interval.b):
        raise _InputError("measures live on different intervals")
    return cfg.prepare(mu1), cfg.prepare(mu2)


# -- commands ------------------------------------------------------------------------


def cmd_check(args, cfg: RunConfig, out) -> int:
    mu1, mu2 = _load_pair(args, cfg)
    v = decide_order(mu1, mu2, args.degree, cfg.engine_tol)
    _emit(v.records(), cfg.format, out)
    return _verdict_exit(v)


def cmd_crossings(args, cfg: RunConfig, out) -> int:
    mu1, mu2 = _load_pair(args, cfg)
    if not 0 <= args.rung <= args.degree:
        raise _InputError("--rung must lie between 0 and the degree")
    ladder = build_h_ladder(mu1, mu2, args.degree)
    rep = sign_changes(ladder[args.rung], cfg.engine_tol or 0.0)
    records = [
        ("rung", str(args.rung)),
        ("count", str(rep.count)),
        ("points", "; ".join(format_scalar(x) for x in rep.points)),
        ("first_sign", rep.first_sign.name.lower()),
        ("last_sign", rep.last_sign.name.lower()),
        ("indeterminate", "yes" if rep.indeterminate else "no"),
    ]
    _emit(records, cfg.format, out)
    return EXIT_INDETERMINATE if rep.indeterminate else EXIT_OK


def hfunc_grid(mu1: SignedMeasure, mu2: SignedMeasure, points: int = HFUNC_POINTS) -> list:
    """``points`` uniform abscissae plus every knot, sorted and deduplicated (as floats)."""
    a, b = to_mpf(mu1.interval.a), to_mpf(mu1.interval.b)
    xs = {float(a + (b - a) * i / (points - 1)) for i in range(points)}
    xs.update(float(to_mpf(k)) for k in mu1.knots() + mu2.knots())
    return sorted(xs)


def cmd_hfuncs(args, cfg: RunConfig, out) -> int:
    mu1, mu2 = _load_pair(args, cfg)
    ladder = build_h_ladder(mu1, mu2, args.degree)
    rungs = [ladder[k].lowered() for k in range(args.degree + 1)]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x"] + [f"H{k}" for k in range(args.degree + 1)])
    for x in hfunc_grid(mu1, mu2):
        w.writerow([repr(x)] + [mpmath.nstr(h(mpmath.mpf(x)), 17) for h in rungs])
    return EXIT_OK


def _parse_params(items: list[str]) -> dict:
    params = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise _InputError(f"--param expects KEY=VALUE, got {item!r}")
        key = key.strip()
        try:
            params[key] = int(value) if key == "n" else parse_scalar(value.strip())
        except ValueError as exc:
            raise _InputError(f"bad value for {key}: {exc}") from None
    return params


def cmd_family(args, cfg: RunConfig, out) -> int:
    try:
        name = family_by_cli_name(args.name)
    except KeyError as exc:
        raise _InputError(str(exc.args[0])) from None
    measure = None
    if args.measure:
        try:
            measure = load_measure(args.measure)
        except MeasureError as exc:
            raise _InputError(str(exc)) from None
    spec = FamilySpec(name, _parse_params(args.param), args.relation, args.degree, measure)
    closed = eval_conditions(spec)
    lhs, rhs, n = make_family(spec)
    v = decide_order(cfg.prepare(lhs), cfg.prepare(rhs), n, cfg.engine_tol)
    fam = FAMILIES[name]
    if fam.iff and closed.status in ("satisfied", "violated"):
        ok = (closed.status == "satisfied") == v.holds and agrees(closed, v)
    else:
        ok = agrees(closed, v)
    records = [
        ("family", fam.cli),
        ("relation", spec.relation or fam.relations[0]),
        ("closed_form", closed.status),
        ("case", closed.case),
        ("engine", v.status.value),
        ("criterion", v.criterion),
        ("agree", "yes" if ok else "no"),
    ]
    _emit(records, cfg.format, out)
    if v.status is Status.INDETERMINATE:
        return EXIT_INDETERMINATE
    return EXIT_OK if ok else EXIT_DISAGREE


_CELL = {
    Status.HOLDS: "<=",
    Status.HOLDS_REVERSED: ">=",
    Status.INCOMPARABLE: "||",
    Status.INDETERMINATE: "??",
}


def _cell(v: OrderVerdict) -> str:
    if v.status is Status.HOLDS and "agree" in v.note:
        return "=="
    return _CELL.get(v.status, "??")


def cmd_matrix(args, cfg: RunConfig, out) -> int:
    names = [r.strip() for r in args.rules.split(",") if r.strip()]
    bad = [r for r in names if r not in QUADRATURE_NAMES]
    if bad:
        raise _InputError(f"unknown rules: {', '.join(bad)} (known: {', '.join(QUADRATURE_NAMES)})")
    ms = {r: cfg.prepare(quadrature(r).measure) for r in names}
    cells = {}
    for i, r1 in enumerate(names):
        for j, r2 in enumerate(names):
            if j < i:
                cells[r1, r2] = cells[r2, r1].reversed()
            else:
                cells[r1, r2] = decide_order(ms[r1], ms[r2], args.degree, cfg.engine_tol)
    if cfg.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["row"] + names)
        for r1 in names:
            w.writerow([r1] + [cells[r1, r2].status.value for r2 in names])
    elif cfg.format == "structured":
        for r1 in names:
            for r2 in names:
                v = cells[r1, r2]
                out.write(f"cell={r1},{r2} status={v.status.value} criterion={v.criterion}\n")
    else:
        out.write(f"degree {args.degree}; cell (row, column): <= row below column, >= above, || incomparable\n")
        out.write("     " + "".join(f"{c:>5}" for c in names) + "\n")
        for r1 in names:
            out.write(f"{r1:>5}" + "".join(f"{_cell(cells[r1, r2]):>5}" for r2 in names) + "\n")
    indeterminate = any(v.status is Status.INDETERMINATE for v in cells.values())
    return EXIT_INDETERMINATE if indeterminate else EXIT_OK


def cmd_oracle(args, cfg: RunConfig, out) -> int:
    mu1, mu2 = _load_pair(args, cfg)
    if args.grid < 1:
        raise _InputError("--grid must be at least 1")
    v = oracle_order(mu1, mu2, args.degree, args.grid, cfg.engine_tol)
    engine = decide_order(mu1, mu2, args.degree, cfg.engine_tol)
    rep = audit(mu1, mu2, args.degree, args.samples, args.seed)
    records = v.records()
    gaps = {label: (x, g) for label, x, g in v.checked}
    if "min-gap" in gaps:
        x, g = gaps["min-gap"]
        records += [("min_gap", mpmath.nstr(g, 17)), ("argmin_shift", mpmath.nstr(x, 17))]
    records += [
        ("engine", engine.status.value),
        ("engine_agrees", "yes" if engine.status is v.status else "no"),
        ("seed", str(rep.seed)),
        ("samples", str(rep.count)),
        ("sampled_min_gap", mpmath.nstr(to_mpf(rep.min_gap), 17)),
    ]
    _emit(records, cfg.format, out)
    return _verdict_exit(v)


def cmd_families(args, cfg: RunConfig, out) -> int:
    for fam in FAMILIES.values():
        params = ", ".join(k if v is None else f"{k}={format_scalar(v) if k != 'n' else v}"
                           for k, v in fam.defaults.items())
        out.write(f"{fam.cli}: relations {', '.join(fam.relations)}; params {params or '-'}\n")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "crossings": cmd_crossings,
    "hfuncs": cmd_hfuncs,
    "family": cmd_family,
    "matrix": cmd_matrix,
    "oracle": cmd_oracle,
    "families": cmd_families,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(args.precision, args.tol, args.exact, args.format)
    except (_InputError, ValueError) as exc:
        sys.stderr.write(f"cxorder: {exc}\n")
        return EXIT_INPUT
    except SystemExit as exc:  # --help and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    buf = io.StringIO()
    try:
        with mpmath.workprec(cfg.precision):
            code = COMMANDS[args.command](args, cfg, buf)
    except (_InputError, DomainError, ConstraintError, MeasureError) as exc:
        sys.stderr.write(f"cxorder: {exc}\n")
        return EXIT_INPUT
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line front end: parameter sweeps written as CSV plus a JSON sidecar.

    rieszbounds bound horn   --d 2 --nu 2 --sigma 1.5 --lambda 1:100:log25 --out horn.csv
    rieszbounds bound urchin --kind linear --sigma 1.5 --lambda 10:1e4:log20 --out urchin.csv
    rieszbounds lt1d   --well square --depth 30 --length 1 --sigma 1.5 --out lt1d.csv
    rieszbounds verify --domain horn --nu 2 --sigma 1.5 --lambda 10:40:log3 --h 0.09 --out v.csv
    rieszbounds lt2d   --alpha 0.25 --sigma 2 --lambda 1:100:log9 --out lt2d.csv

The sidecar sits next to the CSV with suffix .json. Exit codes: 0 ok,
2 usage, 3 I/O, 4 resolution or hypothesis hard-stop.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .fdverify import ResolutionError, TruncationPolicy, empirical_riesz, max_resolution_h
from .horn import (
    HornRegion,
    horn_asymptotic_leading,
    horn_bound_thm32,
    horn_counting_cor33,
    horn_critical_counting_cor35,
    horn_critical_thm34,
)
from .lt2d import example43_bound, example43_quadrature
from .schrodinger1d import (
    BoundaryAngles,
    PotentialProfile1D,
    eigen_interval,
    eigen_line,
    eq33_identity_check,
    lemma44_gap_bound,
    thm41_bound,
)
from .urchin import (
    UrchinSequence,
    urchin_index,
    urchin_lower_lemma37,
    urchin_upper_lemma36,
    urchin_vdb_counting,
)

__all__ = ["RunReport", "build_parser", "main", "parse_lambda_grid", "report_schema"]

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_STOP = 0, 2, 3, 4
GAP_QUAD_TOL = 1e-9


class UsageError(ValueError):
    pass


def parse_lambda_grid(text: str) -> list[float]:
    """'a:b:logN', 'a:b:linN', a comma list, or a single number."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad grid {text!r}; expected a:b:logN or a:b:linN")
        try:
            a, b = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise UsageError(f"bad grid endpoints in {text!r}") from exc
        spec = parts[2]
        for prefix, fn in (("log", np.geomspace), ("lin", np.linspace)):
            if spec.startswith(prefix):
                try:
                    n = int(spec[len(prefix):])
                except ValueError as exc:
                    raise UsageError(f"bad point count in {text!r}") from exc
                if n < 1:
                    raise UsageError("grid needs at least one point")
                if prefix == "log" and not (a > 0 and b > 0):
                    raise UsageError("log grids need positive endpoints")
                return [float(x) for x in fn(a, b, n)]
        raise UsageError(f"bad grid kind in {text!r}; use logN or linN")
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad lambda value list {text!r}") from exc


def _fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


@dataclass
class RunReport:
    command: str
    params: dict[str, Any]
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)

    def add_flags(self, flags) -> None:
        for f in flags:
            if f not in self.flags:
                self.flags.append(f)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(row.get(c)) for c in self.columns])
        return buf.getvalue()

    def sidecar(self, csv_text: str) -> dict[str, Any]:
        return {
            "version": __version__,
            "command": self.command,
            "params": self.params,
            "flags": list(self.flags),
            "rows_digest": "sha256:" + hashlib.sha256(csv_text.encode()).hexdigest(),
            "n_rows": len(self.rows),
            "summary": self.summary,
        }

    def write(self, out: str) -> None:
        text = self.csv_text()
        if out == "-":
            sys.stdout.write(text)
            json.dump(self.sidecar(text), sys.stderr, indent=2, sort_keys=True, default=_fmt)
            sys.stderr.write("\n")
            return
        path = Path(out)
        path.write_bytes(text.encode())
        side = path.with_suffix(".json")
        side.write_text(
            json.dumps(self.sidecar(text), indent=2, sort_keys=True, default=_fmt) + "\n"
        )


def report_schema() -> dict:
    """JSON schema the sidecar files conform to."""
    return json.loads(resources.files(__package__).joinpath("report_schema.json").read_text())


# --- bound horn ---------------------------------------------------------


def _horn_bound(h: HornRegion, sigma: float, lam: float):
    if h.nu == 1:
        return horn_critical_counting_cor35(lam) if sigma == 0 else horn_critical_thm34(sigma, lam)
    return horn_counting_cor33(h, lam) if sigma == 0 else horn_bound_thm32(h, sigma, lam)


def cmd_bound_horn(args) -> RunReport:
    try:
        h = HornRegion(args.d, args.nu)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.sigma < 0:
        raise UsageError("sigma must be >= 0")
    grid = parse_lambda_grid(args.lam)
    rep = RunReport(
        "bound horn",
        {"d": args.d, "nu": args.nu, "sigma": args.sigma, "lambda": args.lam},
        ["lambda", "bound", "asymptotic_leading", "ratio"],
    )
    for lam in grid:
        b = _horn_bound(h, args.sigma, lam)
        rep.add_flags(b.flags)
        asym = horn_asymptotic_leading(h, args.sigma, lam) if h.dim == 2 and lam > 1 else None
        ratio = b.value / asym if asym else None
        rep.rows.append({"lambda": lam, "bound": b.value, "asymptotic_leading": asym, "ratio": ratio})
    return rep


# --- bound urchin -------------------------------------------------------


def _read_radii(path: str) -> list[float]:
    try:
        data = np.loadtxt(path, ndmin=1)
    except OSError:
        raise
    except ValueError as exc:
        raise UsageError(f"{path}: not a list of radii ({exc})") from exc
    return [float(x) for x in np.ravel(data)]


def _urchin_sequence(args) -> UrchinSequence:
    kind = args.kind
    if kind == "linear":
        return UrchinSequence.linear()
    if kind == "geometric":
        if args.delta is None:
            raise UsageError("--kind geometric needs --delta")
        return UrchinSequence.geometric(args.delta)
    if kind == "exp-over-sqrt":
        return UrchinSequence.exp_over_sqrt()
    if kind == "explicit":
        if not args.file:
            raise UsageError("--kind explicit needs --file")
        return UrchinSequence.explicit(_read_radii(args.file))
    raise UsageError(f"unknown urchin kind {kind!r}")


def cmd_bound_urchin(args) -> RunReport:
    try:
        seq = _urchin_sequence(args)
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc)) from exc
    grid = parse_lambda_grid(args.lam)
    rep = RunReport(
        "bound urchin",
        {"kind": args.kind, "delta": args.delta, "file": args.file, "sigma": args.sigma,
         "lambda": args.lam},
        ["lambda", "n_hat", "r_hat", "upper", "lower", "vdb_upper"],
    )
    rep.add_flags(seq.validation_flags)
    for lam in grid:
        idx = urchin_index(seq, lam)
        up = urchin_upper_lemma36(seq, args.sigma, lam)
        lo = urchin_lower_lemma37(seq, args.sigma, lam)
        vdb = urchin_vdb_counting(seq, lam)
        rep.add_flags(up.flags)
        rep.add_flags(lo.flags)
        rep.add_flags(vdb.flags)
        rep.rows.append({
            "lambda": lam,
            "n_hat": None if idx is None else idx.n_hat,
            "r_hat": None if idx is None else idx.r_hat,
            "upper": up.value,
            "lower": lo.value,
            "vdb_upper": vdb.value,
        })
    return rep


# --- lt1d ---------------------------------------------------------------


def _potential(args) -> PotentialProfile1D:
    if args.file:
        return PotentialProfile1D.from_file(args.file)
    if args.length is None or args.depth is None:
        raise UsageError("built-in wells need --depth and --length")
    if args.well == "square":
        return PotentialProfile1D.square_well(args.depth, args.length)
    if args.well == "gauss":
        ell, depth, width = args.length, args.depth, args.width
        if width is None:
            width = ell / 6.0

        def v(t):
            # Gaussian profile shaped by a smooth bump so V vanishes at the ends
            s = 2.0 * t / ell - 1.0
            if abs(s) >= 1.0:
                return 0.0
            bump = math.exp(1.0 - 1.0 / (1.0 - s * s))
            return depth * bump * math.exp(-((t - ell / 2) ** 2) / (2.0 * width * width))

        return PotentialProfile1D(ell, v)
    raise UsageError(f"unknown well {args.well!r}")


def cmd_lt1d(args) -> RunReport:
    if args.sigma < 1.5:
        raise UsageError("lt1d needs sigma >= 3/2")
    base = _potential(args)
    couplings = parse_lambda_grid(args.coupling)
    rep = RunReport(
        "lt1d",
        {"well": None if args.file else args.well, "file": args.file, "depth": args.depth,
         "length": args.length, "width": args.width, "sigma": args.sigma,
         "coupling": args.coupling, "gap_check": args.gap_check},
        ["coupling", "A", "bound", "plain_lt", "riesz_solver", "n_dirichlet", "lambda1", "mu1",
         "gap_bound", "gap_residual", "gap_tolerance", "dominance"],
    )
    for c in couplings:
        pot = base.times(c)
        b = thm41_bound(pot, args.sigma)
        rep.add_flags(b.flags)
        dirichlet = eigen_interval(pot, BoundaryAngles(0.0, 0.0))
        line = eigen_line(pot)
        r_solver = dirichlet.riesz(args.sigma)
        lam1 = dirichlet[0] if len(dirichlet) else None
        mu1 = line[0] if len(line) else None
        gap = lemma44_gap_bound(pot, mu1)
        residual = tol = None
        if args.gap_check and lam1 is not None:
            direct, integral = eq33_identity_check(pot, 1, GAP_QUAD_TOL)
            residual = abs(direct - integral)
            tol = max(10 * GAP_QUAD_TOL, 1e-6 * direct)
        if b.details["zero_regime"] and len(dirichlet):
            rep.add_flags(["zero-regime-but-bound-state"])
        rep.rows.append({
            "coupling": c,
            "A": b.details["A"],
            "bound": b.value,
            "plain_lt": b.details["plain_lt"],
            "riesz_solver": r_solver,
            "n_dirichlet": len(dirichlet),
            "lambda1": lam1,
            "mu1": mu1,
            "gap_bound": gap.value,
            "gap_residual": residual,
            "gap_tolerance": tol,
            "dominance": r_solver <= b.value + 1e-8 * max(1.0, b.value),
        })
    return rep


# --- verify -------------------------------------------------------------


def cmd_verify(args) -> RunReport:
    grid = parse_lambda_grid(args.lam)
    if not grid or min(grid) <= 0:
        raise UsageError("verify needs a positive lambda grid")
    if args.domain == "horn":
        if args.nu is None:
            raise UsageError("--domain horn needs --nu")
        try:
            region = HornRegion(2, args.nu)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        region = HornRegion(2, 1.0)
    hmax = max_resolution_h(max(grid))
    if args.h > hmax:
        raise ResolutionError(args.h, hmax)
    policy = TruncationPolicy(args.c)
    rep = RunReport(
        "verify",
        {"domain": args.domain, "nu": args.nu, "sigma": args.sigma, "lambda": args.lam,
         "h": args.h, "c": args.c},
        ["lambda", "empirical", "empirical_half", "refinement_delta", "bound", "dominance",
         "ratio", "count_below", "nodes_half"],
    )
    for lam in grid:
        value, spec, diag = empirical_riesz(
            args.domain, args.sigma, lam, args.h, policy, nu=args.nu, refine=True
        )
        b = _horn_bound(region, args.sigma, lam)
        rep.add_flags(b.flags)
        fine = diag["value_half"]
        delta = diag["refinement_delta"]
        rep.rows.append({
            "lambda": lam,
            "empirical": value,
            "empirical_half": fine,
            "refinement_delta": delta,
            "bound": b.value,
            "dominance": fine - delta <= b.value,
            "ratio": fine / b.value if b.value > 0 else None,
            "count_below": len(spec),
            "nodes_half": diag["nodes_half"],
        })
    return rep


# --- lt2d ---------------------------------------------------------------


def cmd_lt2d(args) -> RunReport:
    grid = parse_lambda_grid(args.lam)
    rep = RunReport(
        "lt2d",
        {"alpha": args.alpha, "sigma": args.sigma, "lambda": args.lam},
        ["lambda", "bound", "quadrature", "rel_diff", "cutoff"],
    )
    logs = []
    for lam in grid:
        b = example43_bound(args.alpha, args.sigma, lam)
        rep.add_flags(b.flags)
        quad = rel = None
        if b.hypotheses_ok and math.isfinite(b.value) and b.value > 0:
            quad = example43_quadrature(args.alpha, args.sigma, lam)
            rel = abs(quad - b.value) / b.value
            logs.append((math.log(lam), math.log(b.value)))
        rep.rows.append({"lambda": lam, "bound": b.value, "quadrature": quad, "rel_diff": rel,
                         "cutoff": b.details.get("cutoff")})
    if len(logs) >= 2:
        x, y = np.array(logs).T
        rep.summary["slope"] = float(np.polyfit(x, y, 1)[0])
        rep.summary["expected_slope"] = (args.sigma + 1.0) / (1.0 - args.alpha)
    return rep


# --- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rieszbounds", description="Eigenvalue-mean bounds and checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, lam_default=None):
        sp.add_argument("--sigma", type=float, required=True)
        sp.add_argument("--out", default="-", help="CSV path ('-' for stdout)")
        if lam_default is not False:
            sp.add_argument("--lambda", dest="lam", required=lam_default is None,
                            default=lam_default, help="grid a:b:logN, a:b:linN, or a list")

    bound = sub.add_parser("bound", help="analytic bounds").add_subparsers(dest="which", required=True)
    bh = bound.add_parser("horn")
    bh.add_argument("--d", type=int, default=2)
    bh.add_argument("--nu", type=float, required=True)
    common(bh)
    bh.set_defaults(func=cmd_bound_horn)

    bu = bound.add_parser("urchin")
    bu.add_argument("--kind", choices=["linear", "geometric", "exp-over-sqrt", "explicit"],
                    required=True)
    bu.add_argument("--delta", type=float)
    bu.add_argument("--file", help="one radius r_n per line, n = 1, 2, ...")
    common(bu)
    bu.set_defaults(func=cmd_bound_urchin)

    l1 = sub.add_parser("lt1d", help="one-dimensional wells")
    l1.add_argument("--well", choices=["square", "gauss"], default="square")
    l1.add_argument("--depth", type=float)
    l1.add_argument("--length", type=float)
    l1.add_argument("--width", type=float)
    l1.add_argument("--file", help="two columns t V(t), strictly increasing t")
    l1.add_argument("--coupling", default="1", help="multipliers of V, grid syntax")
    l1.add_argument("--gap-check", dest="gap_check", action=argparse.BooleanOptionalAction,
                    default=True)
    common(l1, lam_default=False)
    l1.set_defaults(func=cmd_lt1d)

    ve = sub.add_parser("verify", help="finite-difference check on planar horns")
    ve.add_argument("--domain", choices=["horn", "horn1-rotated"], required=True)
    ve.add_argument("--nu", type=float)
    ve.add_argument("--h", type=float, required=True)
    ve.add_argument("--c", type=float, default=2.0, help="truncation safety factor (>= 2)")
    common(ve)
    ve.set_defaults(func=cmd_verify)

    l2 = sub.add_parser("lt2d", help="horn with singular potential")
    l2.add_argument("--alpha", type=float, required=True)
    common(l2)
    l2.set_defaults(func=cmd_lt2d)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = args.func(args)
        rep.write(args.out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"rieszbounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResolutionError as exc:
        print(f"rieszbounds: resolution: {exc}", file=sys.stderr)
        return EXIT_STOP
    except OSError as exc:
        print(f"rieszbounds: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end: ``ppclab generate | analyze | verify | sweep``."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import math
import sys
from pathlib import Path

from . import points as pts
from .discrepancy import extreme_discrepancy, star_discrepancy
from .errors import WorkBudgetExceeded, check_work
from .pair_correlation import A_direct, A_spectral, ppc_curve, ppc_statistic
from .records import dumps
from .spectral import (
    build_profile,
    diaphony,
    diaphony_closed,
    erdos_turan_bound,
    leveque_bound,
    logsin_statistic,
    write_profile_csv,
)
from .verify import DEFAULT_DELTAS, SWEEP_COLUMNS, SuiteConfig, default_K, run_verification, sweep_rows

__all__ = ["main", "parse_family", "build_family"]

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

FAMILIES = {
    # name: (required params, defaults)
    "equispaced": (("N",), {}),
    "kronecker": (("N",), {"alpha": GOLDEN}),
    "vdc": (("N",), {"base": 2}),
    "random": (("N",), {"seed": 0}),
    "perturbed": (("N",), {"seed": 0, "jitter": 0.5}),
}
INT_PARAMS = {"N", "base", "seed"}
DEFAULT_S_GRID = (0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0)


class UsageError(ValueError):
    pass


def _number(text: str, key: str, pos: int):
    try:
        if key in INT_PARAMS:
            return int(text)
        return float(text)
    except ValueError:
        raise UsageError(f"bad value {text!r} for {key} at position {pos}") from None


def _expand(text: str, key: str, pos: int) -> list:
    values = []
    for item in text.split("|"):
        if ".." in item:
            parts = item.split("..")
            if len(parts) not in (2, 3) or not all(parts):
                raise UsageError(f"bad range {item!r} for {key} at position {pos}")
            start, stop = _number(parts[0], key, pos), _number(parts[1], key, pos)
            step = _number(parts[2], key, pos) if len(parts) == 3 else 1
            if step <= 0:
                raise UsageError(f"range step must be positive at position {pos}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            values += [start + i * step for i in range(max(0, count))]
        else:
            values.append(_number(item, key, pos))
        pos += len(item) + 1
    return values


def parse_family(spec: str, allow_ranges: bool = False):
    """Parse ``family:key=value,...`` into ``(family, {key: [values]})``."""
    name, sep, rest = spec.partition(":")
    name = name.strip()
    if name not in FAMILIES:
        raise UsageError(f"unknown family {name!r} at position 0 (choose from {', '.join(FAMILIES)})")
    required, defaults = FAMILIES[name]
    params = {k: [v] for k, v in defaults.items()}
    pos = len(name) + len(sep)
    for chunk in rest.split(",") if rest else []:
        key, eq, value = chunk.partition("=")
        key = key.strip()
        if not eq or not key:
            raise UsageError(f"expected key=value at position {pos}: {chunk!r}")
        allowed = set(required) | set(defaults)
        if key not in allowed:
            raise UsageError(f"unknown parameter {key!r} for {name} at position {pos}")
        vpos = pos + len(chunk) - len(value)
        vals = _expand(value.strip(), key, vpos) if allow_ranges else [_number(value.strip(), key, vpos)]
        params[key] = vals
        pos += len(chunk) + 1
    missing = [k for k in required if k not in params]
    if missing:
        raise UsageError(f"family {name} needs parameter(s) {', '.join(missing)}")
    return name, params


def build_family(name: str, **kw) -> pts.PointSet:
    if name == "equispaced":
        return pts.gen_equispaced(kw["N"])
    if name == "kronecker":
        return pts.gen_kronecker(kw["N"], kw["alpha"])
    if name == "vdc":
        return pts.gen_van_der_corput(kw["N"], kw["base"])
    if name == "random":
        return pts.gen_random(kw["N"], kw["seed"])
    if name == "perturbed":
        return pts.gen_perturbed(kw["N"], kw["seed"], kw["jitter"])
    raise UsageError(f"unknown family {name!r}")


def instances(spec: str):
    name, params = parse_family(spec, allow_ranges=True)
    keys = list(params)
    for combo in itertools.product(*(params[k] for k in keys)):
        yield build_family(name, **dict(zip(keys, combo)))


def _floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _load(args) -> pts.PointSet:
    if bool(args.input) == bool(args.family):
        raise UsageError("give exactly one of --input or --family")
    if args.input:
        return pts.read_points(args.input)
    name, params = parse_family(args.family)
    return build_family(name, **{k: v[0] for k, v in params.items()})


def _resolve_K(args, n: int) -> int:
    if args.K is None:
        return default_K(n)
    if args.K < 1:
        raise UsageError("--K must be >= 1")
    check_work(float(n) * args.K + n * n, f"--K {args.K} at N={n}")
    return args.K


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    name, params = parse_family(args.spec)
    p = build_family(name, **{k: v[0] for k, v in params.items()})
    _emit(pts.format_points(p), args.out)
    print(f"N={p.n} label={p.label}", file=sys.stderr if not args.out else sys.stdout)
    return 0


def analyze(p: pts.PointSet, K: int, s_grid=DEFAULT_S_GRID, cap_n: int = 2048) -> dict:
    """Every statistic for one point set, as a JSON-ready dict."""
    profile = build_profile(p, K)
    disc = extreme_discrepancy(p)
    report = {
        "label": p.label,
        "N": p.n,
        "K": K,
        "D_N": disc.value,
        "D_N_witness": disc.witness,
        "star_discrepancy": star_discrepancy(p).value,
        "leveque": leveque_bound(profile),
        "erdos_turan": erdos_turan_bound(profile),
        "A_spectral": A_spectral(profile),
        "diaphony_spectral": diaphony(profile, "classical"),
    }
    if p.n <= cap_n:
        report["A"] = A_direct(p)
        report["diaphony_closed"] = diaphony_closed(p)
        if p.n >= 2:
            report["logsin_statistic"] = logsin_statistic(p)
            curve = ppc_curve(p)
            report["ppc"] = [
                {"s": s, "statistic": ppc_statistic(curve, s), "poisson_reference": 2.0 * s}
                for s in s_grid
            ]
    report["enclosure_widths"] = {
        "A_spectral": report["A_spectral"].width,
        "diaphony_spectral": report["diaphony_spectral"].width,
    }
    return report


def _jsonable_report(report: dict) -> dict:
    out = {}
    for key, value in report.items():
        if hasattr(value, "__dataclass_fields__"):
            value = {f: getattr(value, f) for f in value.__dataclass_fields__}
        out[key] = value
    return out


def cmd_analyze(args) -> int:
    p = _load(args)
    K = _resolve_K(args, p.n)
    report = analyze(p, K, args.s_grid or DEFAULT_S_GRID, args.cap_n)
    if args.profile_csv:
        with open(args.profile_csv, "w", newline="") as fh:
            write_profile_csv(build_profile(p, K), fh)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "statistic", "poisson_reference"])
        for row in report.get("ppc", []):
            w.writerow([repr(row["s"]), repr(row["statistic"]), repr(row["poisson_reference"])])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(dumps(_jsonable_report(report)) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    p = _load(args)
    K = _resolve_K(args, p.n)
    deltas = tuple(args.delta) if args.delta else DEFAULT_DELTAS
    records = run_verification(p, SuiteConfig(deltas=deltas, K=K, cap_n=args.cap_n))
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "kind", "status", "lhs", "rhs", "slack"])
        for r in records:
            w.writerow([r.name, r.kind, r.status, repr(r.lhs), repr(r.rhs), repr(r.slack)])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(dumps([r.to_dict() for r in records]) + "\n", args.out)
    return 1 if any(r.failed for r in records) else 0


def cmd_sweep(args) -> int:
    if not args.family:
        raise UsageError("sweep needs --family")
    deltas = args.delta or [0.25]
    rows = list(sweep_rows(instances(args.family), deltas))
    if args.format == "json":
        _emit(dumps(rows) + "\n", args.out)
        return 0
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    _emit(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ppclab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated point set")
    g.add_argument("spec", help='family spec, e.g. "kronecker:N=100,alpha=0.618034"')
    g.add_argument("--out", help="output file (default stdout)")
    g.set_defaults(func=cmd_generate)

    def common(sp, default_format="json"):
        sp.add_argument("--input", help="point-set file")
        sp.add_argument("--family", help="generator spec instead of a file")
        sp.add_argument("--K", type=int, help="spectral truncation (default max(1e4, 100 N^2), capped)")
        sp.add_argument("--delta", type=_floats, help="comma-separated levels delta for the smoothing checks")
        sp.add_argument("--format", choices=("json", "csv"), default=default_format)
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--cap-n", type=int, default=2048, help="largest N for O(N^2) statistics")

    a = sub.add_parser("analyze", help="all statistics for one point set")
    common(a)
    a.add_argument("--s-grid", type=_floats, help="s values for the pair-correlation curve")
    a.add_argument("--profile-csv", help="also export the exponential sums as CSV")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run the verification suite; exit 1 on a failed inequality")
    common(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="empirical constants over a family range")
    common(s, default_format="csv")
    s.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, WorkBudgetExceeded) as exc:
        parser.error(str(exc))
    except (OSError, ValueError) as exc:
        print(f"ppclab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Batch command-line front end.

Subcommands: ``laplace`` (transform evaluation over grids, CSV), ``price``
(JSON price reports), ``validate`` (identity suite, exit status), and
``experiment`` (smallball | lil | bias-study | paths, CSV).

Conventions: stdout carries data only, stderr carries diagnostics; exit code 0
on success, 2 for usage or regime errors, 3 for numeric failures.  Every
output embeds a manifest (command echo, seed, version, timing) so reruns are
reproducible; randomized commands require an explicit --seed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, asymptotics, inversion, laws, pricing, simulate, transforms
from .errors import BesqintError, NonFiniteInputError, OrientationError, RegimeViolationError

CSV_SCHEMA_VERSION = "1"
JSON_SCHEMA_VERSION = "1"

_USAGE_EXIT = 2
_NUMERIC_EXIT = 3


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None
    version: str
    runtime_seconds: float
    schema_version: str


def _manifest(args: argparse.Namespace, t0: float, schema: str) -> RunManifest:
    params = {k: v for k, v in sorted(vars(args).items()) if k != "func" and v is not None}
    return RunManifest(
        command=args.command,
        parameters=params,
        seed=getattr(args, "seed", None),
        version=__version__,
        runtime_seconds=round(time.time() - t0, 3),
        schema_version=schema,
    )


def _out_stream(args):
    return open(args.out, "w") if getattr(args, "out", None) else sys.stdout


def _emit_csv(args, t0, header: list[str], rows: list[list]) -> None:
    fh = _out_stream(args)
    try:
        manifest = json.dumps(asdict(_manifest(args, t0, CSV_SCHEMA_VERSION)), sort_keys=True)
        fh.write(f"# schema_version={CSV_SCHEMA_VERSION}\n# manifest: {manifest}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()


def _emit_json(args, t0, payload: dict) -> None:
    payload = dict(payload)
    payload["schema_version"] = JSON_SCHEMA_VERSION
    payload["manifest"] = asdict(_manifest(args, t0, JSON_SCHEMA_VERSION))
    fh = _out_stream(args)
    try:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    finally:
        if fh is not sys.stdout:
            fh.close()


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _resolve_nu(args) -> float:
    if (args.nu is None) == (args.delta is None):
        raise NonFiniteInputError("exactly one of --nu / --delta is required")
    if args.delta is not None:
        return 0.5 * args.delta - 1.0
    return args.nu


def _params(args) -> laws.BesqParams:
    return laws.BesqParams(nu=_resolve_nu(args), p=args.p)


def _lambda_grid(args) -> list[float]:
    if args.grid:
        try:
            lo, hi, n = args.grid.split(":")
            pts = np.geomspace(float(lo), float(hi), int(n))
        except ValueError as exc:
            raise NonFiniteInputError(
                f"--grid must be LO:HI:N (geometric spacing), got {args.grid!r}"
            ) from exc
        return [float(v) for v in pts]
    if args.lam is None:
        raise NonFiniteInputError("provide --lambda or --grid")
    return [args.lam]


def _inversion_config(args) -> inversion.InversionConfig | None:
    kwargs = {}
    if getattr(args, "method", None):
        kwargs["method"] = args.method
    if getattr(args, "order", None):
        kwargs["order_or_nodes"] = args.order
    if getattr(args, "digits", None):
        kwargs["working_precision_digits"] = args.digits
    if not kwargs:
        return None  # let the pricing layer pick tail-aware defaults
    return inversion.InversionConfig(**kwargs)


def _path_config(args) -> simulate.PathConfig:
    if args.seed is None:
        raise NonFiniteInputError("randomized commands require --seed")
    return simulate.PathConfig(step=args.step, n_paths=args.paths, seed=args.seed,
                               max_time=args.max_time)


# ---------------------------------------------------------------------------
# laplace
# ---------------------------------------------------------------------------

def cmd_laplace(args) -> int:
    t0 = time.time()
    params = _params(args)
    rows = []
    for lam in _lambda_grid(args):
        q = laws.SigmaQuery(params, x=args.x, y=args.y, lam=lam)
        if args.kind == "sigma":
            val = laws.laplace_sigma(q)
        elif args.kind == "hitting":
            val = laws.laplace_hitting_time(params.nu, args.x, args.y, lam)
        elif args.kind == "joint-max":
            if args.barrier is None:
                raise NonFiniteInputError("joint-max needs --barrier")
            val = laws.joint_max_laplace(laws.BarrierQuery(q, args.barrier))
        else:  # joint-rsigma
            val = laws.joint_r_sigma_laplace(q, args.r)
        rows.append([params.nu, params.p, args.x, args.y, lam, val,
                     int(laws.is_defective(params, args.x, args.y))])
    _emit_csv(args, t0, ["nu", "p", "x", "y", "lambda", "value", "defective"], rows)
    return 0


# ---------------------------------------------------------------------------
# price
# ---------------------------------------------------------------------------

def cmd_price(args) -> int:
    t0 = time.time()
    params = _params(args)
    cfg = _inversion_config(args)
    report: dict = {"kind": args.kind, "nu": params.nu, "p": params.p,
                    "x": args.x, "y": args.y, "rate": args.rate}
    if args.kind == "digital":
        if args.threshold is None:
            raise NonFiniteInputError("digital needs --threshold")
        spec = pricing.OptionSpec(pricing.DIGITAL, params, args.x, args.y, rate=args.rate)
        report["threshold"] = args.threshold
        report["price"], report["error_estimate"] = pricing.price_digital_report(
            spec, args.threshold, cfg)
        report["method"] = cfg.method if cfg else inversion.TALBOT
    elif args.kind == "put":
        if args.strike is None:
            raise NonFiniteInputError("put needs --strike")
        spec = pricing.OptionSpec(pricing.PUT_ACCUMULATED, params, args.x, args.y,
                                  strike=args.strike, rate=args.rate)
        report["strike"] = args.strike
        report["price"], report["error_estimate"] = pricing.price_put_accumulated_report(
            spec, cfg)
        report["method"] = cfg.method if cfg else inversion.TALBOT
        report["small_strike_asymptote"] = pricing.small_strike_asymptote(spec)
    else:  # maxput
        if args.strike is None:
            raise NonFiniteInputError("maxput needs --strike")
        spec = pricing.OptionSpec(pricing.PUT_MAX_RATE, params, args.x, args.y,
                                  strike=args.strike, rate=args.rate)
        report["strike"] = args.strike
        report["price"], report["error_estimate"] = pricing.price_put_max_rate_report(spec)
        report["method"] = "barrier-quadrature"
    if args.mc_check:
        pcfg = _path_config(args)
        if args.kind == "digital":
            est = pricing.mc_check_digital(spec, args.threshold, pcfg)
        elif args.kind == "put":
            est = pricing.mc_check_put(spec, pcfg)
        else:
            est = pricing.mc_check_max_put(spec, pcfg)
        report["mc_estimate"] = est.estimate
        report["mc_std_error"] = est.std_error
        report["mc_censored_fraction"] = est.censored_fraction
    _emit_json(args, t0, report)
    return 0


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def _validate_half_order() -> float:
    worst = 0.0
    for s, p in ((0.5, 0.0), (1.0, 1.0), (0.75, 0.5)):
        nu = s  # nu/(p+1) = 1/2
        for x, y in ((1.0, 0.5), (2.0, 0.4), (0.7, 0.7)):
            for lam in (0.5, 2.0, 8.0):
                q = laws.SigmaQuery(laws.BesqParams(nu, p), x=x, y=y, lam=lam)
                got = laws.laplace_sigma(q)
                want = (y / x) ** nu * math.exp(
                    -math.sqrt(lam) * (x ** nu - y ** nu) / (2 * nu)) if x != y else 1.0
                worst = max(worst, abs(got - want) / max(abs(want), 1e-300))
        nun = -s  # nu/(p+1) = -1/2
        for x, y in ((1.0, 0.5), (2.0, 0.4)):
            for lam in (0.5, 2.0, 8.0):
                q = laws.SigmaQuery(laws.BesqParams(nun, p), x=x, y=y, lam=lam)
                got = laws.laplace_sigma(q)
                want = math.exp(math.sqrt(lam) * (x ** -nun - y ** -nun) / (2 * nun))
                worst = max(worst, abs(got - want) / abs(want))
    return worst


def _validate_time_change() -> float:
    worst = 0.0
    for nu in (-0.75, 0.0, 1.0, 2.0):
        for p in (0.0, 0.5, 1.0, 2.0):
            for x, y, lam in ((1.0, 2.5, 1.3), (2.0, 0.5, 4.0), (0.0, 1.0, 2.0)):
                q = laws.SigmaQuery(laws.BesqParams(nu, p), x=x, y=y, lam=lam)
                d_s, x_s, y_s = laws.equivalent_hitting_params(q)
                lhs = laws.laplace_sigma(q)
                rhs = laws.laplace_hitting_time(0.5 * d_s - 1.0, x_s, y_s, lam)
                worst = max(worst, abs(lhs - rhs))
    return worst


def _validate_scaling() -> float:
    worst = 0.0
    for nu, p in ((1.0, 1.0), (-0.5, 0.0), (0.5, 2.0)):
        for y in (0.5, 2.0, 3.0):
            for lam in (0.7, 5.0):
                worst = max(worst, laws.scaling_identity_check(laws.BesqParams(nu, p), y, lam))
    return worst


def _validate_inversion() -> float:
    import mpmath as mp

    pairs = [
        (lambda s: 1 / s, lambda t: 1.0),
        (lambda s: 1 / (s + 1), lambda t: math.exp(-t)),
        (lambda s: 1 / s ** 2, lambda t: t),
        (lambda s: 1 / mp.sqrt(s), lambda t: 1.0 / math.sqrt(math.pi * t)),
        (lambda s: mp.exp(-mp.sqrt(2 * s)),
         lambda t: (2 * math.pi * t ** 3) ** -0.5 * math.exp(-1.0 / (2 * t))),
    ]
    worst = 0.0
    for fh, ft in pairs:
        for t in (0.5, 1.0, 2.0):
            val, _ = inversion.invert_checked(fh, t)
            worst = max(worst, abs(val - ft(t)) / max(abs(ft(t)), 1e-300))
    return worst


def _validate_z4() -> float:
    worst = 0.0
    for x in (0.25, 0.5, 0.9):
        for lam in (0.5, 1.0, 4.0):
            got = laws.z4_transform(x, lam)
            want = math.exp(-math.sqrt(lam / 2.0) * x)
            worst = max(worst, abs(got - want) / want)
        for t in (0.2, 1.0):
            dens = inversion.z4_density(x, t)
            a = 0.5 * x
            want = a / math.sqrt(2 * math.pi * t ** 3) * math.exp(-a * a / (2 * t))
            worst = max(worst, abs(dens - want))
    return worst


_VALIDATIONS = [
    ("half-order-oracles", _validate_half_order, 1e-10),
    ("time-change", _validate_time_change, 1e-10),
    ("scaling", _validate_scaling, 1e-10),
    ("inversion-round-trip", _validate_inversion, 1e-8),
    ("z4-subordinator", _validate_z4, 1e-6),
]


def cmd_validate(args) -> int:
    t0 = time.time()
    rows = []
    failed = False
    ctx = laws.kernel_perturbation(args.inject_kernel_perturbation) \
        if args.inject_kernel_perturbation else None
    try:
        if ctx:
            ctx.__enter__()
        for name, fn, tol in _VALIDATIONS:
            resid = fn()
            ok = resid <= tol
            failed |= not ok
            rows.append([name, resid, tol, "pass" if ok else "FAIL"])
    finally:
        if ctx:
            ctx.__exit__(None, None, None)
    _emit_csv(args, t0, ["identity", "max_residual", "tolerance", "status"], rows)
    if failed:
        print("validation FAILED", file=sys.stderr)
        return _NUMERIC_EXIT
    return 0


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------

def cmd_experiment(args) -> int:
    t0 = time.time()
    params = _params(args)
    if args.what == "smallball":
        grid = _lambda_grid(args) if (args.grid or args.lam) else list(np.geomspace(1e2, 1e8, 25))
        series = asymptotics.lt_rate_empirical(params, args.x, args.y, grid)
        target = asymptotics.small_ball_targets(params, args.x, args.y)
        rows = [[lam, rate, target.lt_rate] for lam, rate in series]
        _emit_csv(args, t0, ["lambda", "rate", "target"], rows)
        return 0
    if args.what == "lil":
        cfg = _path_config(args)
        y_grid = list(np.geomspace(args.y_min, args.y_max, args.y_points))
        res = asymptotics.lil_experiment(params, cfg, y_grid)
        rows = [
            [i, float(y), float(res.ratios[i, j])]
            for i in range(res.ratios.shape[0])
            for j, y in enumerate(res.y_grid)
            if math.isfinite(res.ratios[i, j])
        ]
        rows.append(["median_tail_min", "", res.median_proxy])
        rows.append(
            ["target", "", asymptotics.small_ball_targets(params, 0.0, 1.0).lil_constant])
        _emit_csv(args, t0, ["path", "y", "normalized_sigma"], rows)
        return 0
    if args.what == "bias-study":
        if args.seed is None:
            raise NonFiniteInputError("randomized commands require --seed")
        hs = [args.step * 2 ** k for k in range(args.h_levels - 1, -1, -1)]
        q = laws.SigmaQuery(params, x=args.x, y=args.y, lam=args.lam or 2.0)
        ref = laws.laplace_sigma(q)
        res = simulate.bias_study(params, args.x, args.y, q.lam, hs,
                                  n_paths=args.paths, seed=args.seed, reference=ref)
        rows = [[r.step, r.estimate, r.std_error, r.censored_fraction, ref]
                for r in res.rows]
        rows.append(["intercept", res.intercept, "", "", ref])
        rows.append(["order", res.convergence_order, "", "", ""])
        _emit_csv(args, t0, ["h", "estimate", "std_error", "censored_fraction", "reference"], rows)
        return 0
    # raw path summaries
    cfg = _path_config(args)
    summ = simulate.run_paths(params, args.x, args.y, cfg)
    manifest = json.dumps(asdict(_manifest(args, t0, CSV_SCHEMA_VERSION)), sort_keys=True)
    out = args.out or "/dev/stdout"
    simulate.write_paths_csv(summ, out, header_lines=[f"schema_version={CSV_SCHEMA_VERSION}",
                                                      f"manifest: {manifest}"])
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sp, lam: bool = True):
    sp.add_argument("--nu", type=float, default=None, help="process index")
    sp.add_argument("--delta", type=float, default=None, help="dimension (alternative to --nu)")
    sp.add_argument("--p", type=float, required=True, help="power exponent of the functional")
    sp.add_argument("--x", type=float, required=True, help="start level")
    sp.add_argument("--y", type=float, required=True, help="target level")
    if lam:
        sp.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="transform variable (of exp(-(lambda/2) Sigma))")
        sp.add_argument("--grid", type=str, default=None,
                        help="geometric lambda grid LO:HI:N")
    sp.add_argument("--out", type=str, default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="besqint",
                                 description="transforms, prices and experiments for "
                                             "integral functionals of squared Bessel processes")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("laplace", help="evaluate closed-form transforms over a grid")
    _add_common(sp)
    sp.add_argument("--kind", choices=["sigma", "hitting", "joint-max", "joint-rsigma"],
                    default="sigma")
    sp.add_argument("--barrier", type=float, default=None, help="barrier level a")
    sp.add_argument("--r", type=float, default=0.0, help="hitting-time transform variable")
    sp.set_defaults(func=cmd_laplace)

    sp = sub.add_parser("price", help="price a derivative (JSON report)")
    _add_common(sp, lam=False)
    sp.add_argument("--kind", choices=["digital", "put", "maxput"], required=True)
    sp.add_argument("--strike", type=float, default=None, help="strike K")
    sp.add_argument("--threshold", type=float, default=None, help="digital log-threshold k")
    sp.add_argument("--rate", type=float, default=1.0, help="discount per unit of Sigma")
    sp.add_argument("--method", choices=[inversion.GAVER_STEHFEST, inversion.TALBOT],
                    default=None)
    sp.add_argument("--order", type=int, default=None, help="inversion order / node count")
    sp.add_argument("--digits", type=int, default=None, help="working precision digits")
    sp.add_argument("--mc-check", action="store_true", dest="mc_check")
    sp.add_argument("--paths", type=int, default=20000)
    sp.add_argument("--step", type=float, default=1e-3)
    sp.add_argument("--max-time", type=float, default=1000.0, dest="max_time")
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_price)

    sp = sub.add_parser("validate", help="run the closed-form identity suite")
    sp.add_argument("--out", type=str, default=None)
    sp.add_argument("--inject-kernel-perturbation", type=float, default=None,
                    help="perturb the downward kernel by this relative amount "
                         "(sensitivity check; the suite must then fail)")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("experiment", help="smallball | lil | bias-study | paths (CSV)")
    sp.add_argument("what", choices=["smallball", "lil", "bias-study", "paths"])
    _add_common(sp)
    sp.add_argument("--paths", type=int, default=200)
    sp.add_argument("--step", type=float, default=1e-3)
    sp.add_argument("--max-time", type=float, default=1000.0, dest="max_time")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--y-min", type=float, default=100.0, dest="y_min")
    sp.add_argument("--y-max", type=float, default=1000.0, dest="y_max")
    sp.add_argument("--y-points", type=int, default=16, dest="y_points")
    sp.add_argument("--h-levels", type=int, default=3, dest="h_levels")
    sp.set_defaults(func=cmd_experiment)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else _USAGE_EXIT
    try:
        return args.func(args)
    except (RegimeViolationError, OrientationError, NonFiniteInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except BesqintError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return _NUMERIC_EXIT


if __name__ == "__main__":
    sys.exit(main())

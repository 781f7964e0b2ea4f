"""Command-line harness: identity suites, weight tables, convergence studies.

Three subcommands:

* ``check``    - run residual suites, emit one report per parameter point
                 (NDJSON or CSV), exit 0 iff every point passes;
* ``weights``  - tabulate all admissible face weights over a height window;
* ``converge`` - residual-versus-order table for the truncated products.

Sampling uses numpy's PCG64 generator with an explicit seed, so identical
configuration and seed reproduce identical parameter points and residuals.
Points may be evaluated in parallel (YBE_FORGE_THREADS caps the pool);
reports are emitted in draw order regardless of completion order.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import gauge, rmat
from .errors import ConfigError, InadmissibleHeights, PoleHit, YbeForgeError
from .qspecial import TruncationPolicy
from .suites import SUITE_NAMES, SuiteConfig, run_suite
from .tensor import rel_residual

REPORT_FIELDS = ("suite", "params", "residual", "tolerance", "pass",
                 "truncation", "wall_ms")


def _fmt_value(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j" if v.imag else f"{v.real:.17g}"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _params_to_json(params: dict) -> dict:
    return {k: _fmt_value(v) if isinstance(v, complex) else v
            for k, v in params.items()}


def emit_reports(reports: list[dict], fmt: str, stream) -> None:
    if fmt == "json":
        for rep in reports:
            obj = dict(rep)
            obj["params"] = _params_to_json(rep["params"])
            stream.write(json.dumps(obj, sort_keys=False) + "\n")
    elif fmt == "csv":
        stream.write(",".join(REPORT_FIELDS) + "\n")
        for rep in reports:
            params = ";".join(f"{k}={_fmt_value(v)}" for k, v in rep["params"].items())
            trunc = ";".join(f"{k}={_fmt_value(v)}" for k, v in rep["truncation"].items())
            row = [rep["suite"], f'"{params}"', _fmt_value(rep["residual"]),
                   _fmt_value(rep["tolerance"]), str(rep["pass"]).lower(),
                   f'"{trunc}"', _fmt_value(rep["wall_ms"])]
            stream.write(",".join(row) + "\n")
    elif fmt == "text":
        for rep in reports:
            status = "pass" if rep["pass"] else "FAIL"
            params = " ".join(f"{k}={_fmt_value(v)}" for k, v in rep["params"].items())
            stream.write(f"[{status}] {rep['suite']}: residual={rep['residual']:.3e} "
                         f"tol={rep['tolerance']:.1e} ({params})\n")
    else:
        raise ConfigError(f"unknown format {fmt!r}")


def _read_config_file(path: str) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                key, _, val = line.partition("=")
                out[key.strip()] = val.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return out


def _parse_trunc(spec: str) -> TruncationPolicy:
    kwargs = {}
    for piece in spec.split(","):
        if not piece:
            continue
        key, _, val = piece.partition("=")
        key = key.strip()
        if key in ("max_terms", "hard_cap"):
            kwargs[key] = int(val)
        elif key == "tail_tolerance":
            kwargs[key] = float(val)
        else:
            raise ConfigError(f"unknown truncation key {key!r}")
    try:
        return TruncationPolicy(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _merge_config(args, parser_defaults: dict) -> argparse.Namespace:
    """Overlay: defaults < config file < explicit flags."""
    if not getattr(args, "config", None):
        return args
    file_vals = _read_config_file(args.config)
    for key, raw in file_vals.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"config key {key!r} is not a known option")
        if getattr(args, attr) != parser_defaults.get(attr):
            continue  # flag was given explicitly; flags win
        default = parser_defaults.get(attr)
        if isinstance(default, int) and not isinstance(default, bool):
            setattr(args, attr, int(raw))
        elif isinstance(default, float):
            setattr(args, attr, float(raw))
        else:
            setattr(args, attr, raw)
    return args


def _out_stream(args):
    if args.out:
        return open(args.out, "w", encoding="utf-8")
    return sys.stdout


def _thread_count() -> int:
    raw = os.environ.get("YBE_FORGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"YBE_FORGE_THREADS={raw!r} is not an integer")


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    overrides = {}
    for name in ("q", "p", "w"):
        val = getattr(args, name)
        if val is not None:
            overrides[name] = val
    policy = _parse_trunc(args.trunc) if args.trunc else TruncationPolicy()
    cfg = SuiteConfig(suite=args.suite, seed=args.seed, samples=args.samples,
                      tolerance=args.tolerance, policy=policy,
                      overrides=overrides)
    threads = _thread_count()
    if cfg.suite == "all" and threads > 1:
        names = list(SUITE_NAMES)
        subcfgs = [SuiteConfig(suite=n, seed=cfg.seed, samples=cfg.samples,
                               tolerance=cfg.tolerance, policy=cfg.policy,
                               overrides=cfg.overrides) for n in names]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(run_suite, subcfgs))
        reports = [rep for chunk in chunks for rep in chunk]
    else:
        reports = run_suite(cfg)
    stream = _out_stream(args)
    try:
        emit_reports(reports, args.format, stream)
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0 if all(rep["pass"] for rep in reports) else 1


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def cmd_weights(args) -> int:
    rows = []
    lo, hi = args.height_min, args.height_max
    if lo > hi:
        raise ConfigError("height-min must not exceed height-max")
    for l in range(lo, hi + 1):
        for lp in (l + 1, l - 1):
            for mp in (lp + 1, lp - 1):
                for m in set((l + 1, l - 1)) & set((mp + 1, mp - 1)):
                    if not all(lo <= h <= hi for h in (l, lp, mp, m)):
                        continue
                    row = {"l": l, "l_next": lp, "m_next": mp, "m": m,
                           "w_shifted": _fmt_value(args.w * args.q**l)}
                    try:
                        val = rmat.boltzmann_weight(l, lp, mp, m, args.z, args.p,
                                                    args.w, args.q)
                        row["weight"] = _fmt_value(val)
                        row["flag"] = ""
                    except (PoleHit, InadmissibleHeights) as exc:
                        row["weight"] = ""
                        row["flag"] = type(exc).__name__
                    rows.append(row)
    stream = _out_stream(args)
    try:
        if args.format == "json":
            for row in rows:
                stream.write(json.dumps(row) + "\n")
        else:
            cols = ["l", "l_next", "m_next", "m", "w_shifted", "weight", "flag"]
            stream.write(",".join(cols) + "\n")
            for row in rows:
                stream.write(",".join(str(row[c]) for c in cols) + "\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


# ---------------------------------------------------------------------------
# converge
# ---------------------------------------------------------------------------

def _converge_residual(target: str, n: int, args) -> float:
    z, p, w, q = args.z, args.p, args.w, args.q
    if target == "twist":
        closed = rmat.f_twist_closed(z, p, w, q)
        return rel_residual(rmat.f_twist_product(z, 1.0, p, w, q, n), closed)
    if target == "m_plus":
        closed = gauge.m_plus(z, p, w, q, via="hypergeometric")
        return rel_residual(gauge.m_plus(z, p, w, q, via="product", n_factors=n),
                            closed)
    if target == "m_minus":
        closed = gauge.m_minus_inv(z, p, w, q, via="onephione")
        return rel_residual(gauge.m_minus_inv(z, p, w, q, via="product",
                                              n_factors=n), closed)
    if target == "r6v_universal":
        closed = rmat.r6v(z, 1.0, q)
        return rel_residual(rmat.r6v_universal_truncated(z, 1.0, q, n), closed)
    raise ConfigError(f"unknown convergence target {target!r}")


def cmd_converge(args) -> int:
    if args.n_min > args.n_max:
        raise ConfigError("n-min must not exceed n-max")
    orders = list(range(args.n_min, args.n_max + 1))
    residuals = [_converge_residual(args.target, n, args) for n in orders]
    monotone = all(residuals[i + 1] < residuals[i] for i in range(len(residuals) - 1))
    rate = None
    if len(orders) > 1 and all(r > 0 for r in residuals):
        slope = np.polyfit(orders, np.log(residuals), 1)[0]
        rate = float(np.exp(slope))
    stream = _out_stream(args)
    try:
        if args.format == "json":
            for n, res in zip(orders, residuals):
                stream.write(json.dumps({"target": args.target, "n": n,
                                         "residual": res}) + "\n")
            summary = {"target": args.target, "monotone_decreasing": monotone}
            if rate is not None:
                summary["fitted_rate"] = rate
            stream.write(json.dumps(summary) + "\n")
        else:
            stream.write("n,residual\n")
            for n, res in zip(orders, residuals):
                stream.write(f"{n},{_fmt_value(res)}\n")
            stream.write(f"# monotone_decreasing={str(monotone).lower()}\n")
            if rate is not None:
                stream.write(f"# fitted_rate={_fmt_value(rate)}\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _complex_arg(raw: str) -> complex:
    try:
        return complex(raw)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ybe-forge",
        description="Residual suites for q-special functions, vertex/face "
                    "R-matrices and the vertex-face gauge transformation.")
    sub = parser.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="run identity suites")
    chk.add_argument("--suite", default="all", choices=SUITE_NAMES + ("all",))
    chk.add_argument("--seed", type=int, default=42)
    chk.add_argument("--samples", type=int, default=None)
    chk.add_argument("--tolerance", type=float, default=None)
    chk.add_argument("--trunc", default=None,
                     help="truncation overrides, e.g. max_terms=256,tail_tolerance=1e-14")
    chk.add_argument("--format", default="json", choices=("json", "csv", "text"))
    chk.add_argument("--config", default=None, help="key=value config file; flags win")
    chk.add_argument("--out", default=None)
    chk.add_argument("--q", type=float, default=None, help="pin the deformation parameter")
    chk.add_argument("--p", type=float, default=None, help="pin the elliptic nome")
    chk.add_argument("--w", type=float, default=None, help="pin the dynamical parameter")
    chk.set_defaults(func=cmd_check)

    wts = sub.add_parser("weights", help="face Boltzmann weight table")
    wts.add_argument("--z", type=_complex_arg, default=0.5 + 0j)
    wts.add_argument("--p", type=float, default=0.2)
    wts.add_argument("--w", type=float, default=0.9)
    wts.add_argument("--q", type=float, default=0.4)
    wts.add_argument("--height-min", type=int, default=0)
    wts.add_argument("--height-max", type=int, default=3)
    wts.add_argument("--format", default="csv", choices=("json", "csv"))
    wts.add_argument("--config", default=None)
    wts.add_argument("--out", default=None)
    wts.set_defaults(func=cmd_weights)

    cnv = sub.add_parser("converge", help="residual vs truncation order")
    cnv.add_argument("--target", required=True,
                     choices=("twist", "m_plus", "m_minus", "r6v_universal"))
    cnv.add_argument("--n-min", type=int, default=1)
    cnv.add_argument("--n-max", type=int, default=8)
    cnv.add_argument("--z", type=_complex_arg, default=0.5 + 0j)
    cnv.add_argument("--p", type=float, default=0.3)
    cnv.add_argument("--w", type=float, default=0.55)
    cnv.add_argument("--q", type=float, default=0.45)
    cnv.add_argument("--format", default="csv", choices=("json", "csv"))
    cnv.add_argument("--config", default=None)
    cnv.add_argument("--out", default=None)
    cnv.set_defaults(func=cmd_converge)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    defaults = {a.dest: a.default for sp in parser._subparsers._group_actions
                for a in sp.choices[args.command]._actions}
    try:
        args = _merge_config(args, defaults)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except YbeForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

    fuzzy-spectra verify --model sphere --lambda 1 --lambda-max 6 --k-rule lambda2
    fuzzy-spectra spectrum --model circle --lambda 1 --k 2 --format csv
    fuzzy-spectra converge --config scan.json --out table.csv --format csv
    fuzzy-spectra validate-radial --config radial.json

Every subcommand takes an optional JSON ``--config`` whose keys mirror the
long flag names (``lambda_max``, ``k_rule``, ...); flags given on the command
line win.  Exit status: 0 pass, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import fuzzy_circle, fuzzy_sphere, radial
from .operator_core import hermitian_eigensystem
from .reports import K_RULES, ConsistencyWarning, VerificationReport, resolve_k

SCHEMA_VERSION = 1
MODELS = ("circle", "sphere", "madore")
FLAG_KEYS = ("model", "lambda", "lambda_max", "k", "k_rule", "tol", "out", "format")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration


def load_config(args: argparse.Namespace) -> dict:
    cfg: dict = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
    for key in FLAG_KEYS + ("D", "N"):
        val = getattr(args, key.replace("lambda", "lam"), None)
        if val is not None:
            cfg[key] = val
    return cfg


def lambda_range(cfg: dict) -> list[int]:
    try:
        lo = int(cfg.get("lambda", 1))
        hi = int(cfg.get("lambda_max", lo))
    except (TypeError, ValueError):
        raise UsageError("lambda and lambda_max must be integers") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"need 1 <= lambda <= lambda_max, got {lo}..{hi}")
    return list(range(lo, hi + 1))


def tolerance(cfg: dict, default: float = 1e-12) -> float:
    tol = float(cfg.get("tol", default))
    if not tol > 0:
        raise UsageError("tol must be positive")
    return tol


def stiffness(cfg: dict, lam: int, default_rule: str) -> float:
    rule = cfg.get("k_rule")
    if rule is None:
        rule = "fixed" if cfg.get("k") is not None else default_rule
    if rule not in K_RULES:
        raise UsageError(f"k_rule must be one of {K_RULES}")
    try:
        return resolve_k(rule, lam, cfg.get("k"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def thread_count() -> int:
    raw = os.environ.get("FUZZY_SPECTRA_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError("FUZZY_SPECTRA_THREADS must be an integer") from None
    return max(1, n)


def parallel_map(fn, items):
    """Order-preserving map, capped by ``FUZZY_SPECTRA_THREADS``."""
    n = thread_count()
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# output


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render(payload: dict, header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        body = {"schema_version": SCHEMA_VERSION, **_plain(payload)}
        return json.dumps(body, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(cfg: dict, payload: dict, header: list[str], rows: list[list], default_fmt: str = "json") -> None:
    fmt = cfg.get("format", default_fmt)
    if fmt not in ("json", "csv"):
        raise UsageError("format must be json or csv")
    text = render(payload, header, rows, fmt)
    if cfg.get("out"):
        write_atomic(cfg["out"], text)
    else:
        sys.stdout.write(text)


def _model(cfg: dict, allowed=MODELS) -> str:
    model = cfg.get("model", "circle")
    if model not in allowed:
        raise UsageError(f"model must be one of {allowed}")
    return model


# ---------------------------------------------------------------------------
# commands


def cmd_verify(cfg: dict) -> int:
    model = _model(cfg)
    tol = tolerance(cfg)
    lams = lambda_range(cfg)
    if model == "madore":
        for n in lams:
            if n < 2:
                raise UsageError("madore needs n = lambda >= 2")

    def one(lam):
        if model == "madore":
            return fuzzy_sphere.madore_baseline(lam, tol)[1]
        k = stiffness(cfg, lam, "lambda2")
        if model == "circle":
            return fuzzy_circle.verify_circle_algebra(fuzzy_circle.build_circle(lam, k), tol)
        return fuzzy_sphere.verify_sphere_algebra(fuzzy_sphere.build_sphere(lam, k), tol)

    reports = parallel_map(one, lams)
    ok = all(r.overall_pass for r in reports)
    rows = [
        [r.model, r.lam, r.k if r.k is not None else "", c.name, c.residual, c.tolerance, c.passed]
        for r in reports
        for c in r.checks
    ]
    payload = {"command": "verify", "overall_pass": ok, "reports": [r.to_dict() for r in reports]}
    emit(cfg, payload, ["model", "lambda", "k", "identity", "residual", "tolerance", "pass"], rows)
    return 0 if ok else 1


def _paired_spectrum(op: np.ndarray, predicted: dict) -> list[tuple[str, float, float]]:
    """Pair the sorted numeric spectrum with the sorted closed-form levels.

    Degenerate levels make eigenvector labels ambiguous; comparing the two
    sorted multisets is not.
    """
    w = hermitian_eigensystem(op).eigenvalues
    order = {lab: i for i, lab in enumerate(predicted)}
    labels = sorted(predicted, key=lambda lab: (predicted[lab], order[lab]))
    pairs = [(lab, float(ev), float(predicted[lab])) for lab, ev in zip(labels, w)]
    return sorted(pairs, key=lambda t: order[t[0]])


def spectrum_rows(model: str, lam: int, k: float) -> list[list]:
    rows = []
    if model == "circle":
        fc = fuzzy_circle.build_circle(lam, k)
        labels = [f"m={m}" for m in range(-lam, lam + 1)]
        preds = {
            "R2": dict(zip(labels, fuzzy_circle.r2_prediction(lam, k))),
            "L2": {f"m={m}": float(m * m) for m in range(-lam, lam + 1)},
        }
        ops = {"R2": fc.square_distance(), "L2": fc.Lbar @ fc.Lbar}
    else:
        fs = fuzzy_sphere.build_sphere(lam, k)
        labels = [f"l={l} m={m}" for l in range(lam + 1) for m in range(-l, l + 1)]
        r2 = fuzzy_sphere.r2_prediction(lam, k)
        preds = {
            "R2": {f"l={l} m={m}": r2[l] for l in range(lam + 1) for m in range(-l, l + 1)},
            "L2": {f"l={l} m={m}": float(l * (l + 1)) for l in range(lam + 1) for m in range(-l, l + 1)},
        }
        ops = {"R2": fs.square_distance(), "L2": fs.L2()}
    for name, op in ops.items():
        for label, ev, p in _paired_spectrum(op, preds[name]):
            rows.append([lam, k, name, label, ev, p, abs(ev - p)])
    return rows


def cmd_spectrum(cfg: dict) -> int:
    model = _model(cfg, ("circle", "sphere"))
    tol = tolerance(cfg)
    lams = lambda_range(cfg)
    ks = [stiffness(cfg, lam, "lambda2") for lam in lams]
    rows = [r for block in parallel_map(lambda p: spectrum_rows(model, *p), zip(lams, ks)) for r in block]
    ok = all(r[-1] <= tol for r in rows)
    header = ["lambda", "k", "operator", "level", "eigenvalue", "predicted", "abs_error"]
    payload = {
        "command": "spectrum",
        "model": model,
        "overall_pass": ok,
        "rows": [dict(zip(header, r)) for r in rows],
    }
    emit(cfg, payload, header, rows, default_fmt="csv")
    return 0 if ok else 1


def _circle_coeffs(spec) -> dict:
    out = {}
    for item in spec:
        if len(item) == 2:
            m, c = item
        elif len(item) == 3:
            m, re, im = item
            c = complex(re, im)
        else:
            raise ValueError(f"circle coefficient {item!r}: expected [m, c] or [m, re, im]")
        out[int(m)] = out.get(int(m), 0) + complex(c)
    return out


def _sphere_coeffs(spec) -> dict:
    out = {}
    for item in spec:
        if len(item) == 3:
            l, m, c = item
        elif len(item) == 4:
            l, m, re, im = item
            c = complex(re, im)
        else:
            raise ValueError(f"sphere coefficient {item!r}: expected [l, m, c] or [l, m, re, im]")
        l, m = int(l), int(m)
        if l < 0 or abs(m) > l:
            raise ValueError(f"sphere coefficient ({l}, {m}) has |m| > l")
        out[(l, m)] = out.get((l, m), 0) + complex(c)
    return out


def cmd_converge(cfg: dict) -> int:
    model = _model(cfg, ("circle", "sphere"))
    lams = lambda_range(cfg)
    if len(lams) < 2:
        raise UsageError("converge needs lambda_max > lambda")
    parse = _circle_coeffs if model == "circle" else _sphere_coeffs
    try:
        f = parse(cfg["f"])
        phi = parse(cfg["phi"])
        g = parse(cfg["g"]) if cfg.get("g") is not None else None
    except KeyError as exc:
        raise UsageError(f"config needs coefficient list {exc}") from None
    except (TypeError, ValueError) as exc:
        raise UsageError(f"malformed coefficient spec: {exc}") from None
    rule = cfg.get("k_rule") or ("fixed" if cfg.get("k") is not None else None)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConsistencyWarning)
        if model == "circle":
            table = fuzzy_circle.circle_convergence_scan(f, phi, lams, k_rule=rule, g=g, k=cfg.get("k"))
        else:
            table = fuzzy_sphere.sphere_convergence_scan(
                f, phi, lams, k_rule=rule or "prop43", g=g, k=cfg.get("k")
            )
    col = table.column("f")
    tol = tolerance(cfg)
    ok = bool(col[-1] < col[0] or np.all(col <= tol))
    rows = [[name, lam, k, v, desc] for name in table.columns for lam, k, v, desc in _rows_of(table, name)]
    payload = {
        "command": "converge",
        "model": model,
        "overall_pass": ok,
        "table": table.to_dict(),
        "warnings": sorted({str(w.message) for w in caught}),
    }
    emit(cfg, payload, ["column", "lambda", "k", "norm", "description"], rows)
    return 0 if ok else 1


def _rows_of(table, name):
    desc = table.descriptions.get(name, name)
    for lam, k, v in zip(table.lams, table.ks, table.column(name)):
        yield lam, k, float(v), desc


def cmd_validate_radial(cfg: dict) -> int:
    try:
        D = int(cfg.get("D", 3))
        k = float(cfg.get("k", 1e6))
        lam = int(cfg.get("lambda", 5))
        N = int(cfg.get("N", radial.DEFAULT_N))
    except (TypeError, ValueError):
        raise UsageError("D, lambda, N must be integers and k a number") from None
    if D not in (2, 3) or lam < 1 or not k > 0:
        raise UsageError("need D in {2, 3}, lambda >= 1, k > 0")
    try:
        radial.RadialProblem(D, 0, k, 0.0, N)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    spectrum = radial.level_spectrum(D, k, lam, N=N)
    level_tol = 50 / np.sqrt(k)
    levels = VerificationReport(f"radial-D{D}", lam, k)
    for j in range(lam + 1):
        levels.add(f"E0_{j}", abs(spectrum[(0, j)] - j * (j + D - 2)), level_tol)
    levels.add("E1_0_spacing", abs(spectrum[(1, 0)] / (2 * np.sqrt(2 * k)) - 1), 0.01)
    levels.extra["levels"] = {f"{n},{j}": e for (n, j), e in spectrum.items()}

    reports = [levels, radial.cutoff_check(D, k, lam, N)]
    reports += parallel_map(lambda j: radial.gaussian_profile_check(D, k, j, N), sorted({0, min(2, lam)}))
    if D == 2:
        reports += parallel_map(lambda m: radial.matrix_element_check(k, m, N, lam), range(lam))
    ok = all(r.overall_pass for r in reports)
    rows = [[r.model, r.lam, r.k, c.name, c.residual, c.tolerance, c.passed] for r in reports for c in r.checks]
    payload = {"command": "validate-radial", "D": D, "overall_pass": ok, "reports": [r.to_dict() for r in reports]}
    emit(cfg, payload, ["model", "index", "k", "check", "residual", "tolerance", "pass"], rows)
    return 0 if ok else 1


COMMANDS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "converge": cmd_converge,
    "validate-radial": cmd_validate_radial,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzy-spectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with run parameters")
        p.add_argument("--model", choices=MODELS)
        p.add_argument("--lambda", dest="lam", type=int)
        p.add_argument("--lambda-max", dest="lam_max", type=int)
        p.add_argument("--k", type=float)
        p.add_argument("--k-rule", dest="k_rule", choices=K_RULES)
        p.add_argument("--tol", type=float)
        p.add_argument("--out")
        p.add_argument("--format", choices=("json", "csv"))
        if name == "validate-radial":
            p.add_argument("--D", dest="D", type=int)
            p.add_argument("--N", dest="N", type=int)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConsistencyWarning)
            return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"fuzzy-spectra: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

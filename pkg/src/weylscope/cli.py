"""Command-line entry point ``weylscope``.

Configuration comes from an optional plain-text file of ``key=value`` tokens
(several per line allowed, ``#`` starts a comment) and from command-line flags,
which take precedence. Exit codes: 0 all verdicts pass, 1 a numerical verdict
failed, 2 a precondition failed, 3 the configuration is invalid.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import __version__
from .lkmeasures import (
    LKError,
    TransversalityError,
    TubeSpec,
    boundary_curves,
    euler_intersection_m11,
    gauss_bonnet_hypersurface,
    perturb_curve,
    tube_volume_formula,
    tube_volume_oracle,
)
from .pseudogeom import (
    AmbientSpace,
    CatalogError,
    MetricField,
    ParametricManifold,
    PlanarDomain,
    build,
    default_ambient,
    egregium_check,
    lc_regular_check,
    lc_transversal_hypersurface_check,
)
from .pushforward import GridConfig
from .verifysuite import cases_to_csv, cases_to_json, run_j_suite, run_table_suite, run_weyl_suite

__all__ = ["ConfigError", "RunConfig", "parse_config", "run", "main", "COMMANDS",
           "EXIT_OK", "EXIT_FAIL", "EXIT_PRECONDITION", "EXIT_CONFIG"]

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_CONFIG = 0, 1, 2, 3

COMMANDS = ("gb", "tube", "egregium", "lc-check", "m11", "dist-suite", "j-suite", "weyl-suite")

DEFAULT_TARGETS = {"gb": "sphere:1", "tube": "segment:timelike,2", "egregium": "sphere:1",
                   "lc-check": "metric:lcreg", "m11": "disc:1"}


class ConfigError(ValueError):
    """Malformed or invalid configuration.

    ``key`` names the offending key; ``line`` and ``column`` locate parse
    errors (1-based).
    """

    def __init__(self, message, *, key=None, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.key, self.line, self.column = key, line, column


@dataclass
class RunConfig:
    """Fully validated run configuration.

    ``None`` means the evaluator's own default.
    """

    command: str = ""
    ambient: tuple | None = None
    target: str | None = None
    grid: int | None = None
    tsamples: int | None = None
    window_frac: float | None = None
    blend_frac: float | None = None
    tol: float | None = None
    seed: int = 0
    r: float | None = None
    samples: int = 10**7
    points: int = 200
    perturb: float = 0.0
    margin: float | None = None
    out: str | None = None
    format: str = "json"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ambient"] = list(self.ambient) if self.ambient else None
        return d


_KEYS = {f.name for f in fields(RunConfig)}


def _int(key, text, minimum=None):
    try:
        v = int(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected an integer, got {text!r}", key=key) from None
    if minimum is not None and v < minimum:
        raise ConfigError(f"{key}: must be >= {minimum}", key=key)
    return v


def _float(key, text, positive=True):
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {text!r}", key=key) from None
    if not math.isfinite(v) or (positive and v <= 0):
        raise ConfigError(f"{key}: must be {'positive and ' if positive else ''}finite", key=key)
    return v


def _ambient(text):
    parts = str(text).split(",")
    if len(parts) != 2:
        raise ConfigError(f"ambient: expected P,Q, got {text!r}", key="ambient")
    p, q = (_int("ambient", s.strip(), 0) for s in parts)
    if p + q < 1:
        raise ConfigError("ambient: dimension must be positive", key="ambient")
    return p, q


def _validate(raw: dict) -> RunConfig:
    for key in raw:
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", key=key)
    cfg = RunConfig()
    cmd = raw.get("command")
    if cmd not in COMMANDS:
        raise ConfigError(f"command: expected one of {', '.join(COMMANDS)}, got {cmd!r}", key="command")
    cfg.command = cmd
    if raw.get("ambient") is not None:
        cfg.ambient = _ambient(raw["ambient"])
    if raw.get("target") is not None:
        try:
            build(raw["target"], AmbientSpace(*cfg.ambient) if cfg.ambient else None)
        except CatalogError as exc:
            raise ConfigError(f"target: {exc}", key="target") from None
        cfg.target = raw["target"]
    for key in ("grid", "tsamples"):
        if raw.get(key) is not None:
            setattr(cfg, key, _int(key, raw[key], 8))
    for key in ("samples", "points"):
        if raw.get(key) is not None:
            setattr(cfg, key, _int(key, raw[key], 1))
    if raw.get("seed") is not None:
        cfg.seed = _int("seed", raw["seed"], 0)
    for key in ("window_frac", "blend_frac", "tol", "r", "margin"):
        if raw.get(key) is not None:
            setattr(cfg, key, _float(key, raw[key]))
    if raw.get("perturb") is not None:
        cfg.perturb = _float("perturb", raw["perturb"], positive=False)
        if cfg.perturb < 0:
            raise ConfigError("perturb: must be nonnegative", key="perturb")
    if raw.get("out") is not None:
        cfg.out = str(raw["out"])
    fmt = raw.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"format: expected json or csv, got {fmt!r}", key="format")
    cfg.format = fmt
    if cfg.command == "tube" and cfg.r is None:
        cfg.r = 0.1
    return cfg


def _tokenize(text: str) -> dict:
    raw = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        col = 0
        for tok in body.split():
            col = body.index(tok, col) + 1
            key, eq, value = tok.partition("=")
            if not eq or not key or not value:
                raise ConfigError(f"expected key=value, got {tok!r}", line=ln, column=col)
            if key in raw:
                raise ConfigError(f"duplicate key {key!r}", key=key, line=ln, column=col)
            raw[key] = value
            col += len(tok) - 1
    return raw


def parse_config(text: str = "", overrides: dict | None = None) -> RunConfig:
    """Parse a ``key=value`` document and apply overrides.

    Parameters
    ----------
    text : str
        Tokens ``key=value`` separated by whitespace or newlines; ``#``
        comments to end of line.
    overrides : dict, optional
        Values that replace the document's (``None`` entries are ignored).

    Raises
    ------
    ConfigError
    """
    raw = _tokenize(text)
    for k, v in (overrides or {}).items():
        if v is not None:
            raw[k] = v
    return _validate(raw)


# ---------------------------------------------------------------------------
# dispatch


class _Precondition(Exception):
    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


def _ambient_of(cfg: RunConfig, target: str) -> AmbientSpace:
    return AmbientSpace(*cfg.ambient) if cfg.ambient else default_ambient(target)


def _build(cfg: RunConfig):
    target = cfg.target or DEFAULT_TARGETS[cfg.command]
    try:
        obj = build(target, _ambient_of(cfg, target))
    except CatalogError as exc:
        raise ConfigError(f"target: {exc}", key="target") from None
    return target, obj


def _cmd_gb(cfg):
    target, M = _build(cfg)
    if not isinstance(M, ParametricManifold):
        raise ConfigError("target: gb needs a surface", key="target")
    kw = {"resolution": cfg.grid or 2048, "tsamples": cfg.tsamples or 1024}
    if cfg.window_frac:
        kw["window_frac"] = cfg.window_frac
    if cfg.blend_frac:
        kw["blend_frac"] = cfg.blend_frac
    extra = {"margin_threshold": cfg.margin} if cfg.margin else {}
    try:
        rep = gauss_bonnet_hypersurface(M, GridConfig(**kw), target=target, tol=cfg.tol or 5e-3, **extra)
    except TransversalityError as exc:
        raise _Precondition(str(exc), {"failing_margin": exc.margin,
                                       "verdict": exc.verdict.to_dict() if exc.verdict else None}) from None
    except LKError as exc:
        raise _Precondition(str(exc)) from None
    out = rep.to_dict()
    out["chi_re"], out["chi_im"] = float(rep.value.real), float(rep.value.imag)
    return rep.passed, out


def _cmd_tube(cfg):
    target, M = _build(cfg)
    if not isinstance(M, ParametricManifold):
        raise ConfigError("target: tube needs a curve or surface", key="target")
    spec = TubeSpec(M, cfg.r)
    try:
        formula, imag = tube_volume_formula(spec, diagnostics=True)
        est, se = tube_volume_oracle(spec, samples=cfg.samples, seed=cfg.seed)
    except LKError as exc:
        raise _Precondition(str(exc)) from None
    dev = abs(formula - est)
    ok = dev < 3 * se if se > 0 else dev == 0
    return ok, {"target": target, "ambient": [M.ambient.p, M.ambient.q], "r": cfg.r,
                "formula": formula, "formula_imag": imag, "mc_estimate": est, "mc_stderr": se,
                "deviation_sigmas": dev / se if se > 0 else None, "samples": cfg.samples, "seed": cfg.seed,
                "verdict": "pass" if ok else "fail"}


def _random_params(M: ParametricManifold, n: int, seed: int):
    """``n`` uniform parameters at least 2% inside the chart with ``|det g| > 1e-3``."""
    dom = M.domain
    lo = np.array([dom.a1, dom.a2]) if M.dim == 2 else np.array([dom.a])
    hi = np.array([dom.b1, dom.b2]) if M.dim == 2 else np.array([dom.b])
    span = hi - lo
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        u = lo + span * (0.02 + 0.96 * rng.random((4 * n, len(lo))))
        det = np.linalg.det(M.induced_metric(*u.T))
        pts.extend(u[np.abs(det) > 1e-3])
    return np.array(pts[:n])


def _cmd_egregium(cfg):
    target, M = _build(cfg)
    if not isinstance(M, ParametricManifold) or M.dim != 2:
        raise ConfigError("target: egregium needs a surface", key="target")
    tol = cfg.tol or 1e-6
    pts = _random_params(M, cfg.points, cfg.seed)
    gaps = []
    for u in pts:
        k_int, k_ext = egregium_check(M, *u)
        gaps.append(abs(k_int - k_ext) / max(1.0, abs(k_ext)))
    worst = int(np.argmax(gaps))
    ok = max(gaps) < tol
    return ok, {"target": target, "ambient": [M.ambient.p, M.ambient.q], "points": cfg.points,
                "seed": cfg.seed, "max_discrepancy": float(max(gaps)), "worst_point": pts[worst].tolist(),
                "tol": tol, "verdict": "pass" if ok else "fail"}


def _cmd_lc_check(cfg):
    target, obj = _build(cfg)
    kw = {"grid": cfg.grid or 128, "tol": cfg.tol}
    if isinstance(obj, MetricField):
        v = lc_regular_check(obj, **kw)
        return v.regular, {"target": target, "metric": v.to_dict(), "verdict": "pass" if v.regular else "fail"}
    if not isinstance(obj, ParametricManifold):
        raise ConfigError("target: lc-check needs a metric or a manifold", key="target")
    out = {"target": target, "ambient": [obj.ambient.p, obj.ambient.q]}
    induced = lc_regular_check(obj, **kw)
    out["induced_metric"] = induced.to_dict()
    ok = induced.regular
    if obj.ambient.dim == obj.dim + 1:
        trans = lc_transversal_hypersurface_check(obj, **kw)
        out["transversality"] = trans.to_dict()
        out["agree"] = trans.regular == induced.regular
        ok = ok and trans.regular
    out["verdict"] = "pass" if ok else "fail"
    return ok, out


def _cmd_m11(cfg):
    target, dom = _build(cfg)
    if not isinstance(dom, PlanarDomain):
        raise ConfigError("target: m11 needs a planar domain (disc or annulus)", key="target")
    curves = boundary_curves(dom)
    if cfg.perturb:
        curves = [perturb_curve(c, cfg.perturb * R / 9.0, mode=3, phase=0.3 * k)
                  for k, (c, (R, _)) in enumerate(zip(curves, dom.boundary))]
    try:
        chi, crossings = euler_intersection_m11(curves, grid=cfg.grid or 4096)
    except LKError as exc:
        raise _Precondition(str(exc)) from None
    ok = chi.denominator == 1
    for c in crossings:
        c["point"] = list(c["point"])
    return ok, {"target": target, "chi": str(chi), "chi_value": float(chi), "n_crossings": len(crossings),
                "crossings": crossings, "perturb": cfg.perturb, "verdict": "pass" if ok else "fail"}


def _suite(fn):
    def cmd(cfg):
        cases = fn(cfg)
        return all(c.passed for c in cases), cases
    return cmd


_DISPATCH = {
    "gb": _cmd_gb,
    "tube": _cmd_tube,
    "egregium": _cmd_egregium,
    "lc-check": _cmd_lc_check,
    "m11": _cmd_m11,
    "dist-suite": _suite(lambda cfg: run_table_suite()),
    "j-suite": _suite(lambda cfg: run_j_suite(grid=cfg.tsamples or 48)),
    "weyl-suite": _suite(lambda cfg: run_weyl_suite()),
}


def _flatten(prefix, obj, rows):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, (list, tuple)) and any(isinstance(x, (dict, list, tuple)) for x in obj):
        for i, x in enumerate(obj):
            _flatten(f"{prefix}[{i}]", x, rows)
    else:
        rows.append((prefix, json.dumps(obj) if isinstance(obj, (list, tuple)) else obj))


def _render(cfg: RunConfig, payload, status: str, code: int) -> str:
    if isinstance(payload, list):
        if cfg.format == "csv":
            return cases_to_csv(payload)
        doc = json.loads(cases_to_json(payload, config=cfg.to_dict()))
        doc.update(status=status, exit_code=code, command=cfg.command)
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    doc = {"command": cfg.command, "config": cfg.to_dict(), "version": __version__, "status": status,
           "exit_code": code, "report": payload}
    if cfg.format == "csv":
        rows = []
        _flatten("", doc, rows)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    return json.dumps(doc, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    raise TypeError(f"not serializable: {type(o).__name__}")


def run(cfg: RunConfig, stdout=None) -> int:
    """Dispatch ``cfg`` and write its report; returns the exit code."""
    stdout = stdout or sys.stdout
    try:
        ok, payload = _DISPATCH[cfg.command](cfg)
        code, status = (EXIT_OK, "pass") if ok else (EXIT_FAIL, "fail")
    except ConfigError as exc:
        print(f"weylscope: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _Precondition as exc:
        code, status = EXIT_PRECONDITION, "precondition-failed"
        payload = {"error": str(exc), **exc.details}
    text = _render(cfg, payload, status, code)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="weylscope",
        description="Lipschitz-Killing curvature checks for pseudo-Euclidean immersions.",
        epilog="Exit codes: 0 pass, 1 numerical failure, 2 precondition failure, 3 config error.")
    ap.add_argument("command", nargs="?", choices=COMMANDS, help="evaluator or suite to run")
    ap.add_argument("--config", metavar="PATH", help="key=value configuration file (flags override it)")
    ap.add_argument("--ambient", metavar="P,Q", help="ambient signature (default: per target)")
    ap.add_argument("--target", metavar="NAME:ARGS", help="catalog entry, e.g. sphere:1 or torus:2,1,x")
    ap.add_argument("--grid", metavar="N", help="contour resolution (gb 2048, lc-check 128, m11 4096)")
    ap.add_argument("--tsamples", metavar="N", help="profile t-samples (gb 1024) or j-suite t-nodes (48)")
    ap.add_argument("--tol", metavar="X", help="verdict tolerance (gb 5e-3, egregium 1e-6)")
    ap.add_argument("--seed", metavar="N", help="random seed for Monte Carlo and sampling (0)")
    ap.add_argument("--r", metavar="X", help="tube radius (0.1)")
    ap.add_argument("--samples", metavar="N", help="Monte Carlo samples (1e7)")
    ap.add_argument("--points", metavar="N", help="egregium sample points (200)")
    ap.add_argument("--perturb", metavar="X", help="m11 boundary perturbation, C^2 size relative to the radius (0)")
    ap.add_argument("--out", metavar="PATH", help="report path (default: stdout)")
    ap.add_argument("--format", choices=("json", "csv"), help="report format (json)")
    ap.add_argument("--version", action="version", version=f"weylscope {__version__}")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    text = ""
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"weylscope: config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    overrides = {k: v for k, v in vars(args).items() if k != "config"}
    try:
        cfg = parse_config(text, overrides)
    except ConfigError as exc:
        print(f"weylscope: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

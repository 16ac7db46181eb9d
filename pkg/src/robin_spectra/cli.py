"""Command-line front end.

Configuration comes from an optional JSON file (``"schema": 1``) and from
flags; flags override file values.  Reports are CSV (header row, ``%.17g``
floats) or JSON, with every row carrying a hash of the resolved config.

Exit codes: 0 success, 1 a ``verify`` check failed, 2 invalid input,
3 numerical non-convergence.  Errors go to stderr as one JSON record.
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

import numpy as np

from .asymptotics import disc_rows, sweep, waveguide_sweep
from .curve_geometry import check_assumptions, curve_from_json
from .errors import ConvergenceError, RangeError
from .strip2d import StripModel, bracket_eigenvalues, default_width, strip_eigenvalues

SCHEMA_VERSION = 1
COMMANDS = ("curve-check", "spectrum", "bracket", "sweep", "disc", "waveguide", "verify")
EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_NONCONVERGENCE = 0, 1, 2, 3

DEFAULTS = {
    "curve": {"family": "line_bump"},
    "side": "interior",
    "beta": [10.0],
    "a": "paper",
    "mesh": [256, 128],
    "s_trunc": None,
    "k": 1,
    "far_bc": "dirichlet",
    "tol": 1e-8,
    "mesh_check": True,
    "seed": 0,
    "R": 1.0,
    "m": [0],
    "d": 1.0,
    "criteria": None,
    "output": None,
    "format": "csv",
}
CONFIG_KEYS = {"schema", "command", *DEFAULTS}
# keys that do not change the numbers in a report
_UNHASHED = ("output", "format")

COLUMNS = {
    "curve-check": ["family", "side", "a", "injective", "local_ok", "separation_ok",
                    "crossing_free", "a1_estimate", "decay_ok", "gamma_star", "gamma_lowstar",
                    "gamma_plus", "gamma1_plus", "gamma2_plus", "s_star", "decay_exponent_fit"],
    "spectrum": ["beta", "j", "lambda", "residual", "threshold", "discrete_flag",
                 "mesh_ns", "mesh_nu", "a"],
    "bracket": ["beta", "j", "lambda_lower", "lambda_upper", "lower_tol", "upper_tol",
                "threshold", "discrete_flag", "mesh_ns", "mesh_nu", "a"],
    "sweep": ["beta", "j", "lambda_computed_lower", "lambda_computed_upper",
              "predicted_two_term", "refined_lower", "residual", "discrete_flag",
              "mesh_ns", "mesh_nu", "a"],
    "disc": ["R", "beta", "m", "u_root", "lambda_exact", "lambda_asymptotic", "residual"],
    "waveguide": ["beta", "j", "lambda", "threshold", "predicted", "residual",
                  "discrete_flag", "d", "mesh_ns", "mesh_nu"],
    "verify": ["criterion", "title", "passed", "seconds", "details"],
}


class ConfigError(ValueError):
    """Invalid configuration."""


@dataclass
class RunConfig:
    command: str
    curve: dict = field(default_factory=lambda: dict(DEFAULTS["curve"]))
    side: str = "interior"
    beta: list = field(default_factory=lambda: [10.0])
    a: object = "paper"
    mesh: list = field(default_factory=lambda: [256, 128])
    s_trunc: float | None = None
    k: int = 1
    far_bc: str = "dirichlet"
    tol: float = 1e-8
    mesh_check: bool = True
    seed: int = 0
    R: float = 1.0
    m: list = field(default_factory=lambda: [0])
    d: float = 1.0
    criteria: list | None = None
    output: str | None = None
    format: str = "csv"

    def resolved(self) -> dict:
        out = {"schema": SCHEMA_VERSION, "command": self.command}
        out.update({k: getattr(self, k) for k in DEFAULTS})
        return out

    def config_hash(self) -> str:
        data = {k: v for k, v in self.resolved().items() if k not in _UNHASHED}
        text = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    @property
    def s_window(self):
        return None if self.s_trunc is None else (-float(self.s_trunc), float(self.s_trunc))

    def width(self, beta: float) -> float:
        return default_width(beta) if self.a == "paper" else float(self.a)


def _as_list(value, kind, name):
    items = value if isinstance(value, (list, tuple)) else [value]
    if not items:
        raise ConfigError(f"{name} must not be empty")
    out = []
    for v in items:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{name} entries must be numbers, got {v!r}")
        if kind is int and float(v) != int(v):
            raise ConfigError(f"{name} entries must be integers, got {v!r}")
        out.append(kind(v))
    return out


def _positive(value, name, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    if kind is int and float(value) != int(value):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    value = kind(value)
    if not (value > 0 and math.isfinite(value)):
        raise ConfigError(f"{name} must be positive and finite, got {value!r}")
    return value


def validate(raw: dict) -> RunConfig:
    """Check a merged config dict and build a :class:`RunConfig`."""
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if raw.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema {raw.get('schema')!r}; expected {SCHEMA_VERSION}")
    cmd = raw.get("command")
    if cmd not in COMMANDS:
        raise ConfigError(f"command must be one of {list(COMMANDS)}, got {cmd!r}")
    v = {**DEFAULTS, **{k: val for k, val in raw.items() if k in DEFAULTS}}
    if not isinstance(v["curve"], dict) or "family" not in v["curve"]:
        raise ConfigError("curve must be a JSON object with a 'family' key")
    if v["side"] not in ("interior", "exterior"):
        raise ConfigError("side must be 'interior' or 'exterior'")
    betas = [_positive(b, "beta") for b in _as_list(v["beta"], float, "beta")]
    if len(set(betas)) != len(betas):
        raise ConfigError("beta values must be distinct")
    a = v["a"]
    if a != "paper":
        a = _positive(a, "a")
    mesh = _as_list(v["mesh"], int, "mesh")
    if len(mesh) != 2 or min(mesh) < 8:
        raise ConfigError("mesh must be two integers n_s, n_u >= 8")
    s_trunc = None if v["s_trunc"] is None else _positive(v["s_trunc"], "s_trunc")
    ms = _as_list(v["m"], int, "m")
    if min(ms) < 0:
        raise ConfigError("m must be non-negative")
    if v["far_bc"] not in ("dirichlet", "neumann"):
        raise ConfigError("far_bc must be 'dirichlet' or 'neumann'")
    if not isinstance(v["mesh_check"], bool):
        raise ConfigError("mesh_check must be true or false")
    seed = v["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed must be a non-negative integer")
    criteria = v["criteria"]
    if criteria is not None:
        criteria = _as_list(criteria, int, "criteria")
        if any(c < 1 or c > 12 for c in criteria):
            raise ConfigError("criteria are numbered 1 to 12")
    if v["format"] not in ("csv", "json"):
        raise ConfigError("format must be 'csv' or 'json'")
    if v["output"] is not None and not isinstance(v["output"], str):
        raise ConfigError("output must be a path string")
    return RunConfig(
        command=cmd, curve=dict(v["curve"]), side=v["side"], beta=sorted(betas), a=a,
        mesh=mesh, s_trunc=s_trunc, k=_positive(v["k"], "k", int), far_bc=v["far_bc"],
        tol=_positive(v["tol"], "tol"), mesh_check=v["mesh_check"], seed=seed,
        R=_positive(v["R"], "R"), m=ms, d=_positive(v["d"], "d"), criteria=criteria,
        output=v["output"], format=v["format"],
    )


# ---------------------------------------------------------------------------
# commands; each returns (rows, exit code, optional error record)


def _model(cfg: RunConfig, beta: float) -> StripModel:
    return StripModel(curve_from_json(cfg.curve), beta, cfg.side, a=cfg.width(beta),
                      far_bc=cfg.far_bc, s_window=cfg.s_window, n_s=cfg.mesh[0], n_u=cfg.mesh[1])


def _cmd_curve_check(cfg):
    if cfg.a == "paper" and len(cfg.beta) != 1:
        raise ConfigError("curve-check needs an explicit a or a single beta")
    a = cfg.width(cfg.beta[0])
    curve = curve_from_json(cfg.curve)
    rep = check_assumptions(curve, a, side=cfg.side)
    st = rep.stats
    row = {"family": cfg.curve["family"], "side": cfg.side, "a": a,
           "injective": rep.injective, "local_ok": rep.local_ok,
           "separation_ok": rep.separation_ok, "crossing_free": rep.crossing_free,
           "a1_estimate": rep.a1_estimate, "decay_ok": rep.decay_ok,
           "gamma_star": st.gamma_star, "gamma_lowstar": st.gamma_lowstar,
           "gamma_plus": st.gamma_plus, "gamma1_plus": st.gamma1_plus,
           "gamma2_plus": st.gamma2_plus, "s_star": st.s_star,
           "decay_exponent_fit": st.decay_exponent_fit}
    if rep.injective:
        return [row], EXIT_OK, None
    record = {"error": "InjectivityFailure", "exit_code": EXIT_INVALID, "a": a,
              "a1_estimate": rep.a1_estimate, "message": "; ".join(rep.messages)}
    return [row], EXIT_INVALID, record


def _cmd_spectrum(cfg):
    rows = []
    for beta in cfg.beta:
        model = _model(cfg, beta)
        spec = strip_eigenvalues(model, cfg.k, cfg.tol, seed=cfg.seed)
        thr = model.threshold()
        for j, lam in enumerate(spec.values):
            rows.append({"beta": beta, "j": j + 1, "lambda": lam,
                         "residual": spec.residuals[j] if len(spec.residuals) else float("nan"),
                         "threshold": thr, "discrete_flag": bool(lam < thr),
                         "mesh_ns": cfg.mesh[0], "mesh_nu": cfg.mesh[1], "a": model.width})
    return rows, EXIT_OK, None


def _cmd_bracket(cfg):
    rows = []
    for beta in cfg.beta:
        enc = bracket_eigenvalues(_model(cfg, beta), cfg.k, cfg.tol,
                                  mesh_check=cfg.mesh_check, seed=cfg.seed)
        for j in range(cfg.k):
            rows.append({"beta": beta, "j": j + 1, "lambda_lower": enc.lower[j],
                         "lambda_upper": enc.upper[j], "lower_tol": enc.lower_tol[j],
                         "upper_tol": enc.upper_tol[j], "threshold": enc.threshold,
                         "discrete_flag": bool(enc.discrete_flags[j]),
                         "mesh_ns": enc.mesh[0], "mesh_nu": enc.mesh[1], "a": enc.a})
    return rows, EXIT_OK, None


def _cmd_sweep(cfg):
    rep = sweep(curve_from_json(cfg.curve), cfg.beta, cfg.k, cfg.side,
                n_s=cfg.mesh[0], n_u=cfg.mesh[1], s_window=cfg.s_window, a_rule=cfg.a,
                mesh_check=cfg.mesh_check, seed=cfg.seed)
    return list(rep.rows()), EXIT_OK, None


def _cmd_disc(cfg):
    return disc_rows(cfg.R, cfg.beta, cfg.m), EXIT_OK, None


def _cmd_waveguide(cfg):
    out = waveguide_sweep(curve_from_json(cfg.curve), cfg.d, cfg.beta, cfg.k,
                          n_s=cfg.mesh[0], n_u=cfg.mesh[1], s_window=cfg.s_window, seed=cfg.seed)
    rows = []
    for i, beta in enumerate(out["betas"]):
        thr = float(out["threshold"][i])
        for j in range(cfg.k):
            lam = float(out["values"][i, j])
            rows.append({"beta": float(beta), "j": j + 1, "lambda": lam, "threshold": thr,
                         "predicted": float(out["predicted"][i]),
                         "residual": lam - float(out["predicted"][i]),
                         "discrete_flag": lam < thr, "d": cfg.d,
                         "mesh_ns": cfg.mesh[0], "mesh_nu": cfg.mesh[1]})
    return rows, EXIT_OK, None


def _cmd_verify(cfg):
    from .acceptance import run_all

    results = run_all(cfg.criteria)
    for r in results:
        print(r.line(), file=sys.stderr)
    rows = [{"criterion": r.number, "title": r.title, "passed": r.passed,
             "seconds": r.seconds, "details": r.details} for r in results]
    return rows, (EXIT_OK if all(r.passed for r in results) else EXIT_FAILED), None


HANDLERS = {"curve-check": _cmd_curve_check, "spectrum": _cmd_spectrum,
            "bracket": _cmd_bracket, "sweep": _cmd_sweep, "disc": _cmd_disc,
            "waveguide": _cmd_waveguide, "verify": _cmd_verify}


# ---------------------------------------------------------------------------
# report emission


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def render(cfg: RunConfig, rows: list) -> str:
    """Serialize report rows; the column order is fixed per command."""
    cols = COLUMNS[cfg.command]
    h = cfg.config_hash()
    if cfg.format == "json":
        doc = {"schema": SCHEMA_VERSION, "command": cfg.command, "config_hash": h,
               "config": cfg.resolved(), "columns": cols + ["config_hash"],
               "rows": [{**{c: _json_value(r[c]) for c in cols}, "config_hash": h} for r in rows]}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols + ["config_hash"])
    for r in rows:
        w.writerow([_cell(r[c]) for c in cols] + [h])
    return buf.getvalue()


def run(cfg: RunConfig) -> int:
    """Execute a validated config, write the report and return the exit code."""
    try:
        rows, code, record = HANDLERS[cfg.command](cfg)
    except ConvergenceError as exc:
        return _fail(EXIT_NONCONVERGENCE, exc, residuals=_listify(exc.residuals))
    except RangeError as exc:
        return _fail(EXIT_NONCONVERGENCE, exc)
    except ValueError as exc:
        return _fail(EXIT_INVALID, exc)
    text = render(cfg, rows)
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if record is not None:
        record["config_hash"] = cfg.config_hash()
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return code


def _listify(x):
    if x is None:
        return None
    return [_json_value(v) for v in np.ravel(np.asarray(x, dtype=float))]


def _fail(code, exc, **extra) -> int:
    record = {"error": type(exc).__name__, "exit_code": code, "message": str(exc), **extra}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# argument parsing


def _json_arg(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"invalid JSON: {exc}") from None
    return obj


def _a_arg(text):
    return "paper" if text == "paper" else float(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(json.dumps({"error": "UsageError", "exit_code": EXIT_INVALID, "message": message}),
              file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON config file (schema 1)")
    common.add_argument("--curve", type=_json_arg, help='curve JSON, e.g. \'{"family": "circle", "R": 1}\'')
    common.add_argument("--side", choices=("interior", "exterior"))
    common.add_argument("--beta", type=float, nargs="+", help="one or more Robin parameters")
    common.add_argument("--a", type=_a_arg, help="strip width or 'paper' for 3 log(beta)/beta")
    common.add_argument("--mesh", type=int, nargs=2, metavar=("N_S", "N_U"))
    common.add_argument("--s-trunc", dest="s_trunc", type=float, help="window (-S, S) for open curves")
    common.add_argument("--k", type=int, help="number of eigenvalues")
    common.add_argument("--far-bc", dest="far_bc", choices=("dirichlet", "neumann"))
    common.add_argument("--tol", type=float)
    common.add_argument("--no-mesh-check", dest="mesh_check", action="store_false")
    common.add_argument("--seed", type=int)
    common.add_argument("--R", type=float, help="disc radius")
    common.add_argument("--m", type=int, nargs="+", help="angular modes")
    common.add_argument("--d", type=float, help="waveguide width")
    common.add_argument("--criteria", type=int, nargs="+", help="acceptance criteria to run")
    common.add_argument("--output", "-o", help="report path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    parser = _Parser(prog="robin-spectra", description="Robin Laplacian spectra near curved boundaries")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {"curve-check": "check tubular-neighbourhood hypotheses",
             "spectrum": "lowest strip eigenvalues", "bracket": "Dirichlet/Neumann enclosure",
             "sweep": "beta sweep against predictions", "disc": "exact disc-exterior levels",
             "waveguide": "Robin waveguide levels", "verify": "run the acceptance suite"}
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], argument_default=argparse.SUPPRESS)
    return parser


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    return obj


def main(argv=None) -> int:
    try:
        args = vars(build_parser().parse_args(argv))
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    try:
        raw = load_config(args.pop("config")) if "config" in args else {}
        if "command" in raw and raw["command"] != args["command"]:
            raise ConfigError(f"config is for {raw['command']!r}, not {args['command']!r}")
        raw.update(args)
        cfg = validate(raw)
    except ValueError as exc:
        return _fail(EXIT_INVALID, exc)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

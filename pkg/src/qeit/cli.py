"""Command-line driver: detuning sweeps, transients, uncertainty and semiclassical curves.

Configuration is a flat JSON object (file or ``-`` for stdin); command-line
flags override it. Every table is written as CSV (``#`` metadata lines,
then a header) or JSON (``{"metadata": ..., "rows": [...]}``). Output
depends only on the resolved configuration, never on ``--jobs``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import __version__
from .dark_state import semiclassical_chi
from .dynamics import build_sector, dark_state_coherences, evolve
from .fock import CoherentPair, FockWeights, poisson_weights
from .group_velocity import regime, uncertainty_bound, vg_sector, vg_stats
from .params import DEFAULT_NBAR, DEFAULT_OMEGA2, DEFAULT_GINDEX, SingularSectorError, SystemParams, g2_for
from .susceptibility import chi_stats

EXIT_OK, EXIT_INVALID, EXIT_SINGULAR = 0, 1, 2

SWEEP_COLUMNS = (
    "delta1", "chi1_mean", "chi2_mean", "chi1_std", "chi2_std", "p1", "p2",
    "vg_over_c_mean", "vg_over_c_std", "vg_rel_fluct", "regime_flag",
    "vg_rel_fluct_linear",
)
UNCERTAINTY_COLUMNS = (
    "delta1", "lhs", "rhs", "satisfied", "lhs_exact", "satisfied_exact",
    "vg_std", "vg_std_linear", "cos_std", "sin_mean", "slope_F",
)
TRANSIENT_COLUMNS = (
    "t", "rho_ab_re", "rho_ab_im", "rho_cb_re", "rho_cb_im", "rho_ca_re", "rho_ca_im",
)
SEMICLASSICAL_COLUMNS = ("delta1", "chi", "dchi_domega")

QUANTITIES = ("chi_mean", "chi_fluct", "vg", "uncertainty", "transient")
NULL = "null"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class OutputSpec:
    quantity: str
    format: str = "csv"
    path: str = "-"


@dataclass(frozen=True)
class RunConfig:
    case: str = "b"
    gamma1: float = 1.0
    gamma2: float = 1.0
    gamma3: float = 1e-3
    g1: float | None = None
    g2: float | None = None
    omega2_bar: float = DEFAULT_OMEGA2
    kappa: float = 1.0
    gindex: float = DEFAULT_GINDEX
    alpha2: float = DEFAULT_NBAR
    beta2: float = 0.0
    alpha_phase: float = 0.0
    delta_min: float = -1.0
    delta_max: float = 1.0
    delta_steps: int = 201
    tail_eps: float = 1e-12
    delta1: float = 0.1
    n1: int = 1
    n2: int = 500
    order: int = 1
    t_grid: tuple = tuple(float(t) for t in range(0, 21))
    jobs: int = 0
    outputs: tuple = ()

    def params(self) -> SystemParams:
        g2 = self.g2 if self.g2 is not None else g2_for(self.omega2_bar, self.alpha2)
        g1 = self.g1 if self.g1 is not None else g2
        return SystemParams(gamma1=self.gamma1, gamma2=self.gamma2, gamma3=self.gamma3,
                            g1=g1, g2=g2, kappa=self.kappa, gindex=self.gindex)

    def fields(self) -> CoherentPair:
        return CoherentPair.from_photon_numbers(self.alpha2, self.beta2, self.alpha_phase)

    def grid(self) -> list[float]:
        if self.delta_steps == 1:
            return [float(self.delta_min)]
        return [float(x) for x in np.linspace(self.delta_min, self.delta_max, self.delta_steps)]

    def resolved(self) -> dict:
        """Every parameter that determines the output, for metadata headers."""
        d = asdict(self)
        d.pop("jobs")
        d.pop("outputs")
        p = self.params()
        d["g1"], d["g2"] = p.g1, p.g2
        d["t_grid"] = list(self.t_grid)
        d["version"] = __version__
        return d


_FIELD_TYPES = {f.name: f for f in fields(RunConfig)}


def _coerce(name, value):
    default = _FIELD_TYPES[name].default
    if name == "case":
        if value not in ("a", "b", "c"):
            raise ConfigError(f"case: must be one of a, b, c (got {value!r})")
        return value
    if name == "outputs":
        if not isinstance(value, list):
            raise ConfigError("outputs: must be a list")
        specs = []
        for i, o in enumerate(value):
            if not isinstance(o, dict) or "quantity" not in o:
                raise ConfigError(f"outputs[{i}]: needs a 'quantity' key")
            extra = set(o) - {"quantity", "format", "path"}
            if extra:
                raise ConfigError(f"outputs[{i}]: unknown keys {sorted(extra)}")
            if o["quantity"] not in QUANTITIES:
                raise ConfigError(f"outputs[{i}].quantity: must be one of {QUANTITIES}")
            if o.get("format", "csv") not in ("csv", "json"):
                raise ConfigError(f"outputs[{i}].format: must be csv or json")
            specs.append(OutputSpec(**o))
        return tuple(specs)
    if name == "t_grid":
        try:
            ts = tuple(float(t) for t in value)
        except (TypeError, ValueError):
            raise ConfigError("t_grid: must be a list of numbers") from None
        return ts
    if name in ("delta_steps", "n1", "n2", "order", "jobs"):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(f"{name}: must be an integer (got {value!r})")
        return int(value)
    if value is None and default is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name}: must be a number (got {value!r})")
    return float(value)


def _validate(cfg: RunConfig) -> RunConfig:
    def need(cond, msg):
        if not cond:
            raise ConfigError(msg)

    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if isinstance(v, float):
            need(math.isfinite(v), f"{f.name}: must be finite (got {v!r})")
    need(cfg.delta_min <= cfg.delta_max,
         f"delta_min: must be <= delta_max ({cfg.delta_min} > {cfg.delta_max})")
    need(cfg.delta_steps >= 1, f"delta_steps: must be >= 1 (got {cfg.delta_steps})")
    need(cfg.gamma1 > 0, f"gamma1: must be > 0 (got {cfg.gamma1})")
    need(cfg.gamma2 >= 0, f"gamma2: must be >= 0 (got {cfg.gamma2})")
    need(cfg.gamma3 >= 0, f"gamma3: must be >= 0 (got {cfg.gamma3})")
    need(cfg.kappa > 0, f"kappa: must be > 0 (got {cfg.kappa})")
    need(cfg.gindex > 0, f"gindex: must be > 0 (got {cfg.gindex})")
    need(cfg.alpha2 >= 0, f"alpha2: must be >= 0 (got {cfg.alpha2})")
    need(cfg.beta2 >= 0, f"beta2: must be >= 0 (got {cfg.beta2})")
    need(0 < cfg.tail_eps < 1, f"tail_eps: must lie in (0, 1) (got {cfg.tail_eps})")
    need(cfg.omega2_bar > 0, f"omega2_bar: must be > 0 (got {cfg.omega2_bar})")
    for name in ("g1", "g2"):
        v = getattr(cfg, name)
        need(v is None or (math.isfinite(v) and v >= 0), f"{name}: must be >= 0 (got {v})")
    need(cfg.n1 >= 0 and cfg.n2 >= 0, "n1, n2: must be >= 0")
    need(cfg.order in (1, 2), f"order: must be 1 or 2 (got {cfg.order})")
    need(len(cfg.t_grid) >= 1, "t_grid: must not be empty")
    need(all(t >= 0 and math.isfinite(t) for t in cfg.t_grid), "t_grid: values must be finite and >= 0")
    need(cfg.jobs >= 0, f"jobs: must be >= 0 (got {cfg.jobs})")
    return cfg


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = sorted(set(data) - set(_FIELD_TYPES))
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    if data.get("g2") is not None and "omega2_bar" in data:
        raise ConfigError("g2 and omega2_bar are mutually exclusive")
    kw = {k: _coerce(k, v) for k, v in data.items()}
    return _validate(RunConfig(**kw))


def load_config(source: str | None = None, stdin=None) -> RunConfig:
    """Read a JSON configuration from a path, ``-`` (stdin) or nothing (defaults)."""
    if source is None:
        return RunConfig()
    if source == "-":
        text = (stdin or sys.stdin).read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    if not text.strip():
        return RunConfig()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed configuration: {exc}") from None
    return config_from_dict(data)


# -- table computation ------------------------------------------------------

def _sweep_row(cfg: RunConfig, delta1: float, weights: FockWeights | None,
               probe_weights: FockWeights | None):
    p, fl = cfg.params(), cfg.fields()
    row = dict.fromkeys(SWEEP_COLUMNS)
    row["delta1"] = delta1
    try:
        st = chi_stats(cfg.case, p, fl, delta1, cfg.tail_eps,
                       weights=weights, probe_weights=probe_weights)
        row.update(chi1_mean=st.chi1_mean, chi2_mean=st.chi2_mean,
                   chi1_std=st.chi1_std, chi2_std=st.chi2_std, p1=st.p1, p2=st.p2)
        if cfg.case == "b":
            vs = vg_stats(p, fl, delta1, cfg.tail_eps, weights=weights)
            row.update(vg_over_c_mean=vs.vg_mean, vg_over_c_std=vs.vg_std,
                       vg_rel_fluct=vs.rel_fluct, regime_flag=vs.regime,
                       vg_rel_fluct_linear=vs.rel_fluct_linear)
        elif cfg.case == "a":
            v = vg_sector(p, fl.n_alpha, delta1)
            row.update(vg_over_c_mean=v, vg_over_c_std=0.0, vg_rel_fluct=0.0,
                       regime_flag=regime(v))
        return row, None
    except SingularSectorError as exc:
        row["regime_flag"] = "error"
        return row, {"delta1": delta1, "error": str(exc)}


def _sweep_chunk(args):
    cfg, deltas = args
    w2 = poisson_weights(cfg.alpha2, cfg.tail_eps) if cfg.case != "a" else None
    w1 = poisson_weights(cfg.beta2, cfg.tail_eps) if cfg.case == "c" else None
    return [_sweep_row(cfg, d, w2, w1) for d in deltas]


def _uncertainty_chunk(args):
    cfg, deltas = args
    p = cfg.params()
    alpha = cfg.fields().alpha
    out = []
    for d in deltas:
        row = dict.fromkeys(UNCERTAINTY_COLUMNS)
        row["delta1"] = d
        try:
            rep = uncertainty_bound(p, alpha, d, cfg.tail_eps)
            row.update({k: getattr(rep, k) for k in UNCERTAINTY_COLUMNS[1:]})
            out.append((row, None))
        except SingularSectorError as exc:
            out.append((row, {"delta1": d, "error": str(exc)}))
    return out


def _jobs(cfg: RunConfig) -> int:
    return cfg.jobs if cfg.jobs > 0 else (os.cpu_count() or 1)


def _map_grid(func, cfg: RunConfig):
    grid = cfg.grid()
    jobs = min(_jobs(cfg), len(grid))
    if jobs <= 1:
        results = func((cfg, grid))
    else:
        chunks = [grid[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(func, [(cfg, c) for c in chunks]))
        # interleave back into grid order
        results = [None] * len(grid)
        for i, part in enumerate(parts):
            results[i::jobs] = part
    rows = [r for r, _ in results]
    errors = [e for _, e in results if e is not None]
    return rows, errors


def sweep_table(cfg: RunConfig):
    return _map_grid(_sweep_chunk, cfg)


def uncertainty_table(cfg: RunConfig):
    return _map_grid(_uncertainty_chunk, cfg)


def transient_table(cfg: RunConfig):
    p = cfg.params()
    s = build_sector(p, cfg.case, cfg.n1, cfg.n2, cfg.delta1)
    r0 = dark_state_coherences(p, cfg.n1, cfg.n2, cfg.delta1, cfg.order)
    rows = []
    for t in cfg.t_grid:
        r = evolve(s.M, s.A, r0, t)
        rows.append(dict(zip(TRANSIENT_COLUMNS, (
            t, r.rho_ab.real, r.rho_ab.imag, r.rho_cb.real, r.rho_cb.imag,
            r.rho_ca.real, r.rho_ca.imag))))
    return rows, []


def semiclassical_table(cfg: RunConfig):
    """Dark-state-convention Rabi frequencies ``2 g1 sqrt(beta2)``, ``2 g2 sqrt(alpha2 + 1)``."""
    p = cfg.params()
    o1 = 2.0 * p.g1 * math.sqrt(cfg.beta2)
    o2 = 2.0 * p.g2 * math.sqrt(cfg.alpha2 + 1.0)
    rows = []
    for d in cfg.grid():
        sc = semiclassical_chi(p, o1, o2, d)
        rows.append({"delta1": d, "chi": sc.chi, "dchi_domega": sc.dchi_domega})
    return rows, []


# -- serialization ----------------------------------------------------------

def _cell(v):
    if v is None:
        return NULL
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else NULL
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render(rows, columns, metadata: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {"metadata": metadata,
               "rows": [{c: _json_value(r[c]) for c in columns} for r in rows]}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    for k, v in metadata.items():
        buf.write(f"# {k}: {json.dumps(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r[c]) for c in columns])
    return buf.getvalue()


def _emit(text: str, path: str, stdout):
    if path == "-":
        stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


_TABLES = {
    "sweep": (sweep_table, SWEEP_COLUMNS),
    "uncertainty": (uncertainty_table, UNCERTAINTY_COLUMNS),
    "transient": (transient_table, TRANSIENT_COLUMNS),
    "semiclassical": (semiclassical_table, SEMICLASSICAL_COLUMNS),
}

_QUANTITY_TABLE = {"chi_mean": "sweep", "chi_fluct": "sweep", "vg": "sweep",
                   "uncertainty": "uncertainty", "transient": "transient"}


def run_table(command: str, cfg: RunConfig, fmt: str = "csv", out: str = "-",
              stdout=None, stderr=None) -> int:
    """Compute one table and write it; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    func, columns = _TABLES[command]
    rows, errors = func(cfg)
    meta = {"table": command, **cfg.resolved()}
    _emit(render(rows, columns, meta, fmt), out, stdout)
    if errors:
        json.dump({"errors": errors}, stderr, indent=1)
        stderr.write("\n")
        return EXIT_SINGULAR
    return EXIT_OK


def run_sweep(cfg: RunConfig, fmt: str = "csv", out: str = "-", stdout=None, stderr=None) -> int:
    """Write the sweep table, or every entry of ``cfg.outputs`` when present."""
    if not cfg.outputs:
        return run_table("sweep", cfg, fmt, out, stdout, stderr)
    status = EXIT_OK
    for spec in cfg.outputs:
        status = max(status, run_table(_QUANTITY_TABLE[spec.quantity], cfg,
                                       spec.format, spec.path, stdout, stderr))
    return status


def run_transient(cfg: RunConfig, fmt: str = "csv", out: str = "-", stdout=None, stderr=None) -> int:
    return run_table("transient", cfg, fmt, out, stdout, stderr)


# -- argument parsing -------------------------------------------------------

_FLAG_KEYS = {
    "case": "case", "delta_min": "delta_min", "delta_max": "delta_max", "steps": "delta_steps",
    "alpha2": "alpha2", "beta2": "beta2", "alpha_phase": "alpha_phase", "gamma2": "gamma2",
    "gamma3": "gamma3", "gindex": "gindex", "tail_eps": "tail_eps", "jobs": "jobs",
    "delta1": "delta1", "n1": "n1", "n2": "n2", "order": "order",
}


class _Parser(argparse.ArgumentParser):
    """Usage errors are validation errors (exit 1); 2 is kept for singularities."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qeit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qeit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "sweep": "susceptibility and group-velocity statistics versus detuning",
        "transient": "coherence evolution of one Fock sector from its dark state",
        "uncertainty": "group-velocity / phase uncertainty product versus detuning",
        "semiclassical": "large-photon-number dark-state dispersion curves",
    }
    for name, h in helps.items():
        sp = sub.add_parser(name, help=h)
        sp.add_argument("--config", metavar="PATH", help="JSON config file, '-' for stdin")
        sp.add_argument("--case", choices=("a", "b", "c"))
        sp.add_argument("--delta-min", type=float)
        sp.add_argument("--delta-max", type=float)
        sp.add_argument("--steps", type=int)
        sp.add_argument("--alpha2", type=float, help="mean coupling photon number")
        sp.add_argument("--beta2", type=float, help="mean probe photon number")
        sp.add_argument("--alpha-phase", type=float, help="phase of alpha in radians")
        sp.add_argument("--gamma2", type=float)
        sp.add_argument("--gamma3", type=float)
        sp.add_argument("--gindex", type=float)
        sp.add_argument("--tail-eps", type=float)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default="-", metavar="PATH")
        sp.add_argument("--jobs", type=int, help="worker processes (0 = all cores)")
        if name == "transient":
            sp.add_argument("--delta1", type=float)
            sp.add_argument("--n1", type=int)
            sp.add_argument("--n2", type=int)
            sp.add_argument("--order", type=int, choices=(1, 2))
            sp.add_argument("--t-max", type=float)
            sp.add_argument("--t-steps", type=int)
    return parser


def config_from_args(args, stdin=None) -> RunConfig:
    cfg = load_config(args.config, stdin=stdin)
    data = asdict(cfg)
    data["outputs"] = [asdict(o) for o in cfg.outputs]
    data["t_grid"] = list(cfg.t_grid)
    for flag, key in _FLAG_KEYS.items():
        v = getattr(args, flag, None)
        if v is not None:
            data[key] = v
    t_max, t_steps = getattr(args, "t_max", None), getattr(args, "t_steps", None)
    if t_max is not None or t_steps is not None:
        t_max = t_max if t_max is not None else max(cfg.t_grid)
        t_steps = t_steps if t_steps is not None else len(cfg.t_grid)
        if t_steps < 1:
            raise ConfigError(f"t_steps: must be >= 1 (got {t_steps})")
        data["t_grid"] = [float(t) for t in np.linspace(0.0, t_max, t_steps)]
    if cfg.g2 is None:
        data.pop("g2")
    else:
        data.pop("omega2_bar")
    return config_from_dict(data)


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args, stdin=stdin)
    except (ConfigError, OSError) as exc:
        stderr.write(f"qeit: invalid configuration: {exc}\n")
        return EXIT_INVALID
    try:
        if args.command == "sweep":
            return run_sweep(cfg, args.format, args.out, stdout, stderr)
        return run_table(args.command, cfg, args.format, args.out, stdout, stderr)
    except SingularSectorError as exc:
        stderr.write(f"qeit: numerical singularity: {exc}\n")
        return EXIT_SINGULAR
    except ValueError as exc:
        stderr.write(f"qeit: invalid input: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

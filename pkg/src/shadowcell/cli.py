"""Command-line experiment runner: factor sweeps, blocking sweeps, oracle tables.

Subcommands ``factors``, ``blocking``, ``oracle`` each expand a parameter
grid into cells, run them in a deterministic order, and append one CSV row
per cell.  Configuration comes from a plain ``key = value`` file plus
command-line overrides (flags win).  Every row carries the seed and the
full parameter set covered by the schema, and re-running with the same
config and seed reproduces the file byte for byte.

Long sweeps are resumable: each completed cell key is appended to
``<out>.done`` and already-done cells are skipped on restart.  Cell seeds
are derived from the global seed and the cell's position in the full
sorted grid, so resuming or changing --threads never changes results.
"""

import argparse
import hashlib
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import oracle
from .capacity import (
    CDMA,
    OFDMA,
    RadioParams,
    ServiceClass,
    TrafficSpec,
    blocking_probability,
)
from .geometry import TorusSpec, hex_intensity
from .propagation import DistanceLossParams, ShadowingModel, lognormal_moment
from .qos import (
    GEOGRAPHICALLY_CLOSEST,
    SMALLEST_PATH_LOSS,
    HexModel,
    PoissonModel,
    estimate_factors,
)

FACTORS_HEADER = (
    "model,grid_order,delta_km,beta,v_db,policy,n_samples,"
    "mean_f,se_f,mean_l,se_l,mean_l_db,seed,oracle_f,oracle_l"
)
BLOCKING_HEADER = (
    "tech,model,grid_order,delta_km,beta,v_db,traffic_erlang_km2,"
    "C,M,R,mean_blocking,se,seed"
)
ORACLE_HEADER = "formula,beta,v_db,k_per_km,intensity_per_km2,value"

# se/mean ratio above which a warning is printed for heavy-tailed l sums
SE_WARN_RATIO = 0.05


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved parameters of one sweep.  Defaults follow the reference
    evaluation setup: 5 MHz bandwidth, 43+9 dBm max power, 12% common
    channel overhead, -103 dBm noise, K = 8667 /km, 180 kbit/s users,
    1 km BS spacing."""

    experiment: str
    models: tuple = ("hex", "poisson")
    hex_grid_orders: tuple = (6, 10, 30)
    poisson_grid_orders: tuple = (6, 10, 30, 100)
    delta_km: float = 1.0
    betas: tuple = (3.0, 4.0, 5.0)
    v_dbs: tuple = tuple(float(v) for v in range(0, 41, 2))
    policy: str = SMALLEST_PATH_LOSS
    n_samples: int = 10_000
    k_per_km: float = 8667.0
    intensity_per_km2: float = None  # None: match the hexagonal density
    tech: str = OFDMA
    traffics: tuple = (46.2, 34.6, 23.1)
    capacity_units: int = 1000
    locations: int = None  # None: 30 per expected cell
    realizations: int = 4
    bandwidth_hz: float = 5e6
    max_power_dbm: float = 52.0
    epsilon: float = 0.12
    alpha: float = 0.0
    noise_dbm: float = -103.0
    psi_scale: float = 1.0
    bit_rate_bps: float = 180_000.0
    seed: int = 1
    out: str = None
    threads: int = 1

    def validate(self):
        if self.experiment not in ("factors", "blocking", "oracle"):
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        for name in ("models", "betas", "v_dbs", "traffics"):
            if len(getattr(self, name)) == 0:
                raise ConfigError(f"{name} must not be empty")
        for m in self.models:
            if m not in ("hex", "poisson"):
                raise ConfigError(f"unknown model {m!r}")
        if self.policy not in (SMALLEST_PATH_LOSS, GEOGRAPHICALLY_CLOSEST):
            raise ConfigError(f"unknown policy {self.policy!r}")
        if self.tech not in (OFDMA, CDMA):
            raise ConfigError(f"unknown tech {self.tech!r}")
        if self.n_samples < 2:
            raise ConfigError("n_samples must be at least 2")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")


_BLOCKING_DEFAULTS = dict(
    models=("hex",),
    hex_grid_orders=(6,),
    poisson_grid_orders=(6,),
    betas=(2.5, 3.0, 3.5, 4.0, 4.5, 5.0),
    v_dbs=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0),
)

_INT_LIST_KEYS = {"hex_grid_orders", "poisson_grid_orders"}
_FLOAT_LIST_KEYS = {"betas", "v_dbs", "traffics"}
_STR_LIST_KEYS = {"models"}
_INT_KEYS = {"n_samples", "capacity_units", "locations", "realizations", "seed", "threads"}
_FLOAT_KEYS = {
    "delta_km",
    "k_per_km",
    "intensity_per_km2",
    "bandwidth_hz",
    "max_power_dbm",
    "epsilon",
    "alpha",
    "noise_dbm",
    "psi_scale",
    "bit_rate_bps",
}
_STR_KEYS = {"policy", "tech", "out"}


def _parse_value(key, raw):
    try:
        if key in _INT_LIST_KEYS:
            return tuple(int(tok) for tok in raw.split(",") if tok.strip())
        if key in _FLOAT_LIST_KEYS:
            return tuple(float(tok) for tok in raw.split(",") if tok.strip())
        if key in _STR_LIST_KEYS:
            return tuple(tok.strip() for tok in raw.split(",") if tok.strip())
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _STR_KEYS:
            return raw.strip()
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from None
    raise ConfigError(f"unknown config key {key!r}")


def load_config_file(path):
    """Parse a plain key = value file; '#' starts a comment."""
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
                key, raw = (part.strip() for part in line.split("=", 1))
                values[key] = _parse_value(key, raw)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return values


def build_config(experiment, args):
    cfg = ExperimentConfig(experiment=experiment)
    if experiment == "blocking":
        cfg = replace(cfg, **_BLOCKING_DEFAULTS)
    if args.config:
        cfg = replace(cfg, **load_config_file(args.config))
    overrides = {}
    for key in (
        "models", "hex_grid_orders", "poisson_grid_orders", "delta_km", "betas",
        "v_dbs", "policy", "n_samples", "k_per_km", "intensity_per_km2", "tech",
        "traffics", "capacity_units", "locations", "realizations", "seed", "out",
        "threads",
    ):
        raw = getattr(args, key, None)
        if raw is not None:
            overrides[key] = _parse_value(key, raw) if isinstance(raw, str) else raw
    cfg = replace(cfg, **overrides)
    if cfg.out is None:
        cfg = replace(cfg, out=f"{experiment}.csv")
    cfg.validate()
    return cfg


def _cell_seed(global_seed, cell_index):
    ss = np.random.SeedSequence(global_seed, spawn_key=(cell_index,))
    return int(ss.generate_state(1, np.uint64)[0])


def _fmt(x):
    return repr(float(x))


def _grid_orders(cfg, model):
    return cfg.hex_grid_orders if model == "hex" else cfg.poisson_grid_orders


def _factors_cells(cfg):
    cells = []
    for model in sorted(set(cfg.models)):
        for grid_order in sorted(set(_grid_orders(cfg, model))):
            for beta in sorted(set(cfg.betas)):
                for v in sorted(set(cfg.v_dbs)):
                    cells.append((model, grid_order, beta, v))
    return cells


def _run_factors_cell(cfg, cell, cell_index):
    model_name, grid_order, beta, v = cell
    torus = TorusSpec(grid_order, cfg.delta_km)
    intensity = cfg.intensity_per_km2
    if intensity is None:
        intensity = hex_intensity(cfg.delta_km)
    if model_name == "hex":
        model = HexModel(torus)
    else:
        model = PoissonModel(torus, intensity)
    dl = DistanceLossParams(cfg.k_per_km, beta)
    est = estimate_factors(
        model,
        ShadowingModel(v),
        dl,
        cfg.policy,
        cfg.n_samples,
        _cell_seed(cfg.seed, cell_index),
    )
    if est.mean_l > 0 and est.se_l / est.mean_l > SE_WARN_RATIO:
        print(
            f"warning: se/mean of l is {est.se_l / est.mean_l:.1%} for {cell}; "
            "increase n_samples for heavy-tailed shadowing",
            file=sys.stderr,
            flush=True,
        )
    if model_name == "poisson":
        oracle_f = _fmt(oracle.poisson_mean_f(beta))
        oracle_l = _fmt(
            oracle.poisson_mean_l(beta, cfg.k_per_km, intensity, lognormal_moment(v, 2.0 / beta))
        )
    else:
        oracle_f = ""
        oracle_l = ""
    return ",".join(
        [
            model_name,
            str(grid_order),
            _fmt(cfg.delta_km),
            _fmt(beta),
            _fmt(v),
            cfg.policy,
            str(cfg.n_samples),
            _fmt(est.mean_f),
            _fmt(est.se_f),
            _fmt(est.mean_l),
            _fmt(est.se_l),
            _fmt(est.mean_l_db),
            str(cfg.seed),
            oracle_f,
            oracle_l,
        ]
    )


def _blocking_cells(cfg):
    cells = []
    for model in sorted(set(cfg.models)):
        for grid_order in sorted(set(_grid_orders(cfg, model))):
            for beta in sorted(set(cfg.betas)):
                for v in sorted(set(cfg.v_dbs)):
                    for traffic in sorted(set(cfg.traffics)):
                        cells.append((model, grid_order, beta, v, traffic))
    return cells


def _run_blocking_cell(cfg, cell, cell_index):
    model_name, grid_order, beta, v, traffic = cell
    torus = TorusSpec(grid_order, cfg.delta_km)
    if model_name == "hex":
        model = HexModel(torus)
    else:
        intensity = cfg.intensity_per_km2
        if intensity is None:
            intensity = hex_intensity(cfg.delta_km)
        model = PoissonModel(torus, intensity)
    radio = RadioParams(
        bandwidth_hz=cfg.bandwidth_hz,
        max_power_dbm=cfg.max_power_dbm,
        common_channel_fraction=cfg.epsilon,
        orthogonality=cfg.alpha,
        noise_power_dbm=cfg.noise_dbm,
        psi_scale=cfg.psi_scale,
    )
    locations = cfg.locations
    if locations is None:
        locations = 30 * grid_order**2
    result = blocking_probability(
        model,
        ShadowingModel(v),
        DistanceLossParams(cfg.k_per_km, beta),
        radio,
        ServiceClass(cfg.bit_rate_bps),
        TrafficSpec(traffic),
        cfg.tech,
        cfg.capacity_units,
        locations,
        cfg.realizations,
        _cell_seed(cfg.seed, cell_index),
    )
    return ",".join(
        [
            cfg.tech,
            model_name,
            str(grid_order),
            _fmt(cfg.delta_km),
            _fmt(beta),
            _fmt(v),
            _fmt(traffic),
            str(cfg.capacity_units),
            str(locations),
            str(cfg.realizations),
            _fmt(result.mean_blocking),
            _fmt(result.se),
            str(cfg.seed),
        ]
    )


def _oracle_cells(cfg):
    intensity = cfg.intensity_per_km2
    if intensity is None:
        intensity = hex_intensity(cfg.delta_km)
    cells = []
    for beta in sorted(set(cfg.betas)):
        cells.append(("closest_bs_poisson_mean_f", beta, tuple(sorted(set(cfg.v_dbs))), intensity))
        cells.append(("hex_mean_f_approx", beta, (None,), intensity))
        cells.append(("hex_mean_l_approx", beta, (None,), intensity))
        cells.append(("poisson_mean_f", beta, (None,), intensity))
        cells.append(("poisson_mean_l", beta, tuple(sorted(set(cfg.v_dbs))), intensity))
    return sorted(cells)


def _run_oracle_cell(cfg, cell, cell_index):
    formula, beta, vs, intensity = cell
    rows = []
    for v in vs:
        if formula == "poisson_mean_f":
            value = oracle.poisson_mean_f(beta)
        elif formula == "poisson_mean_l":
            value = oracle.poisson_mean_l(
                beta, cfg.k_per_km, intensity, lognormal_moment(v, 2.0 / beta)
            )
        elif formula == "hex_mean_f_approx":
            value = oracle.hex_mean_f_approx(beta)
        elif formula == "hex_mean_l_approx":
            value = oracle.hex_mean_l_approx(beta, cfg.k_per_km, intensity)
        else:
            value = oracle.closest_bs_poisson_mean_f(beta, v)
        rows.append(
            ",".join(
                [
                    formula,
                    _fmt(beta),
                    "" if v is None else _fmt(v),
                    _fmt(cfg.k_per_km),
                    _fmt(intensity),
                    _fmt(value),
                ]
            )
        )
    return "\n".join(rows)


def _cell_key(experiment, cell):
    return experiment + "|" + "|".join(str(part) for part in cell)


def _fingerprint(cfg):
    """Stable hash of the result-relevant config (threads and paths excluded)."""
    fields = asdict(cfg)
    fields.pop("threads")
    fields.pop("out")
    blob = repr(sorted(fields.items())).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _load_done(path, fingerprint):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [line.strip() for line in fh if line.strip()]
    except FileNotFoundError:
        return set()
    except OSError as exc:
        raise ConfigError(f"cannot read done index {path}: {exc}") from None
    if not lines:
        return set()
    if lines[0] != f"# config {fingerprint}":
        raise ConfigError(
            f"{path} belongs to a different configuration; "
            "remove it and the CSV, or use another --out"
        )
    return set(lines[1:])


def run_sweep(cfg, cells, runner, header):
    """Execute cells in sorted order, appending rows and done-keys as we go."""
    done_path = cfg.out + ".done"
    fingerprint = _fingerprint(cfg)
    done = _load_done(done_path, fingerprint)
    fresh = not done
    try:
        out_fh = open(cfg.out, "w" if fresh else "a", encoding="utf-8")
        done_fh = open(done_path, "w" if fresh else "a", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot open output {cfg.out}: {exc}") from None
    with out_fh, done_fh:
        if fresh:
            out_fh.write(header + "\n")
            out_fh.flush()
            done_fh.write(f"# config {fingerprint}\n")
            done_fh.flush()
        pending = [
            (index, cell)
            for index, cell in enumerate(cells)
            if _cell_key(cfg.experiment, cell) not in done
        ]
        skipped = len(cells) - len(pending)
        if skipped:
            print(f"resuming: {skipped} of {len(cells)} cells already done", file=sys.stderr)

        def work(item):
            index, cell = item
            return runner(cfg, cell, index)

        started = time.time()
        if cfg.threads == 1:
            results = map(work, pending)
        else:
            pool = ThreadPoolExecutor(max_workers=cfg.threads)
            results = pool.map(work, pending)
        for n_done, ((index, cell), row) in enumerate(zip(pending, results), 1):
            out_fh.write(row + "\n")
            out_fh.flush()
            done_fh.write(_cell_key(cfg.experiment, cell) + "\n")
            done_fh.flush()
            print(
                f"[{n_done}/{len(pending)}] {_cell_key(cfg.experiment, cell)} "
                f"({time.time() - started:.1f}s elapsed)",
                file=sys.stderr,
                flush=True,
            )
        if cfg.threads != 1:
            pool.shutdown()
    return 0


def _add_common_flags(sub):
    sub.add_argument("--config", help="key = value config file")
    sub.add_argument("--seed", type=int, help="global seed (default 1)")
    sub.add_argument("--out", help="output CSV path")
    sub.add_argument("--threads", type=int, help="worker threads (default 1)")
    sub.add_argument("--models", help="comma list: hex,poisson")
    sub.add_argument("--hex-grid-orders", dest="hex_grid_orders", help="comma list of even ints")
    sub.add_argument(
        "--poisson-grid-orders", dest="poisson_grid_orders", help="comma list of even ints"
    )
    sub.add_argument("--delta-km", dest="delta_km", type=float, help="BS spacing in km")
    sub.add_argument("--betas", help="comma list of path-loss exponents (> 2)")
    sub.add_argument("--v-dbs", dest="v_dbs", help="comma list of shadowing log-SDs in dB")
    sub.add_argument("--k-per-km", dest="k_per_km", type=float, help="distance-loss K in 1/km")
    sub.add_argument(
        "--intensity-per-km2",
        dest="intensity_per_km2",
        type=float,
        help="Poisson BS density (default: hexagonal density for delta_km)",
    )


def make_parser():
    parser = argparse.ArgumentParser(
        prog="shadowcell",
        description="Cellular QoS factor and blocking-probability sweeps on toroidal layouts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_factors = sub.add_parser("factors", help="sweep mean interference/path-loss factors")
    _add_common_flags(p_factors)
    p_factors.add_argument("--policy", help=f"{SMALLEST_PATH_LOSS} or {GEOGRAPHICALLY_CLOSEST}")
    p_factors.add_argument("--n-samples", dest="n_samples", type=int, help="samples per cell")

    p_blocking = sub.add_parser("blocking", help="sweep mean blocking probability")
    _add_common_flags(p_blocking)
    p_blocking.add_argument("--tech", help="ofdma or cdma")
    p_blocking.add_argument("--traffics", help="comma list of Erlang per km2")
    p_blocking.add_argument(
        "--capacity-units", dest="capacity_units", type=int, help="resource units C"
    )
    p_blocking.add_argument(
        "--locations", type=int, help="user locations per realization (default 30 per cell)"
    )
    p_blocking.add_argument("--realizations", type=int, help="network realizations R")

    p_oracle = sub.add_parser("oracle", help="print closed-form values as CSV")
    _add_common_flags(p_oracle)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args.command, args)
        if cfg.experiment == "factors":
            return run_sweep(cfg, _factors_cells(cfg), _run_factors_cell, FACTORS_HEADER)
        if cfg.experiment == "blocking":
            return run_sweep(cfg, _blocking_cells(cfg), _run_blocking_cell, BLOCKING_HEADER)
        return run_sweep(cfg, _oracle_cells(cfg), _run_oracle_cell, ORACLE_HEADER)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

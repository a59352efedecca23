"""Named sweep recipes and the batch runner.

Each recipe evaluates a parameter grid with the pure library functions
and emits one CSV (documented column contract below) plus a JSON sidecar
with the full configuration, library version, and wall time. Grid points
are independent tasks, so a worker pool may fan them out; rows are
always emitted in grid order, making the CSV byte-identical for a given
configuration regardless of the job count.

Column contracts:

  concurrence-surface   t1, t2, concurrence
  concurrence-slices    t1, t2, concurrence, visibility, p_success
  theta-fringes         setting, theta_rad, outcome_sign, probability,
                        expected_counts, counts
                        (plus one raw counts file per setting:
                        counts_<tag>_seed<seed>.csv)
  scaling-balanced      t, t1, p_success [, p_normalized]
  imbalance-restore     t1, t2, strategy, visibility, concurrence,
                        bell_fidelity, p_success [, p_normalized]
  oracle-check          draw, t1, t2, sign, max_dev_rho, dev_norm,
                        dev_concurrence

Success probabilities are absolute heralding probabilities summed over
both entangling outcomes; ``p_normalized`` divides by the same inputs on
lossless channels. All transmittivities are AMPLITUDE transmittivities
(power transmission is t^2).
"""

from __future__ import annotations

import concurrent.futures
import csv
import dataclasses
import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .config import SweepConfig
from .experiment import (
    CountModel,
    estimate_visibility,
    normalized_success,
    pump_split,
    spdc_input,
    synth_counts,
    SpdcSource,
)
from .metrics import (
    bell_fidelity,
    concurrence_closed_form,
    concurrence_wootters,
    fringe_scan,
    visibility_analytic,
)
from .protocol import (
    MAX_ENTANGLED_PAIR,
    BsmSetting,
    closed_form_rho,
    optimal_inputs,
    random_input_pair,
    success_probability,
    swap,
)

__all__ = ["RunReport", "RECIPES", "run", "run_oracle_draws", "describe_recipes"]

_TWO_PI = 2.0 * math.pi

# oracle-check tolerances
DEV_RHO_TOL = 1e-12
DEV_NORM_TOL = 1e-12
DEV_CONCURRENCE_TOL = 1e-10

DEFAULT_GRIDS = {
    "concurrence-surface": {
        "t1": tuple(np.linspace(0.05, 1.0, 20)),
        "t2": tuple(np.linspace(0.05, 1.0, 20)),
    },
    "concurrence-slices": {
        "t1": (0.3, 0.6, 0.8, 1.0),
        "t2": tuple(np.linspace(0.0, 1.0, 101)),
    },
    "theta-fringes": {
        "t1": (1.0,),
        "t2": (1.0,),
        "theta": tuple(np.linspace(0.0, _TWO_PI, 16, endpoint=False)),
        "xi": (0.1,),
        "ratio": (0.5,),
    },
    "scaling-balanced": {
        "t": tuple(np.geomspace(1e-3, 1.0, 25)),
        "xi": (0.05,),
    },
    "imbalance-restore": {
        "t1": (1.0,),
        "t2": tuple(np.linspace(0.1, 1.0, 10)),
        "xi": (0.05,),
        "epsilon": (0.01,),
    },
    "oracle-check": {},
}

DESCRIPTIONS = {
    "concurrence-surface": (
        "concurrence of the heralded state over a (t1, t2) grid with "
        "maximally entangled inputs"
    ),
    "concurrence-slices": (
        "concurrence, visibility and heralding probability vs t2 for "
        "selected t1 values, maximally entangled inputs"
    ),
    "theta-fringes": (
        "verification-phase fringes for every middle-station setting, "
        "with synthetic Poisson coincidence counts"
    ),
    "scaling-balanced": (
        "heralding probability vs total transmission t for balanced "
        "channels t1 = t2 = sqrt(t); summary reports the log-log slope"
    ),
    "imbalance-restore": (
        "visibility/fidelity degradation from unbalanced losses and its "
        "restoration by loss-matched input amplitudes"
    ),
    "oracle-check": (
        "randomized cross-validation of the closed-form heralded state "
        "against the brute-force dilation pipeline"
    ),
}


@dataclass(frozen=True)
class RunReport:
    experiment: str
    csv_path: Path
    meta_path: Path
    extra_files: tuple[Path, ...]
    summary: dict
    ok: bool


def _grid(cfg: SweepConfig, key: str) -> tuple[float, ...]:
    value = getattr(cfg, key)
    if value is None:
        value = DEFAULT_GRIDS[cfg.experiment][key]
    return value


def _pmap(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * jobs))
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


# ---------------------------------------------------------------- recipes

def _surface_point(task):
    t1, t2 = task
    return (t1, t2, float(concurrence_closed_form(MAX_ENTANGLED_PAIR, t1, t2)))


def _run_surface(cfg: SweepConfig, jobs: int):
    g1, g2 = _grid(cfg, "t1"), _grid(cfg, "t2")
    tasks = [(a, b) for a in g1 for b in g2]
    rows = _pmap(_surface_point, tasks, jobs)
    header = ["t1", "t2", "concurrence"]
    summary = {
        "points": len(rows),
        "max_concurrence": max(r[2] for r in rows),
    }

    def rep_state():
        return swap(MAX_ENTANGLED_PAIR, g1[0], g2[0], BsmSetting.x(+1)).rho_ab

    return header, rows, summary, rep_state, True


def _slices_point(task):
    t1, t2 = task
    c = float(concurrence_closed_form(MAX_ENTANGLED_PAIR, t1, t2))
    rho, norm = closed_form_rho(MAX_ENTANGLED_PAIR, t1, t2, sign=+1)
    vis = visibility_analytic(rho).v
    return (t1, t2, c, vis, norm)


def _run_slices(cfg: SweepConfig, jobs: int):
    g1, g2 = _grid(cfg, "t1"), _grid(cfg, "t2")
    tasks = [(a, b) for a in g1 for b in g2]
    rows = _pmap(_slices_point, tasks, jobs)
    header = ["t1", "t2", "concurrence", "visibility", "p_success"]
    summary = {"points": len(rows), "t1_values": list(g1)}

    def rep_state():
        return swap(MAX_ENTANGLED_PAIR, g1[0], g2[0], BsmSetting.x(+1)).rho_ab

    return header, rows, summary, rep_state, True


_FRINGE_SETTINGS = (
    ("Xp", BsmSetting.x(+1)),
    ("Xm", BsmSetting.x(-1)),
    ("Yp", BsmSetting.y(+1)),
    ("Ym", BsmSetting.y(-1)),
    ("Zp", BsmSetting.z("01")),
    ("Zm", BsmSetting.z("10")),
)


def _fringe_block(task):
    pair, t1, t2, thetas, mean, child_seed, tag = task
    setting = dict(_FRINGE_SETTINGS)[tag]
    outcome = swap(pair, t1, t2, setting)
    scan = fringe_scan(outcome.rho_ab, thetas, setting=setting)
    counts = synth_counts(pair, t1, t2, setting, thetas, CountModel(mean, child_seed))
    rows = []
    for i, theta in enumerate(scan.thetas):
        rows.append((tag, theta, "+", scan.p_plus[i], mean * scan.p_plus[i],
                     int(counts.counts_plus[i])))
        rows.append((tag, theta, "-", scan.p_minus[i], mean * scan.p_minus[i],
                     int(counts.counts_minus[i])))
    fit = estimate_visibility(thetas, counts.counts_plus)
    return rows, (tag, counts), {"v": fit.v, "sigma": fit.sigma}


def _run_fringes(cfg: SweepConfig, jobs: int):
    t1, t2 = _grid(cfg, "t1")[0], _grid(cfg, "t2")[0]
    thetas = _grid(cfg, "theta")
    xi = _grid(cfg, "xi")[0]
    ratio = _grid(cfg, "ratio")[0]
    # xi is the total pump amplitude scale; the split divides it between sources
    pair = spdc_input(*pump_split(ratio, xi))
    children = np.random.SeedSequence(cfg.seed).spawn(len(_FRINGE_SETTINGS))
    tasks = [
        (pair, t1, t2, thetas, cfg.counts, int(child.generate_state(1, np.uint64)[0]), tag)
        for (tag, _), child in zip(_FRINGE_SETTINGS, children)
    ]
    results = _pmap(_fringe_block, tasks, jobs)
    rows = [row for block, _, _ in results for row in block]
    header = ["setting", "theta_rad", "outcome_sign", "probability",
              "expected_counts", "counts"]
    summary = {"fitted_visibility": {tag: fit for _, (tag, _), fit in results}}
    extra = [(f"counts_{tag}_seed{cfg.seed}.csv", counts)
             for _, (tag, counts), _ in results]

    def rep_state():
        return swap(pair, t1, t2, BsmSetting.x(+1)).rho_ab

    return header, rows, summary, rep_state, True, extra


def _scaling_point(task):
    pair, t, normalize = task
    root = math.sqrt(t)
    p = success_probability(pair, root, root)
    if normalize:
        return (t, root, p, normalized_success(pair, root, root))
    return (t, root, p)


def _run_scaling(cfg: SweepConfig, jobs: int):
    grid = _grid(cfg, "t")
    xi = _grid(cfg, "xi")[0]
    pair = spdc_input(SpdcSource(xi), SpdcSource(xi))
    tasks = [(pair, t, cfg.normalize) for t in grid]
    rows = _pmap(_scaling_point, tasks, jobs)
    header = ["t", "t1", "p_success"] + (["p_normalized"] if cfg.normalize else [])
    logs_t = np.log(np.array([r[0] for r in rows]))
    logs_p = np.log(np.array([r[2] for r in rows]))
    slope = float(np.polyfit(logs_t, logs_p, 1)[0])
    summary = {
        "slope_loglog": slope,
        "reference_slopes": {"swap": 1.0, "direct_transmission": 2.0},
    }

    def rep_state():
        root = math.sqrt(grid[0])
        return swap(pair, root, root, BsmSetting.x(+1)).rho_ab

    return header, rows, summary, rep_state, True


def _imbalance_point(task):
    t1, t2, strategy, xi, epsilon, normalize = task
    if strategy == "equal":
        pair = spdc_input(SpdcSource(xi), SpdcSource(xi))
    else:
        pair = optimal_inputs(t1, t2, epsilon)
    rho, norm = closed_form_rho(pair, t1, t2, sign=+1)
    vis = visibility_analytic(rho).v
    conc = concurrence_wootters(rho)
    fid = bell_fidelity(rho, sign=+1, phase=0.0)
    row = [t1, t2, strategy, vis, conc, fid, norm]
    if normalize:
        row.append(normalized_success(pair, t1, t2))
    return tuple(row)


def _run_imbalance(cfg: SweepConfig, jobs: int):
    t1 = _grid(cfg, "t1")[0]
    g2 = _grid(cfg, "t2")
    xi = _grid(cfg, "xi")[0]
    epsilon = _grid(cfg, "epsilon")[0]
    tasks = [
        (t1, t2, strategy, xi, epsilon, cfg.normalize)
        for t2 in g2
        for strategy in ("equal", "optimal")
    ]
    rows = _pmap(_imbalance_point, tasks, jobs)
    header = ["t1", "t2", "strategy", "visibility", "concurrence",
              "bell_fidelity", "p_success"]
    if cfg.normalize:
        header.append("p_normalized")
    summary = {
        "t1": t1,
        "equal_visibility_shape": "2*t1*t2/(t1^2+t2^2)",
        "optimal_success_shape": "2*t1^2*t2^2/(t1^2+t2^2)",
    }

    def rep_state():
        pair = optimal_inputs(t1, g2[0], epsilon)
        return swap(pair, t1, g2[0], BsmSetting.x(+1)).rho_ab

    return header, rows, summary, rep_state, True


def _oracle_point(task):
    draw, pair, t1, t2, sign = task
    brute = swap(pair, t1, t2, BsmSetting.x(sign))
    other = swap(pair, t1, t2, BsmSetting.x(-sign))
    rho_cf, norm = closed_form_rho(pair, t1, t2, sign)
    dev_rho = float(np.max(np.abs(brute.rho_ab.entries - rho_cf)))
    dev_norm = abs(brute.p_success + other.p_success - norm)
    dev_conc = abs(
        concurrence_wootters(brute.rho_ab) - concurrence_closed_form(pair, t1, t2)
    )
    return (draw, t1, t2, sign, dev_rho, dev_norm, dev_conc)


def run_oracle_draws(draws: int, seed: int, jobs: int = 1):
    """Randomized closed-form vs brute-force cross-check.

    Returns (rows, summary, ok); ok is False as soon as any draw exceeds
    the fixed tolerances (1e-12 on entries and heralding probability,
    1e-10 on concurrence).
    """
    rng = np.random.default_rng(seed)
    tasks = []
    for i in range(draws):
        pair = random_input_pair(rng)
        t1, t2 = rng.uniform(0.05, 1.0, size=2)
        sign = +1 if rng.integers(0, 2) == 0 else -1
        tasks.append((i, pair, float(t1), float(t2), sign))
    rows = _pmap(_oracle_point, tasks, jobs)
    max_rho = max(r[4] for r in rows)
    max_norm = max(r[5] for r in rows)
    max_conc = max(r[6] for r in rows)
    ok = (
        max_rho <= DEV_RHO_TOL
        and max_norm <= DEV_NORM_TOL
        and max_conc <= DEV_CONCURRENCE_TOL
    )
    summary = {
        "draws": draws,
        "max_dev_rho": max_rho,
        "max_dev_norm": max_norm,
        "max_dev_concurrence": max_conc,
        "tolerances": {
            "rho": DEV_RHO_TOL,
            "norm": DEV_NORM_TOL,
            "concurrence": DEV_CONCURRENCE_TOL,
        },
        "passed": ok,
    }
    return rows, summary, ok


def _run_oracle(cfg: SweepConfig, jobs: int):
    rows, summary, ok = run_oracle_draws(cfg.draws, cfg.seed, jobs)
    header = ["draw", "t1", "t2", "sign", "max_dev_rho", "dev_norm",
              "dev_concurrence"]

    def rep_state():
        rng = np.random.default_rng(cfg.seed)
        pair = random_input_pair(rng)
        t1, t2 = rng.uniform(0.05, 1.0, size=2)
        return swap(pair, float(t1), float(t2), BsmSetting.x(+1)).rho_ab

    return header, rows, summary, rep_state, ok


RECIPES = {
    "concurrence-surface": _run_surface,
    "concurrence-slices": _run_slices,
    "theta-fringes": _run_fringes,
    "scaling-balanced": _run_scaling,
    "imbalance-restore": _run_imbalance,
    "oracle-check": _run_oracle,
}


def describe_recipes() -> str:
    lines = []
    for name in RECIPES:
        lines.append(f"{name}")
        lines.append(f"  {DESCRIPTIONS[name]}")
        defaults = DEFAULT_GRIDS[name]
        if defaults:
            keys = ", ".join(
                f"{k}[{len(v)}]" for k, v in defaults.items()
            )
            lines.append(f"  grid keys (defaults): {keys}")
        lines.append("")
    return "\n".join(lines)


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def run(
    cfg: SweepConfig,
    out_dir=None,
    jobs: int = 1,
    dump_state=None,
) -> RunReport:
    """Execute one recipe: write its CSV, sidecar, and any extra files.

    Output is deterministic for a given configuration: identical configs
    produce byte-identical CSVs, independent of ``jobs``.
    """
    started = time.monotonic()
    out = Path(out_dir) if out_dir is not None else Path(cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)

    result = RECIPES[cfg.experiment](cfg, jobs)
    header, rows, summary, rep_state, ok = result[:5]
    extra_specs = result[5] if len(result) > 5 else []

    csv_path = out / f"{cfg.experiment}.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])

    extra_files = []
    for filename, counts in extra_specs:
        path = out / filename
        counts.write_csv(path)
        extra_files.append(path)

    if dump_state is not None:
        state = rep_state()
        with open(dump_state, "w", encoding="utf-8") as fh:
            json.dump(state.to_json_dict(), fh, indent=1)
            fh.write("\n")

    meta_path = out / f"{cfg.experiment}.meta.json"
    meta = {
        "experiment": cfg.experiment,
        "config": dataclasses.asdict(cfg),
        "library_version": __version__,
        "wall_time_s": time.monotonic() - started,
        "rows": len(rows),
        "summary": summary,
        "files": [csv_path.name] + [p.name for p in extra_files],
    }
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=1, default=str)
        fh.write("\n")

    return RunReport(cfg.experiment, csv_path, meta_path, tuple(extra_files),
                     summary, ok)

"""Experiment harness: stability of worst-case stationary points under
perturbed restarts, the outside-the-ball restart strategy, generator success
rates, and algorithm comparison, all at desk scale with seeded, re-runnable
trial streams and structured reports.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from io import StringIO

import numpy as np

from .adjust import ts_solve
from .descent import find_stationary
from .baselines import fictitious_play, regret_matching, zero_sum_baseline
from .dfm import dfm_solve
from .game import Game, Profile, mixed
from .generator import (
    RESTRICTIONS,
    TightInstance,
    generate_tight,
    perturb_profile,
    profile_distance,
    sample_inputs,
    sample_outside_ball,
    tight_feasible,
)

F_THRESHOLD = 0.339
CSV_COLUMNS = ("experiment", "instance", "algorithm", "seed", "f", "iterations",
               "wall_ms", "detail")


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054):
    """95% confidence interval for a binomial proportion (score method)."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class ExperimentConfig:
    experiment: str = ""
    sizes: tuple = ((3, 3),)
    count: int = 100           # tight instances per size
    trials: int = 200          # generator-input draws per success-rate cell
    delta: float = 1e-3        # descent precision inside the ball experiments
    otb_delta: float = 1e-2    # descent precision for outside-the-ball runs
    radius: float = 0.01       # perturbation-ball radius
    samples: int | None = None  # restarts per instance; default 16(m-1)(n-1)
    rounds: int = 10_000       # learning-dynamics rounds
    points: int = 500          # descent initial points per instance (compare)
    resolution: int = 10       # lattice resolution for initial-point cells
    restriction: str = "disjoint"
    restrictions: tuple = RESTRICTIONS
    pure_duals: bool = True
    lambda_intersect: bool = False
    algorithms: tuple = ("ts", "dfm", "fp", "rm", "zs")
    effectiveness: float = 0.95
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.count < 1 or self.trials < 1 or self.rounds < 1 or self.points < 1:
            raise ValueError("counts must be positive")
        if self.radius <= 0 or self.delta <= 0 or self.otb_delta <= 0:
            raise ValueError("radius and precisions must be positive")

    def ball_samples(self, m: int, n: int) -> int:
        return self.samples if self.samples is not None else 16 * (m - 1) * (n - 1)


@dataclass
class TrialRecord:
    experiment: str
    instance: str
    algorithm: str
    seed: int
    f: float
    iterations: int
    wall_ms: float
    detail: dict = field(default_factory=dict)


@dataclass
class ExperimentReport:
    config: dict
    records: list
    aggregates: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": self.config,
                "records": [asdict(r) for r in self.records],
                "aggregates": self.aggregates,
            },
            indent=1,
        )

    def to_csv(self) -> str:
        out = StringIO()
        out.write(",".join(CSV_COLUMNS) + "\n")
        for r in self.records:
            out.write(
                f"{r.experiment},{r.instance},{r.algorithm},{r.seed},"
                f"{r.f:.12g},{r.iterations},{r.wall_ms:.3f},"
                f"\"{json.dumps(r.detail).replace(chr(34), chr(39))}\"\n"
            )
        return out.getvalue()

    def write(self, path: str, fmt: str = "json"):
        text = self.to_json() if fmt == "json" else self.to_csv()
        with open(path, "w") as fh:
            fh.write(text)


def _rng(*key) -> np.random.Generator:
    return np.random.default_rng(list(key))


def sample_tight_games(
    m: int,
    n: int,
    count: int,
    rng: np.random.Generator,
    restriction: str = "disjoint",
    pure_duals: bool = True,
    groups: int = 10,
    lambda_intersect: bool = False,
    max_input_draws: int = 10_000,
) -> list[TightInstance]:
    """Sample `count` tight instances from `groups` independent input draws.

    Inputs are rejection-sampled until the feasibility program admits a
    game; each feasible input contributes an equal share of instances.
    """
    per_group = math.ceil(count / groups)
    out: list[TightInstance] = []
    draws = 0
    while len(out) < count and draws < max_input_draws:
        draws += 1
        inp = sample_inputs(m, n, restriction, rng, pure_duals=pure_duals)
        insts = generate_tight(
            inp, count=per_group, rng=rng, lambda_intersect=lambda_intersect
        )
        out.extend(insts)
    if len(out) < count:
        raise RuntimeError(
            f"could not generate {count} tight {m}x{n} instances "
            f"in {max_input_draws} input draws"
        )
    return out[:count]


def _random_composition(rng: np.random.Generator, total: int, parts: int) -> np.ndarray:
    """Uniform composition of `total` into `parts` nonnegative integers."""
    if parts == 1:
        return np.array([total])
    cuts = np.sort(rng.choice(total + parts - 1, size=parts - 1, replace=False))
    starts = np.concatenate([[0], cuts + 1])
    ends = np.concatenate([cuts, [total + parts - 1]])
    return ends - starts


def lattice_profile(m: int, n: int, resolution: int, rng: np.random.Generator) -> Profile:
    """One initial point from a uniformly chosen cell of a barycentric grid.

    The cell anchor is a uniform lattice point of the given resolution; the
    point is jittered inside the cell and renormalized.
    """
    def side(k: int) -> np.ndarray:
        anchor = _random_composition(rng, resolution, k) / resolution
        jitter = rng.dirichlet(np.ones(k)) / resolution
        v = anchor + jitter
        return mixed(v / v.sum())

    return Profile(side(m), side(n))


# ---------------------------------------------------------------------------
# Per-instance tasks (top level so worker processes can unpickle them).


def _stability_task(payload):
    (key, R, C, x_star, y_star, radius, delta, samples, seed) = payload
    game = Game(np.asarray(R), np.asarray(C))
    star = Profile(mixed(np.asarray(x_star)), mixed(np.asarray(y_star)))
    t0 = time.perf_counter()
    trials_run = 0
    stable = True
    last_f = float("nan")
    iters = 0
    for t in range(samples):
        rng = _rng(seed, t)
        p0 = perturb_profile(star, radius, rng)
        sp = find_stationary(game, p0, delta)
        trials_run += 1
        iters += sp.iterations
        last_f = sp.f
        if profile_distance(sp.profile, star) >= radius:
            stable = False
            break
    wall = (time.perf_counter() - t0) * 1000.0
    return TrialRecord(
        "stability", key, "ts-descent", seed, last_f, iters, wall,
        {"stable": stable, "trials_run": trials_run, "samples": samples},
    )


def _otb_task(payload):
    (key, R, C, x_star, y_star, radius, delta, samples, seed, f_threshold, eff) = payload
    game = Game(np.asarray(R), np.asarray(C))
    star = Profile(mixed(np.asarray(x_star)), mixed(np.asarray(y_star)))
    t0 = time.perf_counter()
    effective_trials = 0
    iters = 0
    last_f = float("nan")
    for t in range(samples):
        rng = _rng(seed, t)
        p0 = sample_outside_ball(star, radius, rng)
        sp = find_stationary(game, p0, delta)
        iters += sp.iterations
        last_f = sp.f
        if profile_distance(sp.profile, star) >= radius and sp.f < f_threshold:
            effective_trials += 1
    wall = (time.perf_counter() - t0) * 1000.0
    return TrialRecord(
        "outside-the-ball", key, "ts-descent", seed, last_f, iters, wall,
        {
            "effective_trials": effective_trials,
            "samples": samples,
            "effective": effective_trials >= eff * samples,
        },
    )


def _compare_task(payload):
    (key, R, C, algorithm, seed, delta, rounds, points, resolution) = payload
    game = Game(np.asarray(R), np.asarray(C))
    from .descent import DescentBudgetError

    records = []
    if algorithm in ("ts", "dfm"):
        solver = ts_solve if algorithm == "ts" else dfm_solve
        for t in range(points):
            rng = _rng(seed, t)
            p0 = lattice_profile(game.m, game.n, resolution, rng)
            t0 = time.perf_counter()
            try:
                res = solver(game, p0, delta)
                f = res.best.f if algorithm == "ts" else res.f
                iters = res.sp.iterations
            except DescentBudgetError as err:
                f, iters = err.f, err.iterations
            wall = (time.perf_counter() - t0) * 1000.0
            records.append(TrialRecord("compare", key, algorithm, seed, f, iters, wall,
                                       {"trial": t}))
    elif algorithm == "fp":
        t0 = time.perf_counter()
        trace = fictitious_play(game, rounds)
        wall = (time.perf_counter() - t0) * 1000.0
        records.append(TrialRecord("compare", key, "fp", seed, trace.f, rounds, wall, {}))
    elif algorithm == "rm":
        t0 = time.perf_counter()
        trace = regret_matching(game, rounds, _rng(seed))
        wall = (time.perf_counter() - t0) * 1000.0
        records.append(TrialRecord("compare", key, "rm", seed, trace.f, rounds, wall, {}))
    elif algorithm == "zs":
        t0 = time.perf_counter()
        res = zero_sum_baseline(game)
        wall = (time.perf_counter() - t0) * 1000.0
        records.append(TrialRecord("compare", key, "zs", seed, res.f, 0, wall,
                                   {"candidate": res.candidate, "adjusted": res.adjusted}))
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return records


def _pmap(fn, payloads, workers: int):
    if workers <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, payloads))


# ---------------------------------------------------------------------------
# Experiments.


def _config_dict(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d["sizes"] = [list(s) for s in cfg.sizes]
    return d


def aggregate_stability(records, cfg_dict) -> dict:
    agg = {}
    for m, n in (tuple(s) for s in cfg_dict["sizes"]):
        size = f"{m}x{n}"
        rs = [r for r in records if r.instance.startswith(size + "#")]
        stable = sum(1 for r in rs if r.detail["stable"])
        if rs:
            lo, hi = wilson_interval(stable, len(rs))
            agg[size] = {
                "instances": len(rs),
                "stable": stable,
                "rate": stable / len(rs),
                "wilson95": [lo, hi],
            }
    return agg


def exp_stability(cfg: ExperimentConfig) -> ExperimentReport:
    """Perturbed-restart stability of generated worst-case instances.

    An instance is stable when descent returns within the perturbation ball
    for every one of its restarts (the scan short-circuits at the first
    escape).  Fall-back is measured on the descent output profile in the
    max norm.
    """
    records = []
    for si, (m, n) in enumerate(cfg.sizes):
        games = sample_tight_games(
            m, n, cfg.count, _rng(cfg.seed, si), cfg.restriction,
            pure_duals=cfg.pure_duals, lambda_intersect=cfg.lambda_intersect,
        )
        payloads = []
        for gi, inst in enumerate(games):
            payloads.append((
                f"{m}x{n}#{gi}", inst.game.R, inst.game.C,
                inst.input.x_star, inst.input.y_star,
                cfg.radius, cfg.delta, cfg.ball_samples(m, n),
                int(_rng(cfg.seed, si, gi).integers(2**31)),
            ))
        records.extend(_pmap(_stability_task, payloads, cfg.workers))
    cfg_dict = _config_dict(cfg)
    return ExperimentReport(cfg_dict, records, aggregate_stability(records, cfg_dict))


def aggregate_otb(records, cfg_dict) -> dict:
    agg = {}
    for m, n in (tuple(s) for s in cfg_dict["sizes"]):
        size = f"{m}x{n}"
        rs = [r for r in records if r.instance.startswith(size + "#")]
        if rs:
            agg[size] = {
                "stable_instances": len(rs),
                "effective": sum(1 for r in rs if r.detail["effective"]),
            }
    return agg


def exp_outside_ball(cfg: ExperimentConfig) -> ExperimentReport:
    """Restarts sampled outside the perturbation ball, on stable instances.

    A trial is effective when descent ends outside the ball with a ratio
    below the 0.339 threshold; an instance is effective when at least the
    configured share (default 95%) of its trials are.
    """
    records = []
    for si, (m, n) in enumerate(cfg.sizes):
        games = sample_tight_games(
            m, n, cfg.count, _rng(cfg.seed, si), cfg.restriction,
            pure_duals=cfg.pure_duals, lambda_intersect=cfg.lambda_intersect,
        )
        stab_payloads = []
        for gi, inst in enumerate(games):
            stab_payloads.append((
                f"{m}x{n}#{gi}", inst.game.R, inst.game.C,
                inst.input.x_star, inst.input.y_star,
                cfg.radius, cfg.delta, cfg.ball_samples(m, n),
                int(_rng(cfg.seed, si, gi).integers(2**31)),
            ))
        stab = _pmap(_stability_task, stab_payloads, cfg.workers)
        payloads = []
        for gi, (inst, srec) in enumerate(zip(games, stab)):
            if not srec.detail["stable"]:
                continue
            payloads.append((
                f"{m}x{n}#{gi}", inst.game.R, inst.game.C,
                inst.input.x_star, inst.input.y_star,
                cfg.radius, cfg.otb_delta, cfg.ball_samples(m, n),
                int(_rng(cfg.seed, si, gi, 1).integers(2**31)),
                F_THRESHOLD, cfg.effectiveness,
            ))
        records.extend(_pmap(_otb_task, payloads, cfg.workers))
    cfg_dict = _config_dict(cfg)
    return ExperimentReport(cfg_dict, records, aggregate_otb(records, cfg_dict))


def aggregate_success(records, cfg_dict) -> dict:
    agg = {}
    for m, n in (tuple(s) for s in cfg_dict["sizes"]):
        for restriction in cfg_dict["restrictions"]:
            key = f"{m}x{n}/{restriction}"
            rs = [r for r in records if r.instance == key]
            if rs:
                k = sum(1 for r in rs if r.detail["feasible"])
                lo, hi = wilson_interval(k, len(rs))
                agg[key] = {
                    "trials": len(rs),
                    "feasible": k,
                    "rate": k / len(rs),
                    "wilson95": [lo, hi],
                }
    return agg


def exp_success_rate(cfg: ExperimentConfig) -> ExperimentReport:
    """Feasibility rate of the tight-instance program over random inputs.

    Inputs are drawn with set-valued witnesses (the distribution the success
    tables are stated for) unless the config says otherwise.
    """
    records = []
    for si, (m, n) in enumerate(cfg.sizes):
        for ri, restriction in enumerate(cfg.restrictions):
            key = f"{m}x{n}/{restriction}"
            for t in range(cfg.trials):
                rng = _rng(cfg.seed, si, ri, t)
                t0 = time.perf_counter()
                inp = sample_inputs(m, n, restriction, rng, pure_duals=cfg.pure_duals)
                ok = tight_feasible(inp, lambda_intersect=cfg.lambda_intersect)
                wall = (time.perf_counter() - t0) * 1000.0
                records.append(TrialRecord(
                    "success-rate", key, "generator", t, float(ok), 0, wall,
                    {"feasible": bool(ok)},
                ))
    cfg_dict = _config_dict(cfg)
    return ExperimentReport(cfg_dict, records, aggregate_success(records, cfg_dict))


def aggregate_compare(records, cfg_dict) -> dict:
    agg = {}
    for alg in cfg_dict["algorithms"]:
        fs = np.array([r.f for r in records if r.algorithm == alg])
        if fs.size:
            agg[alg] = {
                "runs": int(fs.size),
                "pr_f_above_339": float((fs > F_THRESHOLD).mean()),
                "pr_f_above_01": float((fs > 0.01).mean()),
                "median_f": float(np.median(fs)),
                "max_f": float(fs.max()),
            }
    return agg


def exp_compare(cfg: ExperimentConfig) -> ExperimentReport:
    """Descent pipelines versus learning dynamics and the zero-sum baseline
    on generated worst-case instances."""
    records = []
    for si, (m, n) in enumerate(cfg.sizes):
        games = sample_tight_games(
            m, n, cfg.count, _rng(cfg.seed, si), cfg.restriction,
            pure_duals=cfg.pure_duals, lambda_intersect=cfg.lambda_intersect,
        )
        payloads = []
        for gi, inst in enumerate(games):
            for ai, alg in enumerate(cfg.algorithms):
                payloads.append((
                    f"{m}x{n}#{gi}", inst.game.R, inst.game.C, alg,
                    int(_rng(cfg.seed, si, gi, ai).integers(2**31)),
                    cfg.delta, cfg.rounds, cfg.points, cfg.resolution,
                ))
        for recs in _pmap(_compare_task, payloads, cfg.workers):
            records.extend(recs)
    cfg_dict = _config_dict(cfg)
    return ExperimentReport(cfg_dict, records, aggregate_compare(records, cfg_dict))


AGGREGATORS = {
    "stability": aggregate_stability,
    "outside-the-ball": aggregate_otb,
    "success-rate": aggregate_success,
    "compare": aggregate_compare,
}


def recompute_aggregates(report: ExperimentReport) -> dict:
    """Rebuild the aggregates from the raw records (consistency check)."""
    kinds = {r.experiment for r in report.records}
    if len(kinds) != 1:
        raise ValueError(f"records carry mixed experiments: {kinds}")
    return AGGREGATORS[kinds.pop()](report.records, report.config)

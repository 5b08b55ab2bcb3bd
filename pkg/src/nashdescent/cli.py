"""Command-line front end.

Subcommands: generate | solve | verify | exp-stability | exp-otb |
exp-success | exp-compare | constants.  Exit codes: 0 success, 1 I/O or
parse error, 2 empty result / failed verification, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .adjust import ts_solve
from .baselines import fictitious_play, regret_matching, zero_sum_baseline
from .descent import DescentBudgetError
from .dfm import dfm_solve
from .game import Game, GameError, Profile, mixed
from .generator import (
    GeneratorInput,
    certificate_json,
    dfm_family,
    dfm_tight,
    generate_tight,
    half_sp,
    sample_inputs,
    solve_b,
    tight_3x3,
    tight_m_n,
    tight_no_dominated,
    verify_tight,
)
from .lp import LpNumericalError
from .experiments import (
    ExperimentConfig,
    exp_compare,
    exp_outside_ball,
    exp_stability,
    exp_success_rate,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_EMPTY = 2
EXIT_NUMERIC = 3


def _parse_size(text: str) -> tuple[int, int]:
    try:
        m, n = text.lower().split("x")
        return int(m), int(n)
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"size must look like 3x3, got {text!r}") from err


def _static_instance(name: str):
    if name == "tight-3x3":
        return tight_3x3()
    if name.startswith("tight-"):
        m, n = _parse_size(name[len("tight-"):])
        return tight_m_n(m, n)
    if name == "no-dominated":
        return tight_no_dominated()
    if name == "dfm-tight":
        return dfm_tight()
    if name.startswith("dfm-family:"):
        return dfm_family(float(name.split(":", 1)[1]))
    if name == "half-sp":
        return half_sp()
    raise GameError(
        f"unknown static instance {name!r}; expected tight-3x3, tight-MxN, "
        "no-dominated, dfm-tight, dfm-family:EPS or half-sp"
    )


def _load_game(path: str, normalize: bool = False) -> tuple[Game, dict]:
    with open(path) as fh:
        doc = json.load(fh)
    game = Game.from_json(json.dumps(doc), normalize=normalize)
    return game, doc


def _initial_profile(game: Game, spec: str, doc: dict) -> Profile:
    if spec == "uniform":
        return game.uniform_profile()
    if spec.startswith("pure:"):
        i, j = (int(t) for t in spec[len("pure:"):].split(","))
        return game.pure_profile(i, j)
    if spec == "file:canonical":
        canon = doc.get("canonical")
        if not canon:
            raise GameError("game file carries no canonical block")
        return Profile(mixed(canon["x"]), mixed(canon["y"]))
    if spec.startswith("file:"):
        with open(spec[len("file:"):]) as fh:
            d = json.load(fh)
        return Profile(mixed(d["x"]), mixed(d["y"]))
    raise GameError(f"unknown init {spec!r}")


def cmd_constants(args) -> int:
    t0 = time.perf_counter()
    cons = solve_b()
    print(json.dumps({
        "b": cons.b,
        "lambda0": cons.lambda0,
        "mu0": cons.mu0,
        "rhoStar": cons.rho_star,
        "wall_ms": (time.perf_counter() - t0) * 1000.0,
    }))
    return EXIT_OK


def cmd_generate(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    if args.static:
        inst = _static_instance(args.static)
        path = os.path.join(args.out, f"{inst.name}.json")
        with open(path, "w") as fh:
            fh.write(inst.game.to_json(canonical=inst.canonical_dict()))
        print(json.dumps({"written": [path]}))
        return EXIT_OK

    m, n = args.size
    rng = np.random.default_rng(args.seed)
    written = []
    attempts = 0
    feasible_inputs = 0
    while len(written) < args.count and attempts < args.max_attempts:
        attempts += 1
        inp = sample_inputs(m, n, args.restriction, rng,
                            pure_duals=not args.mixed_duals)
        insts = generate_tight(inp, count=1, rng=rng,
                               lambda_intersect=args.lambda_intersect)
        if not insts:
            continue
        feasible_inputs += 1
        inst = insts[0]
        cert = verify_tight(inst.game, inst.input, grid_size=args.grid,
                            full_grid=args.lambda_intersect)
        inst = type(inst)(inst.game, inst.input, inst.rho_star, inst.k, inst.l, cert)
        stem = os.path.join(args.out, f"game_{len(written):04d}")
        with open(stem + ".json", "w") as fh:
            canonical = {
                "x": inst.input.x_star, "y": inst.input.y_star,
                "w": inst.input.w_star, "z": inst.input.z_star,
                "rho": inst.rho_star,
            }
            fh.write(inst.game.to_json(canonical=canonical))
        with open(stem + ".cert.json", "w") as fh:
            fh.write(certificate_json(inst))
        written.append(stem + ".json")
    summary = {
        "written": len(written),
        "input_draws": attempts,
        "success_rate": feasible_inputs / attempts if attempts else 0.0,
        "out": args.out,
    }
    print(json.dumps(summary))
    return EXIT_OK if written else EXIT_EMPTY


def cmd_solve(args) -> int:
    game, doc = _load_game(args.game, normalize=args.normalize)
    p0 = _initial_profile(game, args.init, doc)
    t0 = time.perf_counter()
    detail: dict = {}
    iterations = 0
    if args.algorithm == "ts":
        res = ts_solve(game, p0, args.delta)
        f, profile, iterations = res.best.f, res.best.profile, res.sp.iterations
        detail = {
            "stationary_f": res.stationary_f, "ts_f": res.ts_f,
            "boundary_f": res.boundary_f, "linear_f": res.linear_f,
            "best_method": res.best.method,
        }
    elif args.algorithm == "dfm":
        res = dfm_solve(game, p0, args.delta)
        f, profile, iterations = res.f, res.profile, res.sp.iterations
        detail = {"case": res.trace.case, "branch": res.trace.branch,
                  "stationary_f": res.sp.f}
    elif args.algorithm == "fp":
        trace = fictitious_play(game, args.rounds)
        f, profile, iterations = trace.f, trace.profile, args.rounds
    elif args.algorithm == "rm":
        trace = regret_matching(game, args.rounds, np.random.default_rng(args.seed))
        f, profile, iterations = trace.f, trace.profile, args.rounds
    elif args.algorithm == "zs":
        res = zero_sum_baseline(game)
        f, profile = res.f, res.profile
        detail = {"candidate": res.candidate, "adjusted": res.adjusted}
    else:
        raise GameError(f"unknown algorithm {args.algorithm!r}")
    print(json.dumps({
        "f": f,
        "profile": {"x": profile.x.tolist(), "y": profile.y.tolist()},
        "iterations": iterations,
        "wall_ms": (time.perf_counter() - t0) * 1000.0,
        "detail": detail,
    }))
    return EXIT_OK


def cmd_verify(args) -> int:
    game, doc = _load_game(args.game)
    if args.cert:
        with open(args.cert) as fh:
            cd = json.load(fh)
        inp = GeneratorInput(cd["xStar"], cd["yStar"], cd["wStar"], cd["zStar"])
    else:
        canon = doc.get("canonical")
        if not canon:
            raise GameError("no certificate file and no canonical block in the game file")
        inp = GeneratorInput(canon["x"], canon["y"], canon["w"], canon["z"])
    cert = verify_tight(game, inp, grid_size=args.grid, full_grid=args.full_grid)
    print(json.dumps({"passed": cert.passed, "checks": cert.checks,
                      "values": cert.values, "mixedDuals": cert.mixed_duals}))
    return EXIT_OK if cert.passed else EXIT_EMPTY


def _experiment_config(args, experiment: str) -> ExperimentConfig:
    kwargs = dict(
        experiment=experiment,
        sizes=tuple(args.size),
        delta=args.delta,
        radius=args.radius,
        rounds=args.rounds,
        seed=args.seed,
        restriction=args.restriction,
        workers=args.workers,
        lambda_intersect=args.lambda_intersect,
    )
    if args.count is not None:
        kwargs["count"] = args.count
    if args.trials is not None:
        kwargs["trials"] = args.trials
    if args.samples is not None:
        kwargs["samples"] = args.samples
    if args.points is not None:
        kwargs["points"] = args.points
    # The success-rate tables are stated for set-valued witness sampling;
    # everything else defaults to pure witnesses (essentially unique duals).
    if experiment == "success-rate" or args.mixed_duals:
        kwargs["pure_duals"] = False
    return ExperimentConfig(**kwargs)


def _emit_report(report, args) -> int:
    if args.out:
        report.write(args.out, args.format)
        print(json.dumps({"out": args.out, "aggregates": report.aggregates}))
    else:
        print(json.dumps({"aggregates": report.aggregates}, indent=1))
    return EXIT_OK if report.records else EXIT_EMPTY


def main(argv=None) -> int:
    top = argparse.ArgumentParser(prog="nashdescent", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    sub.add_parser("constants", help="print the worst-case bound constants")

    g = sub.add_parser("generate", help="generate worst-case instances")
    g.add_argument("--size", type=_parse_size, default=(3, 3))
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--restriction", default="disjoint",
                   choices=("none", "disjoint", "intersecting", "nested"))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=".")
    g.add_argument("--grid", type=int, default=100)
    g.add_argument("--max-attempts", type=int, default=10_000)
    g.add_argument("--lambda-intersect", action="store_true")
    g.add_argument("--mixed-duals", action="store_true")
    g.add_argument("--static", default=None,
                   help="write a named instance instead of sampling")

    s = sub.add_parser("solve", help="solve one game")
    s.add_argument("game")
    s.add_argument("--algorithm", default="ts", choices=("ts", "dfm", "fp", "rm", "zs"))
    s.add_argument("--delta", type=float, default=1e-3)
    s.add_argument("--rounds", type=int, default=10_000)
    s.add_argument("--init", default="uniform")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--normalize", action="store_true",
                   help="affinely rescale out-of-range payoff matrices on load")

    v = sub.add_parser("verify", help="verify a worst-case certificate")
    v.add_argument("game")
    v.add_argument("--cert", default=None)
    v.add_argument("--grid", type=int, default=200)
    v.add_argument("--full-grid", action="store_true")

    for name in ("exp-stability", "exp-otb", "exp-success", "exp-compare"):
        e = sub.add_parser(name, help=f"run the {name[4:]} experiment")
        e.add_argument("--size", type=_parse_size, nargs="+", default=[(3, 3)])
        e.add_argument("--count", type=int, default=None)
        e.add_argument("--trials", type=int, default=None)
        e.add_argument("--samples", type=int, default=None)
        e.add_argument("--points", type=int, default=None)
        e.add_argument("--delta", type=float, default=1e-3)
        e.add_argument("--radius", type=float, default=0.01)
        e.add_argument("--rounds", type=int, default=10_000)
        e.add_argument("--seed", type=int, default=0)
        e.add_argument("--restriction", default="disjoint",
                       choices=("none", "disjoint", "intersecting", "nested"))
        e.add_argument("--workers", type=int, default=1)
        e.add_argument("--lambda-intersect", action="store_true")
        e.add_argument("--mixed-duals", action="store_true")
        e.add_argument("--out", default=None)
        e.add_argument("--format", default="json", choices=("json", "csv"))

    args = top.parse_args(argv)
    try:
        if args.command == "constants":
            return cmd_constants(args)
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "exp-stability":
            return _emit_report(exp_stability(_experiment_config(args, "stability")), args)
        if args.command == "exp-otb":
            return _emit_report(exp_outside_ball(_experiment_config(args, "outside-the-ball")), args)
        if args.command == "exp-success":
            return _emit_report(exp_success_rate(_experiment_config(args, "success-rate")), args)
        if args.command == "exp-compare":
            return _emit_report(exp_compare(_experiment_config(args, "compare")), args)
        raise GameError(f"unknown command {args.command!r}")
    except (OSError, json.JSONDecodeError, GameError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except (LpNumericalError, DescentBudgetError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

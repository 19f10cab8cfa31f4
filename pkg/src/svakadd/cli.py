"""Command-line entry point.

Subcommands:
  exact   exhaustive Shapley values (optionally interaction indices)
  approx  one estimator run on a budget
  bench   budget sweep with repetitions, CSV + optional SVG output
  gen     materialize any game source as a value-table file

Exit codes: 0 success, 2 usage or validation error, 3 game-evaluation
failure (oracle protocol breakage and the like).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import coalitions
from .baselines import BaselineConfig, kernelshap, permutation_sampling, stratified_sampling
from .bench import (
    BenchmarkPlan,
    METHODS,
    RESERVED_METHODS,
    emit_aggregates_csv,
    emit_csv,
    emit_plot,
    method_degree,
    run_benchmark,
)
from .estimator import EstimatorConfig, run_svakadd
from .exact import exact_interaction, exact_shapley, mse
from .games import (
    Game,
    GameEvalError,
    discretize,
    load_data_csv,
    load_value_table,
    make_additive,
    make_glove,
    make_unanimity,
    normalize,
    open_oracle,
    random_kadditive_table,
    random_value_table,
    save_value_table,
    total_correlation_game,
)
from .transform import InteractionBasis
from .wls import SolverOptions

OUT_DIR_ENV = "SVAKADD_OUT_DIR"


class UsageError(ValueError):
    """Bad flags or game specification; maps to exit code 2."""


def _parse_game_params(text: str) -> dict[str, list[str]]:
    # "n=3,S=1,2" splits on commas; bare tokens extend the previous key.
    params: dict[str, list[str]] = {}
    current: str | None = None
    for token in text.split(","):
        if "=" in token:
            current, value = token.split("=", 1)
            current = current.strip()
            params[current] = [value]
        elif current is not None:
            params[current].append(token)
        else:
            raise UsageError(f"cannot parse game parameters {text!r}")
    return params


def _players_arg(params: dict[str, list[str]], key: str, n: int) -> int:
    try:
        labels = [int(v) for v in params[key]]
    except (KeyError, ValueError):
        raise UsageError(f"game spec needs integer player list {key}=...") from None
    return coalitions.mask_from_players(labels, n)


def _int_arg(params: dict[str, list[str]], key: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise UsageError(f"game spec needs {key}=<int>")
        return default
    if len(params[key]) != 1:
        raise UsageError(f"game spec parameter {key} takes a single integer")
    try:
        return int(params[key][0])
    except ValueError:
        raise UsageError(f"game spec parameter {key} must be an integer") from None


def build_game(args: argparse.Namespace) -> Game:
    """Construct the game from whichever source flag was given."""
    try:
        if args.game is not None:
            family, _, rest = args.game.partition(":")
            params = _parse_game_params(rest) if rest else {}
            if family == "additive":
                try:
                    weights = [float(v) for v in params.get("c", [])]
                except ValueError:
                    raise UsageError("additive game needs numeric weights c=...") from None
                if not weights:
                    raise UsageError("additive game needs c=<w1>,<w2>,...")
                return make_additive(weights)
            if family == "unanimity":
                n = _int_arg(params, "n")
                return make_unanimity(n, _players_arg(params, "S", n))
            if family == "glove":
                n = _int_arg(params, "n")
                return make_glove(n, _players_arg(params, "left", n))
            if family == "random":
                return random_value_table(_int_arg(params, "n"), _int_arg(params, "seed", 0))
            if family == "kadd":
                n = _int_arg(params, "n")
                game, _ = random_kadditive_table(n, _int_arg(params, "k", 3), _int_arg(params, "seed", 0))
                return game
            raise UsageError(f"unknown game family {family!r}")
        if args.table is not None:
            return load_value_table(args.table)
        if args.oracle is not None:
            if args.players is None:
                raise UsageError("--oracle needs --players <n>")
            return open_oracle(args.oracle, args.players)
        if args.data is not None:
            _, raw = load_data_csv(args.data)
            return total_correlation_game(discretize(raw, bins=args.bins))
    except (ValueError, OSError) as exc:
        if isinstance(exc, (UsageError, GameEvalError)):
            raise
        raise UsageError(str(exc)) from exc
    raise UsageError("no game source given (--game/--table/--oracle/--data)")


def _add_game_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--game", help="synthetic family, e.g. unanimity:n=3,S=1,2")
    group.add_argument("--table", help="value-table file")
    group.add_argument("--oracle", help="oracle child command (shell-style string)")
    group.add_argument("--data", help="CSV for the total-correlation game")
    parser.add_argument("--players", type=int, help="player count (required with --oracle)")
    parser.add_argument("--bins", type=int, default=4, help="discretization bins for --data")
    parser.add_argument("--force-n", action="store_true", help="lift the player-count cap")


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--constraint-mode", choices=("penalty", "eliminate"), default="penalty",
        help="efficiency constraint handling in the least-squares fit",
    )
    parser.add_argument("--penalty-weight", type=float, default=1e6)
    parser.add_argument("--rank-tolerance", type=float, default=1e-10)
    parser.add_argument("--ridge", type=float, default=0.0, help="optional ridge term")


def _solver_options(args: argparse.Namespace) -> SolverOptions:
    return SolverOptions(
        constraint_mode=args.constraint_mode,
        penalty_weight=args.penalty_weight,
        rank_tolerance=args.rank_tolerance,
        regularization=args.ridge,
    )


def _out_path(path: str | Path) -> Path:
    base = os.environ.get(OUT_DIR_ENV)
    path = Path(path)
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def _game_label(args: argparse.Namespace) -> str:
    for attr in ("game", "table", "oracle", "data"):
        value = getattr(args, attr)
        if value is not None:
            return f"{attr}:{value}" if attr != "game" else value
    return "?"


def _print_vector(prefix: str, values: np.ndarray) -> None:
    for i, v in enumerate(values, start=1):
        print(f"{prefix}[{i}] = {float(v)!r}")


def cmd_exact(args: argparse.Namespace) -> int:
    if args.interactions is not None and args.interactions < 1:
        raise UsageError("--interactions takes an order >= 1")
    with build_game(args) as game:
        n = game.n
        coalitions.check_player_count(n, override=args.force_n)
        if args.interactions is not None and args.interactions > n:
            raise UsageError(f"--interactions order exceeds n={n}")
        phi = exact_shapley(game, override_cap=args.force_n)
        span = game.eval(coalitions.grand_coalition(n)) - game.eval(0)
        print(f"game: {_game_label(args)}")
        print(f"n = {n}")
        _print_vector("phi", phi)
        print(f"sum(phi) = {float(phi.sum())!r}")
        print(f"nu(N) - nu(empty) = {span!r}")
        rows: list[tuple[str, float]] = []
        if args.interactions is not None:
            basis = InteractionBasis.build(n, args.interactions)
            for mask, label in zip(basis.subsets, basis.labels()):
                if mask == 0:
                    continue
                value = phi[mask.bit_length() - 1] if mask.bit_count() == 1 else exact_interaction(game, mask)
                rows.append((label, value))
                if mask.bit_count() >= 2:
                    print(f"I[{label}] = {value!r}")
        if args.out:
            path = _out_path(args.out)
            with open(path, "w", encoding="utf-8") as f:
                if rows:
                    for label, value in rows:
                        f.write(f"{label},{value!r}\n")
                else:
                    for i, v in enumerate(phi, start=1):
                        f.write(f"{i},{float(v)!r}\n")
            print(f"wrote {path}")
    return 0


def _maybe_normalize(game: Game) -> tuple[Game, bool]:
    if game.eval(0) != 0.0:
        return normalize(game), True
    return game, False


def cmd_approx(args: argparse.Namespace) -> int:
    if args.method not in METHODS:
        raise UsageError(f"unknown method {args.method!r}")
    if args.budget < 2:
        raise UsageError("--budget must be at least 2")
    if args.k < 1:
        raise UsageError("--k must be at least 1")
    if args.emit_interactions is not None and args.method != "svakadd":
        raise UsageError("--emit-interactions is only available for svakadd")
    solver = _solver_options(args)
    with build_game(args) as raw_game:
        n = raw_game.n
        if args.budget > (1 << n):
            raise UsageError(f"budget {args.budget} exceeds 2^{n}")
        if args.method == "svakadd" and args.k > n:
            raise UsageError(f"--k {args.k} exceeds n={n}")
        game, normalized = _maybe_normalize(raw_game)
        if args.method == "svakadd":
            cfg = EstimatorConfig(
                k=args.k, budget=args.budget, seed=args.seed, solver=solver,
                return_interactions=args.emit_interactions is not None,
            )
            result = run_svakadd(game, cfg)
        else:
            bcfg = BaselineConfig(
                method=args.method, budget=args.budget, seed=args.seed, solver=solver
            )
            runner = {
                "permutation": permutation_sampling,
                "stratified": stratified_sampling,
                "kernelshap": kernelshap,
            }[args.method]
            result = runner(game, bcfg)
        span = game.eval(coalitions.grand_coalition(n)) - game.eval(0)
        k_shown = method_degree(args.method, args.k)
        print(f"game: {_game_label(args)}")
        print(f"method = {args.method} (k={k_shown})")
        print(f"budget = {args.budget}")
        print(f"seed = {args.seed}")
        _print_vector("estimate", result.estimates)
        print(f"sum(estimates) = {float(result.estimates.sum())!r}")
        print(f"nu(N) - nu(empty) = {span!r}")
        print(f"evaluations = {result.evaluations}")
        print(f"underdetermined = {'yes' if result.underdetermined else 'no'}")
        print(f"normalized = {'yes' if normalized else 'no'}")
        if args.emit_interactions is not None and result.interactions is not None:
            path = _out_path(args.emit_interactions)
            with open(path, "w", encoding="utf-8") as f:
                result.interactions.write_csv(f)
            print(f"wrote {path}")
    return 0


def _parse_methods(text: str) -> list[tuple[str, int]]:
    out = []
    for entry in text.split(","):
        entry = entry.strip()
        if not entry:
            continue
        name, _, kspec = entry.partition(":")
        if name in RESERVED_METHODS:
            raise UsageError(
                f"method {name!r} is reserved for externally produced curves"
            )
        if name not in METHODS:
            raise UsageError(f"unknown method {name!r}")
        k = None
        if kspec:
            if not kspec.startswith("k="):
                raise UsageError(f"bad method entry {entry!r}, expected name:k=<int>")
            try:
                k = int(kspec[2:])
            except ValueError:
                raise UsageError(f"bad degree in {entry!r}") from None
        out.append((name, method_degree(name, k)))
    if not out:
        raise UsageError("--methods is empty")
    return out


def _parse_budgets(text: str) -> list[int]:
    try:
        budgets = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad budget list {text!r}") from None
    if not budgets:
        raise UsageError("--budgets is empty")
    return budgets


def cmd_bench(args: argparse.Namespace) -> int:
    plan_file: dict = {}
    if args.plan:
        try:
            plan_file = json.loads(Path(args.plan).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read plan file: {exc}") from exc

    def setting(flag_value, key, default):
        # precedence: explicit flag > plan file > default
        if flag_value is not None:
            return flag_value
        return plan_file.get(key, default)

    for attr in ("game", "table", "oracle", "data"):
        if getattr(args, attr) is None and attr in plan_file:
            setattr(args, attr, plan_file[attr])
    if all(getattr(args, a) is None for a in ("game", "table", "oracle", "data")):
        raise UsageError("no game source given (flags or plan file)")

    methods = _parse_methods(setting(args.methods, "methods", None) or "")
    budgets = _parse_budgets(setting(args.budgets, "budgets", None) or "")
    reps = int(setting(args.reps, "reps", 100))
    seed = int(setting(args.seed, "seed", 0))
    workers = int(setting(args.workers, "workers", os.cpu_count() or 1))
    out_prefix = setting(args.out, "out", "bench")
    plot = setting(args.plot, "plot", None)
    solver = _solver_options(args)

    with build_game(args) as raw_game:
        game, normalized = _maybe_normalize(raw_game)
        plan = BenchmarkPlan(
            game=game,
            methods=methods,
            budgets=budgets,
            repetitions=reps,
            seed_base=seed,
            solver=solver,
            workers=workers,
        )
        plan.validate()
        started = time.perf_counter()
        records, aggregates, truth = run_benchmark(plan)
        elapsed = time.perf_counter() - started

        prefix = _out_path(out_prefix)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        records_path = prefix.with_name(prefix.name + ".csv")
        agg_path = prefix.with_name(prefix.name + "-agg.csv")
        meta_path = prefix.with_name(prefix.name + "-meta.json")
        emit_csv(records, records_path)
        emit_aggregates_csv(aggregates, agg_path)
        meta = {
            "game": _game_label(args),
            "n": game.n,
            "methods": [list(m) for m in methods],
            "budgets": budgets,
            "repetitions": reps,
            "seed_base": seed,
            "normalized": normalized,
            "constraint_mode": solver.constraint_mode,
            "penalty_weight": solver.penalty_weight,
            "budget_accounting": "distinct coalition evaluations per run; "
            "empty and grand coalition charged against the budget",
            "wall_ms_column": "suppressed (0) in records CSV for reproducibility; "
            "total wall time lives here in metadata",
            "total_wall_s": elapsed,
            "reserved_methods": list(RESERVED_METHODS),
            "exact_shapley": [float(v) for v in truth],
        }
        meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {records_path}")
        print(f"wrote {agg_path}")
        print(f"wrote {meta_path}")
        if plot:
            plot_path = _out_path(plot)
            emit_plot(aggregates, plot_path)
            print(f"wrote {plot_path}")
        for agg in aggregates:
            print(
                f"{agg.label} T={agg.budget}: mean_mse={agg.mean_mse:.3e} "
                f"stderr={agg.stderr_mse:.2e} reps={agg.reps}"
            )
        print(f"benchmark wall time: {elapsed:.1f}s", file=sys.stderr)
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    with build_game(args) as game:
        coalitions.check_player_count(game.n, override=args.force_n)
        path = _out_path(args.out)
        save_value_table(game, path)
        print(f"wrote {path} (n={game.n}, {1 << game.n} values)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svakadd",
        description="Shapley values for cooperative games: exact, approximate, benchmarked.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_exact = sub.add_parser("exact", help="exhaustive Shapley values")
    _add_game_source(p_exact)
    p_exact.add_argument("--interactions", type=int, default=None, metavar="ORDER",
                         help="also compute interaction indices up to this order")
    p_exact.add_argument("--out", help="write values as CSV")
    p_exact.set_defaults(func=cmd_exact)

    p_approx = sub.add_parser("approx", help="one estimator run")
    _add_game_source(p_approx)
    p_approx.add_argument("--method", default="svakadd", help="|".join(METHODS))
    p_approx.add_argument("--k", type=int, default=3, help="surrogate additivity degree")
    p_approx.add_argument("--budget", type=int, required=True)
    p_approx.add_argument("--seed", type=int, default=0)
    p_approx.add_argument("--emit-interactions", metavar="PATH",
                          help="write the fitted interaction vector as CSV")
    _add_solver_flags(p_approx)
    p_approx.set_defaults(func=cmd_approx)

    p_bench = sub.add_parser("bench", help="budget sweep with repetitions")
    _add_game_source_optional(p_bench)
    p_bench.add_argument("--plan", help="JSON plan file (flags take precedence)")
    p_bench.add_argument("--methods", help="comma list, e.g. svakadd:k=3,permutation")
    p_bench.add_argument("--budgets", help="comma list of budgets, ascending")
    p_bench.add_argument("--reps", type=int, default=None)
    p_bench.add_argument("--seed", type=int, default=None)
    p_bench.add_argument("--workers", type=int, default=None)
    p_bench.add_argument("--out", default=None, help="output prefix (default 'bench')")
    p_bench.add_argument("--plot", default=None, help="also write an SVG curve plot")
    _add_solver_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_gen = sub.add_parser("gen", help="materialize a game as a value-table file")
    _add_game_source(p_gen)
    p_gen.add_argument("--out", required=True, help="table file to write")
    p_gen.set_defaults(func=cmd_gen)
    return parser


def _add_game_source_optional(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=False)
    group.add_argument("--game")
    group.add_argument("--table")
    group.add_argument("--oracle")
    group.add_argument("--data")
    parser.add_argument("--players", type=int)
    parser.add_argument("--bins", type=int, default=4)
    parser.add_argument("--force-n", action="store_true")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GameEvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

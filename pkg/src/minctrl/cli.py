"""Command-line front end.

Subcommands: solve, reduce, oracle, experiment, verify. Exit codes are fixed:
0 success, 1 infeasible / not controllable, 2 invalid input, 3 internal or
numeric error. Output payloads are JSON with a ``schema_version`` field and
go to --out when given, stdout otherwise. The default rank backend comes
from ``MINCTRL_BACKEND`` (falling back to "exact"); seeds default to a fixed
constant, never the clock.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from minctrl.errors import InvalidInputError, MinctrlError
from minctrl.experiments import DEFAULT_SEED, ExperimentConfig, run_experiment
from minctrl.greedy import (
    RANK_BACKENDS,
    deterministic_greedy_vector,
    greedy_diagonal,
    randomized_greedy_vector,
)
from minctrl.linalg import left_eigensystem, pbh_controllability_rank
from minctrl.matrices import (
    DenseMatrix,
    RationalMatrix,
    as_dense,
    as_rational,
    load_matrix,
    save_matrix,
)
from minctrl.oracles import (
    brute_force_hitting_set,
    brute_force_min_diagonal_support,
    brute_force_min_vector_support,
    kalman_test,
)
from minctrl.reductions import build_reduction, build_symmetric_extension, load_instance

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3


def _default_backend() -> str:
    backend = os.environ.get("MINCTRL_BACKEND", "exact")
    if backend not in RANK_BACKENDS:
        raise InvalidInputError(
            f"MINCTRL_BACKEND={backend!r} is not one of {RANK_BACKENDS}"
        )
    return backend


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_solve(args) -> int:
    matrix = load_matrix(args.matrix)
    backend = args.backend or _default_backend()
    if args.mode == "diagonal":
        result = greedy_diagonal(matrix, backend)
    elif args.algo == "rand":
        result = randomized_greedy_vector(matrix, args.seed, backend)
    else:
        result = deterministic_greedy_vector(matrix, backend)
    payload = result.to_json_dict()
    payload["mode"] = args.mode
    payload["algorithm"] = "diagonal" if args.mode == "diagonal" else args.algo
    _emit(payload, args.out)
    return EXIT_OK if result.controllable else EXIT_INFEASIBLE


def _cmd_reduce(args) -> int:
    inst = load_instance(args.instance)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    red = build_reduction(inst)
    save_matrix(red.left_eigenvectors, out_dir / "V.json")
    save_matrix(red.system_matrix, out_dir / "A.json")
    index_map = {
        "schema_version": 1,
        "eigenvalues": list(red.eigenvalues),
        **red.index_map.to_json_dict(),
    }
    written = ["V.json", "A.json"]
    if args.symmetric:
        sym = build_symmetric_extension(inst)
        save_matrix(sym.left_eigenvectors, out_dir / "V_hat.json")
        save_matrix(sym.system_matrix, out_dir / "A_hat.json")
        index_map["symmetric"] = {
            "eigenvalues": list(sym.eigenvalues),
            "pair_columns": [
                {"pair": list(pair), "column": col} for pair, col in sym.pair_columns
            ],
            "final_column": sym.final_column,
        }
        written += ["V_hat.json", "A_hat.json"]
    (out_dir / "index_map.json").write_text(
        json.dumps(index_map, sort_keys=True, indent=2) + "\n"
    )
    written.append("index_map.json")
    _emit(
        {"schema_version": 1, "out_dir": str(out_dir), "written": written},
        args.out,
    )
    return EXIT_OK


def _cmd_oracle(args) -> int:
    if args.kind == "hitting-set":
        inst = load_instance(args.target)
        result = brute_force_hitting_set(inst, allow_large=args.allow_large)
    else:
        matrix = as_rational(load_matrix(args.target))
        if args.kind == "min-vector":
            result = brute_force_min_vector_support(
                matrix, allow_large=args.allow_large
            )
        else:
            result = brute_force_min_diagonal_support(
                matrix, allow_large=args.allow_large
            )
    payload = result.to_json_dict()
    payload["kind"] = args.kind
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_experiment(args) -> int:
    base: dict = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise InvalidInputError(f"cannot read {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"{args.config}: not valid JSON: {exc}") from exc
        if not isinstance(base, dict):
            raise InvalidInputError(f"{args.config}: expected a JSON object")
    overrides = {
        "n_values": tuple(args.n_values) if args.n_values else None,
        "trials_per_n": args.trials,
        "edge_probability": args.edge_probability,
        "seed": args.seed,
        "solver": args.solver,
    }
    for key, value in overrides.items():
        if value is not None:
            base[key] = value
    if "n_values" not in base:
        raise InvalidInputError("n_values required (config file or --n-values)")
    if "trials_per_n" not in base:
        raise InvalidInputError("trials_per_n required (config file or --trials)")
    cfg = ExperimentConfig.from_json_dict(base)
    report = run_experiment(cfg)
    _emit(report.to_json_dict(), args.out)
    if args.csv:
        Path(args.csv).write_text(report.records_to_csv())
    return EXIT_OK


def _cmd_verify(args) -> int:
    matrix = load_matrix(args.matrix)
    b = load_matrix(args.b)
    backend = args.backend or _default_backend()
    n = matrix.rows
    if matrix.cols != n:
        raise InvalidInputError(f"A must be square, got {matrix.rows}x{matrix.cols}")
    if sorted((b.rows, b.cols)) != sorted((n, 1)):
        raise InvalidInputError(
            f"b must be an {n}-vector, got {b.rows}x{b.cols}"
        )
    if b.rows == 1 and n != 1:
        b = _transpose(b)
    if backend == "pbh":
        eig = left_eigensystem(as_dense(matrix))
        rank = pbh_controllability_rank(eig, as_dense(b))
        controllable = rank == n
        payload_rank: int | None = rank
    else:
        controllable = kalman_test(matrix, b, backend)
        payload_rank = None
    payload = {
        "schema_version": 1,
        "n": n,
        "backend": backend,
        "controllable": controllable,
    }
    if payload_rank is not None:
        payload["rank"] = payload_rank
    _emit(payload, args.out)
    return EXIT_OK if controllable else EXIT_INFEASIBLE


def _transpose(mat):
    if isinstance(mat, RationalMatrix):
        return mat.transpose()
    return DenseMatrix(mat.array.T)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minctrl",
        description="Sparse actuator selection for linear systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="greedy sparse-input solve")
    p_solve.add_argument("matrix", help="system matrix (JSON or CSV)")
    p_solve.add_argument("--mode", choices=("vector", "diagonal"), default="vector")
    p_solve.add_argument("--algo", choices=("rand", "det"), default="det")
    p_solve.add_argument("--backend", choices=RANK_BACKENDS)
    p_solve.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_solve.add_argument("--out")
    p_solve.set_defaults(func=_cmd_solve)

    p_reduce = sub.add_parser(
        "reduce", help="compile a hitting-set instance to a controllability instance"
    )
    p_reduce.add_argument("instance", help="instance JSON file")
    p_reduce.add_argument("--symmetric", action="store_true")
    p_reduce.add_argument("--out-dir", default="reduction_out")
    p_reduce.add_argument("--out")
    p_reduce.set_defaults(func=_cmd_reduce)

    p_oracle = sub.add_parser("oracle", help="exact brute-force optimum")
    p_oracle.add_argument("target", help="instance or eigenvector-matrix file")
    p_oracle.add_argument(
        "--kind",
        required=True,
        choices=("hitting-set", "min-vector", "min-diagonal"),
    )
    p_oracle.add_argument("--allow-large", action="store_true")
    p_oracle.add_argument("--out")
    p_oracle.set_defaults(func=_cmd_oracle)

    p_exp = sub.add_parser("experiment", help="random-graph experiment run")
    p_exp.add_argument("config", nargs="?", help="config JSON file")
    p_exp.add_argument("--n-values", type=int, nargs="+", dest="n_values")
    p_exp.add_argument("--trials", type=int)
    p_exp.add_argument("--edge-probability", type=float)
    p_exp.add_argument("--seed", type=int)
    p_exp.add_argument("--solver", choices=("randomized", "deterministic"))
    p_exp.add_argument("--csv", help="also write flattened trial records")
    p_exp.add_argument("--out")
    p_exp.set_defaults(func=_cmd_experiment)

    p_verify = sub.add_parser("verify", help="check controllability of (A, b)")
    p_verify.add_argument("matrix")
    p_verify.add_argument("b")
    p_verify.add_argument("--backend", choices=RANK_BACKENDS)
    p_verify.add_argument("--out")
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except MinctrlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # internal bug or numeric blowup
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

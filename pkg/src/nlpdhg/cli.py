"""Command line interface.

Subcommands:

* ``gen-data`` -- write a problem fixture (matrix CSV + JSON sidecar) to a
  directory.
* ``solve`` -- load a fixture, run one solver, write a JSON report.
* ``bench`` -- run an experiment spec (JSON) and write a results CSV.

Thread count for bench rows is taken from the NLPDHG_THREADS environment
variable (default 1; solves themselves are always single-threaded).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import baselines
from .bench import ExperimentSpec, rows_to_csv, run_experiment
from .data import gen_game_data, gen_lasso_data, gen_logreg_data
from .operators import load_matrix_csv, save_matrix_csv
from .problems.games import MatrixGameProblem, solve_matrix_game
from .problems.lasso import LassoProblem, solve_lasso
from .problems.logreg import L1LogRegProblem, solve_l1_logreg

_DEFAULT_LAM = {"logreg": 100.0, "game": 0.1, "lasso": None}


def _cmd_gen_data(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lam = args.lam if args.lam is not None else _DEFAULT_LAM[args.kind]
    meta = {"kind": args.kind, "m": args.m, "seed": args.seed}
    if args.kind == "logreg":
        if args.d is None:
            raise SystemExit("gen-data --kind logreg requires --d")
        B, _, _ = gen_logreg_data(args.m, args.d, args.seed)
        save_matrix_csv(out / "matrix.csv", B)
        meta.update(d=args.d, **{"lambda": lam})
    elif args.kind == "game":
        if args.n is None:
            raise SystemExit("gen-data --kind game requires --n")
        save_matrix_csv(out / "matrix.csv", gen_game_data(args.m, args.n, args.seed))
        meta.update(n=args.n, **{"lambda": lam})
    else:
        if args.n is None:
            raise SystemExit("gen-data --kind lasso requires --n")
        A, b, _ = gen_lasso_data(args.m, args.n, args.sparsity, args.noise, args.seed)
        save_matrix_csv(out / "matrix.csv", A)
        save_matrix_csv(out / "b.csv", b.reshape(1, -1))
        if lam is None:
            lam = 0.3 * float(np.max(np.abs(A.T @ b))) / args.m
        meta.update(n=args.n, **{"lambda": lam})
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(f"wrote fixture to {out}")


def _load_fixture(path):
    p = Path(path)
    if p.is_dir():
        p = p / "meta.json"
    meta = json.loads(p.read_text())
    root = p.parent
    matrix = load_matrix_csv(root / "matrix.csv")
    kind = meta["kind"]
    lam = meta["lambda"]
    if kind == "logreg":
        return kind, L1LogRegProblem(matrix, lam)
    if kind == "game":
        return kind, MatrixGameProblem(matrix, lam)
    b = load_matrix_csv(root / "b.csv").ravel()
    return kind, LassoProblem(matrix, b, lam)


def _cmd_solve(args):
    kind, problem = _load_fixture(args.problem)
    if args.method == "nonlinear-pdhg":
        solver = {"logreg": solve_l1_logreg, "game": solve_matrix_game, "lasso": solve_lasso}[kind]
        report = solver(problem, tol=args.tol, max_iters=args.max_iters)
    elif args.method == "linear-pdhg" and kind == "logreg":
        report = baselines.solve_linear_pdhg_logreg(problem, tol=args.tol, max_iters=args.max_iters)
    elif args.method == "linear-pdhg" and kind == "game":
        report = baselines.solve_linear_pdhg_game(problem, tol=args.tol, max_iters=args.max_iters)
    elif args.method == "fb-splitting" and kind == "logreg":
        report = baselines.solve_fb_logreg(problem, tol=args.tol, max_iters=args.max_iters)
    elif args.method == "fista" and kind == "lasso":
        report = baselines.fista_lasso(problem, tol=args.tol, max_iters=args.max_iters)
    elif args.method == "pu" and kind == "game":
        report = baselines.solve_game_pu(problem, tol=args.tol, max_iters=args.max_iters)
    elif args.method == "omwu" and kind == "game":
        report = baselines.solve_game_omwu(problem, tol=args.tol, max_iters=args.max_iters)
    else:
        raise SystemExit(f"method {args.method!r} is not available for kind {kind!r}")
    text = report.to_json()
    if args.report:
        Path(args.report).write_text(text + "\n")
        print(f"wrote report to {args.report}")
    else:
        print(text)


def _cmd_bench(args):
    spec = ExperimentSpec.from_json(Path(args.spec).read_text())
    rows = run_experiment(spec)
    Path(args.out).write_text(rows_to_csv(rows))
    print(f"wrote {len(rows)} rows to {args.out}")


def build_parser():
    parser = argparse.ArgumentParser(prog="nlpdhg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-data", help="generate a seeded problem fixture")
    g.add_argument("--kind", choices=("logreg", "game", "lasso"), required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--d", type=int, default=None, help="feature count (logreg)")
    g.add_argument("--n", type=int, default=None, help="column count (game, lasso)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--lam", type=float, default=None)
    g.add_argument("--sparsity", type=int, default=10, help="lasso truth sparsity")
    g.add_argument("--noise", type=float, default=0.1, help="lasso noise level")
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen_data)

    s = sub.add_parser("solve", help="solve a fixture with one method")
    s.add_argument("--problem", required=True, help="fixture directory or meta.json path")
    s.add_argument("--method", required=True)
    s.add_argument("--tol", type=float, default=1e-4)
    s.add_argument("--max-iters", type=int, default=50000)
    s.add_argument("--report", default=None, help="output JSON path (stdout if omitted)")
    s.set_defaults(func=_cmd_solve)

    b = sub.add_parser("bench", help="run an experiment spec")
    b.add_argument("--spec", required=True, help="ExperimentSpec JSON file")
    b.add_argument("--out", required=True, help="results CSV path")
    b.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())

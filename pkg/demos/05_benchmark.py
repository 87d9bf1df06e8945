"""Running the benchmark harness programmatically.

Each experiment pins a seed, builds identical data for every solver, and
emits one CSV row per (solver, variant, repetition). The same flow is
available from the command line:

    nlpdhg bench --spec spec.json --out results.csv

This demo uses reduced sizes so it finishes in seconds; swap in
``desk_scale_specs()`` for the full desk-scale protocol.
"""

from nlpdhg.bench import ExperimentSpec, rows_to_csv, run_experiment

spec = ExperimentSpec(
    kind="game",
    m=100,
    n=100,
    lam=0.1,
    seed=0,
    solvers=["nonlinear-pdhg", "pu", "omwu"],
    tol=1e-5,
    max_iters=20000,
    reps=2,
)
rows = run_experiment(spec)
print(rows_to_csv(rows))

fastest = min((r for r in rows if r.converged), key=lambda r: r.iters)
print(f"fewest iterations: {fastest.solver} ({fastest.variant}) with {fastest.iters}")

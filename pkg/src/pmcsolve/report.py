"""Scaling sweeps: solve a problem family across sizes, write a CSV of
measurements and a log-log runtime figure with a fitted growth exponent.

The exponent comes from a least-squares line through log(runtime) vs
log(n), averaged per size first so repeated seeds at one size count
once.  Sub-millisecond runs are clamped to 1 ms before taking logs.
"""

from __future__ import annotations

import csv
import math
import os

from .graph import gen_graph
from .problems import ProblemSpec, solve_problem


def _measure(spec, kind, sizes, per_size, seed, gen_params,
             budget_seps, budget_pmcs):
    rows = []
    for n in sizes:
        for i in range(per_size):
            s = seed + 1009 * i + n
            G = gen_graph(kind, seed=s, n=n, **gen_params)
            sol = solve_problem(G, spec, budget_seps=budget_seps,
                                budget_pmcs=budget_pmcs)
            value = sol.value.value if sol.feasible else None
            rows.append({
                "kind": kind,
                "n": n,
                "seed": s,
                "m": G.m,
                "feasible": sol.feasible,
                "value": value,
                "separators": sol.stats.separators,
                "pmcs": sol.stats.pmcs,
                "good_triples": sol.stats.good_triples,
                "dp_keys": sol.stats.dp_keys,
                "ms": sol.stats.ms,
            })
    return rows


def fit_exponent(rows) -> float:
    """Slope of log(mean ms) against log(n) across the measured sizes."""
    import numpy as np

    by_n: dict[int, list[int]] = {}
    for row in rows:
        by_n.setdefault(row["n"], []).append(max(row["ms"], 1))
    if len(by_n) < 2:
        return 0.0
    xs = sorted(by_n)
    logn = np.log([float(n) for n in xs])
    logt = np.log([sum(by_n[n]) / len(by_n[n]) for n in xs])
    slope, _ = np.polyfit(logn, logt, 1)
    return float(slope)


def _render(rows, exponent, png_path, title):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ns = [row["n"] for row in rows]
    ms = [max(row["ms"], 1) for row in rows]
    ax1.scatter(ns, ms, alpha=0.6, label="runs")
    xs = sorted(set(ns))
    if len(xs) >= 2:
        logn = np.log(xs)
        anchor = math.log(sum(m for n, m in zip(ns, ms) if n == xs[0])
                          / ns.count(xs[0]))
        ax1.plot(xs, np.exp(anchor + exponent * (logn - logn[0])), "--",
                 label=f"n^{exponent:.2f} fit")
    ax1.set_xscale("log")
    ax1.set_yscale("log")
    ax1.set_xlabel("n")
    ax1.set_ylabel("solve time (ms)")
    ax1.legend()
    ax1.set_title(title)
    ax2.scatter(ns, [row["pmcs"] for row in rows], alpha=0.6,
                label="pmcs", marker="o")
    ax2.scatter(ns, [row["separators"] for row in rows], alpha=0.6,
                label="separators", marker="x")
    ax2.set_xlabel("n")
    ax2.set_ylabel("count")
    ax2.legend()
    ax2.set_title("structure counts")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)


def scaling_study(
    spec: ProblemSpec,
    kind: str,
    sizes,
    per_size: int,
    seed: int,
    out_dir: str,
    *,
    gen_params=None,
    budget_seps: int = 10 ** 6,
    budget_pmcs: int = 10 ** 7,
) -> dict:
    """Run the sweep and write scaling.csv + scaling.png under out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    rows = _measure(spec, kind, sizes, per_size, seed, gen_params or {},
                    budget_seps, budget_pmcs)
    csv_path = os.path.join(out_dir, "scaling.csv")
    fields = ["kind", "n", "seed", "m", "feasible", "value", "separators",
              "pmcs", "good_triples", "dp_keys", "ms"]
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    exponent = fit_exponent(rows)
    png_path = os.path.join(out_dir, "scaling.png")
    _render(rows, exponent, png_path, f"{spec.name} on {kind} graphs")
    return {"csv": csv_path, "png": png_path, "exponent": exponent,
            "rows": rows}

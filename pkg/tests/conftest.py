"""Shared test helpers plus the acceptance-criteria summary printer."""

import random

from pmcsolve.graph import Graph, gen_graph

ACCEPTANCE_LINES = []


def record_criterion(num: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append((num, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_LINES):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {status} - {detail}")


def random_connected(rng: random.Random, n: int, p: float) -> Graph:
    """A connected G(n,p) sample, retrying seeds until connected."""
    while True:
        G = gen_graph("gnp", seed=rng.randrange(1 << 30), n=n, p=p)
        if n == 0 or G.is_connected_mask(G.full_mask):
            return G


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return Graph(n, edges)

from __future__ import annotations

import itertools
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from conceptnet import Graph  # noqa: E402

# numba compiles on first call, which would trip hypothesis deadlines
settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

TOY_CORPUS = [
    '{"id": "A1", "concepts": ["C1", "C2", "C3", "C4"]}',
    '{"id": "A2", "concepts": ["C1", "C5", "C6"]}',
    '{"id": "A3", "concepts": ["C3", "C4"]}',
]


def make_graph(n, links):
    g = Graph(n)
    for link in links:
        u, v = tuple(link)
        g.add_edge(u, v)
    return g


def link_set(graph):
    us, vs = graph.edges()
    return {frozenset((int(u), int(v))) for u, v in zip(us, vs)}


@st.composite
def small_graphs(draw, max_nodes=8):
    n = draw(st.integers(1, max_nodes))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return n, [frozenset(p) for p in chosen]


@pytest.fixture
def toy_corpus_file(tmp_path):
    path = tmp_path / "toy.jsonl"
    path.write_text("\n".join(TOY_CORPUS) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance summary ---------------------------------------------------

ACCEPTANCE_RESULTS: dict[str, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    props = dict(report.user_properties)
    title = props.get("title", "")
    outcome = "PASS" if report.outcome == "passed" else ("SKIP" if report.outcome == "skipped" else "FAIL")
    prev = ACCEPTANCE_RESULTS.get(crit)
    if prev is None or prev[0] == "PASS":
        ACCEPTANCE_RESULTS[crit] = (outcome, title, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE_RESULTS, key=lambda c: int(c)):
        outcome, title, detail = ACCEPTANCE_RESULTS[crit]
        terminalreporter.write_line(f"criterion {crit:>2}: {outcome}  {title}")
        for line in detail.splitlines():
            terminalreporter.write_line(f"      {line}")

from __future__ import annotations

import sys
from pathlib import Path

import pytest

from pureoseq.graph_core import Graph, parse_graph, resolve_edge
from pureoseq.tricone import build_labeling

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
sys.path.insert(0, str(Path(__file__).resolve().parent))

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def load(name: str) -> Graph:
    return parse_graph((FIXTURES / name).read_text())


def edges(g: Graph, names) -> frozenset[int]:
    if isinstance(names, str):
        names = names.split(",")
    return frozenset(resolve_edge(g, n.strip()) for n in names)


def verts(g: Graph, labels: str) -> frozenset[int]:
    return frozenset(g.index[c] for c in labels)


@pytest.fixture(scope="session")
def fig1() -> Graph:
    return load("fig1.edges")


@pytest.fixture(scope="session")
def w() -> Graph:
    return load("w.edges")


@pytest.fixture(scope="session")
def g11() -> Graph:
    return load("g11.edges")


@pytest.fixture(scope="session")
def wlab(w):
    return build_labeling(w, (0, 1, 2))


@pytest.fixture(scope="session")
def glab(g11):
    return build_labeling(g11, (0, 1, 2))


@pytest.fixture(scope="session")
def triangle() -> Graph:
    return parse_graph("0 1\n0 2\n1 2")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")

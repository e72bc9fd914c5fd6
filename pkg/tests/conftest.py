from __future__ import annotations

from pathlib import Path

import pytest

from oasis2.demo import run_demo, write_demo

GOLDEN = Path(__file__).parent / "golden"
SPECS = Path(__file__).parent.parent / "specs"


@pytest.fixture(scope="session")
def demo():
    return run_demo(seed=0)


@pytest.fixture(scope="session")
def demo_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("demo")
    write_demo(out, seed=0)
    return out


@pytest.fixture
def fragments(demo):
    """Fresh copies of the five demo graphs, safe to mutate."""
    return {name: g.copy() for name, g in demo.fragments().items()}

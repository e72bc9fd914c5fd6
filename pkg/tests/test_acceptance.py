"""Acceptance suite: one test per criterion, each timed against its budget.

Every test prints a single PASS/FAIL line (visible with or without ``-s``).
"""

from __future__ import annotations

import random
import time
from contextlib import contextmanager

from oasis2.demo import FILES, write_demo
from oasis2.harness import EXECUTED, run_scenario, trace
from oasis2.matcher import discover
from oasis2.turtle import parse, serialize
from oasis2.validator import RULES, validate

import gen
from conftest import GOLDEN
from layers import build_layers, discovery_case, world_of
from mutations import mutated
from oracles import brute_discover, demo_enumeration


@contextmanager
def criterion(capsys, name: str, budget: float):
    """Run the body, then report PASS only if it succeeded within ``budget`` seconds."""
    start = time.perf_counter()
    failure = None
    try:
        yield
    except AssertionError as exc:
        failure = exc
    elapsed = time.perf_counter() - start
    ok = failure is None and elapsed < budget
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'}: {name} ({elapsed:.2f}s, budget {budget:.0f}s)")
    if failure is not None:
        raise failure
    assert elapsed < budget, f"{name} took {elapsed:.2f}s, budget {budget}s"


def test_demo_fidelity(capsys, tmp_path):
    with criterion(capsys, "demo fidelity", 1.0):
        run = write_demo(tmp_path, seed=0)
        for name in FILES:
            assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes(), name
        counts = {name: (len(g.nodes), len(g)) for name, g in run.fragments().items()}
        assert counts == demo_enumeration()


def test_conformance_soundness(capsys):
    with criterion(capsys, "conformance soundness, 200 specs x 5 layers", 30.0):
        problems = {}
        for seed in range(200):
            for stage, g in build_layers(gen.layer_case(seed)).items():
                found = validate(g)
                if found:
                    problems[(seed, stage)] = found[0]
        assert problems == {}


def test_mutation_coverage(capsys, demo):
    with criterion(capsys, "mutation coverage, 8/8 rules", 5.0):
        base = demo.scenario.final
        assert validate(base) == []
        cited = {rule: {v.rule for v in validate(mutated(base, rule))} for rule in RULES}
        assert cited == {rule: {rule} for rule in RULES}


def test_matcher_oracle_equivalence(capsys):
    with criterion(capsys, "matcher equals brute force on 500 kbs", 60.0):
        discrepancies = []
        for seed in range(500):
            plan_spec, specs, plan, kb = discovery_case(seed)
            got = {t: [(c.agent, c.behaviour, c.goal, c.task) for c in cands]
                   for t, cands in discover(plan, kb).choices.items()}
            if got != brute_discover(plan_spec, specs):
                discrepancies.append(seed)
        assert discrepancies == []


def test_round_trip(capsys):
    with criterion(capsys, "round trip on 200 random graphs and the demo files", 30.0):
        texts = [serialize(gen.random_graph(random.Random(seed))) for seed in range(200)]
        texts += [(GOLDEN / name).read_text() for name in FILES if name.endswith(".ttl")]
        for text in texts:
            g = parse(text)
            again = serialize(g)
            assert parse(again) == g
            assert serialize(parse(again)) == again
            assert again == text


def test_lifecycle_completeness(capsys):
    with criterion(capsys, "lifecycle completeness on 100 worlds", 10.0):
        for seed in range(100):
            case = gen.world_case(seed)
            world, plans = world_of(case)
            result = run_scenario(world, plans, seed=seed)
            tasks = len(case.plan.tasks())
            assert set(result.states.values()) == {EXECUTED}, seed
            assert len(result.states) == tasks
            assert result.ticks <= 4 * tasks
            assert validate(result.final) == []
            for task in result.execution_tasks():
                assert trace(result.final, task).performer is not None
            assert run_scenario(world, plans, seed=seed).event_log() == result.event_log()

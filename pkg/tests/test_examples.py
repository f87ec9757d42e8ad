"""
Full size randomized sweeps over seeded models. Deselected by default,
run with: pytest -m slow
"""

import numpy as np
import pytest

from markovdsep import catalog
from markovdsep import finstoch as fs
from markovdsep import gauss as gs
from markovdsep.config import DEFAULT_SETTINGS
from markovdsep.diagram import iso_equal
from markovdsep.dsep import DSepQuery, bayes_ball, equivalence_check, underlying_dag
from markovdsep.markov import (COMPATIBLE, HOLDS, check_global_markov, check_local_markov, decide_compatibility,
                               evaluate)
from markovdsep.normalize import normalize, pure_bloom_version

from .oracles import copy_family_compatible, path_dseparated, two_output_factorizes
from .strategies import (finstoch_interpretation, gauss_interpretation, random_causal_model, random_dag_model,
                         random_diagram, random_stochastic)
from .test_dsep import all_queries, random_query
from .test_markov import two_output_state

pytestmark = pytest.mark.slow

SWEEP = DEFAULT_SETTINGS.updated(exhaustive_max=6, sample_size=500)


def test_worked_examples():
    fork, collider, diamond = catalog.fork(), catalog.collider(), catalog.diamond()
    assert equivalence_check(fork, DSepQuery('X', 'Y', 'Z')).categorical
    assert not equivalence_check(fork, DSepQuery('X', 'Y', ())).categorical
    assert equivalence_check(collider, DSepQuery('X', 'Y', ())).categorical
    assert not equivalence_check(collider, DSepQuery('X', 'Y', 'Z')).categorical
    assert equivalence_check(diamond, DSepQuery('X', 'Y', 'Z')).categorical
    assert not equivalence_check(diamond, DSepQuery('X', 'Y', ('W', 'Z'))).categorical


def test_categorical_equals_classical_sweep():
    for seed in range(500):
        rng = np.random.default_rng(seed)
        phi = random_dag_model(rng)
        wires = sorted(phi.outputs)
        queries = all_queries(wires) if len(wires) <= 6 else (random_query(rng, wires) for _ in range(2000))
        for q in queries:
            assert equivalence_check(phi, q).agree, (seed, str(q))


def test_bayes_ball_matches_path_enumeration_sweep():
    for seed in range(200):
        rng = np.random.default_rng(seed)
        dag = underlying_dag(random_dag_model(rng))
        wires = sorted(dag.nodes)
        for _ in range(100):
            q = random_query(rng, wires)
            assert bayes_ball(dag, q.x, q.y, q.z) == path_dseparated(dag, q.x, q.y, q.z), (seed, str(q))


@pytest.mark.parametrize('backend, tol', [('finstoch', 1e-9), ('gauss', 1e-7)])
def test_soundness_sweep(backend, tol):
    for seed in range(200):
        rng = np.random.default_rng(seed)
        phi = random_causal_model(rng)
        if backend == 'finstoch':
            interp = finstoch_interpretation(rng, phi, max_card=4, sparse=0.2)
        else:
            interp = gauss_interpretation(rng, phi)
        report = check_global_markov(phi, evaluate(phi, interp), tol=tol, settings=SWEEP)
        assert report.overall == HOLDS, (seed, str(report.witness))


def test_compatibility_round_trip_sweep():
    for seed in range(100):
        rng = np.random.default_rng(seed)
        phi = pure_bloom_version(random_causal_model(rng, max_boxes=5))
        f = evaluate(phi, finstoch_interpretation(rng, phi, max_card=3, sparse=0.3))
        result = decide_compatibility(phi, f, settings=SWEEP)
        assert result.status == COMPATIBLE, (seed, result.reason)
        assert fs.max_abs_diff(evaluate(phi, result.interpretation), f) <= 1e-9
        assert check_local_markov(phi, f, settings=SWEEP).overall == HOLDS

        if phi.inputs or len(phi.outputs) > SWEEP.exhaustive_max:
            continue
        shape = f.codomain.shape
        generic = fs.state(f.codomain, rng.dirichlet(np.ones(int(np.prod(shape)))).reshape(shape))
        verdicts = {check_global_markov(phi, generic, settings=SWEEP).overall,
                    check_local_markov(phi, generic, settings=SWEEP).overall,
                    decide_compatibility(phi, generic, settings=SWEEP).overall}
        assert len(verdicts) == 1, seed


def test_gauss_compatibility_round_trip_sweep():
    for seed in range(100):
        rng = np.random.default_rng(seed)
        phi = pure_bloom_version(random_causal_model(rng, max_boxes=5))
        f = evaluate(phi, gauss_interpretation(rng, phi))
        result = decide_compatibility(phi, f, tol=1e-7, settings=SWEEP)
        assert result.status == COMPATIBLE, (seed, result.reason)
        assert gs.max_abs_diff(evaluate(phi, result.interpretation), f) <= 1e-7


def test_normalization_confluence_sweep():
    for seed in range(300):
        rng = np.random.default_rng(seed)
        d = random_diagram(rng)
        first = normalize(d)
        assert normalize(first) is first
        for order in range(5):
            assert iso_equal(normalize(d, np.random.default_rng(1000 + order)), first), seed


def test_copy_family_characterization_sweep():
    two_output = catalog.two_output()
    rng = np.random.default_rng(0)
    for _ in range(500):
        r = rng.dirichlet(np.ones(4)) * (rng.random(4) < 0.6)
        if not r.any():
            r[int(rng.integers(4))] = 1.0
        r = (r / r.sum()).reshape(2, 2)
        t = np.einsum('ab,xb,ya->xaby', r, np.eye(2), np.eye(2))
        result = decide_compatibility(two_output, two_output_state(t))
        assert (result.status == COMPATIBLE) == copy_family_compatible(r)
    for k in range(500):
        if k % 2:
            t = rng.dirichlet(np.ones(16)).reshape(2, 2, 2, 2)
        else:
            r = rng.dirichlet(np.ones(4)).reshape(2, 2)
            a, b = random_stochastic(rng, 2, 2, sparse=0.3), random_stochastic(rng, 2, 2, sparse=0.3)
            t = np.einsum('ab,xa,yb->xaby', r, a, b)
        result = decide_compatibility(two_output, two_output_state(t))
        assert (result.status == COMPATIBLE) == two_output_factorizes(t)

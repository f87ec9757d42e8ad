"""
Markov properties and causal compatibility.

A kernel f: in(phi) -> out(phi) satisfies the global Markov property of a
causal model phi when every categorically d-separated triple of outputs
(with the model inputs on the Y or Z side) is a conditional independence of
f, and the local one when each box output is independent of its
non-descendants given the box inputs. On pure blooms with distinct box
types both are equivalent to f being the image of phi under some
interpretation, which decide_compatibility builds box by box.
"""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping, Optional, Tuple

import networkx as nx
import numpy as np

from . import finstoch, gauss
from .config import DEFAULT_SETTINGS
from .diagram import StringDiagram
from .dsep import CategoricalSeparator, DSepQuery
from .errors import (DimensionMismatchError, InterfaceMismatchError, MissingAssignmentError,
                     ModelShapeError, NoConditionalsError)
from .normalize import as_causal_model, descendants, final_boxes, marginalize

log = logging.getLogger(__name__)

BACKENDS = {finstoch.NAME: finstoch, gauss.NAME: gauss}

HOLDS, FAILS, UNKNOWN = 'holds', 'fails', 'unknown'
COMPATIBLE, INCOMPATIBLE = 'compatible', 'incompatible'


def backend_named(name):
    try:
        return BACKENDS[name]
    except KeyError:
        raise NoConditionalsError('unknown backend {!r}, choose from {}'.format(
            name, ', '.join(sorted(BACKENDS)))) from None


def backend_for(kernel):
    for backend in BACKENDS.values():
        if backend.is_kernel(kernel):
            return backend
    raise NoConditionalsError('no backend handles {!r}'.format(type(kernel).__name__))


def _as_object(backend, name, obj):
    if backend is finstoch and not isinstance(obj, finstoch.Factor):
        if isinstance(obj, (int, np.integer)):
            return finstoch.Factor.sized(name, int(obj))
        return finstoch.Factor(name, tuple(obj))
    if backend is gauss:
        return int(obj)
    return obj


@dataclass(frozen=True)
class Interpretation:
    """
    Objects for the wire types and kernels for the box types of a signature.
    finstoch objects are Factors (a label list or a cardinality is accepted),
    gauss objects are dimensions.
    """
    type_assignment: Mapping[str, object] = field(default_factory=dict)
    box_assignment: Mapping[str, object] = field(default_factory=dict)
    backend: str = finstoch.NAME

    def __post_init__(self):
        be = backend_named(self.backend)
        object.__setattr__(self, 'type_assignment',
                           {t: _as_object(be, t, o) for t, o in self.type_assignment.items()})
        object.__setattr__(self, 'box_assignment', dict(self.box_assignment))

    @property
    def module(self):
        return backend_named(self.backend)


def _sources_ok(phi):
    body = phi.body
    produced = set(phi.inputs)
    for b in body.boxes:
        produced.update(body.box_outputs.get(b, ()))
    needed = set(phi.outputs)
    for b in body.boxes:
        needed.update(body.box_inputs.get(b, ()))
    floating = sorted(needed - produced)
    if floating:
        raise ModelShapeError('wire {} is used but neither an input nor a box output'.format(floating[0]))


def evaluate(phi: StringDiagram, interp: Interpretation):
    """
    Purpose:

        The kernel interp(phi): boxes are applied in topological order,
        wires fanning out are copied and wires missing from the output leg
        are discarded.

    Output:

        backend kernel from the input leg objects to the output leg objects

    Raises:

        MissingAssignmentError, DimensionMismatchError
    """
    backend = interp.module
    body = phi.body
    _sources_ok(phi)
    objects = {}
    for w in body.wires:
        t = phi.wire_type(w)
        if t not in interp.type_assignment:
            raise MissingAssignmentError('no object for type {!r}'.format(t))
        objects[w] = interp.type_assignment[t]
    size = lambda ws: tuple(backend.object_size(objects[w]) for w in ws)
    kernels = {}
    for b in body.boxes:
        t = phi.box_type(b)
        if t not in interp.box_assignment:
            raise MissingAssignmentError('no kernel for box type {!r}'.format(t))
        k = interp.box_assignment[t]
        if tuple(backend.input_sizes(k)) != size(body.inputs(b)) or \
                tuple(backend.output_sizes(k)) != size(body.outputs(b)):
            raise DimensionMismatchError('kernel for box type {!r} maps {} -> {}, box {} needs {} -> {}'.format(
                t, tuple(backend.input_sizes(k)), tuple(backend.output_sizes(k)), b,
                size(body.inputs(b)), size(body.outputs(b))))
        kernels[b] = k
    order = nx.DiGraph()
    order.add_nodes_from(body.boxes)
    for b in body.boxes:
        for w in body.box_inputs.get(b, ()):
            for p, _ in body.producers[w]:
                order.add_edge(p, b)
    steps = [(kernels[b], body.inputs(b), body.outputs(b)) for b in nx.lexicographical_topological_sort(order)]
    return backend.contract(list(phi.inputs), steps, list(phi.outputs), objects)


@dataclass(frozen=True)
class TaggedQuery:
    query: DSepQuery
    separated: bool


@dataclass(frozen=True)
class MarkovCheck:
    query: DSepQuery
    verdict: str
    box: Optional[str] = None

    def __str__(self):
        where = ' (box {})'.format(self.box) if self.box else ''
        return '{} {}{}'.format(self.verdict.upper(), self.query, where)


@dataclass(frozen=True)
class MarkovReport:
    prop: str
    checks: Tuple[MarkovCheck, ...] = ()
    overall: str = HOLDS
    reason: str = ''
    n_triples: int = 0
    n_separated: int = 0

    @property
    def witness(self) -> Optional[MarkovCheck]:
        return next((c for c in self.checks if c.verdict == FAILS), None)


@dataclass(frozen=True)
class CompatibilityResult:
    status: str
    interpretation: Optional[Interpretation] = None
    witness: Optional[MarkovCheck] = None
    reason: str = ''
    report: Optional[MarkovReport] = None
    error: Optional[float] = None

    @property
    def overall(self) -> str:
        return {COMPATIBLE: HOLDS, INCOMPATIBLE: FAILS}.get(self.status, UNKNOWN)


def _check_interface(phi, f, backend):
    n_in, n_out = len(backend.input_sizes(f)), len(backend.output_sizes(f))
    if (n_in, n_out) != (len(phi.inputs), len(phi.outputs)):
        raise InterfaceMismatchError('kernel has {} inputs and {} outputs, model legs have {} and {}'.format(
            n_in, n_out, len(phi.inputs), len(phi.outputs)))


def enumerate_dsep_triples(phi: StringDiagram, settings=None, seed=None) -> Iterator[TaggedQuery]:
    """
    Purpose:

        Stream the disjoint output triples (X, Y, Z) with in(phi) inside
        Y | Z, tagged with the categorical d-separation verdict.

    Input:

        settings: Settings; up to exhaustive_max output wires every triple is
                  produced (outputs labelled in lexicographic order), beyond
                  that sample_size triples are drawn at random
        seed: overrides settings.seed for the sampled case
    """
    settings = settings or DEFAULT_SETTINGS
    phi = as_causal_model(phi)
    outs = sorted(phi.outputs)
    ins = set(phi.inputs)
    if not ins <= set(outs):
        return
    fixed = [w for w in outs if w in ins]
    free = [w for w in outs if w not in ins]
    sep = CategoricalSeparator(phi)

    def tag(labels):
        parts = {'X': set(), 'Y': set(), 'Z': set(), '.': set()}
        for w, l in labels:
            parts[l].add(w)
        q = DSepQuery(parts['X'], parts['Y'], parts['Z'])
        return TaggedQuery(q, sep.separated(q))

    if len(outs) <= settings.exhaustive_max:
        for lf in product('YZ', repeat=len(fixed)):
            for lr in product('XYZ.', repeat=len(free)):
                yield tag(list(zip(fixed, lf)) + list(zip(free, lr)))
        return
    log.warning('%d outputs exceed the exhaustive limit of %d, sampling %d triples',
                len(outs), settings.exhaustive_max, settings.sample_size)
    rng = np.random.default_rng(settings.seed if seed is None else seed)
    for _ in range(settings.sample_size):
        lf = rng.choice(['Y', 'Z'], size=len(fixed))
        lr = rng.choice(['X', 'Y', 'Z', '.'], size=len(free))
        yield tag(list(zip(fixed, lf)) + list(zip(free, lr)))


def _positions(phi, wires):
    index = {w: i for i, w in enumerate(phi.outputs)}
    return [index[w] for w in sorted(wires)]


def _run_checks(phi, f, backend, queries, tol, workers, boxes=None):
    def test(q):
        ok = backend.ci_kernel(f, _positions(phi, q.x), _positions(phi, q.y), _positions(phi, q.z), tol)
        log.debug('%s %s', q, HOLDS if ok else FAILS)
        return ok
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(test, queries))
    else:
        verdicts = [test(q) for q in queries]
    boxes = boxes or [None] * len(queries)
    return tuple(MarkovCheck(q, HOLDS if ok else FAILS, b) for q, ok, b in zip(queries, verdicts, boxes))


def check_global_markov(phi: StringDiagram, f, tol=None, settings=None, seed=None) -> MarkovReport:
    """
    CI test of f at every d-separated triple with X and Y non-empty. Any
    causal model is accepted; the equivalence with compatibility needs a
    pure bloom.
    """
    settings = settings or DEFAULT_SETTINGS
    tol = settings.tol if tol is None else tol
    phi = as_causal_model(phi)
    backend = backend_for(f)
    _check_interface(phi, f, backend)
    tagged = list(enumerate_dsep_triples(phi, settings, seed))
    queries = [t.query for t in tagged if t.separated and t.query.x and t.query.y]
    checks = _run_checks(phi, f, backend, queries, tol, settings.workers)
    overall = FAILS if any(c.verdict == FAILS for c in checks) else HOLDS
    return MarkovReport('global', checks, overall, n_triples=len(tagged),
                        n_separated=sum(t.separated for t in tagged))


def local_queries(phi) -> Tuple[Tuple[str, DSepQuery], ...]:
    'The (box, query) pairs of the local Markov property of a pure bloom'
    wires = set(phi.body.wires)
    out = []
    for b in sorted(phi.body.boxes):
        xs = frozenset(phi.body.outputs(b))
        zs = frozenset(phi.body.inputs(b))
        out.append((b, DSepQuery(xs, wires - descendants(phi, xs) - zs, zs)))
    return tuple(out)


def check_local_markov(phi: StringDiagram, f, tol=None, settings=None) -> MarkovReport:
    'One CI test per box: outputs against non-descendants given inputs'
    settings = settings or DEFAULT_SETTINGS
    tol = settings.tol if tol is None else tol
    phi = as_causal_model(phi)
    backend = backend_for(f)
    _check_interface(phi, f, backend)
    if not phi.is_pure_bloom:
        return MarkovReport('local', overall=UNKNOWN, reason='not-pure-bloom')
    pairs = local_queries(phi)
    checks = _run_checks(phi, f, backend, [q for _, q in pairs], tol, settings.workers,
                         [b for b, _ in pairs])
    overall = FAILS if any(c.verdict == FAILS for c in checks) else HOLDS
    return MarkovReport('local', checks, overall, n_triples=len(checks), n_separated=len(checks))


def _type_objects(phi, f, backend):
    'Objects forced on the wire types by f, or a reason why none exist'
    objects, sizes = {}, {}
    legs = [(backend.output_object(f, i, phi.wire_type(w)), phi.wire_type(w)) for i, w in enumerate(phi.outputs)]
    for obj, t in legs:
        if t in objects and backend.object_size(obj) != sizes[t]:
            return None, 'type {} carries objects of sizes {} and {}'.format(
                t, sizes[t], backend.object_size(obj))
        objects.setdefault(t, obj)
        sizes[t] = backend.object_size(obj)
    for w, n in zip(phi.inputs, backend.input_sizes(f)):
        if sizes[phi.wire_type(w)] != n:
            return None, 'input {} has size {} but its copy has size {}'.format(w, n, sizes[phi.wire_type(w)])
    return objects, ''


def _inputs_pass_through(phi, f, objects, backend, tol):
    'Every interpretation copies the input wires to the outputs unchanged'
    if not phi.inputs:
        return ''
    passed = backend.marginal(f, [phi.outputs.index(w) for w in phi.inputs])
    err = backend.max_abs_diff(passed, backend.identity([objects[phi.wire_type(w)] for w in phi.inputs]))
    if err > tol:
        return 'outputs {} are not copies of the inputs (off by {:.3g})'.format(', '.join(phi.inputs), err)
    return ''


def _peel(psi, g, b, objects, backend):
    """
    Kernel of the final box b read off g: the conditional of out(b) given
    in(b) under the reference input, precomposed with the map from b's
    (possibly repeated) input ports to its distinct input wires.
    """
    body = psi.body
    ports = list(body.inputs(b))
    zs = list(dict.fromkeys(ports))
    xs = list(body.outputs(b))
    index = {w: i for i, w in enumerate(psi.outputs)}
    joint = backend.marginal(backend.reference_state(g), [index[w] for w in zs + xs])
    h = backend.conditional(joint, list(range(len(zs))))
    if ports == zs:
        return h
    port_objects = [objects[psi.wire_type(w)] for w in ports]
    return backend.compose(h, backend.wiring(port_objects, [ports.index(z) for z in zs]))


def decide_compatibility(phi: StringDiagram, f, tol=None, settings=None) -> CompatibilityResult:
    """
    Purpose:

        Decide whether f is the image of phi under some interpretation.

        On a pure bloom with distinct box types the local Markov property is
        tested and the outputs on the input wires must copy the inputs;
        when both hold the interpretation is built by repeatedly taking the
        lexicographically smallest final box, setting its kernel to the
        conditional of its outputs given its inputs and marginalizing it
        away. The result is re-evaluated against f.

        Other models only get the global Markov sweep: a failure proves
        incompatibility, otherwise the answer is unknown.

    Output:

        CompatibilityResult with status compatible (interpretation set),
        incompatible (witness set) or unknown (reason set)
    """
    settings = settings or DEFAULT_SETTINGS
    tol = settings.tol if tol is None else tol
    backend = backend_for(f)
    if not getattr(backend, 'HAS_CONDITIONALS', False):
        raise NoConditionalsError('backend {} has no conditionals'.format(backend.NAME))
    phi = as_causal_model(phi)
    _check_interface(phi, f, backend)

    reasons = []
    if not phi.is_pure_bloom:
        reasons.append('not-pure-bloom')
    repeated = sorted(t for t, n in Counter(phi.box_type(b) for b in phi.body.boxes).items() if n > 1)
    if repeated:
        reasons.append('repeated-box-types')
    if reasons:
        report = check_global_markov(phi, f, tol, settings)
        if report.overall == FAILS:
            return CompatibilityResult(INCOMPATIBLE, witness=report.witness, report=report,
                                       reason='global Markov property fails')
        return CompatibilityResult(UNKNOWN, reason=', '.join(reasons), report=report)

    local = check_local_markov(phi, f, tol, settings)
    if local.overall == FAILS:
        w = local.witness
        return CompatibilityResult(INCOMPATIBLE, witness=w, report=local,
                                   reason='local Markov property fails at box {}'.format(w.box))
    objects, why = _type_objects(phi, f, backend)
    if objects is None:
        return CompatibilityResult(INCOMPATIBLE, reason=why, report=local)
    why = _inputs_pass_through(phi, f, objects, backend, tol)
    if why:
        return CompatibilityResult(INCOMPATIBLE, reason=why, report=local)

    kernels = {}
    psi, g = phi, f
    while psi.body.boxes:
        b = min(final_boxes(psi))
        log.debug('peeling final box %s', b)
        kernels[psi.box_type(b)] = _peel(psi, g, b, objects, backend)
        gone = set(psi.body.outputs(b))
        keep = [w for w in psi.outputs if w not in gone]
        g = backend.marginal(g, [psi.outputs.index(w) for w in keep])
        psi = marginalize(psi, keep)

    interp = Interpretation(objects, kernels, backend.NAME)
    err = backend.max_abs_diff(evaluate(phi, interp), f)
    if err > tol:
        log.warning('reconstructed interpretation is off by %.3g', err)
        return CompatibilityResult(UNKNOWN, interp, reason='reconstruction-mismatch', report=local, error=err)
    return CompatibilityResult(COMPATIBLE, interp, report=local, error=err)

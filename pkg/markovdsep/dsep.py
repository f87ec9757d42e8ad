"""
d-separation on string diagrams.

Categorical d-separation marginalizes to X, Y and Z, cuts the Z wires and
asks whether X and Y fall in different connected components. Classical
d-separation runs Bayes-ball on the underlying DAG of a single-output, input
free pure bloom; both coincide on such models.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet

import networkx as nx
from networkx.utils import UnionFind

from .diagram import StringDiagram, diagram_of_graph
from .errors import InvalidQueryError, ModelShapeError, UnknownIdentifierError
from .hypergraph import Hypergraph
from .normalize import as_causal_model, marginalize

log = logging.getLogger(__name__)


def _wire_set(ws):
    if isinstance(ws, str):
        return frozenset([ws])
    return frozenset(ws)


@dataclass(frozen=True)
class DSepQuery:
    x: FrozenSet[str]
    y: FrozenSet[str]
    z: FrozenSet[str] = frozenset()

    def __post_init__(self):
        for name in ('x', 'y', 'z'):
            object.__setattr__(self, name, _wire_set(getattr(self, name)))

    @property
    def wires(self) -> FrozenSet[str]:
        return self.x | self.y | self.z

    def swapped(self):
        return DSepQuery(self.y, self.x, self.z)

    def __str__(self):
        fmt = lambda s: ', '.join(sorted(s)) if s else '{}'
        return '{} _||_ {} | {}'.format(fmt(self.x), fmt(self.y), fmt(self.z))


def validate_query(phi: StringDiagram, q: DSepQuery):
    'Raise InvalidQueryError unless X, Y, Z are pairwise disjoint output wires'
    outs = set(phi.outputs)
    stray = q.wires - outs
    if stray:
        raise InvalidQueryError('query uses non-output wires: ' + ', '.join(sorted(stray)))
    for a, b, name in ((q.x, q.y, 'X and Y'), (q.x, q.z, 'X and Z'), (q.y, q.z, 'Y and Z')):
        if a & b:
            raise InvalidQueryError('{} overlap on {}'.format(name, ', '.join(sorted(a & b))))


def cut(phi: StringDiagram, zs) -> StringDiagram:
    """
    Remove the output wires zs: every port on them is deleted (arities drop),
    boxes stay, and the wires leave both legs. The result is typed over its
    own body.
    """
    zs = _wire_set(zs)
    stray = zs - set(phi.outputs)
    if stray:
        raise InvalidQueryError('can only cut output wires, not: ' + ', '.join(sorted(stray)))
    body = phi.body
    keep = lambda ws: tuple(w for w in ws if w not in zs)
    h = Hypergraph(keep(body.wires), body.boxes,
                   {b: keep(body.box_inputs.get(b, ())) for b in body.boxes},
                   {b: keep(body.box_outputs.get(b, ())) for b in body.boxes})
    return diagram_of_graph(h, keep(phi.inputs), keep(phi.outputs))


def wire_components(d: StringDiagram) -> UnionFind:
    'Connected components of wires, every box joining all its attached wires'
    uf = UnionFind(d.body.wires)
    for b in d.body.boxes:
        uf.union(*d.body.ports(b))
    return uf


def undirected_reachable(d: StringDiagram, a, b) -> bool:
    for w in (a, b):
        if w not in d.body.wire_index:
            raise UnknownIdentifierError('unknown wire {!r}'.format(w))
    uf = wire_components(d)
    return uf[a] == uf[b]


class CategoricalSeparator:
    """
    Categorical d-separation decider for one model. Component structures are
    cached per (marginal, cut) pair so triple sweeps reuse them.
    """

    def __init__(self, phi: StringDiagram):
        self.phi = phi
        self._components: Dict = {}

    def components(self, keep: FrozenSet[str], zs: FrozenSet[str]) -> UnionFind:
        key = (keep, zs)
        if key not in self._components:
            self._components[key] = wire_components(cut(marginalize(self.phi, keep), zs))
        return self._components[key]

    def separated(self, q: DSepQuery) -> bool:
        validate_query(self.phi, q)
        if not q.x or not q.y:
            return True
        uf = self.components(q.wires, q.z)
        roots = {uf[x] for x in q.x}
        return not any(uf[y] in roots for y in q.y)


def d_separated_categorical(phi: StringDiagram, q: DSepQuery) -> bool:
    return CategoricalSeparator(phi).separated(q)


def underlying_dag(phi: StringDiagram) -> nx.DiGraph:
    """
    Purpose:

        The DAG on wires of a model whose boxes have exactly one output,
        with no global inputs and every wire observed.

    Output:

        networkx DiGraph with an edge A -> B when the box producing B reads A

    Raises:

        ModelShapeError naming the offending input wire, latent wire or box
    """
    phi = as_causal_model(phi)
    if phi.inputs:
        raise ModelShapeError('no underlying DAG: model has global inputs ' + ', '.join(phi.inputs))
    latent = sorted(set(phi.body.wires) - set(phi.outputs))
    if latent:
        raise ModelShapeError('no underlying DAG: latent wire ' + latent[0])
    dag = nx.DiGraph()
    dag.add_nodes_from(sorted(phi.body.wires))
    for b in sorted(phi.body.boxes):
        outs = phi.body.outputs(b)
        if len(outs) != 1:
            raise ModelShapeError('no underlying DAG: box {} has {} outputs'.format(b, len(outs)))
        dag.add_edges_from((a, outs[0]) for a in phi.body.inputs(b))
    return dag


def bayes_ball(dag: nx.DiGraph, xs, ys, zs) -> bool:
    """
    True when zs d-separates xs from ys in dag. A ball arriving from a child
    ('up') passes to parents and children unless observed; one arriving from
    a parent ('down') passes to children unless observed and bounces back to
    parents when the node is an ancestor of an observed node.
    """
    zs = set(zs)
    ys = set(ys)
    shaded = set(zs)
    for z in zs:
        shaded |= nx.ancestors(dag, z)
    schedule = [(x, 'up') for x in sorted(xs)]
    visited = set()
    while schedule:
        node, direction = schedule.pop()
        if node in ys:
            return False
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if direction == 'up' and node not in zs:
            schedule.extend((p, 'up') for p in dag.predecessors(node))
            schedule.extend((c, 'down') for c in dag.successors(node))
        elif direction == 'down':
            if node in shaded:
                schedule.extend((p, 'up') for p in dag.predecessors(node))
            if node not in zs:
                schedule.extend((c, 'down') for c in dag.successors(node))
    return True


def d_separated_classical(phi: StringDiagram, q: DSepQuery) -> bool:
    dag = underlying_dag(phi)
    validate_query(phi, q)
    if not q.x or not q.y:
        return True
    return bayes_ball(dag, q.x, q.y, q.z)


@dataclass(frozen=True)
class EquivalenceReport:
    query: DSepQuery
    categorical: bool
    classical: bool

    @property
    def agree(self) -> bool:
        return self.categorical == self.classical


def equivalence_check(phi: StringDiagram, q: DSepQuery) -> EquivalenceReport:
    classical = d_separated_classical(phi, q)
    return EquivalenceReport(q, d_separated_categorical(phi, q), classical)

"""
Finite directed hypergraphs: wires joined by boxes with ordered input and
output port lists. The same structure carries both signatures (wires are
types, boxes are generators) and diagram bodies.
"""

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Tuple

import networkx as nx

from .errors import UnknownIdentifierError


@dataclass(frozen=True)
class Violation:
    """One broken invariant, naming the offending wire, box or position."""
    kind: str
    subject: str
    detail: str = ''

    def __str__(self):
        s = '{}({})'.format(self.kind, self.subject)
        return s + ': ' + self.detail if self.detail else s


@dataclass(frozen=True)
class Hypergraph:
    wires: Tuple[str, ...] = ()
    boxes: Tuple[str, ...] = ()
    box_inputs: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)
    box_outputs: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'wires', tuple(self.wires))
        object.__setattr__(self, 'boxes', tuple(self.boxes))
        object.__setattr__(self, 'box_inputs', {b: tuple(p) for b, p in self.box_inputs.items()})
        object.__setattr__(self, 'box_outputs', {b: tuple(p) for b, p in self.box_outputs.items()})

    @classmethod
    def from_ports(cls, wires, ports):
        """Build from wires and a dict box -> (input wires, output wires)."""
        return cls(tuple(wires), tuple(ports),
                   {b: ins for b, (ins, outs) in ports.items()},
                   {b: outs for b, (ins, outs) in ports.items()})

    def _box(self, b):
        if b not in self.box_set:
            raise UnknownIdentifierError('unknown box {!r}'.format(b))

    def _wire(self, w):
        if w not in self.wire_index:
            raise UnknownIdentifierError('unknown wire {!r}'.format(w))

    def inputs(self, b) -> Tuple[str, ...]:
        self._box(b)
        return self.box_inputs.get(b, ())

    def outputs(self, b) -> Tuple[str, ...]:
        self._box(b)
        return self.box_outputs.get(b, ())

    def arity(self, b) -> Tuple[int, int]:
        return len(self.inputs(b)), len(self.outputs(b))

    def ports(self, b) -> Tuple[str, ...]:
        'All wires attached to b, inputs first'
        return self.inputs(b) + self.outputs(b)

    @cached_property
    def wire_index(self) -> Dict[str, int]:
        'Dense integer index of each wire, in declaration order'
        return {w: i for i, w in enumerate(self.wires)}

    @cached_property
    def box_set(self) -> FrozenSet[str]:
        return frozenset(self.boxes)

    @cached_property
    def producers(self) -> Dict[str, Tuple[Tuple[str, int], ...]]:
        'wire -> ((box, output port), ...)'
        acc = {w: [] for w in self.wires}
        for b in self.boxes:
            for j, w in enumerate(self.box_outputs.get(b, ())):
                acc.setdefault(w, []).append((b, j))
        return {w: tuple(v) for w, v in acc.items()}

    @cached_property
    def consumers(self) -> Dict[str, Tuple[Tuple[str, int], ...]]:
        'wire -> ((box, input port), ...)'
        acc = {w: [] for w in self.wires}
        for b in self.boxes:
            for i, w in enumerate(self.box_inputs.get(b, ())):
                acc.setdefault(w, []).append((b, i))
        return {w: tuple(v) for w, v in acc.items()}

    def relabel(self, wire_map, box_map):
        """Rename wires and boxes; identifiers missing from the maps are kept."""
        wm = lambda w: wire_map.get(w, w)
        bm = lambda b: box_map.get(b, b)
        return Hypergraph(tuple(wm(w) for w in self.wires),
                          tuple(bm(b) for b in self.boxes),
                          {bm(b): tuple(wm(w) for w in p) for b, p in self.box_inputs.items()},
                          {bm(b): tuple(wm(w) for w in p) for b, p in self.box_outputs.items()})


@dataclass(frozen=True)
class HypergraphMorphism:
    wire_map: Mapping[str, str] = field(default_factory=dict)
    box_map: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'wire_map', dict(self.wire_map))
        object.__setattr__(self, 'box_map', dict(self.box_map))


def validate_hypergraph(g: Hypergraph) -> List[Violation]:
    """
    List every broken Hypergraph invariant. Total: malformed input is
    reported, never raised.
    """
    out = []
    for w, n in Counter(g.wires).items():
        if n > 1:
            out.append(Violation('duplicate-wire', w, 'declared {} times'.format(n)))
    for b, n in Counter(g.boxes).items():
        if n > 1:
            out.append(Violation('duplicate-box', b, 'declared {} times'.format(n)))
    declared = set(g.boxes)
    wires = set(g.wires)
    for name, ports in (('inputs', g.box_inputs), ('outputs', g.box_outputs)):
        for b in ports:
            if b not in declared:
                out.append(Violation('unknown-box', b, 'has {} but is not declared'.format(name)))
        for b in g.boxes:
            if b not in ports:
                out.append(Violation('missing-ports', b, 'no {} list'.format(name)))
                continue
            for i, w in enumerate(ports[b]):
                if w not in wires:
                    out.append(Violation('dangling-wire', w, '{} {}[{}]'.format(b, name, i)))
    return out


def validate_morphism(m: HypergraphMorphism, src: Hypergraph, dst: Hypergraph) -> List[Violation]:
    """
    List the failures of m: src -> dst to be a hypergraph morphism: every
    wire and box mapped into dst, arities kept, and both naturality squares
    commuting at every port.
    """
    out = []
    dst_wires = set(dst.wires)
    for w in src.wires:
        if w not in m.wire_map:
            out.append(Violation('unmapped-wire', w))
        elif m.wire_map[w] not in dst_wires:
            out.append(Violation('bad-wire-image', w, 'maps to unknown {!r}'.format(m.wire_map[w])))
    for b in src.boxes:
        if b not in m.box_map:
            out.append(Violation('unmapped-box', b))
            continue
        t = m.box_map[b]
        if t not in dst.box_set:
            out.append(Violation('bad-box-image', b, 'maps to unknown {!r}'.format(t)))
            continue
        src_in, src_out = src.box_inputs.get(b, ()), src.box_outputs.get(b, ())
        dst_in, dst_out = dst.box_inputs.get(t, ()), dst.box_outputs.get(t, ())
        if (len(src_in), len(src_out)) != (len(dst_in), len(dst_out)):
            out.append(Violation('arity-mismatch', b, '({},{}) box sent to ({},{}) box {!r}'.format(
                len(src_in), len(src_out), len(dst_in), len(dst_out), t)))
            continue
        for role, sp, dp in (('input', src_in, dst_in), ('output', src_out, dst_out)):
            for i, (w, v) in enumerate(zip(sp, dp)):
                if w in m.wire_map and m.wire_map[w] != v:
                    out.append(Violation('naturality-' + role, b,
                                         'port {}: {!r} maps to {!r}, expected {!r}'.format(
                                             i, w, m.wire_map[w], v)))
    return out


def identity_morphism(g: Hypergraph) -> HypergraphMorphism:
    return HypergraphMorphism({w: w for w in g.wires}, {b: b for b in g.boxes})


def compose_morphisms(second: HypergraphMorphism, first: HypergraphMorphism) -> HypergraphMorphism:
    'second after first'
    return HypergraphMorphism({w: second.wire_map[v] for w, v in first.wire_map.items()},
                              {b: second.box_map[c] for b, c in first.box_map.items()})


def in_count(g: Hypergraph, b, w) -> int:
    g._wire(w)
    return g.inputs(b).count(w)


def out_count(g: Hypergraph, b, w) -> int:
    g._wire(w)
    return g.outputs(b).count(w)


def in_set(g: Hypergraph, b) -> FrozenSet[str]:
    return frozenset(g.inputs(b))


def out_set(g: Hypergraph, b) -> FrozenSet[str]:
    return frozenset(g.outputs(b))


def wire_digraph(g: Hypergraph) -> nx.DiGraph:
    """
    The wire-level relation: an edge A -> B whenever some box has A among
    its inputs and B among its outputs. Every wire is a node.
    """
    dg = nx.DiGraph()
    dg.add_nodes_from(g.wires)
    for b in g.boxes:
        for a in set(g.box_inputs.get(b, ())):
            for c in set(g.box_outputs.get(b, ())):
                dg.add_edge(a, c)
    return dg

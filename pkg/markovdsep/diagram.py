"""
gs-monoidal string diagrams: hypergraphs typed over a signature, anchored by
an ordered input leg and an ordered output leg.

Copying is a wire listed several times in the outputs, discarding is a wire
absent from them and swapping is a permutation of the legs, so none of the
three needs a box.
"""

import hashlib
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
from networkx.utils import UnionFind

from .errors import InterfaceMismatchError, ModelShapeError, UnknownIdentifierError
from .hypergraph import (Hypergraph, HypergraphMorphism, Violation, identity_morphism,
                         validate_hypergraph, validate_morphism, wire_digraph)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Signature:
    """Generating types (the wires of graph) and box types (its boxes)."""
    graph: Hypergraph

    @classmethod
    def from_ports(cls, types, box_types):
        'box_types: dict name -> (input types, output types)'
        return cls(Hypergraph.from_ports(types, box_types))

    @classmethod
    def of_graph(cls, g: Hypergraph):
        'The signature Sigma = G, each wire its own type and each box its own box type'
        return cls(g)

    @property
    def types(self):
        return self.graph.wires

    @property
    def box_types(self):
        return self.graph.boxes

    def check_type(self, t):
        if t not in self.graph.wire_index:
            raise UnknownIdentifierError('unknown type {!r}'.format(t))
        return t

    @property
    def key(self):
        'Declaration order of types and box types does not matter'
        g = self.graph
        return (frozenset(g.wires),
                frozenset((b, g.box_inputs.get(b, ()), g.box_outputs.get(b, ())) for b in g.boxes))

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)


@dataclass(frozen=True)
class StringDiagram:
    signature: Signature
    body: Hypergraph
    typing: HypergraphMorphism
    inputs: Tuple[str, ...] = ()
    outputs: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'inputs', tuple(self.inputs))
        object.__setattr__(self, 'outputs', tuple(self.outputs))

    def wire_type(self, w):
        try:
            return self.typing.wire_map[w]
        except KeyError:
            raise UnknownIdentifierError('unknown wire {!r}'.format(w)) from None

    def box_type(self, b):
        try:
            return self.typing.box_map[b]
        except KeyError:
            raise UnknownIdentifierError('unknown box {!r}'.format(b)) from None

    @property
    def domain(self) -> Tuple[str, ...]:
        return tuple(self.wire_type(w) for w in self.inputs)

    @property
    def codomain(self) -> Tuple[str, ...]:
        return tuple(self.wire_type(w) for w in self.outputs)

    @cached_property
    def wire_graph(self) -> nx.DiGraph:
        return wire_digraph(self.body)

    def replace_legs(self, inputs=None, outputs=None):
        'Same body and typing, different interface'
        return StringDiagram(self.signature, self.body, self.typing,
                             self.inputs if inputs is None else inputs,
                             self.outputs if outputs is None else outputs)


class CausalModel(StringDiagram):
    """
    A normalized string diagram whose output leg is injective.
    Construction raises ModelShapeError when either condition fails.
    """

    def __post_init__(self):
        super().__post_init__()
        problems = validate_causal_model(self)
        if problems:
            raise ModelShapeError('not a causal model: ' + '; '.join(str(v) for v in problems))

    @classmethod
    def from_diagram(cls, d: StringDiagram):
        return cls(d.signature, d.body, d.typing, d.inputs, d.outputs)

    @property
    def is_pure_bloom(self) -> bool:
        return set(self.outputs) == set(self.body.wires)

    @cached_property
    def ancestor_map(self) -> Dict[str, FrozenSet[str]]:
        g = self.wire_graph
        return {w: frozenset(nx.ancestors(g, w)) | {w} for w in self.body.wires}

    @cached_property
    def descendant_map(self) -> Dict[str, FrozenSet[str]]:
        g = self.wire_graph
        return {w: frozenset(nx.descendants(g, w)) | {w} for w in self.body.wires}


def make_diagram(signature: Signature, wires, boxes, inputs=(), outputs=()) -> StringDiagram:
    """
    Purpose:

        Assemble a StringDiagram from plain data.

    Input:

        signature: Signature the diagram is typed over
        wires: dict wire -> type
        boxes: dict box -> (box type, input wires, output wires)
        inputs, outputs: the interface legs

    Output:

        StringDiagram (not validated, see validate_diagram)
    """
    body = Hypergraph.from_ports(tuple(wires), {b: (ins, outs) for b, (_, ins, outs) in boxes.items()})
    typing = HypergraphMorphism(dict(wires), {b: t for b, (t, _, _) in boxes.items()})
    return StringDiagram(signature, body, typing, tuple(inputs), tuple(outputs))


def diagram_of_graph(g: Hypergraph, inputs=(), outputs=()) -> StringDiagram:
    'A diagram over its own body as signature, typed by the identity'
    return StringDiagram(Signature.of_graph(g), g, identity_morphism(g), inputs, outputs)


def check_acyclic(d: StringDiagram) -> bool:
    return nx.is_directed_acyclic_graph(d.wire_graph)


def _production_counts(d: StringDiagram) -> Counter:
    counts = Counter(d.inputs)
    for b in d.body.boxes:
        counts.update(d.body.box_outputs.get(b, ()))
    return counts


def check_left_monogamous(d: StringDiagram) -> bool:
    return all(n <= 1 for n in _production_counts(d).values())


def validate_diagram(d: StringDiagram) -> List[Violation]:
    """
    Every StringDiagram invariant: valid signature and body, a typing
    morphism, interface entries naming wires, acyclicity and left monogamy,
    and every wire sourced by the input leg or by a box output.
    """
    out = [Violation('signature-' + v.kind, v.subject, v.detail)
           for v in validate_hypergraph(d.signature.graph)]
    body = validate_hypergraph(d.body)
    out += body
    out += validate_morphism(d.typing, d.body, d.signature.graph)
    wires = set(d.body.wires)
    for leg, name in ((d.inputs, 'inputs'), (d.outputs, 'outputs')):
        for i, w in enumerate(leg):
            if w not in wires:
                out.append(Violation('unknown-interface-wire', w, '{}[{}]'.format(name, i)))
    if body:
        return out
    if not check_acyclic(d):
        cycle = nx.find_cycle(d.wire_graph)
        out.append(Violation('cycle', ' -> '.join([a for a, _ in cycle] + [cycle[0][0]])))
    counts = _production_counts(d)
    for w, n in sorted(counts.items()):
        if n > 1 and w in wires:
            out.append(Violation('not-left-monogamous', w, 'produced {} times'.format(n)))
    for w in d.body.wires:
        if not counts[w]:
            out.append(Violation('sourceless-wire', w, 'neither an input nor a box output'))
    return out


def validate_causal_model(d: StringDiagram) -> List[Violation]:
    'validate_diagram plus the injective output leg and normal form conditions'
    out = validate_diagram(d)
    for w, n in sorted(Counter(d.outputs).items()):
        if n > 1:
            out.append(Violation('output-leg-not-injective', w,
                                 'output leg not injective, listed {} times'.format(n)))
    if not out:
        from .normalize import eliminable_boxes
        for b in sorted(eliminable_boxes(d)):
            out.append(Violation('eliminable-box', b, 'every output is discarded'))
    return out


def _fresh(name, taken):
    new, k = name, 0
    while new in taken:
        k += 1
        new = '{}_{}'.format(name, k)
    taken.add(new)
    return new


def _glue(f: StringDiagram, g: StringDiagram, pairs):
    """
    Pushout of the disjoint union of f and g identifying each (f wire, g wire)
    of pairs. Wires keep f's identifier; g identifiers colliding with f are
    renamed. Returns the new body, typing and the two wire renamings.
    """
    uf = UnionFind()
    for w in f.body.wires:
        uf[('f', w)]
    for w in g.body.wires:
        uf[('g', w)]
    for a, c in pairs:
        uf.union(('f', a), ('g', c))
    leader = {}
    for w in f.body.wires:
        leader.setdefault(uf[('f', w)], w)
    fmap = {w: leader[uf[('f', w)]] for w in f.body.wires}
    taken = set(f.body.wires)
    gmap, fresh_wires = {}, []
    for w in g.body.wires:
        r = uf[('g', w)]
        if r not in leader:
            leader[r] = _fresh(w, taken)
            fresh_wires.append(leader[r])
        gmap[w] = leader[r]
    taken_boxes = set(f.body.boxes)
    bmap = {b: _fresh(b, taken_boxes) for b in g.body.boxes}

    wires = list(dict.fromkeys(fmap[w] for w in f.body.wires)) + fresh_wires
    ports = {b: (tuple(fmap[w] for w in f.body.inputs(b)), tuple(fmap[w] for w in f.body.outputs(b)))
             for b in f.body.boxes}
    for b in g.body.boxes:
        ports[bmap[b]] = (tuple(gmap[w] for w in g.body.inputs(b)),
                          tuple(gmap[w] for w in g.body.outputs(b)))
    wire_types = {fmap[w]: f.wire_type(w) for w in f.body.wires}
    wire_types.update({gmap[w]: g.wire_type(w) for w in g.body.wires})
    box_types = {b: f.box_type(b) for b in f.body.boxes}
    box_types.update({bmap[b]: g.box_type(b) for b in g.body.boxes})
    body = Hypergraph.from_ports(wires, ports)
    return body, HypergraphMorphism(wire_types, box_types), fmap, gmap


def _same_signature(f, g):
    if f.signature != g.signature:
        raise InterfaceMismatchError('diagrams are typed over different signatures')


def compose(f: StringDiagram, g: StringDiagram) -> StringDiagram:
    """
    g after f: output i of f is glued to input i of g. The result is not
    normalized.
    """
    _same_signature(f, g)
    if len(f.outputs) != len(g.inputs):
        raise InterfaceMismatchError('cannot compose: {} outputs against {} inputs'.format(
            len(f.outputs), len(g.inputs)))
    for i, (a, c) in enumerate(zip(f.outputs, g.inputs)):
        if f.wire_type(a) != g.wire_type(c):
            raise InterfaceMismatchError('cannot compose: position {} has type {!r} against {!r}'.format(
                i, f.wire_type(a), g.wire_type(c)))
    body, typing, fmap, gmap = _glue(f, g, list(zip(f.outputs, g.inputs)))
    return StringDiagram(f.signature, body, typing,
                         tuple(fmap[w] for w in f.inputs), tuple(gmap[w] for w in g.outputs))


def tensor(f: StringDiagram, g: StringDiagram) -> StringDiagram:
    'Side by side; legs concatenated f first'
    _same_signature(f, g)
    body, typing, fmap, gmap = _glue(f, g, [])
    return StringDiagram(f.signature, body, typing,
                         tuple(fmap[w] for w in f.inputs) + tuple(gmap[w] for w in g.inputs),
                         tuple(fmap[w] for w in f.outputs) + tuple(gmap[w] for w in g.outputs))


def _type_list(signature, types):
    if isinstance(types, str):
        types = (types,)
    return tuple(signature.check_type(t) for t in types)


def _bare_wires(signature, types):
    types = _type_list(signature, types)
    wires = ['w{}'.format(i) for i in range(len(types))]
    return wires, dict(zip(wires, types))


def box(signature: Signature, b) -> StringDiagram:
    'The one-box diagram of box type b, fresh wires on every port'
    if b not in signature.graph.box_set:
        raise UnknownIdentifierError('unknown box type {!r}'.format(b))
    ins = ['{}.in{}'.format(b, i) for i in range(len(signature.graph.inputs(b)))]
    outs = ['{}.out{}'.format(b, j) for j in range(len(signature.graph.outputs(b)))]
    wires = dict(zip(ins, signature.graph.inputs(b)))
    wires.update(zip(outs, signature.graph.outputs(b)))
    return make_diagram(signature, wires, {b: (b, ins, outs)}, ins, outs)


def identity(signature: Signature, types=()) -> StringDiagram:
    'Bare wires passed through; the empty type list gives the empty diagram'
    wires, typed = _bare_wires(signature, types)
    return make_diagram(signature, typed, {}, wires, wires)


def copy(signature: Signature, types) -> StringDiagram:
    wires, typed = _bare_wires(signature, types)
    return make_diagram(signature, typed, {}, wires, wires + wires)


def discard(signature: Signature, types) -> StringDiagram:
    wires, typed = _bare_wires(signature, types)
    return make_diagram(signature, typed, {}, wires, [])


def swap(signature: Signature, first, second) -> StringDiagram:
    'Crossing of the wires of first over those of second'
    first, second = _type_list(signature, first), _type_list(signature, second)
    wires, typed = _bare_wires(signature, first + second)
    n = len(first)
    return make_diagram(signature, typed, {}, wires, wires[n:] + wires[:n])


def generators(signature: Signature) -> Dict[str, Dict]:
    """
    All single generators of the free category over signature:
    'box' by box type, 'id', 'copy', 'del' by type and 'swap' by pair of types.
    """
    types = signature.types
    return {'box': {b: box(signature, b) for b in signature.box_types},
            'id': {t: identity(signature, t) for t in types},
            'copy': {t: copy(signature, t) for t in types},
            'del': {t: discard(signature, t) for t in types},
            'swap': {(s, t): swap(signature, s, t) for s in types for t in types}}


def _digest(obj):
    return hashlib.sha1(repr(obj).encode('utf-8')).hexdigest()


def canonical_hash(d: StringDiagram, rounds=3) -> str:
    """
    Colour refinement digest, equal on isomorphic diagrams. Wires start
    coloured by type and interface positions, boxes by box type.
    """
    body = d.body
    wcol = {w: _digest((d.wire_type(w),
                        tuple(i for i, v in enumerate(d.inputs) if v == w),
                        tuple(j for j, v in enumerate(d.outputs) if v == w)))
            for w in body.wires}
    bcol = {b: _digest(d.box_type(b)) for b in body.boxes}
    for _ in range(rounds):
        bcol = {b: _digest((bcol[b], tuple(wcol[w] for w in body.inputs(b)),
                            tuple(wcol[w] for w in body.outputs(b))))
                for b in body.boxes}
        wcol = {w: _digest((wcol[w], tuple(sorted(
                    [(bcol[b], 'o', j) for b, j in body.producers[w]] +
                    [(bcol[b], 'i', i) for b, i in body.consumers[w]]))))
                for w in body.wires}
    return _digest((len(d.inputs), len(d.outputs),
                    tuple(sorted(wcol.values())), tuple(sorted(bcol.values()))))


def find_isomorphism(f: StringDiagram, g: StringDiagram) -> Optional[Tuple[Dict, Dict]]:
    """
    Purpose:

        Search for a typing preserving isomorphism f -> g that commutes with
        both legs. Interface wires are pinned first, then boxes are matched
        one at a time, preferring the box with most already-bound ports.

    Output:

        (wire_map, box_map) or None
    """
    if f.signature != g.signature:
        return None
    fb, gb = f.body, g.body
    if (len(fb.wires), len(fb.boxes), len(f.inputs), len(f.outputs)) != \
            (len(gb.wires), len(gb.boxes), len(g.inputs), len(g.outputs)):
        return None
    if canonical_hash(f) != canonical_hash(g):
        return None

    wmap, winv, bmap, binv = {}, {}, {}, {}

    def bind(a, c, trail):
        if a in wmap:
            return wmap[a] == c
        if c in winv or f.wire_type(a) != g.wire_type(c):
            return False
        wmap[a] = c
        winv[c] = a
        trail.append(a)
        return True

    def undo(trail):
        for a in trail:
            del winv[wmap.pop(a)]

    for a, c in zip(f.inputs + f.outputs, g.inputs + g.outputs):
        if not bind(a, c, []):
            return None

    kind = lambda d, b: (d.box_type(b), d.body.arity(b))
    by_kind = defaultdict(list)
    for c in gb.boxes:
        by_kind[kind(g, c)].append(c)

    def candidates(a):
        for attached, ports in ((gb.consumers, fb.inputs(a)), (gb.producers, fb.outputs(a))):
            for idx, w in enumerate(ports):
                if w in wmap:
                    return [c for c, k in attached[wmap[w]] if k == idx]
        return by_kind[kind(f, a)]

    def match_loose_wires():
        fl = [w for w in fb.wires if w not in wmap]
        gl = [w for w in gb.wires if w not in winv]
        if Counter(f.wire_type(w) for w in fl) != Counter(g.wire_type(w) for w in gl):
            return False
        pool = defaultdict(list)
        for w in gl:
            pool[g.wire_type(w)].append(w)
        for w in fl:
            wmap[w] = pool[f.wire_type(w)].pop(0)
        return True

    def search(remaining):
        if not remaining:
            return match_loose_wires()
        a = max(remaining, key=lambda x: sum(w in wmap for w in fb.ports(x)))
        rest = [x for x in remaining if x != a]
        for c in candidates(a):
            if c in binv or kind(g, c) != kind(f, a):
                continue
            trail = []
            if all(bind(u, v, trail) for u, v in zip(fb.ports(a), gb.ports(c))):
                bmap[a] = c
                binv[c] = a
                if search(rest):
                    return True
                del binv[bmap.pop(a)]
            undo(trail)
        return False

    if search(list(fb.boxes)):
        return dict(wmap), dict(bmap)
    return None


def iso_equal(f: StringDiagram, g: StringDiagram) -> bool:
    'Equality of the morphisms of the free category represented by f and g'
    return find_isomorphism(f, g) is not None

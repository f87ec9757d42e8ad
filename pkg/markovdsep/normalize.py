# coding: utf-8

def __init__():
    """
    Name:

        normalize

    Purpose:

        Quotient string diagrams down to the free Markov category and derive
        the causal model views used by the separation and Markov checks.
        Contains the following functions:
            - eliminable_boxes: boxes all of whose outputs are discarded
            - normalize: remove eliminable boxes until none is left
            - marginalize: discard outputs, then normalize
            - ancestors / descendants / ancestry: closures of the wire relation
            - pure_bloom_version: make every wire an output
            - final_boxes: boxes whose outputs feed no other box

    Dependencies:

        - networkx (through the cached wire graph of the diagram)
        - numpy (random elimination orders)
    """
    pass


import logging
from collections import Counter
from dataclasses import dataclass
from typing import FrozenSet

from .diagram import CausalModel, StringDiagram
from .errors import InvalidQueryError, NotPureBloomError, UnknownIdentifierError
from .hypergraph import Hypergraph, HypergraphMorphism

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AncestrySets:
    wires: FrozenSet[str]
    ancestors: FrozenSet[str]
    descendants: FrozenSet[str]


def eliminable_boxes(d: StringDiagram) -> FrozenSet[str]:
    """
    Boxes none of whose output wires is a global output or the input of
    any box.
    """
    body = d.body
    used = set(d.outputs)
    for b in body.boxes:
        used.update(body.box_inputs.get(b, ()))
    return frozenset(b for b in body.boxes
                     if not any(w in used for w in body.box_outputs.get(b, ())))


def normalize(d: StringDiagram, rng=None) -> StringDiagram:
    """
    Purpose:

        Remove eliminable boxes until none is left. A worklist follows the
        boxes that feed an eliminated box, so every box is examined a bounded
        number of times. Output wires of eliminated boxes are deleted with
        them.

    Input:

        d: valid StringDiagram
        rng: optional numpy Generator; when given the next box is drawn at
             random from the eliminable frontier instead of in declaration order

    Output:

        normalized StringDiagram over the same signature with the same legs
    """
    body = d.body
    out_leg = set(d.outputs)
    consumers = Counter()
    for b in body.boxes:
        consumers.update(body.box_inputs.get(b, ()))
    producer = {w: b for b in body.boxes for w in body.box_outputs.get(b, ())}
    alive = set(body.boxes)

    def eliminable(b):
        return all(consumers[w] == 0 and w not in out_leg for w in body.box_outputs.get(b, ()))

    frontier = [b for b in body.boxes if eliminable(b)]
    removed = []
    while frontier:
        b = frontier.pop(int(rng.integers(len(frontier))) if rng is not None else 0)
        alive.discard(b)
        removed.append(b)
        for w in body.box_inputs.get(b, ()):
            consumers[w] -= 1
        for w in dict.fromkeys(body.box_inputs.get(b, ())):
            p = producer.get(w)
            if p in alive and p not in frontier and eliminable(p):
                frontier.append(p)
    if not removed:
        return d
    log.debug('normalize eliminated boxes %s', removed)

    dead = {w for b in removed for w in body.box_outputs.get(b, ())}
    boxes = [b for b in body.boxes if b in alive]
    wires = [w for w in body.wires if w not in dead]
    new_body = Hypergraph(wires, boxes,
                          {b: body.box_inputs.get(b, ()) for b in boxes},
                          {b: body.box_outputs.get(b, ()) for b in boxes})
    typing = HypergraphMorphism({w: d.typing.wire_map[w] for w in wires},
                                {b: d.typing.box_map[b] for b in boxes})
    return StringDiagram(d.signature, new_body, typing, d.inputs, d.outputs)


def as_causal_model(d: StringDiagram) -> CausalModel:
    if isinstance(d, CausalModel):
        return d
    return CausalModel.from_diagram(d)


def marginalize(phi: StringDiagram, keep) -> CausalModel:
    """
    The marginal of phi on the output wires keep: other outputs are
    discarded and the result normalized. The input leg is left as it is.
    """
    keep = set(keep)
    missing = keep - set(phi.outputs)
    if missing:
        raise InvalidQueryError('cannot marginalize to non-output wires: {}'.format(
            ', '.join(sorted(missing))))
    d = phi.replace_legs(outputs=tuple(w for w in phi.outputs if w in keep))
    return as_causal_model(normalize(d))


def _check_wires(phi, xs):
    xs = frozenset(xs)
    unknown = xs - set(phi.body.wires)
    if unknown:
        raise UnknownIdentifierError('unknown wires: {}'.format(', '.join(sorted(unknown))))
    return xs


def _closure(phi, xs, which):
    xs = _check_wires(phi, xs)
    if isinstance(phi, CausalModel):
        table = phi.ancestor_map if which == 'up' else phi.descendant_map
        return frozenset().union(*(table[x] for x in xs))
    import networkx as nx
    step = nx.ancestors if which == 'up' else nx.descendants
    return frozenset(xs).union(*(step(phi.wire_graph, x) for x in xs))


def ancestors(phi: StringDiagram, xs) -> FrozenSet[str]:
    'An(X): wires with a directed path into X, X included'
    return _closure(phi, xs, 'up')


def descendants(phi: StringDiagram, xs) -> FrozenSet[str]:
    'Dec(X): wires reached by a directed path from X, X included'
    return _closure(phi, xs, 'down')


def ancestry(phi: StringDiagram, xs) -> AncestrySets:
    xs = _check_wires(phi, xs)
    return AncestrySets(xs, ancestors(phi, xs), descendants(phi, xs))


def pure_bloom_version(phi: CausalModel) -> CausalModel:
    """
    Make every wire an output. Original outputs keep their positions, the
    latent wires are appended in lexicographic order.
    """
    listed = set(phi.outputs)
    extra = tuple(sorted(w for w in phi.body.wires if w not in listed))
    return as_causal_model(phi.replace_legs(outputs=phi.outputs + extra))


def final_boxes(phi: CausalModel) -> FrozenSet[str]:
    'Boxes whose outputs feed no box; needs a pure bloom'
    phi = as_causal_model(phi)
    if not phi.is_pure_bloom:
        latent = sorted(set(phi.body.wires) - set(phi.outputs))
        raise NotPureBloomError('final boxes need a pure bloom; latent wires: ' + ', '.join(latent))
    body = phi.body
    fed = {w for b in body.boxes for w in body.box_inputs.get(b, ())}
    return frozenset(b for b in body.boxes if not fed.intersection(body.box_outputs.get(b, ())))

import pytest
from hypothesis import given, settings

from markovdsep.catalog import figure_signature, figure_valid_diagram
from markovdsep.errors import UnknownIdentifierError
from markovdsep.hypergraph import (Hypergraph, HypergraphMorphism, compose_morphisms, identity_morphism,
                                   in_count, in_set, out_count, out_set, validate_hypergraph,
                                   validate_morphism, wire_digraph)

from .strategies import diagrams, rngs


def kinds(violations):
    return [v.kind for v in violations]


def test_well_formed_box():
    g = Hypergraph.from_ports(('A', 'B'), {'f': (('A',), ('B',))})
    assert validate_hypergraph(g) == []


def test_dangling_wire_is_reported():
    g = Hypergraph.from_ports(('A',), {'f': (('A',), ('w',))})
    problems = validate_hypergraph(g)
    assert kinds(problems) == ['dangling-wire']
    assert problems[0].subject == 'w'


def test_duplicates_and_missing_ports():
    g = Hypergraph(('A', 'A'), ('f', 'f'), {'f': ('A',)}, {})
    assert sorted(kinds(validate_hypergraph(g))) == ['duplicate-box', 'duplicate-wire', 'missing-ports', 'missing-ports']


def test_validate_is_total_on_odd_data():
    g = Hypergraph((), (), {'ghost': ('x',)}, {'ghost': ()})
    assert set(kinds(validate_hypergraph(g))) == {'unknown-box'}


def test_figure_signature_is_valid_with_isolated_wire():
    sig = figure_signature()
    assert validate_hypergraph(sig.graph) == []
    assert 'E' in sig.types
    assert wire_digraph(sig.graph).degree('E') == 0


def test_identity_morphism_is_valid():
    g = figure_signature().graph
    assert validate_morphism(identity_morphism(g), g, g) == []


def test_arity_mismatch():
    src = Hypergraph.from_ports(('A', 'B', 'C'), {'f': (('A',), ('B', 'C'))})
    dst = Hypergraph.from_ports(('X', 'Y', 'Z'), {'g': (('X', 'Y'), ('Z',))})
    m = HypergraphMorphism({'A': 'X', 'B': 'Y', 'C': 'Z'}, {'f': 'g'})
    assert kinds(validate_morphism(m, src, dst)) == ['arity-mismatch']


def test_naturality_failure_names_port():
    src = Hypergraph.from_ports(('A', 'B'), {'f': (('A',), ('B',))})
    dst = Hypergraph.from_ports(('X', 'Y'), {'g': (('X',), ('Y',))})
    m = HypergraphMorphism({'A': 'Y', 'B': 'Y'}, {'f': 'g'})
    problems = validate_morphism(m, src, dst)
    assert kinds(problems) == ['naturality-input']
    assert 'port 0' in problems[0].detail


def test_unmapped_entries():
    src = Hypergraph.from_ports(('A',), {'f': ((), ('A',))})
    dst = Hypergraph.from_ports(('X',), {'g': ((), ('X',))})
    assert set(kinds(validate_morphism(HypergraphMorphism({}, {}), src, dst))) == {'unmapped-wire', 'unmapped-box'}
    assert 'bad-wire-image' in kinds(validate_morphism(HypergraphMorphism({'A': 'Q'}, {'f': 'g'}), src, dst))


def test_figure_typing_map_is_a_morphism():
    d = figure_valid_diagram()
    assert validate_morphism(d.typing, d.body, d.signature.graph) == []


def test_counts_on_repeated_output():
    g = figure_signature().graph
    assert out_count(g, 'f', 'A') == 2
    assert out_set(g, 'f') == {'A'}
    assert in_count(g, 'f', 'C') == 0
    assert in_count(g, 'h', 'A') == 1
    assert in_set(g, 'h') == {'A', 'C'}


def test_counts_reject_unknown_identifiers():
    g = figure_signature().graph
    with pytest.raises(UnknownIdentifierError):
        in_count(g, 'nope', 'A')
    with pytest.raises(UnknownIdentifierError):
        out_count(g, 'f', 'nope')


@given(diagrams())
def test_counts_match_port_scan(d):
    g = d.body
    for b in g.boxes:
        assert len(in_set(g, b)) <= len(g.inputs(b))
        assert len(out_set(g, b)) <= len(g.outputs(b))
        for w in g.wires:
            assert in_count(g, b, w) == sum(1 for v in g.box_inputs[b] if v == w)
            assert out_count(g, b, w) == sum(1 for v in g.box_outputs[b] if v == w)


@settings(max_examples=50)
@given(rngs())
def test_morphism_composition_is_valid(rng):
    # G -> G' (renaming) -> signature of G (typing back)
    g = Hypergraph.from_ports(('A', 'B', 'C'), {'f': (('A',), ('B', 'B')), 'h': (('B', 'A'), ('C',))})
    perm = ['P', 'Q', 'R']
    order = list(rng.permutation(3))
    names = {w: perm[i] for w, i in zip(g.wires, order)}
    renamed = g.relabel(names, {'f': 'f2', 'h': 'h2'})
    first = HypergraphMorphism(names, {'f': 'f2', 'h': 'h2'})
    back = HypergraphMorphism({v: w for w, v in names.items()}, {'f2': 'f', 'h2': 'h'})
    assert validate_morphism(first, g, renamed) == []
    assert validate_morphism(back, renamed, g) == []
    both = compose_morphisms(back, first)
    assert validate_morphism(both, g, g) == []
    assert both.wire_map == identity_morphism(g).wire_map

"""
Worked example models.

All models except the Figure-1 family are typed over themselves (every wire
its own type, every box its own box type), so interpretations can be
written per wire and per box.
"""

from .diagram import CausalModel, Signature, StringDiagram, diagram_of_graph, make_diagram
from .hypergraph import Hypergraph
from .normalize import as_causal_model


def model_from_boxes(boxes, outputs, inputs=()) -> StringDiagram:
    """
    Diagram over its own signature from boxes {name: (input wires, output
    wires)}. Wires are taken in order of first appearance (inputs first).
    """
    wires = list(inputs)
    for ins, outs in boxes.values():
        wires.extend(ins)
        wires.extend(outs)
    wires.extend(outputs)
    g = Hypergraph.from_ports(tuple(dict.fromkeys(wires)), boxes)
    return diagram_of_graph(g, tuple(inputs), tuple(outputs))


def figure_signature() -> Signature:
    'Types A to E (E unused by any box) and box types f, g, h, m, n'
    return Signature.from_ports(('A', 'B', 'C', 'D', 'E'), {
        'f': (('B',), ('A', 'A')),
        'g': (('A',), ('C',)),
        'h': (('A', 'C'), ('D',)),
        'm': ((), ('B',)),
        'n': (('D',), ('B',)),
    })


def figure_valid_diagram() -> StringDiagram:
    sig = figure_signature()
    wires = {'B1': 'B', 'A1': 'A', 'A2': 'A', 'C1': 'C', 'D1': 'D'}
    boxes = {'m1': ('m', (), ('B1',)),
             'f1': ('f', ('B1',), ('A1', 'A2')),
             'g1': ('g', ('A1',), ('C1',)),
             'h1': ('h', ('A2', 'C1'), ('D1',))}
    return make_diagram(sig, wires, boxes, (), ('D1',))


def figure_merging_diagram() -> StringDiagram:
    'A2 is produced by both f1 and f2'
    sig = figure_signature()
    wires = {'B1': 'B', 'B2': 'B', 'A1': 'A', 'A2': 'A', 'A3': 'A'}
    boxes = {'m1': ('m', (), ('B1',)),
             'm2': ('m', (), ('B2',)),
             'f1': ('f', ('B1',), ('A1', 'A2')),
             'f2': ('f', ('B2',), ('A2', 'A3'))}
    return make_diagram(sig, wires, boxes, (), ('A1', 'A2', 'A3'))


def figure_cyclic_diagram() -> StringDiagram:
    sig = figure_signature()
    wires = {'B1': 'B', 'A1': 'A', 'A2': 'A', 'C1': 'C', 'D1': 'D'}
    boxes = {'f1': ('f', ('B1',), ('A1', 'A2')),
             'g1': ('g', ('A1',), ('C1',)),
             'h1': ('h', ('A2', 'C1'), ('D1',)),
             'n1': ('n', ('D1',), ('B1',))}
    return make_diagram(sig, wires, boxes, (), ('D1',))


def fork() -> CausalModel:
    return as_causal_model(model_from_boxes(
        {'z': ((), ('Z',)), 'x': (('Z',), ('X',)), 'y': (('Z',), ('Y',))}, ('X', 'Z', 'Y')))


def chain() -> CausalModel:
    return as_causal_model(model_from_boxes(
        {'x': ((), ('X',)), 'z': (('X',), ('Z',)), 'y': (('Z',), ('Y',))}, ('X', 'Z', 'Y')))


def collider() -> CausalModel:
    'X -> W <- Y with a descendant Z of W'
    return as_causal_model(model_from_boxes(
        {'fx': ((), ('X',)), 'fy': ((), ('Y',)), 'c': (('X', 'Y'), ('W',)), 'b': (('W',), ('Z',))},
        ('X', 'Y', 'W', 'Z')))


def normalization_example() -> StringDiagram:
    'The collider with only X and Y observed; normalizing removes b and then c'
    return model_from_boxes(
        {'fx': ((), ('X',)), 'fy': ((), ('Y',)), 'c': (('X', 'Y'), ('W',)), 'b': (('W',), ('Z',))},
        ('X', 'Y'))


def marginal_fork() -> CausalModel:
    'A common cause z with two outputs, one of them only seen through w'
    return as_causal_model(model_from_boxes(
        {'z': ((), ('Z', 'W')), 'x': (('Z',), ('X',)), 'y': (('Z',), ('Y',)), 'w': (('W',), ('V',))},
        ('X', 'Y', 'Z', 'V')))


def diamond() -> CausalModel:
    'Z -> X, Z -> Y, X -> W <- Y'
    return as_causal_model(model_from_boxes(
        {'z': ((), ('Z',)), 'x': (('Z',), ('X',)), 'y': (('Z',), ('Y',)), 'w': (('X', 'Y'), ('W',))},
        ('W', 'X', 'Y', 'Z')))


def instrumental() -> CausalModel:
    'Instrument X, treatment A, outcome B, observed common cause L'
    return as_causal_model(model_from_boxes(
        {'ox': ((), ('X',)), 'ol': ((), ('L',)), 'a': (('X', 'L'), ('A',)), 'b': (('A', 'L'), ('B',))},
        ('X', 'A', 'B', 'L')))


def bell() -> CausalModel:
    'Settings S, T as global inputs, outcomes A, B sharing the latent L'
    return as_causal_model(model_from_boxes(
        {'lam': ((), ('L',)), 'a': (('S', 'L'), ('A',)), 'b': (('T', 'L'), ('B',))},
        ('A', 'B'), inputs=('S', 'T')))


def two_output() -> CausalModel:
    'One box r with outputs Z1, Z2 feeding f and g'
    return as_causal_model(model_from_boxes(
        {'r': ((), ('Z1', 'Z2')), 'f': (('Z1',), ('X',)), 'g': (('Z2',), ('Y',))},
        ('X', 'Z1', 'Z2', 'Y')))


def non_causal() -> StringDiagram:
    'A state whose output is listed twice, a diagram but not a causal model'
    return model_from_boxes({'g': ((), ('V',))}, ('V', 'V'))


def copy_model() -> CausalModel:
    'X -> Y with both wires observed'
    return as_causal_model(model_from_boxes({'x': ((), ('X',)), 'y': (('X',), ('Y',))}, ('X', 'Y')))


CATALOG = {
    'fork': fork,
    'chain': chain,
    'collider': collider,
    'marginal-fork': marginal_fork,
    'diamond': diamond,
    'instrumental': instrumental,
    'bell': bell,
    'two-output': two_output,
    'copy': copy_model,
}

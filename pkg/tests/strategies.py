"""
Random models and interpretations for the property tests.

Hypothesis draws a seed; the structures are then built from a numpy
Generator so the shrinker works on a single integer.
"""

import numpy as np
from hypothesis import strategies as st
from hypothesis.strategies import DrawFn, composite

from markovdsep import finstoch, gauss
from markovdsep.catalog import model_from_boxes
from markovdsep.diagram import Signature, make_diagram
from markovdsep.markov import Interpretation
from markovdsep.normalize import as_causal_model, normalize


def random_dag_model(rng, max_wires=8):
    """
    Pure bloom without inputs whose boxes have one output each: a DAG on
    wires V0.. with box bi producing Vi from a random set of earlier wires.
    """
    n = int(rng.integers(1, max_wires + 1))
    wires = ['V{}'.format(i) for i in range(n)]
    boxes = {}
    for i in range(n):
        parents = tuple(w for w in wires[:i] if rng.random() < 0.4)
        boxes['b{}'.format(i)] = (parents, (wires[i],))
    outputs = [wires[i] for i in rng.permutation(n)]
    return as_causal_model(model_from_boxes(boxes, outputs))


def random_diagram(rng, max_boxes=6, max_inputs=2, repeat=True):
    """
    A left monogamous acyclic diagram: boxes read (possibly repeated) earlier
    wires and produce 0 to 2 fresh ones; the output leg is a random selection
    of wires, with repeats when repeat is set.
    """
    inputs = ['I{}'.format(i) for i in range(int(rng.integers(0, max_inputs + 1)))]
    wires = list(inputs)
    boxes = {}
    for k in range(int(rng.integers(0, max_boxes + 1))):
        ins = []
        if wires:
            n_in = int(rng.integers(0, min(3, len(wires)) + 1))
            ins = [wires[i] for i in rng.choice(len(wires), size=n_in, replace=bool(repeat and rng.random() < 0.2))]
        n_out = int(rng.choice([0, 1, 1, 1, 2]))
        outs = ['W{}_{}'.format(k, j) for j in range(n_out)]
        boxes['b{}'.format(k)] = (tuple(ins), tuple(outs))
        wires.extend(outs)
    if wires:
        n = int(rng.integers(0, len(wires) + 1))
        outputs = [wires[i] for i in rng.choice(len(wires), size=n, replace=bool(repeat))]
    else:
        outputs = []
    return model_from_boxes(boxes, outputs, inputs)


def random_causal_model(rng, max_boxes=5, max_inputs=2, inputs_observed=True, latent=True):
    """
    A causal model with multi-output boxes, global inputs and latent wires.
    With inputs_observed the inputs are also outputs, so the model has
    implied conditional independences to test.
    """
    d = random_diagram(rng, max_boxes, max_inputs, repeat=False)
    wires = list(d.body.wires)
    keep = [w for w in wires if not latent or rng.random() < 0.7]
    if inputs_observed:
        keep = list(dict.fromkeys(list(d.inputs) + keep))
    outputs = [keep[i] for i in rng.permutation(len(keep))]
    return as_causal_model(normalize(d.replace_legs(outputs=tuple(outputs))))


def single_type_signature(max_arity=2):
    'One wire type A; box type k<i><o> takes i wires to o wires'
    return Signature.from_ports(('A',), {'k{}{}'.format(i, o): (('A',) * i, ('A',) * o)
                                         for i in range(max_arity + 1) for o in range(max_arity + 1)})


def random_typed_diagram(rng, sig, n_in, n_out, max_boxes=3):
    """
    A diagram over single_type_signature with n_in inputs and n_out outputs.
    All wires share one type, so only the connectivity tells diagrams apart.
    """
    inputs = ['I{}'.format(i) for i in range(n_in)]
    wires = list(inputs)
    boxes = {}
    for k in range(int(rng.integers(0, max_boxes + 1))):
        arity = int(rng.integers(0, min(2, len(wires)) + 1))
        ins = tuple(wires[i] for i in rng.integers(len(wires), size=arity)) if arity else ()
        outs = tuple('W{}_{}'.format(k, j) for j in range(int(rng.integers(0, 3))))
        boxes['b{}'.format(k)] = ('k{}{}'.format(arity, len(outs)), ins, outs)
        wires.extend(outs)
    if n_out and not wires:
        boxes['src'] = ('k01', (), ('W',))
        wires.append('W')
    outputs = [wires[i] for i in rng.integers(len(wires), size=n_out)] if n_out else []
    return make_diagram(sig, {w: 'A' for w in wires}, boxes, inputs, outputs)


def random_stochastic(rng, n_out, n_in, sparse=0.0):
    'Columns drawn from a flat Dirichlet, entries zeroed with probability sparse'
    m = rng.dirichlet(np.ones(n_out), size=n_in).T
    if sparse:
        mask = rng.random(m.shape) >= sparse
        mask[rng.integers(n_out, size=n_in), np.arange(n_in)] = True
        m = m * mask
        m = m / m.sum(axis=0)
    return m


def finstoch_interpretation(rng, d, max_card=4, sparse=0.0):
    sig = d.signature.graph
    types = {t: finstoch.Factor.sized(t, int(rng.integers(2, max_card + 1))) for t in sig.wires}
    boxes = {}
    for b in sig.boxes:
        dom = finstoch.FinObject(tuple(types[t] for t in sig.inputs(b)))
        cod = finstoch.FinObject(tuple(types[t] for t in sig.outputs(b)))
        boxes[b] = finstoch.StochKernel(dom, cod, random_stochastic(rng, cod.size, dom.size, sparse))
    return Interpretation(types, boxes, finstoch.NAME)


def random_covariance(rng, n, rank=None):
    rank = n if rank is None else rank
    L = rng.normal(size=(n, rank))
    return L @ L.T


def gauss_interpretation(rng, d, max_dim=2, degenerate=0.0):
    """
    Linear Gaussian kernels; with probability degenerate a box gets a rank
    deficient (possibly zero) noise covariance.
    """
    sig = d.signature.graph
    types = {t: int(rng.integers(1, max_dim + 1)) for t in sig.wires}
    boxes = {}
    for b in sig.boxes:
        n_in = sum(types[t] for t in sig.inputs(b))
        n_out = sum(types[t] for t in sig.outputs(b))
        rank = int(rng.integers(0, n_out + 1)) if rng.random() < degenerate else n_out
        boxes[b] = gauss.GaussKernel(rng.normal(size=(n_out, n_in)), rng.normal(size=n_out),
                                     random_covariance(rng, n_out, rank),
                                     [types[t] for t in sig.inputs(b)], [types[t] for t in sig.outputs(b)])
    return Interpretation(types, boxes, gauss.NAME)


@composite
def rngs(draw: DrawFn):
    return np.random.default_rng(draw(st.integers(min_value=0, max_value=2 ** 32 - 1)))


@composite
def dag_models(draw: DrawFn, max_wires=8):
    return random_dag_model(draw(rngs()), max_wires)


@composite
def diagrams(draw: DrawFn, max_boxes=6):
    return random_diagram(draw(rngs()), max_boxes)


@composite
def causal_models(draw: DrawFn, max_boxes=5, latent=True):
    return random_causal_model(draw(rngs()), max_boxes, latent=latent)

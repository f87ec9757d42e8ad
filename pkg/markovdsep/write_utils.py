# coding: utf-8

def __init__():
    """
    Name:

        write_utils

    Purpose:

        Module regrouping codes that are used to write out models and reports.
        Contains the following functions:
            - model_to_dict: canonical dict form of a string diagram
            - dumps_model / save_model: canonical markov-dsep/1 JSON text
            - interpretation_to_dict: data file form of an interpretation
            - to_dot: graphviz DOT text of a diagram
            - render_report / render_compatibility: human readable check results

        Output ordering is lexicographic by identifier wherever the order
        carries no meaning, so files written from iso_equal inputs built the
        same way compare byte for byte.

    Dependencies:

        - json_tricks
        - numpy
    """
    pass


import logging

import numpy as np

from . import finstoch
from .diagram import StringDiagram
from .load_utils import FORMAT

log = logging.getLogger(__name__)


def model_to_dict(d: StringDiagram) -> dict:
    sig = d.signature.graph
    body = d.body
    return {
        'format': FORMAT,
        'signature': {
            'types': sorted(sig.wires),
            'boxes': {t: {'inputs': list(sig.inputs(t)), 'outputs': list(sig.outputs(t))}
                      for t in sorted(sig.boxes)},
        },
        'diagram': {
            'wires': {w: d.wire_type(w) for w in sorted(body.wires)},
            'boxes': {b: {'type': d.box_type(b), 'inputs': list(body.inputs(b)),
                          'outputs': list(body.outputs(b))} for b in sorted(body.boxes)},
        },
        'interface': {'inputs': list(d.inputs), 'outputs': list(d.outputs)},
    }


def dumps_model(d: StringDiagram) -> str:
    from json_tricks import dumps
    return dumps(model_to_dict(d), indent=2, sort_keys=True, primitives=True) + '\n'


def save_model(d: StringDiagram, filename):
    with open(filename, 'w') as handle:
        handle.write(dumps_model(d))
    log.info('model written to %s', filename)


def _factor_dict(f: finstoch.Factor):
    return {'name': f.name, 'labels': list(f.labels)}


def interpretation_to_dict(interp) -> dict:
    """
    Data file form (the per-box layout read by load_utils.data_from_dict)
    of a markov.Interpretation.
    """
    out = {'format': FORMAT, 'backend': interp.backend, 'types': {}, 'boxes': {}}
    for t in sorted(interp.type_assignment):
        obj = interp.type_assignment[t]
        out['types'][t] = _factor_dict(obj) if isinstance(obj, finstoch.Factor) else int(obj)
    for t in sorted(interp.box_assignment):
        k = interp.box_assignment[t]
        if finstoch.is_kernel(k):
            out['boxes'][t] = {'table': np.asarray(k.matrix).tolist()}
        else:
            out['boxes'][t] = {'A': k.A.tolist(), 'b': k.b.tolist(), 'S': k.S.tolist()}
    return out


def dumps_interpretation(interp) -> str:
    from json_tricks import dumps
    return dumps(interpretation_to_dict(interp), indent=2, sort_keys=True, primitives=True) + '\n'


def _quote(s):
    return '"{}"'.format(str(s).replace('\\', '\\\\').replace('"', '\\"'))


def to_dot(d: StringDiagram, name='model') -> str:
    """
    Purpose:

        Graphviz DOT text of a diagram. Wires are point nodes, boxes are box
        nodes labelled "box : type", edges run wire -> box for inputs and
        box -> wire for outputs and carry the port number when a box has
        more than one port on that side. Interface positions are added as
        xlabels on the wire nodes.
    """
    body = d.body
    legs = {}
    for i, w in enumerate(d.inputs):
        legs.setdefault(w, []).append('in{}'.format(i))
    for i, w in enumerate(d.outputs):
        legs.setdefault(w, []).append('out{}'.format(i))
    lines = ['digraph {} {{'.format(_quote(name)), '  rankdir=BT;']
    for w in sorted(body.wires):
        label = '{} : {}'.format(w, d.wire_type(w))
        if w in legs:
            label += ' [' + ', '.join(legs[w]) + ']'
        lines.append('  {} [shape=point, xlabel={}];'.format(_quote('w:' + w), _quote(label)))
    for b in sorted(body.boxes):
        lines.append('  {} [shape=box, label={}];'.format(_quote('b:' + b), _quote('{} : {}'.format(b, d.box_type(b)))))
    for b in sorted(body.boxes):
        ins, outs = body.inputs(b), body.outputs(b)
        for i, w in enumerate(ins):
            attr = ' [label={}]'.format(_quote(i)) if len(ins) > 1 else ''
            lines.append('  {} -> {}{};'.format(_quote('w:' + w), _quote('b:' + b), attr))
        for j, w in enumerate(outs):
            attr = ' [label={}]'.format(_quote(j)) if len(outs) > 1 else ''
            lines.append('  {} -> {}{};'.format(_quote('b:' + b), _quote('w:' + w), attr))
    lines.append('}')
    return '\n'.join(lines) + '\n'


def render_report(report, show_all=False) -> str:
    'Text of a markov.MarkovReport; passing checks are listed only with show_all'
    lines = ['{} Markov property: {}'.format(report.prop, report.overall)]
    if report.reason:
        lines.append('reason: {}'.format(report.reason))
    if report.prop == 'global':
        lines.append('triples: {}, d-separated: {}, CI tests: {}'.format(
            report.n_triples, report.n_separated, len(report.checks)))
    else:
        lines.append('CI tests: {}'.format(len(report.checks)))
    for c in report.checks:
        if show_all or c.verdict != 'holds':
            lines.append('  {}'.format(c))
    return '\n'.join(lines) + '\n'


def render_compatibility(result, show_all=False) -> str:
    lines = ['compatibility: {}'.format(result.status)]
    if result.reason:
        lines.append('reason: {}'.format(result.reason))
    if result.witness is not None:
        lines.append('witness: {}'.format(result.witness))
    if result.error is not None:
        lines.append('reconstruction error: {:.3g}'.format(result.error))
    if result.interpretation is not None:
        for t in sorted(result.interpretation.box_assignment):
            lines.append('  box type {}: {!r}'.format(t, result.interpretation.box_assignment[t]))
    if show_all and result.report is not None:
        lines.append(render_report(result.report, show_all).rstrip('\n'))
    return '\n'.join(lines) + '\n'

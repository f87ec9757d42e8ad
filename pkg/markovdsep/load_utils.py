# coding: utf-8

def __init__():
    """
    Name:

        load_utils

    Purpose:

        Collection of codes to load the files read by markovdsep
            - model files (signature, diagram, interface)
            - data files (one kernel to test, or an interpretation per box type)
            - settings files (through save_to_json/load_from_json)

        Every problem found while reading a model or data file raises a
        ModelFileError naming the file, the JSON field path and, for syntax
        errors, the line and column.

    Dependencies:

        - json_tricks
        - numpy

    Needed Files:

      JSON files in the markov-dsep/1 format, see README.md
    """
    pass


import logging
import warnings
from json import JSONDecodeError

import numpy as np

from . import finstoch, gauss
from .config import DEFAULT_SETTINGS
from .diagram import Signature, StringDiagram, make_diagram
from .errors import DimensionMismatchError, MarkovDsepError, ModelFileError
from .hypergraph import Hypergraph

log = logging.getLogger(__name__)

FORMAT = 'markov-dsep/1'


def save_to_json(f, d):
    'Function to save dictionary with numpy elements (d) to a text file (f) define by the JSON typing'
    from json_tricks import dumps
    with open(f, 'w') as handle:
        handle.write(dumps(d, indent=2))


def load_from_json(f):
    'Function to load JSON file and translate to dictionary with numpy elements from text file(f) define by the JSON typing'
    from json_tricks import loads
    with open(f, 'r') as handle:
        d = dict(loads(handle.read()))
    return d


def read_json_text(text, path=None):
    'Parse JSON text, turning syntax errors into a ModelFileError with line and column'
    from json_tricks import loads
    try:
        d = loads(text)
    except JSONDecodeError as e:
        raise ModelFileError(e.msg, path, line=e.lineno, column=e.colno) from None
    if not isinstance(d, dict):
        raise ModelFileError('top level must be a JSON object', path)
    return dict(d)


def read_json_file(path):
    try:
        with open(path, 'r') as handle:
            text = handle.read()
    except OSError as e:
        raise ModelFileError('cannot read file: {}'.format(e.strerror or e), path) from None
    return read_json_text(text, path)


class _Reader:
    'Typed access to a parsed document, keeping track of the field path'

    def __init__(self, path):
        self.path = path

    def fail(self, field, message):
        raise ModelFileError(message, self.path, field=field)

    def get(self, d, key, field, default=None, required=True):
        if not isinstance(d, dict):
            self.fail(field, 'expected an object')
        if key not in d:
            if required:
                self.fail(_join(field, key), 'missing field')
            return default
        return d[key]

    def names(self, value, field):
        if not isinstance(value, (list, tuple)):
            self.fail(field, 'expected a list of identifiers')
        for i, v in enumerate(value):
            if not isinstance(v, str):
                self.fail('{}[{}]'.format(field, i), 'expected an identifier string, got {!r}'.format(v))
        return tuple(value)

    def mapping(self, value, field):
        if not isinstance(value, dict):
            self.fail(field, 'expected an object')
        return value


def _join(field, key):
    return '{}.{}'.format(field, key) if field else str(key)


def _check_format(reader, d):
    fmt = d.get('format', FORMAT)
    if fmt != FORMAT:
        reader.fail('format', 'unsupported format {!r}, expected {!r}'.format(fmt, FORMAT))


def _ports(reader, spec, field, known, what):
    ins = reader.names(reader.get(spec, 'inputs', field, (), required=False), _join(field, 'inputs'))
    outs = reader.names(reader.get(spec, 'outputs', field, (), required=False), _join(field, 'outputs'))
    for leg, ws in (('inputs', ins), ('outputs', outs)):
        for i, w in enumerate(ws):
            if w not in known:
                reader.fail('{}.{}[{}]'.format(field, leg, i), 'unknown {} {!r}'.format(what, w))
    return ins, outs


def model_from_dict(d, path=None) -> StringDiagram:
    """
    Purpose:

        Build a StringDiagram from a parsed model document.

    Input:

        d: dict with keys
            format: 'markov-dsep/1' (optional)
            signature: {types: [...], boxes: {name: {inputs: [...], outputs: [...]}}}
                       (optional, defaults to the diagram itself, each wire
                       and box its own type)
            diagram: {wires: {wire: type} or [wire, ...],
                      boxes: {name: {type: box type, inputs: [...], outputs: [...]}}}
            interface: {inputs: [...], outputs: [...]}
        path: file name used in error messages

    Output:

        StringDiagram, not validated beyond its references (see validate_diagram)

    Raises:

        ModelFileError with the field path of the offending entry
    """
    r = _Reader(path)
    _check_format(r, d)
    diagram = r.mapping(r.get(d, 'diagram', ''), 'diagram')
    raw_wires = r.get(diagram, 'wires', 'diagram', {}, required=False)
    if isinstance(raw_wires, (list, tuple)):
        wires = {w: w for w in r.names(raw_wires, 'diagram.wires')}
        if len(wires) != len(raw_wires):
            r.fail('diagram.wires', 'duplicate wire')
    else:
        wires = {}
        for w, t in r.mapping(raw_wires, 'diagram.wires').items():
            if not isinstance(t, str):
                r.fail(_join('diagram.wires', w), 'expected a type name, got {!r}'.format(t))
            wires[w] = t
    boxes = {}
    for b, spec in r.mapping(r.get(diagram, 'boxes', 'diagram', {}, required=False), 'diagram.boxes').items():
        field = _join('diagram.boxes', b)
        r.mapping(spec, field)
        t = r.get(spec, 'type', field, b, required=False)
        if not isinstance(t, str):
            r.fail(_join(field, 'type'), 'expected a box type name, got {!r}'.format(t))
        ins, outs = _ports(r, spec, field, wires, 'wire')
        boxes[b] = (t, ins, outs)

    interface = r.mapping(r.get(d, 'interface', '', {}, required=False), 'interface')
    legs = {}
    for leg in ('inputs', 'outputs'):
        legs[leg] = r.names(r.get(interface, leg, 'interface', (), required=False), _join('interface', leg))
        for i, w in enumerate(legs[leg]):
            if w not in wires:
                r.fail('interface.{}[{}]'.format(leg, i), 'unknown wire {!r}'.format(w))

    if 'signature' in d:
        sig = r.mapping(d['signature'], 'signature')
        types = r.names(r.get(sig, 'types', 'signature'), 'signature.types')
        box_types = {}
        for t, spec in r.mapping(r.get(sig, 'boxes', 'signature', {}, required=False), 'signature.boxes').items():
            box_types[t] = _ports(r, r.mapping(spec, _join('signature.boxes', t)),
                                  _join('signature.boxes', t), set(types), 'type')
        signature = Signature.from_ports(types, box_types)
    else:
        signature = Signature(Hypergraph.from_ports(
            tuple(dict.fromkeys(wires.values())),
            {t: (tuple(wires[w] for w in ins), tuple(wires[w] for w in outs))
             for b, (t, ins, outs) in boxes.items()}))
    known_types = set(signature.types)
    for w, t in wires.items():
        if t not in known_types:
            r.fail(_join('diagram.wires', w), 'unknown type {!r}'.format(t))
    for b, (t, _, _) in boxes.items():
        if t not in signature.graph.box_set:
            r.fail(_join(_join('diagram.boxes', b), 'type'), 'unknown box type {!r}'.format(t))
    return make_diagram(signature, wires, boxes, legs['inputs'], legs['outputs'])


def load_model(path) -> StringDiagram:
    'Read a model file, see model_from_dict for the layout'
    d = model_from_dict(read_json_file(path), path)
    log.debug('loaded model %s with %d wires and %d boxes', path, len(d.body.wires), len(d.body.boxes))
    return d


class DataFile:
    """
    Contents of a data file: either one kernel to test against a model, or
    an interpretation of the model's types and box types.
    """

    def __init__(self, backend, kernel=None, interpretation=None, path=None):
        self.backend = backend
        self.kernel = kernel
        self.interpretation = interpretation
        self.path = path

    def kernel_for(self, model: StringDiagram):
        'The kernel to test: the given one, or the interpretation applied to model'
        if self.kernel is not None:
            return self.kernel
        from .markov import evaluate
        return evaluate(model, self.interpretation)


def _renormalize(table, n_out, n_in, path, field, settings):
    m = np.array(table, dtype=float).reshape(n_out, n_in) if n_out * n_in else np.zeros((n_out, n_in))
    sums = m.sum(axis=0)
    off = float(np.max(np.abs(sums - 1.0), initial=0.0))
    if off > settings.build_tol and off <= settings.load_tol:
        where = '{}, {}'.format(path, field) if path else field
        warnings.warn('{}: columns off by {:.2g}, renormalised'.format(where, off))
        m = m / sums
    return m


def _factor(r, spec, field, default_name=None):
    if default_name is None and not isinstance(spec, dict):
        default_name = field
    if isinstance(spec, (int, np.integer)) and not isinstance(spec, bool):
        return finstoch.Factor.sized(default_name, int(spec))
    if isinstance(spec, (list, tuple)):
        return finstoch.Factor(default_name, tuple(str(v) for v in spec))
    r.mapping(spec, field)
    name = r.get(spec, 'name', field, default_name, required=default_name is None)
    try:
        if 'labels' in spec:
            return finstoch.Factor(name, tuple(str(v) for v in spec['labels']))
        return finstoch.Factor.sized(name, int(r.get(spec, 'card', field)))
    except (DimensionMismatchError, TypeError, ValueError) as e:
        r.fail(field, str(e))


def _fin_kernel(r, spec, field, domain, codomain, settings):
    table = r.get(spec, 'table', field)
    dom, cod = finstoch.as_object(domain), finstoch.as_object(codomain)
    try:
        m = _renormalize(table, cod.size, dom.size, r.path, field, settings)
        return finstoch.StochKernel(dom, cod, m, atol=settings.load_tol)
    except (DimensionMismatchError, ValueError) as e:
        r.fail(_join(field, 'table'), str(e))


def _gauss_kernel(r, spec, field, in_blocks, out_blocks, settings):
    A = r.get(spec, 'A', field, None, required=False)
    S = r.get(spec, 'S', field)
    b = r.get(spec, 'b', field, None, required=False)
    n_out = sum(out_blocks) if out_blocks is not None else np.atleast_2d(np.asarray(S, dtype=float)).shape[0]
    n_in = sum(in_blocks) if in_blocks is not None else (np.asarray(A, dtype=float).shape[1] if A is not None else 0)
    try:
        A = np.zeros((n_out, n_in)) if A is None or not np.size(A) else np.asarray(A, dtype=float).reshape(n_out, n_in)
        b = np.zeros(n_out) if b is None else b
        return gauss.GaussKernel(A, b, S, in_blocks, out_blocks, atol=settings.load_tol)
    except (DimensionMismatchError, ValueError) as e:
        r.fail(field, str(e))


def data_from_dict(d, model: StringDiagram = None, path=None, settings=None) -> DataFile:
    """
    Purpose:

        Build a DataFile from a parsed data document.

    Input:

        d: dict with keys
            backend: 'finstoch' or 'gauss'
            kernel: one kernel
                finstoch: {domain: [factor...], codomain: [factor...], table: [...]}
                          a factor is {name, labels} or {name, card}
                gauss: {A, b, S, in_blocks, out_blocks}
            or
            types: {type: factor spec (finstoch) or dimension (gauss)}
            boxes: {box type: {table: [...]}} or {box type: {A, b, S}}
        model: diagram whose signature types the per-box kernels
        settings: Settings giving load_tol and build_tol

    Output:

        DataFile
    """
    from .markov import Interpretation
    settings = settings or DEFAULT_SETTINGS
    r = _Reader(path)
    _check_format(r, d)
    backend = r.get(d, 'backend', '', finstoch.NAME, required=False)
    if backend not in (finstoch.NAME, gauss.NAME):
        r.fail('backend', 'unknown backend {!r}'.format(backend))

    if 'kernel' in d:
        spec = r.mapping(d['kernel'], 'kernel')
        if backend == finstoch.NAME:
            dom = [_factor(r, f, 'kernel.domain[{}]'.format(i))
                   for i, f in enumerate(r.get(spec, 'domain', 'kernel', (), required=False))]
            cod = [_factor(r, f, 'kernel.codomain[{}]'.format(i))
                   for i, f in enumerate(r.get(spec, 'codomain', 'kernel'))]
            kernel = _fin_kernel(r, spec, 'kernel', dom, cod, settings)
        else:
            kernel = _gauss_kernel(r, spec, 'kernel', r.get(spec, 'in_blocks', 'kernel', None, required=False),
                                   r.get(spec, 'out_blocks', 'kernel', None, required=False), settings)
        return DataFile(backend, kernel=kernel, path=path)

    if model is None:
        r.fail('boxes', 'per-box data needs a model')
    types = {}
    for t, spec in r.mapping(r.get(d, 'types', ''), 'types').items():
        field = _join('types', t)
        if backend == finstoch.NAME:
            types[t] = _factor(r, spec, field, t)
        elif isinstance(spec, (int, np.integer)) and not isinstance(spec, bool) and spec >= 0:
            types[t] = int(spec)
        else:
            r.fail(field, 'expected a dimension, got {!r}'.format(spec))
    sig = model.signature.graph
    boxes = {}
    for t, spec in r.mapping(r.get(d, 'boxes', ''), 'boxes').items():
        field = _join('boxes', t)
        if t not in sig.box_set:
            r.fail(field, 'unknown box type {!r}'.format(t))
        missing = [w for w in sig.ports(t) if w not in types]
        if missing:
            r.fail(field, 'no object for type {!r}'.format(missing[0]))
        ins, outs = sig.inputs(t), sig.outputs(t)
        if backend == finstoch.NAME:
            boxes[t] = _fin_kernel(r, r.mapping(spec, field), field, [types[w] for w in ins],
                                   [types[w] for w in outs], settings)
        else:
            boxes[t] = _gauss_kernel(r, r.mapping(spec, field), field, [types[w] for w in ins],
                                     [types[w] for w in outs], settings)
    return DataFile(backend, interpretation=Interpretation(types, boxes, backend), path=path)


def load_data(path, model: StringDiagram = None, settings=None) -> DataFile:
    'Read a data file, see data_from_dict for the layout'
    try:
        return data_from_dict(read_json_file(path), model, path, settings)
    except ModelFileError:
        raise
    except MarkovDsepError as e:
        raise ModelFileError(str(e), path) from None

"""
Finite stochastic kernels.

A StochKernel is a dense table indexed first by the codomain factors and
then by the domain factors, so table[y..., x...] = f(y|x). Structural kernels
(identity, copy, discard, swap, reorderings) are all wirings: deterministic
tables whose output factor j repeats input factor selection[j].
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import as_strided

from .errors import DimensionMismatchError, InvalidQueryError

log = logging.getLogger(__name__)

NAME = 'finstoch'
HAS_CONDITIONALS = True


@dataclass(frozen=True)
class Factor:
    """A finite set: a name plus ordered value labels."""
    name: str
    labels: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, 'labels', tuple(str(l) for l in self.labels))
        if not self.labels:
            raise DimensionMismatchError('factor {!r} has no values'.format(self.name))

    @classmethod
    def sized(cls, name, n):
        return cls(name, tuple(str(i) for i in range(n)))

    @property
    def card(self) -> int:
        return len(self.labels)

    def renamed(self, name):
        return Factor(name, self.labels)


@dataclass(frozen=True)
class FinObject:
    """Ordered tensor product of factors; no factors is the unit."""
    factors: Tuple[Factor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'factors', tuple(self.factors))

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, i):
        return self.factors[i]

    def __add__(self, other):
        return FinObject(self.factors + tuple(other))

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(f.card for f in self.factors)

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    def select(self, positions):
        return FinObject(tuple(self.factors[i] for i in positions))


def as_object(factors) -> FinObject:
    return factors if isinstance(factors, FinObject) else FinObject(tuple(factors))


def check_stochastic(table, codomain_size, domain_size, atol):
    """
    Raise DimensionMismatchError unless every column f(.|x) is a probability
    vector within atol.
    """
    m = table.reshape(codomain_size, domain_size)
    if m.size and m.min() < -atol:
        raise DimensionMismatchError('negative probability {:.3g}'.format(m.min()))
    sums = m.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums - 1.0) > atol)
    if bad.size:
        raise DimensionMismatchError('column {} sums to {!r}, not 1'.format(int(bad[0]), float(sums[bad[0]])))


class StochKernel:
    """
    f: domain -> codomain, a conditional probability table.

    Input:

        domain, codomain: FinObject (or sequences of Factor)
        table: array shaped codomain.shape + domain.shape
        atol: stochasticity tolerance, None skips the check
    """

    def __init__(self, domain, codomain, table, atol=1e-12):
        self.domain = as_object(domain)
        self.codomain = as_object(codomain)
        table = np.array(table, dtype=float)
        want = self.codomain.shape + self.domain.shape
        if table.shape != want:
            if table.size != math.prod(want):
                raise DimensionMismatchError('table of shape {} does not fit {}'.format(table.shape, want))
            table = table.reshape(want)
        if atol is not None:
            check_stochastic(table, self.codomain.size, self.domain.size, atol)
        table.setflags(write=False)
        self.table = table

    @property
    def matrix(self):
        return self.table.reshape(self.codomain.size, self.domain.size)

    def __repr__(self):
        names = lambda o: ','.join(f.name for f in o) or 'I'
        return 'StochKernel({} -> {})'.format(names(self.domain), names(self.codomain))


def state(codomain, probs, atol=1e-12) -> StochKernel:
    'A kernel from the unit'
    return StochKernel((), codomain, probs, atol=atol)


def deterministic(domain, codomain, fn) -> StochKernel:
    'The kernel of a function fn taking a tuple of domain indices to a tuple of codomain indices'
    domain, codomain = as_object(domain), as_object(codomain)
    table = np.zeros(codomain.shape + domain.shape)
    for x in np.ndindex(*domain.shape):
        y = tuple(fn(x))
        if len(y) != len(codomain):
            raise DimensionMismatchError('function value {} has {} entries, codomain has {}'.format(
                y, len(y), len(codomain)))
        table[y + x] = 1.0
    return StochKernel(domain, codomain, table)


def _embed(values, shape, groups):
    """
    Zero array of the given shape holding values on a generalized diagonal:
    axis i of values runs along all the target axes groups[i] at once.
    """
    out = np.zeros(shape)
    strides = [sum(out.strides[a] for a in g) for g in groups]
    view = as_strided(out, shape=values.shape, strides=strides)
    view[...] = values
    return out


def wiring(domain, selection, atol=None) -> StochKernel:
    'Deterministic kernel copying domain factor selection[j] to output j'
    domain = as_object(domain)
    selection = list(selection)
    n_out = len(selection)
    groups = [[j for j, s in enumerate(selection) if s == i] + [n_out + i] for i in range(len(domain))]
    codomain = domain.select(selection)
    return StochKernel(domain, codomain, _embed(np.ones(domain.shape), codomain.shape + domain.shape, groups),
                       atol=atol)


def identity(obj) -> StochKernel:
    obj = as_object(obj)
    return wiring(obj, range(len(obj)))


def copy(obj) -> StochKernel:
    obj = as_object(obj)
    return wiring(obj, list(range(len(obj))) * 2)


def discard(obj) -> StochKernel:
    return wiring(obj, [])


def swap(first, second) -> StochKernel:
    first, second = as_object(first), as_object(second)
    n, m = len(first), len(second)
    return wiring(first + second, list(range(n, n + m)) + list(range(n)))


def compose(f: StochKernel, p: StochKernel) -> StochKernel:
    'f after p, the Chapman-Kolmogorov sum over the middle object'
    if p.codomain.shape != f.domain.shape:
        raise DimensionMismatchError('cannot compose: {} into {}'.format(p.codomain.shape, f.domain.shape))
    table = (f.matrix @ p.matrix).reshape(f.codomain.shape + p.domain.shape)
    return StochKernel(p.domain, f.codomain, table, atol=None)


def tensor(f: StochKernel, g: StochKernel) -> StochKernel:
    t = np.multiply.outer(f.table, g.table)
    cf, df, cg, dg = len(f.codomain), len(f.domain), len(g.codomain), len(g.domain)
    order = (list(range(cf)) + list(range(cf + df, cf + df + cg)) +
             list(range(cf, cf + df)) + list(range(cf + df + cg, cf + df + cg + dg)))
    return StochKernel(f.domain + g.domain, f.codomain + g.codomain, t.transpose(order), atol=None)


def _positions(f, positions):
    positions = [int(i) for i in positions]
    n = len(f.codomain)
    if any(i < 0 or i >= n for i in positions) or len(set(positions)) != len(positions):
        raise InvalidQueryError('bad codomain positions {} for {} factors'.format(positions, n))
    return positions


def marginal(f: StochKernel, keep) -> StochKernel:
    'Sum out the codomain factors not in keep; the kept ones come out in keep order'
    keep = _positions(f, keep)
    n = len(f.codomain)
    drop = tuple(i for i in range(n) if i not in keep)
    t = f.table.sum(axis=drop) if drop else f.table
    remaining = sorted(keep)
    perm = [remaining.index(k) for k in keep] + list(range(len(keep), len(keep) + len(f.domain)))
    return StochKernel(f.domain, f.codomain.select(keep), t.transpose(perm), atol=None)


def conditional(f: StochKernel, given) -> StochKernel:
    """
    Purpose:

        The conditional f_|X: X (x) A -> Y of f: A -> X (x) Y, where X are the
        codomain positions in given and Y the remaining ones in order, so that
        f(x,y|a) = f_|X(y|x,a) f_X(x|a). Where f_X(x|a) = 0 the row is uniform.
    """
    given = _positions(f, given)
    rest = [i for i in range(len(f.codomain)) if i not in given]
    xs, ys = f.codomain.select(given), f.codomain.select(rest)
    t = marginal(f, given + rest).table.reshape(xs.size, ys.size, f.domain.size)
    fx = t.sum(axis=1)
    safe = np.where(fx > 0, fx, 1.0)
    cond = np.where(fx[:, None, :] > 0, t / safe[:, None, :], 1.0 / ys.size)
    table = cond.transpose(1, 0, 2).reshape(ys.shape + xs.shape + f.domain.shape)
    return StochKernel(xs + f.domain, ys, table, atol=None)


def _split(f, x, y, z):
    x, y, z = list(x), list(y), list(z)
    _positions(f, x + y + z)
    size = lambda ps: math.prod(f.codomain[i].card for i in ps)
    return marginal(f, x + y + z).table, size(x), size(y), size(z)


def ci_state(f: StochKernel, x, y, z, tol=1e-9) -> bool:
    """
    X _||_ Y | Z for a state: f(x,y,z) f_Z(z) = f_XZ(x,z) f_ZY(z,y) everywhere
    within tol. Codomain factors outside x, y, z are marginalized first.
    """
    if len(f.domain):
        raise DimensionMismatchError('ci_state needs a state, use ci_kernel for kernels with inputs')
    t, nx, ny, nz = _split(f, x, y, z)
    t = t.reshape(nx, ny, nz)
    fz = t.sum(axis=(0, 1))
    fxz = t.sum(axis=1)
    fyz = t.sum(axis=0)
    lhs = t * fz[None, None, :]
    rhs = fxz[:, None, :] * fyz[None, :, :]
    return float(np.max(np.abs(lhs - rhs))) <= tol


def ci_kernel(f: StochKernel, x, y, z, tol=1e-9) -> bool:
    """
    Input aware X _||_ Y | Z: true when some k(x|z) gives
    f(x,y,z|a) = k(x|z) f_YZ(y,z|a) for every a. The candidate k averages
    f(x,z|a)/f_Z(z|a) over the supported (y, a); the identity is then checked
    everywhere within tol. Not symmetric in X and Y.
    """
    t, nx, ny, nz = _split(f, x, y, z)
    t = t.reshape(nx, ny, nz, f.domain.size)
    fyz = t.sum(axis=0)
    num = t.sum(axis=(1, 3))
    den = fyz.sum(axis=(0, 2))
    k = np.where(den > 0, num / np.where(den > 0, den, 1.0), 1.0 / nx)
    pred = k[:, None, :, None] * fyz[None, :, :, :]
    return float(np.max(np.abs(t - pred))) <= tol


def reference_state(f: StochKernel) -> StochKernel:
    'f fed with the uniform distribution on its domain'
    u = state(f.domain, np.full(f.domain.shape, 1.0 / f.domain.size), atol=None)
    return compose(f, u)


def max_abs_diff(f: StochKernel, g: StochKernel) -> float:
    if f.table.shape != g.table.shape:
        return math.inf
    if not f.table.size:
        return 0.0
    return float(np.max(np.abs(f.table - g.table)))


def input_sizes(f: StochKernel):
    return f.domain.shape


def output_sizes(f: StochKernel):
    return f.codomain.shape


def object_size(obj: Factor) -> int:
    return obj.card


def output_object(f: StochKernel, i, name) -> Factor:
    return f.codomain[i].renamed(name)


def is_kernel(f) -> bool:
    return isinstance(f, StochKernel)


def contract(inputs: Sequence[str], steps, outputs: Sequence[str], wire_objects) -> StochKernel:
    """
    Purpose:

        Evaluate a diagram as a tensor network. Each wire is an einsum index,
        each box step (kernel, input wires, output wires) an operand; wires
        that are not outputs are summed away, which discards them. Repeated
        outputs and inputs passed to the outputs are laid on the diagonal
        afterwards.

    Input:

        inputs: the input leg
        steps: list of (StochKernel, input wires, output wires)
        outputs: the output leg (may repeat wires)
        wire_objects: wire -> Factor

    Output:

        StochKernel from the input factors to the output factors, both named
        by wire
    """
    labels = {}

    def lab(w):
        return labels.setdefault(w, len(labels))

    operands = []
    for kernel, ins, outs in steps:
        operands += [kernel.table, [lab(w) for w in outs] + [lab(w) for w in ins]]
    for w in inputs:
        operands += [np.ones(wire_objects[w].card), [lab(w)]]
    listed = set(outputs)
    free = list(dict.fromkeys(outputs)) + [w for w in inputs if w not in listed]
    if len(labels) > 52:
        raise DimensionMismatchError('{} wires exceed the einsum index limit of 52'.format(len(labels)))
    if operands:
        t = np.einsum(*operands, [lab(w) for w in free], optimize='greedy')
    else:
        t = np.ones(())
    inputs, outputs = list(inputs), list(outputs)
    n_out = len(outputs)
    groups = [[j for j, v in enumerate(outputs) if v == w] +
              ([n_out + inputs.index(w)] if w in inputs else []) for w in free]
    domain = FinObject(tuple(wire_objects[w].renamed(w) for w in inputs))
    codomain = FinObject(tuple(wire_objects[w].renamed(w) for w in outputs))
    return StochKernel(domain, codomain, _embed(t, codomain.shape + domain.shape, groups), atol=None)

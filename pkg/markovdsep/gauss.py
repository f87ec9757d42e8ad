"""
Linear Gaussian kernels x -> N(Ax + b, S).

Kernels carry moments only; rank deficient S (copies, deterministic maps) is
handled throughout by pseudoinverses. The output vector is split in blocks,
one per tensor factor, and positions in marginal / conditional / CI calls
refer to those blocks.
"""

import logging
import math
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag, pinvh

from .errors import DimensionMismatchError, InvalidQueryError

log = logging.getLogger(__name__)

NAME = 'gauss'
HAS_CONDITIONALS = True


def _blocks(blocks, dim):
    if blocks is None:
        return (dim,) if dim else ()
    blocks = tuple(int(n) for n in blocks)
    if sum(blocks) != dim or any(n < 0 for n in blocks):
        raise DimensionMismatchError('blocks {} do not split dimension {}'.format(blocks, dim))
    return blocks


class GaussKernel:
    """
    Input:

        A: out_dim x in_dim matrix
        b: out_dim offset
        S: out_dim x out_dim noise covariance
        in_blocks, out_blocks: factor sizes (default one block each side)
        atol: symmetry tolerance, None skips the symmetry and PSD checks
    """

    def __init__(self, A, b, S, in_blocks=None, out_blocks=None, atol=1e-12):
        A = np.array(A, dtype=float)
        if A.ndim != 2:
            raise DimensionMismatchError('A must be a matrix, got shape {}'.format(A.shape))
        out_dim, in_dim = A.shape
        b = np.array(b, dtype=float).reshape(-1) if np.size(b) else np.zeros(out_dim)
        S = np.array(S, dtype=float).reshape(out_dim, out_dim) if np.size(S) else np.zeros((out_dim, out_dim))
        if b.shape != (out_dim,):
            raise DimensionMismatchError('offset of length {} for {} outputs'.format(b.shape[0], out_dim))
        if atol is not None:
            scale = max(1.0, float(np.max(np.abs(S), initial=0.0)))
            if np.max(np.abs(S - S.T), initial=0.0) > atol * scale:
                raise DimensionMismatchError('noise covariance is not symmetric')
            if out_dim and np.linalg.eigvalsh(S).min() < -1e-10 * scale:
                raise DimensionMismatchError('noise covariance is not positive semidefinite')
        self.A = A
        self.b = b
        self.S = (S + S.T) / 2.0
        self.in_blocks = _blocks(in_blocks, in_dim)
        self.out_blocks = _blocks(out_blocks, out_dim)
        for arr in (self.A, self.b, self.S):
            arr.setflags(write=False)

    @property
    def in_dim(self) -> int:
        return self.A.shape[1]

    @property
    def out_dim(self) -> int:
        return self.A.shape[0]

    @property
    def mean(self):
        'Mean of a state'
        return self.b

    @property
    def cov(self):
        'Covariance of a state'
        return self.S

    def __repr__(self):
        return 'GaussKernel({} -> {})'.format(list(self.in_blocks), list(self.out_blocks))


def state(S, b=None, blocks=None, atol=1e-12) -> GaussKernel:
    S = np.atleast_2d(np.asarray(S, dtype=float))
    n = S.shape[0] if S.size else 0
    return GaussKernel(np.zeros((n, 0)), np.zeros(n) if b is None else b, S, (), blocks, atol=atol)


def _dims(dims):
    if isinstance(dims, (int, np.integer)):
        return (int(dims),)
    return tuple(int(n) for n in dims)


def wiring(dims, selection) -> GaussKernel:
    'Deterministic kernel copying input block selection[j] to output block j'
    dims = _dims(dims)
    offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    out_blocks = [dims[i] for i in selection]
    A = np.zeros((sum(out_blocks), sum(dims)))
    row = 0
    for i in selection:
        A[row:row + dims[i], offsets[i]:offsets[i] + dims[i]] = np.eye(dims[i])
        row += dims[i]
    n = A.shape[0]
    return GaussKernel(A, np.zeros(n), np.zeros((n, n)), dims, out_blocks, atol=None)


def identity(dims) -> GaussKernel:
    dims = _dims(dims)
    return wiring(dims, range(len(dims)))


def copy(dims) -> GaussKernel:
    dims = _dims(dims)
    return wiring(dims, list(range(len(dims))) * 2)


def discard(dims) -> GaussKernel:
    return wiring(_dims(dims), [])


def swap(first, second) -> GaussKernel:
    first, second = _dims(first), _dims(second)
    n, m = len(first), len(second)
    return wiring(first + second, list(range(n, n + m)) + list(range(n)))


def compose(g: GaussKernel, f: GaussKernel) -> GaussKernel:
    'g after f'
    if f.out_dim != g.in_dim:
        raise DimensionMismatchError('cannot compose: {} outputs into {} inputs'.format(f.out_dim, g.in_dim))
    return GaussKernel(g.A @ f.A, g.A @ f.b + g.b, g.A @ f.S @ g.A.T + g.S,
                       f.in_blocks, g.out_blocks, atol=None)


def tensor(f: GaussKernel, g: GaussKernel) -> GaussKernel:
    return GaussKernel(block_diag(f.A, g.A), np.concatenate([f.b, g.b]), block_diag(f.S, g.S),
                       f.in_blocks + g.in_blocks, f.out_blocks + g.out_blocks, atol=None)


def _rows(f: GaussKernel, positions):
    positions = [int(i) for i in positions]
    n = len(f.out_blocks)
    if any(i < 0 or i >= n for i in positions) or len(set(positions)) != len(positions):
        raise InvalidQueryError('bad output blocks {} for {} blocks'.format(positions, n))
    offsets = np.concatenate([[0], np.cumsum(f.out_blocks)]).astype(int)
    rows = [np.arange(offsets[i], offsets[i + 1]) for i in positions]
    return np.concatenate(rows).astype(int) if rows else np.zeros(0, dtype=int)


def marginal(f: GaussKernel, keep) -> GaussKernel:
    'Keep the output blocks listed, in that order'
    keep = [int(i) for i in keep]
    r = _rows(f, keep)
    return GaussKernel(f.A[r], f.b[r], f.S[np.ix_(r, r)], f.in_blocks,
                       [f.out_blocks[i] for i in keep], atol=None)


def _pinv(m):
    if not m.size:
        return np.zeros(m.shape[::-1])
    return pinvh((m + m.T) / 2.0)


def conditional(f: GaussKernel, given) -> GaussKernel:
    """
    Purpose:

        Condition the output blocks in given (X) out of f: A -> X (x) Y.
        Returns f_|X: X (x) A -> Y with regression K = S_YX S_XX^+:
            mean map   [K, A_Y - K A_X], offset b_Y - K b_X
            covariance S_YY - K S_XY
    """
    given = [int(i) for i in given]
    rest = [i for i in range(len(f.out_blocks)) if i not in given]
    ix, iy = _rows(f, given), _rows(f, rest)
    K = f.S[np.ix_(iy, ix)] @ _pinv(f.S[np.ix_(ix, ix)])
    A = np.hstack([K, f.A[iy] - K @ f.A[ix]])
    b = f.b[iy] - K @ f.b[ix]
    S = f.S[np.ix_(iy, iy)] - K @ f.S[np.ix_(ix, iy)]
    return GaussKernel(A, b, S, [f.out_blocks[i] for i in given] + list(f.in_blocks),
                       [f.out_blocks[i] for i in rest], atol=None)


def _ci_cov(cov, ix, iy, iz, tol):
    'Sigma_XY = Sigma_XZ Sigma_ZZ^+ Sigma_ZY within tol'
    sxy = cov[np.ix_(ix, iy)]
    resid = sxy - cov[np.ix_(ix, iz)] @ _pinv(cov[np.ix_(iz, iz)]) @ cov[np.ix_(iz, iy)]
    return float(np.max(np.abs(resid), initial=0.0)) <= tol


def ci_state(f: GaussKernel, x, y, z, tol=1e-9) -> bool:
    if f.in_dim:
        raise DimensionMismatchError('ci_state needs a state, use ci_kernel for kernels with inputs')
    _rows(f, list(x) + list(y) + list(z))
    return _ci_cov(f.S, _rows(f, x), _rows(f, y), _rows(f, z), tol)


def ci_kernel(f: GaussKernel, x, y, z, tol=1e-9) -> bool:
    """
    Input aware X _||_ Y | Z. The input is drawn from a standard normal
    reference and joined to the Y side; X must then be independent of
    (Y, input) given Z, i.e. generated from Z alone.
    """
    _rows(f, list(x) + list(y) + list(z))
    n = f.in_dim
    cov = np.zeros((n + f.out_dim, n + f.out_dim))
    cov[:n, :n] = np.eye(n)
    cov[n:, :n] = f.A
    cov[:n, n:] = f.A.T
    cov[n:, n:] = f.A @ f.A.T + f.S
    iy = np.concatenate([np.arange(n), n + _rows(f, y)]).astype(int)
    return _ci_cov(cov, n + _rows(f, x), iy, n + _rows(f, z), tol)


def reference_state(f: GaussKernel) -> GaussKernel:
    'f fed with a standard normal input'
    return compose(f, state(np.eye(f.in_dim), blocks=f.in_blocks))


def max_abs_diff(f: GaussKernel, g: GaussKernel) -> float:
    if f.A.shape != g.A.shape:
        return math.inf
    return float(max(np.max(np.abs(f.A - g.A), initial=0.0),
                     np.max(np.abs(f.b - g.b), initial=0.0),
                     np.max(np.abs(f.S - g.S), initial=0.0)))


def input_sizes(f: GaussKernel):
    return f.in_blocks


def output_sizes(f: GaussKernel):
    return f.out_blocks


def object_size(obj) -> int:
    return int(obj)


def output_object(f: GaussKernel, i, name) -> int:
    return f.out_blocks[i]


def is_kernel(f) -> bool:
    return isinstance(f, GaussKernel)


def contract(inputs: Sequence[str], steps, outputs: Sequence[str], wire_objects) -> GaussKernel:
    """
    Purpose:

        Evaluate a diagram by moment propagation. Every wire gets rows
        W = M a + c + noise, with a the stacked inputs; the joint noise
        covariance of all wires is grown one box at a time.

    Input:

        inputs: the input leg
        steps: list of (GaussKernel, input wires, output wires) in topological order
        outputs: the output leg (may repeat wires)
        wire_objects: wire -> dimension
    """
    dims = {w: int(n) for w, n in wire_objects.items()}
    n_in = sum(dims[w] for w in inputs)
    rows = {}
    M = np.zeros((0, n_in))
    c = np.zeros(0)
    S = np.zeros((0, 0))

    def grow(ws, Mo, co, cross, Soo):
        nonlocal M, c, S
        start = M.shape[0]
        for w in ws:
            rows[w] = np.arange(start, start + dims[w])
            start += dims[w]
        m, k = S.shape[0], Soo.shape[0]
        big = np.zeros((m + k, m + k))
        big[:m, :m] = S
        big[m:, :m] = cross
        big[:m, m:] = cross.T
        big[m:, m:] = Soo
        M, c, S = np.vstack([M, Mo]), np.concatenate([c, co]), big

    grow(inputs, np.eye(n_in), np.zeros(n_in), np.zeros((n_in, 0)), np.zeros((n_in, n_in)))
    for kernel, ins, outs in steps:
        idx = np.concatenate([rows[w] for w in ins]).astype(int) if ins else np.zeros(0, dtype=int)
        A = kernel.A
        grow(outs, A @ M[idx], A @ c[idx] + kernel.b, A @ S[idx, :],
             A @ S[np.ix_(idx, idx)] @ A.T + kernel.S)
    out = np.concatenate([rows[w] for w in outputs]).astype(int) if outputs else np.zeros(0, dtype=int)
    return GaussKernel(M[out], c[out], S[np.ix_(out, out)], [dims[w] for w in inputs],
                       [dims[w] for w in outputs], atol=None)

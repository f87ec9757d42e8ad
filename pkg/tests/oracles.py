"""
Slow reference deciders used only to cross-check the library.
"""

from itertools import permutations, product

import networkx as nx
import numpy as np


def path_dseparated(dag: nx.DiGraph, xs, ys, zs) -> bool:
    """
    d-separation by enumerating every simple undirected path between X and
    Y and checking that each one is blocked: a chain or fork node in Z, or
    a collider with no descendant in Z.
    """
    xs, ys, zs = set(xs), set(ys), set(zs)
    if not xs or not ys:
        return True
    skeleton = dag.to_undirected(as_view=True)
    for x in xs:
        for y in ys:
            for path in nx.all_simple_paths(skeleton, x, y):
                blocked = False
                for a, m, c in zip(path, path[1:], path[2:]):
                    collider = dag.has_edge(a, m) and dag.has_edge(c, m)
                    if collider:
                        if not (({m} | nx.descendants(dag, m)) & zs):
                            blocked = True
                    elif m in zs:
                        blocked = True
                    if blocked:
                        break
                if not blocked:
                    return False
    return True


def brute_isomorphic(f, g) -> bool:
    'Try every typed wire bijection and box bijection; only for tiny diagrams'
    fw, gw = list(f.body.wires), list(g.body.wires)
    fb, gb = list(f.body.boxes), list(g.body.boxes)
    if len(fw) != len(gw) or len(fb) != len(gb) or len(f.inputs) != len(g.inputs) \
            or len(f.outputs) != len(g.outputs):
        return False
    for perm in permutations(gw):
        wm = dict(zip(fw, perm))
        if any(f.wire_type(w) != g.wire_type(wm[w]) for w in fw):
            continue
        if [wm[w] for w in f.inputs] != list(g.inputs) or [wm[w] for w in f.outputs] != list(g.outputs):
            continue
        for bperm in permutations(gb):
            bm = dict(zip(fb, bperm))
            if all(f.box_type(b) == g.box_type(bm[b]) and
                   [wm[w] for w in f.body.inputs(b)] == list(g.body.inputs(bm[b])) and
                   [wm[w] for w in f.body.outputs(b)] == list(g.body.outputs(bm[b])) for b in fb):
                return True
    return False


def _almost_deterministic(r, atol=1e-12):
    'Some function d with r(a, b) = s(a) [b == d(a)] for every a, b'
    n_a, n_b = r.shape
    s = r.sum(axis=1)
    for d in product(range(n_b), repeat=n_a):
        target = np.zeros_like(r)
        target[np.arange(n_a), list(d)] = s
        if np.max(np.abs(r - target)) <= atol:
            return True
    return False


def copy_family_compatible(r) -> bool:
    """
    For t(x, z1, z2, y) = r(z1, z2) [x == z2] [y == z1] over the two-output
    common cause model: compatible exactly when z2 is an almost sure function
    of z1 and z1 one of z2.
    """
    r = np.asarray(r, dtype=float)
    return _almost_deterministic(r) and _almost_deterministic(r.T)


def two_output_factorizes(t, atol=1e-9) -> bool:
    """
    Direct factorization test of a joint t(x, z1, z2, y) against the model
    r -> (Z1, Z2), Z1 -> X, Z2 -> Y: t = r(z1, z2) a(x|z1) b(y|z2) with all
    three read off t.
    """
    t = np.asarray(t, dtype=float)
    r = t.sum(axis=(0, 3))
    xz1 = t.sum(axis=(2, 3))
    z2y = t.sum(axis=(0, 1))
    s1, s2 = r.sum(axis=1), r.sum(axis=0)
    a = np.where(s1 > 0, xz1 / np.where(s1 > 0, s1, 1.0), 0.0)
    b = np.where(s2[:, None] > 0, z2y / np.where(s2 > 0, s2, 1.0)[:, None], 0.0)
    pred = a[:, :, None, None] * r[None, :, :, None] * b[None, None, :, :]
    return float(np.max(np.abs(t - pred))) <= atol

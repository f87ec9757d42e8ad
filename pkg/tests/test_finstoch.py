import numpy as np
import pytest
from hypothesis import given

from markovdsep import finstoch as fs
from markovdsep.errors import DimensionMismatchError, InvalidQueryError

from .strategies import random_stochastic, rngs

X = fs.Factor('X', ('x0', 'x1'))
Y = fs.Factor('Y', ('y0', 'y1'))
Z = fs.Factor.sized('Z', 3)


def close(f, g, atol=1e-12):
    return fs.max_abs_diff(f, g) <= atol


def kernel(rng, dom, cod, sparse=0.0):
    dom, cod = fs.as_object(dom), fs.as_object(cod)
    return fs.StochKernel(dom, cod, random_stochastic(rng, cod.size, dom.size, sparse))


def fork_state(rng, sparse=0.0):
    'p(x|z) p(y|z) p(z) laid out over (X, Y, Z)'
    pz = random_stochastic(rng, 3, 1, sparse)[:, 0]
    px = random_stochastic(rng, 2, 3, sparse)
    py = random_stochastic(rng, 2, 3, sparse)
    return fs.state((X, Y, Z), np.einsum('xz,yz,z->xyz', px, py, pz))


def test_factors_and_objects():
    assert Z.labels == ('0', '1', '2') and Z.card == 3
    assert fs.FinObject((X, Z)).shape == (2, 3)
    assert fs.FinObject().size == 1
    with pytest.raises(DimensionMismatchError):
        fs.Factor('E', ())


def test_kernel_must_be_stochastic():
    with pytest.raises(DimensionMismatchError, match='sums to'):
        fs.StochKernel((X,), (Y,), [[.5, .5], [.4, .5]])
    with pytest.raises(DimensionMismatchError, match='negative'):
        fs.state((X,), [1.5, -.5])
    with pytest.raises(DimensionMismatchError):
        fs.state((X,), [.2, .3, .5])


def test_chapman_kolmogorov():
    f = fs.StochKernel((X,), (Y,), [[.5, .2], [.5, .8]])
    p = fs.state((X,), [.4, .6])
    np.testing.assert_allclose(fs.compose(f, p).table, [.32, .68])
    assert close(fs.compose(fs.identity((Y,)), fs.compose(f, p)), fs.compose(f, p))
    with pytest.raises(DimensionMismatchError):
        fs.compose(f, fs.state((Z,), [.2, .3, .5]))


def test_structural_kernels():
    c = fs.copy((X,))
    assert c.table[1, 1, 1] == 1.0 and c.table[0, 1, 1] == 0.0
    assert fs.discard((X, Z)).table.shape == (2, 3)
    s = fs.swap((X,), (Z,))
    assert s.codomain.shape == (3, 2)
    assert s.table[2, 1, 1, 2] == 1.0
    assert close(fs.compose(s, fs.swap((Z,), (X,))), fs.identity((Z, X)))


def test_counit_and_copy_laws():
    c = fs.copy((X,))
    assert close(fs.compose(fs.tensor(fs.discard((X,)), fs.identity((X,))), c), fs.identity((X,)))
    assert close(fs.compose(fs.swap((X,), (X,)), c), c)
    left = fs.compose(fs.tensor(c, fs.identity((X,))), c)
    right = fs.compose(fs.tensor(fs.identity((X,)), c), c)
    assert close(left, right)
    assert close(fs.tensor(fs.discard((X,)), fs.discard((Z,))), fs.discard((X, Z)))


def test_copy_of_a_product():
    lhs = fs.tensor(fs.copy((X,)), fs.copy((Z,)))
    assert close(fs.compose(fs.wiring((X, X, Z, Z), [0, 2, 1, 3]), lhs), fs.copy((X, Z)))


@given(rngs())
def test_discard_is_natural_and_tensor_is_stochastic(rng):
    f = kernel(rng, (X, Z), (Y, Z))
    g = kernel(rng, (Y,), (X,))
    assert close(fs.compose(fs.discard((Y, Z)), f), fs.discard((X, Z)))
    t = fs.tensor(f, g)
    np.testing.assert_allclose(t.matrix.sum(axis=0), 1.0, atol=1e-12)
    assert t.domain.shape == (2, 3, 2) and t.codomain.shape == (2, 3, 2)


@given(rngs())
def test_composition_is_associative(rng):
    f, g, h = kernel(rng, (X,), (Z,)), kernel(rng, (Z,), (Y, X)), kernel(rng, (Y, X), (Z,))
    assert close(fs.compose(h, fs.compose(g, f)), fs.compose(fs.compose(h, g), f))


def test_marginal_orders_factors():
    p = fs.state((X, Y), [[.1, .2], [.3, .4]])
    np.testing.assert_allclose(fs.marginal(p, [0]).table, [.3, .7])
    np.testing.assert_allclose(fs.marginal(p, [1, 0]).table, [[.1, .3], [.2, .4]])
    with pytest.raises(InvalidQueryError):
        fs.marginal(p, [0, 0])


def test_conditional_by_hand():
    p = fs.state((X, Y), [[.1, .2], [.3, .4]])
    c = fs.conditional(p, [0])
    assert c.domain == fs.FinObject((X,)) and c.codomain == fs.FinObject((Y,))
    np.testing.assert_allclose(c.table, [[1 / 3, 3 / 7], [2 / 3, 4 / 7]])


def test_conditional_of_a_product_ignores_the_given_factor():
    q = [.25, .75]
    p = fs.state((X, Y), np.outer([.6, .4], q))
    np.testing.assert_allclose(fs.conditional(p, [0]).table, np.column_stack([q, q]))


def test_conditional_is_uniform_off_support():
    p = fs.state((Z, X), [[.5, .5], [0, 0], [0, 0]])
    c = fs.conditional(p, [0])
    np.testing.assert_allclose(c.table[:, 1], [.5, .5])


@given(rngs())
def test_conditional_rebuilds_the_kernel(rng):
    f = kernel(rng, (Y,), (X, Z), sparse=0.3)
    c = fs.conditional(f, [1])
    fz = fs.marginal(f, [1]).table
    rebuilt = np.einsum('xza,za->zxa', c.table, fz)
    np.testing.assert_allclose(rebuilt, fs.marginal(f, [1, 0]).table, atol=1e-12)


def test_ci_state_examples(rng):
    assert fs.ci_state(fork_state(rng), [0], [1], [2])
    assert not fs.ci_state(fork_state(rng), [0], [1], [])
    same = np.einsum('xy,z->xyz', np.eye(2) / 2, [.2, .3, .5])
    assert not fs.ci_state(fs.state((X, Y, Z), same), [0], [1], [2])
    product = np.einsum('x,y->xy', [.3, .7], [.6, .4])
    assert fs.ci_state(fs.state((X, Y), product), [0], [1], [])
    with pytest.raises(DimensionMismatchError):
        fs.ci_state(kernel(rng, (X,), (Y, Z)), [0], [1], [])


@given(rngs())
def test_ci_kernel_agrees_with_ci_state(rng):
    for sparse in (0.0, 0.4):
        p = fork_state(rng, sparse)
        assert fs.ci_kernel(p, [0], [1], [2]) == fs.ci_state(p, [0], [1], [2]) is True
        q = fs.state((X, Y, Z), random_stochastic(rng, 12, 1, sparse)[:, 0])
        for split in (([0], [1], [2]), ([2], [0], []), ([1], [2], [0])):
            assert fs.ci_kernel(q, *split) == fs.ci_state(q, *split)


def test_ci_kernel_is_asymmetric():
    # y copies the input a, x is independent noise
    A = fs.Factor('A', ('a0', 'a1'))
    noise = np.array([.3, .7])
    table = np.einsum('x,ya->xya', noise, np.eye(2))
    f = fs.StochKernel((A,), (X, Y), table)
    assert fs.ci_kernel(f, [0], [1], [])
    assert not fs.ci_kernel(f, [1], [0], [])


@given(rngs())
def test_conditionals_always_exist(rng):
    p = kernel(rng, (), (X, Z))
    assert fs.ci_kernel(p, [0], [], [1])
    f = kernel(rng, (Y,), (X, Z))
    assert fs.ci_kernel(f, [], [0], [1])
    # with inputs, X must also be generated from Z alone
    echo = fs.tensor(fs.identity((Y,)), fs.state((Z,), [.2, .3, .5]))
    assert not fs.ci_kernel(echo, [0], [], [1])


@given(rngs())
def test_semigraphoid_on_states(rng):
    W = fs.Factor.sized('W', 2)
    pz = random_stochastic(rng, 3, 1)[:, 0]
    px = random_stochastic(rng, 2, 3)
    pyw = random_stochastic(rng, 4, 3).reshape(2, 2, 3)
    f = fs.state((X, Y, W, Z), np.einsum('xz,ywz,z->xywz', px, pyw, pz))
    assert fs.ci_state(f, [0], [1, 2], [3])
    assert fs.ci_state(f, [1, 2], [0], [3])
    assert fs.ci_state(f, [0], [1], [3]) and fs.ci_state(f, [0], [2], [3])
    g = fs.state((X, Y, W, Z), random_stochastic(rng, 24, 1)[:, 0])
    for split in (([0], [1], [3]), ([0, 2], [1], [])):
        assert fs.ci_state(g, *split) == fs.ci_state(g, split[1], split[0], split[2])


def test_deterministic():
    xor = fs.deterministic((X, Y), (fs.Factor.sized('S', 2),), lambda v: ((v[0] + v[1]) % 2,))
    assert xor.table[1, 0, 1] == 1.0 and xor.table[0, 1, 1] == 1.0
    with pytest.raises(DimensionMismatchError):
        fs.deterministic((X,), (Y,), lambda v: (0, 0))


def test_reference_state_and_diff(rng):
    f = kernel(rng, (X,), (Z,))
    np.testing.assert_allclose(fs.reference_state(f).table, f.matrix.mean(axis=1))
    assert fs.max_abs_diff(f, fs.state((Z,), [1, 0, 0])) == float('inf')

import math
import warnings

import numpy as np
import pytest

from tensornorms.certificates import (
    basis_cover_degree,
    certify,
    mode_partition_degree,
    same_members_up_to_phase,
    structural_certificate,
)
from tensornorms.core import DenseTensor, TensorSpace
from tensornorms.decomposition import (
    Certificate,
    Decomposition,
    PureTensor,
    PureTuple,
    apply_mode_unitary,
    assemble,
    basis_pure,
    cardinality_ok,
    horizontal_product,
    normalize,
    nuclear_cost,
    pure_inner,
    tuple_power,
    vertical_product,
)
from tensornorms.errors import DimensionError

from conftest import e, random_pure, random_tuple, random_unitary


def test_pure_tensor_dense_and_length(rng):
    v = random_pure(rng, (2, 3))
    v = PureTensor((2 * v.factors[0], v.factors[1]))
    assert np.isclose(v.length, 2)
    assert np.allclose(v.to_dense().data, np.outer(*v.factors))
    assert np.isclose(v.normalized().length, 1)


def test_pure_inner_factorwise(rng):
    v, w = random_pure(rng, (2, 3, 2)), random_pure(rng, (2, 3, 2))
    assert np.isclose(pure_inner(v, w), np.vdot(w.to_dense().data, v.to_dense().data))
    with pytest.raises(DimensionError):
        pure_inner(v, random_pure(rng, (2, 2, 2)))


def test_assemble_empty_and_single():
    space = TensorSpace((2, 2))
    assert assemble(Decomposition(space)).equals(DenseTensor.zeros((2, 2)))
    d = Decomposition(space, ((3.0, basis_pure((2, 2), (0, 1))),))
    assert assemble(d).data[0, 1] == 3
    assert nuclear_cost(d) == 3


def test_normalize_sorts_and_absorbs_phase(rng):
    v, w = random_pure(rng, (2, 2)), random_pure(rng, (2, 2))
    d = Decomposition(TensorSpace((2, 2)), ((1j, v), (-3.0, PureTensor((2 * w.factors[0], w.factors[1])))))
    nd = normalize(d)
    assert np.allclose(nd.coeffs, [6, 1])
    assert all(np.isclose(p.length, 1) for p in nd.pures)
    assert assemble(nd).allclose(assemble(d), atol=1e-12)
    assert np.isclose(nuclear_cost(nd), nuclear_cost(d))


def test_normalize_drops_zero_factor_with_warning():
    space = TensorSpace((2, 2))
    d = Decomposition(space, ((1.0, PureTensor((e(2, 0), np.zeros(2)))), (2.0, basis_pure((2, 2), (1, 1)))))
    with pytest.warns(UserWarning, match="zero factor"):
        nd = normalize(d)
    assert len(nd) == 1


def test_normalize_is_idempotent(rng):
    d = Decomposition.from_terms(rng.standard_normal(4), [random_pure(rng, (2, 3)) for _ in range(4)])
    once = normalize(d)
    twice = normalize(once)
    assert np.allclose(once.coeffs, twice.coeffs)
    assert assemble(once).allclose(assemble(twice), atol=1e-12)


def test_horizontal_product_adds_degrees():
    E = certify(PureTuple.of([basis_pure((3,), (i,)) for i in range(3)]))
    assert E.certificate.t == 1
    H = horizontal_product(E, E)
    assert H.certificate.t == 2 and H.space.dims == (3, 3)
    assert tuple_power(E, 3).certificate.t == 3
    with pytest.raises(ValueError):
        horizontal_product(E, E.prefix(2))


def test_vertical_product_order_and_degree():
    E2 = certify(PureTuple.of([basis_pure((2, 2), (i, i)) for i in range(2)]))
    E3 = certify(PureTuple.of([basis_pure((3, 3), (i, i)) for i in range(3)]))
    V = vertical_product(E2, E3)
    assert len(V) == 6 and V.space.dims == (6, 6)
    assert V.certificate.t == 2
    # (i, j) lexicographic: member 1 is e_0 ⊠ e_1 = e_1 in C^6.
    assert np.array_equal(V[1].factors[0], e(6, 1))


def test_mode_unitary_keeps_inner_products(rng):
    T = random_tuple(rng, 3, (2, 3))
    U = random_unitary(rng, 3)
    out = apply_mode_unitary(T, 1, U)
    assert np.allclose(out.gram(), T.gram())
    with pytest.raises(ValueError):
        apply_mode_unitary(T, 1, 2 * U)


def test_cardinality_guard():
    assert cardinality_ok(3, 9, 2) and not cardinality_ok(4, 9, 2)
    members = [basis_pure((2, 2), (i, j)) for i in range(2) for j in range(2)]
    with pytest.raises(AssertionError):
        PureTuple.of(members, Certificate(2.0, "bogus"))


def test_mode_partition_rule():
    # Pairwise counterexample: the best split only separates as a single group.
    triple = PureTuple.of([basis_pure((2, 2, 2), x) for x in ((0, 0, 0), (0, 1, 1), (1, 0, 1))])
    assert mode_partition_degree(triple) == 1
    diag = PureTuple.of([basis_pure((3, 3, 3), (i, i, i)) for i in range(3)])
    assert mode_partition_degree(diag) == 3
    assert math.isinf(mode_partition_degree(diag.prefix(1)))


def test_basis_cover_rule_on_group_tuple():
    n = 3
    tup = PureTuple.of([basis_pure((n,) * 3, (g, h, (-g - h) % n)) for g in range(n) for h in range(n)])
    assert basis_cover_degree(tup) == pytest.approx(1.5)
    assert structural_certificate(tup).t == pytest.approx(1.5)


def test_same_members_up_to_phase(rng):
    T = random_tuple(rng, 3, (2, 2))
    shuffled = PureTuple.of([T[2].scaled_first(1j), T[0], T[1].scaled_first(-1)])
    assert same_members_up_to_phase(T, shuffled)
    assert not same_members_up_to_phase(T, random_tuple(rng, 3, (2, 2)))

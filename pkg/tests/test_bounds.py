import math

import numpy as np
import pytest

from tensornorms.bounds import (
    analytic_spectral_upper,
    check_main_inequality,
    nuclear_interval,
    nuclear_lower_orthogonal,
    nuclear_lower_pairing,
    spectral_bounds,
    spectral_measure,
)
from tensornorms.canonical import (
    cyclic_group,
    determinant_tensor,
    dft_decomposition,
    glynn_decomposition,
    group_tensor,
    hadamard_spectral_override,
    matmul_tensor,
    permanent_tensor,
)
from tensornorms.core import DenseTensor, frobenius_norm
from tensornorms.decomposition import Decomposition, PureTensor
from tensornorms.errors import DegenerateInputError, InapplicableError, PreconditionError
from tensornorms.orthogonality import MeasureEstimate, MeasureStatus, bracket_alpha, bracket_alpha_upper

from conftest import random_tensor


def measure(value, alpha=1.0, status=MeasureStatus.CERTIFIED_UPPER):
    return MeasureEstimate(alpha, value, status, route="given")


def svd_decomposition(A):
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    return Decomposition.from_terms(s, [PureTensor((U[:, i], Vh[i])) for i in range(len(s))])


# --- spectral -------------------------------------------------------------


def test_spectral_bounds_matmul():
    T, dec = matmul_tensor(2, 2, 2)
    sb = spectral_bounds(T)
    assert sb.lower.value == pytest.approx(1, abs=1e-9) and sb.upper.value == 1
    assert sb.upper.certified and not sb.lower.certified


def test_spectral_bounds_cyclic3():
    sb = spectral_bounds(group_tensor(cyclic_group(3)))
    assert sb.lower.value == pytest.approx(math.sqrt(3), abs=1e-9)
    assert sb.upper.value == pytest.approx(math.sqrt(3), abs=1e-12)


def test_spectral_bounds_per2():
    sb = spectral_bounds(permanent_tensor(2))
    assert sb.lower.value == pytest.approx(1) and sb.upper.value == pytest.approx(1)


def test_spectral_bounds_random_matrix_oracle(rng):
    A = rng.standard_normal((4, 5)) + 1j * rng.standard_normal((4, 5))
    sb = spectral_bounds(DenseTensor(A))
    s1 = np.linalg.norm(A, 2)
    assert sb.lower.value == pytest.approx(s1, rel=1e-12)
    assert sb.upper.value == pytest.approx(s1, rel=1e-12)


def test_spectral_zero_tensor():
    with pytest.raises(DegenerateInputError):
        spectral_bounds(DenseTensor.zeros((2, 2)))


def test_analytic_registry_verifies_tensor():
    assert analytic_spectral_upper(determinant_tensor(3)) == ("det", 1.0)
    assert analytic_spectral_upper(permanent_tensor(4))[1] == pytest.approx(hadamard_spectral_override("per", 4))
    assert analytic_spectral_upper(matmul_tensor(1, 2, 3)[0]) == ("matmul", 1.0)
    # Same shape, different entries: not recognised.
    fake = DenseTensor(determinant_tensor(3).data * 2, provenance=("det", 3))
    assert analytic_spectral_upper(fake) is None


# --- nuclear lower bounds -------------------------------------------------


def test_pairing_matmul_structural():
    T, dec = matmul_tensor(2, 2, 2)
    S = dec.term_tuple()
    b = nuclear_lower_pairing(T, S, 1.0, bracket_alpha_upper(S, 1.0))
    assert b.value == pytest.approx(8) and b.certified


def test_pairing_per3_and_det3():
    P = permanent_tensor(3)
    b = nuclear_lower_pairing(P, (P,), 1.0, spectral_measure(P))
    assert b.value == pytest.approx(3 ** 1.5) and b.certified
    D = determinant_tensor(3)
    assert nuclear_lower_pairing(D, (D,), 1.0, spectral_measure(D)).value == pytest.approx(6)


def test_pairing_with_heuristic_measure_is_uncertified(rng):
    T, dec = matmul_tensor(2, 2, 2)
    S = dec.term_tuple()
    b = nuclear_lower_pairing(T, S, 1.0, bracket_alpha(S, 1.0))
    assert not b.certified
    with pytest.raises(ValueError):
        nuclear_lower_pairing(T, S, 0.5, bracket_alpha(S, 0.5))
    with pytest.raises(ValueError):
        nuclear_lower_pairing(T, S, 1.0, measure(1.0, alpha=2.0))


def test_orthogonal_route():
    _, dec = matmul_tensor(2, 2, 2)
    assert nuclear_lower_orthogonal(dec, 8, measure(1.0)).value == pytest.approx(8)
    d4 = dft_decomposition(4)
    assert nuclear_lower_orthogonal(d4, 4, measure(1.0)).value == pytest.approx(8)
    assert nuclear_lower_orthogonal(d4, 1, measure(1.0)).value == pytest.approx(2)
    with pytest.raises(PreconditionError):
        nuclear_lower_orthogonal(glynn_decomposition(3), 2, measure(1.0))
    with pytest.raises(ValueError):
        nuclear_lower_orthogonal(d4, 5, measure(1.0))


# --- intervals ------------------------------------------------------------


def test_interval_per3_glynn():
    I = nuclear_interval(permanent_tensor(3), glynn_decomposition(3))
    assert I.lower.value == pytest.approx(3 ** 1.5, abs=1e-9)
    assert I.upper.value == pytest.approx(3 ** 1.5, abs=1e-9)
    assert I.lower.certified and I.upper.certified


def test_interval_det3_basis_expansion():
    I = nuclear_interval(determinant_tensor(3))
    assert I.lower.value == pytest.approx(6) and I.upper.value == 6 and I.upper.route == "basis expansion"


def test_interval_matmul():
    T, dec = matmul_tensor(2, 2, 2)
    I = nuclear_interval(T, dec)
    assert I.lower.value == pytest.approx(8, abs=1e-9) and I.upper.value == pytest.approx(8, abs=1e-9)


def test_interval_rejects_wrong_decomposition():
    g = glynn_decomposition(3)
    with pytest.raises(PreconditionError):
        nuclear_interval(permanent_tensor(3), Decomposition(g.space, g.terms[:2]))


def test_interval_matrix_oracle(rng):
    for _ in range(10):
        A = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        trace_norm = np.linalg.svd(A, compute_uv=False).sum()
        loose = nuclear_interval(DenseTensor(A))
        assert loose.lower.value <= trace_norm + 1e-9 <= loose.upper.value + 2e-9
        tight = nuclear_interval(DenseTensor(A), svd_decomposition(A))
        assert tight.upper.value - tight.lower.value < 1e-9
        assert tight.lower.value == pytest.approx(trace_norm, abs=1e-9)


def test_gram_route_monotone_in_spectral_bound(rng):
    T = random_tensor(rng, (2, 2, 2))
    lo = frobenius_norm(T) ** 2
    uppers = sorted(spectral_bounds(T).routes.values(), reverse=True)
    bounds = [nuclear_lower_pairing(T, (T,), 1.0, measure(u)).value for u in uppers]
    assert all(b <= c + 1e-12 for b, c in zip(bounds, bounds[1:]))
    I = nuclear_interval(T)
    assert I.lower_routes["gram"].value == pytest.approx(lo / min(spectral_bounds(T).routes.values()))


def test_interval_report_shape():
    d = nuclear_interval(determinant_tensor(2)).to_dict()
    assert set(d["lower"]) == {"value", "certified", "route"}
    assert set(d["upper"]) == {"value", "certified", "route"}


# --- main inequality ------------------------------------------------------


def test_main_inequality_matmul_copies():
    res = check_main_inequality([1] * 8, [1] * 8, 8, 8, 1.0, 1.0, 0.0)
    assert res.holds and res.lhs == pytest.approx(8) and res.rhs == pytest.approx(8) and res.delta == 0


def test_main_inequality_cyclic3_first_term():
    s = [math.sqrt(3)] * 3
    res = check_main_inequality(s, s, 1, 1, 1.0, 1.0, 0.0)
    assert res.holds and res.lhs == pytest.approx(math.sqrt(3)) and res.rhs == pytest.approx(math.sqrt(3))


def test_main_inequality_zero_padding():
    # delta = 2*1.5 - 1 = 2 > W = 1: inapplicable.
    with pytest.raises(InapplicableError):
        check_main_inequality([2.0, 1.0], [3.0], 2, 1, 1.5, 1.0, 0.0)
    ok = check_main_inequality([2.0, 1.0], [3.0], 2, 2, 1.0, 1.0, 0.0)
    assert ok.delta == 0 and ok.lhs == pytest.approx(3.0) and ok.holds


def test_main_inequality_argument_checks():
    with pytest.raises(ValueError):
        check_main_inequality([1, 2], [1], 1, 1, 1, 1, 0)
    with pytest.raises(ValueError):
        check_main_inequality([1], [1], 0, 1, 1, 1, 0)

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from berezin.errors import ConfigurationError, DomainError, UsageError
from berezin.rkhs import (
    Kind,
    SpaceSpec,
    evaluate,
    inner_product,
    kernel_matrix,
    kernel_vector,
    make_space,
    normalize,
    normalized_kernel,
)

disk_points = st.builds(
    lambda r, t: r * cmath.exp(1j * t),
    st.floats(0.0, 0.99),
    st.floats(0.0, 2 * math.pi),
)


def test_make_space_echo():
    assert make_space("hardy", 2) == SpaceSpec(Kind.HARDY, 2)
    s = make_space("Bergman", 128)
    assert s.kind is Kind.BERGMAN and s.dim == 128


@pytest.mark.parametrize("dim", [1, 0, -3, 2.5])
def test_make_space_rejects_small_dim(dim):
    with pytest.raises(ConfigurationError):
        make_space("hardy", dim)


def test_make_space_rejects_unknown_kind():
    with pytest.raises(ConfigurationError):
        make_space("dirichlet", 4)


def test_r_max_not_part_of_identity():
    assert make_space("hardy", 4, 0.9) == make_space("hardy", 4, 0.99)
    with pytest.raises(ConfigurationError):
        make_space("hardy", 4, 1.0)


@pytest.mark.parametrize("kind", ["hardy", "bergman"])
def test_kernel_at_origin_is_e0(kind):
    k = kernel_vector(make_space(kind, 7), 0)
    np.testing.assert_array_equal(k.coeffs, np.eye(7)[0])
    assert k.norm_sq == 1.0


def test_hardy_kernel_half():
    k = kernel_vector(make_space("hardy", 2), 0.5)
    np.testing.assert_allclose(k.coeffs, [1, 0.5])
    assert k.norm_sq == pytest.approx(1.25)


def test_bergman_kernel_half():
    k = kernel_vector(make_space("bergman", 3), 0.5)
    np.testing.assert_allclose(k.coeffs, [1, math.sqrt(2) * 0.5, math.sqrt(3) * 0.25])


def test_kernel_is_conjugate_of_basis_values():
    lam = 0.3 - 0.4j
    k = kernel_vector(make_space("hardy", 3), lam)
    np.testing.assert_allclose(k.coeffs, [1, lam.conjugate(), lam.conjugate() ** 2])


@given(disk_points)
def test_hardy_norm_sq_is_geometric_sum(lam):
    n = 16
    x = abs(lam) ** 2
    expected = n if x == 1 else (1 - x ** n) / (1 - x) if x else 1.0
    assert kernel_vector(make_space("hardy", n, 0.995), lam).norm_sq == pytest.approx(expected, rel=1e-12)


def test_normalize():
    k = normalize(kernel_vector(make_space("hardy", 2), 0.5))
    np.testing.assert_allclose(k.coeffs, [0.8944271909999159, 0.4472135954999579])
    assert k.normalized
    e0 = normalized_kernel(make_space("hardy", 5), 0)
    np.testing.assert_array_equal(e0.coeffs, np.eye(5)[0])
    assert normalize(e0) is e0


def test_domain_errors():
    s = make_space("hardy", 4, 0.9)
    with pytest.raises(DomainError):
        kernel_vector(s, 1.0)
    with pytest.raises(DomainError):
        kernel_vector(s, 0.95)
    with pytest.raises(DomainError):
        kernel_matrix(s, [0.1, 0.95j])


def test_inner_product_basics():
    e = np.eye(4)
    assert inner_product(e[0], e[0]) == 1
    assert inner_product(e[0], e[1]) == 0
    u = np.array([1j, 0, 0, 0])
    # linear in the first slot, conjugate-linear in the second
    assert inner_product(u, e[0]) == 1j
    assert inner_product(e[0], u) == -1j
    with pytest.raises(UsageError):
        inner_product(e[0], np.ones(3))


@settings(max_examples=50)
@given(disk_points, st.sampled_from(["hardy", "bergman"]))
def test_normalized_kernel_is_unit(lam, kind):
    k = normalized_kernel(make_space(kind, 32), lam)
    assert abs(inner_product(k, k) - 1) <= 1e-12


def test_kernel_matrix_matches_pointwise():
    s = make_space("bergman", 9)
    pts = [0, 0.5j, -0.7 + 0.1j]
    rows = kernel_matrix(s, pts)
    for row, p in zip(rows, pts):
        np.testing.assert_allclose(row, normalized_kernel(s, p).coeffs, atol=1e-15)


@given(disk_points)
def test_reproducing_property(lam):
    # f(lam) = <f, k_lam> for a model function f
    s = make_space("bergman", 6)
    f = np.array([1, -2j, 0.5, 0, 3, 1 + 1j])
    assert evaluate(s, f, lam) == pytest.approx(inner_product(f, kernel_vector(s, lam)), abs=1e-12)

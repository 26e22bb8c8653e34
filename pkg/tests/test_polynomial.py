from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isoclifford.exact import ExactMatrix, Subspace, dot, exact_vector, involution_eigenspace
from isoclifford.focal import common_kernel_plus, mplus_point, random_mplus_point, special_eigenvector
from isoclifford.polynomial import FkmPolynomial, condition_b_component, killing_tangency, verify_cartan_muenzner
from isoclifford.system import CliffordSystem, conjugate, make_system, random_orthogonal, random_rational
from oracles import fd_gradient, fd_jacobian


def perturbed(s: CliffordSystem) -> CliffordSystem:
    bump = np.zeros((s.dim, s.dim), dtype=object)
    bump[:] = 0
    bump[0, 1] = bump[1, 0] = Fraction(1, 3)
    mats = list(s.matrices)
    mats[1] = mats[1] + ExactMatrix(bump)
    return CliffordSystem(s.m, s.l, tuple(mats))


class TestValue:
    def test_zero(self):
        p = FkmPolynomial(make_system(3, 2))
        assert p.value(exact_vector([0] * 16)) == 0

    def test_eplus_point_is_minus_one(self):
        s = make_system(2, 2)
        x = exact_vector(involution_eigenspace(s.matrices[0], 1).basis[0])
        p = FkmPolynomial(s)
        assert p.value(x) == -dot(x, x) ** 2

    def test_degenerate_system_is_constant(self, rng):
        s = make_system(4, 1)
        p = FkmPolynomial(s)
        for _ in range(5):
            x = random_rational(rng, s.dim)
            assert p.value(x) == -dot(x, x) ** 2

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            FkmPolynomial(make_system(1, 2)).value([1, 2, 3])

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_homogeneity(self, seed):
        rng = np.random.default_rng(seed)
        p = FkmPolynomial(make_system(3, 2))
        x = random_rational(rng, 16)
        assert p.value(2 * x) == 16 * p.value(x)

    def test_range_on_sphere(self, rng):
        s = make_system(3, 2)
        p = FkmPolynomial(s)
        x = rng.standard_normal((10_000, s.dim))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        px = np.einsum("kij,nj->nki", s.float_stack(), x)
        f = 1 - 2 * np.sum(np.einsum("nki,ni->nk", px, x) ** 2, axis=1)
        assert f.min() >= -1 - 1e-12 and f.max() <= 1 + 1e-12
        y = mplus_point(s)
        assert p.value(y.x) == dot(y.x, y.x) ** 2

    @settings(max_examples=6, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_conjugation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        s = make_system(2, 2)
        a = random_orthogonal(s.dim, rng, rotations=4)
        x = random_rational(rng, s.dim)
        assert FkmPolynomial(conjugate(s, a)).value(a @ x) == FkmPolynomial(s).value(x)


class TestDerivatives:
    def test_gradient_zero_and_on_mplus(self):
        s = make_system(3, 2)
        p = FkmPolynomial(s)
        assert all(v == 0 for v in p.gradient(exact_vector([0] * 16)))
        x = mplus_point(s).x
        assert list(p.gradient(x)) == list(4 * dot(x, x) * x)

    def test_hessian_at_zero_and_symmetry(self, rng):
        s = make_system(2, 2)
        p = FkmPolynomial(s)
        assert p.hessian(exact_vector([0] * s.dim)).is_zero()
        h = p.hessian(random_rational(rng, s.dim))
        assert h.is_symmetric()

    @pytest.mark.parametrize("m,k", [(1, 3), (3, 2), (5, 1)])
    def test_trace_of_hessian(self, m, k, rng):
        s = make_system(m, k)
        p = FkmPolynomial(s)
        for _ in range(5):
            x = random_rational(rng, s.dim)
            assert p.hessian(x).trace() == 8 * (s.m2 - s.m1) * dot(x, x)

    @pytest.mark.parametrize("m,k", [(1, 3), (2, 2), (4, 2)])
    def test_finite_differences(self, m, k, rng):
        s = make_system(m, k)
        p = FkmPolynomial(s)
        for _ in range(5):
            x = rng.standard_normal(s.dim)
            g = p.gradient(x)
            assert np.max(np.abs(fd_gradient(p.value, x) - g)) < 1e-6 * np.max(np.abs(g))
            h = p.hessian(x)
            assert np.max(np.abs(fd_jacobian(p.gradient, x) - h)) < 1e-6 * np.max(np.abs(h))

    def test_exact_and_float_paths_agree(self, rng):
        s = make_system(3, 2)
        p = FkmPolynomial(s)
        x = random_rational(rng, s.dim)
        xf = np.array([float(v) for v in x])
        assert abs(float(p.value(x)) - p.value(xf)) < 1e-9 * abs(float(p.value(x)))
        assert np.allclose(p.hessian(x).to_float(), p.hessian(xf))

    def test_spherical_gradient_norm(self, rng):
        s = make_system(3, 2)
        p = FkmPolynomial(s)
        for _ in range(50):
            x = rng.standard_normal(s.dim)
            x /= np.linalg.norm(x)
            f = p.value(x)
            gs = p.gradient(x) - 4 * f * x
            assert abs(gs @ gs - 16 * (1 - f * f)) < 1e-9


class TestCartanMuenzner:
    @pytest.mark.parametrize("m,k", [(1, 3), (2, 2), (4, 2), (6, 1)])
    def test_exact_zero(self, m, k):
        r = verify_cartan_muenzner(FkmPolynomial(make_system(m, k)), n_samples=5, seed=1)
        assert r["exact_zero"] and r["residual_grad"] == 0 and r["passed"]

    def test_float_residual(self):
        r = verify_cartan_muenzner(FkmPolynomial(make_system(1, 3)), n_samples=1000, tol=1e-9, exact=False)
        assert r["passed"] and r["residual_grad"] < 1e-9 and r["residual_laplace"] < 1e-9

    def test_perturbed_system_fails(self):
        r = verify_cartan_muenzner(FkmPolynomial(perturbed(make_system(2, 2))), n_samples=3)
        assert not r["passed"] and r["residual_grad"] > 0

    def test_needs_samples(self):
        with pytest.raises(ValueError):
            verify_cartan_muenzner(FkmPolynomial(make_system(1, 2)), n_samples=0)


class TestKillingTangency:
    def test_exact_zero(self):
        assert killing_tangency(FkmPolynomial(make_system(3, 2)), 0, 1)["max_abs"] == 0

    def test_on_mplus(self):
        s = make_system(3, 2)
        x = mplus_point(s).x
        p = FkmPolynomial(s)
        for i, j in [(0, 1), (1, 3), (2, 3)]:
            assert dot(p.gradient(x), s.matrices[i] @ s.matrices[j] @ x) == 0

    def test_perturbed_nonzero(self):
        assert killing_tangency(FkmPolynomial(perturbed(make_system(2, 2))), 0, 1)["max_abs"] != 0

    def test_same_index_rejected(self):
        with pytest.raises(ValueError):
            killing_tangency(FkmPolynomial(make_system(1, 2)), 1, 1)


@pytest.fixture(scope="module")
def setup():
    s = make_system(3, 2)
    x, _, _ = special_eigenvector([s.product((0, 1, 2, 3))])
    kernel, _ = common_kernel_plus(s, x)
    normals = Subspace.span([q @ x for q in s.matrices], s.dim)
    image = (Subspace.span([x], s.dim) + normals + kernel).orthogonal_complement()
    return s, x, kernel, normals, image


class TestConditionB:

    def _combo(self, rng, space):
        out = exact_vector([0] * space.ambient_dim)
        for b in space.basis:
            out = out + int(rng.integers(-3, 4)) * b
        return out

    def test_zero_k_or_b(self, setup, rng):
        s, x, kernel, normals, image = setup
        p = FkmPolynomial(s)
        n, k, b = self._combo(rng, normals), self._combo(rng, kernel), self._combo(rng, image)
        zero = exact_vector([0] * s.dim)
        assert condition_b_component(p, x, n, zero, b, kernel, image) == (0, 0)
        assert condition_b_component(p, x, n, k, zero, kernel, image) == (0, 0)

    def test_agreement(self, setup, rng):
        s, x, kernel, normals, image = setup
        p = FkmPolynomial(s)
        seen_nonzero = False
        for _ in range(5):
            n, k, b = self._combo(rng, normals), self._combo(rng, kernel), self._combo(rng, image)
            closed, extracted = condition_b_component(p, x, n, k, b)
            assert closed == extracted
            seen_nonzero |= closed != 0
        assert seen_nonzero

    def test_refuses_without_condition_a(self, rng):
        s = make_system(3, 2)
        x = random_mplus_point(s, np.random.default_rng(0)).x
        p = FkmPolynomial(s)
        n = s.matrices[0] @ x
        with pytest.raises(ValueError, match="condition"):
            condition_b_component(p, x, n, n, n)

    def test_rejects_vectors_outside_subspaces(self, setup):
        s, x, kernel, normals, image = setup
        p = FkmPolynomial(s)
        with pytest.raises(ValueError):
            condition_b_component(p, x, x, kernel.basis[0], image.basis[0], kernel, image)

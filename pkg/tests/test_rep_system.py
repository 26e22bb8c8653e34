from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isoclifford.exact import ExactMatrix, dot
from isoclifford.rep import CliffordRep, delta, irreducible_generators, left_multiplications, verify_rep
from isoclifford.system import (CliffordSystem, basis_element, build_system, conjugate, direct_sum,
                                enumerate_classes, flip_p0, inner, make_system, product_trace, quadratic_sum,
                                random_orthogonal, random_rational, random_unit_rational, sphere_element,
                                sphere_identity_checks, truncated_extension, verify_system)
from oracles import delta_oracle


class TestDelta:
    @pytest.mark.parametrize("m,expected", [(1, 1), (9, 16), (12, 64)])
    def test_table_values(self, m, expected):
        assert delta(m) == expected

    def test_periodicity(self):
        for m in range(1, 9):
            assert delta(m + 8) == 16 * delta(m)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            delta(0)


class TestRepresentations:
    def test_m1_has_no_generators(self):
        rep = irreducible_generators(1)
        assert rep.generators == () and rep.delta == 1

    def test_m2_is_a_quarter_turn(self):
        (e,) = irreducible_generators(2).generators
        assert e.shape == (2, 2)
        assert e @ e == -ExactMatrix.identity(2)
        assert e.is_skew()

    def test_m9_all_anticommutators(self):
        rep = irreducible_generators(9)
        assert len(rep.generators) == 8 and rep.delta == 16
        ident = ExactMatrix.identity(16)
        for i, a in enumerate(rep.generators):
            for j, b in enumerate(rep.generators):
                expected = -2 * ident if i == j else ExactMatrix.zeros(16, 16)
                assert a @ b + b @ a == expected

    def test_m5_verifies(self):
        assert verify_rep(irreducible_generators(5)) == []

    def test_deterministic(self):
        assert irreducible_generators.__wrapped__(6) == irreducible_generators.__wrapped__(6)

    def test_identity_generator_is_reported(self):
        gens = list(irreducible_generators(3).generators)
        gens[0] = ExactMatrix.identity(4)
        report = verify_rep(CliffordRep(3, 4, tuple(gens)))
        assert any("skew" in r for r in report) and any("-Id" in r for r in report)

    def test_duplicate_generator_is_reported(self):
        gens = list(irreducible_generators(3).generators)
        gens[1] = gens[0]
        report = verify_rep(CliffordRep(3, 4, tuple(gens)))
        assert report == ["E_1E_2 + E_2E_1 != 0"]

    def test_quaternion_units_multiply(self):
        i, j, k = left_multiplications(4)
        assert np.array_equal(i @ j, k)

    def test_json_round_trip(self):
        rep = irreducible_generators(4)
        assert CliffordRep.from_json(rep.to_json()) == rep

    @pytest.mark.parametrize("m", range(1, 17))
    def test_dimension_matches_table(self, m):
        rep = irreducible_generators(m)
        assert rep.delta == delta_oracle(m)
        for g in rep.generators:
            assert g.shape == (delta_oracle(m), delta_oracle(m))


class TestSystems:
    def test_m1_matrices(self):
        s = build_system(irreducible_generators(1))
        assert s.matrices[0] == ExactMatrix([[1, 0], [0, -1]])
        assert s.matrices[1] == ExactMatrix([[0, 1], [1, 0]])

    def test_m4_trace(self):
        s = build_system(irreducible_generators(4))
        assert s.dim == 8 and abs(s.product_trace()) == 8

    def test_m9_size(self):
        s = build_system(irreducible_generators(9))
        assert len(s.matrices) == 10 and s.dim == 32

    def test_invalid_rep_rejected(self):
        gens = list(irreducible_generators(3).generators)
        gens[0] = ExactMatrix.identity(4)
        with pytest.raises(ValueError):
            build_system(CliffordRep(3, 4, tuple(gens)))

    def test_direct_sum_traces(self):
        a = build_system(irreducible_generators(4))
        assert abs(direct_sum(a, a).product_trace()) == 16
        assert direct_sum(a, flip_p0(a)).product_trace() == 0

    def test_direct_sum_signs_and_mismatch(self):
        a = make_system(1, 1)
        s = direct_sum(direct_sum(a, a), a)
        assert (s.l, s.m1, s.m2) == (3, 1, 1)
        assert s.summand_signs == (1, 1, 1)
        with pytest.raises(ValueError):
            direct_sum(make_system(1), make_system(2))

    def test_flip_p0(self):
        s = make_system(4)
        assert flip_p0(s).product_trace() == -s.product_trace()
        assert flip_p0(flip_p0(s)).matrices == s.matrices
        assert verify_system(flip_p0(make_system(3))) == []

    def test_verify_reports_breakage(self):
        s = make_system(2, 1)
        zeroed = CliffordSystem(s.m, s.l, (s.matrices[0], ExactMatrix.zeros(4, 4), s.matrices[2]))
        assert "P_1^2 != Id" in verify_system(zeroed)
        swapped = CliffordSystem(s.m, s.l, (s.matrices[1], s.matrices[0], s.matrices[2]))
        assert verify_system(swapped) == []

    def test_sphere_elements(self):
        s = make_system(3, 1)
        ident = ExactMatrix.identity(s.dim)
        assert sphere_element(s, [1, 0, 0, 0]).matrix == s.matrices[0]
        p = sphere_element(s, [Fraction(3, 5), Fraction(4, 5), 0, 0]).matrix
        assert p @ p == ident
        q = sphere_element(s, [1, 1, 0, 0]).matrix
        assert q @ q == ident * 2

    def test_product_trace_examples(self):
        assert abs(product_trace(make_system(4))) == 8
        assert product_trace(make_system(3)) == 0
        assert abs(product_trace(make_system(4, 3, (1, 1, -1)))) == 8

    def test_enumerate_classes(self):
        assert sorted(t for _, t in enumerate_classes(4, 3)) == [8, 24]
        assert len(enumerate_classes(3, 5)) == 1
        assert sorted(t for _, t in enumerate_classes(8, 2)) == [0, 32]

    def test_truncated_extension_is_extendable(self):
        s, ext = truncated_extension(8)
        full = CliffordSystem(9, s.l, s.matrices + (ext,))
        assert verify_system(full) == []
        assert s.product_trace() == 0

    def test_json_round_trip(self):
        s = make_system(4, 2, (1, -1))
        t = CliffordSystem.from_json(s.to_json())
        assert t.matrices == s.matrices and t.summand_signs == (1, -1)


class TestSphereIdentities:
    @pytest.mark.parametrize("m,k", [(1, 3), (3, 2), (4, 2), (5, 1)])
    def test_identity_suite(self, m, k, rng):
        for c in sphere_identity_checks(make_system(m, k), rng, samples=3):
            assert c["computed"] == c["expected"], c["name"]

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_inner_product_identity(self, seed):
        rng = np.random.default_rng(seed)
        s = make_system(3, 2)
        p = sphere_element(s, random_rational(rng, s.m + 1)).matrix
        q = sphere_element(s, random_rational(rng, s.m + 1)).matrix
        x = random_rational(rng, s.dim)
        assert dot(p @ x, q @ x) == inner(p, q) * dot(x, x)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_h_invariant_under_sphere(self, seed):
        rng = np.random.default_rng(seed)
        s = make_system(2, 2)
        p = sphere_element(s, random_unit_rational(rng, s.m + 1)).matrix
        x = random_rational(rng, s.dim)
        assert quadratic_sum(s, p @ x) == quadratic_sum(s, x)

    def test_product_symmetry_pattern(self):
        s = make_system(5, 1)
        for r in range(1, 6):
            q = s.product(range(r))
            if r % 4 in (0, 1):
                assert q.is_symmetric()
            else:
                assert q.is_skew()

    @settings(max_examples=8, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_conjugation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        s = make_system(4, 2, (1, 1))
        a = random_orthogonal(s.dim, rng, rotations=5)
        assert (a @ a.T).is_identity()
        t = conjugate(s, a)
        assert verify_system(t) == []
        assert t.product_trace() == s.product_trace()

    def test_unit_rational_is_unit(self, rng):
        c = random_unit_rational(rng, 6)
        assert sum(v * v for v in c) == 1
        assert basis_element(make_system(5), 2).norm2 == 1

"""Closed-form ground truth for rational inputs, checked against itself
and against the main pipeline at small sizes."""

import math

import numpy as np
import pytest

from epsilon_interp import (
    EntirePart,
    MeromorphicTestFunction,
    NodeMultiset,
    SampleSet,
    assemble_system,
    build_interpolant,
    build_table,
    cofactor_coeffs,
    coupling_minor,
    coupling_minor_factored,
    default_direction,
    denominator_expansion,
    error_closed_form,
    error_determinant_form,
    from_catalog,
    newton_eval,
    newton_remainder,
    pole_kernel_dd,
    psi,
    rational_dd,
    refined_constants,
    residue_coupling,
    system_closed_form,
)

from conftest import circle_nodes

Q2 = default_direction(2)


class TestPoleKernel:
    def test_zeroth_order_is_value(self):
        assert pole_kernel_dd(NodeMultiset([0.0]), 1, 1, 1.0) == pytest.approx(-1.0)

    def test_two_point(self):
        assert pole_kernel_dd(NodeMultiset([0, 1]), 1, 2, 2.0) == pytest.approx(-0.5)

    def test_confluent_pair(self):
        got = pole_kernel_dd(NodeMultiset([0.0, 0.0]), 1, 2, 2.0)
        assert got == pytest.approx(-0.25)

    def test_kernel_at_node_rejected(self):
        with pytest.raises(ZeroDivisionError):
            pole_kernel_dd(NodeMultiset([0, 1]), 1, 2, 1.0)

    def test_matches_tableau(self):
        # 1/(z-a) tabulated directly vs the closed form
        rng = np.random.default_rng(5)
        for _ in range(15):
            L = int(rng.integers(1, 7))
            pts = list(rng.normal(size=L) + 1j * rng.normal(size=L))
            a = complex(rng.normal() + 4, rng.normal())
            nodes = NodeMultiset(pts)
            samples = SampleSet.from_function(
                lambda z, r: np.array([(-1) ** r * math.factorial(r)
                                       / (z - a) ** (r + 1)]),
                nodes,
            )
            table = build_table(nodes, samples)
            want = pole_kernel_dd(nodes, 1, L, a)
            assert np.allclose(table.entry(1, L)[0], want, rtol=1e-10)


class TestRationalDD:
    def test_worked_single_pole(self):
        F = MeromorphicTestFunction(poles=[3.0], residues=[np.array([1.0, 1.0])])
        got = rational_dd(F, NodeMultiset([0, 1, 2]), 1, 3)
        assert np.allclose(got, [-1 / 6, -1 / 6], rtol=1e-14)

    def test_two_pole_direct(self):
        F = MeromorphicTestFunction(
            poles=[2.0, -3.0],
            residues=[np.array([1.0, 0.0]), np.array([0.0, 1.0])],
        )
        got = rational_dd(F, NodeMultiset([0, 1]), 1, 2)
        # -v1/psi(2) - v2/psi(-3) with psi(z) = z(z-1)
        assert np.allclose(got, [-1 / 2, -1 / 12], rtol=1e-14)

    def test_polynomial_part_precondition(self):
        F = MeromorphicTestFunction(
            poles=((3.0 + 0j),),
            residues=(((1.0 + 0j),),),
            poly=(((1.0 + 0j),), ((2.0 + 0j),)),  # degree 1
        )
        with pytest.raises(ValueError):
            rational_dd(F, NodeMultiset([0, 1]), 1, 2)  # order 1 too low
        # order 2 annihilates the linear part
        got = rational_dd(F, NodeMultiset([0, 1, 2]), 1, 3)
        assert np.allclose(got, [-1 / 6], rtol=1e-13)

    def test_entire_part_rejected(self):
        F = from_catalog("meromorphic_exp")
        with pytest.raises(ValueError):
            rational_dd(F, NodeMultiset([0, 1, 2]), 1, 3)


class TestNewtonRemainder:
    def test_zero_at_nodes(self, two_pole):
        nodes = NodeMultiset([0.3, -0.2, 0.7])
        got = newton_remainder(two_pole, nodes, 1, 3, 0.3)
        assert np.allclose(got, 0.0, atol=1e-14)

    def test_matches_direct_difference(self, two_pole):
        nodes = NodeMultiset([0.3, -0.2, 0.7])
        samples = SampleSet.from_function(
            lambda z, r: two_pole(z, r), nodes, dim=2
        )
        table = build_table(nodes, samples)
        for z in (1.5, 0.1 + 0.4j, -1.2j):
            direct = two_pole(z, 0) - newton_eval(table, 1, 3, z)
            closed = newton_remainder(two_pole, nodes, 1, 3, z)
            assert np.allclose(closed, direct, rtol=1e-11, atol=1e-14)

    def test_large_z_leading_term(self):
        F = MeromorphicTestFunction(poles=[3.0], residues=[np.array([2.0, -1.0])])
        nodes = NodeMultiset([0, 1, 2])
        z = 1e6
        got = newton_remainder(F, nodes, 1, 3, z)
        lead = psi(nodes, 1, 3, z) / (z * psi(nodes, 1, 3, 3.0))
        assert np.allclose(got / lead, [2.0, -1.0], rtol=1e-5)


class TestResidueCoupling:
    def test_k1_is_plain_projection(self, two_pole):
        nodes = NodeMultiset([0, 1, 2])
        alpha = residue_coupling(two_pole, nodes, 2, 1, np.array([1.0, 0.0]))
        assert alpha.shape == (1, 2)
        assert alpha[0, 0] == pytest.approx(1.0)  # (q, v_1)
        assert alpha[0, 1] == pytest.approx(0.0, abs=1e-15)

    def test_last_row_has_empty_product(self, two_pole):
        rng = np.random.default_rng(7)
        nodes = circle_nodes(rng, 8)
        alpha = residue_coupling(two_pole, nodes, 6, 2, Q2)
        for s, v in enumerate(two_pole.residues):
            assert alpha[-1, s] == pytest.approx(np.sum(np.conj(Q2) * v))

    def test_conjugate_scaling_in_q(self, two_pole):
        rng = np.random.default_rng(9)
        nodes = circle_nodes(rng, 8)
        lam = 0.7 - 1.9j
        a = residue_coupling(two_pole, nodes, 6, 2, Q2)
        b = residue_coupling(two_pole, nodes, 6, 2, lam * Q2)
        assert np.allclose(b, np.conj(lam) * a, rtol=1e-13)


class TestSystemClosedForm:
    def test_matches_tableau_route_rational(self, two_pole):
        rng = np.random.default_rng(11)
        nodes = circle_nodes(rng, 8)
        samples = SampleSet.from_function(
            lambda z, r: two_pole(z, r), nodes, dim=2
        )
        u_tab = assemble_system(build_table(nodes, samples), 2, Q2)
        u_closed = system_closed_form(two_pole, nodes, 6, 2, Q2)
        assert np.allclose(u_closed, u_tab, rtol=1e-9, atol=1e-12)

    def test_matches_tableau_route_with_entire_part(self):
        F = from_catalog("meromorphic_exp")
        rng = np.random.default_rng(13)
        nodes = circle_nodes(rng, 7)
        samples = SampleSet.from_function(lambda z, r: F(z, r), nodes, dim=F.dim)
        u_tab = assemble_system(build_table(nodes, samples), 1, Q2)
        u_closed = system_closed_form(F, nodes, 6, 1, Q2)
        assert np.allclose(u_closed, u_tab, rtol=1e-9, atol=1e-12)

    def test_depth_precondition(self):
        F = MeromorphicTestFunction(
            poles=((3.0 + 0j),),
            residues=(((1.0 + 0j),),),
            poly=(((1.0 + 0j),), ((2.0 + 0j),)),  # degree 1 needs p - k > 1
        )
        nodes = NodeMultiset([0.0, 0.5, 1.0, 1.5, 2.0])
        with pytest.raises(ValueError):
            system_closed_form(F, nodes, 3, 2, np.array([1.0]))


class TestCouplingMinor:
    def test_k1_single_entry(self, two_pole):
        alpha = residue_coupling(
            two_pole, NodeMultiset([0, 1, 2]), 2, 1, np.array([1.0, 0.0])
        )
        assert coupling_minor(alpha, [0]) == pytest.approx(alpha[0, 0])

    def test_repeated_column_vanishes(self, two_pole):
        rng = np.random.default_rng(15)
        alpha = residue_coupling(two_pole, circle_nodes(rng, 8), 6, 2, Q2)
        assert coupling_minor(alpha, [0, 0]) == pytest.approx(0.0, abs=1e-14)

    def test_column_count_checked(self, two_pole):
        rng = np.random.default_rng(17)
        alpha = residue_coupling(two_pole, circle_nodes(rng, 8), 6, 2, Q2)
        with pytest.raises(ValueError):
            coupling_minor(alpha, [0])

    def test_factored_equals_determinant(self, two_pole):
        rng = np.random.default_rng(19)
        for p in (6, 10):
            alpha = residue_coupling(two_pole, circle_nodes(rng, p + 2), p, 2, Q2)
            det = coupling_minor(alpha, [0, 1])
            fac = coupling_minor_factored(two_pole, Q2, [0, 1])
            assert det == pytest.approx(fac, rel=1e-12)

    def test_worked_value_unit_direction(self, two_pole):
        # vandermonde({2,-3}) = -5, both projections 1, sign -1
        got = coupling_minor_factored(two_pole, np.array([1.0, 1.0]), [0, 1])
        assert got == pytest.approx(5.0)

    def test_no_p_dependence(self, two_pole):
        vals = [coupling_minor_factored(two_pole, Q2, [0, 1]) for _ in range(2)]
        assert vals[0] == vals[1] == pytest.approx(2.5)


class TestDenominatorExpansion:
    def test_equals_cofactor_determinant(self, two_pole):
        rng = np.random.default_rng(21)
        nodes = circle_nodes(rng, 8)
        u = system_closed_form(two_pole, nodes, 6, 2, Q2)
        M = cofactor_coeffs(u)
        for z in (0.4 + 0.3j, 1.5, -1.2j):
            det = sum(M[j] * psi(nodes, 1, j, z) for j in range(3))
            exp = denominator_expansion(two_pole, nodes, 6, 2, Q2, z)
            assert exp == pytest.approx(det, rel=1e-9)

    def test_k0_is_one(self, two_pole):
        rng = np.random.default_rng(23)
        nodes = circle_nodes(rng, 6)
        assert denominator_expansion(two_pole, nodes, 6, 0, Q2, 0.7) == 1.0

    def test_vanishes_at_poles_when_all_modeled(self, two_pole):
        rng = np.random.default_rng(25)
        nodes = circle_nodes(rng, 8)
        ref = denominator_expansion(two_pole, nodes, 6, 2, Q2, 0.5 + 0.2j)
        for a in (2.0, -3.0):
            at_pole = denominator_expansion(two_pole, nodes, 6, 2, Q2, a)
            assert abs(at_pole) <= 1e-12 * abs(ref)

    def test_entire_part_rejected(self):
        F = from_catalog("meromorphic_exp")
        rng = np.random.default_rng(27)
        with pytest.raises(ValueError):
            denominator_expansion(F, circle_nodes(rng, 7), 6, 1, Q2, 0.5)


class TestErrorForms:
    def test_triple_agreement(self, two_pole):
        rng = np.random.default_rng(29)
        nodes = circle_nodes(rng, 11)  # p=10, k=1
        samples = SampleSet.from_function(
            lambda z, r: two_pole(z, r), nodes, dim=2
        )
        interp = build_interpolant(nodes, samples, 1, q=Q2)
        z = 0.62 + 0.41j
        direct = two_pole(z, 0) - interp.predict(z)
        closed = error_closed_form(two_pole, nodes, 10, 1, Q2, z)
        deter = error_determinant_form(two_pole, nodes, 10, 1, Q2, z)
        scale = float(np.max(np.abs(closed)))
        assert np.max(np.abs(closed - deter)) <= 1e-8 * scale
        assert np.max(np.abs(closed - direct)) <= 1e-8 * scale

    def test_determinant_form_with_entire_part(self):
        F = from_catalog("meromorphic_exp")
        rng = np.random.default_rng(31)
        nodes = circle_nodes(rng, 9)  # p=8, k=1
        samples = SampleSet.from_function(lambda z, r: F(z, r), nodes, dim=F.dim)
        interp = build_interpolant(nodes, samples, 1, q=Q2)
        z = 0.55 - 0.38j
        direct = F(z, 0) - interp.predict(z)
        deter = error_determinant_form(F, nodes, 8, 1, Q2, z)
        scale = max(float(np.max(np.abs(direct))), 1e-300)
        assert np.max(np.abs(deter - direct)) <= 1e-7 * scale

    def test_reproducing_case_exactly_zero(self, two_pole):
        rng = np.random.default_rng(33)
        nodes = circle_nodes(rng, 8)
        got = error_closed_form(two_pole, nodes, 6, 2, Q2, 1.7 + 0.3j)
        assert np.all(got == 0)

    def test_direction_scale_invariance(self, two_pole):
        rng = np.random.default_rng(35)
        nodes = circle_nodes(rng, 9)
        z = 0.5 + 0.5j
        lam = 2.3 - 0.4j
        a = error_closed_form(two_pole, nodes, 8, 1, Q2, z)
        b = error_closed_form(two_pole, nodes, 8, 1, lam * Q2, z)
        assert np.allclose(a, b, rtol=1e-10)

    def test_k_exceeding_pole_count_rejected(self, two_pole):
        rng = np.random.default_rng(37)
        with pytest.raises(ValueError):
            error_closed_form(two_pole, circle_nodes(rng, 9), 6, 3, Q2, 1.5)


class TestRefinedConstants:
    def test_two_pole_prefactor_exact(self, two_pole):
        # (T_2/T_1)(z_2 - z_1) = 1 * (-3 - 2) = -5, independent of p
        rng = np.random.default_rng(39)
        for p in (6, 10, 14):
            nodes = circle_nodes(rng, p + 1)
            c1, b1 = refined_constants(two_pole, nodes, p, 1, Q2, 1, 1.5)
            assert c1 == pytest.approx(-5.0, rel=1e-12)
            assert np.all(np.isfinite(b1))

    def test_direction_scale_invariance(self, two_pole):
        rng = np.random.default_rng(41)
        nodes = circle_nodes(rng, 11)
        lam = -1.4 + 0.8j
        c_a, b_a = refined_constants(two_pole, nodes, 10, 1, Q2, 1, 1.5)
        c_b, b_b = refined_constants(two_pole, nodes, 10, 1, lam * Q2, 1, 1.5)
        assert c_a == pytest.approx(c_b, rel=1e-12)
        assert np.allclose(b_a, b_b, rtol=1e-10)

    def test_index_bounds(self, two_pole):
        rng = np.random.default_rng(43)
        nodes = circle_nodes(rng, 11)
        with pytest.raises(ValueError):
            refined_constants(two_pole, nodes, 10, 1, Q2, 2, 1.5)

    def test_needs_spare_pole(self, two_pole):
        rng = np.random.default_rng(45)
        nodes = circle_nodes(rng, 12)
        with pytest.raises(ValueError):
            refined_constants(two_pole, nodes, 10, 2, Q2, 1, 1.5)


def test_entire_part_catalog_entry_evaluates():
    F = from_catalog("meromorphic_exp")
    assert F.entire is not None
    z = 0.3 + 0.1j
    val = F(z, 0)
    assert np.all(np.isfinite(val))
    assert F.dim == val.size

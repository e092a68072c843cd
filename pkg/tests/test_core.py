"""Node containers, nodal polynomials, and the scaled-product arithmetic."""

import math

import numpy as np
import pytest

from epsilon_interp import (
    DimensionMismatchError,
    NodeMultiset,
    NonContiguousNodesError,
    NonFiniteValueError,
    ScaledProduct,
    inner,
    newton_to_monomial,
    psi,
    psi_scaled,
    vandermonde,
)


class TestNodeMultiset:
    def test_groups_contiguous_duplicates(self):
        nodes = NodeMultiset([2, 2, 5, 1j, 1j, 1j])
        assert list(nodes.groups) == [(2 + 0j, 2), (5 + 0j, 1), (1j, 3)]
        assert len(nodes) == 6

    def test_distinct_nodes_unit_multiplicity(self):
        nodes = NodeMultiset([0, 1, 2])
        assert all(r == 1 for _, r in nodes.groups)

    def test_non_contiguous_duplicate_rejected(self):
        with pytest.raises(NonContiguousNodesError):
            NodeMultiset([1, 2, 1])

    def test_non_finite_rejected(self):
        with pytest.raises(NonFiniteValueError):
            NodeMultiset([0.0, float("nan")])

    def test_multiplicities_sum_to_length(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            pts = []
            for _ in range(rng.integers(1, 6)):
                a = complex(rng.normal(), rng.normal())
                pts.extend([a] * int(rng.integers(1, 4)))
            nodes = NodeMultiset(pts)
            assert sum(r for _, r in nodes.groups) == len(pts)


class TestPsi:
    def test_empty_range_is_one(self):
        nodes = NodeMultiset([0, 1, 2])
        assert psi(nodes, 1, 0, 7) == 1

    def test_three_node_product(self):
        nodes = NodeMultiset([0, 1, 2])
        assert psi(nodes, 1, 2, 3) == 6

    def test_confluent_square(self):
        nodes = NodeMultiset([1j, 1j])
        assert psi(nodes, 1, 2, 0) == pytest.approx(-1)

    def test_index_out_of_range(self):
        nodes = NodeMultiset([0, 1])
        with pytest.raises(IndexError):
            psi(nodes, 1, 3, 0)
        with pytest.raises(IndexError):
            psi(nodes, 0, 1, 0)

    def test_product_splitting(self):
        # psi_{m,n} * psi_{n+1,n'} = psi_{m,n'}
        rng = np.random.default_rng(11)
        for _ in range(30):
            L = int(rng.integers(3, 9))
            pts = rng.normal(size=L) + 1j * rng.normal(size=L)
            nodes = NodeMultiset(list(pts))
            z = complex(rng.normal(), rng.normal())
            m = int(rng.integers(1, L))
            n = int(rng.integers(m, L))
            n2 = int(rng.integers(n + 1, L + 1))
            lhs = psi(nodes, m, n, z) * psi(nodes, n + 1, n2, z)
            rhs = psi(nodes, m, n2, z)
            assert abs(lhs - rhs) <= 1e-12 * max(abs(rhs), 1e-30)


class TestScaledProduct:
    def test_positive_real_product(self):
        sp = psi_scaled(NodeMultiset([0, 1]), 1, 2, 3)
        assert sp.log_magnitude == pytest.approx(math.log(6))
        assert sp.phase == pytest.approx(1)

    def test_empty_product(self):
        sp = psi_scaled(NodeMultiset([0, 1]), 1, 0, 3)
        assert sp.log_magnitude == 0.0
        assert sp.phase == 1

    def test_zero_factor_flagged(self):
        sp = psi_scaled(NodeMultiset([2]), 1, 1, 2)
        assert sp.is_zero

    def test_agrees_with_plain_psi(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            L = int(rng.integers(1, 10))
            pts = list(rng.normal(size=L) + 1j * rng.normal(size=L))
            nodes = NodeMultiset(pts)
            z = complex(rng.normal(), rng.normal())
            direct = psi(nodes, 1, L, z)
            if not 1e-300 < abs(direct) < 1e300:
                continue
            sp = psi_scaled(nodes, 1, L, z)
            assert abs(sp.value() - direct) <= 1e-10 * abs(direct)

    def test_survives_huge_products(self):
        # 300 nodes at distance ~3 from z: plain product overflows
        nodes = NodeMultiset([0.0] * 0 + list(np.zeros(300)))
        sp = psi_scaled(nodes, 1, 300, 3.0)
        assert sp.log_magnitude == pytest.approx(300 * math.log(3))

    def test_multiply_and_divide(self):
        a = ScaledProduct.from_value(3 + 4j)
        b = ScaledProduct.from_value(2j)
        prod = a * b
        assert abs(prod.value() - (3 + 4j) * 2j) <= 1e-12 * 10
        quot = a / b
        assert abs(quot.value() - (3 + 4j) / 2j) <= 1e-12 * 10


class TestVandermonde:
    def test_singleton(self):
        assert vandermonde([5]) == 1

    def test_three_points(self):
        assert vandermonde([1, 2, 3]) == pytest.approx(2)

    def test_pair(self):
        assert vandermonde([0, 1]) == 1

    def test_repeated_point_zero(self):
        assert vandermonde([2, 5, 2]) == 0

    def test_swap_flips_sign(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            pts = list(rng.normal(size=4) + 1j * rng.normal(size=4))
            base = vandermonde(pts)
            pts[1], pts[3] = pts[3], pts[1]
            assert vandermonde(pts) == pytest.approx(-base)


class TestInner:
    def test_coordinate_projection(self):
        assert inner([1, 0], [2 + 1j, 9]) == 2 + 1j

    def test_conjugation_first_slot(self):
        assert inner([1j, 0], [1j, 0]) == pytest.approx(1)

    def test_componentwise_sum(self):
        assert inner([1, 1], [2, 3]) == 5

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            inner([1, 0], [1, 2, 3])

    def test_sesquilinearity(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            n = int(rng.integers(1, 5))
            q = rng.normal(size=n) + 1j * rng.normal(size=n)
            v = rng.normal(size=n) + 1j * rng.normal(size=n)
            w = rng.normal(size=n) + 1j * rng.normal(size=n)
            a = complex(rng.normal(), rng.normal())
            lhs = inner(a * q, v + w)
            rhs = np.conj(a) * (inner(q, v) + inner(q, w))
            assert abs(lhs - rhs) <= 1e-14 * max(abs(rhs), 1.0)


class TestNewtonToMonomial:
    def test_linear(self):
        # c0 + c1 (z - 3) = (c0 - 3 c1) + c1 z
        nodes = NodeMultiset([3.0, 99.0])
        mono = newton_to_monomial([2.0, 5.0], nodes)
        assert np.allclose(mono, [2.0 - 15.0, 5.0])

    def test_roundtrip_against_direct_eval(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            k = int(rng.integers(1, 6))
            pts = list(rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1))
            nodes = NodeMultiset(pts)
            coeffs = rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1)
            mono = newton_to_monomial(coeffs, nodes)
            z = complex(rng.normal(), rng.normal())
            direct = sum(c * psi(nodes, 1, j, z) for j, c in enumerate(coeffs))
            horner = np.polyval(mono[::-1], z)
            assert abs(horner - direct) <= 1e-10 * max(abs(direct), 1.0)

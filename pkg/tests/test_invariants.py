"""Invariant evaluation and the generator change of basis.

Oracles: hand-expanded polynomial forms of all 16 generators, frozen
here independently of the tables in the package, plus an exact matrix
inverse computed in-test by Fraction Gaussian elimination.
"""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksreg.invariants import (
    GEN_FROM_PI_MATRIX,
    GENERATOR_NAMES,
    PI_FROM_GEN_MATRIX,
    GeneratorVector,
    PhasePoint8,
    eval_generators,
    eval_generators_batch,
    eval_pi,
    eval_pi_batch,
    generators_from_pi,
    pi_from_generators,
    reduce,
)

# Hand-expanded generator polynomials in (q1..q4, p1..p4).  These were
# written out longhand, not generated from the package tables.
def _oracle_generators(q1, q2, q3, q4, p1, p2, p3, p4):
    return {
        "K1": -(q1 * q3 + q2 * q4 + p1 * p3 + p2 * p4),
        "K2": -(q1 * q4 - q2 * q3 + p1 * p4 - p2 * p3),
        "K3": Fraction(1, 2)
        * (q3 ** 2 + q4 ** 2 + p3 ** 2 + p4 ** 2 - q1 ** 2 - q2 ** 2 - p1 ** 2 - p2 ** 2),
        "L1": q4 * p1 - q3 * p2 + q2 * p3 - q1 * p4,
        "L2": q1 * p3 + q2 * p4 - q3 * p1 - q4 * p2,
        "L3": q3 * p4 - q4 * p3 + q2 * p1 - q1 * p2,
        "H2": Fraction(1, 2)
        * (q1 ** 2 + q2 ** 2 + q3 ** 2 + q4 ** 2 + p1 ** 2 + p2 ** 2 + p3 ** 2 + p4 ** 2),
        "Xi": q1 * p2 - q2 * p1 + q3 * p4 - q4 * p3,
        "U1": -(q1 * p1 + q2 * p2 + q3 * p3 + q4 * p4),
        "U2": q1 * q3 + q2 * q4 - p1 * p3 - p2 * p4,
        "U3": q1 * q4 - q2 * q3 - p1 * p4 + p2 * p3,
        "U4": Fraction(1, 2)
        * (q1 ** 2 + q2 ** 2 - q3 ** 2 - q4 ** 2 - p1 ** 2 - p2 ** 2 + p3 ** 2 + p4 ** 2),
        "V1": Fraction(1, 2)
        * (q1 ** 2 + q2 ** 2 + q3 ** 2 + q4 ** 2 - p1 ** 2 - p2 ** 2 - p3 ** 2 - p4 ** 2),
        "V2": q1 * p3 + q2 * p4 + q3 * p1 + q4 * p2,
        "V3": q1 * p4 - q2 * p3 + q4 * p1 - q3 * p2,
        "V4": q1 * p1 + q2 * p2 - q3 * p3 - q4 * p4,
    }


def _invert_exact(matrix):
    """Invert a square Fraction matrix by Gaussian elimination."""
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = Fraction(1) / aug[col][col]
        aug[col] = [v * inv_p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


fraction_st = st.fractions(min_value=-8, max_value=8, max_denominator=16)
point_st = st.tuples(*([fraction_st] * 8))


class TestGeneratorValues:
    def test_circular_seed_point(self):
        """q=(1,0,0,0), p=(0,1,0,0) maps to the known generator vector."""
        g = eval_generators(PhasePoint8((1, 0, 0, 0), (0, 1, 0, 0)))
        assert g.H2 == 1
        assert g.Xi == 1
        assert g.K == (0, 0, -1)
        assert g.L == (0, 0, -1)
        assert g.U == (0, 0, 0, 0)
        assert g.V == (0, 0, 0, 0)

    @given(point_st)
    @settings(max_examples=120, deadline=None)
    def test_matches_hand_expansion(self, z):
        """Table-driven evaluation agrees exactly with the longhand forms."""
        oracle = _oracle_generators(*z)
        g = eval_generators(z)
        for name, value in zip(GENERATOR_NAMES, g.flat):
            assert value == oracle[name], name

    @given(point_st)
    @settings(max_examples=100, deadline=None)
    def test_two_evaluation_paths_agree(self, z):
        """Direct monomials and the pi-then-linear-map route coincide."""
        direct = eval_generators(z)
        via_pi = generators_from_pi(eval_pi(z))
        assert direct.flat == via_pi.flat


class TestChangeOfBasis:
    def test_matrices_are_exact_inverses(self):
        """The two coefficient tables invert each other, entry by entry."""
        computed = _invert_exact(GEN_FROM_PI_MATRIX)
        assert computed == PI_FROM_GEN_MATRIX

    @given(point_st)
    @settings(max_examples=100, deadline=None)
    def test_round_trip_is_identity(self, z):
        pv = eval_pi(z)
        back = pi_from_generators(generators_from_pi(pv))
        assert tuple(back.pi) == tuple(pv.pi)

    def test_pi11_entry(self):
        """pi11 reconstructs as -(U3 + K2)/2, pinned by exact inversion."""
        g = GeneratorVector(
            K=(0, Fraction(3), 0), L=(0, 0, 0), H2=0, Xi=0,
            U=(0, 0, Fraction(5), 0), V=(0, 0, 0, 0),
        )
        pv = pi_from_generators(g)
        assert pv[11] == Fraction(-4)  # -(5 + 3)/2


class TestBatchEvaluation:
    def test_float_batch_matches_scalar(self):
        rng = np.random.default_rng(7)
        Z = rng.standard_normal((40, 8))
        batch = eval_generators_batch(Z)
        for row, zrow in zip(batch, Z):
            scalar = eval_generators(tuple(zrow)).as_array()
            assert np.allclose(row, scalar, rtol=0, atol=1e-12)

    def test_even_integer_batch_is_exact(self):
        rng = np.random.default_rng(11)
        Z = 2 * rng.integers(-40, 41, size=(60, 8), dtype=np.int64)
        batch = eval_generators_batch(Z)
        assert batch.dtype == np.int64
        for row, zrow in zip(batch, Z):
            exact = eval_generators(tuple(int(v) for v in zrow))
            assert tuple(int(v) for v in row) == exact.flat

    def test_non_integral_integer_batch_is_rejected(self):
        # H2 = 1/2 here, which has no exact int64 representation.
        Z = np.array([[1, 0, 0, 0, 0, 0, 0, 0]], dtype=np.int64)
        with pytest.raises(ValueError):
            eval_generators_batch(Z)

    def test_pi_batch_matches_scalar(self):
        rng = np.random.default_rng(13)
        Z = rng.standard_normal((25, 8))
        batch = eval_pi_batch(Z)
        for row, zrow in zip(batch, Z):
            scalar = eval_pi(tuple(zrow))
            assert np.allclose(row, np.array(scalar.pi, dtype=float), atol=1e-12)


class TestReduction:
    @given(point_st)
    @settings(max_examples=60, deadline=None)
    def test_xi_eta_split(self, z):
        """xi + eta recovers K and xi - eta recovers L, exactly."""
        g = eval_generators(z)
        r = reduce(g)
        for xi_i, eta_i, k_i, l_i in zip(r.xi, r.eta, g.K, g.L):
            assert xi_i + eta_i == k_i
            assert xi_i - eta_i == l_i

    def test_circular_seed_reduction(self):
        g = eval_generators(PhasePoint8((1, 0, 0, 0), (0, 1, 0, 0)))
        r = reduce(g)
        assert r.xi == (0, 0, -1)
        assert r.eta == (0, 0, 0)


class TestDataShapes:
    def test_phase_point_validates_length(self):
        with pytest.raises(ValueError):
            PhasePoint8((1, 0, 0), (0, 0, 0, 0))

    def test_generator_vector_json_keys(self):
        g = eval_generators(PhasePoint8((1, 0, 0, 0), (0, 1, 0, 0)))
        d = g.to_json_dict()
        assert set(d) == {"K", "L", "H2", "Xi", "U", "V"}
        assert d["K"] == [0.0, 0.0, -1.0]
        assert d["H2"] == 1.0

    def test_from_flat_round_trip(self):
        values = tuple(range(16))
        g = GeneratorVector.from_flat(values)
        assert g.flat == values

import warnings
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from cmseq.seqcore import (FLOAT, VERIFIED, VIOLATED, DiscreteMeasure, Sequence,
                           TailBoundError, check_completely_alternating,
                           check_completely_monotone, check_concave_moments,
                           check_convex_moments, check_dilated_hausdorff, compound_compose,
                           convolve, diaconis_freedman_array, dilate_compound,
                           exchangeable_compound, finite_difference, leading_differences)
from cmseq.fusscatalan import FcParams, fc_sequence

from conftest import discrete_measures, exact_prefixes


def geometric(N, first=1):
    return Sequence.of([F(first) / 2 ** j for j in range(N + 1)])


def uniform(N):
    return Sequence.of([F(1, j + 1) for j in range(N + 1)])


class TestFiniteDifference:
    def test_geometric(self):
        assert finite_difference(geometric(5), 3, 0) == F(1, 8)

    def test_simple_negative(self):
        assert finite_difference([1, 0, 1], 1, 1) == -1

    def test_beta_integral(self):
        assert finite_difference(uniform(5), 2, 1) == F(1, 12)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            finite_difference([1, 2, 3], 2, 1)


class TestCompleteMonotonicity:
    def test_uniform_order_30(self):
        rep = check_completely_monotone(uniform(30))
        assert rep.verdict == VERIFIED and rep.max_order == 30

    def test_witness(self):
        rep = check_completely_monotone([1, 0, 1])
        assert rep.verdict == VIOLATED and rep.witness == (1, 1, -1)
        assert rep.max_order == 1

    def test_geometric(self):
        assert check_completely_monotone(geometric(20)).max_order == 20

    def test_witness_is_lex_first_in_k_then_j(self):
        # k=0 row fine; k=1 row fails first at j=2
        rep = check_completely_monotone([3, 2, 1, 2, 0])
        assert rep.witness[:2] == (2, 1)

    def test_float_tolerance(self):
        # second difference is exactly zero up to rounding
        assert check_completely_monotone(Sequence.of([1.0, 0.6, 0.2 - 1e-15], FLOAT)).ok
        assert not check_completely_monotone(Sequence.of([1.0, 0.6, 0.19], FLOAT), tol=0).ok

    @settings(max_examples=40, deadline=None)
    @given(discrete_measures())
    def test_hausdorff_positivity(self, nu):
        rep = check_completely_monotone(nu.moments(20))
        assert rep.ok and rep.max_order == 20


class TestAlternating:
    def test_linear(self):
        assert check_completely_alternating(list(range(10))).ok

    def test_square_fails(self):
        rep = check_completely_alternating([n * n for n in range(10)])
        assert not rep.ok

    def test_geometric_tail(self):
        assert check_completely_alternating([1 - F(1, 2 ** n) for n in range(15)]).ok


class TestDilated:
    def test_catalan_tau4(self):
        assert check_dilated_hausdorff(fc_sequence(FcParams(2), 30), 4).max_order == 30

    def test_catalan_tau3_fails(self):
        rep = check_dilated_hausdorff(fc_sequence(FcParams(2), 30), 3)
        assert rep.verdict == VIOLATED and rep.witness[2] < 0

    def test_ones(self):
        assert check_dilated_hausdorff([1] * 10, 1).ok


class TestConvexConcave:
    def test_density_2t(self):
        c = [F(2, n + 2) for n in range(20)]
        assert check_convex_moments(c).ok
        assert not check_concave_moments(c).ok

    def test_uniform_both(self):
        assert check_convex_moments(uniform(20)).ok
        assert check_concave_moments(uniform(20)).ok

    def test_not_moment(self):
        assert not check_convex_moments([1, 0, 1]).ok

    def test_catalan_scaled_concave(self):
        c = fc_sequence(FcParams(2), 30).scaled_powers(F(1, 4))
        assert check_concave_moments(c).max_order == 30

    def test_convex_warns_unnormalised(self):
        with pytest.warns(UserWarning):
            check_convex_moments([2, 1])

    @settings(max_examples=30, deadline=None)
    @given(discrete_measures(denom=8))
    def test_duality(self, nu):
        c = nu.moments(16)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            a = check_convex_moments(c)
        b = check_concave_moments(leading_differences(c))
        assert (a.verdict, a.max_order) == (b.verdict, b.max_order)


class TestDilate:
    def test_identity(self):
        c = uniform(10)
        assert dilate_compound(c, 1, decay=0).terms == c.terms

    def test_ones_half(self):
        b = dilate_compound([1] * 200, F(1, 2), tail_tol=1e-12, decay=1)
        assert len(b) > 5
        assert all(abs(float(x) - 2) < 1e-10 for x in b.terms[:5])

    def test_delta(self):
        b = dilate_compound([1, 0, 0, 0], F(1, 3), decay=0)
        assert b.terms == (1, 0, 0, 0)

    def test_tail_error(self):
        with pytest.raises(TailBoundError):
            dilate_compound([1, 1, 1], F(1, 2))

    def test_rejects_p(self):
        with pytest.raises(ValueError):
            dilate_compound([1, 0], 2)

    @settings(max_examples=20, deadline=None)
    @given(discrete_measures(denom=6).filter(lambda nu: max(a for a, _ in nu.atoms) <= F(1, 2)),
           st.fractions(min_value=F(1, 10), max_value=1, max_denominator=10))
    def test_preserves_monotonicity(self, nu, p):
        # atoms in [0, 1/2] make |c_j| <= |c_N| 2^(N-j) a valid envelope
        b = dilate_compound(nu.moments(120), p, tail_tol=1e-30, decay=F(1, 2))
        assert len(b) >= 16
        assert check_completely_monotone(b.truncate(16).to_float(), tol=1e-9).ok


class TestExchangeable:
    def test_point_mass_matches_dilate(self):
        c = geometric(60)
        a = exchangeable_compound(c, DiscreteMeasure.point(F(1, 2)), decay=F(1, 2))
        b = dilate_compound(c, F(1, 2), decay=F(1, 2))
        n = min(len(a), len(b))
        assert a.terms[:n] == b.terms[:n]

    def test_delta0(self):
        b = exchangeable_compound([1, 0, 0, 0], DiscreteMeasure.point(0), decay=0)
        assert b.terms[0] == 1 and all(x == 0 for x in b.terms[1:])

    def test_two_atom_mixture(self):
        # c_j = 2^{-j-1}: atom at 0 collects sum c_j = 1, atom at 1 keeps c_k
        c = Sequence.of([F(1, 2 ** (j + 1)) for j in range(80)])
        nu = DiscreteMeasure(((0, F(1, 2)), (1, F(1, 2))))
        b = exchangeable_compound(c, nu, decay=F(1, 2))
        assert abs(float(b[0]) - 0.75) < 1e-12
        for k in range(1, 6):
            assert abs(float(b[k]) - 2.0 ** (-k - 2)) < 1e-12


class TestConvolutionAndComposition:
    def test_hand(self):
        assert convolve([1, 1, 1], [1, 2, 3]).terms == (1, 3, 6)

    def test_ones(self):
        assert convolve([1] * 6, [1] * 6).terms == tuple(range(1, 7))

    def test_delta_unit(self):
        assert convolve([1, 0, 0], [4, 5, 6]).terms == (4, 5, 6)

    def test_compose_identity(self):
        c = uniform(6)
        assert compound_compose([0, 1, 0, 0, 0, 0, 0], c).terms == c.terms

    def test_compose_constant(self):
        assert compound_compose([1, 0, 0], [F(1, 2), F(1, 4), F(1, 8)]).terms == (1, 0, 0)

    def test_compose_geometric(self):
        b = [F(1, 2 ** (j + 1)) for j in range(8)]
        a = compound_compose(b, [0, 1, 0, 0, 0, 0, 0, 0])
        assert a.terms == tuple(b)

    @settings(max_examples=20, deadline=None)
    @given(discrete_measures(denom=6), discrete_measures(denom=6),
           st.fractions(min_value=0, max_value=1, max_denominator=8))
    def test_compound_closure(self, nu, rho, beta):
        # mixtures of geometric laws t^j (1 - t) with t <= 1/2: completely
        # monotone probability sequences; b_0 = beta is free
        def geo_mix(m, N):
            return [sum(w * a ** j * (1 - a) for a, w in m.atoms if a <= F(1, 2))
                    for j in range(N)]
        small = lambda m: DiscreteMeasure(tuple((a / 2, w) for a, w in m.atoms))
        c = geo_mix(small(nu), 12)
        b = [beta] + [(1 - beta) * x for x in geo_mix(small(rho), 70)]
        a = compound_compose(b, c)
        assert check_completely_monotone(a.to_float(), tol=1e-12).ok


class TestReflection:
    def test_uniform(self):
        assert leading_differences(uniform(10)).terms == uniform(10).terms

    def test_delta1(self):
        assert leading_differences([1] * 5).terms == (1, 0, 0, 0, 0)

    @settings(max_examples=50, deadline=None)
    @given(exact_prefixes)
    def test_involution(self, terms):
        c = Sequence.of(terms)
        assert leading_differences(leading_differences(c)).terms == c.terms


class TestDiaconisFreedman:
    def test_uniform(self):
        assert diaconis_freedman_array(uniform(4), 2) == [F(1, 3)] * 3

    def test_delta1(self):
        assert diaconis_freedman_array([1] * 4, 3) == [0, 0, 0, 1]

    @settings(max_examples=40, deadline=None)
    @given(exact_prefixes, st.data())
    def test_row_sum(self, terms, data):
        c = Sequence.of(terms)
        n = data.draw(st.integers(0, c.N))
        assert sum(diaconis_freedman_array(c, n)) == c[0]


def test_exactness_preserved():
    c = uniform(8)
    for out in (leading_differences(c), convolve(c, c), compound_compose(c, [0] + [1] * 8)):
        assert out.exact and all(isinstance(x, (int, F)) for x in out.terms)

from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polarfloor.cone import MarketCone, Mode
from polarfloor.domination import in_polar
from polarfloor.examples import (
    DENSITY_RULES,
    TruncatedFamily,
    build_example1,
    build_example2,
    build_example3,
    dyadic_odd,
    example2_g,
    example2_portfolio,
    ones_odd,
)
from polarfloor.prob import conditional_expectation, expectation, negative_part, pairing, tail_probability


class TestFamily:
    def test_validation(self):
        TruncatedFamily("example2", 3)
        with pytest.raises(ValueError):
            TruncatedFamily("example4", 3)
        with pytest.raises(ValueError):
            TruncatedFamily("example1", 0)

    def test_rules(self):
        assert [DENSITY_RULES["ones-odd"](k) for k in range(1, 5)] == [1, 0, 1, 0]
        assert [dyadic_odd(k) for k in range(1, 7)] == [F(1, 2), 0, F(1, 4), 0, F(1, 8), 0]


class TestExample2:
    def test_probabilities_level3(self):
        m = build_example2(3)
        assert m.space.probs == tuple(map(F, ["1/4", "1/4", "1/8", "1/8", "1/16", "1/16", "1/8"]))
        assert sum(m.space.probs) == 1

    @pytest.mark.parametrize("N", range(1, 9))
    def test_total_mass(self, N):
        m = build_example2(N)
        assert sum(m.space.probs) == 1 and len(m.space) == 2 * N + 1
        assert m.space.probs[m.residual_index] == F(1, 2**N)

    def test_generators(self):
        m = build_example2(4)
        for n, gen in enumerate(m.cone.generators, start=1):
            expected = [F(0)] * 9
            expected[2 * n - 2] = F(1)
            expected[2 * n - 1] = -F(1, 2**n)
            assert list(gen.values) == expected
        assert m.cone.mode is Mode.SUBSPACE
        assert m.price_increment[m.residual_index] == 0

    def test_partition(self):
        m = build_example2(3)
        assert m.partition.blocks == ((0, 1), (2, 3), (4, 5), (6,))

    def test_density_residual(self):
        m = build_example2(2)
        assert m.density(ones_odd, residual=F(3)).values == (1, 0, 1, 0, 3)

    def test_g_ones_odd(self):
        g = example2_g(ones_odd, 5)
        for n in range(1, 6):
            assert g[2 * n - 2] == 1 and g[2 * n - 1] == 2**n
        assert g[10] == 0

    def test_g_uses_even_values(self):
        # f(2n) large: g(2n-1) = 2^-n f(2n)
        g = example2_g(lambda k: F(8) if k % 2 == 0 else F(1), 2)
        assert g.values[:4] == (4, 8, 2, 8)

    def test_g_zero(self):
        assert example2_g(lambda k: 0, 4).is_zero()

    @pytest.mark.parametrize("N", [1, 3, 6])
    def test_g_martingale_and_polar(self, N):
        m = build_example2(N)
        for rule in DENSITY_RULES.values():
            g = example2_g(rule, N)
            assert conditional_expectation(g.times(m.price_increment), m.partition).is_zero()
            assert in_polar(m.cone, g)
            assert g.dominates(m.density(rule))

    def test_portfolio(self):
        x = example2_portfolio(3)
        assert x.values == (2, -1, 4, -1, 8, -1, 0)
        assert expectation(x) == F(17, 16)

    def test_g_norm_dyadic_odd(self):
        # E g = sum_n 2^-(n+1) (2^-n + 1) = sum 2^-(2n+1) + sum 2^-(n+1)
        for N in (1, 4, 10):
            expected = sum(F(1, 2 ** (2 * n + 1)) + F(1, 2 ** (n + 1)) for n in range(1, N + 1))
            assert expectation(example2_g(dyadic_odd, N)) == expected


class TestExample3:
    @pytest.mark.parametrize("N", range(1, 9))
    def test_mass_and_shape(self, N):
        m = build_example3(N)
        assert sum(m.space.probs) == 1
        assert len(m.space) == 2 ** (N - 1) + N + 2

    @pytest.mark.parametrize("N", [1, 3, 6])
    def test_event_probabilities(self, N):
        m = build_example3(N)
        for n in range(1, N + 1):
            assert m.space.prob(m.events_a[n - 1]) == F(1, 2**n)
            assert m.space.probs[m.atoms_b[n - 1]] == F(1, 4**n)

    def test_pairwise_intersections(self):
        # xi_n independent on [0, 1] and squeezed into [0, 1/2]: the A_n are
        # independent under P( . | [0, 1/2]), so P(A_i A_j) = 2 P(A_i) P(A_j)
        m = build_example3(3)
        for i in range(1, 4):
            for j in range(i + 1, 4):
                both = m.events_a[i - 1] & m.events_a[j - 1]
                assert m.space.prob(both) == F(1, 2 ** (i + j - 1))

    def test_triple_intersection(self):
        m = build_example3(4)
        common = frozenset.intersection(*m.events_a)
        # 1/2 * 1 * 1/2 * 1/4 * 1/8
        assert m.space.prob(common) == F(1, 128)

    def test_a1_is_whole_half(self):
        m = build_example3(5)
        assert m.space.prob(m.events_a[0]) == F(1, 2)
        assert all(m.space.atoms[i].startswith("a:") for i in m.events_a[0])

    @pytest.mark.parametrize("N", [1, 4, 8])
    def test_assets(self, N):
        m = build_example3(N)
        for n in range(1, N + 1):
            x = m.asset(n)
            assert expectation(x) == 0
            assert pairing(x, m.f) == 1 - F(1, 2**n)

    def test_f(self):
        m = build_example3(2)
        labels = m.space.atoms
        f = dict(zip(labels, m.f.values))
        assert f["a:10"] == f["a:11"] == 1
        assert f["B1"] == 2 and f["B2"] == 4 and f["gap"] == 0 and f["top"] == 1

    def test_gap_probability(self):
        m = build_example3(3)
        assert m.space.probs[m.space.index("gap")] == F(1, 3 * 4**3)

    @given(st.lists(st.integers(1, 8), min_size=1, max_size=8, unique=True))
    def test_sum_pairing(self, idx):
        m = build_example3(8)
        x = m.space.constant(0)
        for n in idx:
            x = x + m.asset(n)
        assert pairing(x, m.f) == len(idx) - sum(F(1, 2**n) for n in idx)

    def test_rejects_level_zero(self):
        with pytest.raises(ValueError):
            build_example3(0)
        with pytest.raises(ValueError):
            build_example2(0)


class TestExample1:
    @pytest.mark.parametrize("M", [1, 2, 6, 10])
    def test_shape(self, M):
        d = build_example1(M)
        assert len(d.space) == 2 * M + 1
        assert sum(d.space.probs) == 1
        assert d.space.probs[d.center] == F(1, 2**M)

    def test_pairing_formula(self):
        d = build_example1(10)
        for n, x in enumerate(d.witnesses, start=1):
            assert expectation(x) == n * (1 - 2 * d.eps[n - 1])

    def test_tails(self):
        d = build_example1(6)
        for n, x in enumerate(d.witnesses, start=1):
            neg = negative_part(x)
            for k in range(1, 9):
                assert tail_probability(neg, k) == (d.eps[n - 1] if k <= n else 0)

    def test_increasing(self):
        d = build_example1(10)
        vals = [expectation(x) for x in d.witnesses]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_full_first_window(self):
        d = build_example1(3, [1, F(1, 3), F(1, 9)])
        assert len(d.space) == 5
        assert expectation(d.witnesses[0]) == -1

    def test_custom_eps(self):
        d = build_example1(2, [F(1, 2), F(1, 3)])
        assert expectation(d.witnesses[1]) == 2 * (1 - F(2, 3))

    @pytest.mark.parametrize("eps", [[F(1, 2), F(1, 2)], [F(1, 4), F(1, 2)], [F(3, 2), F(1, 2)], [F(1, 2), 0]])
    def test_bad_eps(self, eps):
        with pytest.raises(ValueError):
            build_example1(2, eps)

    def test_eps_length(self):
        with pytest.raises(ValueError):
            build_example1(3, [F(1, 2)])

    def test_standin_cone_is_halfspace(self):
        d = build_example1(4)
        cone = d.standin_cone()
        assert isinstance(cone, MarketCone) and cone.mode is Mode.CONE_MINUS_POSITIVES
        w = d.space.rv([p + (1 if i == d.center else 0) for i, p in enumerate(d.space.probs)])
        for g in cone.generators:
            assert sum(a * b for a, b in zip(g.values, w.values)) == 0

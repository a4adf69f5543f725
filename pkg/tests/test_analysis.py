import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkdnet import (
    SizeCapError,
    eta,
    figure_data,
    gamma,
    hack_prob_upper_bound,
    p_range,
    single_link_factor,
    single_link_report,
    v_n,
)
from qkdnet.analysis import figure_csv


class TestGamma:
    def test_at_one(self):
        assert gamma(1.0) == pytest.approx(1 - math.exp(-1))

    def test_reference_correction(self):
        assert 1 / gamma(10.0) ** 11 == pytest.approx(1.72, abs=0.01)

    def test_large_mu_limit(self):
        assert gamma(1e6) == pytest.approx(1.0, abs=1e-6)

    def test_domain(self):
        with pytest.raises(ValueError):
            gamma(0.99)

    def test_increasing_and_below_one(self):
        grid = [1 + 99 * i / 99 for i in range(100)]
        values = [gamma(mu) for mu in grid]
        assert all(v < 1.0 for v in values)
        assert all(a < b for a, b in zip(values, values[1:]))


class TestVn:
    def test_exact_for_one_node(self):
        assert v_n(3.0, 1) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("n,p", [(5, 0.01), (20, 0.004), (7, 0.1)])
    def test_defining_identity(self, n, p):
        mu = 1 / (n * p)
        assert 1 - (1 - p) ** n == pytest.approx((1 + v_n(mu, n)) * n * p)

    def test_approaches_gamma_minus_one(self):
        assert v_n(10.0, 1000) == pytest.approx(gamma(10.0) - 1, abs=1e-3)

    def test_decreasing_in_n(self):
        values = [v_n(5.0, n) for n in range(1, 30)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_domain(self):
        with pytest.raises(ValueError):
            v_n(0.5, 2)


class TestEta:
    def test_reference_value(self):
        report = eta(30, 2, 0.01, 0.6)
        assert report.eta == pytest.approx(2.5 * 3 / 9, rel=1e-12)
        assert report.eta < 1  # wins before correction
        assert report.eta_corrected > report.eta

    def test_small_r_matches_intuitive_count(self):
        # at l=2 and negligible r the ratio reduces to 3/(p n^2)
        n, p = 100, 1e-5
        report = eta(n, 2, p, r=n * 2 * p)
        assert report.eta == pytest.approx(3 / (p * n * n), rel=5e-3)

    def test_verdict_follows_corrected_value(self):
        winning = eta(200, 2, 2e-4, 0.1)
        assert winning.eta_corrected < 1 and winning.verdict == "MOP-better"
        losing = eta(30, 2, 1e-3, 0.1)
        assert losing.eta_corrected > 1 and losing.verdict == "MNOP-better"

    def test_precondition(self):
        with pytest.raises(ValueError, match="n\\*l\\*p"):
            eta(100, 2, 0.01, 0.1)

    def test_bound_chain_when_mop_wins(self):
        # the geometric bound sits below (gamma n p)^(l+1) <= (1-(1-p)^n)^(l+1)
        winners = 0
        for l in (2, 3, 4):
            for n in range(20, 201, 20):
                for scale in (0.2, 0.5, 0.9):
                    r = 0.1
                    p = scale * r / (n * l)
                    report = eta(n, l, p, r)
                    if report.verdict != "MOP-better":
                        continue
                    winners += 1
                    bound = hack_prob_upper_bound(n, l, p, r)
                    mid = (gamma(report.mu) * n * p) ** (l + 1)
                    exact_chain = (1 - (1 - p) ** n) ** (l + 1)
                    assert bound < mid <= exact_chain * (1 + 1e-12), (n, l, p)
        assert winners > 10


class TestPRange:
    def test_reference_window(self):
        window = p_range(100, 2, 0.1)
        assert window.p_min == pytest.approx(3 / (0.9 * 1e4))
        assert window.p_max == pytest.approx(5e-4)
        assert window.nonempty

    def test_small_network_is_empty(self):
        window = p_range(30, 2, 0.1)
        assert window.p_min > window.p_max
        assert not window.nonempty

    def test_l_one_rejected(self):
        with pytest.raises(ValueError):
            p_range(50, 1, 0.1)

    def test_corrected_variant_shrinks_window(self):
        plain = p_range(100, 2, 0.1)
        corrected = p_range(100, 2, 0.1, corrected=True)
        assert corrected.p_min > plain.p_min
        # corrected lower end solves eta/gamma^(l+1) = 1
        report = eta(100, 2, corrected.p_min, 0.1)
        assert report.eta_corrected == pytest.approx(1.0, rel=1e-6)

    def test_monotone_in_n(self):
        # growing the network never turns a nonempty window empty
        nonempty_seen = False
        for n in range(5, 200, 5):
            window = p_range(n, 2, 0.1)
            if nonempty_seen:
                assert window.nonempty
            nonempty_seen = nonempty_seen or window.nonempty
        assert nonempty_seen


class TestSingleLink:
    def test_mid_size_ratio(self):
        report = single_link_report(10)
        assert report.cuts_without_link == 100
        assert report.cuts_with_link == 60
        assert 0.5 <= report.ratio <= 0.62

    def test_smallest_case_exact(self):
        report = single_link_report(2)
        assert report.cuts_without_link == 4
        assert report.column == 1
        assert report.ratio == single_link_factor(2)

    def test_approaches_half(self):
        assert single_link_factor(14) == pytest.approx(0.5, abs=0.08)

    def test_baseline_is_n_squared(self):
        for n in (3, 6, 9):
            assert single_link_report(n).cuts_without_link == n * n

    def test_cap(self):
        with pytest.raises(SizeCapError):
            single_link_factor(15)


class TestFigureData:
    def test_grid_shape_and_consistency(self):
        rows = figure_data(r=0.1, n_max=40, l_max=4)
        assert len(rows) == 36 * 3
        for row in rows:
            window = p_range(row.n, row.l, 0.1)
            assert (row.log10_width > 0) == window.nonempty
            assert row.log10_p_max == pytest.approx(math.log10(window.p_max))

    def test_csv(self):
        rows = figure_data(r=0.1, n_max=6, l_max=2)
        text = figure_csv(rows)
        assert text.splitlines()[0] == "n,l,log10_p_min,log10_p_max,log10_width"
        assert len(text.splitlines()) == 3


@settings(max_examples=60, deadline=None)
@given(mu=st.floats(min_value=1.0, max_value=1e5, allow_nan=False))
def test_gamma_stays_in_unit_interval(mu):
    g = gamma(mu)
    assert 0.0 < g < 1.0


@settings(max_examples=40, deadline=None)
@given(
    mu=st.floats(min_value=1.5, max_value=100.0, allow_nan=False),
    n=st.integers(min_value=1, max_value=200),
)
def test_v_n_bounded_below_by_limit(mu, n):
    assert v_n(mu, n) >= gamma(mu) - 1 - 1e-12

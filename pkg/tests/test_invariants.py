from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import canonical_maps
from frobkit.invariants import (FAIL, INCONCLUSIVE, PASS, DeviationError, TestVerdict,
                                blimp_split_check, classify_growth, deviations_from_poincare,
                                discrete_regularity_check, eth_check, flat_sandwich_check,
                                gdim_window_check, gorenstein_fiber_test, growth_at_most,
                                identity_comp_check, koszul_homology_length,
                                koszul_sandwich_check, kunz_test, radu_andre_test, same_growth,
                                socle, theorem_main_check)
from frobkit.modules import FiniteModule
from frobkit.rings import make_quotient_ring, make_ring_map


# --- growth ---------------------------------------------------------------------------------

def test_growth_classes():
    assert classify_growth([1, 2, 1, 0, 0, 0]).kind == "FINITE"
    assert classify_growth([1, 2, 1, 0, 0, 0]).pd == 2
    g = classify_growth([2] * 9)
    assert g.kind == "POLYNOMIAL" and g.degree_estimate == 0
    g = classify_growth([2 ** n for n in range(9)])
    assert g.kind == "EXPONENTIAL" and g.rate == 2
    assert g.label == "EXPONENTIAL(2.000)"


def test_growth_window_too_short():
    with pytest.raises(ValueError, match="WINDOW_TOO_SHORT"):
        classify_growth([1, 2, 4])


def test_growth_rejects_restart_after_zero():
    with pytest.raises(ValueError):
        classify_growth([1, 0, 1, 0, 0])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 20), st.sampled_from([(0, 5), (1, 10), (2, 20)]), st.integers(0, 4))
def test_polynomial_sequences_are_polynomial(c, shape, extra):
    # higher degree needs a longer window before the ratio test settles below the band
    k, shortest = shape
    betas = [c * (n + 1) ** k for n in range(shortest + extra + 1)]
    assert classify_growth(betas).kind == "POLYNOMIAL"


def test_linear_growth_on_short_window_is_grey():
    assert classify_growth([n + 1 for n in range(9)]).kind == "EXPONENTIAL"


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), st.integers(1, 5), st.integers(6, 10))
def test_geometric_sequences_report_their_rate(r, c, N):
    g = classify_growth([c * r ** n for n in range(N + 1)])
    assert g.kind == "EXPONENTIAL" and g.rate == r


def test_growth_order():
    fin = classify_growth([1, 1, 0, 0, 0])
    poly = classify_growth([1, 1, 1, 1, 1])
    two = classify_growth([2 ** n for n in range(7)])
    three = classify_growth([3 ** n for n in range(7)])
    assert growth_at_most(fin, poly) and growth_at_most(poly, two) and growth_at_most(two, three)
    assert not growth_at_most(three, two)
    assert same_growth(two, classify_growth([5 * 2 ** n for n in range(7)]))
    assert not same_growth(two, three)


# --- Kunz and maps ----------------------------------------------------------------------------

@pytest.mark.parametrize("entry,verdict", [
    ((2, ["x"], []), "REGULAR"),
    ((3, ["x", "y"], []), "REGULAR"),
    ((2, ["x"], ["x^2"]), "NOT_REGULAR"),
    ((3, ["x", "y"], ["x*y"]), "NOT_REGULAR"),
])
def test_kunz(entry, verdict):
    v = kunz_test(make_quotient_ring(*entry))
    assert v.verdict == verdict
    assert (v.evidence["beta1"] == 0) == (verdict == "REGULAR")


def test_radu_andre_short_window():
    inc, sq, gol = canonical_maps()
    assert radu_andre_test(inc, N=5).verdict == "REGULAR_MAP"
    assert radu_andre_test(sq, N=5).verdict == "CI_MAP"
    assert radu_andre_test(gol, N=5).verdict == "NEITHER"


def test_radu_andre_non_flat_is_inconclusive():
    R = make_quotient_ring(2, ["u"], ["u^2"])
    v = radu_andre_test(make_ring_map(R, make_quotient_ring(2, []), ["0"]), N=4)
    assert v.outcome == INCONCLUSIVE


def test_theorem_main_short_window():
    for phi in canonical_maps():
        assert theorem_main_check(phi, N=5).outcome == PASS


def test_fail_needs_a_witness():
    with pytest.raises(ValueError):
        TestVerdict("claim", FAIL, FAIL)
    assert TestVerdict("claim", FAIL, FAIL, witness={"n": 1}).witness == {"n": 1}


# --- pushforward lemmas ------------------------------------------------------------------------

@pytest.mark.parametrize("entry", [(2, ["x"], ["x^2"]), (3, ["x", "y"], ["x^2", "y^2"]),
                                  (2, ["x", "y"], ["x^2", "x*y", "y^2"]), (2, ["x", "y"], [])])
def test_eth(entry):
    assert eth_check(make_quotient_ring(*entry), N=6).outcome == PASS


def test_koszul_homology_length():
    assert koszul_homology_length(make_quotient_ring(2, ["x"])) == 1
    assert koszul_homology_length(make_quotient_ring(2, ["x"], ["x^3"])) == 2


def test_blimp_split_on_hypersurface():
    S = make_quotient_ring(2, ["x"], ["x^3"])
    v = blimp_split_check(S, e=2, N=5)
    assert v.verdict == PASS
    assert v.evidence["complex_side"] == [1, 2, 2, 2, 2, 2]
    assert v.evidence["homology_side"] == [1, 2, 2, 2, 2, 2]


def test_blimp_split_out_of_range_is_not_a_failure():
    S = make_quotient_ring(2, ["x"], ["x^3"])
    v = blimp_split_check(S, e=1, N=4)
    assert v.outcome in (PASS, INCONCLUSIVE)
    if v.verdict != PASS:
        assert v.verdict == "OUT_OF_RANGE"


def test_discrete_regularity():
    assert discrete_regularity_check(make_quotient_ring(2, ["x"]), N=5).evidence["kunz"] == "REGULAR"
    v = discrete_regularity_check(make_quotient_ring(2, ["x"], ["x^2"]), N=5)
    assert v.outcome == PASS and v.evidence.get("vacuous")


# --- Gorenstein ----------------------------------------------------------------------------------

def test_socle_and_fiber_test():
    H = make_quotient_ring(2, ["x"], ["x^2"])
    G = make_quotient_ring(2, ["x", "y"], ["x^2", "x*y", "y^2"])
    Gor = make_quotient_ring(2, ["a", "b", "c"], ["a*b", "a*c", "b*c", "a^2+b^2", "b^2+c^2"])
    assert [socle(R).dim() for R in (H, G, Gor)] == [1, 2, 1]
    assert gorenstein_fiber_test(Gor).verdict == "GORENSTEIN"
    assert gorenstein_fiber_test(G).verdict == "NOT_GORENSTEIN"


def test_gorenstein_window_for_positive_dimension():
    v = gorenstein_fiber_test(make_quotient_ring(2, ["x", "y"], ["x*y"]), 4)
    assert v.verdict == "GORENSTEIN_WINDOW"
    assert v.evidence["bass_numbers"] == [0, 1, 0, 0, 0]


def test_gdim_window():
    H = make_quotient_ring(2, ["x"], ["x^2"])
    G = make_quotient_ring(2, ["x", "y"], ["x^2", "x*y", "y^2"])
    assert gdim_window_check(H, FiniteModule.residue_field(H), 4).verdict == "G_DIM_AT_MOST(0)"
    assert gdim_window_check(G, FiniteModule.residue_field(G), 4).verdict == "OBSTRUCTION_AT_WINDOW"
    free = FiniteModule(G, [0])
    assert gdim_window_check(G, free, 4).verdict == "G_DIM_AT_MOST(0)"


# --- deviations ------------------------------------------------------------------------------

def test_deviations_examples():
    assert deviations_from_poincare([1] * 9).eps == [1, 1, 0, 0, 0, 0, 0, 0]
    assert deviations_from_poincare([1, 1, 0, 0, 0]).eps == [1, 0, 0, 0]
    d = deviations_from_poincare([2 ** n for n in range(9)])
    assert d.eps[:3] == [2, 3, 2] and d[3] == 2


def test_deviations_reject_bad_series():
    with pytest.raises(DeviationError):
        deviations_from_poincare([2, 1, 1, 1, 1])
    with pytest.raises(DeviationError):
        deviations_from_poincare([1, 2, 0, 0, 0])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=8))
def test_deviations_round_trip(eps):
    from frobkit.invariants import _product_series
    N = len(eps)
    series = _product_series(eps, N)
    d = deviations_from_poincare(series)
    assert d.eps == eps
    assert d.reexpand() == series


# --- comparison inequalities ------------------------------------------------------------------

def test_identity_equality_case():
    G = make_quotient_ring(2, ["x", "y"], ["x^2", "x*y", "y^2"])
    v = identity_comp_check(G, 4)
    assert v.verdict == PASS and v.evidence["equal"]
    assert v.evidence["lhs"] == [(n + 1) * 2 ** n for n in range(5)]


def test_koszul_sandwich():
    A = make_quotient_ring(2, ["x", "y"])
    B = make_quotient_ring(2, ["x", "y"], ["x^2"])
    v = koszul_sandwich_check(A, "x^2", FiniteModule.residue_field(B), 5)
    assert v.verdict == PASS
    assert v.evidence["growth_A"] == "FINITE(2)" and v.evidence["growth_B"] == "POLYNOMIAL(0)"
    assert koszul_sandwich_check(B, "x", FiniteModule.residue_field(B), 5).outcome == INCONCLUSIVE


def test_flat_sandwich():
    R = make_quotient_ring(2, ["u"])
    S = make_quotient_ring(2, ["v"])
    v = flat_sandwich_check(make_ring_map(R, S, ["v^2"]), FiniteModule.residue_field(S), 5)
    assert v.verdict == PASS
    assert v.evidence["fiber_k"] == [1] * 6


def test_growth_rates_are_exact_fractions():
    g = classify_growth([3 * 2 ** n for n in range(9)])
    assert isinstance(g.rate, Fraction)

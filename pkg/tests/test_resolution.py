from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from conftest import ARTINIAN_CORPUS, build_ring, oracle_ring
from frobkit.modules import FiniteModule, ModuleComplex, ModuleMap
from frobkit.pushforward import frobenius_pushforward
from frobkit.resolution import (BettiTable, FreeComplex, PoincareTruncation, betti_and_poincare,
                                complex_homology, ext_against_ring, hilbert_series,
                                koszul_complex, koszul_ranks_ok, maximal_ideal_generators,
                                minimal_free_resolution, minimalize, resolve_complex,
                                tor_of_map)
from frobkit.rings import make_quotient_ring, make_ring_map


def graded(F: FreeComplex, N):
    """Graded Betti numbers of a resolution as a list of {degree: count}."""
    out = []
    for n in range(N + 1):
        row = {}
        for d in F.degrees_at(n):
            row[d] = row.get(d, 0) + 1
        out.append(row)
    return out


def assert_engine_invariants(F: FreeComplex):
    assert F.check_complex()
    assert F.check_degrees()
    assert F.is_minimal()


# --- oracle equivalence ----------------------------------------------------------------------

CUTOFF = 6


def test_residue_field_matches_oracle(corpus_ring):
    R, O = corpus_ring
    F = minimal_free_resolution(FiniteModule.residue_field(R), CUTOFF)
    assert_engine_invariants(F)
    assert graded(F, CUTOFF) == oracle.betti_numbers(oracle.residue_field_action(O), CUTOFF)


def test_frobenius_pushforward_matches_oracle(corpus_ring):
    R, O = corpus_ring
    N = CUTOFF - 1
    F = minimal_free_resolution(frobenius_pushforward(R), N)
    assert_engine_invariants(F)
    assert graded(F, N) == oracle.betti_numbers(oracle.frobenius_action(O), N)


def test_ring_itself_is_free(corpus_ring):
    R, O = corpus_ring
    F = minimal_free_resolution(FiniteModule(R, [0]), 3)
    assert BettiTable.from_complex(F, 3).totals() == [1, 0, 0, 0]
    assert oracle.betti_totals(oracle.ring_action(O), 3) == [1, 0, 0, 0]


SMALL = [c for c in ARTINIAN_CORPUS if c[0] in
         ("hypersurface x3", "golod m2", "ci x2 y2", "ci x2 y3", "monomial mixed")]


@st.composite
def presented_modules(draw):
    """Random graded modules over small artinian rings: a few generators, random relations."""
    _, p, variables, gens = draw(st.sampled_from(SMALL))
    R = build_ring(p, variables, gens)
    ngens = draw(st.integers(1, 2))
    degrees = [draw(st.integers(0, 1)) for _ in range(ngens)]
    rels = []
    for _ in range(draw(st.integers(0, 3))):
        d = max(degrees) + draw(st.integers(0, 2))
        rel = {}
        for j, g in enumerate(degrees):
            for m in oracle._monomials(R.nvars, [int(w) for w in R.weights], d - g):
                c = draw(st.integers(0, p - 1))
                if c:
                    rel[(j, m)] = c
        if rel:
            rels.append(rel)
    return (p, variables, gens), degrees, rels


@settings(max_examples=20, deadline=None)
@given(presented_modules())
def test_random_modules_match_oracle(data):
    (p, variables, gens), degrees, rels = data
    R = build_ring(p, variables, gens)
    M = FiniteModule(R, degrees, rels)
    N = 4
    F = minimal_free_resolution(M, N)
    assert_engine_invariants(F)
    O = oracle_ring(p, variables, gens)
    theirs = oracle.betti_numbers(oracle.module_from_presentation(O, degrees, rels), N)
    assert graded(F, N) == theirs


# --- worked examples ---------------------------------------------------------------------------

def test_hypersurface_residue_field_is_periodic(hypersurface):
    F = minimal_free_resolution(FiniteModule.residue_field(hypersurface), 5)
    assert F.ranks() == [1] * 6
    x = hypersurface.P("x")
    for n in range(1, 6):
        assert F.matrix(n) == [[x]]


def test_golod_residue_field(golod):
    F = minimal_free_resolution(FiniteModule.residue_field(golod), 4)
    assert F.ranks() == [1, 2, 4, 8, 16]


def test_free_module_poincare(golod):
    _, P = betti_and_poincare(FiniteModule(golod, [0, 1, 1]), 4)
    assert P.coefficients == [3, 0, 0, 0, 0]


def test_minimalize_cancels_unit():
    A = make_quotient_ring(2, ["x"], ["x^3"])
    C = FreeComplex(A, [[0], [0]], [[{(0, (0,)): 1}]])
    assert sum(minimalize(C).ranks()) == 0


def test_minimalize_two_by_two():
    A = make_quotient_ring(2, ["x"], ["x^3"])
    C = FreeComplex(A, [[0, -1], [0, 1]], [[{(0, (0,)): 1}, {(0, (1,)): 1, (1, (2,)): 1}]])
    assert C.check_degrees()
    M = minimalize(C)
    assert M.ranks() == [1, 1]
    assert M.matrix(1) == [[A.P("x^2")]]
    before = {i: h.dim() for i, h in complex_homology(C).items()}
    after = {i: h.dim() for i, h in complex_homology(M).items()}
    assert before == after


def test_minimalize_keeps_minimal_complex(golod):
    F = minimal_free_resolution(FiniteModule.residue_field(golod), 3)
    assert minimalize(F).ranks() == F.ranks()


def with_trivial_pairs(F: FreeComplex, where):
    """F plus contractible pieces A -1-> A sitting in degrees (n, n-1) for n in where."""
    degrees = [list(d) for d in F.degrees]
    diffs = [[dict(c) for c in cols] for cols in F.diffs]
    zero = (0,) * F.ring.nvars
    for n in where:
        i = n - F.lo
        d = degrees[i][0]
        target = len(degrees[i - 1])
        degrees[i - 1].append(d)
        degrees[i].append(d)
        diffs[i - 1].append({(target, zero): 1})
        if i >= 2:
            diffs[i - 2].append({})
    return FreeComplex(F.ring, degrees, diffs, F.lo)


def test_minimalize_removes_added_contractible_pieces(golod):
    F = minimal_free_resolution(FiniteModule.residue_field(golod), 4)
    G = with_trivial_pairs(F, [1, 3])
    assert G.check_complex()
    assert not G.is_minimal()
    assert minimalize(G).ranks() == F.ranks()


# --- complexes ------------------------------------------------------------------------------

def test_resolve_complex_of_module_agrees(golod):
    k = FiniteModule.residue_field(golod)
    assert resolve_complex(k, 5).ranks()[:6] == minimal_free_resolution(k, 5).ranks()


def test_resolve_complex_zero_differential(hypersurface):
    k = FiniteModule.residue_field(hypersurface)
    D = ModuleComplex([k, k], [ModuleMap(k, k, [{}])])
    assert resolve_complex(D, 5).ranks()[:6] == [1, 2, 2, 2, 2, 2]


def test_resolve_exact_complex_is_zero():
    A = make_quotient_ring(2, ["x"], ["x^2"])
    C = FreeComplex(A, [[0], [0]], [[{(0, (0,)): 1}]])
    assert sum(resolve_complex(C, 4).ranks()) == 0


def direct_sum(C: FreeComplex, D: FreeComplex) -> FreeComplex:
    assert C.lo == D.lo and C.hi == D.hi
    degrees = [list(a) + list(b) for a, b in zip(C.degrees, D.degrees)]
    diffs = []
    for i, (cc, dd) in enumerate(zip(C.diffs, D.diffs)):
        off = len(C.degrees[i])
        shifted = [{(r + off, m): c for (r, m), c in col.items()} for col in dd]
        diffs.append([dict(col) for col in cc] + shifted)
    return FreeComplex(C.ring, degrees, diffs, C.lo)


@pytest.mark.parametrize("first,second", [(["x"], ["y"]), (["x", "y"], ["x^2", "y"]),
                                          (["x*y"], ["x^2"])])
def test_betti_additivity_for_complexes(first, second):
    A = make_quotient_ring(3, ["x", "y"], ["x^3", "y^2"])
    K1 = koszul_complex(A, [A.P(e) for e in first])
    K2 = koszul_complex(A, [A.P(e) for e in second])
    N = 4
    a = BettiTable.from_complex(resolve_complex(K1, N), N).totals()
    b = BettiTable.from_complex(resolve_complex(K2, N), N).totals()
    both = BettiTable.from_complex(resolve_complex(direct_sum(K1, K2), N), N).totals()
    assert both == [x + y for x, y in zip(a, b)]


def test_koszul_ranks_and_homology():
    A = make_quotient_ring(2, ["x", "y"])
    K = koszul_complex(A, A.P.gens())
    assert K.ranks() == [1, 2, 1]
    H = complex_homology(K)
    assert H[0].dim() == 1 and H[1].ngens == 0 and H[2].ngens == 0
    A3 = make_quotient_ring(2, ["x"], ["x^3"])
    H = complex_homology(koszul_complex(A3, [A3.P("x")]))
    assert H[0].dim() == 1 and H[1].dim() == 1 and H[1].degrees == (3,)
    H = complex_homology(koszul_complex(A3, [A3.P.zero()]))
    assert H[0].dim() == 3 and H[1].dim() == 3


@pytest.mark.parametrize("entry", ARTINIAN_CORPUS, ids=[c[0] for c in ARTINIAN_CORPUS])
def test_koszul_of_maximal_ideal_has_binomial_ranks(entry):
    _, p, variables, gens = entry
    R = build_ring(p, variables, gens)
    elems = maximal_ideal_generators(R)
    K = koszul_complex(R, elems)
    assert K.check_complex()
    assert K.ranks() == [comb(len(elems), i) for i in range(len(elems) + 1)]
    assert koszul_ranks_ok(K, len(elems))


# --- Tor, Ext, Hilbert --------------------------------------------------------------------------

def test_tor_windows():
    R = make_quotient_ring(2, ["u"])
    point = make_quotient_ring(2, [])
    t = tor_of_map(make_ring_map(R, make_quotient_ring(2, ["v"]), ["v^2"]), 5)
    assert t.verdict == "FLAT" and t.dims[1:] == [0] * 5
    t = tor_of_map(make_ring_map(R, point, ["0"]), 5)
    assert t.verdict == "FINITE_FD" and t.fd == 1 and t.dims == [1, 1, 0, 0, 0, 0]
    R2 = make_quotient_ring(2, ["u"], ["u^2"])
    t = tor_of_map(make_ring_map(R2, point, ["0"]), 5)
    assert t.verdict == "WINDOW_INCONCLUSIVE" and t.dims == [1] * 6


def test_ext_examples():
    A = make_quotient_ring(2, ["w", "z"], ["z^2"])
    E = ext_against_ring(FiniteModule.cyclic(A, ["z"]), 4)
    assert E[0].ngens == 1 and E[0].degrees == (1,)
    assert all(e.ngens == 0 for e in E[1:])
    E = ext_against_ring(FiniteModule(A, [0, 1]), 3)
    assert sorted(E[0].degrees) == [-1, 0] and all(e.ngens == 0 for e in E[1:])


def test_ext_of_residue_field_over_self_injective_ring(hypersurface):
    """Artinian Gorenstein rings are injective over themselves: only the socle survives."""
    E = ext_against_ring(FiniteModule.residue_field(hypersurface), 6)
    assert [e.dim() for e in E] == [1, 0, 0, 0, 0, 0, 0]


def test_ext_of_residue_field_over_golod_never_vanishes(golod):
    E = ext_against_ring(FiniteModule.residue_field(golod), 4)
    assert all(e.ngens > 0 for e in E)


def test_hilbert_series_examples():
    S = make_quotient_ring(2, ["x", "y"], ["x*y"])
    assert str(hilbert_series(S)) == "(1 + t)/(1-t)"
    assert hilbert_series(S).coefficients(4) == {0: 1, 1: 2, 2: 2, 3: 2, 4: 2}
    k = FiniteModule.residue_field(S)
    assert str(hilbert_series(k)) == "1"
    G = make_quotient_ring(2, ["a", "b", "c"], ["a*b", "a*c", "b*c", "a^2+b^2", "b^2+c^2"])
    assert str(hilbert_series(G)) == "1 + 3*t + t^2"


@pytest.mark.parametrize("entry", [(2, ["x", "y"], ["x^2"]), (3, ["x", "y", "z"], ["x*y", "z^3"]),
                                  (2, ["x:1", "y:2"], ["x^2*y"]), (5, ["x", "y"], [])])
def test_hilbert_series_matches_normal_form_count(entry):
    R = make_quotient_ring(*entry)
    H = hilbert_series(R).coefficients(6)
    direct = R.hilbert_function(6)
    assert {d: n for d, n in H.items() if n} == {d: n for d, n in direct.items() if n}


# --- truncations and tables ---------------------------------------------------------------------

def test_poincare_truncation_arithmetic():
    a = PoincareTruncation([1, 1, 1, 1], 3)
    b = PoincareTruncation([1, 2, 4, 8], 3)
    assert (a * a).coefficients == [1, 2, 3, 4]
    assert a.dominated_by(b) and not b.dominated_by(a)
    assert b.first_violation(a) == 1
    assert a.shifted(1).coefficients == [0, 1, 1, 1]
    assert (a + b).coefficients == [2, 3, 5, 9]


def test_betti_table_rendering(golod):
    F = minimal_free_resolution(FiniteModule.residue_field(golod), 3)
    table = BettiTable.from_complex(F, 3)
    assert table.totals() == [1, 2, 4, 8]
    text = str(table)
    assert "total" in text

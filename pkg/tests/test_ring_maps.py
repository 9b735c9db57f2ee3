from fractions import Fraction

import pytest

from conftest import ARTINIAN_CORPUS, build_ring, canonical_maps
from frobkit.modules import FiniteModule
from frobkit.groebner import FreeModule, buchberger, eliminate, normal_form
from frobkit.poly import PolyRing
from frobkit.pushforward import (NotModuleFinite, Pushforward, RelativeFrobenius,
                                 frobenius_pushforward, frobenius_pushforward_module)
from frobkit.resolution import hilbert_series, minimal_free_resolution
from frobkit.rings import (RingError, fiber_ring, frobenius_map, identity_map,
                           make_quotient_ring, make_ring_map)


def test_quotient_ring_examples():
    H = make_quotient_ring(2, ["x"], ["x^2"])
    assert H.kbasis() == [(0,), (1,)]
    G = make_quotient_ring(2, ["a", "b"], ["a^2", "a*b", "b^2"])
    assert G.dim() == 3
    W = make_quotient_ring(2, ["u:2", "v:1"], ["v^2 + u"])
    assert W.hilbert_function(4) == {0: 1, 1: 1, 2: 1, 3: 1, 4: 1}


@pytest.mark.parametrize("gens,code", [(["x + y^2"], "NONHOMOGENEOUS"), (["1"], "UNIT_IN_IDEAL")])
def test_quotient_ring_rejects(gens, code):
    with pytest.raises(RingError) as info:
        make_quotient_ring(3, ["x", "y"], gens)
    assert info.value.code == code


def test_map_examples_and_degree_scale():
    inc, sq, gol = canonical_maps()
    assert inc.degree_scale == 1 and sq.degree_scale == 1 and gol.degree_scale == 1
    H = make_quotient_ring(2, ["x"], ["x^2"])
    frob = make_ring_map(H, H, ["x^2"])
    assert frob.images[0].is_zero()
    assert frobenius_map(make_quotient_ring(3, ["x"]), 1).degree_scale == 3


@pytest.mark.parametrize("images,code", [
    (["x", "y^2"], "DEGREE_SCALE"),
    (["x + y^2", "y"], "NONHOMOGENEOUS"),
])
def test_map_rejects(images, code):
    R = make_quotient_ring(2, ["a", "b"])
    S = make_quotient_ring(2, ["x", "y"])
    with pytest.raises(RingError) as info:
        make_ring_map(R, S, images)
    assert info.value.code == code


def test_map_must_respect_ideal():
    R = make_quotient_ring(2, ["a"], ["a^2"])
    S = make_quotient_ring(2, ["x"], ["x^3"])
    with pytest.raises(RingError) as info:
        make_ring_map(R, S, ["x"])
    assert info.value.code == "NOT_WELL_DEFINED"


def test_fibers():
    inc, sq, gol = canonical_maps()
    assert fiber_ring(inc).nvars == 1 and fiber_ring(inc).is_polynomial_ring()
    F2 = fiber_ring(sq)
    assert F2.dim() == 2
    F3 = fiber_ring(gol)
    assert F3.dim() == 3 and F3.nvars == 2


def test_frobenius_pushforward_examples():
    M = frobenius_pushforward(make_quotient_ring(2, ["x"]))
    assert M.ngens == 2 and not M.relations
    M = frobenius_pushforward(make_quotient_ring(2, ["x"], ["x^2"]))
    assert M.ngens == 2 and M.annihilated_by_maximal_ideal()
    M = frobenius_pushforward(make_quotient_ring(2, ["x"], ["x^3"]))
    assert sorted(M.degrees) == [0, Fraction(1, 2)]
    assert M.dim() == 3


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_pushforward_of_polynomial_ring_is_free(p, n):
    S = make_quotient_ring(p, [f"x{i}" for i in range(n)])
    M = frobenius_pushforward(S)
    assert M.ngens == p ** n and not M.relations


@pytest.mark.parametrize("entry", ARTINIAN_CORPUS, ids=[c[0] for c in ARTINIAN_CORPUS])
def test_pushforward_preserves_length(entry):
    _, p, variables, gens = entry
    S = build_ring(p, variables, gens)
    assert frobenius_pushforward(S).dim() == S.dim()


def graded_betti(M, N=4):
    return [sorted(ds) for ds in minimal_free_resolution(M, N).degrees]


@pytest.mark.parametrize("entry", ARTINIAN_CORPUS[:8], ids=[c[0] for c in ARTINIAN_CORPUS[:8]])
def test_pushforward_routes_agree(entry):
    """The monomial decomposition and the elimination presentation describe one module."""
    _, p, variables, gens = entry
    S = build_ring(p, variables, gens)
    psi = frobenius_map(S)
    a = Pushforward(psi, route="decomposition").module
    b = Pushforward(psi, route="elimination").module
    assert sorted(a.degrees) == sorted(b.degrees)
    assert hilbert_series(a).coefficients(4) == hilbert_series(b).coefficients(4)
    assert graded_betti(a) == graded_betti(b)


def test_pushforward_module_examples():
    A = make_quotient_ring(2, ["u"])
    psi = make_ring_map(A, make_quotient_ring(2, ["v"]), ["v^2"])
    M = Pushforward(psi, gens=[(0,), (1,)], route="elimination").module
    assert M.ngens == 2 and not M.relations
    psi = make_ring_map(A, make_quotient_ring(2, ["v"], ["v^3"]), ["v"])
    M = Pushforward(psi, gens=[(0,)], route="elimination").module
    assert M.ngens == 1 and M.dim() == 3
    M = Pushforward(identity_map(A), gens=[(0,)], route="elimination").module
    assert M.ngens == 1 and not M.relations


def test_not_module_finite_has_witness():
    A = make_quotient_ring(2, ["u"])
    B = make_quotient_ring(2, ["u", "v"])
    psi = make_ring_map(A, B, ["u"])
    with pytest.raises(NotModuleFinite) as info:
        Pushforward(psi, gens=[(0, 0)], route="elimination")
    assert info.value.witness is not None


def test_relative_frobenius_examples():
    inc, sq, _ = canonical_maps()
    rf = RelativeFrobenius(inc)
    assert rf.A.is_polynomial_ring() and rf.A.nvars == 2
    assert rf.module.ngens == 2 and not rf.module.relations
    rf = RelativeFrobenius(sq)
    assert rf.A.nvars == 2 and len(rf.A.ideal) == 1
    assert rf.module.ngens == 2
    assert minimal_free_resolution(rf.module, 6).ranks() == [2] * 7
    assert rf.check_diagram()


@pytest.mark.parametrize("e", [1, 2])
def test_relative_frobenius_base_cases(e):
    """Over the identity the relative Frobenius is an isomorphism; over F_p it is F^e_*S."""
    for S in (make_quotient_ring(2, ["x"]), make_quotient_ring(3, ["x", "y"], ["x^2", "x*y"])):
        rf = RelativeFrobenius(identity_map(S), e)
        assert rf.module.ngens == 1 and not rf.module.relations
        point = make_quotient_ring(S.p, [])
        rf = RelativeFrobenius(make_ring_map(point, S, []), e)
        absolute = frobenius_pushforward(S, e)
        assert rf.A.nvars == S.nvars
        assert graded_betti(rf.module) == graded_betti(absolute)


def test_pushforward_of_module_twists_degrees():
    S = make_quotient_ring(2, ["x"])
    M = FiniteModule(S, [2], [])
    N = frobenius_pushforward_module(M, 1)
    assert sorted(N.degrees) == [1, Fraction(3, 2)]


@pytest.mark.parametrize("which", [0, 1, 2])
def test_relative_ring_composes_one_frobenius_at_a_time(which):
    """S ⊗_R F^{e+1}_*R equals (S ⊗_R F^e_*R) ⊗ F^{e+1}_*R with the middle variables eliminated."""
    phi = canonical_maps()[which]
    e = 1
    R, S = phi.source, phi.target
    direct = RelativeFrobenius(phi, e + 1).A_full
    one_step = RelativeFrobenius(phi, e).A_full
    nx, ny, p = S.nvars, R.nvars, S.p
    mids = [f"{n}_mid" for n in one_step.names[nx:]]
    P = PolyRing(p, list(direct.names) + mids,
                 list(direct.weights) + list(one_step.weights[nx:]))
    xs, tops, ms = P.gens()[:nx], P.gens()[nx:nx + ny], P.gens()[nx + ny:]
    old = xs + ms
    gens = [f.substitute(old, P) for f in one_step.ideal]
    gens += [m - t ** p for m, t in zip(ms, tops)]
    gens += [g.substitute(tops, P) for g in R.ideal]
    G = eliminate(buchberger(gens, module=FreeModule(P, [0])), direct.names)
    two_step = [f.substitute(direct.P.gens() + [direct.P.zero()] * ny, direct.P) for f in G.polys()]
    mine = buchberger(two_step, module=FreeModule(direct.P, [0])) if two_step else None
    for f in direct.ideal:
        assert mine is not None and normal_form(f, mine).is_zero()
    for f in two_step:
        assert direct.is_zero(f)


def test_elimination_defaults_to_nakayama_generators():
    # u -> x + y is not a pure power, so generators come from B / (x + y) = F_2[x]/(x^2)
    B = make_quotient_ring(2, ["x", "y"], ["x^2", "y^2"])
    A = make_quotient_ring(2, ["u"], ["u^3"])
    pf = Pushforward(make_ring_map(A, B, ["x + y"]))
    assert pf.route == "elimination"
    assert pf.module.ngens == 2 and pf.module.dim() == B.dim()

"""Homological detectors built on Frobenius pushforwards.

Every asymptotic statement here is a window verdict: curvature and the
vanishing of Ext or Tor at infinity cannot be decided from finitely many
Betti numbers, so each result records the cutoffs it used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .groebner import FreeModule, kernel_vecs, reduce_mod_ideal, vec_degree
from .modules import FiniteModule
from .pushforward import (NotModuleFinite, Pushforward, RelativeFrobenius,
                          frobenius_pushforward, frobenius_pushforward_complex,
                          frobenius_pushforward_module, pushforward_complex)
from .resolution import (DEFAULT_CUTOFF, BettiTable, PoincareTruncation, betti_and_poincare,
                         complex_homology, ext_against_ring, ext_from_resolution,
                         hilbert_series, koszul_of_maximal_ideal, minimal_free_resolution,
                         resolve_complex, subquotient, tensor_with_module, tor_of_map)
from .rings import GradedQuotientRing, RingMap, fiber_ring, identity_map

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"

DEFAULT_DELTA = 0.1
DEFAULT_TOLERANCE = 0.15


@dataclass
class TestVerdict:
    """Outcome of one detector.

    `verdict` is the detector's answer (PASS/FAIL/INCONCLUSIVE or a label such
    as REGULAR_MAP); `outcome` folds it to PASS/FAIL/INCONCLUSIVE for exit codes.
    """
    __test__ = False

    claim: str
    verdict: str
    outcome: str
    evidence: dict = field(default_factory=dict)
    cutoffs: dict = field(default_factory=dict)
    witness: dict | None = None

    def __post_init__(self):
        if self.outcome == FAIL and self.witness is None:
            raise ValueError("a FAIL verdict needs a witness")


# --- growth ---------------------------------------------------------------------------

@dataclass
class GrowthClassification:
    kind: str                        # FINITE, POLYNOMIAL, EXPONENTIAL
    window: list
    delta: float
    tolerance: float
    pd: int | None = None
    degree_estimate: int | None = None
    rate: Fraction | None = None
    ratios: list = field(default_factory=list)

    @property
    def label(self) -> str:
        if self.kind == "FINITE":
            return f"FINITE({self.pd})"
        if self.kind == "POLYNOMIAL":
            return f"POLYNOMIAL({self.degree_estimate})"
        return f"EXPONENTIAL({float(self.rate):.3f})"

    @property
    def rank(self) -> int:
        return {"FINITE": 0, "POLYNOMIAL": 1, "EXPONENTIAL": 2}[self.kind]


def classify_growth(P, delta: float = DEFAULT_DELTA,
                    tolerance: float = DEFAULT_TOLERANCE) -> GrowthClassification:
    """Window classification of Betti growth (P: PoincareTruncation or coefficient list)."""
    betas = list(P.coefficients if isinstance(P, PoincareTruncation) else P)
    N = len(betas) - 1
    if N < 4:
        raise ValueError("WINDOW_TOO_SHORT: need Betti numbers through n = 4")
    zeros = [n for n, b in enumerate(betas) if b == 0]
    if zeros:
        first = zeros[0]
        if any(betas[first:]):
            raise ValueError("Betti numbers of a minimal resolution cannot restart after a zero")
        return GrowthClassification("FINITE", betas, delta, tolerance, pd=first - 1)
    lo = N // 2
    ratios = [Fraction(betas[n + 1], betas[n]) for n in range(lo, N)]
    if max(ratios) <= 1 + Fraction(delta).limit_denominator(1000):
        # slope of log beta against log n over the same half window
        if betas[N] == betas[lo] or lo == 0:
            deg = 0
        else:
            deg = round(math.log(betas[N] / betas[lo]) / math.log(N / lo))
        return GrowthClassification("POLYNOMIAL", betas, delta, tolerance,
                                    degree_estimate=deg, ratios=ratios)
    rate = math.exp(sum(math.log(r) for r in ratios) / len(ratios))
    rate = Fraction(rate).limit_denominator(10**6)
    if rate < 1 + Fraction(tolerance).limit_denominator(1000):
        # ratios wobble above 1 + delta but the mean does not clear the exponential floor
        return GrowthClassification("POLYNOMIAL", betas, delta, tolerance,
                                    degree_estimate=None, ratios=ratios)
    return GrowthClassification("EXPONENTIAL", betas, delta, tolerance, rate=rate,
                                ratios=ratios)


def same_growth(a: GrowthClassification, b: GrowthClassification) -> bool:
    if a.kind != b.kind:
        return False
    if a.kind == "EXPONENTIAL":
        return abs(float(a.rate) - float(b.rate)) <= a.tolerance
    return True


def growth_at_most(a: GrowthClassification, b: GrowthClassification) -> bool:
    """a <= b in the order FINITE < POLYNOMIAL < EXPONENTIAL(rate), rates up to tolerance."""
    if a.rank != b.rank:
        return a.rank < b.rank
    if a.kind == "EXPONENTIAL":
        return float(a.rate) <= float(b.rate) + a.tolerance
    return True


def _betti_evidence(table: BettiTable) -> dict:
    return {"totals": table.totals(), "table": table.rows()}


# --- Kunz -------------------------------------------------------------------------------

def kunz_test(R: GradedQuotientRing, e: int = 1) -> TestVerdict:
    """R is regular iff F^e_*R is free (flat and finite graded)."""
    M = frobenius_pushforward(R, e)
    b0, b1 = M.ngens, len(M.relations)
    verdict = "REGULAR" if b1 == 0 else "NOT_REGULAR"
    return TestVerdict("Frobenius is flat exactly for regular rings", verdict, PASS,
                       {"beta0": b0, "beta1": b1, "degrees": list(M.degrees)}, {"e": e})


# --- Radu-André and the main sandwich -------------------------------------------------------

def _flat_window(phi: RingMap, N: int):
    tor = tor_of_map(phi, N)
    return tor, {"tor_dims": tor.dims, "tor_verdict": tor.verdict, "fd": tor.fd}


def relative_side(phi: RingMap, e: int, N: int, delta=DEFAULT_DELTA,
                  tolerance=DEFAULT_TOLERANCE):
    rf = RelativeFrobenius(phi, e)
    table, P = betti_and_poincare(rf.module, N)
    return rf, table, classify_growth(P, delta, tolerance)


def fiber_side(phi: RingMap, e: int, N: int, delta=DEFAULT_DELTA,
               tolerance=DEFAULT_TOLERANCE):
    fib = fiber_ring(phi)
    table, P = betti_and_poincare(frobenius_pushforward(fib, e), N)
    return fib, table, classify_growth(P, delta, tolerance)


def radu_andre_test(phi: RingMap, e: int = 1, N: int = DEFAULT_CUTOFF,
                    delta=DEFAULT_DELTA, tolerance=DEFAULT_TOLERANCE,
                    tor_cutoff: int | None = None, cross_check: bool = False) -> TestVerdict:
    """Classify phi through the Betti growth of F^e_*S over A = S ⊗_R F^e_*R."""
    claim = "regular / complete intersection map detected by the relative Frobenius"
    tor, tor_ev = _flat_window(phi, tor_cutoff if tor_cutoff is not None else min(N, 4))
    cut = {"N": N, "e": e, "tor_cutoff": tor.cutoff}
    if tor.verdict == "WINDOW_INCONCLUSIVE":
        return TestVerdict(claim, INCONCLUSIVE, INCONCLUSIVE, tor_ev, cut)
    rf, table, growth = relative_side(phi, e, N, delta, tolerance)
    verdict = {"FINITE": "REGULAR_MAP", "POLYNOMIAL": "CI_MAP", "EXPONENTIAL": "NEITHER"}[
        growth.kind]
    ev = dict(tor_ev, relative=_betti_evidence(table), growth=growth.label,
              ring=repr(rf.A))
    if cross_check:
        _, ftable, fgrowth = fiber_side(phi, e, N, delta, tolerance)
        ev["fiber"] = _betti_evidence(ftable)
        ev["fiber_growth"] = fgrowth.label
    return TestVerdict(claim, verdict, PASS, ev, cut)


def sandwich_holds(fiber: GrowthClassification, relative: GrowthClassification) -> bool:
    if fiber.kind == "FINITE":
        return relative.kind in ("FINITE", "POLYNOMIAL")
    if fiber.kind == "POLYNOMIAL":
        return relative.kind == "POLYNOMIAL"
    return relative.kind == "EXPONENTIAL" and same_growth(fiber, relative)


def theorem_main_check(phi: RingMap, e: int = 1, N: int = DEFAULT_CUTOFF,
                       delta=DEFAULT_DELTA, tolerance=DEFAULT_TOLERANCE) -> TestVerdict:
    """Growth of F^e_* on the fiber sandwiches growth of the relative Frobenius."""
    claim = "curv of F_* on the fiber bounds curv of the relative Frobenius"
    tor, tor_ev = _flat_window(phi, min(N, 4))
    cut = {"N": N, "e": e, "tor_cutoff": tor.cutoff}
    if tor.verdict != "FLAT":
        tor_ev["reason"] = "derived fibers of non-flat maps are out of scope"
        return TestVerdict(claim, INCONCLUSIVE, INCONCLUSIVE, tor_ev, cut)
    _, ftable, fgrowth = fiber_side(phi, e, N, delta, tolerance)
    _, rtable, rgrowth = relative_side(phi, e, N, delta, tolerance)
    ev = dict(tor_ev, fiber=_betti_evidence(ftable), relative=_betti_evidence(rtable),
              fiber_growth=fgrowth.label, relative_growth=rgrowth.label)
    if sandwich_holds(fgrowth, rgrowth):
        return TestVerdict(claim, PASS, PASS, ev, cut)
    witness = {"n": N, "fiber": fgrowth.label, "relative": rgrowth.label}
    return TestVerdict(claim, FAIL, FAIL, ev, cut, witness)


# --- lemmas on curvature of pushforwards ---------------------------------------------------

def eth_check(S: GradedQuotientRing, M: FiniteModule | None = None, e: int = 1,
              N: int = DEFAULT_CUTOFF, delta=DEFAULT_DELTA,
              tolerance=DEFAULT_TOLERANCE) -> TestVerdict:
    """Growth of F^e_*M matches growth of the residue field."""
    claim = "curvature of F^e_*M equals curvature of k"
    M = M if M is not None else FiniteModule(S, [0], [])
    if M.is_zero():
        raise ValueError("M must be nonzero")
    tm, Pm = betti_and_poincare(frobenius_pushforward_module(M, e), N)
    tk, Pk = betti_and_poincare(FiniteModule.residue_field(S), N)
    gm, gk = classify_growth(Pm, delta, tolerance), classify_growth(Pk, delta, tolerance)
    ev = {"pushforward": _betti_evidence(tm), "residue_field": _betti_evidence(tk),
          "pushforward_growth": gm.label, "residue_field_growth": gk.label}
    cut = {"N": N, "e": e}
    # both sides are FINITE for regular rings; pd values may differ
    if same_growth(gm, gk):
        return TestVerdict(claim, PASS, PASS, ev, cut)
    return TestVerdict(claim, FAIL, FAIL, ev, cut,
                       {"n": N, "pushforward": gm.label, "residue_field": gk.label})


def koszul_homology_length(S: GradedQuotientRing) -> int:
    """c = 1 + sup{i : H_i(K^S) != 0}."""
    H = complex_homology(koszul_of_maximal_ideal(S))
    top = max((i for i, h in H.items() if h.ngens), default=-1)
    return 1 + top


def blimp_split_check(S: GradedQuotientRing, M: FiniteModule | None = None, e: int | None = None,
                      N: int = 5) -> TestVerdict:
    """For p^e > c the pushforward F^e_*K^M splits as the sum of its shifted homology."""
    claim = "F^e_*K^M splits into shifted pushforwards of its homology"
    M = M if M is not None else FiniteModule(S, [0], [])
    c = koszul_homology_length(S)
    if e is None:
        e = 1
        while S.p ** e <= c:
            e += 1
    in_range = S.p ** e > c
    K = koszul_of_maximal_ideal(M)
    FK = frobenius_pushforward_complex(K, e)
    lhs = BettiTable.from_complex(resolve_complex(FK, N), N).totals()
    H = complex_homology(K)
    rhs = [0] * (N + 1)
    hom_ranks = {}
    for i, h in H.items():
        if not h.ngens:
            continue
        hom_ranks[i] = h.ngens
        b = BettiTable.from_complex(minimal_free_resolution(frobenius_pushforward_module(h, e),
                                                           N), N).totals()
        for n in range(i, N + 1):
            rhs[n] += b[n - i]
    k_totals = BettiTable.from_complex(
        minimal_free_resolution(FiniteModule.residue_field(S), N), N).totals()
    ev = {"c": c, "in_range": in_range, "complex_side": lhs, "homology_side": rhs,
          "residue_field": k_totals, "homology_positions": sorted(hom_ranks)}
    label = PASS if in_range else "OUT_OF_RANGE"
    cut = {"N": N, "e": e}
    if lhs != rhs:
        n = next(i for i in range(N + 1) if lhs[i] != rhs[i])
        return TestVerdict(claim, FAIL if in_range else label, FAIL if in_range else INCONCLUSIVE,
                           ev, cut, {"n": n, "complex_side": lhs[n], "homology_side": rhs[n]})
    if hom_ranks:
        bad = next((n for n in range(N + 1) if lhs[n] < k_totals[n]), None)
        if bad is not None:
            return TestVerdict(claim, FAIL if in_range else label,
                               FAIL if in_range else INCONCLUSIVE, ev, cut,
                               {"n": bad, "complex_side": lhs[bad],
                                "residue_field": k_totals[bad]})
    return TestVerdict(claim, label, PASS if in_range else INCONCLUSIVE, ev, cut)


def discrete_regularity_check(S: GradedQuotientRing, M: FiniteModule | None = None, e: int = 1,
                              N: int = DEFAULT_CUTOFF) -> TestVerdict:
    """Finite projective dimension of F^e_*M forces S regular."""
    claim = "F^e_*M of finite projective dimension implies regularity"
    M = M if M is not None else FiniteModule(S, [0], [])
    table, P = betti_and_poincare(frobenius_pushforward_module(M, e), N)
    g = classify_growth(P)
    ev = {"pushforward": _betti_evidence(table), "growth": g.label}
    cut = {"N": N, "e": e}
    if g.kind != "FINITE":
        ev["vacuous"] = True
        return TestVerdict(claim, PASS, PASS, ev, cut)
    k = kunz_test(S, e)
    ev["kunz"] = k.verdict
    if k.verdict == "REGULAR":
        return TestVerdict(claim, PASS, PASS, ev, cut)
    return TestVerdict(claim, FAIL, FAIL, ev, cut, {"n": g.pd, "kunz": k.verdict})


# --- Gorenstein -----------------------------------------------------------------------------

def socle(S: GradedQuotientRing) -> FiniteModule:
    """ann(m) as a presented module (its generators are socle elements)."""
    P = S.P
    col = {}
    for i, x in enumerate(P.gens()):
        for m, c in x.as_dict().items():
            col[(i, m)] = c
    ann = kernel_vecs([col], [Fraction(0)], [-w for w in P.weights], P, S.ideal or None)
    gens = [{(0, m): c for (_, m), c in v.items()} for v in ann]
    gens = [reduce_mod_ideal(v, P, S.ideal) if S.ideal else v for v in gens]
    gens = [v for v in gens if v]
    degs = []
    for v in gens:
        (_, m), _ = next(iter(v.items()))
        degs.append(P.mono_degree(m))
    return subquotient(S, gens, degs, [], [Fraction(0)])


def krull_dimension(S: GradedQuotientRing) -> int:
    hs = hilbert_series(S)
    if hs.finite is not None:
        return 0
    # order of the pole at t = 1 after clearing rational exponents
    den = hs.denominator
    L = 1
    for e in list(hs.numerator) + den:
        L = L * Fraction(e).denominator // math.gcd(L, Fraction(e).denominator)
    num = {int(e * L): c for e, c in hs.numerator.items()}
    order = 0
    while num and sum(num.values()) == 0:
        # divide by (1 - s): coefficients of the quotient are partial sums
        out, acc = {}, 0
        for k in range(min(num), max(num)):
            acc += num.get(k, 0)
            if acc:
                out[k] = acc
        num = out
        order += 1
    return len(den) - order


def gorenstein_fiber_test(F: GradedQuotientRing, N: int = DEFAULT_CUTOFF) -> TestVerdict:
    """Artinian: one-dimensional socle. Otherwise a Bass-number window."""
    claim = "fiber ring is Gorenstein"
    if F.is_artinian():
        soc = socle(F)
        d = soc.dim()
        verdict = "GORENSTEIN" if d == 1 else "NOT_GORENSTEIN"
        return TestVerdict(claim, verdict, PASS, {"socle_dim": d, "dim_k": F.dim()},
                           {"N": N})
    dim = krull_dimension(F)
    E = ext_against_ring(FiniteModule.residue_field(F), N)
    bass = [e.dim() if e.ngens else 0 for e in E]
    ev = {"krull_dim": dim, "bass_numbers": bass}
    if dim > N:
        return TestVerdict(claim, INCONCLUSIVE, INCONCLUSIVE, ev, {"N": N})
    ok = all(b == (1 if i == dim else 0) for i, b in enumerate(bass))
    return TestVerdict(claim, "GORENSTEIN_WINDOW" if ok else "NOT_GORENSTEIN", PASS, ev,
                       {"N": N})


def _dual_columns(cols, nrows):
    """Transpose a list of column vectors with nrows rows."""
    out = [dict() for _ in range(nrows)]
    for s, col in enumerate(cols):
        for (r, m), c in col.items():
            out[r][(s, m)] = c
    return out


def _in_span(vecs, target_vecs, degrees, ring) -> bool:
    """Every vector in vecs lies in the submodule spanned by target_vecs."""
    if not vecs:
        return True
    M = FiniteModule(ring, degrees, target_vecs, check=False)
    return all(M.is_zero_vec(v) for v in vecs)


def gdim_window_check(A: GradedQuotientRing, M: FiniteModule, N: int = DEFAULT_CUTOFF,
                      F=None) -> TestVerdict:
    """G-dimension of M within the window: Ext vanishing plus biduality of a syzygy."""
    claim = "finite G-dimension (derived reflexivity) within the window"
    if F is None:
        F = minimal_free_resolution(M, N + 1)
    E = ext_from_resolution(F, N)
    nonzero = [e.ngens > 0 for e in E]
    dims = [e.dim() if e.ngens and e.is_finite_length() else (0 if not e.ngens else None)
            for e in E]
    ev = {"ext_nonzero": nonzero, "ext_dims": dims, "ext_ngens": [e.ngens for e in E],
          "betti": F.ranks()}
    cut = {"N": N}
    if nonzero[N]:
        return TestVerdict(claim, "OBSTRUCTION_AT_WINDOW", PASS, ev, cut)
    g = max((i for i in range(N + 1) if nonzero[i]), default=0)
    P = A.P
    zero = (0,) * A.nvars
    Fg = list(F.degrees_at(g))
    ev["g"] = g
    if not Fg:
        return TestVerdict(claim, f"G_DIM_AT_MOST({g})", PASS, ev, cut)
    dual_degs = [-d for d in Fg]
    nxt = F.d(g + 1)
    if nxt:
        cols_T = _dual_columns(nxt, len(Fg))
        phi = kernel_vecs(cols_T, dual_degs, [-d for d in F.degrees_at(g + 1)], P,
                          A.ideal or None)
    else:
        phi = [{(r, zero): 1} for r in range(len(Fg))]
    free_dual = FreeModule(P, dual_degs)
    phi_degs = [vec_degree(v, free_dual) for v in phi]
    # M_g* = A^s / Psi, Psi = syzygies of Phi
    psi = kernel_vecs(phi, phi_degs, dual_degs, P, A.ideal or None)
    dual_mod = FiniteModule(A, phi_degs, psi, check=False)
    # biduality map F_g -> A^s (degrees -phi_degs) is Phi^T
    phiT = _dual_columns(phi, len(Fg))
    bidual_degs = [-d for d in phi_degs]
    ker_phiT = kernel_vecs(phiT, Fg, bidual_degs, P, A.ideal or None)
    injective = _in_span(ker_phiT, list(nxt), Fg, A)
    psiT = _dual_columns(psi, len(phi))
    if psi:
        ker_psiT = kernel_vecs(psiT, bidual_degs, [-vec_degree(v, FreeModule(P, phi_degs))
                                                   for v in psi], P, A.ideal or None)
    else:
        ker_psiT = [{(j, zero): 1} for j in range(len(phi))]
    surjective = _in_span(ker_psiT, phiT, bidual_degs, A)
    dual_ext = ext_against_ring(dual_mod, N - g) if N - g >= 1 else []
    dual_vanish = [not e.ngens for e in dual_ext[1:]]
    ev.update(reflexive_injective=injective, reflexive_surjective=surjective,
              dual_ext_vanishing=dual_vanish, dual_ngens=dual_mod.minimal_presentation().ngens)
    if injective and surjective and all(dual_vanish):
        return TestVerdict(claim, f"G_DIM_AT_MOST({g})", PASS, ev, cut)
    return TestVerdict(claim, "NOT_REFLEXIVE_AT_WINDOW", INCONCLUSIVE, ev, cut)


def gorenstein_theorem_check(phi: RingMap, e: int = 1, N: int = DEFAULT_CUTOFF,
                             fiber_cutoff: int | None = None) -> TestVerdict:
    """Gorenstein fiber <=> G-dimension of the relative Frobenius is finite (window)."""
    claim = "Gorenstein fibers exactly when the relative Frobenius has finite G-dimension"
    tor, tor_ev = _flat_window(phi, min(N, 4))
    cut = {"N": N, "e": e, "tor_cutoff": tor.cutoff}
    if tor.verdict != "FLAT":
        tor_ev["reason"] = "derived fibers of non-flat maps are out of scope"
        return TestVerdict(claim, INCONCLUSIVE, INCONCLUSIVE, tor_ev, cut)
    fiber = gorenstein_fiber_test(fiber_ring(phi), fiber_cutoff or N)
    rf = RelativeFrobenius(phi, e)
    gd = gdim_window_check(rf.A, rf.module, N)
    ev = dict(tor_ev, fiber=fiber.verdict, fiber_evidence=fiber.evidence,
              relative=gd.verdict, relative_evidence=gd.evidence)
    if fiber.outcome == INCONCLUSIVE or gd.outcome == INCONCLUSIVE:
        return TestVerdict(claim, INCONCLUSIVE, INCONCLUSIVE, ev, cut)
    gor = fiber.verdict in ("GORENSTEIN", "GORENSTEIN_WINDOW")
    finite = gd.verdict.startswith("G_DIM_AT_MOST")
    if gor == finite:
        return TestVerdict(claim, PASS, PASS, ev, cut)
    return TestVerdict(claim, FAIL, FAIL, ev, cut,
                       {"n": N, "fiber": fiber.verdict, "relative": gd.verdict})


# --- deviations ---------------------------------------------------------------------------

class DeviationError(ValueError):
    def __init__(self, code, message=""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


@dataclass
class DeviationSequence:
    eps: list                 # eps[0] is the first deviation
    cutoff: int

    def __getitem__(self, i):
        """1-based access: self[1] is the first deviation."""
        return self.eps[i - 1]

    def reexpand(self, N: int | None = None) -> list:
        N = self.cutoff if N is None else N
        return _product_series(self.eps, N)


def _product_series(eps, N) -> list:
    series = [1] + [0] * N
    for i, e in enumerate(eps, start=1):
        if not e or i > N:
            continue
        if i % 2:
            factor = [0] * (N + 1)
            for j in range(e + 1):
                if i * j <= N:
                    factor[i * j] = comb(e, j)
        else:
            factor = [0] * (N + 1)
            j = 0
            while i * j <= N:
                factor[i * j] = comb(e + j - 1, j)
                j += 1
        series = [sum(series[a] * factor[n - a] for a in range(n + 1)) for n in range(N + 1)]
    return series


def deviations_from_poincare(P) -> DeviationSequence:
    """Exponents in prod_{odd}(1+t^i)^e_i / prod_{even}(1-t^i)^e_i matching P to t^N."""
    betas = list(P.coefficients if isinstance(P, PoincareTruncation) else P)
    N = len(betas) - 1
    if betas[0] != 1:
        raise DeviationError("NOT_A_RESIDUE_FIELD_SERIES", "beta_0 must be 1")
    eps: list = []
    for n in range(1, N + 1):
        current = _product_series(eps, n)
        e = betas[n] - current[n]
        if e < 0:
            raise DeviationError("NOT_A_RESIDUE_FIELD_SERIES", f"negative deviation at {n}")
        eps.append(e)
    return DeviationSequence(eps, N)


# --- inequalities between Poincaré series ------------------------------------------------------

def derived_tensor_complex(M: FiniteModule, Nmod: FiniteModule, cutoff: int):
    """M ⊗^L Nmod through homological degree cutoff+1 (resolve Nmod, tensor with M)."""
    F = minimal_free_resolution(Nmod, cutoff + 1)
    return tensor_with_module(F, M)


def _le_witness(lhs: PoincareTruncation, rhs: PoincareTruncation):
    n = lhs.first_violation(rhs)
    return None if n is None else {"n": n, "lhs": lhs[n], "rhs": rhs[n]}


def comp_inequality_check(psi: RingMap, M: FiniteModule, Nmod: FiniteModule,
                          cutoff: int = 5) -> TestVerdict:
    """P^A_{M ⊗^L_B N} <= P^A_M * P^B_N coefficientwise, for finite psi: A -> B."""
    claim = "Poincaré series of a derived tensor product is bounded by the product"
    try:
        pf_M = Pushforward(psi, M).module
    except NotModuleFinite as exc:
        raise NotModuleFinite(f"map is not module-finite: {exc}", exc.witness) from exc
    T = derived_tensor_complex(M, Nmod, cutoff)
    TA = pushforward_complex(T, psi)
    lhs = BettiTable.from_complex(resolve_complex(TA, cutoff), cutoff).poincare()
    _, PM = betti_and_poincare(pf_M, cutoff)
    _, PN = betti_and_poincare(Nmod, cutoff)
    rhs = PM * PN
    ev = {"lhs": lhs.coefficients, "rhs": rhs.coefficients,
          "equal": lhs.coefficients == rhs.coefficients}
    w = _le_witness(lhs, rhs)
    cut = {"N": cutoff}
    if w is None:
        return TestVerdict(claim, PASS, PASS, ev, cut)
    return TestVerdict(claim, FAIL, FAIL, ev, cut, w)


def _is_nonzerodivisor(A: GradedQuotientRing, x) -> bool:
    P = A.P
    col = {(0, m): c for m, c in x.as_dict().items()}
    d = x.weighted_degree()
    ann = kernel_vecs([col], [Fraction(0)], [-Fraction(d)], P, A.ideal or None)
    for v in ann:
        w = reduce_mod_ideal(v, P, A.ideal) if A.ideal else v
        if w:
            return False
    return True


def koszul_sandwich_check(A: GradedQuotientRing, x, M: FiniteModule,
                          N: int = DEFAULT_CUTOFF) -> TestVerdict:
    """Growth of M over B = K[A; x] sits between growth over A and max(that, POLYNOMIAL).

    Only the case of a nonzerodivisor x is handled; then B is quasi-isomorphic
    to the ring A/(x) and M is an A/(x)-module.
    """
    claim = "Koszul extension changes curvature by at most one"
    P = A.P
    x = P(x) if not isinstance(x, type(P.zero())) else x
    cut = {"N": N}
    if not _is_nonzerodivisor(A, x):
        return TestVerdict(claim, INCONCLUSIVE, INCONCLUSIVE,
                           {"reason": "zero divisors give a non-discrete Koszul ring"}, cut)
    B = M.ring
    if B.P != P or not all(B.is_zero(f) for f in list(A.ideal) + [x]):
        raise ValueError("M must be a module over A/(x)")
    rels = list(M.relations) + [{(j, m): c for m, c in x.as_dict().items()}
                                for j in range(M.ngens)]
    MA = FiniteModule(A, M.degrees, rels)
    tA, PA = betti_and_poincare(MA, N)
    tB, PB = betti_and_poincare(M, N)
    gA, gB = classify_growth(PA), classify_growth(PB)
    ev = {"over_A": PA.coefficients, "over_B": PB.coefficients, "growth_A": gA.label,
          "growth_B": gB.label}
    # the derived fiber of A -> K[A;x] is an exterior algebra: Poincaré series of k is 1/(1-t)
    bound = PA * PoincareTruncation([1] * (N + 1), N)
    w = _le_witness(PB, bound)
    poly = GrowthClassification("POLYNOMIAL", [], gA.delta, gA.tolerance)
    upper = gA if gA.rank >= 1 else poly
    ok = growth_at_most(gA, gB) and growth_at_most(gB, upper) and w is None
    if ok:
        return TestVerdict(claim, PASS, PASS, ev, cut)
    return TestVerdict(claim, FAIL, FAIL, ev, cut,
                       w or {"n": N, "growth_A": gA.label, "growth_B": gB.label})


def flat_sandwich_check(psi: RingMap, M: FiniteModule, N: int = DEFAULT_CUTOFF) -> TestVerdict:
    """For flat finite psi: A -> B, P^B_M <= P^{B-bar}_k * P^A_M and the curvature sandwich."""
    claim = "flat extension bounds curvature by that of the closed fiber"
    tor = tor_of_map(psi, min(N, 4))
    cut = {"N": N, "tor_cutoff": tor.cutoff}
    if tor.verdict != "FLAT":
        return TestVerdict(claim, INCONCLUSIVE, INCONCLUSIVE, {"tor_verdict": tor.verdict}, cut)
    MA = Pushforward(psi, M).module
    _, PA = betti_and_poincare(MA, N)
    _, PB = betti_and_poincare(M, N)
    fib = fiber_ring(psi)
    _, Pk = betti_and_poincare(FiniteModule.residue_field(fib), N)
    gA, gB, gk = classify_growth(PA), classify_growth(PB), classify_growth(Pk)
    ev = {"over_A": PA.coefficients, "over_B": PB.coefficients, "fiber_k": Pk.coefficients,
          "growth_A": gA.label, "growth_B": gB.label, "growth_fiber": gk.label}
    w = _le_witness(PB, Pk * PA)
    upper = gA if growth_at_most(gk, gA) else gk
    if w is None and growth_at_most(gA, gB) and growth_at_most(gB, upper):
        return TestVerdict(claim, PASS, PASS, ev, cut)
    return TestVerdict(claim, FAIL, FAIL, ev, cut,
                       w or {"n": N, "growth_A": gA.label, "growth_B": gB.label})


def identity_comp_check(B: GradedQuotientRing, cutoff: int = 5) -> TestVerdict:
    """The equality case: M = N = k over the identity map."""
    k = FiniteModule.residue_field(B)
    return comp_inequality_check(identity_map(B), k, k, cutoff)

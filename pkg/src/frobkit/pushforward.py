"""Module-finite pushforwards, Frobenius pushforwards and the relative Frobenius.

Two independent routes present a B-module as a module over A along a finite
ring map A -> B:

* decomposition: when every variable z_k of B is hit by a source variable as a
  pure power z_k^q, the polynomial ring of B splits as a free module on the
  monomials z^a (0 <= a_k < q_k) over those powers, and relations are rewritten
  term by term;
* elimination: a Gröbner basis over F_p[z, w] with the B-side block
  eliminated, for arbitrary finite maps; generators default to the standard
  monomials of M modulo the images of the source variables (graded Nakayama).
"""

from __future__ import annotations

from itertools import product

from . import kernels
from .groebner import FreeModule, buchberger
from .modules import FiniteModule, ModuleComplex, ModuleMap, substitute_positions
from .poly import Polynomial, PolyRing
from .rings import GradedQuotientRing, RingError, RingMap, frobenius_map


class NotModuleFinite(ValueError):
    code = "NOT_MODULE_FINITE"

    def __init__(self, message, witness=None):
        super().__init__(f"NOT_MODULE_FINITE: {message}")
        self.witness = witness


def _power_plan(psi: RingMap):
    """For each target variable: (source index, exponent q, unit c) with lift = c*z^q."""
    plan = []
    n_t = psi.target.nvars
    for k in range(n_t):
        best = None
        for s, h in enumerate(psi.lifts):
            if len(h.terms) != 1:
                continue
            m, c = h.terms[0]
            if m[k] > 0 and sum(m) == m[k]:
                if best is None or m[k] < best[1]:
                    best = (s, m[k], c)
        if best is None:
            return None
        plan.append(best)
    if len({s for s, _, _ in plan}) != len(plan):
        return None
    return plan


def _as_exps(ring: PolyRing, g):
    if isinstance(g, tuple):
        return g
    if isinstance(g, str):
        g = ring(g)
    if isinstance(g, Polynomial):
        if len(g.terms) != 1:
            raise ValueError("generators must be monomials")
        return g.terms[0][0]
    raise TypeError(g)


class Pushforward:
    """B-module `module` viewed as an A-module along psi: A -> B.

    Attributes: raw (presentation on the natural generators), labels (the
    (B-monomial, B-generator) pair behind each raw generator), and
    module (minimal presentation, carrying `transport` from raw).
    """

    def __init__(self, psi: RingMap, module: FiniteModule | None = None, gens=None,
                 route: str = "auto"):
        self.psi = psi
        B = psi.target
        if module is None:
            module = FiniteModule(B, [0], [])
        if module.ring != B:
            raise ValueError("module must live over the target ring")
        self.source_module = module
        self.scale = psi.degree_scale
        plan = _power_plan(psi)
        if route == "auto":
            route = "decomposition" if plan is not None and gens is None else "elimination"
        self.route = route
        if route == "decomposition":
            if plan is None:
                raise ValueError("decomposition route needs pure-power images for every variable")
            self._build_decomposition(plan)
        elif route == "elimination":
            if gens is None and plan is not None:
                gens = [a for a in product(*[range(q) for _, q, _ in plan])]
            elif gens is None:
                gens = sorted({m for _, m in self._fiber_module().kbasis()},
                              key=lambda m: (B.P.mono_degree(m), m))
            self._build_elimination([_as_exps(B.P, g) for g in gens])
        else:
            raise ValueError(route)
        self.module = self.raw.minimal_presentation()

    # --- decomposition route
    def _build_decomposition(self, plan):
        A, B = self.psi.source, self.psi.target
        M = self.source_module
        p = A.p
        nA = A.nvars
        self.plan = plan
        qs = [q for _, q, _ in plan]
        self._qs = qs
        self._inv = [pow(c, p - 2, p) for _, _, c in plan]
        shifts = list(product(*[range(q) for q in qs]))
        self._shift_index = {a: i for i, a in enumerate(shifts)}
        Q = len(shifts)
        self._Q = Q
        labels, degs = [], []
        for j in range(M.ngens):
            for a in shifts:
                labels.append((a, j))
                degs.append((B.P.mono_degree(a) + M.degrees[j]) / self.scale)
        self.labels = labels
        rels = []
        sources = list(M.relations)
        for j in range(M.ngens):
            for g in B.ideal:
                sources.append({(j, m): c for m, c in g.as_dict().items()})
        for r in sources:
            for b in shifts:
                v = self.decompose({(j, tuple(x + y for x, y in zip(m, b))): c
                                    for (j, m), c in r.items()})
                if v:
                    rels.append(v)
        dist = {s for s, _, _ in plan}
        for o in range(nA):
            if o in dist:
                continue
            h = self.psi.images[o]
            e_o = tuple(1 if i == o else 0 for i in range(nA))
            for idx, (a, j) in enumerate(labels):
                v = self.decompose({(j, tuple(x + y for x, y in zip(m, a))): c
                                    for m, c in h.as_dict().items()})
                v = {k: (-c) % p for k, c in v.items()}
                v[(idx, e_o)] = (v.get((idx, e_o), 0) + 1) % p
                v = {k: c for k, c in v.items() if c}
                if v:
                    rels.append(v)
        self.raw = FiniteModule(A, degs, rels)

    def decompose(self, vec: dict) -> dict:
        """Rewrite a vector over B's polynomial ring in the raw A-generators (decomposition route)."""
        p = self.psi.source.p
        nA = self.psi.source.nvars
        plan, qs, inv = self.plan, self._qs, self._inv
        out: dict = {}
        for (j, m), c in vec.items():
            a = tuple(x % q for x, q in zip(m, qs))
            w = [0] * nA
            coef = c
            for k, x in enumerate(m):
                b = x // qs[k]
                if b:
                    w[plan[k][0]] += b
                    if inv[k] != 1:
                        coef = coef * pow(inv[k], b, p) % p
            key = (j * self._Q + self._shift_index[a], tuple(w))
            v = (out.get(key, 0) + coef) % p
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return out

    # --- elimination route
    def _build_elimination(self, gens):
        A, B = self.psi.source, self.psi.target
        M = self.source_module
        p = A.p
        nB, nA = B.nvars, A.nvars
        c = self.scale
        self._check_finite(gens)
        T = PolyRing(p, [f"{n}@t" for n in B.names] + [f"{n}@s" for n in A.names],
                     list(B.weights) + [w * c for w in A.weights])
        self._T = T
        r = M.ngens
        labels = [(g, j) for j in range(r) for g in gens]
        self.labels = labels
        degs_T = list(M.degrees) + [M.degrees[j] + B.P.mono_degree(g) for g, j in labels]
        zB = (0,) * nB
        zA = (0,) * nA

        def up(vec, offset=0):
            return {(i + offset, m + zA): a for (i, m), a in vec.items()}

        elems = [up(v) for v in M.relations]
        for j in range(r):
            for g in B.ideal:
                elems.append({(j, m + zA): a for m, a in g.as_dict().items()})
            for i, h in enumerate(self.psi.images):
                e_i = tuple(1 if t == i else 0 for t in range(nA))
                v = {(j, m + zA): (-a) % p for m, a in h.as_dict().items()}
                v[(j, zB + e_i)] = (v.get((j, zB + e_i), 0) + 1) % p
                elems.append({k: a for k, a in v.items() if a})
        for idx, (g, j) in enumerate(labels):
            elems.append({(j, tuple(g) + zA): 1, (r + idx, zB + zA): p - 1})
        block = [1] * r + [0] * len(labels)
        elim = [1] * nB + [0] * nA
        self._elim_gb = buchberger(elems, module=FreeModule(T, degs_T), block=block, elim=elim)
        self._r = r
        rels = []
        for vec in self._elim_gb.vecs:
            if all(i >= r and not any(m[:nB]) for (i, m) in vec):
                rels.append({(i - r, m[nB:]): a for (i, m), a in vec.items()})
        self.raw = FiniteModule(A, [d / c for d in degs_T[r:]], rels)

    def _fiber_module(self) -> FiniteModule:
        """M / (images of source variables) M; finite length exactly when psi is finite on M."""
        B = self.psi.target
        M = self.source_module
        rels = list(M.relations)
        for j in range(M.ngens):
            for h in self.psi.images:
                if not h.is_zero():
                    rels.append({(j, m): a for m, a in h.as_dict().items()})
        Q = FiniteModule(B, M.degrees, rels, check=False)
        if not Q.is_finite_length():
            for pos, leads in Q.leads_by_position().items():
                allleads = B.lead_monomials() + leads
                if any(sum(e) == 0 for e in allleads):
                    continue
                for k in range(B.nvars):
                    if not any(e[k] > 0 and sum(e) == e[k] for e in allleads):
                        raise NotModuleFinite(
                            f"no power of {B.names[k]} times generator {pos} is reached",
                            (pos, B.names[k]))
        return Q

    def _check_finite(self, gens):
        """Nakayama: the generators must span M / (images of source variables) M."""
        B = self.psi.target
        M = self.source_module
        Q = self._fiber_module()
        basis = Q.kbasis()
        col = {t: i for i, t in enumerate(basis)}
        rows = []
        for j in range(M.ngens):
            for g in gens:
                nf = Q.reduce({(j, tuple(g)): 1})
                row = [0] * len(basis)
                for t, a in nf.items():
                    row[col[t]] = a
                rows.append(row)
        rank = len(kernels.rref_mod_p([list(r) for r in rows], len(basis), B.p)) if rows else 0
        if rank < len(basis):
            for t in basis:
                row = [0] * len(basis)
                row[col[t]] = 1
                if len(kernels.rref_mod_p([list(r) for r in rows] + [row], len(basis), B.p)) > rank:
                    raise NotModuleFinite(f"the generators miss {B.P.mono_str(t[1])} "
                                          f"on generator {t[0]}", t)

    def express(self, vec: dict) -> dict:
        """Raw A-coordinates of a vector of the B-module's free cover."""
        if self.route == "decomposition":
            return self.decompose(vec)
        nA = self.psi.source.nvars
        zA = (0,) * nA
        nB = self.psi.target.nvars
        rem = self._elim_gb.reduce_vec({(j, m + zA): a for (j, m), a in vec.items()})
        out = {}
        for (i, m), a in rem.items():
            if i < self._r or any(m[:nB]):
                raise NotModuleFinite("element not expressible in the generators")
            out[(i - self._r, m[nB:])] = a
        return out

    def image(self, vec: dict) -> dict:
        """Coordinates in the minimal presentation."""
        raw = self.express(vec)
        return substitute_positions(raw, dict(enumerate(self.module.transport)),
                                    self.psi.source.p)


def pushforward_module(psi: RingMap, gens=None, module: FiniteModule | None = None,
                       route: str = "auto") -> FiniteModule:
    """Minimal presentation of the B-module (default B itself) as an A-module."""
    return Pushforward(psi, module, gens, route).module


def pushforward_map(f: ModuleMap, psi: RingMap, source: Pushforward | None = None,
                    target: Pushforward | None = None) -> ModuleMap:
    """The A-linear map between pushforwards induced by a B-linear map f."""
    source = source or Pushforward(psi, f.source)
    target = target or Pushforward(psi, f.target)
    images = []
    for idx in source.module.kept:
        g, j = source.labels[idx]
        vec = {(pos, tuple(x + y for x, y in zip(m, g))): a
               for (pos, m), a in f.images[j].items()}
        images.append(target.image(vec))
    return ModuleMap(source.module, target.module, images, check=False)


def pushforward_complex(C: ModuleComplex, psi: RingMap) -> ModuleComplex:
    pfs = [Pushforward(psi, M) for M in C.modules]
    maps = [pushforward_map(d, psi, pfs[i + 1], pfs[i]) for i, d in enumerate(C.maps)]
    return ModuleComplex([pf.module for pf in pfs], maps, C.lo, check=False)


def frobenius_pushforward(S: GradedQuotientRing, e: int = 1) -> FiniteModule:
    """F^e_* S as an S-module."""
    return Pushforward(frobenius_map(S, e)).module


def frobenius_pushforward_module(M: FiniteModule, e: int = 1) -> FiniteModule:
    return Pushforward(frobenius_map(M.ring, e), M).module


def frobenius_pushforward_complex(C: ModuleComplex, e: int = 1) -> ModuleComplex:
    return pushforward_complex(C, frobenius_map(C.modules[0].ring, e))


def _fresh_names(taken, base, suffix):
    out = []
    for b in base:
        n = b + suffix
        while n in taken:
            n += "'"
        taken.add(n)
        out.append(n)
    return out


class RelativeFrobenius:
    """A = S ⊗_R F^e_*R (graded), the map F_rel: A -> F^e_*S and F^e_*S as an A-module.

    A_full keeps every variable; A is its trimmed presentation (variables that
    occur linearly in a relation are solved for).
    """

    def __init__(self, phi: RingMap, e: int = 1):
        R, S = phi.source, phi.target
        p = S.p
        q = p ** e
        self.phi, self.e, self.q = phi, e, q
        c = phi.degree_scale
        taken = set(S.names)
        ynames = _fresh_names(taken, R.names, "'")
        xnames = _fresh_names(taken, S.names, "''")
        nx, ny = S.nvars, R.nvars
        Pfull = PolyRing(p, list(S.names) + ynames,
                         list(S.weights) + [c * w / q for w in R.weights])
        xs = Pfull.gens()[:nx]
        ys = Pfull.gens()[nx:]
        ideal = [f.substitute(xs, Pfull) for f in S.ideal]
        ideal += [g.substitute(ys, Pfull) for g in R.ideal]
        for j in range(ny):
            ideal.append(phi.lifts[j].substitute(xs, Pfull) - ys[j] ** q)
        self.A_full = GradedQuotientRing(Pfull, ideal)
        Pb = PolyRing(p, xnames, [w / q for w in S.weights])
        xb = Pb.gens()
        self.B = GradedQuotientRing(Pb, [f.substitute(xb, Pb) for f in S.ideal])
        images = [g ** q for g in xb] + [h.substitute(xb, Pb) for h in phi.lifts]
        self.F_rel_full = RingMap(self.A_full, self.B, images, degree_scale=1)
        self.pushforward_full = Pushforward(self.F_rel_full)
        trim = self.A_full.trim()
        self.trim = trim
        self.A = trim.ring
        keep = [Pfull.names.index(n) for n in self.A.names]
        self.F_rel = RingMap(self.A, self.B, [images[i] for i in keep], degree_scale=1)
        raw = self.pushforward_full.raw
        rels = [trim.apply_vec(r) for r in raw.relations]
        self.raw_module = FiniteModule(self.A, raw.degrees, rels)
        self.module = self.raw_module.minimal_presentation()
        # S -> A and F^e_*R -> A, through the trim isomorphism
        self.from_S = RingMap(S, self.A, trim.images[:nx], degree_scale=1)
        Pfr = PolyRing(p, ynames, Pfull.weights[nx:])
        self.FR = GradedQuotientRing(Pfr, [g.substitute(Pfr.gens(), Pfr) for g in R.ideal])
        self.from_FR = RingMap(self.FR, self.A, trim.images[nx:], degree_scale=1)
        self.check_diagram()

    def check_diagram(self):
        """F_rel∘(S->A) is the e-fold Frobenius, F_rel∘(F_*R->A) is F_*phi."""
        S, R = self.phi.target, self.phi.source
        xb = self.B.P.gens()
        for i, x in enumerate(S.P.gens()):
            lhs = self.F_rel.apply(self.from_S.apply(x))
            if self.B.nf(lhs - xb[i] ** self.q) != self.B.P.zero():
                raise RingError("DIAGRAM", f"S-leg fails on {S.names[i]}")
        for j, y in enumerate(self.from_FR.source.P.gens()):
            lhs = self.F_rel.apply(self.from_FR.apply(y))
            rhs = self.phi.lifts[j].substitute(xb, self.B.P)
            if self.B.nf(lhs - rhs) != self.B.P.zero():
                raise RingError("DIAGRAM", f"F_*R-leg fails on {R.names[j]}")
        # R -> A -> F_*S equals Frobenius after phi
        for j in range(R.nvars):
            via_A = self.F_rel.apply(self.from_S.apply(self.phi.lifts[j]))
            frob = self.phi.lifts[j].substitute(xb, self.B.P) ** self.q
            if self.B.nf(via_A - frob) != self.B.P.zero():
                raise RingError("DIAGRAM", f"square fails on {R.names[j]}")
        return True


def relative_frobenius(phi: RingMap, e: int = 1):
    """(A, F_rel, M) with M = F^e_*S presented over A."""
    rf = RelativeFrobenius(phi, e)
    return rf.A, rf.F_rel, rf.module

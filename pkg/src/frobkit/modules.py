"""Finitely presented graded modules over graded quotient rings.

A module vector is a dict {(position, exponent tuple): coefficient} over the
ambient polynomial ring of the base ring; relations are such vectors.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

from .groebner import (BOTTOM, NONHOMOGENEOUS, Engine, FreeModule, GroebnerBasis, TermCoder,
                       buchberger, make_scale, reduce_mod_ideal, vec_add, vec_degree,
                       vec_scale, kernel_vecs)
from .poly import Polynomial


class ModuleError(ValueError):
    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


def split_vec(vec: dict, P) -> dict:
    """{pos: Polynomial} from a module vector."""
    parts: dict = {}
    for (i, m), c in vec.items():
        parts.setdefault(i, {})[m] = c
    return {i: Polynomial(P, d, _clean=True) for i, d in parts.items()}


def join_vec(parts: dict) -> dict:
    out = {}
    for i, f in parts.items():
        for m, c in f.as_dict().items():
            out[(i, m)] = c
    return out


def shift_positions(vec: dict, offset: int) -> dict:
    return {(i + offset, m): c for (i, m), c in vec.items()}


def substitute_positions(vec: dict, images: dict, p: int) -> dict:
    """Replace each basis vector e_i by the vector images[i] (linearly over the ring)."""
    out: dict = {}
    for (i, m), c in vec.items():
        img = images[i]
        for (j, u), a in img.items():
            key = (j, tuple(x + y for x, y in zip(m, u)))
            v = (out.get(key, 0) + c * a) % p
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def mono_vec(pos: int, m, c: int = 1) -> dict:
    return {(pos, tuple(m)): c}


class FiniteModule:
    """coker(relations) for a graded free module ring^g with the given degrees."""

    def __init__(self, ring, degrees, relations=(), name=None, check=True):
        self.ring = ring
        self.degrees = tuple(Fraction(d) for d in degrees)
        self.name = name
        P = ring.P
        self.free = FreeModule(P, self.degrees)
        rels = []
        for r in relations:
            r = {k: c % P.p for k, c in r.items() if c % P.p}
            r = reduce_mod_ideal(r, P, ring.ideal) if ring.ideal else r
            if not r:
                continue
            if check:
                d = vec_degree(r, self.free)
                if d is NONHOMOGENEOUS:
                    raise ModuleError("NONHOMOGENEOUS", "relation is not homogeneous")
            rels.append(r)
        self.relations = rels
        self.transport = None
        self.kept = None
        self._gb = None

    # construction helpers
    @classmethod
    def free_module(cls, ring, degrees):
        return cls(ring, degrees, [])

    @classmethod
    def cyclic(cls, ring, ideal_gens=(), degree=0):
        """ring/(ideal_gens), generated in the given degree."""
        rels = []
        for f in ideal_gens:
            f = ring.P(f) if not isinstance(f, Polynomial) else f
            rels.append({(0, m): c for m, c in f.as_dict().items()})
        return cls(ring, [degree], rels)

    @classmethod
    def residue_field(cls, ring, degree=0):
        return cls.cyclic(ring, ring.P.gens(), degree)

    @property
    def ngens(self) -> int:
        return len(self.degrees)

    @property
    def p(self) -> int:
        return self.ring.p

    def __repr__(self):
        return f"FiniteModule(gens={self.ngens}, relations={len(self.relations)})"

    def relation_degrees(self):
        return [vec_degree(r, self.free) for r in self.relations]

    def presentation_matrix(self):
        """Rows = generators, columns = relations, entries Polynomials."""
        P = self.ring.P
        M = [[P.zero() for _ in self.relations] for _ in range(self.ngens)]
        for l, r in enumerate(self.relations):
            for i, f in split_vec(r, P).items():
                M[i][l] = f
        return M

    # Gröbner data
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = buchberger(self.relations, module=self.free,
                                  modulo=self.ring.ideal or None)
        return self._gb

    def reduce(self, vec: dict) -> dict:
        if not vec:
            return {}
        return self.gb().reduce_vec(vec)

    def is_zero_vec(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def leads_by_position(self) -> dict:
        out: dict = {i: [] for i in range(self.ngens)}
        for pos, e in self.gb().lead_terms():
            out[pos].append(e)
        return out

    def is_finite_length(self) -> bool:
        """True when dim_k is finite: every position's lead ideal (with the ring's) is artinian."""
        n = self.ring.nvars
        ring_leads = self.ring.lead_monomials()
        for pos, leads in self.leads_by_position().items():
            allleads = ring_leads + leads
            if any(sum(e) == 0 for e in allleads):
                continue
            for i in range(n):
                if not any(e[i] > 0 and sum(e) == e[i] for e in allleads):
                    return False
        return True

    def kbasis(self, max_degree=None) -> list:
        """Standard terms (pos, exps) sorted by degree, then position."""
        if max_degree is None and not self.is_finite_length():
            raise ModuleError("NOT_FINITE_LENGTH", "infinite k-basis; pass max_degree")
        P = self.ring.P
        n = P.nvars
        leads = self.leads_by_position()
        ring_leads = self.ring.lead_monomials()
        out = []
        for pos in range(self.ngens):
            bad = ring_leads + leads[pos]
            dpos = self.degrees[pos]

            def standard(m):
                return not any(all(a <= b for a, b in zip(e, m)) for e in bad)

            start = (0,) * n
            if not standard(start) or (max_degree is not None and dpos > max_degree):
                continue
            seen = {start}
            frontier = [start]
            out.append((pos, start))
            while frontier:
                nxt = []
                for m in frontier:
                    for i in range(n):
                        m2 = m[:i] + (m[i] + 1,) + m[i + 1:]
                        if m2 in seen:
                            continue
                        seen.add(m2)
                        if max_degree is not None and dpos + P.mono_degree(m2) > max_degree:
                            continue
                        if standard(m2):
                            nxt.append(m2)
                            out.append((pos, m2))
                frontier = nxt
        out.sort(key=lambda t: (self.degrees[t[0]] + P.mono_degree(t[1]), t[0],
                                P.order.key(t[1])))
        return out

    def dim(self) -> int:
        return len(self.kbasis())

    def hilbert_function(self, max_degree) -> dict:
        P = self.ring.P
        out: dict = {}
        for pos, m in self.kbasis(max_degree):
            d = self.degrees[pos] + P.mono_degree(m)
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    # operations
    def shift(self, d) -> FiniteModule:
        """M(-d): every generator degree raised by d."""
        d = Fraction(d)
        return FiniteModule(self.ring, [x + d for x in self.degrees], self.relations, check=False)

    def direct_sum(self, *others) -> FiniteModule:
        degs = list(self.degrees)
        rels = [dict(r) for r in self.relations]
        for o in others:
            off = len(degs)
            degs.extend(o.degrees)
            rels.extend(shift_positions(r, off) for r in o.relations)
        return FiniteModule(self.ring, degs, rels, check=False)

    def power(self, k: int) -> FiniteModule:
        if k == 0:
            return FiniteModule(self.ring, [], [])
        return self.direct_sum(*([self] * (k - 1)))

    def minimal_presentation(self) -> FiniteModule:
        """Minimal generators and minimal relations.

        The result carries `transport` (for each old generator, its expression
        as a vector in the new generators) and `kept` (old index of each new
        generator).
        """
        p = self.p
        P = self.ring.P
        ideal = self.ring.ideal
        zero = (0,) * P.nvars
        g = self.ngens
        degrees = self.degrees
        rels = {rid: dict(r) for rid, r in enumerate(self.relations)}
        transport = {i: {(i, zero): 1} for i in range(g)}
        # occurrence indexes: position -> relation ids / transport keys using it
        occ: dict = {}
        tocc = {i: {i} for i in range(g)}
        heap: list = []

        def index(rid, r):
            for (j, m), c in r.items():
                occ.setdefault(j, set()).add(rid)
                if m == zero:
                    heapq.heappush(heap, (degrees[j], j, rid))

        for rid, r in rels.items():
            index(rid, r)
        alive = set(range(g))
        while heap:
            _, j, rid = heapq.heappop(heap)
            r = rels.get(rid)
            if j not in alive or r is None or not r.get((j, zero)):
                continue
            c = r[(j, zero)]
            del rels[rid]
            inv = pow(c, p - 2, p)
            # e_j = -(1/c) * (r - c e_j)
            expr = {k: (-a * inv) % p for k, a in r.items() if k != (j, zero)}
            images = {j: expr}
            alive.discard(j)
            targets = set(pos for pos, _ in expr)
            for other in occ.pop(j, ()):
                v = rels.get(other)
                if v is None:
                    continue
                full = {pos: {(pos, zero): 1} for pos, _ in v if pos != j}
                full.update(images)
                v = substitute_positions(v, full, p)
                if ideal:
                    v = reduce_mod_ideal(v, P, ideal)
                if v:
                    rels[other] = v
                    index(other, v)
                else:
                    del rels[other]
            for i in tocc.pop(j, ()):
                v = transport[i]
                full = {pos: {(pos, zero): 1} for pos, _ in v if pos != j}
                full.update(images)
                v = substitute_positions(v, full, p)
                if ideal:
                    v = reduce_mod_ideal(v, P, ideal)
                transport[i] = v
                for pos in targets:
                    tocc.setdefault(pos, set()).add(i)
        rels = [rels[rid] for rid in sorted(rels)]
        kept = sorted(alive)
        renum = {old: new for new, old in enumerate(kept)}
        degs = [self.degrees[i] for i in kept]
        rels = [{(renum[i], m): c for (i, m), c in r.items()} for r in rels]
        rels = minimal_subset(rels, degs, self.ring)
        out = FiniteModule(self.ring, degs, rels, check=False)
        out.transport = [{(renum[i], m): c for (i, m), c in transport[o].items()}
                         for o in range(g)]
        out.kept = kept
        return out

    def is_zero(self) -> bool:
        return self.minimal_presentation().ngens == 0

    def annihilated_by_maximal_ideal(self) -> bool:
        return all(self.is_zero_vec(vec_scale({(i, (0,) * self.ring.nvars): 1}, x.as_dict(), self.p))
                   for i in range(self.ngens) for x in self.ring.P.gens())


def minimal_subset(vecs, degrees, ring) -> list:
    """A minimal generating subset of the submodule spanned by vecs (order respected)."""
    if not vecs:
        return []
    P = ring.P
    scale = make_scale(P, degrees)
    coder = TermCoder(P, degrees, scale)
    eng = Engine(coder, P.p, ring.ideal or None)
    eng.run([coder.encode_vec(v) for v in vecs])
    keep = sorted(eng.minimal_inputs)
    return [vecs[i] for i in keep]


def submodule_presentation(ring, gens, target_degrees, source_degrees=None):
    """Present the submodule generated by gens (vectors in a free module) as a FiniteModule."""
    P = ring.P
    free = FreeModule(P, target_degrees)
    if source_degrees is None:
        source_degrees = [vec_degree(v, free) for v in gens]
    source_degrees = [Fraction(d) for d in source_degrees]
    syz = kernel_vecs(gens, source_degrees, target_degrees, P, ring.ideal or None)
    return FiniteModule(ring, source_degrees, syz, check=False)


class ModuleMap:
    """Graded homomorphism given by images of the source generators."""

    def __init__(self, source: FiniteModule, target: FiniteModule, images, check=True):
        self.source = source
        self.target = target
        if len(images) != source.ngens:
            raise ModuleError("ARITY", "one image per source generator required")
        P = source.ring.P
        ideal = source.ring.ideal
        self.images = [reduce_mod_ideal(dict(v), P, ideal) if ideal else dict(v) for v in images]
        if check:
            for l, v in enumerate(self.images):
                d = vec_degree(v, target.free)
                if d is not BOTTOM and d != source.degrees[l]:
                    raise ModuleError("DEGREE", f"image {l} has degree {d}, expected "
                                                f"{source.degrees[l]}")
            for r in source.relations:
                if not target.is_zero_vec(self.apply_free(r)):
                    raise ModuleError("NOT_WELL_DEFINED", "a relation does not map to zero")

    def apply_free(self, vec: dict) -> dict:
        """Image of a vector in the source's free cover, as a vector in the target's."""
        return substitute_positions(vec, dict(enumerate(self.images)), self.source.p)

    def compose(self, other: ModuleMap) -> ModuleMap:
        """self ∘ other."""
        return ModuleMap(other.source, self.target,
                         [self.apply_free(v) for v in other.images], check=False)

    def is_zero(self) -> bool:
        return all(self.target.is_zero_vec(v) for v in self.images)

    def transported(self, new_source: FiniteModule, new_target: FiniteModule) -> ModuleMap:
        """Rewrite the map between minimal presentations of source and target."""
        p = self.source.p
        if new_source.kept is not None:
            src_vecs = [self.images[o] for o in new_source.kept]
        else:
            src_vecs = list(self.images)
        if new_target.transport is not None:
            tr = dict(enumerate(new_target.transport))
            src_vecs = [substitute_positions(v, tr, p) for v in src_vecs]
        return ModuleMap(new_source, new_target, src_vecs, check=False)


class ModuleComplex:
    """Bounded chain complex C_lo <- ... <- C_hi of finitely presented modules.

    maps[i] is d_{lo+i+1}: C_{lo+i+1} -> C_{lo+i}.
    """

    def __init__(self, modules, maps, lo=0, check=True):
        self.modules = list(modules)
        self.maps = list(maps)
        self.lo = lo
        if len(self.maps) != max(len(self.modules) - 1, 0):
            raise ModuleError("SHAPE", "need one map between consecutive terms")
        if check:
            for a, b in zip(self.maps, self.maps[1:]):
                if not a.compose(b).is_zero():
                    raise ModuleError("NOT_A_COMPLEX", "consecutive maps do not compose to 0")

    @property
    def hi(self) -> int:
        return self.lo + len(self.modules) - 1

    def term(self, n):
        i = n - self.lo
        return self.modules[i] if 0 <= i < len(self.modules) else None

    def differential(self, n):
        """d_n: C_n -> C_{n-1}, or None."""
        i = n - self.lo - 1
        return self.maps[i] if 0 <= i < len(self.maps) else None

    def minimized(self) -> ModuleComplex:
        """Same complex with every term replaced by its minimal presentation."""
        mins = [m.minimal_presentation() for m in self.modules]
        maps = [d.transported(mins[i + 1], mins[i]) for i, d in enumerate(self.maps)]
        return ModuleComplex(mins, maps, self.lo, check=False)


def module_vec_add(a, b, p, sign=1):
    return vec_add(a, b, p, sign)

"""Graded quotient rings F_p[x]/I and graded ring maps between them."""

from __future__ import annotations

from fractions import Fraction

from .groebner import FreeModule, ideal_basis, normal_form, GroebnerBasis
from .poly import NONHOMOGENEOUS, BOTTOM, Polynomial, PolyRing, weighted_degree


class RingError(ValueError):
    """Raised for invalid ring or map data; `code` names the failure."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


class GradedQuotientRing:
    """P/I with P = F_p[x_1..x_n] positively graded and I homogeneous and proper."""

    def __init__(self, P: PolyRing, ideal_polys=(), name: str | None = None):
        self.P = P
        self.name = name
        gens = [f for f in ideal_polys if not f.is_zero()]
        for f in gens:
            if f.ring != P:
                raise RingError("AMBIENT", "ideal generator from another ring")
            if weighted_degree(f) is NONHOMOGENEOUS:
                raise RingError("NONHOMOGENEOUS", f"generator {f} is not homogeneous")
        self.ideal = ideal_basis(gens, P) if gens else []
        if any(f.is_constant() for f in self.ideal):
            raise RingError("UNIT_IN_IDEAL", "the ideal contains a unit")
        self._gb = None
        self._kb_cache: dict = {}

    # basic data
    @property
    def p(self) -> int:
        return self.P.p

    @property
    def names(self):
        return self.P.names

    @property
    def weights(self):
        return self.P.weights

    @property
    def nvars(self) -> int:
        return self.P.nvars

    def __repr__(self):
        body = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        rel = "; ".join(map(str, self.ideal))
        return f"F_{self.p}[{body}]/({rel})"

    def __eq__(self, other):
        return (isinstance(other, GradedQuotientRing) and self.P == other.P
                and self.ideal == other.ideal)

    def __hash__(self):
        return hash((self.P, tuple(self.ideal)))

    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            from .groebner import _as_vecs
            mod = FreeModule(self.P, [0])
            self._gb = GroebnerBasis(mod, _as_vecs(self.ideal, mod)[1] if self.ideal else [])
        return self._gb

    def __call__(self, f) -> Polynomial:
        return self.nf(self.P(f))

    def nf(self, f: Polynomial) -> Polynomial:
        if not self.ideal or f.is_zero():
            return f
        return normal_form(f, self.gb())

    def is_zero(self, f: Polynomial) -> bool:
        return self.nf(f).is_zero()

    def gens(self):
        return self.P.gens()

    def lead_monomials(self):
        return [f.lead_monomial() for f in self.ideal]

    def is_standard(self, m) -> bool:
        for lm in self.lead_monomials():
            if all(a <= b for a, b in zip(lm, m)):
                return False
        return True

    def is_artinian(self) -> bool:
        n = self.nvars
        leads = self.lead_monomials()
        for i in range(n):
            if not any(lm[i] > 0 and sum(lm) == lm[i] for lm in leads):
                return False
        return True

    def is_polynomial_ring(self) -> bool:
        return not self.ideal

    def kbasis(self, max_degree=None) -> list:
        """Standard monomials (the NF k-basis), sorted by degree; finite unless capped."""
        key = max_degree
        if key in self._kb_cache:
            return self._kb_cache[key]
        if max_degree is None and not self.is_artinian():
            raise RingError("NOT_ARTINIAN", "infinite k-basis; pass max_degree")
        n = self.nvars
        start = (0,) * n
        seen = {start}
        frontier = [start]
        out = [start]
        while frontier:
            nxt = []
            for m in frontier:
                for i in range(n):
                    m2 = m[:i] + (m[i] + 1,) + m[i + 1:]
                    if m2 in seen:
                        continue
                    seen.add(m2)
                    if max_degree is not None and self.P.mono_degree(m2) > max_degree:
                        continue
                    if self.is_standard(m2):
                        nxt.append(m2)
                        out.append(m2)
            frontier = nxt
        out.sort(key=lambda m: (self.P.mono_degree(m), self.P.order.key(m)))
        self._kb_cache[key] = out
        return out

    def dim(self) -> int:
        return len(self.kbasis())

    def hilbert_function(self, max_degree) -> dict:
        out: dict = {}
        for m in self.kbasis(max_degree):
            d = self.P.mono_degree(m)
            out[d] = out.get(d, 0) + 1
        return out

    def embedding_dimension(self) -> int:
        return self.nvars

    def trim(self) -> Trim:
        """Remove variables that occur as a linear term of some ideal element."""
        ring = self
        images = list(self.P.gens())
        removed = []
        while True:
            target = None
            for f in ring.ideal:
                for m, c in f.terms:
                    if sum(m) == 1:
                        target = (f, m.index(1), c)
                        break
                if target:
                    break
            if target is None:
                break
            f, i, c = target
            P = ring.P
            keep = [j for j in range(P.nvars) if j != i]
            Q = PolyRing(P.p, [P.names[j] for j in keep], [P.weights[j] for j in keep])
            inv = pow(c, P.p - 2, P.p)
            expr = {}
            for m, a in f.as_dict().items():
                if m[i] == 0:
                    expr[tuple(m[j] for j in keep)] = (-a * inv) % P.p
            sub = [Polynomial(Q, expr, _clean=True) if j == i else
                   Q.var(keep.index(j)) for j in range(P.nvars)]
            new_ideal = [g.substitute(sub, Q) for g in ring.ideal if g != f]
            images = [g.substitute(sub, Q) for g in images]
            removed.append(P.names[i])
            ring = GradedQuotientRing(Q, new_ideal)
        images = [ring.nf(g) for g in images]
        return Trim(self, ring, images, removed)


class Trim:
    """Isomorphism from a ring to a trimmed presentation: images of the old variables."""

    def __init__(self, original, ring, images, removed):
        self.original = original
        self.ring = ring
        self.images = images
        self.removed = removed

    def apply(self, f: Polynomial) -> Polynomial:
        return self.ring.nf(f.substitute(self.images, self.ring.P))

    def apply_vec(self, vec: dict) -> dict:
        from .modules import split_vec, join_vec
        out = {}
        for pos, f in split_vec(vec, self.original.P).items():
            g = self.apply(f)
            out.update(join_vec({pos: g}))
        return out


def make_quotient_ring(p, variables, ideal_gens=(), name=None) -> GradedQuotientRing:
    """variables: list of names, or (name, weight) pairs; ideal_gens: strings or Polynomials."""
    names, weights = [], []
    for v in variables:
        if isinstance(v, str):
            if ":" in v:
                n, w = v.split(":")
                names.append(n.strip())
                weights.append(Fraction(w.strip()))
            else:
                names.append(v)
                weights.append(Fraction(1))
        else:
            names.append(v[0])
            weights.append(Fraction(v[1]))
    P = PolyRing(p, names, weights)
    gens = [P(g) if not isinstance(g, Polynomial) else g for g in ideal_gens]
    return GradedQuotientRing(P, gens, name)


def polynomial_ring(p, variables, name=None) -> GradedQuotientRing:
    return make_quotient_ring(p, variables, (), name)


class RingMap:
    """Graded homomorphism source -> target given by images of the source variables."""

    def __init__(self, source: GradedQuotientRing, target: GradedQuotientRing, images,
                 degree_scale=None, name=None, check=True):
        self.source = source
        self.target = target
        self.name = name
        if len(images) != source.nvars:
            raise RingError("ARITY", "need one image per source variable")
        raw = [target.P(h) if not isinstance(h, Polynomial) else h for h in images]
        if source.p != target.p:
            raise RingError("CHARACTERISTIC", "source and target characteristics differ")
        scale = None if degree_scale is None else Fraction(degree_scale)
        for h, w in zip(raw, source.weights):
            if h.ring != target.P:
                raise RingError("AMBIENT", "image from another ring")
            d = weighted_degree(h)
            if d is NONHOMOGENEOUS:
                raise RingError("NONHOMOGENEOUS", f"image {h} is not homogeneous")
            if d is BOTTOM:
                continue
            if h.constant_term():
                raise RingError("CONSTANT_TERM", f"image {h} has a constant term")
            c = d / w
            if scale is None:
                scale = c
            elif c != scale:
                raise RingError("DEGREE_SCALE", "images have inconsistent degree scaling")
        self.degree_scale = scale if scale is not None else Fraction(1)
        self.lifts = raw
        self.images = [target.nf(h) for h in raw]
        self.certificate = []
        if check:
            for g in source.ideal:
                img = self.apply(g)
                self.certificate.append((g, img))
                if not img.is_zero():
                    raise RingError("NOT_WELL_DEFINED", f"{g} maps to {img}, not into the ideal")

    def __repr__(self):
        pairs = ", ".join(f"{n}->{h}" for n, h in zip(self.source.names, self.images))
        return f"RingMap({pairs})"

    def apply(self, f: Polynomial) -> Polynomial:
        return f.substitute(self.images, self.target.P, self.target.nf)

    def apply_vec(self, vec: dict) -> dict:
        from .modules import split_vec, join_vec
        out = {}
        for pos, f in split_vec(vec, self.source.P).items():
            out.update(join_vec({pos: self.apply(f)}))
        return out

    def compose(self, other: RingMap) -> RingMap:
        """self ∘ other."""
        return RingMap(other.source, self.target, [self.apply(h) for h in other.images],
                       self.degree_scale * other.degree_scale)

    def is_identity_like(self) -> bool:
        return self.images == self.target.P.gens()


def make_ring_map(source, target, images, degree_scale=None, name=None) -> RingMap:
    """images: list (one per source variable) or dict name -> poly/string."""
    if isinstance(images, dict):
        lst = []
        for n in source.names:
            h = images.get(n, 0)
            lst.append(h)
        images = lst
    return RingMap(source, target, images, degree_scale, name)


def frobenius_map(S: GradedQuotientRing, e: int = 1) -> RingMap:
    q = S.p ** e
    return RingMap(S, S, [g ** q for g in S.P.gens()], degree_scale=q, check=True)


def identity_map(S: GradedQuotientRing) -> RingMap:
    return RingMap(S, S, S.P.gens(), degree_scale=1)


def fiber_ring(phi: RingMap) -> GradedQuotientRing:
    """S ⊗_R k = S/(images of source variables), in trimmed presentation."""
    S = phi.target
    extra = [h for h in phi.images if not h.is_zero()]
    ring = GradedQuotientRing(S.P, list(S.ideal) + extra)
    return ring.trim().ring


def residue_map(R: GradedQuotientRing) -> RingMap:
    """R -> F_p (all variables to zero)."""
    k = GradedQuotientRing(PolyRing(R.p, [], []), [])
    return RingMap(R, k, [k.P.zero() for _ in range(R.nvars)], degree_scale=1)

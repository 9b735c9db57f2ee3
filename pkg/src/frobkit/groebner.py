"""Gröbner bases for homogeneous submodules of free modules over F_p[x] and its quotients.

Terms are packed into single Python ints whose natural integer order is the
module term order (degree, block, elimination weight, position, revlex), so
multiplication by a monomial is an integer addition and divisibility is a
guard-bit test.  Modules over a quotient P/I are handled by treating the
reduced Gröbner basis of I as virtual elements f*e_j that are never stored.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from functools import lru_cache

from . import kernels
from .poly import (BOTTOM, NONHOMOGENEOUS, Polynomial, PolyRing, common_denominator)

EXP_BITS = 16
MAXE = (1 << (EXP_BITS - 1)) - 1
FIELD_MASK = (1 << EXP_BITS) - 1
POS_BITS = 24
ELIM_BITS = 40
BLOCK_BITS = 4


class DegreeError(ValueError):
    pass


class TermCoder:
    """Bijection between terms (position, exponents) and ordered integer codes."""

    def __init__(self, ring: PolyRing, basis_degrees, scale: int, posrank=None,
                 block=None, elim=None):
        n = ring.nvars
        self.ring = ring
        self.n = n
        self.scale = scale
        self.iw = tuple(int(w * scale) for w in ring.weights)
        self.elim = tuple(elim) if elim is not None else (0,) * n
        self.rev_bits = n * EXP_BITS
        self.REVMASK = (1 << self.rev_bits) - 1
        self.GUARD = sum(1 << (EXP_BITS * i + EXP_BITS - 1) for i in range(n))
        self.CREV = sum(MAXE << (EXP_BITS * i) for i in range(n))
        self.S_POS = self.rev_bits
        self.S_ELIM = self.S_POS + POS_BITS
        self.S_BLOCK = self.S_ELIM + ELIM_BITS
        self.S_DEG = self.S_BLOCK + BLOCK_BITS
        self.POSMASK = (1 << POS_BITS) - 1
        r = len(basis_degrees)
        self.rank = r
        bd = []
        for d in basis_degrees:
            v = Fraction(d) * scale
            if v.denominator != 1:
                raise DegreeError("basis degree not compatible with scale")
            bd.append(int(v))
        self.bdeg = bd
        if posrank is None:
            order = sorted(range(r), key=lambda i: (bd[i], -i))
            posrank = [0] * r
            for rank_, i in enumerate(order):
                posrank[i] = rank_
        self.posrank = list(posrank)
        self.rank_to_pos = {rk: i for i, rk in enumerate(self.posrank)}
        block = block or [0] * r
        self.K = [(bd[i] << self.S_DEG) + (block[i] << self.S_BLOCK)
                  + (self.posrank[i] << self.S_POS) + self.CREV for i in range(r)]

    def packed(self, m) -> int:
        E = 0
        for i, e in enumerate(m):
            if e > MAXE:
                raise OverflowError("exponent too large for term packing")
            E |= e << (EXP_BITS * i)
        return E

    def L(self, m) -> int:
        d = 0
        el = 0
        for e, w, ew in zip(m, self.iw, self.elim):
            d += e * w
            el += e * ew
        return (d << self.S_DEG) + (el << self.S_ELIM) - self.packed(m)

    def encode(self, pos: int, m) -> int:
        return self.K[pos] + self.L(m)

    def exps_of(self, code: int) -> tuple:
        E = self.CREV - (code & self.REVMASK)
        return tuple((E >> (EXP_BITS * i)) & FIELD_MASK for i in range(self.n))

    def pos_of(self, code: int) -> int:
        return self.rank_to_pos[(code >> self.S_POS) & self.POSMASK]

    def decode(self, code: int):
        return self.pos_of(code), self.exps_of(code)

    def degree(self, code: int) -> int:
        return code >> self.S_DEG

    def encode_vec(self, vec: dict) -> dict:
        return {self.encode(pos, m): c for (pos, m), c in vec.items()}

    def decode_vec(self, codes: dict) -> dict:
        return {self.decode(k): c for k, c in codes.items()}


def make_scale(ring: PolyRing, *degree_lists) -> int:
    vals = list(ring.weights)
    for dl in degree_lists:
        vals.extend(dl)
    return common_denominator(vals)


# --- public module types ----------------------------------------------------

class FreeModule:
    """Graded free module over a polynomial ring with given basis degrees."""

    def __init__(self, ring: PolyRing, degrees):
        self.ring = ring
        self.degrees = tuple(Fraction(d) for d in degrees)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def __eq__(self, other):
        return (isinstance(other, FreeModule) and other.ring == self.ring
                and other.degrees == self.degrees)

    def __hash__(self):
        return hash((self.ring, self.degrees))

    def __repr__(self):
        return f"FreeModule({self.ring!r}, {list(map(str, self.degrees))})"

    def element(self, components) -> FreeModuleElement:
        if len(components) != self.rank:
            raise ValueError("wrong number of components")
        vec = {}
        for i, f in enumerate(components):
            f = self.ring(f) if not isinstance(f, Polynomial) else f
            for m, c in f.as_dict().items():
                vec[(i, m)] = c
        return FreeModuleElement(self, vec)

    def from_vec(self, vec: dict) -> FreeModuleElement:
        return FreeModuleElement(self, vec)

    def basis_vector(self, i: int) -> FreeModuleElement:
        return FreeModuleElement(self, {(i, (0,) * self.ring.nvars): 1})


class FreeModuleElement:
    __slots__ = ("module", "vec")

    def __init__(self, module: FreeModule, vec: dict):
        self.module = module
        p = module.ring.p
        self.vec = {k: c % p for k, c in vec.items() if c % p}

    @property
    def components(self) -> tuple:
        ring = self.module.ring
        parts = [dict() for _ in range(self.module.rank)]
        for (i, m), c in self.vec.items():
            parts[i][m] = c
        return tuple(Polynomial(ring, d, _clean=True) for d in parts)

    def is_zero(self) -> bool:
        return not self.vec

    def degree(self):
        return vec_degree(self.vec, self.module)

    def __eq__(self, other):
        return (isinstance(other, FreeModuleElement) and self.module == other.module
                and self.vec == other.vec)

    def __hash__(self):
        return hash(frozenset(self.vec.items()))

    def __add__(self, other):
        return FreeModuleElement(self.module, vec_add(self.vec, other.vec, self.module.ring.p))

    def __sub__(self, other):
        return FreeModuleElement(self.module, vec_add(self.vec, other.vec, self.module.ring.p, -1))

    def __mul__(self, f):
        if isinstance(f, int):
            f = self.module.ring.constant(f)
        return FreeModuleElement(self.module, vec_scale(self.vec, f.as_dict(), self.module.ring.p))

    __rmul__ = __mul__

    def __repr__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def vec_add(a: dict, b: dict, p: int, sign: int = 1) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = (out.get(k, 0) + sign * c) % p
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def vec_scale(vec: dict, poly: dict, p: int) -> dict:
    out: dict = {}
    for (i, m), c in vec.items():
        for u, a in poly.items():
            key = (i, tuple(x + y for x, y in zip(m, u)))
            out[key] = (out.get(key, 0) + c * a) % p
    return {k: c for k, c in out.items() if c}


def vec_degree(vec: dict, module: FreeModule):
    if not vec:
        return BOTTOM
    ring = module.ring
    degs = {ring.mono_degree(m) + module.degrees[i] for (i, m) in vec}
    return degs.pop() if len(degs) == 1 else NONHOMOGENEOUS


def _as_vecs(gens, module=None):
    """Accept polynomials (rank one) or FreeModuleElements; return (module, vecs)."""
    gens = list(gens)
    if module is None:
        if not gens:
            raise ValueError("cannot infer the ambient module of an empty list")
        g0 = gens[0]
        if isinstance(g0, dict):
            raise ValueError("raw vectors need an explicit module")
        module = g0.module if isinstance(g0, FreeModuleElement) else FreeModule(g0.ring, [0])
    vecs = []
    for g in gens:
        if isinstance(g, Polynomial):
            if module.rank != 1 or g.ring != module.ring:
                raise ValueError("ambient mismatch")
            vecs.append({(0, m): c for m, c in g.as_dict().items()})
        elif isinstance(g, dict):
            vecs.append(dict(g))
        else:
            if g.module != module:
                raise ValueError("ambient mismatch")
            vecs.append(dict(g.vec))
    return module, vecs


# --- the reduction core -----------------------------------------------------

class _Ideal:
    """Reduced Gröbner basis of a quotient ideal, prepared for virtual reduction."""

    def __init__(self, coder: TermCoder, polys):
        self.leads = []     # (R-part of lead, index)
        self.exps = []      # lead exponent tuples
        self.tails = []     # list of (L(m)-L(lm), coeff)
        for idx, f in enumerate(polys):
            terms = f.terms
            lm, lc = terms[0]
            p = f.ring.p
            inv = pow(lc, p - 2, p)
            Llm = coder.L(lm)
            self.leads.append((coder.CREV - coder.packed(lm), idx))
            self.exps.append(lm)
            self.tails.append([(coder.L(m) - Llm, (c * inv) % p) for m, c in terms[1:]])


class Reducer:
    """A list of monic module elements with their leads, ready for normal forms."""

    def __init__(self, coder: TermCoder, p: int, ideal_polys=None, src_coder=None):
        self.coder = coder
        self.src = src_coder
        self.p = p
        self.ideal = _Ideal(coder, ideal_polys) if ideal_polys else None
        self.terms: list = []       # list of lists (code, coeff), lead first, lead coeff 1
        self.tails: list = []       # the same lists without the lead
        self.reps: list = []        # representation dicts in src coder codes
        self.leads: dict = {}       # posrank -> list of (R-part, index)
        self.lead_codes: list = []

    def add(self, terms, rep=None) -> int:
        idx = len(self.terms)
        self.terms.append(terms)
        self.tails.append(terms[1:])
        self.reps.append(rep)
        lead = terms[0][0]
        self.lead_codes.append(lead)
        c = self.coder
        rk = (lead >> c.S_POS) & c.POSMASK
        self.leads.setdefault(rk, []).append((lead & c.REVMASK, idx))
        return idx

    def find_reducer(self, t: int):
        """Return ('I', idx) or ('M', idx) for a lead dividing term t, else None."""
        c = self.coder
        Rt = t & c.REVMASK
        G = c.GUARD
        if self.ideal is not None:
            for Rs, idx in self.ideal.leads:
                if not ((Rs - Rt) & G):
                    return 0, idx
        lst = self.leads.get((t >> c.S_POS) & c.POSMASK)
        if lst:
            for Rs, idx in lst:
                if not ((Rs - Rt) & G):
                    return 1, idx
        return None

    def reduce(self, work: dict, rep: dict | None = None) -> dict:
        """Fully reduce work (a dict code->coeff) in place; returns the remainder.

        When rep is given it is updated so that rep stays the representation of
        the current remainder in terms of the stored reps.
        """
        return kernels.reduce_full(self, work, rep)

    def reduce_ideal_only(self, work: dict) -> dict:
        if self.ideal is None:
            return work
        return kernels.reduce_ideal(self.ideal, self.coder.REVMASK, self.coder.GUARD,
                                    self.p, work)


def _normalize(rem: dict, p: int, rep: dict | None):
    """Sort a remainder into a monic term list; scale rep accordingly."""
    terms = sorted(rem.items(), reverse=True)
    lc = terms[0][1]
    if lc != 1:
        inv = pow(lc, p - 2, p)
        terms = [(k, (c * inv) % p) for k, c in terms]
        if rep is not None:
            for k in rep:
                rep[k] = (rep[k] * inv) % p
    return terms


def _lcm_code(coder: TermCoder, a: int, b: int) -> int:
    """Code of lcm of two terms in the same position."""
    ea = coder.exps_of(a)
    eb = coder.exps_of(b)
    m = tuple(x if x > y else y for x, y in zip(ea, eb))
    return a + coder.L(m) - coder.L(ea)


def _coprime(ea, eb) -> bool:
    for x, y in zip(ea, eb):
        if x and y:
            return False
    return True


class Engine(Reducer):
    """Homogeneous Buchberger with degree-by-degree processing.

    inputs are dict code->coeff vectors.  Options:
      track:        maintain representations in terms of input coordinates
      kernel_mode:  inputs reducing to zero contribute syzygies (otherwise they are
                    simply redundant and get no coordinate)
      collect_syz:  record syzygies from S-pairs reducing to zero
      product:      use the coprime criterion for module-module pairs (rank one only)
    """

    def __init__(self, coder, p, ideal_polys=None, src_coder=None, track=False,
                 kernel_mode=False, collect_syz=False, product=False, degree_bound=None):
        super().__init__(coder, p, ideal_polys, src_coder)
        self.track = track
        self.kernel_mode = kernel_mode
        self.collect_syz = collect_syz
        self.product = product
        self.bound = degree_bound
        self.heap: list = []
        self.pending: set = set()
        self.seq = 0
        self.syzygies: list = []
        self.minimal_inputs: list = []   # input indices that became basis elements
        self.input_of: dict = {}         # basis idx -> input idx
        self.lead_exps: list = []
        self.stats = {"pairs": 0, "chain": 0, "zero": 0}

    def run(self, inputs):
        c = self.coder
        for i, v in enumerate(inputs):
            if not v:
                if self.kernel_mode and self.collect_syz:
                    self.syzygies.append({self.src.K[i] + 0: 1} if self.track else {})
                continue
            degs = {k >> c.S_DEG for k in v}
            if len(degs) != 1:
                raise DegreeError("inhomogeneous input")
            d = degs.pop()
            if self.bound is not None and d > self.bound:
                continue
            heapq.heappush(self.heap, (d, 1, i, i, None, None))
        self._inputs = inputs
        while self.heap:
            d, kind, _, a, b, L = heapq.heappop(self.heap)
            if kind == 1:
                self._process_input(a)
            else:
                self._process_pair(a, b, L)
        return self

    # --- inputs and pairs
    def _process_input(self, i):
        v = dict(self._inputs[i])
        rep = {self.src.K[i]: 1} if self.track else None
        rem = self.reduce(v, rep)
        if not rem:
            if self.kernel_mode and self.collect_syz:
                self._record_syzygy(rep)
            return
        self.minimal_inputs.append(i)
        idx = self._insert(rem, rep)
        self.input_of[idx] = i

    def _record_syzygy(self, rep):
        if rep is None:
            return
        rep = self.reduce_src_ideal(rep)
        if rep:
            self.syzygies.append(rep)

    def reduce_src_ideal(self, rep):
        if self.ideal is None:
            return rep
        return kernels.reduce_ideal(self.ideal, self.src.REVMASK, self.src.GUARD, self.p, rep)

    def _insert(self, rem, rep) -> int:
        p = self.p
        terms = _normalize(rem, p, rep)
        if rep is not None:
            rep = self.reduce_src_ideal(rep)
        idx = self.add(terms, rep)
        c = self.coder
        lead = terms[0][0]
        ea = c.exps_of(lead)
        self.lead_exps.append(ea)
        rk = (lead >> c.S_POS) & c.POSMASK
        bound = self.bound
        for Rk, k in self.leads[rk]:
            if k == idx:
                continue
            if self.product and _coprime(ea, self.lead_exps[k]):
                continue
            L = _lcm_code(c, lead, self.lead_codes[k])
            d = L >> c.S_DEG
            if bound is not None and d > bound:
                continue
            self.seq += 1
            self.pending.add((k, idx))
            heapq.heappush(self.heap, (d, 0, self.seq, k, idx, L))
        if self.ideal is not None:
            for fi, fe in enumerate(self.ideal.exps):
                if _coprime(ea, fe):
                    continue
                m = tuple(x if x > y else y for x, y in zip(ea, fe))
                L = lead + c.L(m) - c.L(ea)
                d = L >> c.S_DEG
                if bound is not None and d > bound:
                    continue
                self.seq += 1
                self.pending.add((idx, -1 - fi))
                heapq.heappush(self.heap, (d, 0, self.seq, idx, -1 - fi, L))
        return idx

    def _chain(self, i, j, L) -> bool:
        c = self.coder
        RL = L & c.REVMASK
        G = c.GUARD
        pend = self.pending
        rk = (L >> c.S_POS) & c.POSMASK
        for Rk, k in self.leads.get(rk, ()):
            if k == i or k == j or ((Rk - RL) & G):
                continue
            a = (i, k) if i < k else (k, i)
            if a in pend:
                continue
            if j >= 0:
                b = (j, k) if j < k else (k, j)
            else:
                b = (k, j)
            if b in pend:
                continue
            return True
        if self.ideal is not None:
            for Rf, fi in self.ideal.leads:
                f = -1 - fi
                if f == j or ((Rf - RL) & G):
                    continue
                if (i, f) in pend:
                    continue
                if j >= 0 and (j, f) in pend:
                    continue
                return True
        return False

    def _process_pair(self, i, j, L):
        self.pending.discard((i, j))
        if self._chain(i, j, L):
            self.stats["chain"] += 1
            return
        self.stats["pairs"] += 1
        p = self.p
        work: dict = {}
        ti = self.terms[i]
        si = L - ti[0][0]
        for k, a in ti[1:]:
            work[k + si] = a
        rep = None
        if self.track:
            rep = {}
            for k, a in self.reps[i].items():
                rep[k + si] = a
        if j >= 0:
            tj = self.terms[j]
            sj = L - tj[0][0]
            for k, a in tj[1:]:
                kk = k + sj
                v = (work.get(kk, 0) - a) % p
                if v:
                    work[kk] = v
                else:
                    work.pop(kk, None)
            if self.track:
                for k, a in self.reps[j].items():
                    kk = k + sj
                    v = (rep.get(kk, 0) - a) % p
                    if v:
                        rep[kk] = v
                    else:
                        rep.pop(kk, None)
        else:
            for dk, a in self.ideal.tails[-1 - j]:
                kk = L + dk
                v = (work.get(kk, 0) - a) % p
                if v:
                    work[kk] = v
                else:
                    work.pop(kk, None)
        rem = self.reduce(work, rep)
        if not rem:
            self.stats["zero"] += 1
            if self.collect_syz:
                self._record_syzygy(rep)
            return
        self._insert(rem, rep)

    def interreduce(self):
        """Tail-reduce every element (leads are already pairwise non-divisible)."""
        for idx, terms in enumerate(self.terms):
            lead = terms[0]
            work = dict(terms[1:])
            rep = dict(self.reps[idx]) if self.reps[idx] is not None else None
            if rep is not None:
                # rep of the tail = rep(g) - 1*lead-part; tracking tails is not meaningful,
                # so only elements without tracking are interreduced
                continue
            rem = self.reduce(work, None)
            self.terms[idx] = [lead] + sorted(rem.items(), reverse=True)
            self.tails[idx] = self.terms[idx][1:]


# --- GroebnerBasis ------------------------------------------------------------

class GroebnerBasis:
    """A Gröbner basis of a graded submodule, optionally over a quotient P/I.

    `modulo` is the reduced Gröbner basis of I (list of Polynomials) or None.
    The order is position-over-term on top of weighted degrevlex; `elim` gives
    extra elimination weights per variable and `block` per position.
    """

    def __init__(self, module: FreeModule, vecs, modulo=None, reduced=True,
                 reps=None, source=None, posrank=None, block=None, elim=None, scale=None):
        self.module = module
        self.ring = module.ring
        self.vecs = vecs
        self.modulo = list(modulo) if modulo else []
        self.reduced = reduced
        self.reps = reps
        self.source = source
        self._posrank = posrank
        self._block = block
        self._elim = elim
        self._scale = scale or make_scale(self.ring, module.degrees,
                                          source.degrees if source else ())
        self._reducer = None

    @property
    def generators(self) -> list:
        return [FreeModuleElement(self.module, v) for v in self.vecs]

    def __len__(self):
        return len(self.vecs)

    def __iter__(self):
        return iter(self.generators)

    def coder(self) -> TermCoder:
        return self._get_reducer().coder

    def _get_reducer(self) -> Reducer:
        if self._reducer is None:
            coder = TermCoder(self.ring, self.module.degrees, self._scale, self._posrank,
                              self._block, self._elim)
            src = None
            if self.source is not None:
                src = TermCoder(self.ring, self.source.degrees, self._scale, None, None,
                                self._elim)
            red = Reducer(coder, self.ring.p, self.modulo, src)
            for i, v in enumerate(self.vecs):
                terms = _normalize(coder.encode_vec(v), self.ring.p, None)
                rep = src.encode_vec(self.reps[i]) if self.reps is not None else None
                if terms[0][1] != 1:
                    raise AssertionError
                red.add(terms, rep)
            self._reducer = red
        return self._reducer

    def lead_terms(self) -> list:
        red = self._get_reducer()
        return [red.coder.decode(t[0][0]) for t in red.terms]

    def reduce_vec(self, vec: dict) -> dict:
        red = self._get_reducer()
        rem = red.reduce(red.coder.encode_vec(vec))
        return red.coder.decode_vec(rem)

    def contains_vec(self, vec: dict) -> bool:
        red = self._get_reducer()
        return not red.reduce(red.coder.encode_vec(vec))

    def lift_vec(self, vec: dict):
        """Coefficients u (source coordinates) with sum u_l * column_l == vec mod I, or None."""
        if self.reps is None:
            raise ValueError("basis was computed without representations")
        red = self._get_reducer()
        rep: dict = {}
        rem = red.reduce(red.coder.encode_vec(vec), rep)
        if rem:
            return None
        # reduce() subtracts the used reps from rep; the lift is the negation
        p = self.ring.p
        out = rep
        if red.ideal is not None:
            out = kernels.reduce_ideal(red.ideal, red.src.REVMASK, red.src.GUARD, p, out)
        return {k: (-c) % p for k, c in red.src.decode_vec(out).items()}


def _prepare(gens, module, modulo):
    module, vecs = _as_vecs(gens, module)
    for v in vecs:
        if vec_degree(v, module) is NONHOMOGENEOUS:
            raise DegreeError("inhomogeneous generator")
    if modulo is not None and not isinstance(modulo, list):
        modulo = list(modulo.polys()) if isinstance(modulo, GroebnerBasis) else list(modulo)
    return module, vecs, modulo


def _scaled_bound(scale, degree_bound):
    if degree_bound is None:
        return None
    v = Fraction(degree_bound) * scale
    return v.numerator // v.denominator


def buchberger(gens, order=None, degree_bound=None, module=None, modulo=None,
               elim=None, block=None, posrank=None) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule generated by gens.

    `order` may be a MonomialOrder; it must match the ring weights, which
    already determine the weighted degrevlex order.
    """
    module, vecs, modulo = _prepare(gens, module, modulo) if (gens or module) else (None, [], None)
    if module is None:
        raise ValueError("empty generator list needs an explicit module")
    ring = module.ring
    if order is not None and order.weights != ring.weights:
        raise ValueError("order weights differ from ring weights")
    scale = make_scale(ring, module.degrees)
    coder = TermCoder(ring, module.degrees, scale, posrank, block, elim)
    eng = Engine(coder, ring.p, modulo, product=(module.rank == 1 and not modulo),
                 degree_bound=_scaled_bound(scale, degree_bound))
    eng.run([coder.encode_vec(v) for v in vecs])
    eng.interreduce()
    c = coder
    out = sorted(eng.terms, key=lambda t: (t[0][0] >> c.S_DEG, -t[0][0]))
    res = GroebnerBasis(module, [coder.decode_vec(dict(t)) for t in out], modulo, True,
                        posrank=posrank, block=block, elim=elim, scale=scale)
    return res


def ideal_basis(polys, ring: PolyRing | None = None, degree_bound=None) -> list:
    """Reduced Gröbner basis (as sorted Polynomials) of a homogeneous ideal."""
    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        return []
    ring = ring or polys[0].ring
    G = buchberger(polys, module=FreeModule(ring, [0]), degree_bound=degree_bound)
    return G.polys()


def _polys(self) -> list:
    ring = self.ring
    out = []
    for v in self.vecs:
        out.append(Polynomial(ring, {m: c for (_, m), c in v.items()}, _clean=True))
    return out


GroebnerBasis.polys = _polys


def normal_form(v, G: GroebnerBasis):
    """Normal form of v with respect to G (and G's quotient ideal, if any)."""
    if isinstance(v, Polynomial):
        vec = {(0, m): c for m, c in v.as_dict().items()}
        rem = G.reduce_vec(vec)
        return Polynomial(v.ring, {m: c for (_, m), c in rem.items()}, _clean=True)
    return FreeModuleElement(v.module, G.reduce_vec(v.vec))


def syzygy_basis(G: GroebnerBasis) -> list:
    """Schreyer syzygies of the generators of G, as elements of a free module
    whose basis degrees are the degrees of the generators."""
    module = G.module
    ring = G.ring
    degs = [vec_degree(v, module) for v in G.vecs]
    source = FreeModule(ring, degs)
    scale = make_scale(ring, module.degrees, degs)
    coder = TermCoder(ring, module.degrees, scale, G._posrank, G._block, G._elim)
    src = TermCoder(ring, degs, scale, None, None, G._elim)
    red = Reducer(coder, ring.p, G.modulo, src)
    nv = ring.nvars
    for i, v in enumerate(G.vecs):
        enc = coder.encode_vec(v)
        terms = _normalize(enc, ring.p, None)
        inv_lc = pow(enc[terms[0][0]], ring.p - 2, ring.p)
        red.add(terms, {src.encode(i, (0,) * nv): inv_lc})
    p = ring.p
    leads = red.lead_codes
    out = []
    for j in range(len(leads)):
        # candidate pairs (i, j), i < j, same position; keep minimal quotients
        cands = []
        for i in range(j):
            if coder.pos_of(leads[i]) != coder.pos_of(leads[j]):
                continue
            L = _lcm_code(coder, leads[i], leads[j])
            cands.append((i, L, _quotient_exps(coder, L, leads[j])))
        keep = []
        for i, L, qi in cands:
            dominated = False
            for i2, _, q2 in cands:
                if i2 != i and all(a <= b for a, b in zip(q2, qi)) and (q2 != qi or i2 < i):
                    dominated = True
                    break
            if not dominated:
                keep.append((i, L))
        for i, L in keep:
            work: dict = {}
            rep: dict = {}
            for a_idx, sign in ((i, 1), (j, -1)):
                s = L - red.lead_codes[a_idx]
                for k, a in red.terms[a_idx]:
                    kk = k + s
                    val = (work.get(kk, 0) + sign * a) % p
                    if val:
                        work[kk] = val
                    else:
                        work.pop(kk, None)
                for k, a in red.reps[a_idx].items():
                    kk = k + s
                    val = (rep.get(kk, 0) + sign * a) % p
                    if val:
                        rep[kk] = val
                    else:
                        rep.pop(kk, None)
            rem = red.reduce(work, rep)
            if rem:
                raise ValueError("input is not a Gröbner basis")
            if G.modulo:
                rep = kernels.reduce_ideal(red.ideal, src.REVMASK, src.GUARD, p, rep)
            if rep:
                out.append(FreeModuleElement(source, src.decode_vec(rep)))
    return out


def _quotient_exps(coder, L, lead):
    a = coder.exps_of(L)
    b = coder.exps_of(lead)
    return tuple(x - y for x, y in zip(a, b))


def kernel_vecs(columns, source_degrees, target_degrees, ring: PolyRing, modulo=None,
                degree_bound=None) -> list:
    """Generators (as vecs over source positions) of ker(P^src -> P^tgt) over P/I."""
    source_degrees = [Fraction(d) for d in source_degrees]
    target_degrees = [Fraction(d) for d in target_degrees]
    tgt = FreeModule(ring, target_degrees)
    for l, col in enumerate(columns):
        d = vec_degree(col, tgt)
        if d is NONHOMOGENEOUS or (d is not BOTTOM and d != source_degrees[l]):
            raise DegreeError(f"column {l} has degree {d}, declared {source_degrees[l]}")
    scale = make_scale(ring, target_degrees, source_degrees)
    coder = TermCoder(ring, target_degrees, scale)
    src = TermCoder(ring, source_degrees, scale)
    eng = Engine(coder, ring.p, modulo or None, src, track=True, kernel_mode=True,
                 collect_syz=True, degree_bound=_scaled_bound(scale, degree_bound))
    eng.run([coder.encode_vec(c) for c in columns])
    return [src.decode_vec(s) for s in eng.syzygies]


def kernel_of_module_map(M, source_degrees, target_degrees, modulo=None, degree_bound=None):
    """Kernel of the map given by matrix M (list of rows of Polynomials) over P/I.

    modulo: GroebnerBasis of I, a list of polynomials, or None.
    """
    rows = list(M)
    ntgt = len(target_degrees)
    nsrc = len(source_degrees)
    if len(rows) != ntgt or any(len(r) != nsrc for r in rows):
        raise DegreeError("matrix shape does not match the declared degrees")
    ring = None
    for r in rows:
        for f in r:
            if isinstance(f, Polynomial):
                ring = f.ring
                break
        if ring:
            break
    if ring is None:
        if isinstance(modulo, GroebnerBasis):
            ring = modulo.ring
        else:
            raise ValueError("cannot determine the ring")
    cols = []
    for l in range(nsrc):
        col = {}
        for i in range(ntgt):
            f = rows[i][l]
            if isinstance(f, int):
                f = ring.constant(f)
            for m, c in f.as_dict().items():
                col[(i, m)] = c
        cols.append(col)
    mod = _modulo_polys(modulo)
    if mod:
        cols = [reduce_mod_ideal(c, ring, mod) for c in cols]
    vecs = kernel_vecs(cols, source_degrees, target_degrees, ring, mod, degree_bound)
    src = FreeModule(ring, source_degrees)
    return [FreeModuleElement(src, v) for v in vecs]


def _modulo_polys(modulo):
    if modulo is None:
        return None
    if isinstance(modulo, GroebnerBasis):
        return modulo.polys()
    return list(modulo)


@lru_cache(maxsize=64)
def _ideal_reducer(ring: PolyRing, ideal_polys: tuple):
    coder = TermCoder(ring, [0], ring.denominator)
    return coder, Reducer(coder, ring.p, list(ideal_polys))


def reduce_mod_ideal(vec: dict, ring: PolyRing, ideal_polys) -> dict:
    """Normal form of each component modulo a reduced ideal Gröbner basis."""
    if not ideal_polys or not vec:
        return dict(vec)
    coder, red = _ideal_reducer(ring, tuple(ideal_polys))
    parts: dict = {}
    for (pos, m), c in vec.items():
        parts.setdefault(pos, {})[coder.encode(0, m)] = c
    out = {}
    for pos, codes in parts.items():
        for code, c in red.reduce_ideal_only(codes).items():
            out[(pos, coder.exps_of(code))] = c
    return out


def eliminate(G: GroebnerBasis, keep) -> GroebnerBasis:
    """Gröbner basis of the ideal (G) intersected with F_p[keep]."""
    ring = G.ring
    keep_idx = {ring.names.index(k) if isinstance(k, str) else k for k in keep}
    elim = [0 if i in keep_idx else 1 for i in range(ring.nvars)]
    if not any(elim):
        return G
    E = buchberger(G.polys(), module=FreeModule(ring, [0]), elim=elim)
    kept = []
    for f in E.polys():
        if all(all(m[i] == 0 for i in range(ring.nvars) if elim[i]) for m in f.as_dict()):
            kept.append(f)
    return buchberger(kept, module=FreeModule(ring, [0])) if kept else \
        GroebnerBasis(FreeModule(ring, [0]), [])


def s_pairs_reduce_to_zero(G: GroebnerBasis) -> bool:
    """Direct check of the Buchberger criterion (including pairs with the quotient ideal)."""
    red = G._get_reducer()
    coder = red.coder
    p = G.ring.p
    n = len(red.terms)
    for j in range(n):
        for i in range(j):
            if coder.pos_of(red.lead_codes[i]) != coder.pos_of(red.lead_codes[j]):
                continue
            L = _lcm_code(coder, red.lead_codes[i], red.lead_codes[j])
            work: dict = {}
            for a_idx, sign in ((i, 1), (j, -1)):
                s = L - red.lead_codes[a_idx]
                for k, a in red.terms[a_idx]:
                    kk = k + s
                    work[kk] = (work.get(kk, 0) + sign * a) % p
            work = {k: c for k, c in work.items() if c}
            if red.reduce(work):
                return False
        if red.ideal is not None:
            lead = red.lead_codes[j]
            ea = coder.exps_of(lead)
            for fi, fe in enumerate(red.ideal.exps):
                m = tuple(x if x > y else y for x, y in zip(ea, fe))
                L = lead + coder.L(m) - coder.L(ea)
                work = {}
                s = L - lead
                for k, a in red.terms[j]:
                    work[k + s] = a
                work[L] = (work.get(L, 0) - 1) % p
                for dk, a in red.ideal.tails[fi]:
                    work[L + dk] = (work.get(L + dk, 0) - a) % p
                work = {k: c for k, c in work.items() if c}
                if red.reduce(work):
                    return False
    return True

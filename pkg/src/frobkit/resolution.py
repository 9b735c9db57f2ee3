"""Free complexes, minimal resolutions, Betti tables, Tor/Ext windows and Hilbert series."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .groebner import (BOTTOM, Engine, FreeModule, TermCoder, _scaled_bound, kernel_vecs,
                       make_scale, reduce_mod_ideal, vec_degree)
from .modules import (FiniteModule, ModuleComplex, ModuleMap, shift_positions,
                      substitute_positions)
from .poly import Polynomial

DEFAULT_CUTOFF = 8


# --- data types ------------------------------------------------------------------

class FreeComplex:
    """F_lo <- F_lo+1 <- ... <- F_hi over a graded quotient ring.

    degrees[i] lists the basis degrees of F_{lo+i}; diffs[i] is d_{lo+i+1} as a
    list of column vectors (one per basis element of F_{lo+i+1}).
    """

    def __init__(self, ring, degrees, diffs, lo=0):
        self.ring = ring
        self.degrees = [tuple(Fraction(d) for d in ds) for ds in degrees]
        self.diffs = [list(cols) for cols in diffs]
        self.lo = lo
        if len(self.diffs) != max(len(self.degrees) - 1, 0):
            raise ValueError("need one differential between consecutive terms")

    @property
    def hi(self) -> int:
        return self.lo + len(self.degrees) - 1

    def rank(self, n) -> int:
        i = n - self.lo
        return len(self.degrees[i]) if 0 <= i < len(self.degrees) else 0

    def ranks(self) -> list:
        return [len(d) for d in self.degrees]

    def degrees_at(self, n) -> tuple:
        i = n - self.lo
        return self.degrees[i] if 0 <= i < len(self.degrees) else ()

    def d(self, n) -> list:
        """Columns of d_n: F_n -> F_{n-1}."""
        i = n - self.lo - 1
        return self.diffs[i] if 0 <= i < len(self.diffs) else []

    def matrix(self, n) -> list:
        P = self.ring.P
        rows = [[P.zero() for _ in range(self.rank(n))] for _ in range(self.rank(n - 1))]
        for s, col in enumerate(self.d(n)):
            parts: dict = {}
            for (r, m), c in col.items():
                parts.setdefault(r, {})[m] = c
            for r, dct in parts.items():
                rows[r][s] = Polynomial(P, dct, _clean=True)
        return rows

    def check_complex(self) -> bool:
        """d_{n-1} d_n == 0 modulo the ring's ideal for all n."""
        p = self.ring.p
        for n in range(self.lo + 2, self.hi + 1):
            prev = dict(enumerate(self.d(n - 1)))
            for col in self.d(n):
                v = substitute_positions(col, prev, p)
                if self.ring.ideal:
                    v = reduce_mod_ideal(v, self.ring.P, self.ring.ideal)
                if v:
                    return False
        return True

    def check_degrees(self) -> bool:
        for n in range(self.lo + 1, self.hi + 1):
            free = FreeModule(self.ring.P, self.degrees_at(n - 1))
            for s, col in enumerate(self.d(n)):
                d = vec_degree(col, free)
                if d is not BOTTOM and d != self.degrees_at(n)[s]:
                    return False
        return True

    def is_minimal(self) -> bool:
        """No differential entry has a nonzero constant term."""
        zero = (0,) * self.ring.nvars
        return all(m != zero for cols in self.diffs for col in cols for (_, m) in col)

    def truncate(self, N) -> FreeComplex:
        k = N - self.lo + 1
        return FreeComplex(self.ring, self.degrees[:k], self.diffs[:max(k - 1, 0)], self.lo)

    def as_module_complex(self) -> ModuleComplex:
        mods = [FiniteModule(self.ring, ds, []) for ds in self.degrees]
        maps = [ModuleMap(mods[i + 1], mods[i], cols, check=False)
                for i, cols in enumerate(self.diffs)]
        return ModuleComplex(mods, maps, self.lo, check=False)

    def base_change(self, phi) -> FreeComplex:
        """Apply a ring map to every entry (degrees scale by the map's degree_scale)."""
        c = phi.degree_scale
        diffs = [[phi.apply_vec(col) for col in cols] for cols in self.diffs]
        return FreeComplex(phi.target, [[d * c for d in ds] for ds in self.degrees], diffs,
                           self.lo)

    def dual(self) -> FreeComplex:
        """Hom(F, A) as a chain complex in degrees -hi..-lo (entries transposed)."""
        degs = [tuple(-d for d in ds) for ds in reversed(self.degrees)]
        diffs = []
        for n in range(self.hi, self.lo, -1):
            cols = [dict() for _ in range(self.rank(n - 1))]
            for s, col in enumerate(self.d(n)):
                for (r, m), c in col.items():
                    cols[r][(s, m)] = c
            diffs.append(cols)
        return FreeComplex(self.ring, degs, diffs, -self.hi)

    def __repr__(self):
        return f"FreeComplex(ranks={self.ranks()}, lo={self.lo})"


@dataclass
class PoincareTruncation:
    coefficients: list
    cutoff: int

    def __post_init__(self):
        self.coefficients = list(self.coefficients)[: self.cutoff + 1]
        self.coefficients += [0] * (self.cutoff + 1 - len(self.coefficients))

    def __getitem__(self, n):
        return self.coefficients[n]

    def dominated_by(self, other: PoincareTruncation) -> bool:
        """Coefficientwise self <= other up to the common cutoff."""
        N = min(self.cutoff, other.cutoff)
        return all(self[n] <= other[n] for n in range(N + 1))

    def first_violation(self, other: PoincareTruncation):
        N = min(self.cutoff, other.cutoff)
        for n in range(N + 1):
            if self[n] > other[n]:
                return n
        return None

    def __mul__(self, other: PoincareTruncation) -> PoincareTruncation:
        N = min(self.cutoff, other.cutoff)
        out = [sum(self[i] * other[n - i] for i in range(n + 1)) for n in range(N + 1)]
        return PoincareTruncation(out, N)

    def shifted(self, k: int) -> PoincareTruncation:
        return PoincareTruncation([0] * k + self.coefficients, self.cutoff)

    def __add__(self, other):
        N = min(self.cutoff, other.cutoff)
        return PoincareTruncation([self[n] + other[n] for n in range(N + 1)], N)


@dataclass
class BettiTable:
    entries: dict                    # (n, degree) -> count
    cutoff: int
    lo: int = 0

    @classmethod
    def from_complex(cls, C: FreeComplex, N: int) -> BettiTable:
        ent: dict = {}
        for n in range(C.lo, min(C.hi, N) + 1):
            for d in C.degrees_at(n):
                ent[(n, d)] = ent.get((n, d), 0) + 1
        return cls(dict(sorted(ent.items())), N, min(C.lo, 0))

    def total(self, n) -> int:
        return sum(c for (k, _), c in self.entries.items() if k == n)

    def totals(self) -> list:
        return [self.total(n) for n in range(self.lo, self.cutoff + 1)]

    def poincare(self) -> PoincareTruncation:
        if self.lo < 0:
            raise ValueError("Poincaré series needs a complex bounded at 0")
        return PoincareTruncation(self.totals(), self.cutoff)

    def rows(self):
        return [(n, d, c) for (n, d), c in self.entries.items()]

    def __str__(self):
        degs = sorted({d for (_, d) in self.entries})
        head = "deg\\n " + " ".join(f"{n:>4}" for n in range(self.lo, self.cutoff + 1))
        lines = [head]
        for d in degs:
            cells = []
            for n in range(self.lo, self.cutoff + 1):
                c = self.entries.get((n, d), 0)
                cells.append(f"{c if c else '.':>4}")
            lines.append(f"{str(d):>6} " + " ".join(cells))
        lines.append("total  " + " ".join(f"{t:>4}" for t in self.totals()))
        return "\n".join(lines)


# --- minimal resolutions -----------------------------------------------------------

def _syzygy_step(ring, vecs, target_degrees, want_syz=True, degree_bound=None):
    """Minimal generators among vecs (index list) and generators of their kernel.

    Returns (minimal indices, their degrees, syzygy vectors over the minimal
    positions renumbered 0..len-1).
    """
    P = ring.P
    free = FreeModule(P, target_degrees)
    src_degs = [vec_degree(v, free) for v in vecs]
    if any(d is BOTTOM for d in src_degs):
        keep = [i for i, d in enumerate(src_degs) if d is not BOTTOM]
        vecs = [vecs[i] for i in keep]
        src_degs = [src_degs[i] for i in keep]
    if not vecs:
        return [], [], []
    scale = make_scale(P, target_degrees, src_degs)
    coder = TermCoder(P, target_degrees, scale)
    src = TermCoder(P, src_degs, scale)
    eng = Engine(coder, P.p, ring.ideal or None, src, track=want_syz, collect_syz=want_syz,
                 degree_bound=_scaled_bound(scale, degree_bound))
    eng.run([coder.encode_vec(v) for v in vecs])
    minimal = sorted(eng.minimal_inputs)
    renum = {old: new for new, old in enumerate(minimal)}
    syz = []
    if want_syz:
        for s in eng.syzygies:
            v = {}
            for (pos, m), c in src.decode_vec(s).items():
                v[(renum[pos], m)] = c
            syz.append(v)
    return [vecs[i] for i in minimal], [src_degs[i] for i in minimal], syz


def minimal_free_resolution(M: FiniteModule, N: int = DEFAULT_CUTOFF,
                            degree_bound=None) -> FreeComplex:
    """Minimal graded free resolution F_N -> ... -> F_0 of M."""
    if N < 0:
        raise ValueError("cutoff must be nonnegative")
    Mm = M.minimal_presentation()
    ring = M.ring
    degrees = [list(Mm.degrees)]
    diffs = []
    current = list(Mm.relations)
    tgt = list(Mm.degrees)
    for n in range(1, N + 1):
        if not current:
            break
        cols, degs, syz = _syzygy_step(ring, current, tgt, want_syz=(n < N),
                                       degree_bound=degree_bound)
        if not cols:
            break
        degrees.append(degs)
        diffs.append(cols)
        current, tgt = syz, degs
    return FreeComplex(ring, degrees, diffs)


def resolution_of_residue_field(ring, N=DEFAULT_CUTOFF) -> FreeComplex:
    return minimal_free_resolution(FiniteModule.residue_field(ring), N)


# --- Koszul complexes and homology ------------------------------------------------------

def _koszul_data(elems):
    k = len(elems)
    bases = [list(combinations(range(k), i)) for i in range(k + 1)]
    index = [{S: t for t, S in enumerate(b)} for b in bases]
    return bases, index


def koszul_complex(M, elems):
    """K[M; f_1..f_k].

    For a ring (or M free of rank one on a degree-0 generator) this is the
    FreeComplex K[A; f]; for a presented module it is M ⊗ K[A; f] as a
    ModuleComplex.
    """
    if isinstance(M, FiniteModule):
        if M.ngens == 1 and not M.relations and M.degrees[0] == 0:
            return _koszul_free(M.ring, elems)
        return tensor_with_module(_koszul_free(M.ring, elems), M)
    return _koszul_free(M, elems)


def _koszul_free(ring, elems) -> FreeComplex:
    P = ring.P
    elems = [ring.nf(P(f) if not isinstance(f, Polynomial) else f) for f in elems]
    degs_f = []
    for f in elems:
        if not f.is_zero() and f.constant_term():
            raise ValueError("Koszul elements must lie in the maximal ideal")
        d = f.weighted_degree()
        degs_f.append(Fraction(1) if d is BOTTOM else Fraction(d))
    bases, index = _koszul_data(elems)
    p = ring.p
    degrees = [[sum((degs_f[j] for j in S), Fraction(0)) for S in b] for b in bases]
    diffs = []
    for i in range(1, len(bases)):
        cols = []
        for S in bases[i]:
            col: dict = {}
            for t, j in enumerate(S):
                sign = 1 if t % 2 == 0 else p - 1
                r = index[i - 1][S[:t] + S[t + 1:]]
                for m, c in elems[j].as_dict().items():
                    col[(r, m)] = (col.get((r, m), 0) + sign * c) % p
            cols.append({k_: c for k_, c in col.items() if c})
        diffs.append(cols)
    return FreeComplex(ring, degrees, diffs)


def tensor_with_module(F: FreeComplex, M: FiniteModule) -> ModuleComplex:
    """F ⊗ M: each free summand of F becomes a shifted copy of M."""
    g = M.ngens
    mods = []
    for ds in F.degrees:
        parts = [M.shift(d) for d in ds]
        mods.append(parts[0].direct_sum(*parts[1:]) if parts else FiniteModule(M.ring, [], []))
    maps = []
    for i, cols in enumerate(F.diffs):
        images = []
        for col in cols:
            for j in range(g):
                images.append({(r * g + j, m): c for (r, m), c in col.items()})
        maps.append(ModuleMap(mods[i + 1], mods[i], images, check=False))
    return ModuleComplex(mods, maps, F.lo, check=False)


def maximal_ideal_generators(ring):
    """The variables, which minimally generate m when the ideal has no linear part."""
    for f in ring.ideal:
        if any(sum(m) == 1 for m, _ in f.terms):
            raise ValueError("the presentation is not trimmed; call ring.trim() first")
    return ring.P.gens()


def koszul_of_maximal_ideal(M) -> ModuleComplex:
    """K^M (M may be a FiniteModule or a ring)."""
    if not isinstance(M, FiniteModule):
        M = FiniteModule(M, [0], [])
    return tensor_with_module(_koszul_free(M.ring, maximal_ideal_generators(M.ring)), M)


def subquotient(ring, sub_gens, sub_degrees, quot_gens, ambient_degrees) -> FiniteModule:
    """(span of sub_gens + Q) / Q as a presented module, Q = span of quot_gens.

    Generators are the sub_gens that are minimal modulo Q (chosen by one
    engine run with Q listed first), so a vanishing subquotient costs no
    syzygy computation.
    """
    if not sub_gens:
        return FiniteModule(ring, [], [])
    P = ring.P
    free = FreeModule(P, ambient_degrees)
    qdeg = [vec_degree(v, free) for v in quot_gens]
    pairs = [(v, d) for v, d in zip(quot_gens, qdeg) if d is not BOTTOM]
    inputs = [v for v, _ in pairs] + list(sub_gens)
    scale = make_scale(P, ambient_degrees, [d for _, d in pairs], sub_degrees)
    coder = TermCoder(P, ambient_degrees, scale)
    eng = Engine(coder, P.p, ring.ideal or None)
    eng.run([coder.encode_vec(v) for v in inputs])
    q = len(pairs)
    chosen = [i - q for i in sorted(eng.minimal_inputs) if i >= q]
    if not chosen:
        return FiniteModule(ring, [], [])
    gens = [sub_gens[i] for i in chosen]
    degs = [sub_degrees[i] for i in chosen]
    s = len(gens)
    syz = kernel_vecs(gens + [v for v, _ in pairs], degs + [d for _, d in pairs],
                      ambient_degrees, P, ring.ideal or None)
    rels = []
    for v in syz:
        w = {(i, m): c for (i, m), c in v.items() if i < s}
        if w:
            rels.append(w)
    return FiniteModule(ring, degs, rels, check=False)


def _kernel_in_presented(ring, d_images, src: FiniteModule, tgt: FiniteModule):
    """Generators (vectors over src's free cover) of {c : d(c) in relations of tgt}."""
    free_t = tgt.free
    cols = list(d_images)
    degs = list(src.degrees)
    for r in tgt.relations:
        cols.append(r)
        degs.append(vec_degree(r, free_t))
    if not cols:
        return []
    if tgt.ngens == 0:
        return [{(i, (0,) * ring.nvars): 1} for i in range(src.ngens)]
    syz = kernel_vecs(cols, degs, list(tgt.degrees), ring.P, ring.ideal or None)
    g = src.ngens
    out = []
    for v in syz:
        w = {(i, m): c for (i, m), c in v.items() if i < g}
        if w:
            out.append(w)
    return out


def module_complex_homology(C: ModuleComplex) -> dict:
    """{n: H_n} for a complex of presented modules (minimal presentations)."""
    ring = C.modules[0].ring
    out = {}
    for n in range(C.lo, C.hi + 1):
        Cn = C.term(n)
        dn = C.differential(n)
        if Cn.ngens == 0:
            out[n] = FiniteModule(ring, [], [])
            continue
        if dn is None:
            ker = [{(i, (0,) * ring.nvars): 1} for i in range(Cn.ngens)]
        else:
            ker = _kernel_in_presented(ring, dn.images, Cn, C.term(n - 1))
        ker_degs = [vec_degree(v, Cn.free) for v in ker]
        keep = [i for i, d in enumerate(ker_degs) if d is not BOTTOM]
        ker = [ker[i] for i in keep]
        ker_degs = [ker_degs[i] for i in keep]
        up = C.differential(n + 1)
        quot = list(Cn.relations) + (list(up.images) if up is not None else [])
        out[n] = subquotient(ring, ker, ker_degs, quot, list(Cn.degrees)).minimal_presentation()
    return out


def complex_homology(C) -> dict:
    """{n: H_n(C)} as minimally presented modules."""
    if isinstance(C, FreeComplex):
        C = C.as_module_complex()
    return module_complex_homology(C)


# --- minimalization -----------------------------------------------------------------

def minimalize(C: FreeComplex) -> FreeComplex:
    """Cancel unit entries (Gaussian elimination); returns a homotopy equivalent minimal complex."""
    ring = C.ring
    P = ring.P
    p = ring.p
    zero = (0,) * P.nvars
    ideal = ring.ideal
    L = len(C.degrees)
    # columns keyed by basis id; ids are (n, index)
    degs = [dict(enumerate(ds)) for ds in C.degrees]
    cols = [None] + [{s: dict(col) for s, col in enumerate(cs)} for cs in C.diffs]

    def reduce(v):
        return reduce_mod_ideal(v, P, ideal) if ideal else v

    for i in range(1, L):
        while True:
            best = None
            for s, col in cols[i].items():
                for (r, m), c in col.items():
                    if m == zero:
                        key = (degs[i][s], r, s)
                        if best is None or key < best[0]:
                            best = (key, s, r, c)
            if best is None:
                break
            _, s, r, u = best
            inv = pow(u, p - 2, p)
            pivot = cols[i].pop(s)
            for t, col in cols[i].items():
                beta = {m: c for (rr, m), c in col.items() if rr == r}
                if not beta:
                    continue
                new = dict(col)
                for (rr, m), c in pivot.items():
                    for bm, bc in beta.items():
                        key = (rr, tuple(x + y for x, y in zip(m, bm)))
                        v = (new.get(key, 0) - bc * inv * c) % p
                        if v:
                            new[key] = v
                        else:
                            new.pop(key, None)
                cols[i][t] = reduce(new)
            del degs[i][s]
            del degs[i - 1][r]
            if i + 1 < L:
                for t, col in cols[i + 1].items():
                    if any(rr == s for (rr, _) in col):
                        cols[i + 1][t] = {k: c for k, c in col.items() if k[0] != s}
            if i - 1 >= 1:
                cols[i - 1].pop(r, None)
    ids = [sorted(d) for d in degs]
    renum = [{old: new for new, old in enumerate(ix)} for ix in ids]
    degrees = [[degs[i][s] for s in ids[i]] for i in range(L)]
    diffs = []
    for i in range(1, L):
        diffs.append([{(renum[i - 1][r], m): c for (r, m), c in cols[i][s].items()}
                      for s in ids[i]])
    while len(degrees) > 1 and not degrees[-1]:
        degrees.pop()
        diffs.pop()
    return FreeComplex(ring, degrees, diffs, C.lo)


# --- resolutions of complexes -------------------------------------------------------

def _as_module_complex(C):
    if isinstance(C, FreeComplex):
        return C.as_module_complex()
    if isinstance(C, FiniteModule):
        return ModuleComplex([C], [], 0, check=False)
    return C


def resolve_complex(C, N: int = DEFAULT_CUTOFF) -> FreeComplex:
    """Minimal free complex G with a quasi-isomorphism G -> C, through degree N.

    G_n is built from generators of the cycles of the mapping cone: pairs
    (x, c) in G_{n-1} + C_n with d x = 0 and eps(x) = d c.
    """
    C = _as_module_complex(C)
    ring = C.modules[0].ring
    P = ring.P
    nv = P.nvars
    zero = (0,) * nv
    lo = C.lo
    G_degs: list = []       # per n - lo
    G_diff: list = []       # d_n columns for n > lo
    eps: list = []          # per n - lo: list of vectors over C_n's free cover
    top = N + 1
    for n in range(lo, top + 1):
        Cn = C.term(n) or FiniteModule(ring, [], [])
        Cprev = C.term(n - 1) or FiniteModule(ring, [], [])
        dC = C.differential(n)
        Gprev = G_degs[n - 1 - lo] if n - 1 >= lo else []
        Gprev2 = G_degs[n - 2 - lo] if n - 2 >= lo else []
        dG_prev = G_diff[n - 2 - lo] if n - 2 >= lo else [{} for _ in Gprev]
        eps_prev = eps[n - 1 - lo] if n - 1 >= lo else []
        a = len(Gprev)
        g2 = len(Gprev2)
        b = Cn.ngens
        # ambient of the pair module: G_{n-1} (positions 0..a-1) + C_n (a..a+b-1)
        amb_degs = list(Gprev) + list(Cn.degrees)
        # target: G_{n-2} (0..g2-1) + C_{n-1} cover (g2..)
        tgt_degs = list(Gprev2) + list(Cprev.degrees)
        columns, src_degs = [], []
        for s in range(a):
            col = dict(dG_prev[s])
            col.update(shift_positions(eps_prev[s], g2))
            columns.append(col)
            src_degs.append(Gprev[s])
        for j in range(b):
            col = {}
            if dC is not None:
                col = {k: (-c) % ring.p for k, c in shift_positions(dC.images[j], g2).items()}
            columns.append(col)
            src_degs.append(Cn.degrees[j])
        free_t = FreeModule(P, tgt_degs)
        for r in Cprev.relations:
            columns.append(shift_positions(r, g2))
            src_degs.append(vec_degree(columns[-1], free_t))
        if not amb_degs:
            G_degs.append([])
            eps.append([])
            if n > lo:
                G_diff.append([])
            continue
        if tgt_degs:
            syz = kernel_vecs(columns, src_degs, tgt_degs, P, ring.ideal or None)
        else:
            syz = [{(i, zero): 1} for i in range(len(columns))]
        width = a + b
        pairs = []
        for v in syz:
            w = {(i, m): c for (i, m), c in v.items() if i < width}
            if w:
                pairs.append(w)
        base = [shift_positions(r, a) for r in Cn.relations]
        inputs = base + pairs
        free_a = FreeModule(P, amb_degs)
        in_degs = [vec_degree(v, free_a) for v in inputs]
        scale = make_scale(P, amb_degs, [d for d in in_degs if d is not BOTTOM])
        coder = TermCoder(P, amb_degs, scale)
        eng = Engine(coder, P.p, ring.ideal or None)
        eng.run([coder.encode_vec(v) for v in inputs])
        chosen = [i for i in sorted(eng.minimal_inputs) if i >= len(base)]
        degs_n, d_n, eps_n = [], [], []
        for i in chosen:
            v = inputs[i]
            degs_n.append(in_degs[i])
            d_n.append({(pos, m): c for (pos, m), c in v.items() if pos < a})
            eps_n.append({(pos - a, m): c for (pos, m), c in v.items() if pos >= a})
        G_degs.append(degs_n)
        eps.append(eps_n)
        if n > lo:
            G_diff.append(d_n)
    # drop empty leading terms but keep homological positions
    G = FreeComplex(ring, G_degs, G_diff, lo)
    return minimalize(G).truncate(N)


# --- Betti numbers and Poincaré series ------------------------------------------------

def betti_and_poincare(obj, N: int = DEFAULT_CUTOFF):
    """(BettiTable, PoincareTruncation) of a module, free complex or module complex."""
    if isinstance(obj, FiniteModule):
        F = minimal_free_resolution(obj, N)
    else:
        F = resolve_complex(obj, N)
    table = BettiTable.from_complex(F, N)
    return table, table.poincare()


# --- Tor windows -----------------------------------------------------------------------

@dataclass
class TorWindow:
    dims: list               # dim_k Tor_i, or None when infinite
    nonzero: list            # Tor_i != 0
    verdict: str             # FLAT, FINITE_FD, WINDOW_INCONCLUSIVE
    fd: int | None
    cutoff: int
    modules: list = field(default_factory=list, repr=False)


def tor_of_map(phi, N: int = DEFAULT_CUTOFF) -> TorWindow:
    """dim_k Tor_i^R(S, k) for i <= N, from S ⊗_R (minimal resolution of k over R)."""
    R = phi.source
    F = resolution_of_residue_field(R, N + 1)
    FS = F.base_change(phi)
    H = complex_homology(FS)
    mods, dims, nonzero = [], [], []
    for i in range(N + 1):
        Hi = H.get(i)
        if Hi is None or Hi.ngens == 0:
            mods.append(Hi)
            dims.append(0)
            nonzero.append(False)
            continue
        mods.append(Hi)
        nonzero.append(True)
        dims.append(Hi.dim() if Hi.is_finite_length() else None)
    higher = [i for i in range(1, N + 1) if nonzero[i]]
    if not higher:
        verdict, fd = "FLAT", 0
    elif not nonzero[N]:
        verdict, fd = "FINITE_FD", max(higher)
    else:
        verdict, fd = "WINDOW_INCONCLUSIVE", None
    return TorWindow(dims, nonzero, verdict, fd, N, mods)


# --- Ext against the ring ---------------------------------------------------------------

def ext_from_resolution(F: FreeComplex, N: int) -> list:
    """Ext^i(M, A) for i <= N from a resolution F of M (must reach N+1 when possible)."""
    ring = F.ring
    out = []
    for i in range(N + 1):
        Fi = F.degrees_at(i)
        if not Fi:
            out.append(FiniteModule(ring, [], []))
            continue
        dual_degs = [-d for d in Fi]
        # d_{i+1}^T: F_i^* -> F_{i+1}^*; column r of the transpose collects row r of d_{i+1}
        nxt = F.d(i + 1)
        cols_T = [dict() for _ in Fi]
        for s, col in enumerate(nxt):
            for (r, m), c in col.items():
                cols_T[r][(s, m)] = c
        if nxt:
            tgt = [-d for d in F.degrees_at(i + 1)]
            ker = kernel_vecs(cols_T, dual_degs, tgt, ring.P, ring.ideal or None)
        else:
            ker = [{(r, (0,) * ring.nvars): 1} for r in range(len(Fi))]
        # image of d_i^T: F_{i-1}^* -> F_i^*
        img = []
        for r in range(len(F.degrees_at(i - 1))):
            v = {}
            for s, col in enumerate(F.d(i)):
                for (rr, m), c in col.items():
                    if rr == r:
                        v[(s, m)] = c
            if v:
                img.append(v)
        free = FreeModule(ring.P, dual_degs)
        kdeg = [vec_degree(v, free) for v in ker]
        out.append(subquotient(ring, ker, kdeg, img, dual_degs).minimal_presentation())
    return out


def ext_against_ring(M: FiniteModule, N: int = DEFAULT_CUTOFF) -> list:
    """Ext^i_A(M, A) for 0 <= i <= N, minimally presented."""
    F = minimal_free_resolution(M, N + 1)
    return ext_from_resolution(F, N)


# --- Hilbert series ----------------------------------------------------------------------

@dataclass
class HilbertSeries:
    """numerator(t) / prod (1 - t^w), or an exact finite dimension vector.

    numerator: {exponent (Fraction): int}; denominator: list of Fractions.
    """
    numerator: dict
    denominator: list
    finite: dict | None = None

    def coefficients(self, max_degree) -> dict:
        max_degree = Fraction(max_degree)
        if self.finite is not None:
            return {d: c for d, c in self.finite.items() if d <= max_degree}
        series = {e: c for e, c in self.numerator.items() if e <= max_degree}
        for w in self.denominator:
            # multiply by 1/(1 - t^w): running sums along arithmetic progressions
            new = {}
            for e, c in sorted(series.items()):
                k = e
                while k <= max_degree:
                    new[k] = new.get(k, 0) + c
                    k += w
            series = new
        return {e: c for e, c in sorted(series.items()) if c}

    def numerator_str(self) -> str:
        return _series_str(self.numerator)

    def __str__(self):
        if self.finite is not None:
            return _series_str(self.finite)
        den = "".join(f"(1-t^{w})" if w != 1 else "(1-t)" for w in self.denominator)
        return f"({self.numerator_str()})/{den}" if den else self.numerator_str()


def _series_str(d):
    parts = []
    for e, c in sorted(d.items()):
        if not c:
            continue
        if e == 0:
            parts.append(f"{c}")
        else:
            mono = "t" if e == 1 else f"t^{e}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def _monomial_numerator(gens, weights):
    """Numerator of the Hilbert series of P/(monomial ideal) over prod (1 - t^w)."""
    gens = _minimalize_monomials(gens)
    key = tuple(sorted(gens))
    return _numerator_cached(key, tuple(weights), {})


def _minimalize_monomials(gens):
    gens = sorted(set(gens), key=lambda m: (sum(m), m))
    out = []
    for m in gens:
        if not any(all(a <= b for a, b in zip(g, m)) for g in out):
            out.append(m)
    return out


def _numerator_cached(gens, weights, memo):
    if gens in memo:
        return memo[gens]
    if not gens:
        return {Fraction(0): 1}

    def deg(m):
        return sum((e * w for e, w in zip(m, weights)), Fraction(0))

    # pairwise coprime generators: product formula
    if all(not any(a and b for a, b in zip(g, h)) for i, g in enumerate(gens) for h in gens[i + 1:]):
        res = {Fraction(0): 1}
        for g in gens:
            d = deg(g)
            new: dict = {}
            for e, c in res.items():
                new[e] = new.get(e, 0) + c
                new[e + d] = new.get(e + d, 0) - c
            res = {e: c for e, c in new.items() if c}
        memo[gens] = res
        return res
    last = gens[-1]
    rest = gens[:-1]
    quot = tuple(sorted(_minimalize_monomials(
        [tuple(max(a - b, 0) for a, b in zip(g, last)) for g in rest])))
    A = _numerator_cached(tuple(sorted(rest)), weights, memo)
    B = _numerator_cached(quot, weights, memo)
    d = deg(last)
    res = dict(A)
    for e, c in B.items():
        res[e + d] = res.get(e + d, 0) - c
    res = {e: c for e, c in res.items() if c}
    memo[gens] = res
    return res


def _divide_exact(num, w):
    """Division by (1 - t^w) by ascending long division, checking exactness."""
    top = max(num)
    rem = dict(num)
    quo = {}
    while rem:
        e = min(rem)
        c = rem.pop(e)
        if e + w > top:
            return None
        quo[e] = c
        rem[e + w] = rem.get(e + w, 0) + c
        if rem[e + w] == 0:
            del rem[e + w]
    return quo


def hilbert_series(M) -> HilbertSeries:
    """Hilbert series of a FiniteModule or a GradedQuotientRing."""
    if not isinstance(M, FiniteModule):
        M = FiniteModule(M, [0], [])
    ring = M.ring
    weights = list(ring.weights)
    if M.is_finite_length():
        return HilbertSeries({}, [], _finite_dims(M))
    leads = M.leads_by_position()
    ring_leads = ring.lead_monomials()
    num: dict = {}
    for pos in range(M.ngens):
        part = _monomial_numerator(ring_leads + leads[pos], weights)
        for e, c in part.items():
            k = e + M.degrees[pos]
            num[k] = num.get(k, 0) + c
    num = {e: c for e, c in num.items() if c}
    den = sorted(weights)
    kept = []
    for w in den:
        q = _divide_exact(num, w) if num else None
        if q is not None:
            num = q
        else:
            kept.append(w)
    return HilbertSeries(dict(sorted(num.items())), kept)


def _finite_dims(M):
    out: dict = {}
    P = M.ring.P
    for pos, m in M.kbasis():
        d = M.degrees[pos] + P.mono_degree(m)
        out[d] = out.get(d, 0) + 1
    return dict(sorted(out.items()))


def koszul_ranks_ok(K: FreeComplex, k: int) -> bool:
    return K.ranks() == [comb(k, i) for i in range(k + 1)]

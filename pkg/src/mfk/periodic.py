"""2-periodic complexes: folding, tensor, shift, cone, homology, contractions.

Quotient base rings are modeled by a base ideal J carried on the complex:
every normal-form/kernel computation adjoins J times the ambient generators,
so modules "over R/J" are honest R-modules killed by J.
"""

from __future__ import annotations

from typing import Optional

from .groebner import member_with_lift, syzygies_of_vectors, vec_from_polys, vec_to_polys
from .modules import (
    GradedFreeModule,
    Matrix,
    ModuleMap,
    PresentedModule,
    ShapeError,
    block_matrix,
    identity_matrix,
    kron,
    mat_cols,
    mat_from_cols,
    mat_mul,
    mat_neg,
    mat_shape,
    matrix_columns,
    scalar_matrix,
    subquotient,
    zero_matrix,
)
from .rings import Ideal, PolyRing, RingError


class Homotopy:
    """Candidate contraction: maps running against both differentials."""

    __slots__ = ("h_plus", "h_minus")

    def __init__(self, h_plus: ModuleMap, h_minus: ModuleMap):
        self.h_plus = h_plus  # E_+ -> E_-
        self.h_minus = h_minus  # E_- -> E_+


def _nf_matrix(rows: Matrix, base_ideal: Optional[Ideal]) -> Matrix:
    if base_ideal is None:
        return rows
    return tuple(tuple(base_ideal.normal_form(p) for p in r) for r in rows)


def _first_nonzero_entry(rows: Matrix, base_ideal: Optional[Ideal]):
    reduced = _nf_matrix(rows, base_ideal)
    for i, r in enumerate(reduced):
        for j, p in enumerate(r):
            if not p.is_zero():
                return i, j, p
    return None


class TwoPeriodicComplex:
    """(E_+, E_-, d_+, d_-) with both composites zero (modulo the base ideal)."""

    __slots__ = ("plus", "minus", "d_plus", "d_minus", "base_ideal")

    def __init__(self, plus, minus, d_plus, d_minus, base_ideal=None, check=True):
        if d_plus.source != plus or d_plus.target != minus:
            raise ShapeError("d_plus must map E_plus -> E_minus")
        if d_minus.source != minus or d_minus.target != plus:
            raise ShapeError("d_minus must map E_minus -> E_plus")
        if base_ideal is not None and base_ideal.ring != plus.ring:
            raise RingError("base ideal over a different ring")
        self.plus = plus
        self.minus = minus
        self.d_plus = d_plus
        self.d_minus = d_minus
        self.base_ideal = base_ideal
        if check:
            ring = plus.ring
            for name, a, b in (
                ("d_minus o d_plus", d_minus, d_plus),
                ("d_plus o d_minus", d_plus, d_minus),
            ):
                prod = mat_mul(a.rows, b.rows, ring)
                bad = _first_nonzero_entry(prod, base_ideal)
                if bad is not None:
                    i, j, p = bad
                    raise ShapeError(f"{name} is nonzero at entry ({i},{j}): {p}")

    @property
    def ring(self) -> PolyRing:
        return self.plus.ring

    def is_zero(self) -> bool:
        return self.plus.is_zero() and self.minus.is_zero()

    def shift(self) -> "TwoPeriodicComplex":
        """The [1] operation: swap parities, negate both differentials."""
        return TwoPeriodicComplex(
            self.minus, self.plus, -self.d_minus, -self.d_plus, self.base_ideal, check=False
        )

    def twist_by(self, d: int) -> "TwoPeriodicComplex":
        """Shift every generator degree by d; differentials unchanged."""
        plus = self.plus.twist_by(d)
        minus = self.minus.twist_by(d)
        return TwoPeriodicComplex(
            plus,
            minus,
            ModuleMap(plus, minus, self.d_plus.rows, self.d_plus.degree),
            ModuleMap(minus, plus, self.d_minus.rows, self.d_minus.degree),
            self.base_ideal,
            check=False,
        )

    def direct_sum(self, other: "TwoPeriodicComplex") -> "TwoPeriodicComplex":
        if self.ring != other.ring:
            raise RingError("mixed-ring direct sum")
        J = _merge_base(self.base_ideal, other.base_ideal)
        plus = self.plus.direct_sum(other.plus)
        minus = self.minus.direct_sum(other.minus)
        ring = self.ring
        dp = block_matrix(
            [
                [self.d_plus.rows, zero_matrix(ring, self.minus.rank, other.plus.rank)],
                [zero_matrix(ring, other.minus.rank, self.plus.rank), other.d_plus.rows],
            ],
            ring,
        )
        dm = block_matrix(
            [
                [self.d_minus.rows, zero_matrix(ring, self.plus.rank, other.minus.rank)],
                [zero_matrix(ring, other.plus.rank, self.minus.rank), other.d_minus.rows],
            ],
            ring,
        )
        return TwoPeriodicComplex(
            plus, minus, ModuleMap(plus, minus, dp), ModuleMap(minus, plus, dm), J, check=False
        )

    def lift_to(self, ring: PolyRing) -> "TwoPeriodicComplex":
        plus = GradedFreeModule(ring, self.plus.twists)
        minus = GradedFreeModule(ring, self.minus.twists)
        lift = lambda rows: tuple(tuple(ring.lift(p) for p in r) for r in rows)
        J = self.base_ideal.lift_to(ring) if self.base_ideal is not None else None
        return TwoPeriodicComplex(
            plus,
            minus,
            ModuleMap(plus, minus, lift(self.d_plus.rows)),
            ModuleMap(minus, plus, lift(self.d_minus.rows)),
            J,
            check=False,
        )

    def to_presented(self, coefficients: Optional[PresentedModule] = None):
        """Componentwise E_(+/-) (x) G as cokernels, with J-relations adjoined."""
        return _tensor_coefficients(self, coefficients)

    def __repr__(self):
        return f"<2-periodic: E+={self.plus!r}, E-={self.minus!r}>"


def _merge_base(a: Optional[Ideal], b: Optional[Ideal]) -> Optional[Ideal]:
    if a is None:
        return b
    if b is None:
        return a
    if a.ring != b.ring:
        raise RingError("base ideals over different rings")
    return Ideal(a.ring, tuple(dict.fromkeys(a.gens + b.gens)))


def make_two_periodic(plus, minus, d_plus, d_minus, base_ideal=None) -> TwoPeriodicComplex:
    """Construct and verify a 2-periodic complex; rejects d o d != 0."""
    return TwoPeriodicComplex(plus, minus, d_plus, d_minus, base_ideal, check=True)


def zero_complex(ring: PolyRing) -> TwoPeriodicComplex:
    z = GradedFreeModule(ring, ())
    return TwoPeriodicComplex(z, z, ModuleMap.zero(z, z), ModuleMap.zero(z, z), check=False)


# -- bounded complexes and folding ---------------------------------------------


class BoundedComplex:
    """Finite cohomological complex: terms C^k and maps C^k -> C^(k+1)."""

    def __init__(self, ring: PolyRing, terms: dict, maps: dict, check=True):
        self.ring = ring
        self.terms = {k: m for k, m in terms.items() if m.rank}
        self.maps = {}
        for k, f in maps.items():
            if f is None or f.is_zero():
                continue
            self.maps[k] = f
        for k, f in self.maps.items():
            if f.source != self.term(k) or f.target != self.term(k + 1):
                raise ShapeError(f"map at degree {k} has the wrong shape")
        if check:
            for k in self.maps:
                if k + 1 in self.maps:
                    prod = mat_mul(self.maps[k + 1].rows, self.maps[k].rows, ring)
                    if any(not p.is_zero() for r in prod for p in r):
                        raise ShapeError(f"composite at degree {k} is nonzero")

    def term(self, k: int) -> GradedFreeModule:
        return self.terms.get(k, GradedFreeModule(self.ring, ()))

    def map_at(self, k: int) -> ModuleMap:
        f = self.maps.get(k)
        if f is not None:
            return f
        return ModuleMap.zero(self.term(k), self.term(k + 1))

    def support(self):
        ks = set(self.terms) | set(self.maps) | {k + 1 for k in self.maps}
        return sorted(ks)

    def tensor(self, other: "BoundedComplex") -> "BoundedComplex":
        """Total complex of the double complex, Koszul sign (-1)^i on 1 (x) d."""
        if self.ring != other.ring:
            raise RingError("mixed-ring tensor")
        ring = self.ring
        pairs = {}  # n -> ordered list of (i, j)
        for i in self.support():
            for j in other.support():
                if self.term(i).rank and other.term(j).rank:
                    pairs.setdefault(i + j, []).append((i, j))
        for n in pairs:
            pairs[n].sort()
        terms = {}
        for n, ps in pairs.items():
            twists = []
            for i, j in ps:
                for a in self.term(i).twists:
                    for b in other.term(j).twists:
                        twists.append(a + b)
            terms[n] = GradedFreeModule(ring, twists)
        maps = {}
        for n in sorted(pairs):
            if n + 1 not in pairs:
                target_ps = []
            else:
                target_ps = pairs[n + 1]
            if not target_ps:
                continue
            src = terms[n]
            tgt = terms[n + 1]
            blocks = []
            for ti, tj in target_ps:
                row = []
                for si, sj in pairs[n]:
                    r = self.term(ti).rank * other.term(tj).rank
                    c = self.term(si).rank * other.term(sj).rank
                    if (ti, tj) == (si + 1, sj):
                        row.append(kron(self.map_at(si).rows, identity_matrix(ring, other.term(sj).rank), ring))
                    elif (ti, tj) == (si, sj + 1):
                        sign = -1 if si % 2 else 1
                        blk = kron(identity_matrix(ring, self.term(si).rank), other.map_at(sj).rows, ring)
                        row.append(mat_neg(blk) if sign < 0 else blk)
                    else:
                        row.append(zero_matrix(ring, r, c))
                blocks.append(row)
            maps[n] = ModuleMap(src, tgt, block_matrix(blocks, ring))
        return BoundedComplex(ring, terms, maps)

    @classmethod
    def single(cls, module: GradedFreeModule, degree: int = 0) -> "BoundedComplex":
        return cls(module.ring, {degree: module}, {}, check=False)


def fold(complex_: BoundedComplex, base_ideal=None) -> TwoPeriodicComplex:
    """Collapse a bounded complex to even/odd parts, blocks in ascending index order."""
    ring = complex_.ring
    evens = [k for k in complex_.support() if k % 2 == 0 and complex_.term(k).rank]
    odds = [k for k in complex_.support() if k % 2 and complex_.term(k).rank]
    plus = GradedFreeModule(ring, tuple(a for k in evens for a in complex_.term(k).twists))
    minus = GradedFreeModule(ring, tuple(a for k in odds for a in complex_.term(k).twists))

    def assemble(src_idx, tgt_idx):
        src_rank = sum(complex_.term(k).rank for k in src_idx)
        tgt_rank = sum(complex_.term(k).rank for k in tgt_idx)
        if src_rank == 0 or tgt_rank == 0:
            return zero_matrix(ring, tgt_rank, src_rank)
        blocks = []
        for tk in tgt_idx:
            row = []
            for sk in src_idx:
                if tk == sk + 1 and sk in complex_.maps:
                    row.append(complex_.maps[sk].rows)
                else:
                    row.append(zero_matrix(ring, complex_.term(tk).rank, complex_.term(sk).rank))
            blocks.append(row)
        return block_matrix(blocks, ring)

    d_plus = ModuleMap(plus, minus, assemble(evens, odds))
    d_minus = ModuleMap(minus, plus, assemble(odds, evens))
    return TwoPeriodicComplex(plus, minus, d_plus, d_minus, base_ideal, check=True)


# -- tensor of 2-periodic complexes ----------------------------------------------


def tensor(e: TwoPeriodicComplex, f: TwoPeriodicComplex) -> TwoPeriodicComplex:
    """Tensor product with the standard block differentials and signs."""
    if e.ring != f.ring:
        raise RingError("ring mismatch")
    ring = e.ring
    J = _merge_base(e.base_ideal, f.base_ideal)

    def tens(a: GradedFreeModule, b: GradedFreeModule) -> GradedFreeModule:
        return GradedFreeModule(ring, tuple(x + y for x in a.twists for y in b.twists))

    plus = tens(e.plus, f.plus).direct_sum(tens(e.minus, f.minus))
    minus = tens(e.plus, f.minus).direct_sum(tens(e.minus, f.plus))
    idp = lambda m: identity_matrix(ring, m.rank)
    dp = block_matrix(
        [
            [kron(idp(e.plus), f.d_plus.rows, ring), kron(e.d_minus.rows, idp(f.minus), ring)],
            [mat_neg(kron(e.d_plus.rows, idp(f.plus), ring)), kron(idp(e.minus), f.d_minus.rows, ring)],
        ],
        ring,
    )
    dm = block_matrix(
        [
            [kron(idp(e.plus), f.d_minus.rows, ring), mat_neg(kron(e.d_minus.rows, idp(f.plus), ring))],
            [kron(e.d_plus.rows, idp(f.minus), ring), kron(idp(e.minus), f.d_plus.rows, ring)],
        ],
        ring,
    )
    return TwoPeriodicComplex(
        plus, minus, ModuleMap(plus, minus, dp), ModuleMap(minus, plus, dm), J, check=False
    )


def shift(e: TwoPeriodicComplex) -> TwoPeriodicComplex:
    return e.shift()


# -- chain maps and cones ---------------------------------------------------------


class PeriodicChainMap:
    """Chain map of 2-periodic complexes; commutation is verified mod the base ideal."""

    __slots__ = ("source", "target", "f_plus", "f_minus")

    def __init__(self, source, target, f_plus, f_minus, check=True):
        if f_plus.source != source.plus or f_plus.target != target.plus:
            raise ShapeError("f_plus shape mismatch")
        if f_minus.source != source.minus or f_minus.target != target.minus:
            raise ShapeError("f_minus shape mismatch")
        self.source = source
        self.target = target
        self.f_plus = f_plus
        self.f_minus = f_minus
        if check:
            ring = source.ring
            J = _merge_base(source.base_ideal, target.base_ideal)
            lhs = mat_mul(target.d_plus.rows, f_plus.rows, ring)
            rhs = mat_mul(f_minus.rows, source.d_plus.rows, ring)
            diff = _nf_matrix(tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(lhs, rhs)), J)
            if any(not p.is_zero() for r in diff for p in r):
                raise ShapeError("not a chain map (even square fails)")
            lhs = mat_mul(target.d_minus.rows, f_minus.rows, ring)
            rhs = mat_mul(f_plus.rows, source.d_minus.rows, ring)
            diff = _nf_matrix(tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(lhs, rhs)), J)
            if any(not p.is_zero() for r in diff for p in r):
                raise ShapeError("not a chain map (odd square fails)")

    @classmethod
    def identity(cls, e: TwoPeriodicComplex) -> "PeriodicChainMap":
        return cls(e, e, ModuleMap.identity(e.plus), ModuleMap.identity(e.minus), check=False)

    @classmethod
    def zero(cls, source, target) -> "PeriodicChainMap":
        return cls(
            source,
            target,
            ModuleMap.zero(source.plus, target.plus),
            ModuleMap.zero(source.minus, target.minus),
            check=False,
        )

    @classmethod
    def scalar(cls, e: TwoPeriodicComplex, p) -> "PeriodicChainMap":
        return cls(
            e,
            e,
            ModuleMap(e.plus, e.plus, scalar_matrix(e.ring, e.plus.rank, p)),
            ModuleMap(e.minus, e.minus, scalar_matrix(e.ring, e.minus.rank, p)),
            check=False,
        )


class ConeData:
    """Cone(f) with the degreewise-split witnesses B -> Cone -> A[1].

    shifted_source is A[1] with its generators twisted by the degree of f,
    which is what the projection actually hits; untwisted when f is ungraded.
    """

    __slots__ = ("cone", "include", "project", "shifted_source")

    def __init__(self, cone, include, project, shifted_source):
        self.cone = cone
        self.include = include
        self.project = project
        self.shifted_source = shifted_source


def cone(f: PeriodicChainMap) -> ConeData:
    """Cone(f)_pm = B_pm (+) A_mp, differential [[d_B, f], [0, -d_A]]."""
    a, b = f.source, f.target
    fdeg = f.f_plus.degree if f.f_plus.degree == f.f_minus.degree else None
    if fdeg:
        a = a.twist_by(fdeg)
    ring = a.ring
    J = _merge_base(a.base_ideal, b.base_ideal)
    plus = b.plus.direct_sum(a.minus)
    minus = b.minus.direct_sum(a.plus)
    dp = block_matrix(
        [
            [b.d_plus.rows, f.f_minus.rows],
            [zero_matrix(ring, a.plus.rank, b.plus.rank), mat_neg(a.d_minus.rows)],
        ],
        ring,
    )
    dm = block_matrix(
        [
            [b.d_minus.rows, f.f_plus.rows],
            [zero_matrix(ring, a.minus.rank, b.minus.rank), mat_neg(a.d_plus.rows)],
        ],
        ring,
    )
    c = TwoPeriodicComplex(
        plus, minus, ModuleMap(plus, minus, dp), ModuleMap(minus, plus, dm), J, check=True
    )
    shifted = a.shift()
    inc = PeriodicChainMap(
        b,
        c,
        ModuleMap(
            b.plus,
            plus,
            block_matrix([[identity_matrix(ring, b.plus.rank)], [zero_matrix(ring, a.minus.rank, b.plus.rank)]], ring),
        ),
        ModuleMap(
            b.minus,
            minus,
            block_matrix([[identity_matrix(ring, b.minus.rank)], [zero_matrix(ring, a.plus.rank, b.minus.rank)]], ring),
        ),
        check=True,
    )
    proj = PeriodicChainMap(
        c,
        shifted,
        ModuleMap(
            plus,
            shifted.plus,
            block_matrix([[zero_matrix(ring, a.minus.rank, b.plus.rank), identity_matrix(ring, a.minus.rank)]], ring),
        ),
        ModuleMap(
            minus,
            shifted.minus,
            block_matrix([[zero_matrix(ring, a.plus.rank, b.minus.rank), identity_matrix(ring, a.plus.rank)]], ring),
        ),
        check=True,
    )
    return ConeData(c, inc, proj, shifted)


# -- presented-level periodic complexes and homology -------------------------------


class PeriodicModuleComplex:
    """2-periodic complex whose terms are presented modules (cokernel form).

    Differentials are matrices in generator coordinates; composites and
    well-definedness hold modulo the relation spans.
    """

    __slots__ = ("plus", "minus", "d_plus", "d_minus")

    def __init__(self, plus: PresentedModule, minus: PresentedModule, d_plus: Matrix, d_minus: Matrix):
        self.plus = plus
        self.minus = minus
        self.d_plus = d_plus
        self.d_minus = d_minus
        if len(d_plus) != minus.ngens or any(len(r) != plus.ngens for r in d_plus):
            raise ShapeError("d_plus has the wrong shape")
        if len(d_minus) != plus.ngens or any(len(r) != minus.ngens for r in d_minus):
            raise ShapeError("d_minus has the wrong shape")

    @property
    def ring(self) -> PolyRing:
        return self.plus.ring

    def verify(self):
        """Check well-definedness and d o d = 0 in the quotients; raises on failure."""
        ring = self.ring
        for name, mat, src, tgt in (
            ("d_plus", self.d_plus, self.plus, self.minus),
            ("d_minus", self.d_minus, self.minus, self.plus),
        ):
            for r in src.rels:
                img = _apply_matrix(mat, r, ring)
                if not tgt.element_is_zero(img):
                    raise ShapeError(f"{name} does not preserve relations")
        for name, first, then, tgt in (
            ("d_minus o d_plus", self.d_plus, self.d_minus, self.plus),
            ("d_plus o d_minus", self.d_minus, self.d_plus, self.minus),
        ):
            prod = mat_mul(then, first, ring)
            for col in mat_cols(prod):
                if not tgt.element_is_zero(col):
                    raise ShapeError(f"{name} is nonzero in the quotient")

    def homology(self):
        """(H_+, H_-) as cokernel-form presented modules."""
        h_plus = _homology_at(self.plus, self.minus, self.d_plus, self.d_minus)
        h_minus = _homology_at(self.minus, self.plus, self.d_minus, self.d_plus)
        return h_plus, h_minus

    def tensor_fold_of(self, poly) -> "PeriodicModuleComplex":
        """Tensor with the fold of [R --poly--> R] (two-term resolution in degrees -1, 0)."""
        ring = self.ring
        plus = self.plus.direct_sum(self.minus)
        minus = self.plus.direct_sum(self.minus)
        np, nm = self.plus.ngens, self.minus.ngens
        dp = block_matrix(
            [
                [zero_matrix(ring, np, np), self.d_minus],
                [mat_neg(self.d_plus), scalar_matrix(ring, nm, poly)],
            ],
            ring,
        )
        dm = block_matrix(
            [
                [scalar_matrix(ring, np, poly), mat_neg(self.d_minus)],
                [self.d_plus, zero_matrix(ring, nm, nm)],
            ],
            ring,
        )
        return PeriodicModuleComplex(plus, minus, dp, dm)

    def map_ring(self, ring: PolyRing) -> "PeriodicModuleComplex":
        lift = lambda rows: tuple(tuple(ring.lift(p) for p in r) for r in rows)
        return PeriodicModuleComplex(
            self.plus.map_ring(ring),
            self.minus.map_ring(ring),
            lift(self.d_plus),
            lift(self.d_minus),
        )

    def shift(self) -> "PeriodicModuleComplex":
        return PeriodicModuleComplex(self.minus, self.plus, mat_neg(self.d_minus), mat_neg(self.d_plus))


def _apply_matrix(mat: Matrix, coeffs, ring: PolyRing):
    rows, cols = mat_shape(mat)
    out = []
    for i in range(rows):
        acc = ring.zero()
        for j in range(cols):
            if mat[i][j].terms and coeffs[j].terms:
                acc = acc + mat[i][j] * coeffs[j]
        out.append(acc)
    return tuple(out)


def _homology_at(
    src: PresentedModule, tgt: PresentedModule, d_out: Matrix, d_in: Matrix, n_in=None
) -> PresentedModule:
    """ker(d_out)/im(d_in) at the src spot, re-presented as a cokernel.

    The kernel preimage is read off the syzygies of [d_out | rels(tgt)]:
    the coefficient block over the d_out columns generates
    {u : d_out u in rel-span(tgt)}.  n_in is the column count of d_in
    (defaults to tgt.ngens, the 2-periodic case).
    """
    ring = src.ring
    n_src = src.ngens
    out_cols = [vec_from_polys(c) for c in matrix_columns(d_out, n_src)]
    rel_cols = [vec_from_polys(r) for r in tgt.rels]
    vectors = out_cols + rel_cols
    syz = syzygies_of_vectors(ring, tgt.ngens, vectors)
    kernel = []
    seen = set()
    for s in syz:
        coeffs = vec_to_polys(ring, len(vectors), s)
        u = coeffs[:n_src]
        if any(not p.is_zero() for p in u) and u not in seen:
            seen.add(u)
            kernel.append(u)
    if n_in is None:
        n_in = tgt.ngens
    img = [tuple(c) for c in matrix_columns(d_in, n_in)] + [tuple(r) for r in src.rels]
    twists = src.gen_twists()
    ungraded = twists is None
    ambient = GradedFreeModule(ring, twists if twists is not None else (0,) * n_src)
    h = subquotient(ambient, kernel, [v for v in img if any(not p.is_zero() for p in v)])
    return _as_cokernel(h, force_ungraded=ungraded)


def _as_cokernel(m: PresentedModule, force_ungraded=False) -> PresentedModule:
    """Forget the ambient embedding: formal free module on the generators."""
    from .modules import prune_presentation

    twists = m.gen_twists()
    free = GradedFreeModule(m.ring, twists if twists is not None else (0,) * m.ngens)
    out = PresentedModule.cokernel(free, m.rels)
    if twists is None or force_ungraded:
        out.mark_ungraded()
    return prune_presentation(out)


def _mark_ungraded(m: PresentedModule) -> PresentedModule:
    m.mark_ungraded()
    return m


def _tensor_coefficients(e: TwoPeriodicComplex, g: Optional[PresentedModule]) -> PeriodicModuleComplex:
    ring = e.ring
    J = e.base_ideal

    def component(free: GradedFreeModule) -> PresentedModule:
        if g is None:
            mod = PresentedModule.free_module(free)
            gt = free.twists
            rels = []
        else:
            if g.ring != ring:
                raise RingError("coefficient module over a different ring")
            g_tw = g.gen_twists()
            gt = None
            if g_tw is not None:
                gt = tuple(a + b for a in free.twists for b in g_tw)
            n = free.rank * g.ngens
            rels = []
            zero = ring.zero()
            for i in range(free.rank):
                for r in g.rels:
                    col = [zero] * n
                    for j, p in enumerate(r):
                        col[i * g.ngens + j] = p
                    rels.append(tuple(col))
            mod = PresentedModule.cokernel(
                GradedFreeModule(ring, gt if gt is not None else (0,) * n), rels
            )
            if gt is None:
                mod = _mark_ungraded(mod)
        if J is not None:
            extra = []
            zero = ring.zero()
            n = mod.ngens
            for q in J.gens:
                for i in range(n):
                    extra.append(tuple(q if k == i else zero for k in range(n)))
            mod = mod.with_extra_relations(extra)
        return mod

    plus = component(e.plus)
    minus = component(e.minus)
    if g is None:
        dp, dm = e.d_plus.rows, e.d_minus.rows
    else:
        ig = identity_matrix(ring, g.ngens)
        dp = kron(e.d_plus.rows, ig, ring)
        dm = kron(e.d_minus.rows, ig, ring)
    if (e.d_plus.degree is None or e.d_minus.degree is None) and not (
        e.plus.rank == 0 and e.minus.rank == 0
    ):
        plus = _mark_ungraded(plus)
        minus = _mark_ungraded(minus)
    return PeriodicModuleComplex(plus, minus, dp, dm)


def homology(e: TwoPeriodicComplex, coefficients: Optional[PresentedModule] = None):
    """(H_+, H_-) = (ker d_+/im d_-, ker d_-/im d_+), with optional coefficients."""
    return e.to_presented(coefficients).homology()


def bounded_homology(complex_: BoundedComplex, coefficients: Optional[PresentedModule] = None):
    """H^k(C (x) G) for every k in the support, as cokernel-form modules.

    The brute-force side of the folding oracle: the fold's class must equal
    the alternating sum over these.
    """
    ring = complex_.ring
    g = coefficients

    def component(k):
        free = complex_.term(k)
        if g is None:
            return PresentedModule.free_module(free), free.rank
        g_tw = g.gen_twists()
        n = free.rank * g.ngens
        gt = None
        if g_tw is not None:
            gt = tuple(a + b for a in free.twists for b in g_tw)
        zero = ring.zero()
        rels = []
        for i in range(free.rank):
            for r in g.rels:
                col = [zero] * n
                for j, p in enumerate(r):
                    col[i * g.ngens + j] = p
                rels.append(tuple(col))
        mod = PresentedModule.cokernel(GradedFreeModule(ring, gt if gt is not None else (0,) * n), rels)
        if gt is None:
            mod.mark_ungraded()
        return mod, n

    def mapped(k):
        rows = complex_.map_at(k).rows
        if g is None:
            return rows
        return kron(rows, identity_matrix(ring, g.ngens), ring)

    out = {}
    for k in complex_.support():
        src, _ = component(k)
        tgt, _ = component(k + 1)
        prev, _ = component(k - 1)
        out[k] = _homology_at(src, tgt, mapped(k), mapped(k - 1), n_in=prev.ngens)
    return out


# -- contraction checks --------------------------------------------------------------


def check_contraction(e: TwoPeriodicComplex, h: Homotopy) -> bool:
    """True iff d h + h d = id on both parities, mod the base ideal."""
    ring = e.ring
    J = e.base_ideal
    idp = identity_matrix(ring, e.plus.rank)
    idm = identity_matrix(ring, e.minus.rank)
    lhs_plus = mat_mul(e.d_minus.rows, h.h_plus.rows, ring)
    lhs_plus = tuple(
        tuple(a + b for a, b in zip(r1, r2))
        for r1, r2 in zip(lhs_plus, mat_mul(h.h_minus.rows, e.d_plus.rows, ring))
    )
    diff = tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(lhs_plus, idp))
    if _first_nonzero_entry(diff, J) is not None:
        return False
    lhs_minus = mat_mul(e.d_plus.rows, h.h_minus.rows, ring)
    lhs_minus = tuple(
        tuple(a + b for a, b in zip(r1, r2))
        for r1, r2 in zip(lhs_minus, mat_mul(h.h_plus.rows, e.d_minus.rows, ring))
    )
    diff = tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(lhs_minus, idm))
    return _first_nonzero_entry(diff, J) is None


def tensor_contraction(e: TwoPeriodicComplex, h: Homotopy, f: TwoPeriodicComplex) -> Homotopy:
    """Contraction of E (x) F built blockwise from a contraction of E."""
    if not check_contraction(e, h):
        raise ShapeError("input homotopy fails the contraction identity")
    ef = tensor(e, f)
    ring = e.ring
    idp = lambda m: identity_matrix(ring, m.rank)
    hp = block_matrix(
        [
            [kron(idp(e.plus), f.d_plus.rows, ring), kron(h.h_minus.rows, idp(f.minus), ring)],
            [mat_neg(kron(h.h_plus.rows, idp(f.plus), ring)), kron(idp(e.minus), f.d_minus.rows, ring)],
        ],
        ring,
    )
    hm = block_matrix(
        [
            [kron(idp(e.plus), f.d_minus.rows, ring), mat_neg(kron(h.h_minus.rows, idp(f.plus), ring))],
            [kron(h.h_plus.rows, idp(f.minus), ring), kron(idp(e.minus), f.d_plus.rows, ring)],
        ],
        ring,
    )
    return Homotopy(
        ModuleMap(ef.plus, ef.minus, hp),
        ModuleMap(ef.minus, ef.plus, hm),
    )


def is_cohomologically_acyclic_off(e, ideal: Ideal, coefficients=None) -> bool:
    from .modules import is_supported_on

    h_plus, h_minus = homology(e, coefficients)
    return is_supported_on(h_plus, ideal) and is_supported_on(h_minus, ideal)

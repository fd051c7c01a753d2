"""Graded free modules, homogeneous maps, syzygies, presented subquotients.

A PresentedModule is a subquotient span(gens)/span(rels) of a free module;
all series/length computations go through its cokernel form (generators
plus a relation matrix in generator coordinates), per the one-canonical-form
rule.  INFINITE is a value, not an error: classes only need finiteness
after localizing to the support.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import hilbert
from .groebner import (
    ModuleGB,
    TrackedSpan,
    module_groebner,
    member_with_lift,
    syzygies_of_vectors,
    vec_from_polys,
    vec_is_zero,
    vec_to_polys,
)
from .hilbert import IntLaurent
from .rings import Ideal, PolyRing, Polynomial, RingError


class _Infinite:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"


INFINITE = _Infinite()


class ShapeError(ValueError):
    """Incompatible module/matrix shapes or gradings."""


class UngradedError(ValueError):
    """Graded operation on data that is not graded."""


# -- matrices over a ring -----------------------------------------------------

Matrix = tuple  # tuple of rows, each a tuple of Polynomial


def zero_matrix(ring: PolyRing, rows: int, cols: int) -> Matrix:
    z = ring.zero()
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def identity_matrix(ring: PolyRing, n: int) -> Matrix:
    z, o = ring.zero(), ring.one()
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def scalar_matrix(ring: PolyRing, n: int, p: Polynomial) -> Matrix:
    z = ring.zero()
    return tuple(tuple(p if i == j else z for j in range(n)) for i in range(n))


def mat_shape(m: Matrix):
    return (len(m), len(m[0]) if m else 0)


def mat_mul(a: Matrix, b: Matrix, ring: PolyRing) -> Matrix:
    ra = len(a)
    rb = len(b)
    cb = len(b[0]) if rb else 0
    ca = len(a[0]) if ra else rb  # empty matrices have ambiguous column counts
    if ca != rb:
        raise ShapeError(f"matrix product shape mismatch {ra}x{ca} * {rb}x{cb}")
    if ra == 0 or cb == 0:
        return tuple(() for _ in range(ra)) if cb == 0 else tuple()
    out = []
    for i in range(ra):
        row = []
        for j in range(cb):
            acc = ring.zero()
            for k in range(ca):
                if a[i][k].terms and b[k][j].terms:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in a)


def mat_scale(a: Matrix, c) -> Matrix:
    return tuple(tuple(x * c for x in row) for row in a)


def mat_cols(a: Matrix) -> list:
    rows, cols = mat_shape(a)
    return [tuple(a[i][j] for i in range(rows)) for j in range(cols)]


def matrix_columns(a: Matrix, ncols: int) -> list:
    """Columns of a matrix whose column count survives zero-row degeneracy."""
    if len(a) == 0:
        return [() for _ in range(ncols)]
    if any(len(r) != ncols for r in a):
        raise ShapeError("column count mismatch")
    return mat_cols(a)


def mat_from_cols(cols: Sequence, rows: int, ring: PolyRing) -> Matrix:
    if not cols:
        return tuple(() for _ in range(rows))
    return tuple(tuple(col[i] for col in cols) for i in range(rows))


def kron(a: Matrix, b: Matrix, ring: PolyRing) -> Matrix:
    """Kronecker product, row-major blocks of a scaled by entries of b swapped:
    index (i1,i2),(j1,j2) -> a[i1][j1]*b[i2][j2]."""
    ra, ca = mat_shape(a)
    rb, cb = mat_shape(b)
    out = []
    for i1 in range(ra):
        for i2 in range(rb):
            row = []
            for j1 in range(ca):
                for j2 in range(cb):
                    row.append(a[i1][j1] * b[i2][j2])
            out.append(tuple(row))
    if not out:
        return tuple(() for _ in range(ra * rb))
    return tuple(out)


def block_matrix(blocks, ring: PolyRing) -> Matrix:
    """Assemble [[A, B], [C, D], ...] with consistent block shapes."""
    out = []
    for block_row in blocks:
        if not block_row:
            continue
        heights = {mat_shape(b)[0] for b in block_row}
        if len(heights) != 1:
            raise ShapeError("ragged block row")
        h = heights.pop()
        for i in range(h):
            row = []
            for b in block_row:
                row.extend(b[i])
            out.append(tuple(row))
    return tuple(out)


# -- free modules and maps ----------------------------------------------------


class GradedFreeModule:
    """Twisted free module: twists [a_i] means sum of R(-a_i), generator i in degree a_i."""

    __slots__ = ("ring", "twists")

    def __init__(self, ring: PolyRing, twists: Iterable[int]):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "twists", tuple(int(a) for a in twists))

    def __setattr__(self, *a):
        raise AttributeError("GradedFreeModule is immutable")

    @property
    def rank(self) -> int:
        return len(self.twists)

    def is_zero(self) -> bool:
        return not self.twists

    def direct_sum(self, other: "GradedFreeModule") -> "GradedFreeModule":
        if self.ring != other.ring:
            raise RingError("mixed-ring direct sum")
        return GradedFreeModule(self.ring, self.twists + other.twists)

    def twist_by(self, d: int) -> "GradedFreeModule":
        return GradedFreeModule(self.ring, tuple(a + d for a in self.twists))

    def dual(self) -> "GradedFreeModule":
        return GradedFreeModule(self.ring, tuple(-a for a in self.twists))

    def __eq__(self, other):
        return (
            isinstance(other, GradedFreeModule)
            and self.ring == other.ring
            and self.twists == other.twists
        )

    def __hash__(self):
        return hash((self.ring, self.twists))

    def __repr__(self):
        if not self.twists:
            return "0"
        return " (+) ".join(f"R({-a})" if a else "R" for a in self.twists)


def _vector_degree(twists, v):
    degs = set()
    for a, p in zip(twists, v):
        if p.is_zero():
            continue
        d = p.homogeneous_degree()
        if d is None:
            return None
        degs.add(d + a)
    if not degs:
        return 0
    if len(degs) > 1:
        return None
    return degs.pop()


class ModuleMap:
    """Matrix of polynomials between graded free modules, rows = target coordinates.

    The declared internal degree makes entry (i, j) homogeneous of weighted
    degree  degree + twist_source(j) - twist_target(i)  (or zero).  Passing
    degree=None skips the check and marks the map ungraded.
    """

    __slots__ = ("source", "target", "rows", "degree")

    def __init__(self, source, target, rows, degree="infer"):
        rows = tuple(tuple(p for p in r) for r in rows)
        if len(rows) != target.rank or any(len(r) != source.rank for r in rows):
            raise ShapeError(
                f"matrix is {len(rows)}x{len(rows[0]) if rows else 0}, "
                f"need {target.rank}x{source.rank}"
            )
        if source.ring != target.ring:
            raise RingError("mixed-ring map")
        ring = source.ring
        for r in rows:
            for p in r:
                if p.ring != ring:
                    raise RingError("entry from a different ring")
        if degree == "infer":
            degree = _infer_degree(source.twists, target.twists, rows)
        elif degree is not None:
            d = int(degree)
            for i, r in enumerate(rows):
                for j, p in enumerate(r):
                    if p.is_zero():
                        continue
                    h = p.homogeneous_degree()
                    want = d + source.twists[j] - target.twists[i]
                    if h is None or h != want:
                        raise ShapeError(
                            f"entry ({i},{j}) = {p} is not homogeneous of degree {want}"
                        )
            degree = d
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "degree", degree)

    def __setattr__(self, *a):
        raise AttributeError("ModuleMap is immutable")

    @property
    def ring(self) -> PolyRing:
        return self.source.ring

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self.rows for p in r)

    def columns(self) -> list:
        return mat_cols(self.rows)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other (apply other first)."""
        if other.target != self.source:
            raise ShapeError("composition shape mismatch")
        deg = None
        if self.degree is not None and other.degree is not None:
            deg = self.degree + other.degree
        return ModuleMap(other.source, self.target, mat_mul(self.rows, other.rows, self.ring), deg)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if self.source != other.source or self.target != other.target:
            raise ShapeError("sum shape mismatch")
        deg = self.degree if self.degree == other.degree else "infer"
        return ModuleMap(self.source, self.target, mat_add(self.rows, other.rows), deg)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, mat_neg(self.rows), self.degree)

    def scale(self, p) -> "ModuleMap":
        return ModuleMap(self.source, self.target, mat_scale(self.rows, p), "infer")

    def __eq__(self, other):
        return (
            isinstance(other, ModuleMap)
            and self.source == other.source
            and self.target == other.target
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.source, self.target, self.rows))

    @classmethod
    def identity(cls, module: GradedFreeModule) -> "ModuleMap":
        return cls(module, module, identity_matrix(module.ring, module.rank), 0)

    @classmethod
    def zero(cls, source: GradedFreeModule, target: GradedFreeModule) -> "ModuleMap":
        return cls(source, target, zero_matrix(source.ring, target.rank, source.rank), 0)

    def __repr__(self):
        body = "; ".join(", ".join(str(p) for p in r) for r in self.rows)
        return f"[{body}]"


def _infer_degree(src_twists, tgt_twists, rows):
    degree = None
    for i, r in enumerate(rows):
        for j, p in enumerate(r):
            if p.is_zero():
                continue
            h = p.homogeneous_degree()
            if h is None:
                return None
            d = h - src_twists[j] + tgt_twists[i]
            if degree is None:
                degree = d
            elif degree != d:
                return None
    return 0 if degree is None else degree


# -- presented modules ---------------------------------------------------------


class PresentedModule:
    """Subquotient span(gens)/span(rels) of a free module.

    gens are ambient vectors; rels live in generator coordinates.  The
    cokernel form used by all invariants is (gen_twists, rels): syzygies
    among the generators must already be folded into rels (the subquotient
    constructor does this).
    """

    __slots__ = ("ambient", "gens", "rels", "_gen_twists", "_rel_gb")

    def __init__(self, ambient: GradedFreeModule, gens, rels):
        self.ambient = ambient
        self.gens = tuple(tuple(p for p in g) for g in gens)
        self.rels = tuple(tuple(p for p in r) for r in rels)
        for g in self.gens:
            if len(g) != ambient.rank:
                raise ShapeError("generator length != ambient rank")
        for r in self.rels:
            if len(r) != len(self.gens):
                raise ShapeError("relation length != generator count")
        self._gen_twists = False  # not yet computed
        self._rel_gb = None

    @property
    def ring(self) -> PolyRing:
        return self.ambient.ring

    @property
    def ngens(self) -> int:
        return len(self.gens)

    @classmethod
    def cokernel(cls, free: GradedFreeModule, rel_columns) -> "PresentedModule":
        """coker(matrix columns -> free); generators are the free basis."""
        ring = free.ring
        basis = [
            tuple(ring.one() if i == j else ring.zero() for i in range(free.rank))
            for j in range(free.rank)
        ]
        return cls(free, basis, tuple(tuple(c) for c in rel_columns))

    @classmethod
    def free_module(cls, free: GradedFreeModule) -> "PresentedModule":
        return cls.cokernel(free, ())

    @classmethod
    def zero(cls, ring: PolyRing) -> "PresentedModule":
        return cls(GradedFreeModule(ring, ()), (), ())

    @classmethod
    def quotient_ring(cls, ideal: Ideal) -> "PresentedModule":
        """R/I as a module: one generator in degree 0, relations = generators of I."""
        free = GradedFreeModule(ideal.ring, (0,))
        return cls.cokernel(free, tuple((g,) for g in ideal.gens))

    def mark_ungraded(self):
        """Disable the graded structure (used when it would carry wrong twists)."""
        self._gen_twists = None

    def gen_twists(self):
        """Homogeneous degrees of the generators, or None."""
        if self._gen_twists is False:
            degs = []
            ok = True
            for g in self.gens:
                d = _vector_degree(self.ambient.twists, g)
                if d is None:
                    ok = False
                    break
                degs.append(d)
            self._gen_twists = tuple(degs) if ok else None
        return self._gen_twists

    def rel_gb(self) -> ModuleGB:
        if self._rel_gb is None:
            vecs = [vec_from_polys(r) for r in self.rels]
            self._rel_gb = module_groebner(self.ring, self.ngens, vecs)
        return self._rel_gb

    def reduce(self, coeffs: Sequence[Polynomial]) -> tuple:
        """Normal form of an element given in generator coordinates."""
        rem = self.rel_gb().normal_form(vec_from_polys(coeffs))
        return vec_to_polys(self.ring, self.ngens, rem)

    def element_is_zero(self, coeffs: Sequence[Polynomial]) -> bool:
        return vec_is_zero(self.rel_gb().normal_form(vec_from_polys(coeffs)))

    def is_zero(self) -> bool:
        ring = self.ring
        for j in range(self.ngens):
            e = tuple(ring.one() if i == j else ring.zero() for i in range(self.ngens))
            if not self.element_is_zero(e):
                return False
        return True

    def direct_sum(self, other: "PresentedModule") -> "PresentedModule":
        if self.ring != other.ring:
            raise RingError("mixed-ring direct sum")
        amb = self.ambient.direct_sum(other.ambient)
        z1 = tuple(self.ring.zero() for _ in range(other.ambient.rank))
        z2 = tuple(self.ring.zero() for _ in range(self.ambient.rank))
        gens = [g + z1 for g in self.gens] + [z2 + g for g in other.gens]
        zr1 = tuple(self.ring.zero() for _ in range(other.ngens))
        zr2 = tuple(self.ring.zero() for _ in range(self.ngens))
        rels = [r + zr1 for r in self.rels] + [zr2 + r for r in other.rels]
        return PresentedModule(amb, gens, rels)

    def with_extra_relations(self, extra) -> "PresentedModule":
        return PresentedModule(self.ambient, self.gens, self.rels + tuple(extra))

    def map_ring(self, ring: PolyRing) -> "PresentedModule":
        """Lift every polynomial into a larger ring (variables matched by name)."""
        amb = GradedFreeModule(ring, self.ambient.twists)
        gens = [tuple(ring.lift(p) for p in g) for g in self.gens]
        rels = [tuple(ring.lift(p) for p in r) for r in self.rels]
        return PresentedModule(amb, gens, rels)

    def __repr__(self):
        return f"<module: {self.ngens} gens, {len(self.rels)} rels over {self.ring}>"


# -- the spec operations --------------------------------------------------------


def syzygies(m: ModuleMap) -> list:
    """Generators of ker(m) as vectors in the source module."""
    cols = [vec_from_polys(c) for c in m.columns()]
    syz = syzygies_of_vectors(m.ring, m.target.rank, cols)
    return [vec_to_polys(m.ring, m.source.rank, s) for s in syz]


def subquotient(ambient: GradedFreeModule, ker_gens, img_gens) -> PresentedModule:
    """(span ker_gens)/(span img_gens); img must lie inside the kernel span."""
    ring = ambient.ring
    ker_gens = [tuple(v) for v in ker_gens]
    img_gens = [tuple(v) for v in img_gens]
    ker_vecs = [vec_from_polys(v) for v in ker_gens]
    rels = []
    if img_gens:
        span = TrackedSpan(ring, ambient.rank, ker_vecs)
        for v in img_gens:
            lift = span.lift(vec_from_polys(v))
            if lift is None:
                raise ShapeError("image not inside kernel")
            rels.append(vec_to_polys(ring, len(ker_gens), lift))
    for s in syzygies_of_vectors(ring, ambient.rank, ker_vecs):
        rels.append(vec_to_polys(ring, len(ker_gens), s))
    return PresentedModule(ambient, ker_gens, rels)


class HilbertSeries:
    """N(t) / prod(1 - t^w_i) with integer Laurent numerator N."""

    __slots__ = ("numerator", "weights")

    def __init__(self, numerator: IntLaurent, weights):
        self.numerator = numerator
        self.weights = tuple(weights)

    def _check(self, other):
        if self.weights != other.weights:
            raise ShapeError("Hilbert series over different gradings")

    def __add__(self, other):
        self._check(other)
        return HilbertSeries(self.numerator + other.numerator, self.weights)

    def __sub__(self, other):
        self._check(other)
        return HilbertSeries(self.numerator - other.numerator, self.weights)

    def __eq__(self, other):
        return (
            isinstance(other, HilbertSeries)
            and self.weights == other.weights
            and self.numerator == other.numerator
        )

    def __hash__(self):
        return hash((self.numerator, self.weights))

    def reduced(self):
        """(numerator, leftover weights) after cancelling (1 - t^w) factors."""
        num = self.numerator
        left = []
        for w in self.weights:
            q = num.exact_div(IntLaurent.one_minus_t(w))
            if q is None:
                left.append(w)
            else:
                num = q
        return num, tuple(left)

    def coefficients(self, max_degree: int):
        return hilbert.series_coefficients(self.numerator, self.weights, max_degree)

    def __repr__(self):
        den = "".join(f"(1-t^{w})" if w != 1 else "(1-t)" for w in self.weights)
        return f"({self.numerator}) / {den or '1'}"


def _staircase(module: PresentedModule):
    """Minimal leading-term monomials of the relation module, per generator."""
    gb = module.rel_gb()
    per_pos = {i: [] for i in range(module.ngens)}
    for pos, mono, _ in gb.elements:
        per_pos[pos].append(mono)
    return {i: hilbert.minimalize_monomials(ms) for i, ms in per_pos.items()}


def hilbert_series(module: PresentedModule) -> HilbertSeries:
    """Graded dimension series of the cokernel form, via the standard-monomial staircase."""
    ring = module.ring
    if ring.deformation_vars:
        raise UngradedError("ungraded deformation parameter: specialize first")
    twists = module.gen_twists()
    if twists is None:
        raise UngradedError("inhomogeneous generators: no graded structure")
    for r in module.rels:
        if _vector_degree(twists, r) is None:
            raise UngradedError("inhomogeneous presentation: no graded structure")
    stair = _staircase(module)
    total = IntLaurent({})
    for i in range(module.ngens):
        n_i = hilbert.quotient_numerator(ring.weights, stair[i])
        total = total + n_i.shift(twists[i])
    return HilbertSeries(total, ring.weights)


def length(module: PresentedModule):
    """Q-dimension of the module, or INFINITE."""
    stair = _staircase(module)
    total = 0
    for i in range(module.ngens):
        c = hilbert.count_standard_monomials(module.ring.nvars, stair[i])
        if c is None:
            return INFINITE
        total += c
    return total


def annihilator(module: PresentedModule) -> Ideal:
    """{r : r * M = 0}, intersecting the per-generator quotient ideals."""
    ring = module.ring
    if module.ngens == 0:
        return Ideal(ring, (ring.one(),))
    rel_vecs = [vec_from_polys(r) for r in module.rels]
    ann = None
    for j in range(module.ngens):
        e = {j: {(0,) * ring.nvars: Fraction(1)}}
        syz = syzygies_of_vectors(ring, module.ngens, [e] + rel_vecs)
        quots = []
        for s in syz:
            first = vec_to_polys(ring, 1 + len(rel_vecs), s)[0]
            if not first.is_zero():
                quots.append(first)
        q_ideal = Ideal(ring, tuple(quots))
        ann = q_ideal if ann is None else _intersect_ideals(ann, q_ideal)
        if ann.is_zero():
            return ann
    return ann


def _intersect_ideals(a: Ideal, b: Ideal) -> Ideal:
    ring = a.ring
    one = ring.one()
    zero = ring.zero()
    vecs = [vec_from_polys((one, one))]
    vecs += [vec_from_polys((f, zero)) for f in a.groebner_basis()]
    vecs += [vec_from_polys((zero, g)) for g in b.groebner_basis()]
    syz = syzygies_of_vectors(ring, 2, vecs)
    gens = []
    for s in syz:
        c0 = vec_to_polys(ring, len(vecs), s)[0]
        if not c0.is_zero():
            gens.append(c0)
    return Ideal(ring, tuple(gens))


def is_supported_on(module: PresentedModule, ideal: Ideal) -> bool:
    """True iff every generator of the ideal lies in the radical of Ann(M)."""
    from .rings import radical_membership

    ann = annihilator(module)
    return all(radical_membership(g, ann) for g in ideal.gens)


def prune_presentation(module: PresentedModule) -> PresentedModule:
    """Isomorphic cokernel with unit-entry relations Gaussian-eliminated.

    A relation with a nonzero constant entry expresses that generator in
    terms of the others; substituting it out shrinks every downstream
    Groebner computation without changing the module.
    """
    ring = module.ring
    rels = [list(r) for r in module.rels]
    twists = module.gen_twists()
    alive = list(range(module.ngens))
    ungraded = twists is None

    while True:
        hit = None
        for ri, r in enumerate(rels):
            for ci in range(len(alive)):
                p = r[ci]
                if p.is_constant() and not p.is_zero():
                    hit = (ri, ci)
                    break
            if hit:
                break
        if hit is None:
            break
        ri, ci = hit
        pivot = rels[ri]
        c = pivot[ci].constant_value()
        for rj, r in enumerate(rels):
            if rj == ri or r[ci].is_zero():
                continue
            factor = r[ci] * (1 / c)
            rels[rj] = [a - factor * b for a, b in zip(r, pivot)]
        del rels[ri]
        for r in rels:
            del r[ci]
        del alive[ci]

    seen = set()
    cleaned = []
    for r in rels:
        t = tuple(r)
        if all(p.is_zero() for p in t):
            continue
        if t not in seen:
            seen.add(t)
            cleaned.append(t)
    if twists is not None:
        new_twists = tuple(twists[i] for i in alive)
    else:
        new_twists = (0,) * len(alive)
    out = PresentedModule.cokernel(GradedFreeModule(ring, new_twists), cleaned)
    if ungraded:
        out.mark_ungraded()
    return out


def specialize_parameter(module: PresentedModule, var: str, value) -> PresentedModule:
    """Change rings along t -> value for a module killed by (t - value).

    Verifies the annihilation exactly, then substitutes in the cokernel
    presentation and drops the variable.
    """
    ring = module.ring
    t = ring.var(var)
    killer = t - ring.constant(Fraction(value))
    for j in range(module.ngens):
        e = tuple(killer if i == j else ring.zero() for i in range(module.ngens))
        if not module.element_is_zero(e):
            raise ShapeError(f"module is not killed by {killer}; cannot specialize")
    small = ring.without_var(var)
    twists = module.gen_twists()
    amb = GradedFreeModule(small, twists if twists is not None else (0,) * module.ngens)
    rels = [
        tuple(p.substitute({var: Fraction(value)}).restrict_to(small) for p in r)
        for r in module.rels
    ]
    out = PresentedModule.cokernel(amb, rels)
    if twists is None:
        out.mark_ungraded()
    return out


def restrict_scalars_quotient(module: PresentedModule, ideal: Ideal) -> PresentedModule:
    """Restriction of scalars along R ->> R/J: add J * generator relations."""
    ring = module.ring
    extra = []
    for g in ideal.gens:
        for j in range(module.ngens):
            extra.append(tuple(g if i == j else ring.zero() for i in range(module.ngens)))
    return module.with_extra_relations(extra)

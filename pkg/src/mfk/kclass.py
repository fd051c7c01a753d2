"""Localized K-classes, the 2-periodic Gysin map, the deformation family, pushforwards.

A class is represented after pushforward to the ambient graded ring: the
normalized Hilbert-numerator difference of the two homology modules over
the full denominator prod(1 - t^w), plus the integer length difference
when both homologies have finite length.  Ungraded data (weight-0
deformation parameters live, inhomogeneous Koszul differentials) drops
the numerator and keeps the lengths.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .groebner import TrackedSpan, syzygies_of_vectors, vec_from_polys, vec_to_polys
from .hilbert import IntLaurent
from .modules import (
    INFINITE,
    GradedFreeModule,
    ModuleMap,
    PresentedModule,
    ShapeError,
    UngradedError,
    _vector_degree,
    annihilator,
    block_matrix,
    hilbert_series,
    identity_matrix,
    is_supported_on,
    length,
    mat_cols,
    mat_mul,
    mat_neg,
    matrix_columns,
    scalar_matrix,
    specialize_parameter,
    subquotient,
    zero_matrix,
)
from .periodic import (
    PeriodicChainMap,
    PeriodicModuleComplex,
    TwoPeriodicComplex,
    cone,
    homology,
    tensor,
)
from .rings import Ideal, PolyRing, Polynomial, RingError, radical_membership


class SupportViolation(ValueError):
    """A homology module escapes the declared support."""

    def __init__(self, parity: str, generator):
        super().__init__(
            f"support violation: H_{parity} is not killed by a power of {generator}"
        )
        self.parity = parity
        self.generator = generator


class ClassComparisonError(ValueError):
    """Neither graded nor length data is available on both sides."""


class KClass:
    """Localized Grothendieck-group class: numerator difference + length difference."""

    __slots__ = ("ring", "support", "numerator", "length_diff")

    def __init__(self, ring: PolyRing, support: Optional[Ideal], numerator, length_diff):
        self.ring = ring
        self.support = support
        self.numerator = numerator  # IntLaurent or None
        self.length_diff = length_diff  # int or None

    @classmethod
    def from_homology(cls, h_plus: PresentedModule, h_minus: PresentedModule, support=None):
        num_p, len_p = module_class_data(h_plus)
        num_m, len_m = module_class_data(h_minus)
        numerator = num_p - num_m if (num_p is not None and num_m is not None) else None
        length_diff = len_p - len_m if (len_p is not None and len_m is not None) else None
        return cls(h_plus.ring, support, numerator, length_diff)

    @classmethod
    def zero(cls, ring: PolyRing, support=None):
        return cls(ring, support, IntLaurent({}), 0)

    def _check(self, other: "KClass"):
        if self.ring.names != other.ring.names or self.ring.weights != other.ring.weights:
            raise ClassComparisonError("classes over different rings")

    def __add__(self, other: "KClass") -> "KClass":
        self._check(other)
        num = None
        if self.numerator is not None and other.numerator is not None:
            num = self.numerator + other.numerator
        ld = None
        if self.length_diff is not None and other.length_diff is not None:
            ld = self.length_diff + other.length_diff
        return KClass(self.ring, self.support, num, ld)

    def __neg__(self) -> "KClass":
        return KClass(
            self.ring,
            self.support,
            -self.numerator if self.numerator is not None else None,
            -self.length_diff if self.length_diff is not None else None,
        )

    def __sub__(self, other: "KClass") -> "KClass":
        return self + (-other)

    def equals(self, other: "KClass") -> bool:
        """Exact equality of the available representatives.

        Graded numerators are compared when both sides have them; otherwise
        the length differences must both exist and agree.
        """
        self._check(other)
        compared = False
        if self.numerator is not None and other.numerator is not None:
            if self.numerator != other.numerator:
                return False
            compared = True
        if self.length_diff is not None and other.length_diff is not None:
            if self.length_diff != other.length_diff:
                return False
            compared = True
        if not compared:
            raise ClassComparisonError("no common representative to compare")
        return True

    def is_zero(self) -> bool:
        if self.numerator is not None:
            return self.numerator.is_zero()
        if self.length_diff is not None:
            return self.length_diff == 0
        raise ClassComparisonError("class carries no representative")

    def reduced(self):
        """Cancelled rational form: (Laurent numerator, leftover denominator weights)."""
        if self.numerator is None:
            return None
        num = self.numerator
        left = []
        for w in self.ring.weights:
            if w < 1:
                continue
            q = num.exact_div(IntLaurent.one_minus_t(w))
            if q is None:
                left.append(w)
            else:
                num = q
        return num, tuple(left)

    def serialize(self):
        return {
            "numerator": self.numerator.serialize() if self.numerator is not None else None,
            "length": self.length_diff,
        }

    def __repr__(self):
        num = str(self.numerator) if self.numerator is not None else "ungraded"
        ld = self.length_diff if self.length_diff is not None else "INFINITE"
        return f"<class num=({num}) len={ld}>"


def module_class_data(m: PresentedModule):
    """(Hilbert numerator or None, length or None) for one module."""
    try:
        num = hilbert_series(m).numerator
    except UngradedError:
        num = None
    size = length(m)
    return num, (None if size is INFINITE else size)


def _check_support(h_plus, h_minus, support: Ideal):
    for parity, mod in (("+", h_plus), ("-", h_minus)):
        ann = annihilator(mod)
        for g in support.gens:
            if not radical_membership(g, ann):
                raise SupportViolation(parity, g)


def localized_class(
    e: TwoPeriodicComplex, coefficients: Optional[PresentedModule], support: Ideal
) -> KClass:
    """[H_+(E (x) Y(G))] - [H_-(E (x) Y(G))], verified supported on V(support)."""
    h_plus, h_minus = homology(e, coefficients)
    if support.ring != e.ring:
        raise RingError("support ideal over a different ring")
    if support.is_unit():
        # empty support forces the zero class
        if not (h_plus.is_zero() and h_minus.is_zero()):
            cls = KClass.from_homology(h_plus, h_minus, support)
            if not cls.is_zero():
                raise SupportViolation("+", support.gens[0])
        return KClass.zero(e.ring, support)
    _check_support(h_plus, h_minus, support)
    return KClass.from_homology(h_plus, h_minus, support)


def class_additivity_check(
    f: PeriodicChainMap, coefficients: Optional[PresentedModule], support: Ideal
) -> bool:
    """Lemma-level additivity: class(Cone(f)) = class(B) + class(A[1])."""
    data = cone(f)
    c_b = localized_class(f.target, coefficients, support)
    c_cone = localized_class(data.cone, coefficients, support)
    c_shift = localized_class(data.shifted_source, coefficients, support)
    return c_cone.equals(c_b + c_shift)


# -- the 2-periodic Gysin map -----------------------------------------------------


def _deformation_var(ring: PolyRing, var: Optional[str]) -> str:
    if var is not None:
        if var not in ring.names:
            raise RingError(f"{var!r} is not a variable")
        return var
    params = ring.deformation_vars
    if len(params) != 1:
        raise RingError("need exactly one designated deformation parameter")
    return params[0]


def parameter_fiber_complex(ring: PolyRing, var: str, value) -> TwoPeriodicComplex:
    """Fold of the two-term resolution [R --(t - value)--> R]."""
    plus = GradedFreeModule(ring, (0,))
    minus = GradedFreeModule(ring, (0,))
    t = ring.var(var)
    poly = t - ring.constant(Fraction(value))
    return TwoPeriodicComplex(
        plus,
        minus,
        ModuleMap(plus, minus, ((ring.zero(),),)),
        ModuleMap(minus, plus, ((poly,),)),
        check=False,
    )


def gysin_fiber(e: TwoPeriodicComplex, value, var: Optional[str] = None) -> TwoPeriodicComplex:
    """lambda^! E = E (x) fold(R --(t - lambda)--> R); supported on the fiber."""
    var = _deformation_var(e.ring, var)
    return tensor(e, parameter_fiber_complex(e.ring, var, value))


def _quotient_by_parameter(m: PresentedModule, var: str) -> PresentedModule:
    """M/tM as a module over the ring without t."""
    ring = m.ring
    small = ring.without_var(var)
    twists = m.gen_twists()
    amb = GradedFreeModule(small, twists if twists is not None else (0,) * m.ngens)
    rels = [tuple(p.substitute({var: 0}).restrict_to(small) for p in r) for r in m.rels]
    out = PresentedModule.cokernel(amb, rels)
    if twists is None:
        out.mark_ungraded()
    return out


def _parameter_annihilator_submodule(m: PresentedModule, var: str) -> PresentedModule:
    """ann_M(t) as a module over the ring without t (it is killed by t)."""
    ring = m.ring
    t = ring.var(var)
    n = m.ngens
    t_cols = [tuple(t if i == j else ring.zero() for i in range(n)) for j in range(n)]
    vectors = [vec_from_polys(c) for c in t_cols] + [vec_from_polys(r) for r in m.rels]
    syz = syzygies_of_vectors(ring, n, vectors)
    kernel = []
    seen = set()
    for s in syz:
        coeffs = vec_to_polys(ring, len(vectors), s)
        u = coeffs[:n]
        if any(not p.is_zero() for p in u) and u not in seen:
            seen.add(u)
            kernel.append(u)
    twists = m.gen_twists()
    amb = GradedFreeModule(ring, twists if twists is not None else (0,) * n)
    sub = subquotient(amb, kernel, [r for r in m.rels if any(not p.is_zero() for p in r)])
    coker_twists = sub.gen_twists()
    free = GradedFreeModule(ring, coker_twists if coker_twists is not None else (0,) * sub.ngens)
    coker = PresentedModule.cokernel(free, sub.rels)
    if twists is None or coker_twists is None:
        coker.mark_ungraded()
    return specialize_parameter(coker, var, 0)


def gysin_commutes_check(e: TwoPeriodicComplex, support: Ideal, var: Optional[str] = None) -> bool:
    """0^! of the class versus the class of 0^!, compared over the base ring.

    Left side: for each homology module M over R[t], the two-term Koszul
    Gysin class [M/tM] - [ann_M(t)].  Right side: class of the homology of
    E (x) fold(t).  Both sides are specialized to R before comparison.
    """
    var = _deformation_var(e.ring, var)
    h_plus, h_minus = homology(e)
    _check_support(h_plus, h_minus, support)

    def side_left(m: PresentedModule) -> tuple:
        q = _quotient_by_parameter(m, var)
        a = _parameter_annihilator_submodule(m, var)
        nq, lq = module_class_data(q)
        na, la = module_class_data(a)
        num = nq - na if (nq is not None and na is not None) else None
        ld = lq - la if (lq is not None and la is not None) else None
        return num, ld

    np_, lp = side_left(h_plus)
    nm, lm = side_left(h_minus)
    small = e.ring.without_var(var)
    lhs = KClass(
        small,
        None,
        np_ - nm if (np_ is not None and nm is not None) else None,
        lp - lm if (lp is not None and lm is not None) else None,
    )

    fiber = gysin_fiber(e, 0, var)
    fp, fm = homology(fiber)
    sp = specialize_parameter(fp, var, 0)
    sm = specialize_parameter(fm, var, 0)
    rhs = KClass.from_homology(sp, sm)
    return lhs.equals(rhs)


# -- Construction of the deformation family ---------------------------------------


class DeformationFamily:
    """Family over R[t] linking a complex to the fold of its homology."""

    __slots__ = ("family", "parameter", "base_class", "fiber_classes", "zero_matches", "one_matches")

    def __init__(self, family, parameter, base_class, fiber_classes, zero_matches, one_matches):
        self.family = family
        self.parameter = parameter
        self.base_class = base_class
        self.fiber_classes = fiber_classes
        self.zero_matches = zero_matches
        self.one_matches = one_matches


def _image_presentation(ring, d_matrix, source: PresentedModule, target: PresentedModule):
    """Presentation of im(d) with one generator per source generator.

    Generator j carries the *formal* twist of source generator j, so the
    corestriction of d is the identity in degree 0 and f = d - t id stays
    homogeneous; the inclusion into the target is then a degree-deg(d) map.
    """
    n_src = source.ngens
    columns = matrix_columns(d_matrix, n_src)
    cols = [vec_from_polys(c) for c in columns]
    rel_cols = [vec_from_polys(r) for r in target.rels]
    vectors = cols + rel_cols
    syz = syzygies_of_vectors(ring, target.ngens, vectors)
    rels = []
    seen = set()
    for s in syz:
        coeffs = vec_to_polys(ring, len(vectors), s)
        u = coeffs[:n_src]
        if any(not p.is_zero() for p in u) and u not in seen:
            seen.add(u)
            rels.append(u)
    gen_twists = source.gen_twists()
    free = GradedFreeModule(ring, gen_twists if gen_twists is not None else (0,) * n_src)
    out = PresentedModule.cokernel(free, rels)
    if gen_twists is None:
        out.mark_ungraded()
    return out


def _kernel_presentation(ring, f_matrix, source: PresentedModule, target: PresentedModule):
    """ker(f: source -> target) as a cokernel, with the inclusion matrix into source."""
    cols = [vec_from_polys(c) for c in matrix_columns(f_matrix, source.ngens)]
    rel_cols = [vec_from_polys(r) for r in target.rels]
    vectors = cols + rel_cols
    n_src = source.ngens
    syz = syzygies_of_vectors(ring, target.ngens, vectors)
    kernel = []
    seen = set()
    for s in syz:
        coeffs = vec_to_polys(ring, len(vectors), s)
        u = coeffs[:n_src]
        if any(not p.is_zero() for p in u) and u not in seen:
            seen.add(u)
            kernel.append(u)
    # relations: preimage of rel-span(source) under the kernel-generator matrix
    ker_vecs = [vec_from_polys(k) for k in kernel]
    src_rels = [vec_from_polys(r) for r in source.rels]
    vectors2 = ker_vecs + src_rels
    syz2 = syzygies_of_vectors(ring, n_src, vectors2)
    rels = []
    seen2 = set()
    for s in syz2:
        coeffs = vec_to_polys(ring, len(vectors2), s)
        u = coeffs[: len(kernel)]
        if any(not p.is_zero() for p in u) and u not in seen2:
            seen2.add(u)
            rels.append(u)
    src_twists = source.gen_twists()
    gen_twists = None
    if src_twists is not None:
        gen_twists = []
        for k in kernel:
            d = _vector_degree(src_twists, k)
            if d is None:
                gen_twists = None
                break
            gen_twists.append(d)
    free = GradedFreeModule(ring, tuple(gen_twists) if gen_twists is not None else (0,) * len(kernel))
    mod = PresentedModule.cokernel(free, rels)
    if gen_twists is None:
        mod.mark_ungraded()
    inclusion = tuple(tuple(kernel[j][i] for j in range(len(kernel))) for i in range(n_src))
    return mod, inclusion


def _lift_span(ring, gens_matrix, n_gens, rels, target_ngens):
    """Reusable tracked span of [generator columns | relation columns]."""
    gen_cols = [vec_from_polys(c) for c in matrix_columns(gens_matrix, n_gens)]
    rel_cols = [vec_from_polys(r) for r in rels]
    return TrackedSpan(ring, target_ngens, gen_cols + rel_cols), len(gen_cols)


def _lift_through(span_pair, ring, column):
    """Coefficients expressing `column` over the generator block of the span."""
    span, n_gens = span_pair
    lift = span.lift(vec_from_polys(column))
    if lift is None:
        raise ShapeError("lift through kernel generators failed")
    coeffs = vec_to_polys(ring, len(span.gb.inputs), lift)
    return coeffs[:n_gens]


def deformation_family(
    e: TwoPeriodicComplex,
    support: Ideal,
    coefficients: Optional[PresentedModule] = None,
    parameter: str = "t",
    extra_fibers: Sequence = (),
) -> DeformationFamily:
    """Run the A[t]-deformation linking E (x) Y(G) to the fold of its homology.

    Builds B = Cone(I[1] -> A), the surjection f = d - t id onto I[t], the
    kernel family over R[t], and compares every fiber class with the class
    of the homology fold.
    """
    base_ring = e.ring
    a = e.to_presented(coefficients)
    h_plus, h_minus = a.homology()
    _check_support(h_plus, h_minus, support)
    base_class = KClass.from_homology(h_plus, h_minus, support)

    t_name = parameter
    while t_name in base_ring.names:
        t_name += "_"
    ring = base_ring.extend((t_name,), (0,))
    at = a.map_ring(ring)

    def build_b(plus: PresentedModule, minus: PresentedModule, d_out):
        """B-parity built from A-parity and I = im(d_out) subset the other parity."""
        img = _image_presentation(ring, d_out, plus, minus)
        n_a, n_i = plus.ngens, img.ngens
        zero = ring.zero()
        rels = []
        for r in plus.rels:
            rels.append(tuple(r) + (zero,) * n_i)
        for r in img.rels:
            rels.append((zero,) * n_a + tuple(r))
        twists_a = plus.gen_twists()
        twists_i = img.gen_twists()
        if twists_a is not None and twists_i is not None:
            twists = tuple(twists_a) + tuple(twists_i)
            free = GradedFreeModule(ring, twists)
            mod = PresentedModule.cokernel(free, rels)
        else:
            free = GradedFreeModule(ring, (0,) * (n_a + n_i))
            mod = PresentedModule.cokernel(free, rels)
            mod.mark_ungraded()
        return mod, img

    b_plus, i_plus = build_b(at.plus, at.minus, at.d_plus)
    b_minus, i_minus = build_b(at.minus, at.plus, at.d_minus)

    t = ring.var(t_name)

    def f_matrix(n_i):
        # [corestriction | -t id]: the corestriction is the identity in
        # image-generator coordinates (generator j of I is d(e_j))
        ident = identity_matrix(ring, n_i)
        return block_matrix([[ident, scalar_matrix(ring, n_i, -t)]], ring)

    f_plus = f_matrix(i_plus.ngens)
    f_minus = f_matrix(i_minus.ngens)

    fam_plus, incl_plus = _kernel_presentation(ring, f_plus, b_plus, i_plus)
    fam_minus, incl_minus = _kernel_presentation(ring, f_minus, b_minus, i_minus)

    def b_differential(d_at, n_ai, n_ii, n_ao, n_io):
        # blocks [[d, d], [0, 0]] : (A (+) I)_in -> (A (+) I)_out
        return block_matrix(
            [
                [d_at, d_at],
                [zero_matrix(ring, n_io, n_ai), zero_matrix(ring, n_io, n_ii)],
            ],
            ring,
        )

    db_plus = b_differential(at.d_plus, at.plus.ngens, i_plus.ngens, at.minus.ngens, i_minus.ngens)
    db_minus = b_differential(at.d_minus, at.minus.ngens, i_minus.ngens, at.plus.ngens, i_plus.ngens)

    def restrict(d_b, incl_src, fam_src: PresentedModule, incl_tgt, fam_tgt: PresentedModule, b_tgt):
        cols = matrix_columns(mat_mul(d_b, incl_src, ring), fam_src.ngens)
        span_pair = _lift_span(ring, incl_tgt, fam_tgt.ngens, b_tgt.rels, b_tgt.ngens)
        out_cols = [_lift_through(span_pair, ring, col) for col in cols]
        return tuple(tuple(out_cols[j][i] for j in range(len(out_cols))) for i in range(fam_tgt.ngens))

    d_fam_plus = restrict(db_plus, incl_plus, fam_plus, incl_minus, fam_minus, b_minus)
    d_fam_minus = restrict(db_minus, incl_minus, fam_minus, incl_plus, fam_plus, b_plus)

    family = PeriodicModuleComplex(fam_plus, fam_minus, d_fam_plus, d_fam_minus)

    fiber_classes = {}
    for lam in (0, 1) + tuple(extra_fibers):
        fib = family.tensor_fold_of(t - ring.constant(Fraction(lam)))
        fp, fm = fib.homology()
        sp = specialize_parameter(fp, t_name, lam)
        sm = specialize_parameter(fm, t_name, lam)
        _check_support(sp, sm, support)
        fiber_classes[lam] = KClass.from_homology(sp, sm, support)

    zero_matches = fiber_classes[0].equals(base_class)
    one_matches = fiber_classes[1].equals(base_class)
    return DeformationFamily(family, t_name, base_class, fiber_classes, zero_matches, one_matches)


# -- pushforward along finite ring maps --------------------------------------------


class FiniteRingMap:
    """R -> R' presented either as a surjection R ->> R/J or a free extension."""

    __slots__ = ("source", "target_ring", "target_ideal", "basis")

    def __init__(self, source, target_ring, target_ideal, basis):
        self.source = source
        self.target_ring = target_ring
        self.target_ideal = target_ideal
        self.basis = basis  # None for surjections; monomial Polynomials otherwise

    @classmethod
    def quotient(cls, ring: PolyRing, ideal: Ideal) -> "FiniteRingMap":
        if ideal.ring != ring:
            raise RingError("ideal over a different ring")
        return cls(ring, ring, ideal, None)

    @classmethod
    def extension(cls, base: PolyRing, ext_ring: PolyRing, ext_ideal: Ideal, basis) -> "FiniteRingMap":
        for n in base.names:
            if n not in ext_ring.names:
                raise RingError(f"base variable {n!r} missing from the extension")
        basis = tuple(basis)
        for b in basis:
            if b.ring != ext_ring or len(b.terms) != 1 or b.leading_coeff() != 1:
                raise ShapeError("basis entries must be monic monomials of the extension ring")
        return cls(base, ext_ring, ext_ideal, basis)


def pushforward_finite(phi: FiniteRingMap, module: PresentedModule) -> PresentedModule:
    """Restriction of scalars along a finite ring map."""
    if phi.basis is None:
        return _pushforward_surjection(phi, module)
    return _pushforward_extension(phi, module)


def _pushforward_surjection(phi: FiniteRingMap, module: PresentedModule) -> PresentedModule:
    if module.ring != phi.source:
        raise RingError("module not over the target of the surjection")
    ring = module.ring
    extra = []
    n = module.ngens
    for g in phi.target_ideal.gens:
        for i in range(n):
            extra.append(tuple(g if k == i else ring.zero() for k in range(n)))
    return module.with_extra_relations(extra)


def _pushforward_extension(phi: FiniteRingMap, module: PresentedModule) -> PresentedModule:
    ext = phi.target_ring
    base = phi.source
    if module.ring != ext:
        raise RingError("module not over the extension ring")
    ext_only = [n for n in ext.names if n not in base.names]
    base_pos = {n: i for i, n in enumerate(base.names)}
    ext_pos = [ext._index[n] for n in ext_only]
    basis_exps = []
    for b in phi.basis:
        mono = b.leading_monomial()
        if any(mono[ext._index[n]] for n in base.names):
            raise ShapeError("basis monomials must involve only extension variables")
        basis_exps.append(tuple(mono[p] for p in ext_pos))
    basis_index = {m: i for i, m in enumerate(basis_exps)}

    def decompose(p: Polynomial):
        """p (already reduced mod the extension ideal) -> {basis_i: base poly}."""
        out = {}
        for mono, coeff in p.terms:
            ext_part = tuple(mono[p_] for p_ in ext_pos)
            if ext_part not in basis_index:
                raise ShapeError(
                    f"normal form leaves the basis span (monomial outside basis: {ext_part})"
                )
            base_mono = [0] * base.nvars
            for name, i in base_pos.items():
                base_mono[i] = mono[ext._index[name]]
            idx = basis_index[ext_part]
            d = out.setdefault(idx, {})
            d[tuple(base_mono)] = d.get(tuple(base_mono), Fraction(0)) + coeff
        return {i: base.from_dict(d) for i, d in out.items()}

    n = module.ngens
    s = len(phi.basis)
    big_zero = base.zero()
    rels = []
    for b in phi.basis:
        for r in module.rels:
            row = [big_zero] * (n * s)
            for j, p in enumerate(r):
                reduced = phi.target_ideal.normal_form(b * p)
                for bi, qp in decompose(reduced).items():
                    row[j * s + bi] = row[j * s + bi] + qp
            rels.append(tuple(row))
    twists = module.gen_twists()
    if twists is not None:
        new_twists = []
        for j in range(n):
            for b in phi.basis:
                new_twists.append(twists[j] + (b.weighted_degree() or 0))
        free = GradedFreeModule(base, tuple(new_twists))
        out = PresentedModule.cokernel(free, rels)
    else:
        free = GradedFreeModule(base, (0,) * (n * s))
        out = PresentedModule.cokernel(free, rels)
        out.mark_ungraded()
    return out


def proper_pushforward_check(
    e: TwoPeriodicComplex,
    closed_ideal: Ideal,
    coefficients: PresentedModule,
    support: Ideal,
) -> bool:
    """Closed-immersion pushforward compatibility of the localized class.

    Left: h(E) applied to the pushed-forward coefficients over R.  Right:
    E restricted to the J-model (entries reduced, J adjoined), class of the
    same coefficients there, read as an R-class.
    """
    phi = FiniteRingMap.quotient(e.ring, closed_ideal)
    pushed = pushforward_finite(phi, coefficients)
    lhs = localized_class(e, pushed, support)

    ring = e.ring
    reduced_rows = lambda m: tuple(
        tuple(closed_ideal.normal_form(p) for p in r) for r in m.rows
    )
    e_restr = TwoPeriodicComplex(
        e.plus,
        e.minus,
        ModuleMap(e.plus, e.minus, reduced_rows(e.d_plus), None),
        ModuleMap(e.minus, e.plus, reduced_rows(e.d_minus), None),
        base_ideal=closed_ideal
        if e.base_ideal is None
        else Ideal(ring, e.base_ideal.gens + closed_ideal.gens),
        check=True,
    )
    rhs = localized_class(e_restr, coefficients, support + closed_ideal)
    return lhs.equals(rhs)


def multiplicativity_check(
    e1: TwoPeriodicComplex,
    e2: TwoPeriodicComplex,
    coefficients: Optional[PresentedModule],
    inner_support: Ideal,
    support: Ideal,
) -> bool:
    """h(E1 (x) E2)(G) against h(E2) applied to the homology of E1 (x) Y(G)."""
    lhs = localized_class(tensor(e1, e2), coefficients, support)
    h_plus, h_minus = homology(e1, coefficients)
    _check_support(h_plus, h_minus, inner_support)
    rhs = localized_class(e2, h_plus, support) - localized_class(e2, h_minus, support)
    return lhs.equals(rhs)

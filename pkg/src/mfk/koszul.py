"""Koszul 2-periodic complexes {alpha, beta}, the duality isomorphism, tautological data.

Exterior basis: subsets of {1..r} as sorted tuples, ordered by (size, lex);
wedge and contraction carry the standard (-1)^(shuffle) signs.  The basis
element for S has degree sum(twists[i] for i in S).
"""

from __future__ import annotations

from itertools import combinations
from typing import Optional, Sequence

from .modules import (
    GradedFreeModule,
    ModuleMap,
    PresentedModule,
    ShapeError,
    identity_matrix,
    kron,
    mat_mul,
    mat_neg,
    zero_matrix,
)
from .periodic import (
    BoundedComplex,
    PeriodicChainMap,
    TwoPeriodicComplex,
    fold,
    make_two_periodic,
    tensor,
)
from .rings import Ideal, PolyRing, Polynomial, RingError


class PairingError(ValueError):
    """<alpha, beta> != 0, reported with the offending value."""


class SectionCosectionPair:
    """Bundle E with a cosection alpha (row) and section beta (column), pairing to zero."""

    __slots__ = ("bundle", "alpha", "beta", "base_ideal")

    def __init__(self, bundle: GradedFreeModule, alpha, beta, base_ideal: Optional[Ideal] = None):
        alpha = tuple(alpha)
        beta = tuple(beta)
        if len(alpha) != bundle.rank or len(beta) != bundle.rank:
            raise ShapeError("alpha/beta length must equal the bundle rank")
        ring = bundle.ring
        for p in alpha + beta:
            if p.ring != ring:
                raise RingError("entry from a different ring")
        pairing = ring.zero()
        for a, b in zip(alpha, beta):
            pairing = pairing + a * b
        if base_ideal is not None:
            pairing = base_ideal.normal_form(pairing)
        if not pairing.is_zero():
            raise PairingError(f"<alpha, beta> = {pairing} != 0")
        self.bundle = bundle
        self.alpha = alpha
        self.beta = beta
        self.base_ideal = base_ideal

    @property
    def ring(self) -> PolyRing:
        return self.bundle.ring

    @property
    def rank(self) -> int:
        return self.bundle.rank


def _subsets(r: int, parity: int):
    out = []
    for k in range(parity, r + 1, 2):
        out.extend(combinations(range(r), k))
    return out


def _wedge_twist(twists, subset):
    return sum(twists[i] for i in subset)


def _koszul_entry(ring, alpha, beta, source, target):
    """Matrix entry of wedge(alpha) + iota(beta) from basis element `source` to `target`."""
    s, t = set(source), set(target)
    if len(target) == len(source) + 1 and s < t:
        (i,) = t - s
        sign = (-1) ** sum(1 for j in source if j < i)
        return alpha[i] * sign
    if len(target) == len(source) - 1 and t < s:
        (i,) = s - t
        sign = (-1) ** source.index(i)
        return beta[i] * sign
    return ring.zero()


def koszul_complex(pair: SectionCosectionPair) -> TwoPeriodicComplex:
    """{alpha, beta}: exterior algebra on E-dual with differential wedge(alpha) + iota(beta)."""
    ring = pair.ring
    r = pair.rank
    evens = _subsets(r, 0)
    odds = _subsets(r, 1)
    twists = pair.bundle.twists
    plus = GradedFreeModule(ring, tuple(_wedge_twist(twists, s) for s in evens))
    minus = GradedFreeModule(ring, tuple(_wedge_twist(twists, s) for s in odds))

    def matrix(sources, targets):
        return tuple(
            tuple(_koszul_entry(ring, pair.alpha, pair.beta, s, t) for s in sources)
            for t in targets
        )

    d_plus = ModuleMap(plus, minus, matrix(evens, odds))
    d_minus = ModuleMap(minus, plus, matrix(odds, evens))
    return make_two_periodic(plus, minus, d_plus, d_minus, pair.base_ideal)


class DualityData:
    """Verified chain isomorphism {a,b} -> {b^dual, a^dual} (x) fold(det E^dual [rank E])."""

    __slots__ = ("iso", "target", "signs")

    def __init__(self, iso: PeriodicChainMap, target: TwoPeriodicComplex, signs):
        self.iso = iso
        self.target = target
        self.signs = signs


def _complement_sign(subset, r):
    """Sign of the shuffle (subset, complement) of (0..r-1)."""
    comp = [j for j in range(r) if j not in subset]
    inversions = sum(1 for i in subset for j in comp if j < i)
    return -1 if inversions % 2 else 1


def duality_isomorphism(pair: SectionCosectionPair) -> DualityData:
    """Hodge-star chain iso realizing the twisted duality; signs solved and verified."""
    ring = pair.ring
    r = pair.rank
    source = koszul_complex(pair)
    dual_pair = SectionCosectionPair(
        pair.bundle.dual(), pair.beta, pair.alpha, pair.base_ideal
    )
    dual = koszul_complex(dual_pair)
    det_twist = sum(pair.bundle.twists)
    det_line = GradedFreeModule(ring, (det_twist,))
    target = tensor(dual, fold(BoundedComplex.single(det_line, degree=r % 2)))

    evens, odds = _subsets(r, 0), _subsets(r, 1)
    # target parity p holds the wedges of parity (p + r) mod 2, in subset order
    tgt_plus = _subsets(r, r % 2)
    tgt_minus = _subsets(r, (r + 1) % 2)
    comp_index_plus = {s: i for i, s in enumerate(tgt_plus)}
    comp_index_minus = {s: i for i, s in enumerate(tgt_minus)}

    def build(signs):
        def phi(sources, tgt_sets, comp_index):
            rows = [[ring.zero() for _ in sources] for _ in tgt_sets]
            for j, s in enumerate(sources):
                comp = tuple(k for k in range(r) if k not in s)
                sign = _complement_sign(s, r) * signs[len(s)]
                rows[comp_index[comp]][j] = ring.constant(sign)
            return tuple(tuple(row) for row in rows)

        f_plus = ModuleMap(source.plus, target.plus, phi(evens, tgt_plus, comp_index_plus))
        f_minus = ModuleMap(source.minus, target.minus, phi(odds, tgt_minus, comp_index_minus))
        return f_plus, f_minus

    last_error = None
    for mask in range(1 << r):
        signs = [1] * (r + 1)
        for k in range(1, r + 1):
            signs[k] = -1 if (mask >> (k - 1)) & 1 else 1
        f_plus, f_minus = build(signs)
        try:
            iso = PeriodicChainMap(source, target, f_plus, f_minus, check=True)
        except ShapeError as exc:
            last_error = exc
            continue
        return DualityData(iso, target, tuple(signs))
    raise ShapeError(f"no sign table makes the Hodge star a chain map: {last_error}")


class TautologicalData:
    """Extended ring with fiber variables, the potential w, and the tautological pair."""

    __slots__ = ("base", "ring", "bundle", "potential", "fiber_vars", "pair")

    def __init__(self, base, ring, bundle, potential, fiber_vars, pair):
        self.base = base
        self.ring = ring
        self.bundle = bundle
        self.potential = potential
        self.fiber_vars = fiber_vars
        self.pair = pair


def tautological_potential(
    base: PolyRing,
    bundle: GradedFreeModule,
    sigma: Sequence[Polynomial],
    fiber_names: Optional[Sequence[str]] = None,
) -> TautologicalData:
    """Extend by one fiber variable per generator of F and form w = sum sigma_i t_i.

    Fiber weights are max(twist, 1); the tautological pair (p* sigma, t_F)
    pairs to w, which is zero in the J = (w) model.
    """
    if bundle.ring != base:
        raise RingError("bundle not over the base ring")
    r = bundle.rank
    if fiber_names is None:
        fiber_names = tuple(f"t{i + 1}" for i in range(r))
    fiber_names = tuple(fiber_names)
    if len(fiber_names) != r:
        raise ShapeError("need one fiber variable per generator")
    weights = tuple(max(a, 1) for a in bundle.twists)
    ring = base.extend(fiber_names, weights)  # raises on name collision
    alpha = tuple(ring.lift(s) for s in sigma)
    beta = tuple(ring.var(n) for n in fiber_names)
    w = ring.zero()
    for a, b in zip(alpha, beta):
        w = w + a * b
    lifted = GradedFreeModule(ring, bundle.twists)
    base_ideal = Ideal(ring, (w,)) if not w.is_zero() else None
    pair = SectionCosectionPair(lifted, alpha, beta, base_ideal)
    return TautologicalData(base, ring, lifted, w, fiber_names, pair)


def split_koszul_compare(
    k_bundle: GradedFreeModule,
    q_bundle: GradedFreeModule,
    alpha_q: Sequence[Polynomial],
    beta_k: Sequence[Polynomial],
    coefficients: PresentedModule,
    support: Ideal,
    base_ideal: Optional[Ideal] = None,
):
    """Classes of {(0,alpha_Q),(beta_K,0)} on K (+) Q versus {alpha_Q,0} (x) {0,beta_K}.

    Returns the pair; equality on every valid input is the splitting lemma.
    """
    from .kclass import localized_class

    ring = k_bundle.ring
    zero = ring.zero()
    e_bundle = k_bundle.direct_sum(q_bundle)
    alpha = tuple([zero] * k_bundle.rank) + tuple(alpha_q)
    beta = tuple(beta_k) + tuple([zero] * q_bundle.rank)
    whole = koszul_complex(SectionCosectionPair(e_bundle, alpha, beta, base_ideal))
    left = localized_class(whole, coefficients, support)

    q_only = koszul_complex(
        SectionCosectionPair(q_bundle, tuple(alpha_q), (zero,) * q_bundle.rank, base_ideal)
    )
    k_only = koszul_complex(
        SectionCosectionPair(k_bundle, (zero,) * k_bundle.rank, tuple(beta_k), base_ideal)
    )
    right = localized_class(tensor(q_only, k_only), coefficients, support)
    return left, right

"""Cosection-localized Gysin maps via the tautological Koszul complex.

The comparison theorem is taken as the operational definition: the
localized Gysin map is the class map of {p* sigma, t_F} on the J = (w)
model, landing on the zero section over Z(sigma).
"""

from __future__ import annotations

from typing import Optional, Sequence

from .kclass import KClass, SupportViolation, localized_class
from .koszul import SectionCosectionPair, TautologicalData, koszul_complex, tautological_potential
from .modules import GradedFreeModule, ModuleMap, PresentedModule, ShapeError, mat_mul
from .periodic import BoundedComplex, TwoPeriodicComplex, fold, homology
from .rings import Ideal, PolyRing, Polynomial, RingError


class CosectionModel:
    """Base M, bundle F, cosection sigma, with the induced potential data.

    Derived fields: the extended ring with one fiber variable per generator
    of F, the potential w = sum sigma_i t_i, the base ideal J = (w), and the
    support ideal of the zero section over Z(sigma):
    (sigma_1..sigma_r, t_1..t_r).
    """

    __slots__ = ("base", "bundle", "sigma", "taut", "support")

    def __init__(
        self,
        base: PolyRing,
        bundle: GradedFreeModule,
        sigma: Sequence[Polynomial],
        fiber_names: Optional[Sequence[str]] = None,
    ):
        sigma = tuple(sigma)
        if len(sigma) != bundle.rank:
            raise ShapeError("cosection length must equal the bundle rank")
        self.base = base
        self.bundle = bundle
        self.sigma = sigma
        self.taut = tautological_potential(base, bundle, sigma, fiber_names)
        ring = self.taut.ring
        gens = [ring.lift(s) for s in sigma if not s.is_zero()]
        gens += [ring.var(n) for n in self.taut.fiber_vars]
        self.support = Ideal(ring, tuple(gens))

    @property
    def ring(self) -> PolyRing:
        return self.taut.ring

    @property
    def potential(self) -> Polynomial:
        return self.taut.potential

    @property
    def base_ideal(self) -> Optional[Ideal]:
        return self.taut.pair.base_ideal

    def koszul(self) -> TwoPeriodicComplex:
        return koszul_complex(self.taut.pair)


def _check_admissible(model: CosectionModel, coefficients: PresentedModule):
    """G must live on Z(w): the potential has to kill it."""
    if coefficients.ring != model.ring:
        raise RingError("coefficients not over the extended ring")
    w = model.potential
    if w.is_zero():
        return
    ring = model.ring
    for j in range(coefficients.ngens):
        e = tuple(w if i == j else ring.zero() for i in range(coefficients.ngens))
        if not coefficients.element_is_zero(e):
            raise SupportViolation("+", w)


def cosection_localized_gysin(model: CosectionModel, coefficients: PresentedModule) -> KClass:
    """Class of the tautological Koszul complex against G, supported on Z(sigma)."""
    _check_admissible(model, coefficients)
    return localized_class(model.koszul(), coefficients, model.support)


def zero_section_koszul_class(model: CosectionModel, coefficients: PresentedModule) -> KClass:
    """Fold of the classical Koszul resolution of the zero section, as a class.

    Only meaningful for sigma = 0, where the potential vanishes and the
    tautological complex is the honest resolution.
    """
    ring = model.ring
    bundle = GradedFreeModule(ring, model.taut.bundle.twists)
    t_section = tuple(ring.var(n) for n in model.taut.fiber_vars)
    r = bundle.rank
    from .koszul import _subsets, _wedge_twist, _koszul_entry

    terms = {}
    maps = {}
    from itertools import combinations

    for k in range(r + 1):
        subsets = list(combinations(range(r), k))
        twists = tuple(_wedge_twist(bundle.twists, s) for s in subsets)
        terms[-k] = GradedFreeModule(ring, twists)
    zero_row = tuple(ring.zero() for _ in range(r))
    for k in range(r, 0, -1):
        sources = list(combinations(range(r), k))
        targets = list(combinations(range(r), k - 1))
        rows = tuple(
            tuple(
                _koszul_entry(ring, (ring.zero(),) * r, t_section, s, t)
                for s in sources
            )
            for t in targets
        )
        maps[-k] = ModuleMap(terms[-k], terms[-k + 1], rows)
    resolution = BoundedComplex(ring, terms, maps)
    return localized_class(fold(resolution), coefficients, model.support)


def zero_sigma_reduction_check(model: CosectionModel, coefficients: PresentedModule) -> bool:
    """sigma = 0: the localized Gysin agrees with the zero-section Koszul class."""
    if any(not s.is_zero() for s in model.sigma):
        raise ShapeError("reduction check requires sigma = 0")
    lhs = cosection_localized_gysin(model, coefficients)
    rhs = zero_section_koszul_class(model, coefficients)
    return lhs.equals(rhs)


def localized_virtual_class(
    model: CosectionModel, obstruction: ModuleMap, cone_module: PresentedModule
) -> KClass:
    """0^!_{F,sigma} [O_C] for a cone C inside |F| killed by the potential.

    obstruction is the complex A -> F over the base; the composite
    sigma o d must vanish exactly.
    """
    if obstruction.target.twists != model.bundle.twists or obstruction.ring != model.base:
        raise ShapeError("obstruction complex must land in the bundle over the base ring")
    sigma_row = (tuple(model.sigma),)
    composite = mat_mul(sigma_row, obstruction.rows, model.base)
    for row in composite:
        for p in row:
            if not p.is_zero():
                raise ShapeError(f"sigma o d != 0 (entry {p})")
    return cosection_localized_gysin(model, cone_module)

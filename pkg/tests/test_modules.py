"""Module algebra: syzygies, subquotients, Hilbert series, lengths, annihilators."""

import random
from fractions import Fraction

import pytest

from mfk.hilbert import IntLaurent, standard_monomials_by_degree
from mfk.modules import (
    INFINITE,
    GradedFreeModule,
    ModuleMap,
    PresentedModule,
    ShapeError,
    UngradedError,
    annihilator,
    hilbert_series,
    is_supported_on,
    length,
    prune_presentation,
    specialize_parameter,
    subquotient,
    syzygies,
)
from mfk.rings import Ideal, PolyRing, buchberger

R2 = PolyRing(("x", "y"))
X, Y = R2.gens()
R1 = PolyRing(("x",))
X1 = R1.var("x")


def apply_map(m, vec):
    out = []
    for row in m.rows:
        acc = m.ring.zero()
        for a, b in zip(row, vec):
            acc = acc + a * b
        out.append(acc)
    return tuple(out)


class TestSyzygies:
    def test_koszul_relation(self):
        m = ModuleMap(GradedFreeModule(R2, (1, 1)), GradedFreeModule(R2, (0,)), ((X, Y),))
        assert [tuple(str(p) for p in s) for s in syzygies(m)] == [("y", "-x")]

    def test_identity_injective(self):
        assert syzygies(ModuleMap.identity(GradedFreeModule(R2, (0,)))) == []

    def test_diagonal_nonzerodivisor(self):
        m = ModuleMap(
            GradedFreeModule(R2, (1, 1)),
            GradedFreeModule(R2, (0, 0)),
            ((X, R2.zero()), (R2.zero(), X)),
        )
        assert syzygies(m) == []

    def test_every_syzygy_annihilates(self):
        rng = random.Random(11)
        for _ in range(15):
            rows = tuple(
                tuple(
                    R2.from_dict(
                        {
                            (rng.randint(0, 2), rng.randint(0, 2)): Fraction(rng.randint(-2, 2))
                            for _ in range(rng.randint(0, 2))
                        }
                    )
                    for _ in range(2)
                )
                for _ in range(2)
            )
            m = ModuleMap(GradedFreeModule(R2, (0, 0)), GradedFreeModule(R2, (0, 0)), rows, None)
            for s in syzygies(m):
                assert all(p.is_zero() for p in apply_map(m, s))


class TestSubquotient:
    def test_skyscraper(self):
        free = GradedFreeModule(R1, (0,))
        m = subquotient(free, [(R1.one(),)], [(X1,)])
        assert str(hilbert_series(m).numerator) == "-t + 1"
        assert length(m) == 1

    def test_equal_submodules_vanish(self):
        free = GradedFreeModule(R1, (0,))
        m = subquotient(free, [(X1,)], [(X1,)])
        assert m.is_zero() and length(m) == 0

    def test_syzygy_module_is_free(self):
        free = GradedFreeModule(R2, (0, 0))
        m = subquotient(free, [(Y, -X)], [])
        hs = hilbert_series(m)
        assert hs.numerator == IntLaurent({1: 1})
        assert hs.reduced() == (IntLaurent({1: 1}), (1, 1))

    def test_containment_failure_signals_upstream(self):
        free = GradedFreeModule(R1, (0,))
        with pytest.raises(ShapeError, match="image not inside kernel"):
            subquotient(free, [(X1 * X1,)], [(X1,)])


class TestHilbertSeries:
    def test_origin(self):
        m = PresentedModule.cokernel(GradedFreeModule(R2, (0,)), [(X,), (Y,)])
        assert hilbert_series(m).numerator == IntLaurent({0: 1, 1: -2, 2: 1})

    def test_dual_numbers(self):
        m = PresentedModule.cokernel(GradedFreeModule(R1, (0,)), [(X1 * X1,)])
        hs = hilbert_series(m)
        assert hs.coefficients(4) == {0: 1, 1: 1}
        assert hs.reduced() == (IntLaurent({0: 1, 1: 1}), ())

    def test_hyperplane_series(self):
        m = PresentedModule.cokernel(GradedFreeModule(R2, (0,)), [(X,)])
        hs = hilbert_series(m)
        assert hs.coefficients(10) == {d: 1 for d in range(11)}

    def test_direct_sum_additive(self):
        rng = random.Random(3)
        for _ in range(10):
            mods = []
            for _ in range(2):
                deg = rng.randint(1, 3)
                cols = [(rng.choice([X, Y]) ** deg,)]
                mods.append(PresentedModule.cokernel(GradedFreeModule(R2, (rng.randint(-1, 1),)), cols))
            a, b = mods
            assert hilbert_series(a.direct_sum(b)) == hilbert_series(a) + hilbert_series(b)

    def test_short_exact_triangular(self):
        # B = A (+) C with a triangular relation block linking them
        a_rel = X * X
        c_rel = Y
        amb = GradedFreeModule(R2, (0, 0))
        b = PresentedModule.cokernel(
            amb, [(a_rel, R2.zero()), (X * Y, c_rel)]
        )
        a = PresentedModule.cokernel(GradedFreeModule(R2, (0,)), [(a_rel,)])
        c = PresentedModule.cokernel(GradedFreeModule(R2, (0,)), [(c_rel,)])
        assert hilbert_series(b) == hilbert_series(a) + hilbert_series(c)

    def test_weight_zero_refused(self):
        ring = PolyRing(("x", "t"), (1, 0))
        m = PresentedModule.cokernel(GradedFreeModule(ring, (0,)), [(ring.var("t"),)])
        with pytest.raises(UngradedError, match="specialize"):
            hilbert_series(m)

    def test_inhomogeneous_refused(self):
        m = PresentedModule.cokernel(GradedFreeModule(R2, (0,)), [(X + R2.one(),)])
        with pytest.raises(UngradedError):
            hilbert_series(m)

    def test_staircase_against_bruteforce(self):
        # acceptance substrate: series vs direct standard-monomial counts
        rng = random.Random(17)
        checked = 0
        for trial in range(40):
            nvars = rng.randint(1, 3)
            ring = PolyRing(tuple("xyz"[:nvars]))
            gens = []
            for _ in range(rng.randint(1, 3)):
                mono = tuple(rng.randint(0, 3) for _ in range(nvars))
                if any(mono):
                    gens.append(ring.monomial(mono))
            if not gens:
                continue
            twist = rng.randint(0, 2)
            m = PresentedModule.cokernel(GradedFreeModule(ring, (twist,)), [(g,) for g in gens])
            hs = hilbert_series(m)
            got = hs.coefficients(10)
            brute = standard_monomials_by_degree(
                nvars, ring.weights, [g.leading_monomial() for g in gens], 10 - twist
            )
            expected = {d + twist: c for d, c in enumerate(brute) if c}
            assert got == {k: v for k, v in expected.items() if k <= 10}
            checked += 1
        assert checked >= 20


class TestLength:
    def test_fat_point(self):
        m = PresentedModule.cokernel(
            GradedFreeModule(R2, (0,)), [(X * X,), (X * Y,), (Y * Y,)]
        )
        assert length(m) == 3

    def test_zero_module(self):
        assert length(PresentedModule.zero(R2)) == 0

    def test_polynomial_ring_infinite(self):
        assert length(PresentedModule.free_module(GradedFreeModule(R1, (0,)))) is INFINITE

    def test_length_equals_numerator_at_one_after_cancel(self):
        rng = random.Random(23)
        for _ in range(10):
            a, b = rng.randint(1, 3), rng.randint(1, 3)
            m = PresentedModule.cokernel(
                GradedFreeModule(R2, (0,)), [(X ** a,), (Y ** b,)]
            )
            size = length(m)
            reduced, leftover = hilbert_series(m).reduced()
            assert leftover == ()
            assert reduced.evaluate_at_one() == size


class TestAnnihilator:
    def test_dual_numbers(self):
        m = PresentedModule.cokernel(GradedFreeModule(R1, (0,)), [(X1 * X1,)])
        assert [str(g) for g in annihilator(m).groebner_basis()] == ["x^2"]

    def test_direct_sum_intersects(self):
        m = PresentedModule.cokernel(GradedFreeModule(R2, (0,)), [(X,)]).direct_sum(
            PresentedModule.cokernel(GradedFreeModule(R2, (0,)), [(Y,)])
        )
        assert [str(g) for g in annihilator(m).groebner_basis()] == ["x*y"]

    def test_free_module_zero_annihilator(self):
        assert annihilator(PresentedModule.free_module(GradedFreeModule(R1, (0,)))).is_zero()


class TestSupport:
    def test_examples(self):
        fat = PresentedModule.cokernel(GradedFreeModule(R1, (0,)), [(X1 * X1,)])
        assert is_supported_on(fat, buchberger([X1]))
        free = PresentedModule.free_module(GradedFreeModule(R1, (0,)))
        assert not is_supported_on(free, buchberger([X1]))
        mixed = PresentedModule.cokernel(GradedFreeModule(R2, (0,)), [(X * X,), (X * Y,)])
        assert is_supported_on(mixed, buchberger([X]))

    def test_power_kills_generators_when_supported(self):
        # finite-length supported modules: g^k times each generator is a relation
        rng = random.Random(9)
        for _ in range(8):
            a, b = rng.randint(1, 3), rng.randint(1, 3)
            m = PresentedModule.cokernel(GradedFreeModule(R2, (0,)), [(X ** a,), (Y ** b,)])
            ideal = buchberger([X, Y])
            assert is_supported_on(m, ideal)
            for g in ideal.gens:
                found = False
                for k in range(1, 13):
                    if m.element_is_zero((g ** k,)):
                        found = True
                        break
                assert found


class TestSpecializeAndPrune:
    def test_specialize_verifies_annihilation(self):
        ring = PolyRing(("x", "t"), (1, 0))
        t = ring.var("t")
        killed = PresentedModule.cokernel(GradedFreeModule(ring, (0,)), [(t,), (ring.var("x") ** 2,)])
        small = specialize_parameter(killed, "t", 0)
        assert length(small) == 2
        free = PresentedModule.free_module(GradedFreeModule(ring, (0,)))
        with pytest.raises(ShapeError):
            specialize_parameter(free, "t", 0)

    def test_prune_is_isomorphism(self):
        m = PresentedModule.cokernel(
            GradedFreeModule(R2, (0, 1)),
            [(R2.one(), X), (X * Y, Y * Y)],
        )
        p = prune_presentation(m)
        assert p.ngens < m.ngens
        assert hilbert_series(p) == hilbert_series(m)
        assert length(p) == length(m)

"""Seeded lemma-verification suites and machine-readable reports.

Instance generators never search for supports: complexes are assembled
from Koszul blocks whose zero loci are constructed to match the declared
support ideal, so every generated instance satisfies the lemma hypotheses.
"""

from __future__ import annotations

import json
import random
import time

from . import __version__
from .cosection import CosectionModel, cosection_localized_gysin, zero_sigma_reduction_check
from .kclass import (
    KClass,
    class_additivity_check,
    deformation_family,
    gysin_commutes_check,
    localized_class,
    multiplicativity_check,
    proper_pushforward_check,
)
from .koszul import SectionCosectionPair, duality_isomorphism, koszul_complex, split_koszul_compare
from .modules import GradedFreeModule, ModuleMap, PresentedModule
from .periodic import PeriodicChainMap, TwoPeriodicComplex, tensor
from .rings import Ideal, PolyRing


class Report:
    """Suite outcome; serializes byte-identically for a fixed seed."""

    def __init__(self, suite, seed, count, records, timings=False):
        self.suite = suite
        self.seed = seed
        self.count = count
        self.records = records
        self.timings = timings

    @property
    def all_pass(self) -> bool:
        return all(r.get("verdict", False) for r in self.records)

    def to_dict(self):
        records = self.records
        if not self.timings:
            records = [{k: v for k, v in r.items() if k != "wall_time_ms"} for r in records]
        return {
            "schema": 1,
            "tool": "mfk",
            "version": __version__,
            "suite": self.suite,
            "seed": self.seed,
            "count": self.count,
            "records": records,
            "all_pass": self.all_pass,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    def to_text(self) -> str:
        lines = [f"suite {self.suite} (seed {self.seed}, {len(self.records)} instances)"]
        for r in self.records:
            mark = "pass" if r.get("verdict") else "FAIL"
            lines.append(f"  [{mark}] #{r['instance']:>3} {r['lemma']}: {r['inputs']}")
        lines.append("all pass" if self.all_pass else "FAILURES PRESENT")
        return "\n".join(lines) + "\n"


def _cls(c: KClass):
    return c.serialize()


def _kblock(ring, beta):
    """{0, beta} with the twist making the differential degree 0."""
    d = beta.homogeneous_degree()
    bundle = GradedFreeModule(ring, (d if d is not None else 0,))
    return koszul_complex(SectionCosectionPair(bundle, (ring.zero(),), (beta,)))


def _tensor_blocks(ring, betas):
    out = None
    for b in betas:
        block = _kblock(ring, b)
        out = block if out is None else tensor(out, block)
    return out


def _coeff_pool(ring, rng):
    """A coefficient module (or None) over Q[x,...]; all are graded."""
    free = GradedFreeModule(ring, (0,))
    x = ring.var(ring.names[0])
    choices = [None, (x * x,), (x * x * x,)]
    if len(ring.names) > 1:
        y = ring.var(ring.names[1])
        choices += [(x * x, x * y, y * y), (y * y,), (x * y,)]
    pick = rng.choice(choices)
    if pick is None:
        return None
    return PresentedModule.cokernel(free, [(p,) for p in pick])


def _record(lemma, idx, inputs, lhs, rhs, verdict, elapsed_ms):
    return {
        "lemma": lemma,
        "instance": idx,
        "inputs": inputs,
        "lhs": lhs,
        "rhs": rhs,
        "verdict": bool(verdict),
        "wall_time_ms": elapsed_ms,
    }


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, int((time.perf_counter() - t0) * 1000)


# -- the suites ------------------------------------------------------------------


def suite_additivity(seed, count):
    ring = PolyRing(("x", "y"))
    x, y = ring.gens()
    rng = random.Random(seed)
    x_level = [(x,), (x * x,), (x, x)]
    xy_level = [(x, y), (x * x, y), (x, y * y), (x + y, y), (x + y, x - y)]
    scalars = [x, y, x + y, ring.constant(2), x * y]
    records = []
    for i in range(count):
        if rng.random() < 0.5:
            betas = rng.choice(x_level)
            support = Ideal(ring, (x,))
        else:
            betas = rng.choice(xy_level)
            support = Ideal(ring, (x, y))
        a = _tensor_blocks(ring, betas)
        mode = rng.choice(["identity", "scalar", "zero"])
        if mode == "identity":
            f = PeriodicChainMap.identity(a)
            desc = f"f=id on blocks {[str(b) for b in betas]}"
        elif mode == "scalar":
            p = rng.choice(scalars)
            f = PeriodicChainMap.scalar(a, p)
            desc = f"f={p}*id on blocks {[str(b) for b in betas]}"
        else:
            betas2 = rng.choice(x_level if support.gens == (x,) else xy_level)
            b = _tensor_blocks(ring, betas2)
            f = PeriodicChainMap.zero(a, b)
            desc = f"f=0: {[str(t) for t in betas]} -> {[str(t) for t in betas2]}"
        coeff = _coeff_pool(ring, rng)
        desc += f", G={'O' if coeff is None else 'coker' + str([str(r[0]) for r in coeff.rels])}"
        verdict, ms = _timed(lambda: class_additivity_check(f, coeff, support))
        records.append(_record("additivity-of-classes", i, desc, None, None, verdict, ms))
    return records


def suite_multiplicativity(seed, count):
    ring = PolyRing(("x", "y"))
    x, y = ring.gens()
    rng = random.Random(seed)
    records = []
    inner = Ideal(ring, (x,))
    outer = Ideal(ring, (x, y))
    for i in range(count):
        b1 = rng.choice([(x,), (x * x,), (x, x)])
        b2 = rng.choice([(y,), (y * y,)])
        e1 = _tensor_blocks(ring, b1)
        e2 = _tensor_blocks(ring, b2)
        coeff = _coeff_pool(ring, rng)
        desc = f"E1 blocks {[str(b) for b in b1]}, E2 blocks {[str(b) for b in b2]}"
        verdict, ms = _timed(lambda: multiplicativity_check(e1, e2, coeff, inner, outer))
        records.append(_record("multiplicativity", i, desc, None, None, verdict, ms))
    return records


def suite_gysin(seed, count):
    ring = PolyRing(("x", "t"), (1, 0))
    x, t = ring.gens()
    rng = random.Random(seed)
    support = Ideal(ring, (x,))
    records = []
    t_polys = [t, t - 1, x * t, x + x * t, t * t]
    for i in range(count):
        beta = rng.choice([x, x * x])
        base = _kblock(ring, beta)
        p = rng.choice(t_polys)
        if rng.random() < 0.5:
            plus = GradedFreeModule(ring, (0,))
            minus = GradedFreeModule(ring, (0,))
            ft = TwoPeriodicComplex(
                plus,
                minus,
                ModuleMap(plus, minus, ((ring.zero(),),), None),
                ModuleMap(minus, plus, ((p,),), None),
                check=False,
            )
            desc = f"{{0,{beta}}} (x) fold[{p}]"
        else:
            ft = None
            desc = f"{{0,{beta}}} alone"
        e = base if ft is None else tensor(base, ft)
        verdict, ms = _timed(lambda: gysin_commutes_check(e, support))
        records.append(_record("gysin-commutes", i, desc, None, None, verdict, ms))
    return records


def suite_deformation(seed, count):
    rng = random.Random(seed)
    records = []
    ring1 = PolyRing(("x",))
    x1 = ring1.var("x")
    fixed_g = PresentedModule.cokernel(GradedFreeModule(ring1, (0,)), [(x1 * x1,)])
    ring2 = PolyRing(("x", "y"))
    x2, y2 = ring2.gens()
    for i in range(count):
        if i == 0:
            e = _kblock(ring1, x1)
            coeff = fixed_g
            support = Ideal(ring1, (x1,))
            desc = "A = {0,x} (x) Y(Q[x]/(x^2))"
        elif rng.random() < 0.5:
            beta = rng.choice([x1, x1 * x1])
            e = _kblock(ring1, beta)
            coeff = rng.choice([None, fixed_g])
            support = Ideal(ring1, (x1,))
            desc = f"block {beta} over Q[x], G={'O' if coeff is None else 'Q[x]/(x^2)'}"
        else:
            e = tensor(_kblock(ring2, x2), _kblock(ring2, y2))
            coeff = _coeff_pool(ring2, rng)
            support = Ideal(ring2, (x2, y2))
            desc = "Koszul(x,y) over Q[x,y]"

        def run():
            fam = deformation_family(e, support, coeff)
            return fam

        fam, ms = _timed(run)
        verdict = fam.zero_matches and fam.one_matches
        records.append(
            _record(
                "deformation-endpoints",
                i,
                desc,
                _cls(fam.fiber_classes[0]),
                _cls(fam.fiber_classes[1]),
                verdict,
                ms,
            )
        )
    return records


def suite_duality(seed, count):
    rng = random.Random(seed)
    ring2 = PolyRing(("x", "y"))
    x2, y2 = ring2.gens()
    ring3 = PolyRing(("x", "y", "z"))
    x3, y3, z3 = ring3.gens()
    zero2, zero3 = ring2.zero(), ring3.zero()
    fixed = [
        SectionCosectionPair(GradedFreeModule(ring2, (1,)), (zero2,), (x2,)),
        SectionCosectionPair(GradedFreeModule(ring2, (-1,)), (y2,), (zero2,)),
        SectionCosectionPair(GradedFreeModule(ring2, (0, 0)), (y2, -x2), (x2, y2)),
        SectionCosectionPair(GradedFreeModule(ring3, (1, -1)), (zero3, z3), (x3, zero3)),
        SectionCosectionPair(GradedFreeModule(ring3, (0, 0, 0)), (y3, -x3, zero3), (x3, y3, z3)),
    ]
    records = []
    for i in range(count):
        if i < len(fixed):
            pair = fixed[i]
            desc = f"rank {pair.rank}: alpha={[str(a) for a in pair.alpha]}, beta={[str(b) for b in pair.beta]}"
        else:
            r = rng.choice([1, 2, 3])
            split = rng.sample(range(r), rng.randint(0, r))
            alpha, beta, twists = [], [], []
            pool3 = [x3, y3, z3, x3 * y3, z3 * z3]
            for slot in range(r):
                if slot in split:
                    b = rng.choice(pool3)
                    beta.append(b)
                    alpha.append(zero3)
                    twists.append(b.homogeneous_degree())
                else:
                    a = rng.choice(pool3)
                    alpha.append(a)
                    beta.append(zero3)
                    twists.append(-a.homogeneous_degree())
            pair = SectionCosectionPair(GradedFreeModule(ring3, tuple(twists)), alpha, beta)
            desc = f"rank {r}: alpha={[str(a) for a in alpha]}, beta={[str(b) for b in beta]}"

        def run():
            data = duality_isomorphism(pair)
            # every block row/column of the star map holds exactly one constant
            ok = True
            for f in (data.iso.f_plus, data.iso.f_minus):
                for row in f.rows:
                    nz = [p for p in row if not p.is_zero()]
                    if len(nz) > 1 or any(not p.is_constant() for p in nz):
                        ok = False
            return ok

        verdict, ms = _timed(run)
        records.append(_record("koszul-duality", i, desc, None, None, verdict, ms))
    return records


def suite_splitting(seed, count):
    ring = PolyRing(("x", "y"))
    x, y = ring.gens()
    rng = random.Random(seed)
    records = []
    for i in range(count):
        beta_k = rng.choice([x, x * x, x + y])
        alpha_q = rng.choice([y, y * y, x - y, ring.zero()])
        if rng.random() < 0.15:
            beta_k = ring.zero()
        k_bundle = GradedFreeModule(ring, (beta_k.homogeneous_degree() or 0,))
        q_bundle = GradedFreeModule(ring, (-(alpha_q.homogeneous_degree() or 0),))
        gens = [g for g in (beta_k, alpha_q) if not g.is_zero()]
        support = Ideal(ring, tuple(gens))
        coeff = _coeff_pool(ring, rng)
        if coeff is None:
            coeff = PresentedModule.free_module(GradedFreeModule(ring, (0,)))
        desc = f"beta_K={beta_k}, alpha_Q={alpha_q}"

        def run():
            left, right = split_koszul_compare(
                k_bundle, q_bundle, (alpha_q,), (beta_k,), coeff, support
            )
            return left.equals(right), left, right

        (verdict, left, right), ms = _timed(run)
        records.append(_record("koszul-splitting", i, desc, _cls(left), _cls(right), verdict, ms))
    return records


def suite_pushforward(seed, count):
    ring = PolyRing(("x", "y"))
    x, y = ring.gens()
    rng = random.Random(seed)
    records = []
    support = Ideal(ring, (x,))
    for i in range(count):
        beta = rng.choice([x, x * x])
        e = _kblock(ring, beta)
        j_gens = rng.choice([(y,), (y * y,), (y - x,)])
        closed = Ideal(ring, j_gens)
        extra = rng.choice([(), (x * x * x,)])
        coeff = PresentedModule.cokernel(
            GradedFreeModule(ring, (0,)), [(g,) for g in j_gens + extra]
        )
        desc = f"E={{0,{beta}}}, J={[str(g) for g in j_gens]}, extra={[str(g) for g in extra]}"

        def run():
            return proper_pushforward_check(e, closed, coeff, support)

        verdict, ms = _timed(run)
        records.append(_record("proper-pushforward", i, desc, None, None, verdict, ms))
    return records


def suite_sigma_zero(seed, count):
    rng = random.Random(seed)
    ring1 = PolyRing(("x",))
    ring2 = PolyRing(("x", "y"))
    configs = [
        (ring1, (0,)),
        (ring1, (1,)),
        (ring1, (0, 0)),
        (ring2, (0,)),
        (ring1, ()),
    ]
    records = []
    for i in range(count):
        base, twists = configs[i % len(configs)]
        bundle = GradedFreeModule(base, twists)
        model = CosectionModel(base, bundle, (base.zero(),) * bundle.rank)
        ring = model.ring
        picks = [()]
        if model.taut.fiber_vars:
            picks.append((ring.var(model.taut.fiber_vars[0]),))
        picks.append((ring.var("x"),))
        rels = rng.choice(picks)
        coeff = PresentedModule.cokernel(GradedFreeModule(ring, (0,)), [(p,) for p in rels])
        desc = f"F rank {bundle.rank} over {base!r}, G rels {[str(p) for p in rels]}"
        verdict, ms = _timed(lambda: zero_sigma_reduction_check(model, coeff))
        records.append(_record("sigma-zero-reduction", i, desc, None, None, verdict, ms))
    return records


def suite_worked_examples(seed, count):
    ring1 = PolyRing(("x",))
    model = CosectionModel(ring1, GradedFreeModule(ring1, (0,)), (ring1.var("x"),), ("y",))
    ring = model.ring
    x, y = ring.var("x"), ring.var("y")
    records = []

    def rec(i, desc, fn, expect_len):
        cls, ms = _timed(fn)
        verdict = cls.length_diff == expect_len
        records.append(
            _record("worked-example", i, desc, _cls(cls), {"length": expect_len}, verdict, ms)
        )

    g_zw = PresentedModule.cokernel(GradedFreeModule(ring, (0,)), [(x * y,)])
    rec(0, "xy-model, G = O_{Z(w)}", lambda: cosection_localized_gysin(model, g_zw), 0)
    g_vx = PresentedModule.cokernel(GradedFreeModule(ring, (0,)), [(x,)])
    rec(1, "xy-model, G = O_{V(x)}", lambda: cosection_localized_gysin(model, g_vx), 1)

    model0 = CosectionModel(ring1, GradedFreeModule(ring1, (0,)), (ring1.zero(),), ("y",))
    coeff0 = PresentedModule.free_module(GradedFreeModule(model0.ring, (0,)))

    def zero_case():
        ok = zero_sigma_reduction_check(model0, coeff0)
        cls = cosection_localized_gysin(model0, coeff0)
        return ok, cls

    (ok, cls), ms = _timed(zero_case)
    records.append(
        _record(
            "worked-example",
            2,
            "sigma = 0: zero-section class",
            _cls(cls),
            {"reduction": True},
            ok,
            ms,
        )
    )
    return records[:count] if count < len(records) else records


SUITES = {
    "additivity": (suite_additivity, 20),
    "multiplicativity": (suite_multiplicativity, 10),
    "gysin": (suite_gysin, 10),
    "deformation": (suite_deformation, 10),
    "duality": (suite_duality, 5),
    "splitting": (suite_splitting, 10),
    "pushforward": (suite_pushforward, 10),
    "sigma-zero": (suite_sigma_zero, 5),
    "worked-examples": (suite_worked_examples, 3),
}


def run_suite(name: str, seed: int = 0, count=None, timings: bool = False) -> Report:
    """Generate `count` seeded instances and run the suite's lemma check."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn, default_count = SUITES[name]
    count = default_count if count is None else int(count)
    records = fn(seed, count)
    return Report(name, seed, count, records, timings=timings)

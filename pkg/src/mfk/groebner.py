"""Module-level Groebner machinery: position-over-term bases, normal forms, syzygies.

Vectors in a free module R^r are handled internally as nested dicts
{position: {monomial: coefficient}}.  The order is position-over-term
(lower position wins) layered over the ring's monomial order; syzygy
generators are the Schreyer lifts of the S-pair reductions.
"""

from __future__ import annotations

from fractions import Fraction

from .rings import (
    Monomial,
    PolyRing,
    Polynomial,
    RingError,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

VDict = dict  # {pos: {mono: Fraction}}


def vec_from_polys(polys) -> VDict:
    out: VDict = {}
    for pos, p in enumerate(polys):
        if p is not None and p.terms:
            out[pos] = dict(p.terms)
    return out


def vec_to_polys(ring: PolyRing, rank: int, v: VDict) -> tuple:
    return tuple(ring.from_dict(v.get(pos, {})) for pos in range(rank))


def vec_is_zero(v: VDict) -> bool:
    return not v


def vec_copy(v: VDict) -> VDict:
    return {pos: dict(d) for pos, d in v.items()}


def vec_lt(ring: PolyRing, v: VDict):
    """Leading term (pos, mono, coeff) under position-over-term."""
    pos = min(v)
    mono = max(v[pos], key=ring._key)
    return pos, mono, v[pos][mono]


def vec_axpy(v: VDict, coeff: Fraction, mono: Monomial, w: VDict) -> None:
    """v += coeff * x^mono * w, in place."""
    if not coeff:
        return
    for pos, d in w.items():
        slot = v.get(pos)
        if slot is None:
            slot = {}
            v[pos] = slot
        get = slot.get
        for m, c in d.items():
            mm = tuple(x + y for x, y in zip(m, mono))
            old = get(mm)
            val = coeff * c if old is None else old + coeff * c
            if val:
                slot[mm] = val
            else:
                del slot[mm]
        if not slot:
            del v[pos]


def vec_scale(v: VDict, coeff: Fraction) -> VDict:
    return {pos: {m: c * coeff for m, c in d.items()} for pos, d in v.items()}


class ModuleGB:
    """Monic module Groebner basis, optionally tracking input cofactors."""

    __slots__ = ("ring", "rank", "elements", "cofactors", "inputs")

    def __init__(self, ring, rank, elements, cofactors, inputs):
        self.ring = ring
        self.rank = rank
        self.elements = elements  # list of (lt_pos, lt_mono, vdict)
        self.cofactors = cofactors  # list of vdicts over input indices, or None
        self.inputs = inputs

    def normal_form(self, v: VDict, with_quotients=False):
        """Full normal form; optionally the quotients over basis elements."""
        ring = self.ring
        work = vec_copy(v)
        remainder: VDict = {}
        quotients = [{} for _ in self.elements] if with_quotients else None
        while work:
            pos, mono, coeff = vec_lt(ring, work)
            hit = None
            for idx, (bpos, bmono, bvec) in enumerate(self.elements):
                if bpos == pos and mono_divides(bmono, mono):
                    hit = (idx, bvec, bmono)
                    break
            if hit is None:
                slot = remainder.setdefault(pos, {})
                slot[mono] = coeff
                del work[pos][mono]
                if not work[pos]:
                    del work[pos]
                continue
            idx, bvec, bmono = hit
            q = mono_div(mono, bmono)
            vec_axpy(work, -coeff, q, bvec)
            if with_quotients:
                qd = quotients[idx]
                qd[q] = qd.get(q, Fraction(0)) + coeff
        return (remainder, quotients) if with_quotients else remainder


def module_groebner(ring: PolyRing, rank: int, vectors, track: bool = False) -> ModuleGB:
    """Buchberger at module level (chain criterion only; the product
    criterion is unsound for modules)."""
    inputs = tuple(vec_copy(v) for v in vectors)
    elements = []
    cofactors = [] if track else None

    def add(v: VDict, cof):
        pos, mono, coeff = vec_lt(ring, v)
        elements.append((pos, mono, vec_scale(v, 1 / coeff)))
        if track:
            cofactors.append(vec_scale(cof, 1 / coeff))

    for i, v in enumerate(inputs):
        if not vec_is_zero(v):
            add(vec_copy(v), {i: {(0,) * ring.nvars: Fraction(1)}} if track else None)

    def reduce_tracked(v: VDict, cof):
        work, quotients = _partial_gb(ring, elements).normal_form(v, with_quotients=True)
        if track:
            for idx, qd in enumerate(quotients):
                for m, c in qd.items():
                    vec_axpy(cof, -c, m, cofactors[idx])
        return work, cof

    def _partial_gb(ring, elements):
        return ModuleGB(ring, rank, elements, None, ())

    import heapq

    heap = []
    pending = set()

    def push(i, j):
        pending.add((i, j))
        heapq.heappush(heap, (ring._key(mono_lcm(elements[i][1], elements[j][1])), i, j))

    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            if elements[i][0] == elements[j][0]:
                push(i, j)

    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        pos_i, lm_i, _ = elements[i]
        pos_j, lm_j, _ = elements[j]
        l = mono_lcm(lm_i, lm_j)
        skip = False
        for k in range(len(elements)):
            if k in (i, j) or elements[k][0] != pos_i:
                continue
            if mono_divides(elements[k][1], l):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a not in pending and b not in pending:
                    skip = True
                    break
        if skip:
            continue
        s: VDict = {}
        vec_axpy(s, Fraction(1), mono_div(l, lm_i), elements[i][2])
        vec_axpy(s, Fraction(-1), mono_div(l, lm_j), elements[j][2])
        cof: VDict = {}
        if track:
            vec_axpy(cof, Fraction(1), mono_div(l, lm_i), cofactors[i])
            vec_axpy(cof, Fraction(-1), mono_div(l, lm_j), cofactors[j])
        r, cof = reduce_tracked(s, cof)
        if not vec_is_zero(r):
            add(r, cof)
            new = len(elements) - 1
            for k in range(new):
                if elements[k][0] == elements[new][0]:
                    push(k, new)

    return ModuleGB(ring, rank, elements, cofactors, inputs)


def syzygies_of_vectors(ring: PolyRing, rank: int, vectors) -> list:
    """Generators of {c in R^k : sum c_i v_i = 0} via Schreyer's theorem.

    Returns vdicts over the input index space, deterministically ordered.
    """
    vectors = list(vectors)
    k = len(vectors)
    nonzero = [i for i, v in enumerate(vectors) if not vec_is_zero(v)]
    out = []
    unit = (0,) * ring.nvars
    # zero inputs contribute coordinate syzygies
    for i in range(k):
        if i not in nonzero:
            out.append({i: {unit: Fraction(1)}})
    if not nonzero:
        return out
    gb = module_groebner(ring, rank, [vectors[i] for i in nonzero], track=True)

    def to_full(cof: VDict) -> VDict:
        return {nonzero[p]: dict(d) for p, d in cof.items()}

    # identity-defect syzygies: e_i - (division of v_i by the GB)
    for local_i, i in enumerate(nonzero):
        rem, quotients = gb.normal_form(vectors[i], with_quotients=True)
        if not vec_is_zero(rem):
            raise RingError("input vector failed to reduce inside its own module")
        delta: VDict = {local_i: {unit: Fraction(1)}}
        for idx, qd in enumerate(quotients):
            for m, c in qd.items():
                vec_axpy(delta, -c, m, gb.cofactors[idx])
        if not vec_is_zero(delta):
            out.append(to_full(delta))
    # Schreyer syzygies from every same-position S-pair of the GB
    n = len(gb.elements)
    for a in range(n):
        for b in range(a + 1, n):
            pos_a, lm_a, va = gb.elements[a]
            pos_b, lm_b, vb = gb.elements[b]
            if pos_a != pos_b:
                continue
            l = mono_lcm(lm_a, lm_b)
            s: VDict = {}
            vec_axpy(s, Fraction(1), mono_div(l, lm_a), va)
            vec_axpy(s, Fraction(-1), mono_div(l, lm_b), vb)
            rem, quotients = gb.normal_form(s, with_quotients=True)
            if not vec_is_zero(rem):
                raise RingError("S-pair failed to reduce over a Groebner basis")
            z: VDict = {}
            vec_axpy(z, Fraction(1), mono_div(l, lm_a), gb.cofactors[a])
            vec_axpy(z, Fraction(-1), mono_div(l, lm_b), gb.cofactors[b])
            for idx, qd in enumerate(quotients):
                for m, c in qd.items():
                    vec_axpy(z, -c, m, gb.cofactors[idx])
            if not vec_is_zero(z):
                out.append(to_full(z))
    return _dedupe(ring, out)


def _dedupe(ring: PolyRing, vdicts: list) -> list:
    seen = set()
    out = []
    for v in vdicts:
        pos0, mono0, coeff0 = vec_lt(ring, v)
        normal = vec_scale(v, 1 / coeff0)
        key = tuple(
            (pos, tuple(sorted(d.items(), key=lambda mc: ring._key(mc[0]), reverse=True)))
            for pos, d in sorted(normal.items())
        )
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out


class TrackedSpan:
    """Tracked Groebner basis of a span, reusable for repeated membership lifts."""

    __slots__ = ("ring", "rank", "gb")

    def __init__(self, ring: PolyRing, rank: int, vectors):
        self.ring = ring
        self.rank = rank
        self.gb = module_groebner(ring, rank, vectors, track=True)

    def lift(self, target: VDict):
        """Coefficients over the original vectors, or None if not in the span."""
        rem, quotients = self.gb.normal_form(target, with_quotients=True)
        if not vec_is_zero(rem):
            return None
        out: VDict = {}
        for idx, qd in enumerate(quotients):
            for m, c in qd.items():
                vec_axpy(out, c, m, self.gb.cofactors[idx])
        return out


def member_with_lift(ring: PolyRing, rank: int, vectors, target: VDict):
    """If target lies in the span of `vectors`, return coefficients over them, else None."""
    return TrackedSpan(ring, rank, vectors).lift(target)

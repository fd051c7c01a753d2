"""Staircase combinatorics: Hilbert numerators, standard-monomial counts, Laurent helpers."""

from __future__ import annotations

from .rings import Monomial, mono_divides


class IntLaurent:
    """Integer Laurent polynomial in one variable t, as {degree: coeff}."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        d = {k: int(v) for k, v in (coeffs or {}).items() if v}
        object.__setattr__(self, "coeffs", d)

    def __setattr__(self, *a):
        raise AttributeError("IntLaurent is immutable")

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def t_power(cls, d, c=1):
        return cls({d: c})

    @classmethod
    def one_minus_t(cls, w):
        """1 - t^w."""
        return cls({0: 1, w: -1})

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        d = dict(self.coeffs)
        for k, v in other.coeffs.items():
            d[k] = d.get(k, 0) + v
        return IntLaurent(d)

    def __neg__(self):
        return IntLaurent({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntLaurent({k: v * other for k, v in self.coeffs.items()})
        d = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                d[k1 + k2] = d.get(k1 + k2, 0) + v1 * v2
        return IntLaurent(d)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, IntLaurent) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def shift(self, d):
        return IntLaurent({k + d: v for k, v in self.coeffs.items()})

    def min_degree(self):
        return min(self.coeffs) if self.coeffs else 0

    def max_degree(self):
        return max(self.coeffs) if self.coeffs else 0

    def evaluate_at_one(self):
        return sum(self.coeffs.values())

    def exact_div(self, other: "IntLaurent"):
        """Quotient self/other if division is exact, else None."""
        if other.is_zero():
            return None
        if self.is_zero():
            return IntLaurent({})
        lo_s, lo_o = self.min_degree(), other.min_degree()
        rem = {k - lo_s: v for k, v in self.coeffs.items()}
        div = {k - lo_o: v for k, v in other.coeffs.items()}
        o_top = max(div)
        o_lead = div[o_top]
        q = {}
        while rem:
            top = max(rem)
            if top < o_top or rem[top] % o_lead:
                return None
            c = rem[top] // o_lead
            d = top - o_top
            q[d] = c
            for k, v in div.items():
                kk = k + d
                nv = rem.get(kk, 0) - c * v
                if nv:
                    rem[kk] = nv
                else:
                    rem.pop(kk, None)
        return IntLaurent({k + lo_s - lo_o: v for k, v in q.items()})

    def serialize(self):
        """Lowest-degree-first coefficient list with its starting degree."""
        if not self.coeffs:
            return {"low": 0, "coeffs": []}
        lo, hi = self.min_degree(), self.max_degree()
        return {"low": lo, "coeffs": [self.coeffs.get(d, 0) for d in range(lo, hi + 1)]}

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs, reverse=True):
            c = self.coeffs[d]
            if d == 0:
                body = str(abs(c))
            else:
                tp = "t" if d == 1 else f"t^{d}"
                body = tp if abs(c) == 1 else f"{abs(c)}*{tp}"
            parts.append(("- " if c < 0 else "+ ") + body)
        out = " ".join(parts)
        return "-" + out[2:] if out.startswith("- ") else out[2:]

    __repr__ = __str__


def minimalize_monomials(gens) -> list:
    """Minimal generators of the monomial ideal spanned by gens."""
    out = []
    for m in sorted(set(gens)):
        if not any(mono_divides(g, m) for g in out if g != m):
            out = [g for g in out if not mono_divides(m, g)]
            out.append(m)
    return sorted(out)


def quotient_numerator(weights, gens) -> IntLaurent:
    """Numerator N with HS(R/I) = N / prod(1 - t^w) for a monomial ideal I.

    Uses the pivot recursion N(I + (m)) = N(I) - t^deg(m) * N(I : m).
    Weight-0 variables contribute degree 0; callers must ensure the
    quotient is degreewise finite before trusting the series.
    """

    def wdeg(m):
        return sum(e * w for e, w in zip(m, weights))

    def rec(gens_sorted):
        gens_sorted = minimalize_monomials(gens_sorted)
        if not gens_sorted:
            return IntLaurent.one()
        if any(not any(m) for m in gens_sorted):  # contains 1
            return IntLaurent({})
        m = gens_sorted[-1]
        rest = gens_sorted[:-1]
        colon = [tuple(max(e - f, 0) for e, f in zip(g, m)) for g in rest]
        return rec(rest) - IntLaurent.t_power(wdeg(m)) * rec(colon)

    return rec(list(gens))


def artinian_bounds(nvars: int, gens):
    """Per-variable pure-power bounds if R/I is finite dimensional, else None."""
    if any(not any(m) for m in gens):  # unit ideal
        return (0,) * nvars
    bounds = []
    for i in range(nvars):
        pure = [m[i] for m in gens if m[i] and all(e == 0 for j, e in enumerate(m) if j != i)]
        if not pure:
            return None
        bounds.append(min(pure))
    return tuple(bounds)


def count_standard_monomials(nvars: int, gens):
    """Number of monomials outside the ideal; None when infinite."""
    gens = minimalize_monomials(gens)
    bounds = artinian_bounds(nvars, gens)
    if bounds is None:
        return None
    from itertools import product

    count = 0
    for expo in product(*(range(b) for b in bounds)):
        if not any(mono_divides(g, expo) for g in gens):
            count += 1
    return count


def standard_monomials_by_degree(nvars: int, weights, gens, max_degree: int):
    """Brute-force staircase count per weighted degree, degrees 0..max_degree.

    Independent oracle for Hilbert series; requires all weights >= 1.
    """
    if any(w < 1 for w in weights):
        raise ValueError("weight-0 variable: staircase per degree is not finite")
    gens = minimalize_monomials(gens)
    counts = [0] * (max_degree + 1)

    def walk(prefix, i, deg):
        if deg > max_degree:
            return
        if i == nvars:
            if not any(mono_divides(g, tuple(prefix)) for g in gens):
                counts[deg] += 1
            return
        e = 0
        while deg + e * weights[i] <= max_degree:
            walk(prefix + [e], i + 1, deg + e * weights[i])
            e += 1

    walk([], 0, 0)
    return counts


def series_coefficients(numerator: IntLaurent, weights, max_degree: int):
    """Power-series coefficients of numerator / prod(1 - t^w) up to max_degree."""
    lo = min(0, numerator.min_degree())
    size = max_degree - lo + 1
    coeffs = [0] * size
    for d, c in numerator.coeffs.items():
        if d <= max_degree:
            coeffs[d - lo] += c
    for w in weights:
        if w < 1:
            raise ValueError("weight-0 variable in denominator")
        for i in range(w, size):
            coeffs[i] += coeffs[i - w]
    return {d: coeffs[d - lo] for d in range(lo, max_degree + 1) if coeffs[d - lo]}

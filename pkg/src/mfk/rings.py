"""Exact multivariate polynomial arithmetic over Q, monomial orders, Buchberger."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator

Monomial = tuple  # exponent vectors, one slot per ring variable


class RingError(ValueError):
    """Malformed ring data or mixed-ring arithmetic."""


class ParseError(ValueError):
    """Rejected polynomial text; carries position information."""

    def __init__(self, message, pos=None):
        super().__init__(message if pos is None else f"{message} (at column {pos + 1})")
        self.pos = pos


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True iff a | b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(min(x, y) for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


class PolyRing:
    """Q[x_1..x_n] with per-variable weights and a fixed monomial order.

    Weights grade the ring for Hilbert-series purposes only; the monomial
    order always uses ordinary total degree so that weight-0 deformation
    parameters stay compatible with a well-order.  Weight 0 is legal only
    for designated deformation parameters (flagged by the weight itself).
    """

    __slots__ = ("names", "weights", "order", "_index", "_key")

    def __init__(self, names, weights=None, order="degrevlex"):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise RingError(f"duplicate variable names in {names}")
        for n in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                raise RingError(f"bad variable name {n!r}")
        if weights is None:
            weights = (1,) * len(names)
        weights = tuple(int(w) for w in weights)
        if len(weights) != len(names):
            raise RingError("weights/names length mismatch")
        if any(w < 0 for w in weights):
            raise RingError("weights must be >= 0 (0 only for deformation parameters)")
        if order not in ("degrevlex", "lex"):
            raise RingError(f"unknown monomial order {order!r}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})
        if order == "degrevlex":
            key = lambda m: (sum(m), tuple(-e for e in reversed(m)))
        else:
            key = lambda m: m
        object.__setattr__(self, "_key", key)

    def __setattr__(self, *a):
        raise AttributeError("PolyRing is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.weights == other.weights
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.names, self.weights, self.order))

    def __repr__(self):
        ws = ",".join(map(str, self.weights))
        return f"Q[{','.join(self.names)}; weights {ws}; {self.order}]"

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def deformation_vars(self) -> tuple:
        """Names of weight-0 variables (graded ops refuse while these are live)."""
        return tuple(n for n, w in zip(self.names, self.weights) if w == 0)

    def mono_key(self, m: Monomial):
        return self._key(m)

    def mono_cmp_max(self, monos: Iterable[Monomial]) -> Monomial:
        return max(monos, key=self._key)

    def weighted_degree(self, m: Monomial) -> int:
        return sum(e * w for e, w in zip(m, self.weights))

    # -- constructors -------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return Polynomial(self, (((0,) * self.nvars, c),))

    def var(self, name: str) -> "Polynomial":
        i = self._index.get(name)
        if i is None:
            raise RingError(f"{name!r} is not a variable of {self}")
        m = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, ((m, Fraction(1)),))

    def monomial(self, expo: Monomial, coeff=1) -> "Polynomial":
        coeff = Fraction(coeff)
        if coeff == 0:
            return self.zero()
        return Polynomial(self, ((tuple(expo), coeff),))

    def from_dict(self, d: dict) -> "Polynomial":
        terms = tuple(
            (m, c) for m, c in sorted(d.items(), key=lambda mc: self._key(mc[0]), reverse=True) if c
        )
        return Polynomial(self, terms)

    def gens(self) -> tuple:
        return tuple(self.var(n) for n in self.names)

    # -- ring surgery --------------------------------------------------

    def extend(self, names, weights) -> "PolyRing":
        """New ring with extra trailing variables; collision is an error."""
        for n in names:
            if n in self._index:
                raise RingError(f"fresh-variable name collision: {n!r}")
        return PolyRing(self.names + tuple(names), self.weights + tuple(weights), self.order)

    def without_var(self, name: str) -> "PolyRing":
        i = self._index[name]
        return PolyRing(
            self.names[:i] + self.names[i + 1 :],
            self.weights[:i] + self.weights[i + 1 :],
            self.order,
        )

    def lift(self, f: "Polynomial") -> "Polynomial":
        """Map a polynomial from a sub-ring (variables matched by name)."""
        if f.ring == self:
            return f
        pos = []
        for n in f.ring.names:
            if n not in self._index:
                raise RingError(f"cannot lift: variable {n!r} missing in {self}")
            pos.append(self._index[n])
        d = {}
        for m, c in f.terms:
            new = [0] * self.nvars
            for p, e in zip(pos, m):
                new[p] = e
            d[tuple(new)] = c
        return self.from_dict(d)

    # -- parsing -------------------------------------------------------

    _TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*/^()]))")

    def parse(self, text: str) -> "Polynomial":
        """Parse `term (('+'|'-') term)*`, term = signed coeff and/or var powers."""
        tokens = []
        pos = 0
        while pos < len(text):
            m = self._TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"bad character {text[pos]!r}", pos)
            if m.lastindex:
                tokens.append((m.lastindex, m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        result: dict = {}
        i = 0
        n = len(tokens)

        def term(i):
            coeff = Fraction(1)
            expo = [0] * self.nvars
            saw_factor = False
            while True:
                if i >= n:
                    break
                kind, val, at = tokens[i]
                if kind == 1:  # integer, maybe a fraction
                    num = int(val)
                    i += 1
                    if i < n and tokens[i][1] == "/":
                        if i + 1 >= n or tokens[i + 1][0] != 1:
                            raise ParseError("expected integer denominator", tokens[i][2])
                        den = int(tokens[i + 1][1])
                        if den == 0:
                            raise ParseError("zero denominator", tokens[i + 1][2])
                        coeff *= Fraction(num, den)
                        i += 2
                    else:
                        coeff *= num
                elif kind == 2:  # variable, maybe with ^nat
                    j = self._index.get(val)
                    if j is None:
                        raise ParseError(f"unknown variable {val!r}", at)
                    e = 1
                    i += 1
                    if i < n and tokens[i][1] == "^":
                        if i + 1 >= n or tokens[i + 1][0] != 1:
                            raise ParseError("expected exponent", tokens[i][2])
                        e = int(tokens[i + 1][1])
                        i += 2
                    expo[j] += e
                else:
                    raise ParseError(f"unexpected {val!r}", at)
                saw_factor = True
                if i < n and tokens[i][1] == "*":
                    i += 1
                    continue
                break
            if not saw_factor:
                raise ParseError("empty term", tokens[i][2] if i < n else None)
            return coeff, tuple(expo), i

        sign = 1
        if i < n and tokens[i][1] in "+-":
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        if i >= n:
            raise ParseError("empty polynomial", None)
        while True:
            coeff, expo, i = term(i)
            result[expo] = result.get(expo, Fraction(0)) + sign * coeff
            if i >= n:
                break
            kind, val, at = tokens[i]
            if val not in "+-":
                raise ParseError(f"expected '+' or '-', got {val!r}", at)
            sign = -1 if val == "-" else 1
            i += 1
            if i >= n:
                raise ParseError("dangling sign", at)
        return self.from_dict(result)


class Polynomial:
    """Sparse polynomial: canonically sorted term tuple, no zero coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms):
        self.ring = ring
        self.terms = terms  # tuple of (monomial, Fraction), descending in ring order

    # -- basic queries --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(self.terms[0][0]))

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise RingError(f"{self} is not constant")
        return self.terms[0][1]

    def leading_monomial(self) -> Monomial:
        return self.terms[0][0]

    def leading_coeff(self) -> Fraction:
        return self.terms[0][1]

    def as_dict(self) -> dict:
        return dict(self.terms)

    def total_degree(self):
        if not self.terms:
            return None
        return max(mono_degree(m) for m, _ in self.terms)

    def weighted_degree(self):
        if not self.terms:
            return None
        return max(self.ring.weighted_degree(m) for m, _ in self.terms)

    def homogeneous_degree(self):
        """Weighted degree if homogeneous, else None; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        degs = {self.ring.weighted_degree(m) for m, _ in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def degree_in(self, name: str) -> int:
        i = self.ring._index[name]
        return max((m[i] for m, _ in self.terms), default=0)

    # -- arithmetic ------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise RingError("mixed-ring arithmetic")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        self._check(other)
        d = dict(self.terms)
        for m, c in other.terms:
            v = d.get(m)
            if v is None:
                d[m] = c
            else:
                v += c
                if v:
                    d[m] = v
                else:
                    del d[m]
        return self.ring.from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return self.ring.zero()
            return Polynomial(self.ring, tuple((m, k * c) for m, k in self.terms))
        self._check(other)
        d = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = mono_mul(m1, m2)
                v = d.get(m)
                if v is None:
                    d[m] = c1 * c2
                else:
                    v += c1 * c2
                    if v:
                        d[m] = v
                    else:
                        del d[m]
        return self.ring.from_dict(d)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise RingError("negative power")
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return (
            isinstance(other, Polynomial) and self.ring == other.ring and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, self.terms))

    def substitute(self, values: dict) -> "Polynomial":
        """Substitute {varname: Polynomial | Fraction | int} simultaneously."""
        ring = self.ring
        subs = {}
        for name, v in values.items():
            if name not in ring._index:
                raise RingError(f"unknown variable {name!r}")
            subs[ring._index[name]] = v if isinstance(v, Polynomial) else ring.constant(v)
        out = ring.zero()
        for m, c in self.terms:
            piece = ring.constant(c)
            for i, e in enumerate(m):
                if not e:
                    continue
                if i in subs:
                    piece = piece * subs[i] ** e
                else:
                    piece = piece * ring.monomial(
                        tuple(e if j == i else 0 for j in range(ring.nvars))
                    )
            out = out + piece
        return out

    def restrict_to(self, ring: PolyRing) -> "Polynomial":
        """Reinterpret in a smaller ring; fails if a missing variable occurs."""
        pos = []
        for n in ring.names:
            pos.append(self.ring._index[n])
        keep = set(pos)
        d = {}
        for m, c in self.terms:
            for i, e in enumerate(m):
                if e and i not in keep:
                    raise RingError(f"variable {self.ring.names[i]!r} still occurs")
            d[tuple(m[p] for p in pos)] = c
        return ring.from_dict(d)

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            factors = []
            for name, e in zip(self.ring.names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            parts.append(("- " if c < 0 else "+ ") + body)
        out = " ".join(parts)
        return "-" + out[2:] if out.startswith("- ") else out[2:]

    __repr__ = __str__


# -- division and Buchberger (ideal level) ----------------------------------


def _dict_lt(ring: PolyRing, d: dict):
    return max(d, key=ring._key)


def _reduce_full(ring: PolyRing, f: dict, basis) -> dict:
    """Full normal form of f (dict) against monic basis [(lm, dict)]; mutates a copy."""
    work = dict(f)
    remainder: dict = {}
    while work:
        lm = _dict_lt(ring, work)
        lc = work[lm]
        for blm, b in basis:
            if mono_divides(blm, lm):
                q = mono_div(lm, blm)
                for m, c in b.items():
                    mm = mono_mul(m, q)
                    v = work.get(mm, Fraction(0)) - lc * c
                    if v:
                        work[mm] = v
                    else:
                        work.pop(mm, None)
                break
        else:
            remainder[lm] = lc
            del work[lm]
    return remainder


def _spoly(ring: PolyRing, f: dict, g: dict) -> dict:
    lf, lg = _dict_lt(ring, f), _dict_lt(ring, g)
    l = mono_lcm(lf, lg)
    qf, qg = mono_div(l, lf), mono_div(l, lg)
    cf, cg = f[lf], g[lg]
    out: dict = {}
    for m, c in f.items():
        out[mono_mul(m, qf)] = c / cf
    for m, c in g.items():
        mm = mono_mul(m, qg)
        v = out.get(mm, Fraction(0)) - c / cg
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _ideal_groebner(ring: PolyRing, gens) -> list:
    """Reduced Groebner basis (list of monic Polynomials, sorted descending)."""
    import heapq

    basis = []  # list of (lm, dict), monic
    for g in gens:
        if g.is_zero():
            continue
        d = g.as_dict()
        lc = d[_dict_lt(ring, d)]
        basis.append((_dict_lt(ring, d), {m: c / lc for m, c in d.items()}))
    heap = []
    pending = set()

    def push(i, j):
        pending.add((i, j))
        heapq.heappush(heap, (ring._key(mono_lcm(basis[i][0], basis[j][0])), i, j))

    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            push(i, j)

    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        lmi, lmj = basis[i][0], basis[j][0]
        l = mono_lcm(lmi, lmj)
        # product criterion: coprime leading monomials
        if l == mono_mul(lmi, lmj):
            continue
        # chain criterion (improved Buchberger): some k divides the lcm and
        # both mixed pairs have already left the queue
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if mono_divides(basis[k][0], l):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a not in pending and b not in pending:
                    skip = True
                    break
        if skip:
            continue
        s = _spoly(ring, dict(basis[i][1]), dict(basis[j][1]))
        r = _reduce_full(ring, s, basis)
        if r:
            lm = _dict_lt(ring, r)
            lc = r[lm]
            basis.append((lm, {m: c / lc for m, c in r.items()}))
            new = len(basis) - 1
            for k in range(new):
                push(k, new)

    # minimalize: drop elements whose lead is divisible by another lead
    keep = []
    for idx, (lm, _) in enumerate(basis):
        dominated = False
        for k, (lm2, _) in enumerate(basis):
            if k == idx:
                continue
            if mono_divides(lm2, lm) and (lm2 != lm or k < idx):
                dominated = True
                break
        if not dominated:
            keep.append(idx)
    minimal = [basis[k] for k in keep]
    # tail-reduce each against the others
    reduced = []
    for idx, (lm, d) in enumerate(minimal):
        others = [minimal[k] for k in range(len(minimal)) if k != idx]
        r = _reduce_full(ring, d, others)
        lc = r[_dict_lt(ring, r)]
        reduced.append({m: c / lc for m, c in r.items()})
    polys = [ring.from_dict(d) for d in reduced]
    polys.sort(key=lambda p: ring._key(p.leading_monomial()), reverse=True)
    return polys


class Ideal:
    """Ideal of a PolyRing with a lazily computed reduced Groebner basis."""

    __slots__ = ("ring", "gens", "_gb", "_nf_basis")

    def __init__(self, ring: PolyRing, gens: Iterable[Polynomial]):
        gens = tuple(gens)
        for g in gens:
            if g.ring != ring:
                raise RingError("mixed-ring input")
        self.ring = ring
        self.gens = gens
        self._gb = None
        self._nf_basis = None

    def groebner_basis(self) -> tuple:
        if self._gb is None:
            self._gb = tuple(_ideal_groebner(self.ring, self.gens))
        return self._gb

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingError("mixed-ring input")
        if self._nf_basis is None:
            self._nf_basis = [(g.leading_monomial(), g.as_dict()) for g in self.groebner_basis()]
        return self.ring.from_dict(_reduce_full(self.ring, f.as_dict(), self._nf_basis))

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def is_zero(self) -> bool:
        return not self.groebner_basis()

    def is_unit(self) -> bool:
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].is_constant()

    def __add__(self, other: "Ideal") -> "Ideal":
        if self.ring != other.ring:
            raise RingError("mixed-ring input")
        return Ideal(self.ring, self.gens + other.gens)

    def lift_to(self, ring: PolyRing) -> "Ideal":
        return Ideal(ring, tuple(ring.lift(g) for g in self.gens))

    def __eq__(self, other):
        return (
            isinstance(other, Ideal)
            and self.ring == other.ring
            and self.groebner_basis() == other.groebner_basis()
        )

    def __hash__(self):
        return hash((self.ring, self.groebner_basis()))

    def __repr__(self):
        return "ideal(" + ", ".join(str(g) for g in self.gens) + ")"


def buchberger(gens: Iterable[Polynomial]) -> Ideal:
    """Ideal with its reduced Groebner basis computed eagerly."""
    gens = tuple(gens)
    if not gens:
        raise RingError("empty generator list needs an explicit ring; use Ideal(ring, ())")
    ring = gens[0].ring
    ideal = Ideal(ring, gens)
    ideal.groebner_basis()
    return ideal


def radical_membership(g: Polynomial, ideal: Ideal) -> bool:
    """Rabinowitsch: g in sqrt(I) iff 1 in I + (1 - y*g) in R[y].

    A cheap power search (g^k for k <= 12) short-circuits the common case
    before the extended-ring Groebner basis is attempted.
    """
    ring = ideal.ring
    if g.ring != ring:
        raise RingError("mixed-ring input")
    if g.is_zero():
        return True
    p = ideal.normal_form(g)
    for _ in range(11):
        if p.is_zero():
            return True
        p = ideal.normal_form(p * g)
    if p.is_zero():
        return True
    fresh = "y_rad"
    while fresh in ring.names:
        fresh += "_"
    ext = ring.extend((fresh,), (1,))
    lifted = [ext.lift(p) for p in ideal.gens]
    lifted.append(ext.one() - ext.var(fresh) * ext.lift(g))
    return Ideal(ext, lifted).is_unit()

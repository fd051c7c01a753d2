"""Line-oriented session files: declarations plus command statements.

Grammar (one statement per line, '#' comments):

    ring NAME vars x,y weights 1,1 [order degrevlex|lex]
    ideal NAME ring R gens p, q, ...
    module NAME ring R twists 0,1
    coeff NAME ambient MOD [rels [[p, ...], ...]]
    map NAME from MOD to MOD matrix [[...]] [degree d]
    twoper NAME plus MOD minus MOD dplus [[...]] dminus [[...]] [base IDEAL]
    koszul NAME on MOD alpha [p, ...] beta [p, ...] [base IDEAL]
    taut NAME base RING F MOD sigma [p, ...] [fibers t1,t2]
    cosection NAME base RING F MOD sigma [p, ...] [fibers t1,t2]

    gb IDEAL
    homology TWOPER [coeff COEFF]
    tensor TWOPER TWOPER [as NAME]
    class TWOPER [coeff COEFF] support IDEAL
    gysin TWOPER at VALUE [support IDEAL]
    coslocal COSECTION coeff COEFF
    verify SUITE [seed N] [count N]

Module references are declared names or literals like R^2, R(-1)^1,
concatenated with ++ (R is the ring name).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .cosection import CosectionModel
from .koszul import SectionCosectionPair, koszul_complex
from .modules import GradedFreeModule, ModuleMap, PresentedModule
from .periodic import TwoPeriodicComplex, make_two_periodic
from .rings import Ideal, ParseError, PolyRing


class SessionError(ValueError):
    """Session-file diagnostic with line/column information."""

    def __init__(self, message, line, column=None):
        loc = f"line {line}" + ("" if column is None else f", column {column}")
        super().__init__(f"{loc}: {message}")
        self.line = line
        self.column = column


_MOD_LITERAL = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\((-?\d+)\))?\^(\d+)$")


def _tokenize(text: str, lineno: int):
    """Split a statement into words and bracketed groups."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            break
        if ch == "[":
            depth = 0
            j = i
            while j < n:
                if text[j] == "[":
                    depth += 1
                elif text[j] == "]":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            if depth != 0:
                raise SessionError("unbalanced bracket", lineno, i + 1)
            tokens.append(text[i : j + 1])
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] != "[":
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


def _split_top_level(body: str):
    """Split a bracket-group body on top-level commas."""
    parts = []
    depth = 0
    cur = []
    for ch in body:
        if ch == "[":
            depth += 1
            cur.append(ch)
        elif ch == "]":
            depth -= 1
            cur.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    last = "".join(cur).strip()
    if last:
        parts.append(last)
    return parts


class Statement:
    __slots__ = ("kind", "name", "args", "lineno", "echo")

    def __init__(self, kind, name, args, lineno, echo):
        self.kind = kind
        self.name = name
        self.args = args
        self.lineno = lineno
        self.echo = echo


_COMMANDS = ("gb", "homology", "tensor", "class", "gysin", "coslocal", "verify")
_DECLS = ("ring", "ideal", "module", "coeff", "map", "twoper", "koszul", "taut", "cosection")


class Session:
    """Named environment of declared objects plus the ordered command list."""

    def __init__(self):
        self.rings = {}
        self.ideals = {}
        self.modules = {}
        self.coeffs = {}
        self.maps = {}
        self.complexes = {}
        self.cosections = {}
        self.statements = []
        self._names = set()

    def _declare(self, name, lineno):
        if name in self._names:
            raise SessionError(f"name {name!r} already declared", lineno)
        self._names.add(name)

    def canonical(self) -> str:
        return "\n".join(s.echo for s in self.statements) + "\n"

    # -- reference resolution ------------------------------------------------

    def ring(self, name, lineno) -> PolyRing:
        if name not in self.rings:
            raise SessionError(f"unknown ring {name!r}", lineno)
        return self.rings[name]

    def ideal(self, name, lineno) -> Ideal:
        if name not in self.ideals:
            raise SessionError(f"unknown ideal {name!r}", lineno)
        return self.ideals[name]

    def module_ref(self, token, lineno) -> GradedFreeModule:
        if token in self.modules:
            return self.modules[token]
        parts = [p.strip() for p in token.split("++")]
        twists = []
        ring = None
        for part in parts:
            m = _MOD_LITERAL.match(part)
            if not m:
                raise SessionError(f"unknown module {token!r}", lineno)
            rname, twist, power = m.group(1), m.group(2), int(m.group(3))
            if rname not in self.rings:
                raise SessionError(f"unknown ring {rname!r} in module literal", lineno)
            r = self.rings[rname]
            if ring is None:
                ring = r
            elif ring != r:
                raise SessionError("mixed rings in module literal", lineno)
            twists.extend([-int(twist) if twist else 0] * power)
        return GradedFreeModule(ring, tuple(twists))

    def coeff(self, name, lineno) -> PresentedModule:
        if name not in self.coeffs:
            raise SessionError(f"unknown coefficient module {name!r}", lineno)
        return self.coeffs[name]

    def complex(self, name, lineno) -> TwoPeriodicComplex:
        if name not in self.complexes:
            raise SessionError(f"unknown 2-periodic complex {name!r}", lineno)
        return self.complexes[name]

    def cosection_model(self, name, lineno) -> CosectionModel:
        if name not in self.cosections:
            raise SessionError(f"unknown cosection model {name!r}", lineno)
        return self.cosections[name]


def _parse_poly(ring, text, lineno):
    try:
        return ring.parse(text)
    except ParseError as exc:
        raise SessionError(f"bad polynomial {text!r}: {exc}", lineno)


def _parse_row(ring, group, lineno):
    if not (group.startswith("[") and group.endswith("]")):
        raise SessionError("expected a bracketed row", lineno)
    body = group[1:-1].strip()
    if not body:
        return ()
    return tuple(_parse_poly(ring, part, lineno) for part in _split_top_level(body))


def _parse_matrix(ring, group, lineno, rows, cols):
    """[[p, ...], ...] row-major; validates the declared shape."""
    if not (group.startswith("[") and group.endswith("]")):
        raise SessionError("expected a bracketed matrix", lineno)
    body = group[1:-1].strip()
    row_groups = _split_top_level(body) if body else []
    out = []
    for idx, rg in enumerate(row_groups):
        if not (rg.startswith("[") and rg.endswith("]")):
            raise SessionError(f"matrix row {idx + 1} is not bracketed", lineno)
        row = _parse_row(ring, rg, lineno)
        out.append(row)
    if len(out) != rows:
        raise SessionError(f"matrix has {len(out)} rows, expected {rows}", lineno)
    for idx, row in enumerate(out):
        if len(row) != cols:
            raise SessionError(
                f"matrix row {idx + 1} has {len(row)} entries, expected {cols}", lineno
            )
    return tuple(out)


def _keyword_args(tokens, lineno, spec):
    """Parse `key value` pairs after the positional prefix, per spec dict."""
    out = {}
    i = 0
    while i < len(tokens):
        key = tokens[i]
        if key not in spec:
            raise SessionError(f"unexpected token {key!r}", lineno)
        if i + 1 >= len(tokens):
            raise SessionError(f"missing value for {key!r}", lineno)
        out[key] = tokens[i + 1]
        i += 2
    return out


def parse_session(text: str, default_order: str = "degrevlex") -> Session:
    """Parse and build every declaration; commands are validated and stored."""
    session = Session()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = _tokenize(line, lineno)
        if not tokens:
            continue
        kind = tokens[0]
        if kind in _DECLS:
            _parse_declaration(session, kind, tokens[1:], lineno, default_order)
        elif kind in _COMMANDS:
            _parse_command(session, kind, tokens[1:], lineno)
        else:
            raise SessionError(f"unknown statement {kind!r}", lineno)
    return session


def _parse_declaration(session, kind, tokens, lineno, default_order):
    if not tokens:
        raise SessionError(f"{kind} needs a name", lineno)
    name = tokens[0]
    rest = tokens[1:]
    if kind == "ring":
        kw = _keyword_args(rest, lineno, {"vars", "weights", "order"})
        if "vars" not in kw:
            raise SessionError("ring needs vars", lineno)
        names = tuple(v.strip() for v in kw["vars"].split(","))
        weights = None
        if "weights" in kw:
            try:
                weights = tuple(int(w) for w in kw["weights"].split(","))
            except ValueError:
                raise SessionError("weights must be integers", lineno)
        order = kw.get("order", default_order)
        try:
            ring = PolyRing(names, weights, order)
        except Exception as exc:
            raise SessionError(str(exc), lineno)
        session._declare(name, lineno)
        session.rings[name] = ring
        ws = ",".join(str(w) for w in ring.weights)
        echo = f"ring {name} vars {','.join(ring.names)} weights {ws} order {ring.order}"
    elif kind == "ideal":
        kw = _keyword_args(rest, lineno, {"ring", "gens"})
        ring = session.ring(kw.get("ring", ""), lineno)
        gens = ()
        if kw.get("gens"):
            gens = tuple(
                _parse_poly(ring, part, lineno) for part in kw["gens"].split(",") if part.strip()
            )
        session._declare(name, lineno)
        session.ideals[name] = Ideal(ring, gens)
        ring_name = [k for k, v in session.rings.items() if v == ring][0]
        echo = f"ideal {name} ring {ring_name} gens {','.join(str(g) for g in gens)}"
    elif kind == "module":
        kw = _keyword_args(rest, lineno, {"ring", "twists"})
        ring = session.ring(kw.get("ring", ""), lineno)
        twists = ()
        if kw.get("twists"):
            try:
                twists = tuple(int(t) for t in kw["twists"].split(","))
            except ValueError:
                raise SessionError("twists must be integers", lineno)
        session._declare(name, lineno)
        session.modules[name] = GradedFreeModule(ring, twists)
        ring_name = [k for k, v in session.rings.items() if v == ring][0]
        echo = f"module {name} ring {ring_name} twists {','.join(str(t) for t in twists)}"
    elif kind == "coeff":
        kw = _keyword_args(rest, lineno, {"ambient", "rels"})
        ambient = session.module_ref(kw.get("ambient", ""), lineno)
        rel_cols = ()
        if "rels" in kw:
            mat = _parse_matrix_any(ambient.ring, kw["rels"], lineno, ambient.rank)
            rel_cols = tuple(
                tuple(mat[i][j] for i in range(ambient.rank)) for j in range(len(mat[0]) if mat else 0)
            )
        session._declare(name, lineno)
        session.coeffs[name] = PresentedModule.cokernel(ambient, rel_cols)
        echo = f"coeff {name} ambient {kw.get('ambient')}" + (
            f" rels {kw['rels']}" if "rels" in kw else ""
        )
    elif kind == "map":
        kw = _keyword_args(rest, lineno, {"from", "to", "matrix", "degree"})
        src = session.module_ref(kw.get("from", ""), lineno)
        tgt = session.module_ref(kw.get("to", ""), lineno)
        mat = _parse_matrix(src.ring, kw.get("matrix", "[]"), lineno, tgt.rank, src.rank)
        degree = "infer"
        if "degree" in kw:
            degree = int(kw["degree"])
        try:
            session.maps[name] = ModuleMap(src, tgt, mat, degree)
        except Exception as exc:
            raise SessionError(str(exc), lineno)
        session._declare(name, lineno)
        echo = f"map {name} from {kw.get('from')} to {kw.get('to')} matrix {kw.get('matrix')}"
    elif kind == "twoper":
        kw = _keyword_args(rest, lineno, {"plus", "minus", "dplus", "dminus", "base"})
        plus = session.module_ref(kw.get("plus", ""), lineno)
        minus = session.module_ref(kw.get("minus", ""), lineno)
        dplus = _parse_matrix(plus.ring, kw.get("dplus", "[]"), lineno, minus.rank, plus.rank)
        dminus = _parse_matrix(plus.ring, kw.get("dminus", "[]"), lineno, plus.rank, minus.rank)
        base = session.ideal(kw["base"], lineno) if "base" in kw else None
        try:
            cx = make_two_periodic(
                plus,
                minus,
                ModuleMap(plus, minus, dplus),
                ModuleMap(minus, plus, dminus),
                base,
            )
        except Exception as exc:
            raise SessionError(str(exc), lineno)
        session._declare(name, lineno)
        session.complexes[name] = cx
        echo = (
            f"twoper {name} plus {kw.get('plus')} minus {kw.get('minus')} "
            f"dplus {kw.get('dplus')} dminus {kw.get('dminus')}"
            + (f" base {kw['base']}" if "base" in kw else "")
        )
    elif kind == "koszul":
        kw = _keyword_args(rest, lineno, {"on", "alpha", "beta", "base"})
        bundle = session.module_ref(kw.get("on", ""), lineno)
        alpha = _parse_row(bundle.ring, kw.get("alpha", "[]"), lineno)
        beta = _parse_row(bundle.ring, kw.get("beta", "[]"), lineno)
        base = session.ideal(kw["base"], lineno) if "base" in kw else None
        try:
            pair = SectionCosectionPair(bundle, alpha, beta, base)
            cx = koszul_complex(pair)
        except Exception as exc:
            raise SessionError(str(exc), lineno)
        session._declare(name, lineno)
        session.complexes[name] = cx
        echo = f"koszul {name} on {kw.get('on')} alpha {kw.get('alpha')} beta {kw.get('beta')}" + (
            f" base {kw['base']}" if "base" in kw else ""
        )
    elif kind in ("taut", "cosection"):
        kw = _keyword_args(rest, lineno, {"base", "F", "sigma", "fibers"})
        base_ring = session.ring(kw.get("base", ""), lineno)
        bundle = session.module_ref(kw.get("F", ""), lineno)
        sigma = _parse_row(base_ring, kw.get("sigma", "[]"), lineno)
        fibers = None
        if "fibers" in kw:
            fibers = tuple(f.strip() for f in kw["fibers"].split(","))
        try:
            model = CosectionModel(base_ring, bundle, sigma, fibers)
        except Exception as exc:
            raise SessionError(str(exc), lineno)
        session._declare(name, lineno)
        session.cosections[name] = model
        if kind == "taut":
            session.complexes[name] = model.koszul()
        echo = f"{kind} {name} base {kw.get('base')} F {kw.get('F')} sigma {kw.get('sigma')}" + (
            f" fibers {kw['fibers']}" if "fibers" in kw else ""
        )
    else:  # pragma: no cover
        raise SessionError(f"unhandled declaration {kind!r}", lineno)
    session.statements.append(Statement(kind, name, {}, lineno, echo))


def _parse_matrix_any(ring, group, lineno, rows):
    """Matrix with a declared row count and any number of columns."""
    if not (group.startswith("[") and group.endswith("]")):
        raise SessionError("expected a bracketed matrix", lineno)
    body = group[1:-1].strip()
    row_groups = _split_top_level(body) if body else []
    out = []
    for idx, rg in enumerate(row_groups):
        if not (rg.startswith("[") and rg.endswith("]")):
            raise SessionError(f"matrix row {idx + 1} is not bracketed", lineno)
        out.append(_parse_row(ring, rg, lineno))
    if len(out) != rows:
        raise SessionError(f"matrix has {len(out)} rows, expected {rows}", lineno)
    widths = {len(r) for r in out}
    if len(widths) > 1:
        raise SessionError("ragged matrix rows", lineno)
    return tuple(out)


def _parse_command(session, kind, tokens, lineno):
    args = {}
    if kind == "gb":
        if len(tokens) != 1:
            raise SessionError("usage: gb IDEAL", lineno)
        session.ideal(tokens[0], lineno)
        args["ideal"] = tokens[0]
        echo = f"gb {tokens[0]}"
    elif kind == "homology":
        if not tokens:
            raise SessionError("usage: homology TWOPER [coeff G]", lineno)
        session.complex(tokens[0], lineno)
        args["complex"] = tokens[0]
        kw = _keyword_args(tokens[1:], lineno, {"coeff"})
        if "coeff" in kw:
            session.coeff(kw["coeff"], lineno)
            args["coeff"] = kw["coeff"]
        echo = f"homology {tokens[0]}" + (f" coeff {kw['coeff']}" if "coeff" in kw else "")
    elif kind == "tensor":
        if len(tokens) < 2:
            raise SessionError("usage: tensor A B [as NAME]", lineno)
        session.complex(tokens[0], lineno)
        session.complex(tokens[1], lineno)
        args["left"], args["right"] = tokens[0], tokens[1]
        kw = _keyword_args(tokens[2:], lineno, {"as"})
        echo = f"tensor {tokens[0]} {tokens[1]}"
        if "as" in kw:
            from .periodic import tensor as _tensor

            session._declare(kw["as"], lineno)
            session.complexes[kw["as"]] = _tensor(
                session.complexes[tokens[0]], session.complexes[tokens[1]]
            )
            args["as"] = kw["as"]
            echo += f" as {kw['as']}"
    elif kind == "class":
        if not tokens:
            raise SessionError("usage: class TWOPER [coeff G] support I", lineno)
        session.complex(tokens[0], lineno)
        args["complex"] = tokens[0]
        kw = _keyword_args(tokens[1:], lineno, {"coeff", "support"})
        if "support" not in kw:
            raise SessionError("class needs a support ideal", lineno)
        session.ideal(kw["support"], lineno)
        args["support"] = kw["support"]
        if "coeff" in kw:
            session.coeff(kw["coeff"], lineno)
            args["coeff"] = kw["coeff"]
        echo = f"class {tokens[0]}" + (
            f" coeff {kw['coeff']}" if "coeff" in kw else ""
        ) + f" support {kw['support']}"
    elif kind == "gysin":
        if len(tokens) < 3 or tokens[1] != "at":
            raise SessionError("usage: gysin TWOPER at VALUE [support I]", lineno)
        session.complex(tokens[0], lineno)
        args["complex"] = tokens[0]
        try:
            args["value"] = str(Fraction(tokens[2]))
        except ValueError:
            raise SessionError(f"bad fiber value {tokens[2]!r}", lineno)
        kw = _keyword_args(tokens[3:], lineno, {"support"})
        if "support" in kw:
            session.ideal(kw["support"], lineno)
            args["support"] = kw["support"]
        echo = f"gysin {tokens[0]} at {args['value']}" + (
            f" support {kw['support']}" if "support" in kw else ""
        )
    elif kind == "coslocal":
        if not tokens:
            raise SessionError("usage: coslocal MODEL coeff G", lineno)
        session.cosection_model(tokens[0], lineno)
        args["model"] = tokens[0]
        kw = _keyword_args(tokens[1:], lineno, {"coeff"})
        if "coeff" not in kw:
            raise SessionError("coslocal needs coeff", lineno)
        session.coeff(kw["coeff"], lineno)
        args["coeff"] = kw["coeff"]
        echo = f"coslocal {tokens[0]} coeff {kw['coeff']}"
    elif kind == "verify":
        from .suites import SUITES

        if not tokens:
            raise SessionError("usage: verify SUITE [seed N] [count N]", lineno)
        if tokens[0] not in SUITES:
            raise SessionError(f"unknown suite {tokens[0]!r}", lineno)
        args["suite"] = tokens[0]
        kw = _keyword_args(tokens[1:], lineno, {"seed", "count"})
        for key in ("seed", "count"):
            if key in kw:
                try:
                    args[key] = int(kw[key])
                except ValueError:
                    raise SessionError(f"{key} must be an integer", lineno)
        echo = f"verify {tokens[0]}" + "".join(
            f" {k} {args[k]}" for k in ("seed", "count") if k in args
        )
    else:  # pragma: no cover
        raise SessionError(f"unhandled command {kind!r}", lineno)
    session.statements.append(Statement(kind, None, args, lineno, echo))

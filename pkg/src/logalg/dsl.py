"""The ``.logalg`` declaration language.

A script is a sequence of statements, each ending in ``;``::

    monoid N = <t | >;
    monoid C = <a, b | 3 a = 2 b>;
    monoid K = gens (2,0) (1,1) (0,2);
    prelog A1 = (QQ[N], N, phi: t -> t);
    prelog I = (GF(5)[N; x | x^2 - x], N, phi: t -> t);
    map f : A1 -> A1 { ring: t -> t^2; monoid: t -> 2 t; }
    module J over A1 = <j | t*j>;
    sqz E : R -> S { ring: e -> 0; monoid: p -> p; }
    sqz E2 = trivial A1 by J;
    point p on A1 = (1);
    gp C;
    cotangent f --char 5;

``parse`` builds an AST with source spans, ``to_source`` prints it back in
canonical form, and ``resolve`` turns declarations into library objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from . import monoid as mon
from . import prelog as pl
from . import sqzero as sz
from .errors import LogAlgError, ParseError, ResolveError
from .monoid import EmbeddedMonoid, MonoidHom, MonoidPresentation
from .ring import GF, QQ, Field, ModulePresentation, Poly

# ---------------------------------------------------------------------------
# tokens

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<flag>--[A-Za-z][A-Za-z0-9-]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<quoted>"[^"\n]*")
  | (?P<sym>[<>|=,;:(){}\[\]+\-*^/])
    """,
    re.VERBOSE,
)

KEYWORDS = {"monoid", "prelog", "map", "module", "sqz", "point", "gens", "phi", "ring", "over", "trivial", "by", "units", "QQ", "GF"}
COMMANDS = ("gp", "replete", "omega", "cotangent", "bar-homology", "pi1-bar", "sqz", "lift", "verify-corpus", "etale", "smooth")


@dataclass(frozen=True)
class Token:
    kind: str  # name, int, sym, arrow, flag, quoted, eof
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    out, line, col, pos = [], 1, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col, ())
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                out.append(Token(kind, text, line, col))
            col += len(text)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Span:
    line: int
    col: int


def _span() -> Span:
    return field(default=Span(0, 0), compare=False, repr=False)


# expressions are kept as small tuples so they compare structurally:
#   word    : tuple of (coefficient, name)
#   poly    : tuple of (coefficient Fraction, tuple of (name, power))


@dataclass(frozen=True)
class MonoidLit:
    names: tuple[str, ...]
    relations: tuple[tuple[tuple, tuple], ...]  # (word, word)


@dataclass(frozen=True)
class GensLit:
    vectors: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Ref:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class MonoidDecl:
    name: str
    value: object  # MonoidLit | GensLit | Ref
    span: Span = _span()


@dataclass(frozen=True)
class PrelogDecl:
    name: str
    field: tuple  # ("QQ",) or ("GF", p)
    Q: object
    extras: tuple[str, ...]
    relations: tuple  # polys
    P: object
    phi: tuple[tuple[str, object], ...]  # (P generator, word over ring vars | "0")
    units: bool = False
    span: Span = _span()


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: Ref
    target: Ref
    ring: tuple[tuple[str, tuple], ...]  # (var, poly)
    monoid: tuple[tuple[str, tuple], ...]  # (gen, word)
    span: Span = _span()


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    base: Ref
    labels: tuple[str, ...]
    relations: tuple  # polys linear in the labels
    span: Span = _span()


@dataclass(frozen=True)
class SqzDecl:
    name: str
    source: Ref
    target: Ref
    ring: tuple[tuple[str, tuple], ...]
    monoid: tuple[tuple[str, tuple], ...]
    span: Span = _span()


@dataclass(frozen=True)
class TrivialSqzDecl:
    name: str
    base: Ref
    module: Ref
    span: Span = _span()


@dataclass(frozen=True)
class PointDecl:
    name: str
    base: Ref
    values: tuple[Fraction, ...]
    span: Span = _span()


@dataclass(frozen=True)
class Command:
    verb: str  # e.g. "gp", "sqz verify", "bar-homology"
    args: tuple  # Ref | MonoidLit | GensLit | int | str
    options: tuple[tuple[str, str], ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class Script:
    statements: tuple

    @property
    def declarations(self) -> tuple:
        return tuple(s for s in self.statements if not isinstance(s, Command))

    @property
    def commands(self) -> tuple:
        return tuple(s for s in self.statements if isinstance(s, Command))


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    # -- helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, expected: tuple[str, ...] = ()) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return ParseError(f"{msg}, found {found}", t.line, t.col, expected)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("sym", "name", "arrow")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}", (text,))
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def name(self, what: str = "a name") -> str:
        t = self.tok
        if t.kind != "name":
            raise self.error(f"expected {what}", ("<name>",))
        self.i += 1
        return t.text

    def integer(self) -> int:
        neg = self.accept("-")
        t = self.tok
        if t.kind != "int":
            raise self.error("expected an integer", ("<int>",))
        self.i += 1
        return -int(t.text) if neg else int(t.text)

    def span(self) -> Span:
        return Span(self.tok.line, self.tok.col)

    # -- grammar
    def script(self) -> Script:
        out = []
        while self.tok.kind != "eof":
            out.append(self.statement())
        return Script(tuple(out))

    def statement(self):
        sp = self.span()
        t = self.tok
        if t.kind != "name":
            raise self.error("expected a declaration or command", ("monoid", "prelog", "map", "module", "sqz", "point") + COMMANDS)
        if t.text == "monoid":
            self.i += 1
            n = self.name()
            self.expect("=")
            v = self.monoid_expr()
            self.expect(";")
            return MonoidDecl(n, v, sp)
        if t.text == "prelog":
            return self.prelog(sp)
        if t.text == "map":
            self.i += 1
            n = self.name()
            self.expect(":")
            s, tg = self.ref(), None
            self.expect("->")
            tg = self.ref()
            ring, monoid = self.map_body()
            return MapDecl(n, s, tg, ring, monoid, sp)
        if t.text == "module":
            self.i += 1
            n = self.name()
            self.expect("over")
            base = self.ref()
            self.expect("=")
            self.expect("<")
            labels = self.name_list("|")
            self.expect("|")
            rels = []
            if not self.at(">"):
                rels.append(self.poly())
                while self.accept(","):
                    rels.append(self.poly())
            self.expect(">")
            self.expect(";")
            return ModuleDecl(n, base, tuple(labels), tuple(rels), sp)
        if t.text == "sqz" and self.peek().kind == "name" and self.peek(2).text in (":", "="):
            self.i += 1
            n = self.name()
            if self.accept("="):
                self.expect("trivial")
                base = self.ref()
                self.expect("by")
                J = self.ref()
                self.expect(";")
                return TrivialSqzDecl(n, base, J, sp)
            self.expect(":")
            s = self.ref()
            self.expect("->")
            tg = self.ref()
            ring, monoid = self.map_body()
            return SqzDecl(n, s, tg, ring, monoid, sp)
        if t.text == "point":
            self.i += 1
            n = self.name()
            self.expect("on")
            base = self.ref()
            self.expect("=")
            self.expect("(")
            vals = [self.rational()]
            while self.accept(","):
                vals.append(self.rational())
            self.expect(")")
            self.expect(";")
            return PointDecl(n, base, tuple(vals), sp)
        if t.text in {c.split("-")[0] for c in COMMANDS}:
            return self.command(sp)
        raise self.error("expected a declaration or command", ("monoid", "prelog", "map", "module", "sqz", "point") + COMMANDS)

    def ref(self) -> Ref:
        sp = self.span()
        return Ref(self.name(), sp)

    def dashed_name(self) -> str:
        """``bar-homology``: names joined by ``-`` with no spaces around it."""
        first = self.tok
        out = self.name()
        end = first.col + len(first.text)
        while self.at("-") and self.tok.line == first.line and self.tok.col == end:
            nxt = self.peek()
            if nxt.kind != "name" or nxt.col != end + 1:
                break
            self.i += 2
            out += "-" + nxt.text
            end = nxt.col + len(nxt.text)
        return out

    def name_list(self, stop: str) -> list[str]:
        out = []
        if self.at(stop):
            return out
        out.append(self.name("a generator name"))
        while self.accept(","):
            out.append(self.name("a generator name"))
        return out

    def monoid_expr(self):
        if self.at("<"):
            return self.monoid_lit()
        if self.at("gens"):
            self.i += 1
            vecs = [self.int_tuple()]
            while self.at("("):
                vecs.append(self.int_tuple())
            if len({len(v) for v in vecs}) != 1:
                raise self.error("generator vectors must have equal length")
            return GensLit(tuple(vecs))
        if self.tok.kind == "name":
            return self.ref()
        raise self.error("expected a monoid", ("<", "gens", "<name>"))

    def monoid_lit(self) -> MonoidLit:
        self.expect("<")
        names = self.name_list("|")
        self.expect("|")
        rels = []
        if not self.at(">"):
            rels.append(self.relation())
            while self.accept(","):
                rels.append(self.relation())
        self.expect(">")
        return MonoidLit(tuple(names), tuple(rels))

    def relation(self):
        a = self.word()
        self.expect("=")
        b = self.word()
        return (a, b)

    def word(self) -> tuple:
        """``0`` or a sum of ``[k] name`` terms."""
        terms = [self.word_term()]
        while self.at("+"):
            plus = self.tok
            self.i += 1
            if self.tok.kind not in ("int", "name"):
                raise ParseError("dangling '+' in a monoid word", plus.line, plus.col, ("<int>", "<name>"))
            terms.append(self.word_term())
        return tuple(t for t in terms if t is not None)

    def word_term(self):
        if self.tok.kind == "int":
            k = self.integer()
            if self.tok.kind == "name":
                return (k, self.name())
            if k != 0:
                raise self.error("a bare integer in a monoid word must be 0", ("<name>",))
            return None
        if self.tok.kind == "name":
            return (1, self.name())
        raise self.error("expected a monoid word", ("<int>", "<name>"))

    def int_tuple(self) -> tuple[int, ...]:
        self.expect("(")
        out = [self.integer()]
        while self.accept(","):
            out.append(self.integer())
        self.expect(")")
        return tuple(out)

    def rational(self) -> Fraction:
        n = self.integer()
        if self.accept("/"):
            d = self.integer()
            if d == 0:
                raise self.error("zero denominator")
            return Fraction(n, d)
        return Fraction(n)

    def field_spec(self) -> tuple:
        if self.accept("QQ"):
            return ("QQ",)
        if self.accept("GF"):
            self.expect("(")
            p = self.integer()
            self.expect(")")
            return ("GF", p)
        raise self.error("expected a field", ("QQ", "GF"))

    def prelog(self, sp: Span) -> PrelogDecl:
        self.expect("prelog")
        n = self.name()
        self.expect("=")
        self.expect("(")
        F = self.field_spec()
        self.expect("[")
        Q = self.monoid_expr()
        extras, rels = [], []
        if self.accept(";"):
            extras = self.name_list("|")
            if self.accept("|"):
                rels.append(self.poly())
                while self.accept(","):
                    rels.append(self.poly())
        self.expect("]")
        self.expect(",")
        P = self.monoid_expr()
        self.expect(",")
        self.expect("phi")
        self.expect(":")
        phi = []
        if self.tok.kind == "name" and self.peek().kind == "arrow":
            phi.append(self.phi_item())
            while self.at(",") and self.peek().kind == "name" and self.peek(2).kind == "arrow":
                self.i += 1
                phi.append(self.phi_item())
        units = False
        if self.accept(","):
            self.expect("units")
            units = True
        self.expect(")")
        self.expect(";")
        return PrelogDecl(n, F, Q, tuple(extras), tuple(rels), P, tuple(phi), units, sp)

    def phi_item(self):
        g = self.name()
        self.expect("->")
        if self.tok.kind == "int" and self.tok.text == "0" and self.peek().kind != "name":
            self.i += 1
            return (g, "0")
        if self.tok.kind == "int" and self.tok.text == "1" and self.peek().kind != "name":
            self.i += 1
            return (g, ())
        return (g, self.word())

    def map_body(self):
        self.expect("{")
        ring, monoid = (), ()
        seen = set()
        while not self.at("}"):
            if self.accept("ring"):
                if "ring" in seen:
                    raise self.error("duplicate ring section")
                seen.add("ring")
                self.expect(":")
                ring = self.assignments(self.poly)
            elif self.accept("monoid"):
                if "monoid" in seen:
                    raise self.error("duplicate monoid section")
                seen.add("monoid")
                self.expect(":")
                monoid = self.assignments(self.word)
            else:
                raise self.error("expected a map section", ("ring", "monoid", "}"))
            self.expect(";")
        self.expect("}")
        self.accept(";")
        return ring, monoid

    def assignments(self, rhs):
        out = []
        if self.at(";"):
            return ()
        g = self.name()
        self.expect("->")
        out.append((g, rhs()))
        while self.accept(","):
            g = self.name()
            self.expect("->")
            out.append((g, rhs()))
        return tuple(out)

    # polynomials: sum of [-] coefficient * monomial
    def poly(self) -> tuple:
        terms = []
        sign = -1 if self.accept("-") else 1
        terms.append(self.poly_term(sign))
        while self.at("+") or self.at("-"):
            sign = -1 if self.tok.text == "-" else 1
            op = self.tok
            self.i += 1
            if self.tok.kind not in ("int", "name"):
                raise ParseError(f"dangling {op.text!r} in a polynomial", op.line, op.col, ("<int>", "<name>"))
            terms.append(self.poly_term(sign))
        return _normalize_poly(terms)

    def poly_term(self, sign: int):
        coef = Fraction(sign)
        powers: dict[str, int] = {}
        first = True
        while True:
            if self.tok.kind == "int":
                c = self.rational()
                coef *= c
            elif self.tok.kind == "name":
                v = self.name()
                e = 1
                if self.accept("^"):
                    e = self.integer()
                    if e < 0:
                        raise self.error("negative exponent")
                powers[v] = powers.get(v, 0) + e
            elif self.at("("):
                raise self.error("parentheses are not supported in polynomials", ("<int>", "<name>"))
            else:
                if first:
                    raise self.error("expected a polynomial term", ("<int>", "<name>", "-"))
                break
            first = False
            if not self.accept("*"):
                # juxtaposition "3 x" or "x y" is also a product
                if self.tok.kind not in ("int", "name") or self._ends_term():
                    break
        return (coef, tuple(sorted(powers.items())))

    def _ends_term(self) -> bool:
        # a name followed by "->" starts the next assignment
        return self.tok.kind == "name" and self.peek().kind == "arrow"

    def command(self, sp: Span) -> Command:
        verb = self.dashed_name()
        if verb not in COMMANDS:
            raise ParseError(f"unknown command {verb!r}", sp.line, sp.col, COMMANDS)
        if verb == "sqz":
            sub = self.name("a sqz subcommand")
            if sub not in ("verify", "classify", "roundtrip"):
                raise ParseError(f"unknown sqz subcommand {sub!r}", sp.line, sp.col, ("verify", "classify", "roundtrip"))
            verb = f"sqz {sub}"
        args = []
        options = []
        while not self.at(";"):
            t = self.tok
            if t.kind == "flag":
                self.i += 1
                val = self.tok
                if val.kind not in ("name", "int", "quoted"):
                    raise self.error(f"expected a value for {t.text}", ("<value>",))
                self.i += 1
                options.append((t.text[2:], val.text.strip('"')))
            elif t.kind == "int":
                args.append(self.integer())
            elif t.text == "<":
                args.append(self.monoid_lit())
            elif t.text == "gens":
                args.append(self.monoid_expr())
            elif t.kind == "name":
                args.append(Ref(self.dashed_name(), Span(t.line, t.col)))
            elif t.kind == "eof":
                raise self.error("expected ';'", (";",))
            else:
                raise self.error("unexpected token in command", ("<name>", "<int>", "--<flag>", ";"))
        self.expect(";")
        return Command(verb, tuple(args), tuple(options), sp)


def _normalize_poly(terms) -> tuple:
    acc: dict[tuple, Fraction] = {}
    for c, m in terms:
        acc[m] = acc.get(m, Fraction(0)) + c
    return tuple(sorted(((c, m) for m, c in acc.items() if c != 0), key=lambda t: (t[1], t[0])))


def parse(src: str) -> Script:
    return _Parser(src).script()


# ---------------------------------------------------------------------------
# printer


def _fmt_word(w) -> str:
    if not w:
        return "0"
    return " + ".join(name if k == 1 else f"{k} {name}" for k, name in w)


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_poly(p) -> str:
    if not p:
        return "0"
    parts = []
    for k, (c, m) in enumerate(p):
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
        a = abs(c)
        if not mono:
            body = _fmt_frac(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_frac(a)}*{mono}"
        if k == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def _fmt_monoid(v) -> str:
    if isinstance(v, Ref):
        return v.name
    if isinstance(v, GensLit):
        return "gens " + " ".join("(" + ",".join(str(x) for x in t) + ")" for t in v.vectors)
    rels = ", ".join(f"{_fmt_word(a)} = {_fmt_word(b)}" for a, b in v.relations)
    return f"<{', '.join(v.names)} | {rels}>" if rels else f"<{', '.join(v.names)} | >"


def _fmt_field(F) -> str:
    return "QQ" if F[0] == "QQ" else f"GF({F[1]})"


def _fmt_body(ring, monoid) -> str:
    r = ", ".join(f"{v} -> {_fmt_poly(p)}" for v, p in ring)
    m = ", ".join(f"{g} -> {_fmt_word(w)}" for g, w in monoid)
    return f"{{ ring: {r}; monoid: {m}; }}"


def statement_source(s) -> str:
    if isinstance(s, MonoidDecl):
        return f"monoid {s.name} = {_fmt_monoid(s.value)};"
    if isinstance(s, PrelogDecl):
        inner = _fmt_monoid(s.Q)
        if s.extras or s.relations:
            inner += f"; {', '.join(s.extras)}"
            if s.relations:
                inner += " | " + ", ".join(_fmt_poly(r) for r in s.relations)
        phi = ", ".join(f"{g} -> {'0' if w == '0' else ('1' if w == () else _fmt_word(w))}" for g, w in s.phi)
        tail = ", units" if s.units else ""
        return f"prelog {s.name} = ({_fmt_field(s.field)}[{inner}], {_fmt_monoid(s.P)}, phi: {phi}{tail});"
    if isinstance(s, MapDecl):
        return f"map {s.name} : {s.source.name} -> {s.target.name} {_fmt_body(s.ring, s.monoid)}"
    if isinstance(s, ModuleDecl):
        rels = ", ".join(_fmt_poly(r) for r in s.relations)
        return f"module {s.name} over {s.base.name} = <{', '.join(s.labels)} | {rels}>;"
    if isinstance(s, SqzDecl):
        return f"sqz {s.name} : {s.source.name} -> {s.target.name} {_fmt_body(s.ring, s.monoid)}"
    if isinstance(s, TrivialSqzDecl):
        return f"sqz {s.name} = trivial {s.base.name} by {s.module.name};"
    if isinstance(s, PointDecl):
        return f"point {s.name} on {s.base.name} = ({', '.join(_fmt_frac(v) for v in s.values)});"
    if isinstance(s, Command):
        parts = [s.verb]
        for a in s.args:
            parts.append(str(a) if isinstance(a, int) else _fmt_monoid(a))
        for k, v in s.options:
            parts.append(f"--{k} {v}")
        return " ".join(parts) + ";"
    raise TypeError(f"not a statement: {s!r}")


def to_source(script: Script) -> str:
    return "".join(statement_source(s) + "\n" for s in script.statements)


# ---------------------------------------------------------------------------
# resolution


def field_of(spec: tuple, char: int | None = None) -> Field:
    if char is not None:
        return QQ if char == 0 else GF(char)
    return QQ if spec[0] == "QQ" else GF(spec[1])


def monoid_from_literal(v, env: dict | None = None, where: Span | None = None) -> MonoidPresentation:
    if isinstance(v, Ref):
        obj = (env or {}).get(v.name)
        if not isinstance(obj, MonoidPresentation):
            raise _unresolved(v, "monoid")
        return obj
    if isinstance(v, GensLit):
        E = EmbeddedMonoid(v.vectors, (0,) * len(v.vectors[0]))
        return mon.embedded_to_presentation(E)
    idx = {n: i for i, n in enumerate(v.names)}
    if len(idx) != len(v.names):
        raise ResolveError("duplicate generator name", *(where.line, where.col) if where else (0, 0))

    def vec(w):
        out = [0] * len(idx)
        for k, n in w:
            if n not in idx:
                raise ResolveError(f"unknown generator {n!r}", *(where.line, where.col) if where else (0, 0))
            out[idx[n]] += k
        return tuple(out)

    return MonoidPresentation(len(idx), tuple((vec(a), vec(b)) for a, b in v.relations), tuple(v.names))


def _unresolved(r: Ref, kind: str) -> ResolveError:
    return ResolveError(f"unknown {kind} {r.name!r}", r.span.line, r.span.col, (f"<{kind}>",))


def _poly(p, names: tuple[str, ...], F: Field, where: Span) -> Poly:
    idx = {n: i for i, n in enumerate(names)}
    terms: dict = {}
    for c, m in p:
        e = [0] * len(names)
        for v, k in m:
            if v not in idx:
                raise ResolveError(f"unknown variable {v!r}", where.line, where.col, names)
            e[idx[v]] += k
        e = tuple(e)
        terms[e] = terms.get(e, 0) + F(c)
    return Poly(F, len(names), terms)


def _word_vec(w, names, where: Span) -> tuple[int, ...]:
    idx = {n: i for i, n in enumerate(names)}
    out = [0] * len(names)
    for k, n in w:
        if n not in idx:
            raise ResolveError(f"unknown generator {n!r}", where.line, where.col, tuple(names))
        out[idx[n]] += k
    return tuple(out)


def _images(pairs, names, where: Span, what: str):
    got = dict(pairs)
    if len(got) != len(pairs):
        raise ResolveError(f"duplicate {what} image", where.line, where.col)
    extra = set(got) - set(names)
    if extra:
        raise ResolveError(f"unknown {what} {sorted(extra)[0]!r}", where.line, where.col, tuple(names))
    missing = [n for n in names if n not in got]
    if missing:
        raise ResolveError(f"missing image for {what} {missing[0]!r}", where.line, where.col, tuple(missing))
    return [got[n] for n in names]


def _get(env: dict, r: Ref, kinds: tuple[type, ...], label: str):
    obj = env.get(r.name)
    if obj is None or not isinstance(obj, kinds):
        raise _unresolved(r, label)
    return obj


@dataclass
class PointValue:
    chart: pl.ChartPreLogRing
    values: tuple


def resolve(script: Script, char: int | None = None) -> dict[str, object]:
    """Declarations to library objects; ``char`` overrides every field."""
    env: dict[str, object] = {}
    for s in script.declarations:
        if s.name in env:
            raise ResolveError(f"duplicate name {s.name!r}", s.span.line, s.span.col)
        try:
            env[s.name] = _resolve_one(s, env, char)
        except ResolveError:
            raise
        except LogAlgError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ResolveError(f"{s.name}: {exc}", s.span.line, s.span.col) from exc
        except ValueError as exc:
            raise ResolveError(f"{s.name}: {exc}", s.span.line, s.span.col) from exc
    return env


def _resolve_one(s, env: dict, char: int | None):
    if isinstance(s, MonoidDecl):
        return monoid_from_literal(s.value, env, s.span)
    if isinstance(s, PrelogDecl):
        F = field_of(s.field, char)
        Q = monoid_from_literal(s.Q, env, s.span)
        P = monoid_from_literal(s.P, env, s.span)
        names = tuple(Q.names) + tuple(s.extras)
        rels = tuple(_poly(r, names, F, s.span) for r in s.relations)
        phi = _images(s.phi, P.names, s.span, "pre-log generator")
        alpha = tuple(None if w == "0" else _word_vec(w, names, s.span) for w in phi)
        X = pl.ChartPreLogRing(F, Q, P, alpha, tuple(s.extras), rels, s.name, s.units)
        X.validate()
        return X
    if isinstance(s, MapDecl):
        src = env.get(s.source.name)
        if isinstance(src, MonoidPresentation):
            tgt = _get(env, s.target, (MonoidPresentation,), "monoid")
            if s.ring:
                raise ResolveError("a monoid map has no ring section", s.span.line, s.span.col)
            imgs = _images(s.monoid, src.names, s.span, "generator")
            h = MonoidHom(src, tgt, tuple(_word_vec(w, tgt.names, s.span) for w in imgs))
            h.check()
            return h
        src = _get(env, s.source, (pl.ChartPreLogRing,), "chart")
        tgt = _get(env, s.target, (pl.ChartPreLogRing,), "chart")
        rimgs = _images(s.ring, src.ring.names, s.span, "ring variable")
        mimgs = _images(s.monoid, src.P.names, s.span, "pre-log generator")
        ring = [_poly(p, tgt.ring.names, tgt.field, s.span) for p in rimgs]
        return pl.morphism(src, tgt, ring, [_word_vec(w, tgt.P.names, s.span) for w in mimgs], name=s.name)
    if isinstance(s, ModuleDecl):
        X = _get(env, s.base, (pl.ChartPreLogRing,), "chart")
        R = X.ring
        names = tuple(R.names) + tuple(s.labels)
        rels = []
        for r in s.relations:
            p = _poly(r, names, X.field, s.span)
            vec = [R.zero() for _ in s.labels]
            for e, c in p.terms.items():
                lab = e[R.nvars :]
                if sum(lab) != 1:
                    raise ResolveError("module relations must be linear in the generators", s.span.line, s.span.col)
                j = lab.index(1)
                vec[j] = vec[j] + R.monomial(e[: R.nvars], c)
            rels.append(tuple(vec))
        return ModulePresentation(R, tuple(s.labels), tuple(rels))
    if isinstance(s, SqzDecl):
        R = _get(env, s.source, (pl.ChartPreLogRing,), "chart")
        S = _get(env, s.target, (pl.ChartPreLogRing,), "chart")
        rimgs = _images(s.ring, R.ring.names, s.span, "ring variable")
        mimgs = _images(s.monoid, R.P.names, s.span, "pre-log generator")
        ring = [_poly(p, S.ring.names, S.field, s.span) for p in rimgs]
        return sz.square_zero(R, S, ring, [_word_vec(w, S.P.names, s.span) for w in mimgs], name=s.name)
    if isinstance(s, TrivialSqzDecl):
        X = _get(env, s.base, (pl.ChartPreLogRing,), "chart")
        J = _get(env, s.module, (ModulePresentation,), "module")
        if J.ring != X.ring:
            raise ResolveError("module is over a different ring", s.span.line, s.span.col)
        return sz.trivial_extension(X, J, s.name)
    if isinstance(s, PointDecl):
        X = _get(env, s.base, (pl.ChartPreLogRing,), "chart")
        pt = X.ring.check_point(tuple(X.field(v) for v in s.values))
        return PointValue(X, pt)
    raise TypeError(f"not a declaration: {s!r}")  # pragma: no cover


def iter_refs(s) -> Iterator[Ref]:
    for v in vars(s).values():
        if isinstance(v, Ref):
            yield v
        elif isinstance(v, tuple):
            for x in v:
                if isinstance(x, Ref):
                    yield x

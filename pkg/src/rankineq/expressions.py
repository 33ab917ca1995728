"""Linear rank/information inequality expressions and the built-in catalog.

An expression is a rational-coefficient combination of entropy-style terms
in the canonical residual convention: the expression asserts

    sum of terms >= 0,

with any "LHS <= RHS" statement stored as RHS - LHS.  Evaluation on a
subspace assignment desugars every term to joint-H supports and sums
coefficient * rank exactly, so residuals are exact rationals (integers on
the built-in catalog).

The catalog holds the four inequalities the rest of the package exercises:
the Shannon elemental form I(A;B|C) >= 0, the Ingleton inequality, and the
pair of eight-variable inequalities that hold exactly off / exactly on
characteristic 3.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from .subspace import SubspaceAssignment

JOINT = "joint"
COND = "cond"
MUTUAL = "mutual"
COND_MUTUAL = "cond_mutual"


class ExpressionSyntaxError(ValueError):
    """Malformed expression text; message carries line and column."""


class UnknownNameError(KeyError):
    """No catalog entry under the requested name."""


@dataclass(frozen=True)
class CharTag:
    """Which field characteristics an inequality is asserted for."""

    mode: str = "all"  # "all" | "only" | "except"
    chars: frozenset[int] = frozenset()

    def admits(self, p: int) -> bool:
        if self.mode == "all":
            return True
        if self.mode == "only":
            return p in self.chars
        return p not in self.chars

    def __str__(self):
        if self.mode == "all":
            return "all characteristics"
        what = ",".join(str(c) for c in sorted(self.chars))
        return ("only characteristic " if self.mode == "only"
                else "all characteristics except ") + what


TAG_ALL = CharTag()


@dataclass(frozen=True)
class EntropyTerm:
    """coefficient * one of H(S), H(S|T), I(S;T), I(S;T|U)."""

    coeff: Fraction
    kind: str
    s: frozenset[str]
    t: frozenset[str] = frozenset()
    u: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.coeff == 0:
            raise ValueError("term with zero coefficient")
        if not self.s:
            raise ValueError("term with empty first variable set")

    def names(self) -> frozenset[str]:
        return self.s | self.t | self.u

    def render(self) -> str:
        def lst(ns):
            return ",".join(sorted(ns))
        if self.kind == JOINT:
            return f"H({lst(self.s)})"
        if self.kind == COND:
            return f"H({lst(self.s)}|{lst(self.t)})"
        if self.kind == MUTUAL:
            return f"I({lst(self.s)};{lst(self.t)})"
        return f"I({lst(self.s)};{lst(self.t)}|{lst(self.u)})"


def joint(coeff, *names) -> EntropyTerm:
    return EntropyTerm(Fraction(coeff), JOINT, frozenset(names))


def cond(coeff, s, t) -> EntropyTerm:
    return EntropyTerm(Fraction(coeff), COND, frozenset(s), frozenset(t))


def mutual(coeff, s, t) -> EntropyTerm:
    return EntropyTerm(Fraction(coeff), MUTUAL, frozenset(s), frozenset(t))


def cond_mutual(coeff, s, t, u) -> EntropyTerm:
    return EntropyTerm(Fraction(coeff), COND_MUTUAL,
                       frozenset(s), frozenset(t), frozenset(u))


@dataclass(frozen=True)
class RankExpression:
    """Named term list asserting sum >= 0, plus a characteristic tag."""

    name: str
    variables: tuple[str, ...]
    terms: tuple[EntropyTerm, ...]
    applicability: CharTag = TAG_ALL

    def __post_init__(self):
        declared = set(self.variables)
        for term in self.terms:
            missing = term.names() - declared
            if missing:
                raise ValueError(
                    f"term {term.render()} uses undeclared variables {sorted(missing)}")


def _joint_pieces(term: EntropyTerm) -> list[tuple[Fraction, frozenset[str]]]:
    c, s, t, u = term.coeff, term.s, term.t, term.u
    if term.kind == JOINT:
        return [(c, s)]
    if term.kind == COND:
        return [(c, s | t), (-c, t)]
    if term.kind == MUTUAL:
        return [(c, s), (c, t), (-c, s | t)]
    return [(c, s | u), (c, t | u), (-c, u), (-c, s | t | u)]


@lru_cache(maxsize=None)
def desugar(expr: RankExpression) -> RankExpression:
    """Joint-H-only normal form: like supports merged, empty/zero dropped."""
    acc: dict[frozenset[str], Fraction] = {}
    for term in expr.terms:
        for coeff, support in _joint_pieces(term):
            if support:
                acc[support] = acc.get(support, Fraction(0)) + coeff
    supports = sorted((s for s, c in acc.items() if c != 0),
                      key=lambda s: (len(s), tuple(sorted(s))))
    terms = tuple(EntropyTerm(acc[s], JOINT, s) for s in supports)
    return RankExpression(expr.name, expr.variables, terms, expr.applicability)


def evaluate(expr: RankExpression, ctx: SubspaceAssignment) -> Fraction:
    """Exact residual of the expression on the assignment; >= 0 means holds."""
    total = Fraction(0)
    for term in desugar(expr).terms:
        total += term.coeff * ctx.joint_rank(term.s)
    return total


def holds(expr: RankExpression, ctx: SubspaceAssignment) -> bool:
    return evaluate(expr, ctx) >= 0


# --- expression text grammar -------------------------------------------------
#
#   expr     := [sign] term (("+"|"-") term)* [">=" "0"]
#   term     := [rational] atom
#   rational := int ["/" int]
#   atom     := H(list) | H(list|list) | I(list;list) | I(list;list|list)
#   list     := name ("," name)*
#
# An omitted coefficient means 1.  Names are ASCII identifiers.

_TOKEN_RE = re.compile(r"(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
                       r"|(?P<geq>>=)|(?P<op>[-+/(),;|])")


def _tokenize(text: str):
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                raise ExpressionSyntaxError(
                    f"line {lineno}, column {pos + 1}: "
                    f"unexpected character {line[pos]!r}")
            kind = m.lastgroup
            tokens.append((kind, m.group(), lineno, pos + 1))
            pos = m.end()
    tokens.append(("eof", "", lineno if text else 1, 1))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, value, line, col = self.peek()
        got = value if kind != "eof" else "end of input"
        raise ExpressionSyntaxError(
            f"line {line}, column {col}: expected {expected}, got {got!r}")

    def expect(self, value):
        kind, got, _, _ = self.peek()
        if got != value:
            self.fail(repr(value))
        return self.next()

    def parse_namelist(self) -> frozenset[str]:
        names = []
        while True:
            kind, value, _, _ = self.peek()
            if kind != "name":
                self.fail("a variable name")
            names.append(self.next()[1])
            if self.peek()[1] == ",":
                self.next()
            else:
                return frozenset(names)

    def parse_atom(self, coeff: Fraction) -> EntropyTerm:
        kind, value, _, _ = self.peek()
        if kind != "name" or value not in ("H", "I"):
            self.fail("'H(' or 'I('")
        func = self.next()[1]
        self.expect("(")
        if func == "H" and self.peek()[1] == ")":
            self.fail("a nonempty variable list")
        s = self.parse_namelist()
        if func == "H":
            t = frozenset()
            if self.peek()[1] == "|":
                self.next()
                t = self.parse_namelist()
            self.expect(")")
            if t:
                return EntropyTerm(coeff, COND, s, t)
            return EntropyTerm(coeff, JOINT, s)
        self.expect(";")
        t = self.parse_namelist()
        u = frozenset()
        if self.peek()[1] == "|":
            self.next()
            u = self.parse_namelist()
        self.expect(")")
        if u:
            return EntropyTerm(coeff, COND_MUTUAL, s, t, u)
        return EntropyTerm(coeff, MUTUAL, s, t)

    def parse_coeff(self) -> Fraction:
        if self.peek()[0] != "num":
            return Fraction(1)
        if int(self.peek()[1]) == 0:
            self.fail("a nonzero coefficient")
        num = int(self.next()[1])
        den = 1
        if self.peek()[1] == "/":
            self.next()
            if self.peek()[0] != "num" or int(self.peek()[1]) == 0:
                self.fail("a nonzero denominator")
            den = int(self.next()[1])
        return Fraction(num, den)

    def parse_expr(self) -> list[EntropyTerm]:
        terms = []
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.next()[1] == "-" else 1
        while True:
            coeff = sign * self.parse_coeff()
            terms.append(self.parse_atom(coeff))
            nxt = self.peek()
            if nxt[1] == "+":
                self.next()
                sign = 1
            elif nxt[1] == "-":
                self.next()
                sign = -1
            elif nxt[0] == "geq":
                self.next()
                if self.peek()[1] != "0":
                    self.fail("'0'")
                self.next()
                if self.peek()[0] != "eof":
                    self.fail("end of input")
                return terms
            elif nxt[0] == "eof":
                return terms
            else:
                self.fail("'+', '-', '>= 0' or end of input")


def parse_expression(text: str, name: str = "expr") -> RankExpression:
    terms = _Parser(_tokenize(text)).parse_expr()
    seen: list[str] = []
    for term in terms:
        for group in (term.s, term.t, term.u):
            for n in sorted(group):
                if n not in seen:
                    seen.append(n)
    return RankExpression(name, tuple(seen), tuple(terms))


def format_expression(expr: RankExpression) -> str:
    parts = []
    for i, term in enumerate(expr.terms):
        coeff = term.coeff
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        body = ("" if mag == 1 else f"{mag} ") + term.render()
        if i == 0:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts) + " >= 0"


# --- built-in catalog ---------------------------------------------------------

_VARS8 = ("A", "B", "C", "D", "W", "X", "Y", "Z")


def _defect_terms(coeff: int) -> list[EntropyTerm]:
    # message-independence defect: coeff * (H(A)+H(B)+H(C)+H(D) - H(A,B,C,D))
    return [joint(coeff, "A"), joint(coeff, "B"), joint(coeff, "C"),
            joint(coeff, "D"), joint(-coeff, "A", "B", "C", "D")]


def _catalog() -> dict[str, RankExpression]:
    shannon = RankExpression(
        "shannon-elemental", ("A", "B", "C"),
        (cond_mutual(1, "A", "B", "C"),))

    ingleton = RankExpression(
        "ingleton", ("A", "B", "C", "D"),
        (cond_mutual(1, "A", "B", "C"),
         cond_mutual(1, "A", "B", "D"),
         mutual(1, "C", "D"),
         mutual(-1, "A", "B")))

    # The conditional coefficients follow the combination the validity
    # argument actually sums (46 on H(X|A,C,D), 3 on H(C|B,X,Y), 7 on
    # H(C|A,W,Y)); the commonly quoted 50/7/3 variant is refuted by
    # coordinate subspaces over every field (see tests).
    t8 = RankExpression(
        "t8", _VARS8,
        (joint(-1, "A"),
         joint(8, "Z"), joint(29, "Y"), joint(3, "X"), joint(8, "W"),
         joint(-6, "D"), joint(-17, "C"), joint(-8, "B"), joint(-17, "A"),
         cond(55, "Z", "ABC"), cond(35, "Y", "WXZ"),
         cond(46, "X", "ACD"), cond(49, "W", "BCD"),
         cond(18, "A", "BDY"), cond(7, "B", "DXZ"),
         cond(1, "B", "AWX"), cond(7, "C", "DYZ"),
         cond(3, "C", "BXY"), cond(7, "C", "AWY"),
         cond(6, "D", "AWZ"),
         *_defect_terms(49)),
        CharTag("except", frozenset({3})))

    non_t8 = RankExpression(
        "non-t8", _VARS8,
        (joint(-1, "A"),
         joint(9, "Z"), joint(8, "Y"), joint(5, "X"), joint(6, "W"),
         joint(-4, "D"), joint(-12, "C"), joint(-11, "B"), joint(-1, "A"),
         cond(19, "Z", "ABC"), cond(17, "Y", "ABD"),
         cond(13, "X", "ACD"), cond(11, "W", "BCD"),
         cond(1, "A", "WXYZ"), cond(1, "A", "BWX"),
         cond(7, "B", "DXZ"), cond(4, "B", "CXY"),
         cond(7, "C", "DYZ"), cond(5, "C", "AWY"),
         cond(4, "D", "AWZ"),
         *_defect_terms(29)),
        CharTag("only", frozenset({3})))

    return {e.name: e for e in (shannon, ingleton, t8, non_t8)}


_CATALOG = _catalog()

BUILTIN_NAMES = tuple(sorted(_CATALOG))


def builtin(name: str) -> RankExpression:
    """Catalog lookup: shannon-elemental, ingleton, t8, non-t8."""
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownNameError(
            f"unknown inequality {name!r}; known: {', '.join(BUILTIN_NAMES)}") from None

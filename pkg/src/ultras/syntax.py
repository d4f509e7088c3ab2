"""Process terms for CSP, PCSP and PEPA, the model-file parser and pretty printer.

Concrete syntax::

    calculus csp | pcsp | pepa
    const NAME = TERM          # zero or more
    init TERM                  # exactly one

    TERM ::= TERM + PAR | TERM +(p) PAR | PAR
    PAR  ::= PAR |[a,b]| SEQ | PAR |[a,b]|(p) SEQ | SEQ
    SEQ  ::= a.SEQ | (a,r).SEQ | stop | NAME | (TERM)

Actions start with a lowercase letter, constants with an uppercase one.
Choice and parallel composition associate to the left. Probabilities and
rates are decimal (``0.3``) or fraction (``3/10``) literals.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union


class Calculus(enum.Enum):
    CSP = "csp"
    PCSP = "pcsp"
    PEPA = "pepa"

    @property
    def kind(self):
        from .domain import DomainKind

        return {
            Calculus.CSP: DomainKind.BOOLEAN,
            Calculus.PCSP: DomainKind.PROBABILITY,
            Calculus.PEPA: DomainKind.RATE,
        }[self]


OMEGA = "OMEGA"


# --------------------------------------------------------------------------- AST


@dataclass(frozen=True)
class Stop:
    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Prefix:
    action: str
    body: "Term"

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class RatedPrefix:
    action: str
    rate: Fraction
    body: "Term"

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Choice:
    left: "Term"
    right: "Term"

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class PChoice:
    p: Fraction
    left: "Term"
    right: "Term"

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Par:
    sync: frozenset
    left: "Term"
    right: "Term"

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class PPar:
    sync: frozenset
    p: Fraction
    left: "Term"
    right: "Term"

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Union[Stop, Prefix, RatedPrefix, Choice, PChoice, Par, PPar, Const]

STOP = Stop()

_ALLOWED = {
    Calculus.CSP: (Stop, Prefix, Choice, Par, Const),
    Calculus.PCSP: (Stop, Prefix, PChoice, PPar, Const),
    Calculus.PEPA: (Stop, RatedPrefix, Choice, Par, Const),
}


def subterms(term: Term) -> Iterator[Term]:
    """Pre-order walk, left operand before right."""
    stack = [term]
    while stack:
        t = stack.pop()
        yield t
        if isinstance(t, (Prefix, RatedPrefix)):
            stack.append(t.body)
        elif isinstance(t, (Choice, PChoice, Par, PPar)):
            stack.append(t.right)
            stack.append(t.left)


# ------------------------------------------------------------------ pretty print


def _num(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _sync(s: frozenset) -> str:
    return "|[" + ",".join(sorted(s)) + "]|"


_CHOICE, _PAR, _SEQ = 0, 1, 2


def _level(t: Term) -> int:
    if isinstance(t, (Choice, PChoice)):
        return _CHOICE
    if isinstance(t, (Par, PPar)):
        return _PAR
    return _SEQ


def _pp(t: Term, need: int) -> str:
    s = _render(t)
    return f"({s})" if _level(t) < need else s


@lru_cache(maxsize=1 << 16)
def _render(t: Term) -> str:
    if isinstance(t, Stop):
        return "stop"
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Prefix):
        return f"{t.action}.{_pp(t.body, _SEQ)}"
    if isinstance(t, RatedPrefix):
        return f"({t.action},{_num(t.rate)}).{_pp(t.body, _SEQ)}"
    if isinstance(t, Choice):
        return f"{_pp(t.left, _CHOICE)} + {_pp(t.right, _PAR)}"
    if isinstance(t, PChoice):
        return f"{_pp(t.left, _CHOICE)} +({_num(t.p)}) {_pp(t.right, _PAR)}"
    if isinstance(t, Par):
        return f"{_pp(t.left, _PAR)} {_sync(t.sync)} {_pp(t.right, _SEQ)}"
    if isinstance(t, PPar):
        return f"{_pp(t.left, _PAR)} {_sync(t.sync)}({_num(t.p)}) {_pp(t.right, _SEQ)}"
    raise TypeError(f"not a process term: {t!r}")


def pretty(t: Term) -> str:
    """Canonical, minimally parenthesised text of a term; it parses back to ``t``."""
    return _render(t)


# ---------------------------------------------------------------------- errors


class ModelError(Exception):
    """Base class of every error reported for a model file or term."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + message)


class ParseError(ModelError):
    pass


class UndefinedConstantError(ModelError):
    pass


class DuplicateDefinitionError(ModelError):
    pass


class UnguardedRecursionError(ModelError):
    pass


class ValueRangeError(ModelError):
    pass


class CalculusMismatchError(ModelError):
    pass


# ------------------------------------------------------------------------- env


@dataclass(frozen=True)
class DefinitionEnv:
    """A calculus, its constant definitions (in definition order) and the initial term."""

    calculus: Calculus
    equations: dict = field(hash=False)
    init: Term = STOP
    observer: bool = False

    def body(self, name: str) -> Term:
        return self.equations[name]

    def with_terms(self, *texts: str) -> tuple[Term, ...]:
        """Parse extra terms in this env's calculus and validate them against it."""
        terms = tuple(parse_term(t, self.calculus) for t in texts)
        for t in terms:
            _check_term(t, self, guarded=False)
        return terms

    def __str__(self):
        lines = [f"calculus {self.calculus.value}"]
        lines += [f"const {name} = {pretty(body)}" for name, body in self.equations.items()]
        lines.append(f"init {pretty(self.init)}")
        return "\n".join(lines) + "\n"


def alphabet_of(env: DefinitionEnv, *extra: Term) -> tuple[str, ...]:
    """Actions occurring in the equations, the initial term and ``extra`` terms.

    Order is first occurrence, walking equations in definition order, then the
    initial term, then ``extra``; synchronisation sets are read between the two
    operands of a parallel composition, in sorted order.
    """
    seen: dict[str, None] = {}
    for term in (*env.equations.values(), env.init, *extra):
        _collect_actions(term, seen)
    return tuple(seen)


def _collect_actions(term: Term, seen: dict) -> None:
    if isinstance(term, (Prefix, RatedPrefix)):
        seen.setdefault(term.action, None)
        _collect_actions(term.body, seen)
    elif isinstance(term, (Choice, PChoice)):
        _collect_actions(term.left, seen)
        _collect_actions(term.right, seen)
    elif isinstance(term, (Par, PPar)):
        _collect_actions(term.left, seen)
        for a in sorted(term.sync):
            seen.setdefault(a, None)
        _collect_actions(term.right, seen)


def _check_term(term: Term, env: DefinitionEnv, guarded: bool, where=(None, None)) -> None:
    allowed = _ALLOWED[env.calculus]
    for t in subterms(term):
        if not isinstance(t, allowed):
            raise CalculusMismatchError(
                f"{type(t).__name__} is not an operator of {env.calculus.value}", *where
            )
        if isinstance(t, Const) and t.name not in env.equations:
            if not (env.observer and t.name == OMEGA):
                raise UndefinedConstantError(f"constant {t.name} is not defined", *where)
        if isinstance(t, RatedPrefix) and t.rate <= 0:
            raise ValueRangeError(f"rate of {t.action} must be positive, got {_num(t.rate)}", *where)
        if isinstance(t, (PChoice, PPar)) and not 0 <= t.p <= 1:
            raise ValueRangeError(f"probability must lie in [0,1], got {_num(t.p)}", *where)
    if guarded and _unguarded_const(term) is not None:
        raise UnguardedRecursionError(
            f"constant {_unguarded_const(term)} occurs unguarded", *where
        )


def _unguarded_const(term: Term) -> str | None:
    if isinstance(term, Const):
        return term.name
    if isinstance(term, (Choice, PChoice, Par, PPar)):
        return _unguarded_const(term.left) or _unguarded_const(term.right)
    return None


def make_env(calculus: Calculus, equations: dict, init: Term, observer: bool = False) -> DefinitionEnv:
    """Build and validate an environment from already-constructed terms."""
    env = DefinitionEnv(calculus, dict(equations), init, observer)
    if observer and OMEGA in env.equations:
        raise DuplicateDefinitionError(f"{OMEGA} is reserved for the success state")
    for body in env.equations.values():
        _check_term(body, env, guarded=True)
    _check_term(init, env, guarded=False)
    return env


# ---------------------------------------------------------------------- lexer


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<lsync>\|\[)
  | (?P<rsync>\]\|)
  | (?P<punct>[.+(),=])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"calculus", "const", "init", "stop"}


@dataclass(frozen=True)
class Token:
    kind: str  # num, action, const, kw, lsync, rsync, punct, eof
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind, lexeme = m.lastgroup, m.group()
        col = pos - line_start + 1
        if kind == "ws":
            nl = lexeme.count("\n")
            if nl:
                line += nl
                line_start = pos + lexeme.rindex("\n") + 1
        else:
            if kind == "ident":
                if lexeme in _KEYWORDS:
                    kind = "kw"
                elif lexeme[0].isupper():
                    kind = "const"
                else:
                    kind = "action"
            tokens.append(Token(kind, lexeme, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def parse_number(text: str) -> Fraction:
    num, _, den = text.partition("/")
    value = Fraction(num)
    if den:
        if int(den) == 0:
            raise ZeroDivisionError(text)
        value /= int(den)
    return value


# --------------------------------------------------------------------- parser


class _Parser:
    def __init__(self, tokens: list[Token], calculus: Calculus | None = None):
        self.tokens = tokens
        self.i = 0
        self.calculus = calculus

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, msg: str, tok: Token | None = None, cls=ParseError):
        tok = tok or self.tok
        return cls(msg, tok.line, tok.column)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            want = repr(text) if text else kind
            got = repr(self.tok.text) if self.tok.kind != "eof" else "end of input"
            raise self.error(f"expected {want}, found {got}")
        return self.advance()

    def number(self, what: str) -> Fraction:
        tok = self.expect("num")
        try:
            return parse_number(tok.text)
        except ZeroDivisionError:
            raise self.error(f"{what} has a zero denominator", tok, ValueRangeError) from None

    def probability(self) -> Fraction:
        self.expect("punct", "(")
        tok = self.tok
        p = self.number("probability")
        if not 0 <= p <= 1:
            raise self.error(f"probability must lie in [0,1], got {tok.text}", tok, ValueRangeError)
        self.expect("punct", ")")
        return p

    def _prob_follows(self) -> bool:
        return self.at("punct", "(") and self.peek().kind == "num"

    # TERM ::= PAR (('+' | '+(p)') PAR)*
    def term(self) -> Term:
        left = self.par()
        while self.at("punct", "+"):
            op = self.advance()
            if self.calculus is Calculus.PCSP:
                if not self._prob_follows():
                    raise self.error("pcsp choice needs a probability: P +(p) Q", op, CalculusMismatchError)
                p = self.probability()
                left = PChoice(p, left, self.par())
            else:
                if self._prob_follows():
                    raise self.error(
                        f"probabilistic choice is not an operator of {self.calculus.value}",
                        op,
                        CalculusMismatchError,
                    )
                left = Choice(left, self.par())
        return left

    # PAR ::= SEQ (('|[L]|' | '|[L]|(p)') SEQ)*
    def par(self) -> Term:
        left = self.seq()
        while self.at("lsync"):
            op = self.advance()
            actions = []
            if not self.at("rsync"):
                actions.append(self.expect("action").text)
                while self.at("punct", ","):
                    self.advance()
                    actions.append(self.expect("action").text)
            self.expect("rsync")
            sync = frozenset(actions)
            if self.calculus is Calculus.PCSP:
                if not self._prob_follows():
                    raise self.error("pcsp parallel needs a probability: P |[L]|(p) Q", op, CalculusMismatchError)
                p = self.probability()
                left = PPar(sync, p, left, self.seq())
            else:
                if self._prob_follows():
                    raise self.error(
                        f"probabilistic parallel is not an operator of {self.calculus.value}",
                        op,
                        CalculusMismatchError,
                    )
                left = Par(sync, left, self.seq())
        return left

    def seq(self) -> Term:
        tok = self.tok
        if tok.kind == "action":
            self.advance()
            if self.calculus is Calculus.PEPA:
                raise self.error(f"pepa prefixes need a rate: ({tok.text},r).P", tok, CalculusMismatchError)
            self.expect("punct", ".")
            return Prefix(tok.text, self.seq())
        if tok.kind == "kw" and tok.text == "stop":
            self.advance()
            return STOP
        if tok.kind == "const":
            self.advance()
            return Const(tok.text)
        if tok.kind == "punct" and tok.text == "(":
            if self.peek().kind == "action" and self.peek(2).kind == "punct" and self.peek(2).text == ",":
                return self.rated_prefix()
            self.advance()
            inner = self.term()
            self.expect("punct", ")")
            return inner
        got = repr(tok.text) if tok.kind != "eof" else "end of input"
        raise self.error(f"expected a process term, found {got}")

    def rated_prefix(self) -> Term:
        start = self.expect("punct", "(")
        if self.calculus is not Calculus.PEPA:
            raise self.error(f"rated prefixes are not part of {self.calculus.value}", start, CalculusMismatchError)
        action = self.expect("action").text
        self.expect("punct", ",")
        tok = self.tok
        rate = self.number("rate")
        if rate <= 0:
            raise self.error(f"rate must be positive, got {tok.text}", tok, ValueRangeError)
        self.expect("punct", ")")
        self.expect("punct", ".")
        return RatedPrefix(action, rate, self.seq())

    def model(self, observer: bool) -> DefinitionEnv:
        self.expect("kw", "calculus")
        tok = self.tok
        name = self.advance().text
        try:
            self.calculus = Calculus(name)
        except ValueError:
            raise self.error(f"unknown calculus {name!r} (csp, pcsp or pepa)", tok) from None
        equations: dict[str, Term] = {}
        where: dict[str, tuple[int, int]] = {}
        init = None
        init_at = None
        while not self.at("eof"):
            kw = self.expect("kw")
            if kw.text == "const":
                name_tok = self.expect("const")
                name = name_tok.text
                if name in equations:
                    raise self.error(f"constant {name} is defined twice", name_tok, DuplicateDefinitionError)
                if observer and name == OMEGA:
                    raise self.error(f"{OMEGA} is reserved for the success state", name_tok, DuplicateDefinitionError)
                self.expect("punct", "=")
                equations[name] = self.term()
                where[name] = (name_tok.line, name_tok.column)
            elif kw.text == "init":
                if init is not None:
                    raise self.error("init is given twice", kw, DuplicateDefinitionError)
                init_at = (kw.line, kw.column)
                init = self.term()
            else:
                raise self.error(f"unexpected keyword {kw.text!r}", kw)
        if init is None:
            raise self.error("missing init")
        env = DefinitionEnv(self.calculus, equations, init, observer)
        for name, body in equations.items():
            _check_term(body, env, guarded=True, where=where[name])
        _check_term(init, env, guarded=False, where=init_at)
        return env


def parse_model(text: str, observer: bool = False) -> DefinitionEnv:
    """Parse and validate a model file.

    With ``observer=True`` the reserved constant ``OMEGA`` (the success
    state) may be referenced without a definition and may not be defined.
    """
    return _Parser(tokenize(text)).model(observer)


def parse_term(text: str, calculus: Calculus | str) -> Term:
    """Parse a single term; constants are not resolved."""
    p = _Parser(tokenize(text), Calculus(calculus))
    t = p.term()
    p.expect("eof")
    return t

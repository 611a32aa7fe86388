"""Formula syntax for ATL and its variants.

Surface syntax (ASCII; the usual Unicode symbols are accepted as well)::

    true  false  p  !f  f & g  f | g  f -> g  (f)
    <<A1,A2>> X f     <<A>> F f    <<A>> G f    <<>> (f U g)
    <<A>> (f R g)     <<A>> (f W g)    <<A>> Finf f    <<A>> Ginf f
    <<A>> !X f        <<A>> (F p & G !q)                (ATL+ only)

Precedence from tight to loose: ``!`` and the prefix operators (coalition
quantifiers, X F G Finf Ginf), then ``&``, ``|`` and ``->`` (right
associative).  U, R and W are infix and take unary operands; use parentheses
for anything bigger.

Dialects:

* ``atlorig``: one X, G, F or U directly under each quantifier.
* ``atl``: adds R, W and negated temporal operators.
* ``eatl``: ``atl`` plus Finf and Ginf.
* ``atlplus``: Boolean combinations of X, F, G, U, R, W under one quantifier.
"""

import re
from dataclasses import dataclass

from .errors import DialectError, FormulaSyntaxError

DIALECTS = ("atl", "atlorig", "eatl", "atlplus")

# ---------------------------------------------------------------------------
# State formulas


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Coalition:
    agents: tuple
    path: object


# ---------------------------------------------------------------------------
# Path formulas


@dataclass(frozen=True)
class Next:
    arg: object


@dataclass(frozen=True)
class Finally:
    arg: object


@dataclass(frozen=True)
class Globally:
    arg: object


@dataclass(frozen=True)
class InfOften:
    arg: object


@dataclass(frozen=True)
class AlmostAlways:
    arg: object


@dataclass(frozen=True)
class Until:
    left: object
    right: object


@dataclass(frozen=True)
class Release:
    left: object
    right: object


@dataclass(frozen=True)
class WeakUntil:
    left: object
    right: object


@dataclass(frozen=True)
class PNot:
    arg: object


@dataclass(frozen=True)
class POr:
    left: object
    right: object


@dataclass(frozen=True)
class PAnd:
    left: object
    right: object


@dataclass(frozen=True)
class PImplies:
    left: object
    right: object


@dataclass(frozen=True)
class PState:
    """A state formula used as a path formula (ATL+)."""

    arg: object


TRUE = Top()
FALSE = Bot()

STATE_TYPES = (Top, Bot, Prop, Not, Or, And, Implies, Coalition)
TEMPORAL_UNARY = (Next, Finally, Globally, InfOften, AlmostAlways)
TEMPORAL_BINARY = (Until, Release, WeakUntil)
TEMPORAL = TEMPORAL_UNARY + TEMPORAL_BINARY
PATH_BOOL = (PNot, POr, PAnd, PImplies, PState)
PATH_TYPES = TEMPORAL + PATH_BOOL


def is_state(f):
    return isinstance(f, STATE_TYPES)


def children(f):
    if isinstance(f, (Top, Bot, Prop)):
        return ()
    if isinstance(f, Coalition):
        return (f.path,)
    if isinstance(f, (Not, PNot, PState) + TEMPORAL_UNARY):
        return (f.arg,)
    return (f.left, f.right)


def subformulas(f):
    """All distinct subformulas, children before parents."""
    seen = set()
    out = []
    stack = [(f, False)]
    while stack:
        g, done = stack.pop()
        if done:
            if g not in seen:
                seen.add(g)
                out.append(g)
            continue
        if g in seen:
            continue
        stack.append((g, True))
        for c in reversed(children(g)):
            stack.append((c, False))
    return out


def state_subformulas(f):
    return [g for g in subformulas(f) if is_state(g)]


def size(f):
    """Number of nodes in the syntax tree.

    The coalition quantifier and the temporal operator below it are separate
    nodes, so ``<<A>> X p`` has size 3.  A state formula embedded in a path
    formula is not counted twice.
    """
    if isinstance(f, PState):
        return size(f.arg)
    return 1 + sum(size(c) for c in children(f))


def dag_size(f):
    """Number of distinct subformulas (size of the shared DAG)."""
    return len([g for g in subformulas(f) if not isinstance(g, PState)])


def props(f):
    return {g.name for g in subformulas(f) if isinstance(g, Prop)}


def coalition_agents(f):
    out = set()
    for g in subformulas(f):
        if isinstance(g, Coalition):
            out.update(g.agents)
    return out


def modal_depth(f):
    if isinstance(f, Coalition):
        return 1 + max((modal_depth(c) for c in children(f.path)), default=0)
    return max((modal_depth(c) for c in children(f)), default=0)


# ---------------------------------------------------------------------------
# Rewriting


def neg(f):
    """Negate a state formula, removing a double negation."""
    return f.arg if isinstance(f, Not) else Not(f)


def _pneg(p):
    """Negate a primitive path formula by moving to its dual."""
    if isinstance(p, Next):
        return Next(neg(p.arg))
    if isinstance(p, Until):
        return Release(neg(p.left), neg(p.right))
    if isinstance(p, Release):
        return Until(neg(p.left), neg(p.right))
    if isinstance(p, InfOften):
        return AlmostAlways(neg(p.arg))
    if isinstance(p, AlmostAlways):
        return InfOften(neg(p.arg))
    if isinstance(p, PState):
        return PState(neg(p.arg))
    if isinstance(p, PNot):
        return p.arg
    return PNot(p)


def expand_sugar(f):
    """Rewrite into the primitive operators.

    State level keeps true, propositions, negation, disjunction and the
    quantifiers over X, U, R, Finf and Ginf.  F, G and W become U and R,
    false becomes !true, and negated temporal operators are replaced by
    their duals.  Path-level Boolean structure (ATL+) becomes PNot/POr over
    primitive temporal operators and PState leaves.
    """
    memo = {}

    def st(g):
        r = memo.get(g)
        if r is not None:
            return r
        if isinstance(g, (Top, Prop)):
            r = g
        elif isinstance(g, Bot):
            r = Not(TRUE)
        elif isinstance(g, Not):
            r = neg(st(g.arg))
        elif isinstance(g, Or):
            r = Or(st(g.left), st(g.right))
        elif isinstance(g, And):
            r = neg(Or(neg(st(g.left)), neg(st(g.right))))
        elif isinstance(g, Implies):
            r = Or(neg(st(g.left)), st(g.right))
        elif isinstance(g, Coalition):
            r = Coalition(g.agents, pa(g.path))
        else:
            raise TypeError(f"not a state formula: {g!r}")
        memo[g] = r
        return r

    def pa(p):
        if isinstance(p, Next):
            return Next(st(p.arg))
        if isinstance(p, Finally):
            return Until(TRUE, st(p.arg))
        if isinstance(p, Globally):
            return Release(Not(TRUE), st(p.arg))
        if isinstance(p, InfOften):
            return InfOften(st(p.arg))
        if isinstance(p, AlmostAlways):
            return AlmostAlways(st(p.arg))
        if isinstance(p, Until):
            return Until(st(p.left), st(p.right))
        if isinstance(p, Release):
            return Release(st(p.left), st(p.right))
        if isinstance(p, WeakUntil):
            a, b = st(p.left), st(p.right)
            return Release(b, Or(a, b))
        if isinstance(p, PState):
            return PState(st(p.arg))
        if isinstance(p, PNot):
            return _pneg(pa(p.arg))
        if isinstance(p, POr):
            return POr(pa(p.left), pa(p.right))
        if isinstance(p, PAnd):
            return _pneg(POr(_pneg(pa(p.left)), _pneg(pa(p.right))))
        if isinstance(p, PImplies):
            return POr(_pneg(pa(p.left)), pa(p.right))
        raise TypeError(f"not a path formula: {p!r}")

    return st(f)


def is_simple_path(p):
    """True when `p` is one temporal operator possibly under negations."""
    while isinstance(p, PNot):
        p = p.arg
    return isinstance(p, TEMPORAL)


# ---------------------------------------------------------------------------
# Printing


def to_str(f):
    """Canonical text; `parse(to_str(f)) == f` for parser-produced formulas."""
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Not):
        return "!" + to_str(f.arg)
    if isinstance(f, (Or, POr)):
        return f"({to_str(f.left)} | {to_str(f.right)})"
    if isinstance(f, (And, PAnd)):
        return f"({to_str(f.left)} & {to_str(f.right)})"
    if isinstance(f, (Implies, PImplies)):
        return f"({to_str(f.left)} -> {to_str(f.right)})"
    if isinstance(f, Coalition):
        return "<<" + ",".join(f.agents) + ">> " + to_str(f.path)
    if isinstance(f, PState):
        return to_str(f.arg)
    if isinstance(f, PNot):
        return "!" + to_str(f.arg)
    for cls, kw in ((Next, "X"), (Finally, "F"), (Globally, "G"),
                    (InfOften, "Finf"), (AlmostAlways, "Ginf")):
        if isinstance(f, cls):
            return f"{kw} {to_str(f.arg)}"
    for cls, kw in ((Until, "U"), (Release, "R"), (WeakUntil, "W")):
        if isinstance(f, cls):
            return f"({to_str(f.left)} {kw} {to_str(f.right)})"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Parsing

KEYWORDS = {"X", "U", "R", "W", "F", "G", "Finf", "Ginf", "true", "false"}
_UNICODE = {"¬": "!", "∧": "&", "∨": "|", "→": "->", "⟨⟨": "<<", "⟩⟩": ">>",
            "⊤": "true", "⊥": "false"}
_tok_re = re.compile(r"\s*(?:(<<|>>|->|[(),!&|])|([A-Za-z_][A-Za-z0-9_']*)|(⟨⟨|⟩⟩|[¬∧∨→⊤⊥]))")

_ALLOWED = {
    "atlorig": {Next, Globally, Finally, Until},
    "atl": {Next, Globally, Finally, Until, Release, WeakUntil},
    "eatl": {Next, Globally, Finally, Until, Release, WeakUntil, InfOften, AlmostAlways},
    "atlplus": {Next, Globally, Finally, Until, Release, WeakUntil},
}
_NAMES = {Next: "X", Globally: "G", Finally: "F", Until: "U", Release: "R",
          WeakUntil: "W", InfOften: "Finf", AlmostAlways: "Ginf"}
_UNARY_KW = {"X": Next, "F": Finally, "G": Globally, "Finf": InfOften, "Ginf": AlmostAlways}
_BINARY_KW = {"U": Until, "R": Release, "W": WeakUntil}


def tokenize(text):
    toks = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _tok_re.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append((m.group(1), None, start))
        elif m.group(2):
            w = m.group(2)
            toks.append((w, None, start) if w in KEYWORDS else ("id", w, start))
        else:
            toks.append((_UNICODE[m.group(3)], None, start))
        pos = m.end()
    toks.append(("eof", None, n))
    return toks


class _Parser:
    def __init__(self, text, dialect):
        if dialect not in DIALECTS:
            raise ValueError(f"unknown dialect {dialect!r}")
        self.text = text
        self.dialect = dialect
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][2]

    def take(self, kind=None):
        t = self.toks[self.i]
        if kind is not None and t[0] != kind:
            shown = "end of input" if t[0] == "eof" else repr(t[1] or t[0])
            raise FormulaSyntaxError(f"expected {kind!r}, found {shown}", t[2], self.text)
        self.i += 1
        return t

    def fail(self, msg):
        raise FormulaSyntaxError(msg, self.pos(), self.text)

    # state level

    def state(self):
        left = self.s_or()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.state())
        return left

    def s_or(self):
        f = self.s_and()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.s_and())
        return f

    def s_and(self):
        f = self.s_unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.s_unary())
        return f

    def s_unary(self):
        k = self.peek()
        if k == "!":
            self.take()
            return Not(self.s_unary())
        if k == "<<":
            self.take()
            agents = []
            if self.peek() != ">>":
                agents.append(self.take("id")[1])
                while self.peek() == ",":
                    self.take()
                    agents.append(self.take("id")[1])
            self.take(">>")
            start = self.pos()
            p = self.p_unary()
            if self.dialect != "atlplus" and not is_simple_path(p):
                raise DialectError(
                    f"dialect {self.dialect} needs a temporal operator after the quantifier",
                    start, self.text)
            return Coalition(tuple(agents), p)
        if k == "true":
            self.take()
            return TRUE
        if k == "false":
            self.take()
            return FALSE
        if k == "id":
            return Prop(self.take()[1])
        if k == "(":
            self.take()
            f = self.state()
            self.take(")")
            return f
        if k in KEYWORDS:
            self.fail(f"temporal operator {k!r} outside a coalition quantifier")
        if k == "eof":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {k!r}")

    # path level

    def _temporal(self, cls, pos, *args):
        if cls not in _ALLOWED[self.dialect]:
            raise DialectError(
                f"operator {_NAMES[cls]} is not allowed in dialect {self.dialect}", pos, self.text)
        return cls(*args)

    def _bool(self, op, pos):
        if self.dialect != "atlplus":
            raise DialectError(
                f"path connective {op!r} needs dialect atlplus", pos, self.text)

    def p_expr(self):
        left = self.p_or()
        if self.peek() == "->":
            self._bool("->", self.pos())
            self.take()
            right = self.p_expr()
            if isinstance(left, PState) and isinstance(right, PState):
                return PState(Implies(left.arg, right.arg))
            return PImplies(left, right)
        return left

    def p_or(self):
        f = self.p_and()
        while self.peek() == "|":
            self._bool("|", self.pos())
            self.take()
            g = self.p_and()
            f = PState(Or(f.arg, g.arg)) if isinstance(f, PState) and isinstance(g, PState) else POr(f, g)
        return f

    def p_and(self):
        f = self.p_unary()
        while self.peek() == "&":
            self._bool("&", self.pos())
            self.take()
            g = self.p_unary()
            f = PState(And(f.arg, g.arg)) if isinstance(f, PState) and isinstance(g, PState) else PAnd(f, g)
        return f

    def p_unary(self):
        k = self.peek()
        start = self.pos()
        if k == "!":
            # `!a U b` negates the left operand, not the until
            save = self.i
            try:
                left = self.s_unary()
                if self.peek() in _BINARY_KW:
                    op = self.take()
                    return self._temporal(_BINARY_KW[op[0]], op[2], left, self.s_unary())
            except DialectError:
                raise
            except FormulaSyntaxError:
                pass
            self.i = save
            if self.dialect == "atlorig":
                raise DialectError("path negation is not allowed in dialect atlorig",
                                   start, self.text)
            self.take()
            p = self.p_unary()
            return PState(Not(p.arg)) if isinstance(p, PState) else PNot(p)
        if k in _UNARY_KW:
            self.take()
            return self._temporal(_UNARY_KW[k], start, self.s_unary())
        if k == "(":
            save = self.i
            state_result = None
            try:
                left = self.s_unary()
                if self.peek() in _BINARY_KW:
                    op = self.take()
                    return self._temporal(_BINARY_KW[op[0]], op[2], left, self.s_unary())
                state_result = (left, self.i)
            except DialectError:
                raise
            except FormulaSyntaxError:
                pass
            self.i = save
            try:
                self.take("(")
                p = self.p_expr()
                self.take(")")
                return p
            except DialectError:
                if state_result is None:
                    raise
            except FormulaSyntaxError:
                if state_result is None:
                    raise
            left, self.i = state_result
            return self._literal(left, start)
        left = self.s_unary()
        if self.peek() in _BINARY_KW:
            op = self.take()
            return self._temporal(_BINARY_KW[op[0]], op[2], left, self.s_unary())
        return self._literal(left, start)

    def _literal(self, f, pos):
        if self.dialect != "atlplus":
            raise DialectError(
                f"dialect {self.dialect} needs a temporal operator after the quantifier",
                pos, self.text)
        return PState(f)


def parse(text, dialect="atl"):
    """Parse a state formula in the given dialect."""
    p = _Parser(text, dialect)
    f = p.state()
    if p.peek() != "eof":
        p.fail(f"unexpected {p.toks[p.i][1] or p.peek()!r} after formula")
    return f


def parse_lines(text, dialect="atl"):
    """Parse one formula per line, skipping blank lines and '#' comments."""
    out = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse(line, dialect))
        except FormulaSyntaxError as e:
            cls = type(e)
            err = cls(f"line {ln}: {e.message}", e.pos)
            err.line = ln
            raise err from None
    return out


def check_dialect(f, dialect):
    """Raise DialectError if formula `f` is outside `dialect`."""
    for g in subformulas(f):
        if isinstance(g, Coalition):
            p = g.path
            if dialect != "atlplus" and not is_simple_path(p):
                raise DialectError(f"{to_str(g)} needs dialect atlplus")
            for h in subformulas(p):
                if isinstance(h, TEMPORAL) and type(h) not in _ALLOWED[dialect]:
                    raise DialectError(
                        f"operator {_NAMES[type(h)]} is not allowed in dialect {dialect}")
                if dialect == "atlorig" and isinstance(h, PNot):
                    raise DialectError("path negation is not allowed in dialect atlorig")
    return f


def conj(fs):
    fs = list(fs)
    if not fs:
        return TRUE
    out = fs[0]
    for g in fs[1:]:
        out = And(out, g)
    return out


def disj(fs):
    fs = list(fs)
    if not fs:
        return FALSE
    out = fs[0]
    for g in fs[1:]:
        out = Or(out, g)
    return out


def pconj(ps):
    ps = list(ps)
    out = ps[0]
    for p in ps[1:]:
        out = PAnd(out, p)
    return out

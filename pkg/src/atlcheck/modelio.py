"""Line-oriented text format for game structures.

Example (explicit CGS)::

    kind cgs-explicit
    agents A1 A2
    states l0 l1 l2
    ap p q
    label l1 p
    moves l0 A1=2 A2=2
    trans l0 (1,1) -> l1
    ...

Implicit CGS use ``guard <state> <condition> -> <state>`` lines, tried in
file order.  ATS use ``choice <state> <agent> {a,b} {c}`` lines.  States
without a ``moves`` line give every agent a single move, but transitions are
never filled in implicitly.
"""

import re

from .errors import ModelParseError
from .gamestruct import (
    TRUE, FALSE, Atom, Ats, CAnd, CNot, COr, CgsExplicit, CgsImplicit,
    cond_to_str,
)

IDENT = r"[A-Za-z_][A-Za-z0-9_'.@]*"
_ident_re = re.compile(IDENT + r"\Z")
KINDS = ("cgs-explicit", "cgs-implicit", "ats")


def _check_ident(name, line):
    if not _ident_re.match(name):
        raise ModelParseError(f"bad identifier {name!r}", line)
    return name


_cond_tok = re.compile(r"\s*(?:(" + IDENT + r")\s*=\s*(\d+)|(true|false)\b|([()!&|]))")


def parse_condition(text, agents, line=None):
    """Parse a guard such as ``A1=1 & !(A2=2 | A3=1)``."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _cond_tok.match(text, pos)
        if not m:
            raise ModelParseError(f"bad guard syntax near {text[pos:]!r}", line)
        pos = m.end()
        if m.group(3):
            toks.append(("const", m.group(3) == "true"))
        elif m.group(1):
            if m.group(1) not in agents:
                raise ModelParseError(f"unknown agent {m.group(1)!r} in guard", line)
            k = int(m.group(2))
            if k < 1:
                raise ModelParseError("moves are numbered from 1", line)
            toks.append(("atom", Atom(agents.index(m.group(1)), k - 1)))
        else:
            toks.append((m.group(4), None))
        while pos < len(text) and text[pos].isspace():
            pos += 1
    i = 0

    def peek():
        return toks[i][0] if i < len(toks) else None

    def take(kind):
        nonlocal i
        if peek() != kind:
            raise ModelParseError(f"expected {kind!r} in guard {text!r}", line)
        i += 1
        return toks[i - 1]

    def p_or():
        args = [p_and()]
        while peek() == "|":
            take("|")
            args.append(p_and())
        return args[0] if len(args) == 1 else COr(tuple(args))

    def p_and():
        args = [p_not()]
        while peek() == "&":
            take("&")
            args.append(p_not())
        return args[0] if len(args) == 1 else CAnd(tuple(args))

    def p_not():
        nonlocal i
        k = peek()
        if k == "!":
            take("!")
            return CNot(p_not())
        if k == "(":
            take("(")
            c = p_or()
            take(")")
            return c
        if k == "const":
            i += 1
            return TRUE if toks[i - 1][1] else FALSE
        if k == "atom":
            i += 1
            return toks[i - 1][1]
        raise ModelParseError(f"unexpected token in guard {text!r}", line)

    if not toks:
        raise ModelParseError("empty guard", line)
    c = p_or()
    if i != len(toks):
        raise ModelParseError(f"trailing tokens in guard {text!r}", line)
    return c


def _parse_set(text, states, line):
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ModelParseError(f"expected a set in braces, got {text!r}", line)
    body = text[1:-1].strip()
    names = [x.strip() for x in body.split(",")] if body else []
    out = set()
    for n in names:
        if n not in states:
            raise ModelParseError(f"unknown state {n!r}", line)
        out.add(states.index(n))
    return frozenset(out)


def parse_model(text):
    """Parse the text format and return a game structure.

    Structural invariants (complete tables, final true guard, singleton
    intersections) are not enforced here; see `gamestruct.validate`.
    """
    kind = agents = states = ap = None
    labels = {}
    moves = {}
    table = {}
    guards = {}
    choices = {}
    last = 0
    for ln, raw in enumerate(text.splitlines(), 1):
        last = ln
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "kind":
            if kind is not None:
                raise ModelParseError("duplicate kind declaration", ln)
            if rest not in KINDS:
                raise ModelParseError(f"unknown kind {rest!r}", ln)
            kind = rest
            continue
        if kind is None:
            raise ModelParseError("the first declaration must be 'kind'", ln)
        if head in ("agents", "states", "ap"):
            names = [_check_ident(x, ln) for x in rest.split()]
            if len(set(names)) != len(names):
                raise ModelParseError(f"duplicate names in {head}", ln)
            if head == "agents":
                if agents is not None:
                    raise ModelParseError("duplicate agents declaration", ln)
                agents = names
            elif head == "states":
                if states is not None:
                    raise ModelParseError("duplicate states declaration", ln)
                if not names:
                    raise ModelParseError("at least one state is required", ln)
                states = names
            else:
                if ap is not None:
                    raise ModelParseError("duplicate ap declaration", ln)
                ap = names
            continue
        if agents is None or states is None:
            raise ModelParseError("agents and states must be declared first", ln)
        words = rest.split()
        if not words:
            raise ModelParseError(f"missing state after {head!r}", ln)
        st = words[0]
        if st not in states:
            raise ModelParseError(f"unknown state {st!r}", ln)
        s = states.index(st)
        body = rest[len(st):].strip()
        if head == "label":
            props = body.split()
            if ap is not None:
                for p in props:
                    if p not in ap:
                        raise ModelParseError(f"unknown proposition {p!r}", ln)
            if s in labels:
                raise ModelParseError(f"duplicate label line for {st!r}", ln)
            labels[s] = frozenset(props)
        elif head == "moves":
            if kind == "ats":
                raise ModelParseError("ATS have no 'moves' lines", ln)
            if s in moves:
                raise ModelParseError(f"duplicate moves line for {st!r}", ln)
            mv = [1] * len(agents)
            for item in body.split():
                a, eq, k = item.partition("=")
                if not eq or a not in agents or not k.isdigit() or int(k) < 1:
                    raise ModelParseError(f"bad move count {item!r}", ln)
                mv[agents.index(a)] = int(k)
            moves[s] = tuple(mv)
        elif head == "trans":
            if kind != "cgs-explicit":
                raise ModelParseError("'trans' lines belong to explicit CGS", ln)
            m = re.match(r"\(([^)]*)\)\s*->\s*(\S+)\s*\Z", body)
            if not m:
                raise ModelParseError(f"bad transition {body!r}", ln)
            try:
                jm = tuple(int(x) - 1 for x in m.group(1).split(",") if x.strip())
            except ValueError:
                raise ModelParseError(f"bad joint move {m.group(1)!r}", ln) from None
            if len(jm) != len(agents):
                raise ModelParseError("joint move has wrong number of components", ln)
            if m.group(2) not in states:
                raise ModelParseError(f"unknown state {m.group(2)!r}", ln)
            t = table.setdefault(s, {})
            if jm in t:
                raise ModelParseError(f"duplicate transition for {m.group(1)}", ln)
            t[jm] = states.index(m.group(2))
        elif head == "guard":
            if kind != "cgs-implicit":
                raise ModelParseError("'guard' lines belong to implicit CGS", ln)
            cond, arrow, tgt = body.rpartition("->")
            tgt = tgt.strip()
            if not arrow:
                raise ModelParseError("guard needs '-> state'", ln)
            if tgt not in states:
                raise ModelParseError(f"unknown state {tgt!r}", ln)
            guards.setdefault(s, []).append((parse_condition(cond, agents, ln), states.index(tgt)))
        elif head == "choice":
            if kind != "ats":
                raise ModelParseError("'choice' lines belong to ATS", ln)
            a, _, sets = body.partition(" ")
            if a not in agents:
                raise ModelParseError(f"unknown agent {a!r}", ln)
            per = choices.setdefault(s, {})
            if a in per:
                raise ModelParseError(f"duplicate choice line for {st} {a}", ln)
            found = re.findall(r"\{[^}]*\}", sets)
            if "".join(found).replace(" ", "") != sets.replace(" ", ""):
                raise ModelParseError(f"bad choice sets {sets!r}", ln)
            per[a] = tuple(_parse_set(x, states, ln) for x in found)
        else:
            raise ModelParseError(f"unknown declaration {head!r}", ln)

    if kind is None or agents is None or states is None:
        raise ModelParseError("missing kind, agents or states declaration", last)
    if ap is None:
        ap = sorted(set().union(*labels.values())) if labels else []
    lab = [labels.get(s, frozenset()) for s in range(len(states))]
    mv = [moves.get(s, (1,) * len(agents)) for s in range(len(states))]
    if kind == "cgs-explicit":
        from itertools import product
        for s in range(len(states)):
            t = table.get(s, {})
            for jm in product(*[range(k) for k in mv[s]]):
                if jm not in t:
                    raise ModelParseError(
                        f"missing transition at {states[s]} for ({','.join(str(x + 1) for x in jm)})", last)
            for jm in t:
                if any(not 0 <= x < k for x, k in zip(jm, mv[s])):
                    raise ModelParseError(
                        f"transition at {states[s]} uses an undeclared move", last)
        return CgsExplicit(agents, states, ap, lab, mv, [table.get(s, {}) for s in range(len(states))])
    if kind == "cgs-implicit":
        for s in range(len(states)):
            if s not in guards:
                raise ModelParseError(f"no guards for state {states[s]}", last)
        return CgsImplicit(agents, states, ap, lab, mv, [guards[s] for s in range(len(states))])
    ch = []
    for s in range(len(states)):
        per = choices.get(s, {})
        for a in agents:
            if a not in per:
                raise ModelParseError(f"no choices for agent {a} at state {states[s]}", last)
        ch.append([per[a] for a in agents])
    return Ats(agents, states, ap, lab, ch)


def load_model(path):
    with open(path) as f:
        return parse_model(f.read())


def dump_model(g):
    """Render a structure in the text format; `parse_model` inverts it."""
    out = [f"kind {g.kind}", "agents " + " ".join(g.agents),
           "states " + " ".join(g.states), "ap " + " ".join(g.ap)]
    for s, name in enumerate(g.states):
        if g.labels[s]:
            out.append(f"label {name} " + " ".join(sorted(g.labels[s])))
    if g.kind in ("cgs-explicit", "cgs-implicit"):
        for s, name in enumerate(g.states):
            if any(k != 1 for k in g.moves[s]):
                out.append(f"moves {name} " + " ".join(
                    f"{a}={k}" for a, k in zip(g.agents, g.moves[s])))
    if g.kind == "cgs-explicit":
        for s, name in enumerate(g.states):
            for jm in sorted(g.table[s]):
                mv = ",".join(str(x + 1) for x in jm)
                out.append(f"trans {name} ({mv}) -> {g.states[g.table[s][jm]]}")
    elif g.kind == "cgs-implicit":
        for s, name in enumerate(g.states):
            for c, t in g.rules[s]:
                out.append(f"guard {name} {cond_to_str(c, g.agents)} -> {g.states[t]}")
    else:
        for s, name in enumerate(g.states):
            for a, sets in zip(g.agents, g.choices[s]):
                rendered = " ".join(
                    "{" + ",".join(g.states[x] for x in sorted(c)) + "}" for c in sets)
                out.append(f"choice {name} {a} {rendered}")
    return "\n".join(out) + "\n"

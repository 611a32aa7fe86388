"""Game structures: explicit CGS, implicit (guarded) CGS and ATS.

States, agents and moves are identified internally by 0-based indices.  The
text format and every user-facing rendering use 1-based move numbers.
"""

from dataclasses import dataclass
from itertools import product

from .errors import ResolutionError, StructureError


# ---------------------------------------------------------------------------
# Move conditions (guards of implicit CGS)


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Atom:
    """Agent `agent` plays move `move` (both 0-based)."""

    agent: int
    move: int


@dataclass(frozen=True)
class CNot:
    arg: object


@dataclass(frozen=True)
class CAnd:
    args: tuple


@dataclass(frozen=True)
class COr:
    args: tuple


TRUE = Const(True)
FALSE = Const(False)


def cond_atoms(c):
    if isinstance(c, Atom):
        yield c
    elif isinstance(c, CNot):
        yield from cond_atoms(c.arg)
    elif isinstance(c, (CAnd, COr)):
        for a in c.args:
            yield from cond_atoms(a)


def eval_condition(c, moves):
    """Evaluate condition `c` under a (partial) assignment agent -> move.

    Returns True or False when the assignment decides `c`, otherwise the
    residual condition with decided parts folded away.
    """
    if isinstance(c, Const):
        return c.value
    if isinstance(c, Atom):
        m = moves.get(c.agent)
        if m is None:
            return c
        return m == c.move
    if isinstance(c, CNot):
        r = eval_condition(c.arg, moves)
        if r is True or r is False:
            return not r
        return CNot(r)
    if isinstance(c, CAnd):
        rest = []
        for a in c.args:
            r = eval_condition(a, moves)
            if r is False:
                return False
            if r is not True:
                rest.append(r)
        if not rest:
            return True
        return rest[0] if len(rest) == 1 else CAnd(tuple(rest))
    if isinstance(c, COr):
        rest = []
        for a in c.args:
            r = eval_condition(a, moves)
            if r is True:
                return True
            if r is not False:
                rest.append(r)
        if not rest:
            return False
        return rest[0] if len(rest) == 1 else COr(tuple(rest))
    raise TypeError(f"not a move condition: {c!r}")


def cond_to_str(c, agents):
    if isinstance(c, Const):
        return "true" if c.value else "false"
    if isinstance(c, Atom):
        return f"{agents[c.agent]}={c.move + 1}"
    if isinstance(c, CNot):
        return "!" + cond_to_str(c.arg, agents)
    op = " & " if isinstance(c, CAnd) else " | "
    return "(" + op.join(cond_to_str(a, agents) for a in c.args) + ")"


# ---------------------------------------------------------------------------
# Structures


@dataclass(frozen=True)
class Violation:
    state: str
    rule: str
    message: str
    agent: str = None

    def __str__(self):
        return self.message


class GameStructure:
    """Common part of the three representations.

    Subclasses provide `move_counts(s)` and `successor(s, joint)`.
    """

    kind = None

    def __init__(self, agents, states, ap, labels):
        self.agents = tuple(agents)
        self.states = tuple(states)
        self.ap = tuple(ap)
        self.labels = tuple(frozenset(l) for l in labels)
        if len(self.labels) != len(self.states):
            raise StructureError("one label set per state is required")
        self._agent_ix = {a: i for i, a in enumerate(self.agents)}
        self._state_ix = {s: i for i, s in enumerate(self.states)}
        self._cache = {}

    # identifiers -----------------------------------------------------------

    @property
    def n_states(self):
        return len(self.states)

    @property
    def n_agents(self):
        return len(self.agents)

    def state_id(self, s):
        if isinstance(s, int):
            if 0 <= s < len(self.states):
                return s
            raise ResolutionError(f"state index {s} out of range")
        try:
            return self._state_ix[s]
        except KeyError:
            raise ResolutionError(f"unknown state {s!r}") from None

    def agent_id(self, a):
        if isinstance(a, int):
            if 0 <= a < len(self.agents):
                return a
            raise ResolutionError(f"agent index {a} out of range")
        try:
            return self._agent_ix[a]
        except KeyError:
            raise ResolutionError(f"unknown agent {a!r}") from None

    def coalition(self, agents):
        """Normalise a collection of agent names or indices to a sorted tuple."""
        return tuple(sorted({self.agent_id(a) for a in agents}))

    def state_set(self, states):
        return frozenset(self.state_id(s) for s in states)

    def state_names(self, ids):
        return [self.states[i] for i in sorted(ids)]

    def holds(self, s, prop):
        return prop in self.labels[s]

    # semantics -------------------------------------------------------------

    def move_counts(self, s):
        raise NotImplementedError

    def successor(self, s, joint):
        raise NotImplementedError

    def transitions(self, s):
        """Cached list of (joint move, successor) in lexicographic order."""
        key = ("tr", s)
        t = self._cache.get(key)
        if t is None:
            t = [(m, self.successor(s, m))
                 for m in product(*[range(k) for k in self.move_counts(s)])]
            self._cache[key] = t
        return t

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (self.agents, self.states, self.ap, self.labels)

    def __repr__(self):
        return (f"{type(self).__name__}({len(self.agents)} agents, "
                f"{len(self.states)} states)")


class CgsExplicit(GameStructure):
    """Concurrent game structure with an explicit transition table.

    `moves[s][a]` is the number of moves of agent a at state s and
    `table[s]` maps each joint move tuple to a successor index.
    """

    kind = "cgs-explicit"

    def __init__(self, agents, states, ap, labels, moves, table):
        super().__init__(agents, states, ap, labels)
        self.moves = tuple(tuple(m) for m in moves)
        self.table = tuple(dict(t) for t in table)
        if len(self.moves) != self.n_states or len(self.table) != self.n_states:
            raise StructureError("moves and table need one entry per state")

    def move_counts(self, s):
        return self.moves[s]

    def successor(self, s, joint):
        try:
            return self.table[s][tuple(joint)]
        except KeyError:
            raise StructureError(
                f"no transition at {self.states[s]} for {fmt_moves(joint)}") from None

    def _key(self):
        return super()._key() + (self.moves, tuple(tuple(sorted(t.items())) for t in self.table))


class CgsImplicit(GameStructure):
    """Concurrent game structure given by ordered guarded transitions.

    `rules[s]` is a sequence of (condition, successor); the first condition
    that holds under the joint move fires.  The last condition must be true.
    """

    kind = "cgs-implicit"

    def __init__(self, agents, states, ap, labels, moves, rules):
        super().__init__(agents, states, ap, labels)
        self.moves = tuple(tuple(m) for m in moves)
        self.rules = tuple(tuple((c, t) for c, t in r) for r in rules)
        if len(self.moves) != self.n_states or len(self.rules) != self.n_states:
            raise StructureError("moves and rules need one entry per state")

    def move_counts(self, s):
        return self.moves[s]

    def fire(self, s, joint):
        """Index of the first guard at `s` that holds under `joint`."""
        env = dict(enumerate(joint))
        for i, (c, _) in enumerate(self.rules[s]):
            if eval_condition(c, env) is True:
                return i
        raise StructureError(f"no guard fires at {self.states[s]} for {fmt_moves(joint)}")

    def successor(self, s, joint):
        return self.rules[s][self.fire(s, joint)][1]

    def _key(self):
        return super()._key() + (self.moves, self.rules)


class Ats(GameStructure):
    """Alternating transition system.

    `choices[s][a]` is the tuple of choice sets (frozensets of successor
    indices) offered to agent a at state s.
    """

    kind = "ats"

    def __init__(self, agents, states, ap, labels, choices):
        super().__init__(agents, states, ap, labels)
        self.choices = tuple(tuple(tuple(frozenset(c) for c in per_agent)
                                   for per_agent in per_state)
                             for per_state in choices)
        if len(self.choices) != self.n_states:
            raise StructureError("choices need one entry per state")

    def move_counts(self, s):
        return tuple(len(c) for c in self.choices[s])

    def intersection(self, s, joint):
        cur = None
        for a, i in enumerate(joint):
            cur = self.choices[s][a][i] if cur is None else cur & self.choices[s][a][i]
        return frozenset(range(self.n_states)) if cur is None else cur

    def successor(self, s, joint):
        inter = self.intersection(s, joint)
        if len(inter) != 1:
            raise StructureError(
                f"intersection of size {len(inter)} at {self.states[s]} for choices {fmt_moves(joint)}")
        return next(iter(inter))

    def support(self, s, agents):
        """States that every agent in `agents` has in some choice set at s."""
        cur = frozenset(range(self.n_states))
        for a in agents:
            u = frozenset().union(*self.choices[s][a])
            cur &= u
        return cur

    def _key(self):
        return super()._key() + (self.choices,)


def fmt_moves(joint):
    return "(" + ",".join(str(m + 1) for m in joint) + ")"


# ---------------------------------------------------------------------------
# Module-level operations


def validate(g):
    """Check every structural invariant; returns a list of Violations."""
    out = []
    n = g.n_states

    def bad(s, rule, msg, agent=None):
        out.append(Violation(g.states[s] if s is not None else "", rule, msg, agent))

    if len(set(g.states)) != n:
        bad(None, "names", "duplicate state names")
    if len(set(g.agents)) != g.n_agents:
        bad(None, "names", "duplicate agent names")
    if n == 0:
        bad(None, "nonempty", "structure has no states")
    aps = set(g.ap)
    for s in range(n):
        extra = g.labels[s] - aps
        if extra:
            bad(s, "labels", f"labels {sorted(extra)} at {g.states[s]} are not atomic propositions")

    if isinstance(g, (CgsExplicit, CgsImplicit)):
        for s in range(n):
            if len(g.moves[s]) != g.n_agents:
                bad(s, "moves", f"move vector at {g.states[s]} has wrong length")
                continue
            for a, k in enumerate(g.moves[s]):
                if k < 1:
                    bad(s, "moves", f"agent {g.agents[a]} has no move at {g.states[s]}", g.agents[a])
    if isinstance(g, CgsExplicit):
        for s in range(n):
            if len(g.moves[s]) != g.n_agents:
                continue
            expected = set(product(*[range(k) for k in g.moves[s]]))
            keys = set(g.table[s])
            for m in sorted(expected - keys):
                bad(s, "table", f"missing transition at {g.states[s]} for {fmt_moves(m)}")
            for m in sorted(keys - expected, key=repr):
                bad(s, "table", f"transition at {g.states[s]} for undefined move {m!r}")
            for m in sorted(keys & expected):
                t = g.table[s][m]
                if not (isinstance(t, int) and 0 <= t < n):
                    bad(s, "table", f"bad successor at {g.states[s]} for {fmt_moves(m)}")
    elif isinstance(g, CgsImplicit):
        for s in range(n):
            rules = g.rules[s]
            if not rules:
                bad(s, "guards", f"no guards at {g.states[s]}")
                continue
            if rules[-1][0] != TRUE:
                bad(s, "guards", f"last guard at {g.states[s]} is not true")
            for c, t in rules:
                if not (isinstance(t, int) and 0 <= t < n):
                    bad(s, "guards", f"bad successor in guard at {g.states[s]}")
                for at in cond_atoms(c):
                    if not 0 <= at.agent < g.n_agents:
                        bad(s, "guards", f"guard at {g.states[s]} names unknown agent {at.agent}")
                    elif len(g.moves[s]) == g.n_agents and not 0 <= at.move < g.moves[s][at.agent]:
                        bad(s, "guards",
                            f"guard at {g.states[s]} uses move {at.move + 1} of "
                            f"{g.agents[at.agent]} which has {g.moves[s][at.agent]}",
                            g.agents[at.agent])
    elif isinstance(g, Ats):
        for s in range(n):
            ch = g.choices[s]
            if len(ch) != g.n_agents:
                bad(s, "choices", f"choice vector at {g.states[s]} has wrong length")
                continue
            ok = True
            for a, sets in enumerate(ch):
                if not sets:
                    bad(s, "choices", f"agent {g.agents[a]} has no choice at {g.states[s]}", g.agents[a])
                    ok = False
                for c in sets:
                    if not c:
                        bad(s, "choices", f"empty choice set for {g.agents[a]} at {g.states[s]}", g.agents[a])
                    if any(not (isinstance(x, int) and 0 <= x < n) for x in c):
                        bad(s, "choices", f"choice set for {g.agents[a]} at {g.states[s]} has unknown state")
                        ok = False
            if not ok:
                continue
            for m in product(*[range(len(c)) for c in ch]):
                inter = g.intersection(s, m)
                if len(inter) == 0:
                    bad(s, "singleton", f"empty intersection at {g.states[s]} for choices {fmt_moves(m)}")
                elif len(inter) > 1:
                    bad(s, "singleton",
                        f"intersection of size {len(inter)} at {g.states[s]} for choices {fmt_moves(m)}")
    return out


def require_valid(g):
    v = validate(g)
    if v:
        raise StructureError("; ".join(str(x) for x in v[:5]))
    return g


def next_states(g, s):
    """All successors of state `s`."""
    s = g.state_id(s)
    return frozenset(t for _, t in g.transitions(s))


def joint_moves(g, s, coalition):
    """All moves of `coalition` at `s`, as tuples aligned with the sorted coalition."""
    s = g.state_id(s)
    A = g.coalition(coalition)
    mc = g.move_counts(s)
    return list(product(*[range(mc[a]) for a in A]))


def next_restricted(g, s, coalition, move):
    """Successors of `s` when `coalition` plays `move` and the others play anything."""
    s = g.state_id(s)
    A = g.coalition(coalition)
    mc = g.move_counts(s)
    if len(move) != len(A):
        raise ResolutionError("coalition move has wrong length")
    for a, i in zip(A, move):
        if not 0 <= i < mc[a]:
            raise ResolutionError(
                f"move {i + 1} of {g.agents[a]} is not available at {g.states[s]}")
    return outcome_map(g, s, A)[tuple(move)]


def coalition_outcomes(g, s, coalition):
    """List of (coalition move, successor set) for every move of the coalition.

    Computed from full joint moves only; used by the strategy-enumeration
    engine and by bisimulation checking.
    """
    A = g.coalition(coalition)
    key = ("out", s, A)
    r = g._cache.get(key)
    if r is None:
        groups = {}
        for m, t in g.transitions(s):
            groups.setdefault(tuple(m[a] for a in A), set()).add(t)
        r = [(mv, frozenset(ts)) for mv, ts in sorted(groups.items())]
        g._cache[key] = r
    return r


def outcome_map(g, s, A):
    """Dict form of `coalition_outcomes` for a normalised coalition tuple."""
    key = ("outmap", s, A)
    r = g._cache.get(key)
    if r is None:
        r = dict(coalition_outcomes(g, s, A))
        g._cache[key] = r
    return r


def relabel(g, labels, ap=None):
    """Copy of `g` with a different labelling (same transitions)."""
    ap = tuple(ap) if ap is not None else tuple(sorted(set().union(*labels)))
    if isinstance(g, CgsExplicit):
        h = CgsExplicit(g.agents, g.states, ap, labels, g.moves, g.table)
    elif isinstance(g, CgsImplicit):
        h = CgsImplicit(g.agents, g.states, ap, labels, g.moves, g.rules)
    else:
        h = Ats(g.agents, g.states, ap, labels, g.choices)
    # transition caches do not depend on labels
    h._cache = {k: v for k, v in g._cache.items() if k != "props"}
    return h

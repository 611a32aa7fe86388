"""Translations between the three structure kinds, and alternating bisimulation.

Each translation returns a `Translation` holding the new structure and the
relation (pairs of source and target state indices) that is claimed to be
an alternating bisimulation.
"""

from dataclasses import dataclass, field
from itertools import product

from .gamestruct import (
    TRUE, Atom, Ats, CAnd, COr, CgsExplicit, CgsImplicit, coalition_outcomes,
    require_valid,
)


@dataclass(frozen=True)
class Translation:
    structure: object
    relation: frozenset
    # for CGS -> ATS: ATS state index -> (target, source, joint move) or None
    origin: tuple = field(default=(), compare=False)

    def render_state(self, q):
        """Triple states as target_{source,m1,...,mk} with 1-based moves."""
        g = self.structure
        o = self.origin[q] if self.origin else None
        if o is None:
            return g.states[q]
        tgt, src, m, names = o
        return f"{names[tgt]}_{{{names[src]}," + ",".join(str(x + 1) for x in m) + "}"


def _identity(n):
    return frozenset((s, s) for s in range(n))


def e_to_i(g):
    """Explicit CGS to implicit CGS: one conjunction guard per joint move.

    The last joint move is replaced by a final true guard.
    """
    require_valid(g)
    rules = []
    for s in range(g.n_states):
        tr = g.transitions(s)
        r = []
        for m, t in tr[:-1]:
            atoms = tuple(Atom(a, i) for a, i in enumerate(m))
            r.append((atoms[0] if len(atoms) == 1 else CAnd(atoms), t))
        r.append((TRUE, tr[-1][1]))
        rules.append(r)
    h = CgsImplicit(g.agents, g.states, g.ap, g.labels, g.moves, rules)
    return Translation(h, _identity(g.n_states))


def i_to_e(g):
    """Implicit CGS to explicit CGS by evaluating the guards on every joint move."""
    require_valid(g)
    table = [{m: t for m, t in g.transitions(s)} for s in range(g.n_states)]
    h = CgsExplicit(g.agents, g.states, g.ap, g.labels, g.moves, table)
    return Translation(h, _identity(g.n_states))


def ats_to_e(g):
    """ATS to explicit CGS: move i of an agent is its i-th choice set."""
    require_valid(g)
    moves = [g.move_counts(s) for s in range(g.n_states)]
    table = [{m: t for m, t in g.transitions(s)} for s in range(g.n_states)]
    h = CgsExplicit(g.agents, g.states, g.ap, g.labels, moves, table)
    return Translation(h, _identity(g.n_states))


def _simplify(cls, args):
    args = tuple(args)
    return args[0] if len(args) == 1 else cls(args)


def ats_to_i(g):
    """ATS to implicit CGS.

    For each successor t the guard says that every agent picks one of its
    sets containing t.  These guards are mutually exclusive; a final true
    guard repeats the last successor.
    """
    require_valid(g)
    rules = []
    moves = []
    for s in range(g.n_states):
        ch = g.choices[s]
        moves.append(tuple(len(c) for c in ch))
        succ = sorted({t for _, t in g.transitions(s)})
        r = []
        for t in succ:
            conj = []
            for a, sets in enumerate(ch):
                conj.append(_simplify(COr, [Atom(a, j) for j, c in enumerate(sets) if t in c]))
            r.append((_simplify(CAnd, conj) if conj else TRUE, t))
        r.append((TRUE, succ[-1]))
        rules.append(r)
    h = CgsImplicit(g.agents, g.states, g.ap, g.labels, moves, rules)
    return Translation(h, _identity(g.n_states))


def _triple_name(names, tgt, src, m, taken):
    base = f"{names[tgt]}_{names[src]}_" + "_".join(str(x + 1) for x in m)
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def e_to_ats(g):
    """Explicit CGS to ATS.

    ATS states are the triples (target, source, joint move) of the CGS
    transitions, plus one copy of every CGS state to start from.  At a
    triple whose first component is l, move i of agent j is the set of
    triples (Edg(l, m'), l, m') over joint moves m' with m'_j = i.  The
    relation links each CGS state l to every ATS state whose first
    component is l.
    """
    require_valid(g)
    names = g.states
    taken = set(names)
    states = list(names)
    origin = [None] * len(names)
    first = list(range(len(names)))
    index = {}
    for src in range(g.n_states):
        for m, tgt in g.transitions(src):
            index[(src, m)] = len(states)
            states.append(_triple_name(names, tgt, src, m, taken))
            origin.append((tgt, src, m, names))
            first.append(tgt)

    def sets_at(l):
        out = []
        mc = g.move_counts(l)
        for a in range(g.n_agents):
            per = []
            for i in range(mc[a]):
                per.append(frozenset(index[(l, m)] for m, _ in g.transitions(l) if m[a] == i))
            out.append(per)
        return out

    per_loc = [sets_at(l) for l in range(g.n_states)]
    choices = [per_loc[first[q]] for q in range(len(states))]
    labels = [g.labels[first[q]] for q in range(len(states))]
    h = Ats(g.agents, states, g.ap, labels, choices)
    rel = frozenset((first[q], q) for q in range(len(states)))
    return Translation(h, rel, tuple(origin))


def i_to_ats(g):
    """Implicit CGS to ATS through the explicit table."""
    return e_to_ats(i_to_e(g).structure)


# ---------------------------------------------------------------------------
# Alternating bisimulation


@dataclass(frozen=True)
class BisimReport:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _min_outcomes(g, s, A):
    key = ("minout", s, A)
    r = g._cache.get(key)
    if r is None:
        outs = sorted({o for _, o in coalition_outcomes(g, s, A)}, key=len)
        r = []
        for o in outs:
            if not any(k <= o for k in r):
                r.append(o)
        g._cache[key] = r
    return r


def _coalitions(n):
    return [tuple(a for a in range(n) if bits[a]) for bits in product((0, 1), repeat=n)]


def _pair_ok(g1, g2, s1, s2, R, coalitions, perm):
    """Both alternating conditions for every coalition at the pair (s1, s2)."""
    for A in coalitions:
        B = tuple(sorted(perm[a] for a in A))
        o1 = _min_outcomes(g1, s1, A)
        o2 = _min_outcomes(g2, s2, B)
        for X in o1:
            if not any(all(any((q1, q2) in R for q1 in X) for q2 in Y) for Y in o2):
                return A, "forth"
        for Y in o2:
            if not any(all(any((q1, q2) in R for q2 in Y) for q1 in X) for X in o1):
                return A, "back"
    return None


def _agent_perm(g1, g2):
    if sorted(g1.agents) != sorted(g2.agents):
        return None
    return {a: g2.agent_id(g1.agents[a]) for a in range(g1.n_agents)}


def check_bisim(g1, g2, relation):
    """Is `relation` (pairs of state indices) an alternating bisimulation?

    Agents are matched by name.  Related states need equal labels, and for
    every coalition A each move of A on one side must be matched by a move
    of A on the other side whose outcomes are all related to some outcome
    of the first move, in both directions.
    """
    perm = _agent_perm(g1, g2)
    if perm is None:
        return BisimReport(False, "the structures have different agents")
    R = frozenset(relation)
    coalitions = _coalitions(g1.n_agents)
    for s1, s2 in sorted(R):
        if g1.labels[s1] != g2.labels[s2]:
            return BisimReport(False, f"labels differ at ({g1.states[s1]}, {g2.states[s2]})")
        bad = _pair_ok(g1, g2, s1, s2, R, coalitions, perm)
        if bad:
            A, d = bad
            names = ",".join(g1.agents[a] for a in A)
            return BisimReport(
                False, f"{d} condition fails for <<{names}>> at ({g1.states[s1]}, {g2.states[s2]})")
    return BisimReport(True)


def largest_bisim(g1, g2):
    """Greatest alternating bisimulation, from label-equal pairs downwards."""
    perm = _agent_perm(g1, g2)
    if perm is None:
        return frozenset()
    R = {(s1, s2) for s1 in range(g1.n_states) for s2 in range(g2.n_states)
         if g1.labels[s1] == g2.labels[s2]}
    coalitions = _coalitions(g1.n_agents)
    changed = True
    while changed:
        changed = False
        for pair in sorted(R):
            if _pair_ok(g1, g2, pair[0], pair[1], R, coalitions, perm):
                R.discard(pair)
                changed = True
    return frozenset(R)


def compose(r1, r2):
    """Relational composition {(a, c) | (a, b) in r1, (b, c) in r2}."""
    by_first = {}
    for b, c in r2:
        by_first.setdefault(b, []).append(c)
    return frozenset((a, c) for a, b in r1 for c in by_first.get(b, ()))


TRANSLATIONS = {
    ("cgs-explicit", "cgs-implicit"): e_to_i,
    ("cgs-implicit", "cgs-explicit"): i_to_e,
    ("cgs-explicit", "ats"): e_to_ats,
    ("cgs-implicit", "ats"): i_to_ats,
    ("ats", "cgs-explicit"): ats_to_e,
    ("ats", "cgs-implicit"): ats_to_i,
}


def translate(g, to):
    """Dispatch on (source kind, target kind)."""
    if g.kind == to:
        return Translation(g, _identity(g.n_states))
    return TRANSLATIONS[(g.kind, to)](g)

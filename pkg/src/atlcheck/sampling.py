"""Random structures and exhaustive formula families for testing."""

import random
from itertools import product

from .formula import (
    Coalition, Not, Next, Prop, Release, Until, InfOften, AlmostAlways,
)
from .gamestruct import (
    TRUE, Atom, Ats, CAnd, CNot, COr, CgsExplicit, CgsImplicit, validate,
)

KINDS = ("cgs-explicit", "cgs-implicit", "ats")


def _names(prefix, n):
    return [f"{prefix}{i}" for i in range(n)]


def _labels(rng, n, aps):
    return [frozenset(p for p in aps if rng.random() < 0.5) for _ in range(n)]


def random_cgse(rng, n_states, n_agents, max_moves=3, aps=("p", "q")):
    moves = [tuple(rng.randint(1, max_moves) for _ in range(n_agents)) for _ in range(n_states)]
    table = []
    for s in range(n_states):
        table.append({m: rng.randrange(n_states) for m in product(*[range(k) for k in moves[s]])})
    return CgsExplicit(_names("A", n_agents), _names("s", n_states), aps,
                       _labels(rng, n_states, aps), moves, table)


def _random_cond(rng, moves, depth=2):
    r = rng.random()
    if depth == 0 or r < 0.4:
        a = rng.randrange(len(moves))
        return Atom(a, rng.randrange(moves[a]))
    if r < 0.55:
        return CNot(_random_cond(rng, moves, depth - 1))
    args = tuple(_random_cond(rng, moves, depth - 1) for _ in range(rng.randint(2, 3)))
    return CAnd(args) if r < 0.8 else COr(args)


def random_cgsi(rng, n_states, n_agents, max_moves=3, aps=("p", "q")):
    moves = [tuple(rng.randint(1, max_moves) for _ in range(n_agents)) for _ in range(n_states)]
    rules = []
    for s in range(n_states):
        r = [(_random_cond(rng, moves[s]), rng.randrange(n_states))
             for _ in range(rng.randint(0, 3))]
        r.append((TRUE, rng.randrange(n_states)))
        rules.append(r)
    return CgsImplicit(_names("A", n_agents), _names("s", n_states), aps,
                       _labels(rng, n_states, aps), moves, rules)


def _ats_state(rng, n_states, n_agents, max_moves):
    # first try random tables whose induced choice sets have singleton
    # intersections; fall back to an injective table
    for _ in range(20):
        counts = [rng.randint(1, max_moves) for _ in range(n_agents)]
        table = {m: rng.randrange(n_states) for m in product(*[range(k) for k in counts])}
        sets = [[frozenset(t for m, t in table.items() if m[a] == i) for i in range(counts[a])]
                for a in range(n_agents)]
        if all(len(frozenset.intersection(*[sets[a][m[a]] for a in range(n_agents)])) == 1
               for m in table):
            return sets
    while True:
        counts = [rng.randint(1, max_moves) for _ in range(n_agents)]
        total = 1
        for k in counts:
            total *= k
        if total <= n_states:
            break
    targets = rng.sample(range(n_states), total)
    moves = list(product(*[range(k) for k in counts]))
    table = dict(zip(moves, targets))
    return [[frozenset(t for m, t in table.items() if m[a] == i) for i in range(counts[a])]
            for a in range(n_agents)]


def random_ats(rng, n_states, n_agents, max_moves=3, aps=("p", "q")):
    choices = []
    for s in range(n_states):
        sets = _ats_state(rng, n_states, n_agents, max_moves)
        if n_agents >= 2 and rng.random() < 0.3:
            # add a state that some other agent never offers; intersections
            # stay singletons but the choice set grows
            a, b = rng.sample(range(n_agents), 2)
            offered = frozenset().union(*sets[b])
            free = [x for x in range(n_states) if x not in offered]
            if free:
                i = rng.randrange(len(sets[a]))
                sets[a][i] = sets[a][i] | {rng.choice(free)}
        choices.append(sets)
    return Ats(_names("A", n_agents), _names("s", n_states), aps,
               _labels(rng, n_states, aps), choices)


def random_structure(rng, kind, max_states=6, max_agents=3, max_moves=3, aps=("p", "q")):
    n = rng.randint(1, max_states)
    k = rng.randint(1, max_agents)
    fn = {"cgs-explicit": random_cgse, "cgs-implicit": random_cgsi, "ats": random_ats}[kind]
    g = fn(rng, n, k, max_moves, aps)
    assert not validate(g), validate(g)
    return g


def rng_for(seed, *salt):
    return random.Random(":".join(str(x) for x in (seed,) + salt))


# ---------------------------------------------------------------------------
# Formula families


def coalitions(g):
    """All subsets of the agents, as tuples of names."""
    out = []
    for bits in product((0, 1), repeat=g.n_agents):
        out.append(tuple(a for a, b in zip(g.agents, bits) if b))
    return out


def literals(aps=("p", "q")):
    return [Prop(p) for p in aps] + [Not(Prop(p)) for p in aps]


def depth1(agents_list, operands, eatl=False):
    """Every quantified formula over the given operands (one operator deep)."""
    out = []
    for A in agents_list:
        for a in operands:
            out.append(Coalition(A, Next(a)))
            if eatl:
                out.append(Coalition(A, InfOften(a)))
                out.append(Coalition(A, AlmostAlways(a)))
        for a in operands:
            for b in operands:
                out.append(Coalition(A, Until(a, b)))
                out.append(Coalition(A, Release(a, b)))
    return out

"""Controllable predecessor operator.

``cpre(g, A, S)`` is the set of states where coalition A has a move that
forces the next state into S whatever the other agents do.  Each structure
kind has its own kernel:

* explicit CGS: enumerate coalition moves and opponent co-moves in the table;
* implicit CGS: partially evaluate the guards under the coalition move, then
  search the co-moves for one whose first true guard leads outside S;
* ATS: the outcome of coalition choices is the intersection of the chosen
  sets restricted to states the opponents can still select.

`CpreTable` runs the same kernels once per coalition and caches the outcome
set of every coalition move as a bitmask, which is what the fixpoint engine
iterates over.
"""

from itertools import product

from .gamestruct import Ats, CgsExplicit, CgsImplicit, eval_condition


def mask_of(states):
    m = 0
    for s in states:
        m |= 1 << s
    return m


def states_of(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def _split(g, A):
    A = g.coalition(A)
    opp = tuple(a for a in range(g.n_agents) if a not in A)
    return A, opp


def _combine(n, A, ma, opp, mo):
    joint = [0] * n
    for a, i in zip(A, ma):
        joint[a] = i
    for a, i in zip(opp, mo):
        joint[a] = i
    return tuple(joint)


def _explicit_witness(g, s, A, opp, S):
    mc = g.moves[s]
    table = g.table[s]
    for ma in product(*[range(mc[a]) for a in A]):
        for mo in product(*[range(mc[a]) for a in opp]):
            if table[_combine(g.n_agents, A, ma, opp, mo)] not in S:
                break
        else:
            return ma
    return None


def _implicit_witness(g, s, A, opp, S):
    mc = g.moves[s]
    rules = g.rules[s]
    for ma in product(*[range(mc[a]) for a in A]):
        env = dict(zip(A, ma))
        residual = []
        for c, t in rules:
            r = eval_condition(c, env)
            if r is False:
                continue
            residual.append((r, t))
            if r is True:
                break
        # a move is safe unless some co-move fires a guard leading outside S
        if all(t in S for _, t in residual):
            return ma
        escape = False
        for mo in product(*[range(mc[a]) for a in opp]):
            full = dict(zip(opp, mo))
            for r, t in residual:
                if r is True or eval_condition(r, full) is True:
                    if t not in S:
                        escape = True
                    break
            if escape:
                break
        if not escape:
            return ma
    return None


def _ats_outcome(g, s, A, support, ma):
    cur = support
    for a, i in zip(A, ma):
        cur = cur & g.choices[s][a][i]
    return cur


def _ats_witness(g, s, A, opp, S):
    support = g.support(s, opp)
    mc = g.move_counts(s)
    for ma in product(*[range(mc[a]) for a in A]):
        if _ats_outcome(g, s, A, support, ma) <= S:
            return ma
    return None


def _witness_fn(g):
    if isinstance(g, CgsExplicit):
        return _explicit_witness
    if isinstance(g, CgsImplicit):
        return _implicit_witness
    if isinstance(g, Ats):
        return _ats_witness
    raise TypeError(f"unsupported structure {g!r}")


def cpre(g, A, S):
    """States from which coalition A can force the successor into S."""
    A, opp = _split(g, A)
    S = g.state_set(S)
    fn = _witness_fn(g)
    return frozenset(s for s in range(g.n_states) if fn(g, s, A, opp, S) is not None)


def cpre_witness(g, A, S):
    """Map each state of cpre(g, A, S) to its lexicographically least forcing move."""
    A, opp = _split(g, A)
    S = g.state_set(S)
    fn = _witness_fn(g)
    out = {}
    for s in range(g.n_states):
        m = fn(g, s, A, opp, S)
        if m is not None:
            out[s] = m
    return out


def _outcomes(g, s, A, opp):
    """(coalition move, outcome mask) pairs computed with the kind's kernel."""
    mc = g.move_counts(s)
    moves = list(product(*[range(mc[a]) for a in A]))
    out = []
    if isinstance(g, CgsExplicit):
        for ma in moves:
            m = 0
            for mo in product(*[range(mc[a]) for a in opp]):
                m |= 1 << g.table[s][_combine(g.n_agents, A, ma, opp, mo)]
            out.append((ma, m))
    elif isinstance(g, CgsImplicit):
        for ma in moves:
            env = dict(zip(A, ma))
            residual = []
            for c, t in g.rules[s]:
                r = eval_condition(c, env)
                if r is False:
                    continue
                residual.append((r, t))
                if r is True:
                    break
            m = 0
            for mo in product(*[range(mc[a]) for a in opp]):
                full = dict(zip(opp, mo))
                for r, t in residual:
                    if r is True or eval_condition(r, full) is True:
                        m |= 1 << t
                        break
            out.append((ma, m))
    elif isinstance(g, Ats):
        support = g.support(s, opp)
        for ma in moves:
            out.append((ma, mask_of(_ats_outcome(g, s, A, support, ma))))
    else:
        raise TypeError(f"unsupported structure {g!r}")
    return out


class CpreTable:
    """Outcome masks of every coalition move at every state, for one coalition."""

    def __init__(self, g, A):
        self.g = g
        self.coalition, opp = _split(g, A)
        self.outcomes = [_outcomes(g, s, self.coalition, opp) for s in range(g.n_states)]
        # only the inclusion-minimal outcomes matter for cpre itself
        self.minimal = []
        for row in self.outcomes:
            masks = sorted({m for _, m in row}, key=lambda x: bin(x).count("1"))
            keep = []
            for m in masks:
                if not any(k & m == k for k in keep):
                    keep.append(m)
            self.minimal.append(tuple(keep))
        self.calls = 0

    @classmethod
    def get(cls, g, A):
        key = ("cpre", g.coalition(A))
        t = g._cache.get(key)
        if t is None:
            t = cls(g, A)
            g._cache[key] = t
        return t

    def cpre_mask(self, S):
        self.calls += 1
        out = 0
        bad = ~S
        for s, opts in enumerate(self.minimal):
            for m in opts:
                if not m & bad:
                    out |= 1 << s
                    break
        return out

    def witness(self, s, S):
        """Least coalition move at s whose outcome lies in mask S, or None."""
        bad = ~S
        for ma, m in self.outcomes[s]:
            if not m & bad:
                return ma
        return None

"""Model checking, strategy synthesis and the strategy-enumeration oracle.

Three engines share one compositional labeller and differ in how a
quantified formula ``<<A>> path`` is evaluated:

* `check` runs Kleene iteration over `CpreTable` (X, U, R, Finf, Ginf);
* `oracle_check` enumerates memoryless coalition strategies and checks the
  resulting outcome graphs path by path, with no predecessor operator and no
  fixpoint;
* `check_atlplus` handles Boolean path formulas by strategy enumeration and
  falls back to the fixpoint for single temporal operators.
"""

import os
from dataclasses import dataclass

from .cpre import CpreTable, mask_of, states_of
from .errors import BudgetExceeded, DialectError, ResolutionError, StrategyError
from .formula import (
    AlmostAlways, And, Bot, Coalition, Finally, Globally,
    Implies, InfOften, Next, Not, Or, PAnd, PImplies, PNot, POr, PState, Prop,
    Release, Top, Until, WeakUntil, to_str,
)
from .gamestruct import coalition_outcomes, next_states, outcome_map
from .pathcheck import compile_negation, nnf, universal_compiled

DEFAULT_BUDGET = 10 ** 6


def default_budget():
    v = os.environ.get("ATLCHECK_BUDGET")
    return int(v) if v else DEFAULT_BUDGET


# ---------------------------------------------------------------------------
# Results


class LabelingResult:
    """Satisfaction sets of every state subformula that was evaluated."""

    def __init__(self, g, formula, masks, iterations=None):
        self.g = g
        self.formula = formula
        self.masks = masks
        self.iterations = iterations or {}

    @property
    def sat(self):
        """Dict from each evaluated state subformula to its satisfaction set."""
        return {f: states_of(m) for f, m in self.masks.items()}

    def __getitem__(self, f):
        return states_of(self.masks[f])

    def __contains__(self, f):
        return f in self.masks

    @property
    def states(self):
        """States satisfying the top-level formula."""
        return self[self.formula]

    def holds(self, s, f=None):
        f = self.formula if f is None else f
        return bool((self.masks[f] >> self.g.state_id(s)) & 1)

    def names(self, f=None):
        f = self.formula if f is None else f
        return self.g.state_names(self[f])


@dataclass(frozen=True)
class MemorylessStrategy:
    """A coalition move for every state.

    `coalition` is the sorted tuple of agent indices and `moves[s]` the
    coalition move (aligned with `coalition`, 0-based) played at state s.
    """

    coalition: tuple
    moves: tuple

    def move(self, s):
        return self.moves[s]

    def as_dict(self, g):
        """{state: {agent: move}} with 1-based moves."""
        return {g.states[s]: {g.agents[a]: m + 1 for a, m in zip(self.coalition, mv)}
                for s, mv in enumerate(self.moves)}

    def render(self, g):
        lines = []
        for s, mv in enumerate(self.moves):
            parts = " ".join(f"{g.agents[a]}={m + 1}" for a, m in zip(self.coalition, mv))
            lines.append(f"{g.states[s]}: {parts}" if parts else f"{g.states[s]}:")
        return "\n".join(lines)

    @classmethod
    def from_dict(cls, g, coalition, d):
        """Inverse of `as_dict`; states missing from `d` play move 1."""
        A = g.coalition(coalition)
        moves = []
        for s in range(g.n_states):
            row = d.get(g.states[s], {})
            mv = []
            for a in A:
                m = row.get(g.agents[a], 1)
                if not isinstance(m, int) or m < 1:
                    raise StrategyError(f"bad move {m!r} for {g.agents[a]} at {g.states[s]}")
                mv.append(m - 1)
            moves.append(tuple(mv))
        return cls(A, tuple(moves))


# ---------------------------------------------------------------------------
# Compositional labelling


class _Labeller:
    def __init__(self, g, quant):
        self.g = g
        self.full = (1 << g.n_states) - 1
        self.masks = {}
        self.quant = quant
        self.prop_masks = g._cache.get("props")
        if self.prop_masks is None:
            self.prop_masks = {}
            for s, lab in enumerate(g.labels):
                for p in lab:
                    self.prop_masks[p] = self.prop_masks.get(p, 0) | (1 << s)
            g._cache["props"] = self.prop_masks

    def val(self, f):
        m = self.masks.get(f)
        if m is not None:
            return m
        if isinstance(f, Top):
            m = self.full
        elif isinstance(f, Bot):
            m = 0
        elif isinstance(f, Prop):
            if f.name not in self.g.ap:
                raise ResolutionError(f"unknown proposition {f.name!r}")
            m = self.prop_masks.get(f.name, 0)
        elif isinstance(f, Not):
            m = self.full & ~self.val(f.arg)
        elif isinstance(f, Or):
            m = self.val(f.left) | self.val(f.right)
        elif isinstance(f, And):
            m = self.val(f.left) & self.val(f.right)
        elif isinstance(f, Implies):
            m = (self.full & ~self.val(f.left)) | self.val(f.right)
        elif isinstance(f, Coalition):
            A = self.g.coalition(f.agents)
            m = self.quant(self, f, A)
        else:
            raise TypeError(f"not a state formula: {f!r}")
        self.masks[f] = m
        return m


def literal(lab, p):
    """Reduce a single temporal operator (possibly negated) to a mask literal.

    Returns (tag, masks...) with tag in st, X, U, R, Fi, Gi, or None when
    `p` has genuine Boolean path structure.
    """
    full = lab.full
    neg = False
    while isinstance(p, PNot):
        neg = not neg
        p = p.arg
    v = lab.val
    if isinstance(p, PState):
        lit = ("st", v(p.arg))
    elif isinstance(p, Next):
        lit = ("X", v(p.arg))
    elif isinstance(p, Finally):
        lit = ("U", full, v(p.arg))
    elif isinstance(p, Globally):
        lit = ("R", 0, v(p.arg))
    elif isinstance(p, Until):
        lit = ("U", v(p.left), v(p.right))
    elif isinstance(p, Release):
        lit = ("R", v(p.left), v(p.right))
    elif isinstance(p, WeakUntil):
        a, b = v(p.left), v(p.right)
        lit = ("R", b, a | b)
    elif isinstance(p, InfOften):
        lit = ("Fi", v(p.arg))
    elif isinstance(p, AlmostAlways):
        lit = ("Gi", v(p.arg))
    else:
        return None
    if neg:
        tag = lit[0]
        c = [full & ~x for x in lit[1:]]
        tag = {"st": "st", "X": "X", "U": "R", "R": "U", "Fi": "Gi", "Gi": "Fi"}[tag]
        lit = (tag, *c)
    return lit


def resolve(lab, p):
    """Path formula with state operands replaced by frozensets (pathcheck encoding)."""
    v = lambda f: states_of(lab.val(f))
    full = states_of(lab.full)
    if isinstance(p, PState):
        return ("st", v(p.arg))
    if isinstance(p, Next):
        return ("X", v(p.arg))
    if isinstance(p, Finally):
        return ("U", full, v(p.arg))
    if isinstance(p, Globally):
        return ("R", frozenset(), v(p.arg))
    if isinstance(p, Until):
        return ("U", v(p.left), v(p.right))
    if isinstance(p, Release):
        return ("R", v(p.left), v(p.right))
    if isinstance(p, WeakUntil):
        a, b = v(p.left), v(p.right)
        return ("R", b, a | b)
    if isinstance(p, InfOften):
        return ("Fi", v(p.arg))
    if isinstance(p, AlmostAlways):
        return ("Gi", v(p.arg))
    if isinstance(p, PNot):
        return ("not", resolve(lab, p.arg))
    if isinstance(p, POr):
        return ("or", resolve(lab, p.left), resolve(lab, p.right))
    if isinstance(p, PAnd):
        return ("and", resolve(lab, p.left), resolve(lab, p.right))
    if isinstance(p, PImplies):
        return ("or", ("not", resolve(lab, p.left)), resolve(lab, p.right))
    raise TypeError(f"not a path formula: {p!r}")


# ---------------------------------------------------------------------------
# Fixpoint engine


def _fixpoint(T, lit, full, trace=None, witness=None):
    """Evaluate a literal with Kleene iteration; optionally collect witnesses."""
    tag = lit[0]
    cp = T.cpre_mask
    if tag == "st":
        return lit[1]
    if tag == "X":
        r = cp(lit[1])
        if witness is not None:
            for s in _bits(r):
                witness[s] = T.witness(s, lit[1])
        return r
    if tag == "U":
        a, b = lit[1], lit[2]
        z = 0
        seq = [z]
        while True:
            nz = b | (a & cp(z))
            if witness is not None:
                for s in _bits(nz & ~z & ~b):
                    witness[s] = T.witness(s, z)
            if nz == z:
                break
            z = nz
            seq.append(z)
        if trace is not None:
            trace.extend(seq)
        return z
    if tag == "R":
        a, b = lit[1], lit[2]
        z = full
        seq = [z]
        while True:
            nz = b & (a | cp(z))
            if nz == z:
                break
            z = nz
            seq.append(z)
        if trace is not None:
            trace.extend(seq)
        if witness is not None:
            for s in _bits(z & ~a):
                witness[s] = T.witness(s, z)
        return z
    if tag == "Fi":
        p = lit[1]
        y = full
        outer = [y]
        while True:
            x = 0
            target = p & cp(y)
            while True:
                nx = cp(x) | target
                if nx == x:
                    break
                x = nx
            if x == y:
                break
            y = x
            outer.append(y)
        if trace is not None:
            trace.extend(outer)
        if witness is not None:
            target = p & cp(y)
            for s in _bits(target):
                witness[s] = T.witness(s, y)
            x = 0
            while True:
                nx = cp(x) | target
                for s in _bits(nx & ~x & ~target):
                    witness[s] = T.witness(s, x)
                if nx == x:
                    break
                x = nx
        return y
    if tag == "Gi":
        p = lit[1]
        y = 0
        outer = [y]
        while True:
            x = full
            guard = cp(y)
            while True:
                nx = cp(x) & (p | guard)
                if nx == x:
                    break
                x = nx
            if witness is not None:
                for s in _bits(x & ~y):
                    witness[s] = T.witness(s, x) if (p >> s) & 1 else T.witness(s, y)
            if x == y:
                break
            y = x
            outer.append(y)
        if trace is not None:
            trace.extend(outer)
        return y
    raise ValueError(f"unknown literal {lit!r}")


def _bits(m):
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


def _fixpoint_quant(iterations):
    def quant(lab, f, A):
        lit = literal(lab, f.path)
        if lit is None:
            raise DialectError(
                f"{to_str(f)} has a Boolean path formula; use check_atlplus")
        T = CpreTable.get(lab.g, A)
        trace = [] if iterations is not None else None
        r = _fixpoint(T, lit, lab.full, trace)
        if iterations is not None:
            iterations[f] = [states_of(x) for x in trace]
        return r
    return quant


def check(g, formula, trace=False):
    """Label every state subformula with its satisfaction set (fixpoint engine).

    With `trace=True` the iterates of each fixpoint are kept in
    `result.iterations`.
    """
    its = {} if trace else None
    lab = _Labeller(g, _fixpoint_quant(its))
    lab.val(formula)
    return LabelingResult(g, formula, lab.masks, its)


# ---------------------------------------------------------------------------
# Strategy enumeration


class _Counter:
    def __init__(self, budget):
        self.budget = budget
        self.n = 0

    def tick(self):
        self.n += 1
        if self.n > self.budget:
            raise BudgetExceeded("strategy enumeration", self.budget)


def _options(g, A):
    """Per state: list of (outcome frozenset, least move) for the minimal outcomes."""
    key = ("opts", A)
    r = g._cache.get(key)
    if r is not None:
        return r
    r = []
    for s in range(g.n_states):
        first = {}
        for mv, out in coalition_outcomes(g, s, A):
            first.setdefault(out, mv)
        outs = sorted(first, key=lambda o: (len(o), sorted(o)))
        keep = []
        for o in outs:
            if not any(k <= o for k, _ in keep):
                keep.append((o, first[o]))
        r.append(keep)
    g._cache[key] = r
    return r


def _succ_all(g):
    key = ("succ",)
    r = g._cache.get(key)
    if r is None:
        r = [next_states(g, s) for s in range(g.n_states)]
        g._cache[key] = r
    return r


def _search_reach(g, opts, start, good, relevant, acyclic, counter):
    """Backtracking over memoryless strategies for until/release objectives.

    States in `good` end a path successfully, states in `relevant` must be
    continued and any other state is a failure.  For until objectives the
    assigned part must also be acyclic.  A partial assignment that already
    reaches a failure (or a cycle) stays losing under every extension, so
    such branches are cut.
    """
    assign = {}

    def status():
        # returns ("lose", None), ("win", None) or ("open", state)
        seen = set()
        frontier = []
        stack = [start]
        seen.add(start)
        order = []
        while stack:
            u = stack.pop()
            if u in good:
                continue
            if u not in relevant:
                return "lose", None
            if u not in assign:
                frontier.append(u)
                continue
            order.append(u)
            for t in assign[u][0]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        if acyclic and _has_cycle(order, assign, good):
            return "lose", None
        if frontier:
            return "open", min(frontier)
        return "win", None

    def rec():
        counter.tick()
        st, u = status()
        if st != "open":
            return st == "win"
        for o in opts[u]:
            assign[u] = o
            if rec():
                return True
            del assign[u]
        return False

    if start in good:
        return {}
    if start not in relevant:
        return None
    return dict(assign) if rec() else None


def _has_cycle(nodes, assign, good):
    colour = {}
    for root in nodes:
        if root in colour:
            continue
        stack = [(root, iter(assign[root][0]))]
        colour[root] = 1
        while stack:
            v, it = stack[-1]
            for w in it:
                if w in good or w not in assign:
                    continue
                c = colour.get(w)
                if c == 1:
                    return True
                if c is None:
                    colour[w] = 1
                    stack.append((w, iter(assign[w][0])))
                    break
            else:
                colour[v] = 2
                stack.pop()
    return False


def _search_general(g, opts, start, neg_dnf, counter):
    """Enumerate assignments over the reachable states and check each leaf."""
    assign = {}
    n = g.n_states

    def frontier():
        seen = {start}
        stack = [start]
        out = []
        while stack:
            u = stack.pop()
            if u not in assign:
                out.append(u)
                continue
            for t in assign[u][0]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return min(out) if out else None

    def rec():
        counter.tick()
        u = frontier()
        if u is None:
            succ = [assign[s][0] if s in assign else () for s in range(n)]
            return universal_compiled(succ, start, neg_dnf)
        for o in opts[u]:
            assign[u] = o
            if rec():
                return True
            del assign[u]
        return False

    return dict(assign) if rec() else None


def _strategy_from(g, A, assign):
    moves = []
    zero = tuple(0 for _ in A)
    for s in range(g.n_states):
        moves.append(assign[s][1] if s in assign else zero)
    return MemorylessStrategy(A, tuple(moves))


def _enumerate(g, A, lit_sets, start, counter):
    """Winning partial assignment from `start` for a resolved path, or None."""
    opts = _options(g, A)
    n = g.n_states
    tag = lit_sets[0]
    if tag == "st":
        return {} if start in lit_sets[1] else None
    if tag == "X":
        for o in opts[start]:
            counter.tick()
            if o[0] <= lit_sets[1]:
                return {start: o}
        return None
    if tag == "U":
        a, b = lit_sets[1], lit_sets[2]
        return _search_reach(g, opts, start, b, a - b, True, counter)
    if tag == "R":
        a, b = lit_sets[1], lit_sets[2]
        return _search_reach(g, opts, start, a & b, b - a, False, counter)
    return _search_general(g, opts, start, compile_negation(lit_sets, n), counter)


def _oracle_quant(counter, verify, witnesses=None):
    def quant(lab, f, A):
        g = lab.g
        n = g.n_states
        res = nnf(resolve(lab, f.path), n)
        win = set()
        reach_tags = res[0] in ("U", "R")
        for s in range(n):
            if s in win:
                continue
            assign = _enumerate(g, A, res, s, counter)
            if assign is None:
                continue
            win.add(s)
            if verify:
                F = _strategy_from(g, A, assign)
                if not verify_strategy(g, s, F, f, _labeller=lab):
                    raise AssertionError(
                        f"enumerated strategy fails verification at {g.states[s]}")
            if witnesses is not None:
                witnesses[(f, s)] = _strategy_from(g, A, assign)
            if reach_tags:
                # states met before the goal are won by the same strategy
                win.update(assign)
        return mask_of(win)
    return quant


def oracle_check(g, formula, budget=None, verify=True):
    """Labelling by explicit enumeration of memoryless coalition strategies."""
    counter = _Counter(default_budget() if budget is None else budget)
    lab = _Labeller(g, _oracle_quant(counter, verify))
    lab.val(formula)
    return LabelingResult(g, formula, lab.masks)


def _atlplus_quant(counter, witnesses=None):
    fix = _fixpoint_quant(None)

    def quant(lab, f, A):
        if literal(lab, f.path) is not None:
            return fix(lab, f, A)
        g = lab.g
        n = g.n_states
        res = resolve(lab, f.path)
        neg_dnf = compile_negation(res, n)
        opts = _options(g, A)
        win = 0
        for s in range(n):
            assign = _search_general(g, opts, s, neg_dnf, counter)
            if assign is not None:
                win |= 1 << s
                if witnesses is not None:
                    witnesses[(f, s)] = _strategy_from(g, A, assign)
        return win
    return quant


def check_atlplus(g, formula, budget=None):
    """Label an ATL+ formula.

    Quantifiers over a single temporal operator use the fixpoint engine.
    Boolean path formulas are decided by enumerating memoryless strategies
    over the states reachable from each start state; more than `budget`
    search steps raises BudgetExceeded.
    """
    counter = _Counter(default_budget() if budget is None else budget)
    lab = _Labeller(g, _atlplus_quant(counter))
    lab.val(formula)
    return LabelingResult(g, formula, lab.masks)


# ---------------------------------------------------------------------------
# Strategies


def _operand_labeller(g, budget=None):
    counter = _Counter(default_budget() if budget is None else budget)
    return _Labeller(g, _atlplus_quant(counter))


def outcome_graph(g, F):
    """Successor sets when coalition F.coalition follows strategy F."""
    return [outcome_map(g, s, F.coalition)[F.moves[s]] for s in range(g.n_states)]


def verify_strategy(g, s, F, path, _labeller=None):
    """Does every outcome of strategy F from state s satisfy `path`?

    `path` may be a path formula or a quantified formula, in which case its
    path is used.
    """
    s = g.state_id(s)
    if isinstance(path, Coalition):
        path = path.path
    if len(F.moves) != g.n_states:
        raise StrategyError("strategy must give a move for every state")
    for t, mv in enumerate(F.moves):
        mc = g.move_counts(t)
        if len(mv) != len(F.coalition):
            raise StrategyError(f"move at {g.states[t]} has wrong length")
        for a, m in zip(F.coalition, mv):
            if not 0 <= m < mc[a]:
                raise StrategyError(
                    f"move {m + 1} of {g.agents[a]} is not available at {g.states[t]}")
    lab = _labeller or _operand_labeller(g)
    res = resolve(lab, path)
    succ = outcome_graph(g, F)
    return universal_compiled(succ, s, compile_negation(res, g.n_states))


def synthesize(g, s, formula, budget=None):
    """A memoryless strategy witnessing `formula` at state s, or None.

    `formula` must be a quantified formula ``<<A>> path``.  Single temporal
    operators use the fixpoint witnesses: the move recorded when a state
    entered an until/Finf iterate, the move keeping a release/Ginf fixpoint.
    Other states play the lexicographically least move.
    """
    s = g.state_id(s)
    if not isinstance(formula, Coalition):
        raise ValueError("synthesis needs a formula of the form <<A>> path")
    A = g.coalition(formula.agents)
    lab = _operand_labeller(g, budget)
    lit = literal(lab, formula.path)
    zero = tuple(0 for _ in A)
    if lit is None:
        res = resolve(lab, formula.path)
        counter = _Counter(default_budget() if budget is None else budget)
        assign = _search_general(g, _options(g, A), s, compile_negation(res, g.n_states), counter)
        return None if assign is None else _strategy_from(g, A, assign)
    T = CpreTable.get(g, A)
    wit = {}
    r = _fixpoint(T, lit, lab.full, witness=wit)
    if not (r >> s) & 1:
        return None
    moves = tuple(wit.get(t, zero) for t in range(g.n_states))
    return MemorylessStrategy(A, moves)

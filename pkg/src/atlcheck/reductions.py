"""Reductions from satisfiability problems to model checking, with
brute-force oracles for the expected answers.

Boolean agents encode true as their first move (move 1 in the text format,
index 0 internally) and false as their second move.
"""

from dataclasses import dataclass, field
from itertools import product

from .errors import AtlError, BudgetExceeded
from .formula import (
    TRUE, And, Coalition, Finally, Globally, Implies, Next, Not, Or, PAnd,
    PImplies, POr, Prop, Release, Until, disj,
)
from .gamestruct import (
    TRUE as CTRUE, Atom, Ats, CAnd, CNot, COr, CgsExplicit, CgsImplicit,
    require_valid,
)

T, F = 0, 1  # move indices of a Boolean agent


class InstanceError(AtlError):
    pass


# ---------------------------------------------------------------------------
# Instances


@dataclass(frozen=True)
class CnfInstance:
    """CNF over named variables; a literal is (variable, polarity)."""

    variables: tuple
    clauses: tuple

    def satisfiable(self):
        for vals in product((True, False), repeat=len(self.variables)):
            env = dict(zip(self.variables, vals))
            if eval_cnf(self.clauses, env):
                return True
        return False

    def to_json(self):
        return {"variables": list(self.variables),
                "clauses": [[[v, p] for v, p in c] for c in self.clauses]}


@dataclass(frozen=True)
class QbfInstance:
    """Exists xs, forall ys, CNF body."""

    xs: tuple
    ys: tuple
    clauses: tuple

    def exists_forall(self):
        return any(all(eval_cnf(self.clauses, {**dict(zip(self.xs, xv)), **dict(zip(self.ys, yv))})
                       for yv in product((True, False), repeat=len(self.ys)))
                   for xv in product((True, False), repeat=len(self.xs)))

    def forall_exists(self):
        return all(any(eval_cnf(self.clauses, {**dict(zip(self.xs, xv)), **dict(zip(self.ys, yv))})
                       for yv in product((True, False), repeat=len(self.ys)))
                   for xv in product((True, False), repeat=len(self.xs)))

    def to_json(self):
        return {"xs": list(self.xs), "ys": list(self.ys),
                "clauses": [[[v, p] for v, p in c] for c in self.clauses]}


@dataclass(frozen=True)
class Level:
    xs: tuple
    ys: tuple
    clauses: tuple


@dataclass(frozen=True)
class SnsatInstance:
    """Levels r = 1..p; level r defines z_r from its blocks and z_1..z_{r-1}.

    Variables named ``z1``, ``z2``, ... refer to earlier levels.  Instances
    with empty Y blocks are plain SNSAT instances.
    """

    levels: tuple

    def __post_init__(self):
        seen = set()
        for r, lv in enumerate(self.levels, 1):
            allowed = set(lv.xs) | set(lv.ys) | {f"z{t}" for t in range(1, r)}
            for v in list(lv.xs) + list(lv.ys):
                if v in seen or v.startswith("z"):
                    raise InstanceError(f"variable {v} is declared twice or clashes with z names")
                seen.add(v)
            for c in lv.clauses:
                for v, _ in c:
                    if v not in allowed:
                        raise InstanceError(f"level {r} uses variable {v} it may not reference")

    @property
    def p(self):
        return len(self.levels)

    def to_json(self):
        return {"levels": [{"xs": list(l.xs), "ys": list(l.ys),
                            "clauses": [[[v, p] for v, p in c] for c in l.clauses]}
                           for l in self.levels]}


@dataclass(frozen=True)
class Valuation:
    z: dict
    x: dict


@dataclass(frozen=True)
class ReductionInstance:
    structure: object
    formula: object
    query: int
    expected: bool
    provenance: dict = field(default_factory=dict)


def eval_cnf(clauses, env):
    return all(any(env[v] == p for v, p in c) for c in clauses)


def eval_snsat(inst, budget=20):
    """z_r := exists X_r (forall Y_r) phi_r, level by level.

    The witness for X_r is the first satisfying assignment in the order
    where True is tried before False; levels with z_r false get all-False.
    """
    total = sum(len(l.xs) + len(l.ys) for l in inst.levels)
    if total > budget:
        raise BudgetExceeded("brute-force SNSAT evaluation (variables)", budget)
    z = {}
    x = {}
    for r, lv in enumerate(inst.levels, 1):
        found = None
        for xv in product((True, False), repeat=len(lv.xs)):
            env = dict(z)
            env.update(zip(lv.xs, xv))
            ok = True
            for yv in product((True, False), repeat=len(lv.ys)):
                env.update(zip(lv.ys, yv))
                if not eval_cnf(lv.clauses, env):
                    ok = False
                    break
            if ok:
                found = dict(zip(lv.xs, xv))
                break
        z[f"z{r}"] = found is not None
        x.update(found if found is not None else {v: False for v in lv.xs})
    return Valuation(z, x)


# ---------------------------------------------------------------------------
# Random instances


def _random_clause(rng, pool, width):
    if len(pool) >= width:
        vs = rng.sample(pool, width)
        return tuple((v, rng.random() < 0.5) for v in vs)
    v = rng.choice(pool)
    pol = rng.random() < 0.5
    lits = [(v, pol)]
    while len(lits) < width:
        w = rng.choice(pool)
        if w == v:
            lits.append((v, pol))
        else:
            lits.append((w, rng.random() < 0.5))
    # never the same variable with both polarities
    pols = {}
    out = []
    for w, p in lits:
        p = pols.setdefault(w, p)
        out.append((w, p))
    return tuple(out)


def random_cnf(rng, n_vars, n_clauses, width=3):
    vs = tuple(f"x{i}" for i in range(1, n_vars + 1))
    return CnfInstance(vs, tuple(_random_clause(rng, list(vs), width) for _ in range(n_clauses)))


def random_qbf(rng, n_x, n_y, n_clauses, width=3):
    xs = tuple(f"x{i}" for i in range(1, n_x + 1))
    ys = tuple(f"y{i}" for i in range(1, n_y + 1))
    return QbfInstance(xs, ys, tuple(_random_clause(rng, list(xs + ys), width)
                                     for _ in range(n_clauses)))


def random_snsat(rng, p, n_x, n_y, n_clauses, width=3):
    levels = []
    for r in range(1, p + 1):
        xs = tuple(f"x{r}_{j}" for j in range(1, n_x + 1))
        ys = tuple(f"y{r}_{j}" for j in range(1, n_y + 1))
        pool = list(xs + ys) + [f"z{t}" for t in range(1, r)]
        if not pool:
            raise InstanceError("level 1 needs at least one variable")
        levels.append(Level(xs, ys, tuple(_random_clause(rng, pool, width)
                                          for _ in range(n_clauses))))
    return SnsatInstance(tuple(levels))


def _check_clauses(clauses, width=None):
    for c in clauses:
        if width is not None and len(c) != width:
            raise InstanceError(f"clause {c} does not have {width} literals")
        pols = {}
        for v, p in c:
            if pols.setdefault(v, p) != p:
                raise InstanceError(f"clause {c} contains a variable and its negation")


def _is_s(name):
    return name[0] == "s" and name[1:].isdigit()


def _ex(agents, f):
    """EX as quantification by all agents."""
    return Coalition(tuple(agents), Next(f))


# ---------------------------------------------------------------------------
# 3SAT to ATS


def _clause_bits(k):
    return ((k >> 2) & 1, (k >> 1) & 1, k & 1)


def _clause_states(clause, block, value_of):
    """Clause states of one clause block not made true by a choice.

    `value_of(v)` is the value chosen for variable v, or None if the choice
    does not concern v.  State k stands for the clause whose l-th literal is
    positive iff bit l of k is 1.
    """
    out = set()
    for k in range(8):
        bits = _clause_bits(k)
        ok = True
        for l, (v, _) in enumerate(clause):
            val = value_of(v)
            if val is None:
                continue
            if (val and bits[l] == 1) or (not val and bits[l] == 0):
                ok = False
                break
        if ok:
            out.add(block[k])
    return out


def gen_3sat_ats(inst):
    """ATS with a central state q and eight states per clause.

    Formula <<A1..Am>> X alpha holds at q iff the CNF is satisfiable.
    """
    _check_clauses(inst.clauses, 3)
    n = len(inst.clauses)
    m = len(inst.variables)
    states = ["q"] + [f"q{j}_{k}" for j in range(1, n + 1) for k in range(8)]
    idx = {s: i for i, s in enumerate(states)}
    blocks = [[idx[f"q{j}_{k}"] for k in range(8)] for j in range(1, n + 1)]
    labels = [frozenset()]
    for j, c in enumerate(inst.clauses):
        pattern = tuple(1 if p else 0 for _, p in c)
        for k in range(8):
            labels.append(frozenset() if _clause_bits(k) == pattern else frozenset({"alpha"}))
    agents = [f"A{i}" for i in range(1, m + 1)] + ["D"]
    q_choices = []
    for v in inst.variables:
        sets = []
        for val in (True, False):
            s = set()
            for c, b in zip(inst.clauses, blocks):
                s |= _clause_states(c, b, lambda w: val if w == v else None)
            sets.append(frozenset(s))
        q_choices.append(sets)
    q_choices.append([frozenset(b) for b in blocks])
    choices = [q_choices]
    for s in range(1, len(states)):
        choices.append([[frozenset({s})] for _ in agents])
    g = require_valid(Ats(agents, states, ("alpha",), labels, choices))
    f = Coalition(tuple(agents[:-1]), Next(Prop("alpha")))
    return ReductionInstance(g, f, 0, inst.satisfiable(),
                             {"generator": "3sat", "instance": inst.to_json()})


# ---------------------------------------------------------------------------
# SNSAT to ATS


def gen_snsat_ats(inst):
    p = inst.p
    for lv in inst.levels:
        if lv.ys:
            raise InstanceError("SNSAT levels have no universal block")
        if not lv.clauses:
            raise InstanceError("every level needs at least one clause")
        _check_clauses(lv.clauses, 3)
    states = []
    for r in range(1, p + 1):
        states += [f"q{r}", f"nq{r}", f"s{r}"]
        states += [f"q{r}_{j}_{k}" for j in range(1, len(inst.levels[r - 1].clauses) + 1)
                   for k in range(8)]
    idx = {s: i for i, s in enumerate(states)}
    n = len(states)
    everything = frozenset(range(n))
    agents = []
    owner = {}
    for r, lv in enumerate(inst.levels, 1):
        for j, v in enumerate(lv.xs, 1):
            owner[v] = f"A{r}_{j}"
            agents.append(f"A{r}_{j}")
    for r in range(1, p + 1):
        agents.append(f"C{r}")
    agents.append("D")
    labels = []
    for s in states:
        if _is_s(s):
            labels.append(frozenset({"s"}))
        else:
            labels.append(frozenset())
    for r, lv in enumerate(inst.levels, 1):
        for j, c in enumerate(lv.clauses, 1):
            pattern = tuple(1 if pol else 0 for _, pol in c)
            for k in range(8):
                if _clause_bits(k) != pattern:
                    labels[idx[f"q{r}_{j}_{k}"]] = frozenset({"alpha"})

    choices = [None] * n
    for r, lv in enumerate(inst.levels, 1):
        blocks = [[idx[f"q{r}_{j}_{k}"] for k in range(8)] for j in range(1, len(lv.clauses) + 1)]
        lower = {idx[f"q{t}"] for t in range(1, r)} | {idx[f"nq{t}"] for t in range(1, r)}

        def clause_part(var, val):
            s = set()
            for c, b in zip(lv.clauses, blocks):
                s |= _clause_states(c, b, lambda w: val if w == var else None)
            return s

        per_agent = []
        for a in agents:
            if a == "D":
                sets = [frozenset({idx[f"q{t}"], idx[f"nq{t}"]}) for t in range(1, r)]
                sets += [frozenset(b) for b in blocks]
            elif a.startswith("A"):
                var = next(v for v, o in owner.items() if o == a)
                if var in lv.xs:
                    sets = [frozenset(clause_part(var, True) | lower),
                            frozenset(clause_part(var, False) | lower)]
                else:
                    sets = [everything]
            else:
                t = int(a[1:])
                if t < r:
                    others = {idx[f"q{u}"] for u in range(1, r) if u != t} | \
                             {idx[f"nq{u}"] for u in range(1, r) if u != t}
                    z = f"z{t}"
                    sets = [frozenset(clause_part(z, True) | others | {idx[f"q{t}"]}),
                            frozenset(clause_part(z, False) | others | {idx[f"nq{t}"]})]
                else:
                    sets = [everything]
            per_agent.append(sets)
        choices[idx[f"q{r}"]] = per_agent
        choices[idx[f"nq{r}"]] = [[frozenset({idx[f"s{r}"]})] for _ in agents]
        choices[idx[f"s{r}"]] = [[frozenset({idx[f"q{r}"]})] for _ in agents]
        for b in blocks:
            for q in b:
                choices[q] = [[frozenset({q})] for _ in agents]
    g = require_valid(Ats(agents, states, ("alpha", "s"), labels, choices))
    coal = tuple(a for a in agents if a != "D")
    psi = snsat_formula(agents, coal, Prop("alpha"), p)
    v = eval_snsat(inst)
    return ReductionInstance(g, psi, idx[f"q{p}"], v.z[f"z{p}"],
                             {"generator": "snsat", "instance": inst.to_json()})


def snsat_formula(agents, coal, goal, level):
    psi = TRUE
    for _ in range(level):
        psi = Coalition(coal, Until(Not(Prop("s")),
                                    disj([goal, _ex(agents, And(Prop("s"), _ex(agents, Not(psi))))])))
    return psi


# ---------------------------------------------------------------------------
# Exists-forall QBF to implicit CGS


def _cnf_condition(clauses, atom_of):
    conj_ = []
    for c in clauses:
        lits = []
        for v, pol in c:
            a = atom_of(v)
            lits.append(a if pol else CNot(a))
        conj_.append(lits[0] if len(lits) == 1 else COr(tuple(lits)))
    if not conj_:
        return CTRUE
    return conj_[0] if len(conj_) == 1 else CAnd(tuple(conj_))


def gen_e2sat_cgsi(inst, form="sigma"):
    """Three-state implicit CGS for exists-X forall-Y phi.

    With form="sigma" the formula is <<A>> X s_top and the expected answer
    is exists-forall; with form="pi" it is !<<A>> X !s_top and the expected
    answer is forall-exists.
    """
    _check_clauses(inst.clauses)
    xa = [f"A{j}" for j in range(1, len(inst.xs) + 1)]
    yb = [f"B{j}" for j in range(1, len(inst.ys) + 1)]
    agents = xa + yb
    index = {v: i for i, v in enumerate(list(inst.xs) + list(inst.ys))}
    cond = _cnf_condition(inst.clauses, lambda v: Atom(index[v], T))
    states = ["q1", "qtop", "qbot"]
    labels = [frozenset(), frozenset({"s_top"}), frozenset({"s_bot"})]
    moves = [tuple(2 for _ in agents), tuple(1 for _ in agents), tuple(1 for _ in agents)]
    rules = [[(cond, 1), (CTRUE, 2)], [(CTRUE, 1)], [(CTRUE, 2)]]
    g = require_valid(CgsImplicit(agents, states, ("s_top", "s_bot"), labels, moves, rules))
    A = tuple(xa)
    if form == "sigma":
        f = Coalition(A, Next(Prop("s_top")))
        expected = inst.exists_forall()
    elif form == "pi":
        f = Not(Coalition(A, Next(Not(Prop("s_top")))))
        expected = inst.forall_exists()
    else:
        raise ValueError("form must be 'sigma' or 'pi'")
    return ReductionInstance(g, f, 0, expected,
                             {"generator": "qbf2", "form": form, "instance": inst.to_json(),
                              "cpre": {"coalition": list(A), "target": ["qtop"]}})


# ---------------------------------------------------------------------------
# SNSAT2 to implicit CGS


def gen_snsat2_cgsi(inst):
    """Implicit CGS with states q_i, nq_i, s_i, qtop, qbot.

    At q_i agent D picks 0 to check phi_i (guards leading to qtop, then
    qbot) or k < i to challenge C_k (to q_k or nq_k); other moves of D fall
    through to the final true guard and reach qtop.
    """
    m = inst.p
    for lv in inst.levels:
        _check_clauses(lv.clauses)
    agents = []
    var_agent = {}
    for i, lv in enumerate(inst.levels, 1):
        for j, v in enumerate(lv.xs, 1):
            var_agent[v] = len(agents)
            agents.append(f"A{i}_{j}")
    for i, lv in enumerate(inst.levels, 1):
        for j, v in enumerate(lv.ys, 1):
            var_agent[v] = len(agents)
            agents.append(f"B{i}_{j}")
    for i in range(1, m + 1):
        var_agent[f"z{i}"] = len(agents)
        agents.append(f"C{i}")
    D = len(agents)
    agents.append("D")
    states = []
    for i in range(1, m + 1):
        states += [f"q{i}", f"nq{i}", f"s{i}"]
    states += ["qtop", "qbot"]
    idx = {s: k for k, s in enumerate(states)}
    labels = [frozenset({"s"}) if _is_s(s) else frozenset() for s in states]
    labels[idx["qtop"]] = frozenset({"s_top"})
    labels[idx["qbot"]] = frozenset({"s_bot"})
    mv = tuple([2] * (len(agents) - 1) + [m])
    moves = [mv for _ in states]
    rules = [None] * len(states)
    for i, lv in enumerate(inst.levels, 1):
        phi = _cnf_condition(lv.clauses, lambda v: Atom(var_agent[v], T))
        d0 = Atom(D, 0)
        r = [(CAnd((d0, phi)) if phi != CTRUE else d0, idx["qtop"]), (d0, idx["qbot"])]
        for k in range(1, i):
            r.append((CAnd((Atom(D, k), Atom(var_agent[f"z{k}"], T))), idx[f"q{k}"]))
        for k in range(1, i):
            r.append((CAnd((Atom(D, k), Atom(var_agent[f"z{k}"], F))), idx[f"nq{k}"]))
        r.append((CTRUE, idx["qtop"]))
        rules[idx[f"q{i}"]] = r
        rules[idx[f"nq{i}"]] = [(CTRUE, idx[f"s{i}"])]
        rules[idx[f"s{i}"]] = [(CTRUE, idx[f"q{i}"])]
    rules[idx["qtop"]] = [(CTRUE, idx["qtop"])]
    rules[idx["qbot"]] = [(CTRUE, idx["qbot"])]
    g = require_valid(CgsImplicit(agents, states, ("s", "s_top", "s_bot"), labels, moves, rules))
    coal = tuple(a for a in agents if a.startswith("A") or a.startswith("C"))
    psi = snsat_formula(agents, coal, Prop("s_top"), m)
    v = eval_snsat(inst)
    return ReductionInstance(g, psi, idx[f"q{m}"], v.z[f"z{m}"],
                             {"generator": "snsat2", "instance": inst.to_json(),
                              "valuation": {**v.z, **v.x}})


def snsat2_formula(g, level):
    """psi_level for a structure built by gen_snsat2_cgsi."""
    coal = tuple(a for a in g.agents if a.startswith("A") or a.startswith("C"))
    return snsat_formula(g.agents, coal, Prop("s_top"), level)


# ---------------------------------------------------------------------------
# SNSAT2 to ATL+ on a turn-based CGS


def gen_snsat2_atlplus(inst):
    """Turn-based explicit CGS with players A and B and an ATL+ formula family.

    A run from z_r walks down through z_{r-1} or nz_{r-1}, ..., z_1 or nz_1,
    then through one state of every x pair (chosen by A) and of every y pair
    (chosen by B); the last pair loops.  From nz_u player A may instead go
    to s_u and back to z_u.
    """
    p = inst.p
    for lv in inst.levels:
        _check_clauses(lv.clauses)
    chain = []
    for r, lv in enumerate(inst.levels, 1):
        for v in lv.xs:
            chain.append((v, "A"))
    for r, lv in enumerate(inst.levels, 1):
        for v in lv.ys:
            chain.append((v, "B"))
    states = []
    for r in range(1, p + 1):
        states += [f"z{r}", f"nz{r}", f"s{r}"]
    for v, _ in chain:
        states += [v, f"n{v}"]
    if not chain:
        states.append("end")
    elif chain[0][1] == "B":
        states.append("start")
    idx = {s: k for k, s in enumerate(states)}
    labels = []
    for s in states:
        if _is_s(s):
            labels.append(frozenset({"s"}))
        elif s.startswith("nz"):
            labels.append(frozenset({"zbar", s}))
        elif s in ("end", "start"):
            labels.append(frozenset())
        else:
            labels.append(frozenset({s}))
    ap = tuple(sorted(set().union(*labels)))
    succ = {}
    owner = {}
    if not chain:
        first = [idx["end"]]
        succ[idx["end"]] = [idx["end"]]
        owner[idx["end"]] = "A"
    else:
        first = [idx[chain[0][0]], idx["n" + chain[0][0]]]
        if chain[0][1] == "B":
            # z_1 and nz_1 belong to A, so B picks y_1 one step later
            succ[idx["start"]] = first
            owner[idx["start"]] = "B"
            first = [idx["start"]]
    for r in range(1, p + 1):
        down = [idx[f"z{r - 1}"], idx[f"nz{r - 1}"]] if r > 1 else first
        succ[idx[f"z{r}"]] = down
        succ[idx[f"nz{r}"]] = down + [idx[f"s{r}"]]
        succ[idx[f"s{r}"]] = [idx[f"z{r}"]]
        for s in ("z", "nz", "s"):
            owner[idx[f"{s}{r}"]] = "A"
    # a chain state belongs to the player who chooses the next literal
    for k, (v, _) in enumerate(chain):
        if k + 1 < len(chain):
            nxt = [idx[chain[k + 1][0]], idx["n" + chain[k + 1][0]]]
            who = chain[k + 1][1]
        else:
            nxt, who = None, "B"
        for s in (idx[v], idx["n" + v]):
            succ[s] = nxt if nxt is not None else [s]
            owner[s] = who
    agents = ("A", "B")
    moves = []
    table = []
    for s in range(len(states)):
        out = succ[s]
        if owner[s] == "A":
            moves.append((len(out), 1))
            table.append({(i, 0): t for i, t in enumerate(out)})
        else:
            moves.append((1, len(out)))
            table.append({(0, i): t for i, t in enumerate(out)})
    g = require_valid(CgsExplicit(agents, states, ap, labels, moves, table))
    psi = atlplus_formula(inst, p)
    v = eval_snsat(inst)
    return ReductionInstance(g, psi, idx[f"z{p}"], v.z[f"z{p}"],
                             {"generator": "snsat2-atlplus", "instance": inst.to_json()})


def _lit_prop(v, pol):
    return Prop(v if pol else f"n{v}")


def atlplus_formula(inst, level):
    agents = ("A", "B")
    psi = TRUE
    for _ in range(level):
        parts = [Globally(Not(Prop("s"))),
                 Globally(Implies(Prop("zbar"),
                                  _ex(agents, And(Prop("s"), _ex(agents, Not(psi))))))]
        for w, lv in enumerate(inst.levels, 1):
            if not lv.clauses:
                continue
            body = None
            for c in lv.clauses:
                d = None
                for v, pol in c:
                    lit = Finally(_lit_prop(v, pol))
                    d = lit if d is None else POr(d, lit)
                body = d if body is None else PAnd(body, d)
            parts.append(PImplies(Finally(Prop(f"z{w}")), body))
        path = parts[0]
        for q in parts[1:]:
            path = PAnd(path, q)
        psi = Coalition(("A",), path)
    return psi


# ---------------------------------------------------------------------------
# Expressiveness family


def gen_expressiveness_family(i):
    """Two-player CGS with states s_j, s'_j, a_j, b_j (j <= i) and s_0.

    s_j and s'_j carry label a and differ only in a fourth move of A1 at
    s'_j, which leads to s'_j, b_j or a_j.  Returns (structure, s_i, s'_i).
    """
    if i < 1:
        raise ValueError("i must be positive")
    states = ["s0"]
    for j in range(1, i + 1):
        states += [f"s{j}", f"t{j}", f"a{j}", f"b{j}"]
    idx = {s: k for k, s in enumerate(states)}
    labels = [frozenset()]
    for j in range(1, i + 1):
        labels += [frozenset({"a"}), frozenset({"a"}), frozenset({"a"}), frozenset({"b"})]
    moves = [(1, 1)] * len(states)
    table = [None] * len(states)
    table[0] = {(0, 0): 0}
    for j in range(1, i + 1):
        s, t, a, b, prev = idx[f"s{j}"], idx[f"t{j}"], idx[f"a{j}"], idx[f"b{j}"], idx[f"s{j - 1}"]
        rows = [[b, prev, prev], [prev, a, a], [s, prev, prev]]
        table[s] = {(r, c): rows[r][c] for r in range(3) for c in range(3)}
        rows_t = [[b, prev, prev], [prev, a, a], [t, prev, prev], [t, b, a]]
        table[t] = {(r, c): rows_t[r][c] for r in range(4) for c in range(3)}
        table[a] = {(0, 0): a}
        table[b] = {(0, 0): prev}
        moves[s] = (3, 3)
        moves[t] = (4, 3)
    g = require_valid(CgsExplicit(("A1", "A2"), states, ("a", "b"), labels, moves, table))
    return g, idx[f"s{i}"], idx[f"t{i}"]


def release_formula():
    """<<A1>> (b R (a | b)), i.e. <<A1>> a W b."""
    return Coalition(("A1",), Release(Prop("b"), Or(Prop("a"), Prop("b"))))

"""Path properties over a finite successor graph.

Path formulas here are already resolved: state subformulas are replaced by
the sets of states satisfying them.  The encoding uses tagged tuples::

    ("st", S)        the first state is in S
    ("X", S)         the second state is in S
    ("U", S1, S2)    S1 until S2
    ("R", S1, S2)    S1 releases S2
    ("Fi", S)        infinitely often S
    ("Gi", S)        almost always S
    ("not", p)  ("and", p, q)  ("or", p, q)

A graph is a sequence `succ` with `succ[s]` the successors of state s; every
state must have at least one successor.
"""

from itertools import product


def complement(S, n):
    return frozenset(range(n)) - S


def nnf(p, n, negate=False):
    """Negation normal form; only and/or over literals remain."""
    tag = p[0]
    if tag == "not":
        return nnf(p[1], n, not negate)
    if tag in ("and", "or"):
        a, b = nnf(p[1], n, negate), nnf(p[2], n, negate)
        op = tag if not negate else ("or" if tag == "and" else "and")
        return (op, a, b)
    if not negate:
        return p
    if tag == "st":
        return ("st", complement(p[1], n))
    if tag == "X":
        return ("X", complement(p[1], n))
    if tag == "U":
        return ("R", complement(p[1], n), complement(p[2], n))
    if tag == "R":
        return ("U", complement(p[1], n), complement(p[2], n))
    if tag == "Fi":
        return ("Gi", complement(p[1], n))
    if tag == "Gi":
        return ("Fi", complement(p[1], n))
    raise ValueError(f"unknown path literal {p!r}")


def dnf(p):
    """Disjunctive normal form of an NNF formula, as a list of literal lists."""
    tag = p[0]
    if tag == "or":
        return dnf(p[1]) + dnf(p[2])
    if tag == "and":
        return [a + b for a, b in product(dnf(p[1]), dnf(p[2]))]
    return [[p]]


def count_temporal(p):
    if p[0] in ("not", "and", "or"):
        return sum(count_temporal(q) for q in p[1:])
    return 0 if p[0] == "st" else 1


def reachable(succ, start):
    seen = {start}
    stack = [start]
    while stack:
        s = stack.pop()
        for t in succ[s]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def _sccs(nodes, edges):
    """Strongly connected components (iterative Tarjan)."""
    index = {}
    low = {}
    on = set()
    stack = []
    out = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(edges[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(edges[w])))
                    advanced = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def exists_path(succ, start, literals):
    """Is there an infinite path from `start` satisfying every literal?

    Pending until/release obligations are tracked as index sets along the
    path; they are discharged as early as possible so the product is
    deterministic.  Acceptance needs a reachable cycle with no pending until,
    inside every almost-always set, and meeting every infinitely-often set.
    """
    st = None
    xs = None
    us, rs, fis, gis = [], [], [], []
    for lit in literals:
        tag = lit[0]
        if tag == "st":
            st = lit[1] if st is None else st & lit[1]
        elif tag == "X":
            xs = lit[1] if xs is None else xs & lit[1]
        elif tag == "U":
            us.append((lit[1], lit[2]))
        elif tag == "R":
            rs.append((lit[1], lit[2]))
        elif tag == "Fi":
            fis.append(lit[1])
        elif tag == "Gi":
            gis.append(lit[1])
        else:
            raise ValueError(f"not a literal: {lit!r}")
    if st is not None and start not in st:
        return False

    def step(loc, pu, pr):
        nu = []
        for i in pu:
            a, b = us[i]
            if loc in b:
                continue
            if loc not in a:
                return None
            nu.append(i)
        nr = []
        for i in pr:
            a, b = rs[i]
            if loc not in b:
                return None
            if loc in a:
                continue
            nr.append(i)
        return tuple(nu), tuple(nr)

    first = step(start, tuple(range(len(us))), tuple(range(len(rs))))
    if first is None:
        return False
    init = (start,) + first + (True,)
    edges = {}
    stack = [init]
    edges[init] = None
    while stack:
        node = stack.pop()
        loc, pu, pr, is_first = node
        out = []
        for t in succ[loc]:
            if is_first and xs is not None and t not in xs:
                continue
            nx = step(t, pu, pr)
            if nx is None:
                continue
            child = (t,) + nx + (False,)
            out.append(child)
            if child not in edges:
                edges[child] = None
                stack.append(child)
        edges[node] = out

    def good(node):
        if node[1] or node[3]:
            return False
        return all(node[0] in G for G in gis)

    sub = [v for v in edges if good(v)]
    if not sub:
        return False
    subset = set(sub)
    sub_edges = {v: [w for w in edges[v] if w in subset] for v in sub}
    for comp in _sccs(sub, sub_edges):
        if len(comp) == 1:
            v = comp[0]
            if v not in sub_edges[v]:
                continue
        locs = {v[0] for v in comp}
        if all(locs & F for F in fis):
            return True
    return False


def universal_path_check(succ, start, p, n=None):
    """Do all infinite paths from `start` satisfy path formula `p`?"""
    n = len(succ) if n is None else n
    for conj in dnf(nnf(p, n, negate=True)):
        if exists_path(succ, start, conj):
            return False
    return True


def compile_negation(p, n):
    """Precomputed DNF of the negation, for repeated checks of the same formula."""
    return dnf(nnf(p, n, negate=True))


def universal_compiled(succ, start, neg_dnf):
    return not any(exists_path(succ, start, c) for c in neg_dnf)


# ---------------------------------------------------------------------------
# Lasso enumeration, used as an independent oracle in tests


def eval_lasso(seq, k, p):
    """Evaluate `p` at position 0 of the word seq[:k] (seq[k:])^omega."""
    n = len(seq)

    def nxt(i):
        return i + 1 if i + 1 < n else k

    def ev(q, i):
        tag = q[0]
        if tag == "not":
            return not ev(q[1], i)
        if tag == "and":
            return ev(q[1], i) and ev(q[2], i)
        if tag == "or":
            return ev(q[1], i) or ev(q[2], i)
        if tag == "st":
            return seq[i] in q[1]
        if tag == "X":
            return seq[nxt(i)] in q[1]
        if tag == "U":
            seen = set()
            j = i
            while j not in seen:
                if seq[j] in q[2]:
                    return True
                if seq[j] not in q[1]:
                    return False
                seen.add(j)
                j = nxt(j)
            return False
        if tag == "R":
            # S1 R S2 holds iff not (not S1 U not S2)
            seen = set()
            j = i
            while j not in seen:
                if seq[j] not in q[2]:
                    return False
                if seq[j] in q[1]:
                    return True
                seen.add(j)
                j = nxt(j)
            return True
        if tag == "Fi":
            return any(seq[j] in q[1] for j in range(k, n))
        if tag == "Gi":
            return all(seq[j] in q[1] for j in range(k, n))
        raise ValueError(f"unknown path literal {q!r}")

    return ev(p, 0)


def lassos(succ, start, max_prefix, max_loop):
    """Yield (seq, k) for every lasso within the bounds."""
    path = [start]

    def rec():
        last = path[-1]
        n = len(path)
        for k in range(max(0, n - max_loop), min(n - 1, max_prefix) + 1):
            if path[k] in succ[last]:
                yield list(path), k
        if n < max_prefix + max_loop:
            for t in sorted(succ[last]):
                path.append(t)
                yield from rec()
                path.pop()

    yield from rec()


def lasso_check(succ, start, p):
    """Universal check by brute-force lasso enumeration.

    Prefixes are bounded by |reach| * (t + 1) and loops by |reach| times the
    number of infinitely-often goals (at least 1), where t counts the
    temporal literals of `p`.
    """
    reach = reachable(succ, start)
    t = count_temporal(p)
    fi = max(1, _count_tag(p, ("Fi", "Gi")))
    for seq, k in lassos(succ, start, len(reach) * (t + 1), len(reach) * fi):
        if not eval_lasso(seq, k, p):
            return False
    return True


def _count_tag(p, tags):
    if p[0] in ("not", "and", "or"):
        return sum(_count_tag(q, tags) for q in p[1:])
    return 1 if p[0] in tags else 0

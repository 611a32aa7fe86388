"""Acceptance criteria as functions returning (passed, detail, manifest).

Manifests hold counts and digests only (no timings), so two runs with the
same seed must produce byte-identical JSON.  Run directly to write the
manifests of every criterion into a directory::

    python3 tests/acceptance_suite.py --seed 0 --out /tmp/run1
"""

import hashlib
import json
import os
import sys
import time
from itertools import product

from atlcheck.checker import (
    MemorylessStrategy, check, check_atlplus, oracle_check, outcome_graph,
    synthesize, verify_strategy, resolve, _operand_labeller,
)
from atlcheck.formula import (
    And, Coalition, Finally, Globally, InfOften, AlmostAlways, Next, Not, Or,
    Prop, Release, Until, parse, size, subformulas, to_str,
)
from atlcheck.gamestruct import (
    eval_condition, relabel, validate,
)
from atlcheck.modelio import load_model
from atlcheck import reductions as R
from atlcheck.pathcheck import lasso_check, universal_path_check
from atlcheck.sampling import (
    KINDS, coalitions, depth1, literals, random_structure, rng_for,
)
from atlcheck.translate import (
    TRANSLATIONS, ats_to_i, check_bisim, e_to_ats, e_to_i, i_to_e,
)

FIX = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


class Digest:
    def __init__(self):
        self.h = hashlib.sha256()

    def add(self, *items):
        for x in items:
            self.h.update(repr(x).encode())
            self.h.update(b"\x00")

    def hex(self):
        return self.h.hexdigest()


def _sets(r, fs):
    return [tuple(sorted(r[f])) for f in fs]


# ---------------------------------------------------------------------------
# 1. non-determined fixtures


def criterion_1(seed=0):
    t0 = time.perf_counter()
    f1 = parse("!<<A1>> X p")
    f2 = parse("!<<A2>> X !p")
    rows = {}
    ok = True
    for name in ("nondet.model", "nondet.ats"):
        g = load_model(os.path.join(FIX, name))
        for eng in (check, oracle_check):
            for f in (f1, f2):
                h = eng(g, f).holds("l0")
                rows[f"{name}/{eng.__name__}/{f}"] = h
                ok = ok and h
    elapsed = time.perf_counter() - t0
    passed = ok and elapsed < 1.0
    return passed, f"both negations hold at l0 on CGS and ATS ({elapsed:.3f}s)", \
        {"results": sorted(rows.items())}


# ---------------------------------------------------------------------------
# 2. fixpoint engine against the strategy-enumeration oracle


def random_formula(rng, agents, depth, aps=("p", "q")):
    """Random state formula of modal depth <= depth with Boolean structure."""
    r = rng.random()
    if depth == 0 or r < 0.25:
        f = Prop(rng.choice(aps))
        return Not(f) if rng.random() < 0.5 else f
    if r < 0.35:
        return Not(random_formula(rng, agents, depth, aps))
    if r < 0.5:
        cls = And if rng.random() < 0.5 else Or
        return cls(random_formula(rng, agents, depth, aps), random_formula(rng, agents, depth, aps))
    A = tuple(a for a in agents if rng.random() < 0.5)
    sub = lambda: random_formula(rng, agents, depth - 1, aps)
    op = rng.randrange(3)
    if op == 0:
        return Coalition(A, Next(sub()))
    if op == 1:
        return Coalition(A, Until(sub(), sub()))
    return Coalition(A, Release(sub(), sub()))


def sweep_structure(g, rng, n_random=10, eatl=False):
    """Depth <= 2 family on both engines; returns (formulas, disagreements, digest items)."""
    cs = coalitions(g)
    lits = literals()
    items = []
    bad = []
    sets = set()
    full = frozenset(range(g.n_states))
    for f in lits:
        sets.add(check(g, f).states)
    count = 0
    for f in depth1(cs, lits, eatl=eatl):
        a = check(g, f).states
        b = oracle_check(g, f).states
        count += 1
        if a != b:
            bad.append((f, a, b))
        items.append(tuple(sorted(a)))
        sets.add(a)
        sets.add(full - a)
    sets = sorted(sets, key=lambda s: (len(s), sorted(s)))
    names = [f"d{i}" for i in range(len(sets))]
    labels = [frozenset(nm for nm, S in zip(names, sets) if st in S) for st in range(g.n_states)]
    h = relabel(g, labels, names)
    for f in depth1(cs, [Prop(x) for x in names], eatl=eatl):
        a = check(h, f).states
        b = oracle_check(h, f).states
        count += 1
        if a != b:
            bad.append((f, a, b))
        items.append(tuple(sorted(a)))
    for _ in range(n_random):
        f = random_formula(rng, g.agents, 2)
        a = check(g, f).states
        b = oracle_check(g, f).states
        count += 1
        if a != b:
            bad.append((f, a, b))
        items.append(tuple(sorted(a)))
    return count, bad, items


def criterion_2(seed=0, per_kind=500):
    t0 = time.perf_counter()
    manifest = {}
    total_bad = 0
    total = 0
    for kind in KINDS:
        d = Digest()
        formulas = 0
        bad = 0
        for i in range(per_kind):
            g = random_structure(rng_for(seed, "c2", kind, i), kind)
            n, b, items = sweep_structure(g, rng_for(seed, "c2f", kind, i))
            formulas += n
            bad += len(b)
            d.add(i, items)
            if b and bad <= 3:
                print(f"  disagreement on {kind} structure {i}: {b[0][0]}", file=sys.stderr)
        manifest[kind] = {"structures": per_kind, "formulas": formulas,
                          "disagreements": bad, "digest": d.hex()}
        total_bad += bad
        total += formulas
    elapsed = time.perf_counter() - t0
    passed = total_bad == 0 and elapsed < 600
    return passed, (f"{per_kind} structures per kind, {total} formula checks, "
                    f"{total_bad} disagreements ({elapsed:.0f}s)"), manifest


# ---------------------------------------------------------------------------
# 3. reductions against brute-force Boolean evaluation


def _snsat2_level_property(ri, inst):
    """(q_i, psi_k) for k >= i equals z_i, and the f_I strategies witness it."""
    g = ri.structure
    v = R.eval_snsat(inst)
    m = inst.p
    ok = True
    for k in range(1, m + 1):
        psi = R.snsat2_formula(g, k)
        lab = check(g, psi)
        for i in range(1, k + 1):
            z = v.z[f"z{i}"]
            if lab.holds(f"q{i}") != z:
                ok = False
            if z:
                F = _f_I(g, inst, psi, v)
                if not verify_strategy(g, f"q{i}", F, psi):
                    ok = False
    if ri.expected:
        F = synthesize(g, ri.query, ri.formula)
        if F is None:
            return False
        q = ri.query
        for a, mv in zip(F.coalition, F.moves[q]):
            name = g.agents[a]
            if name.startswith("C") and int(name[1:]) < m:
                if (mv == R.T) != v.z[f"z{name[1:]}"]:
                    ok = False
    return ok


def _f_I(g, inst, psi, v):
    """A agents play the recorded witness, C agents the true value of z."""
    A = g.coalition(psi.agents)
    x_of = {}
    for name in g.agents:
        if name.startswith("A"):
            lvl, j = name[1:].split("_")
            x_of[name] = v.x[inst.levels[int(lvl) - 1].xs[int(j) - 1]]
        elif name.startswith("C"):
            x_of[name] = v.z[f"z{name[1:]}"]
    mv = tuple(R.T if x_of[g.agents[a]] else R.F for a in A)
    return MemorylessStrategy(A, tuple(mv for _ in range(g.n_states)))


def criterion_3(seed=0, n=200):
    t0 = time.perf_counter()
    manifest = {}
    total_bad = 0

    def run(name, make, engines, extra=None):
        nonlocal total_bad
        d = Digest()
        bad = trues = 0
        for i in range(n):
            rng = rng_for(seed, "c3", name, i)
            inst = make(rng)
            ri = make_ri[name](inst)
            trues += ri.expected
            for eng in engines:
                if eng(ri.structure, ri.formula).holds(ri.query) != ri.expected:
                    bad += 1
            if extra is not None and not extra(ri, inst):
                bad += 1
            d.add(inst, ri.expected)
        manifest[name] = {"instances": n, "true": trues, "disagreements": bad, "digest": d.hex()}
        total_bad += bad

    make_ri = {
        "3sat": R.gen_3sat_ats,
        "snsat": R.gen_snsat_ats,
        "qbf2-sigma": lambda i: R.gen_e2sat_cgsi(i, "sigma"),
        "qbf2-pi": lambda i: R.gen_e2sat_cgsi(i, "pi"),
        "snsat2": R.gen_snsat2_cgsi,
    }
    run("3sat", lambda r: R.random_cnf(r, r.randint(1, 4), r.randint(1, 4)), [check, oracle_check])
    run("snsat", lambda r: R.random_snsat(r, r.randint(1, 3), r.randint(1, 2), 0, r.randint(1, 3)),
        [check])
    qbf = lambda r: R.random_qbf(r, r.randint(1, 3), r.randint(1, 3), r.randint(1, 6))
    run("qbf2-sigma", qbf, [check, oracle_check])
    run("qbf2-pi", qbf, [check, oracle_check])
    level_property_every = 5
    counter = {"i": 0}

    def level_property(ri, inst):
        counter["i"] += 1
        return _snsat2_level_property(ri, inst) if counter["i"] % level_property_every == 1 else True
    run("snsat2", lambda r: R.random_snsat(r, r.randint(1, 2), r.randint(1, 2), r.randint(0, 2),
                                           r.randint(1, 4)), [check], level_property)
    elapsed = time.perf_counter() - t0
    passed = total_bad == 0 and elapsed < 300
    return passed, f"{n} instances per reduction, {total_bad} disagreements ({elapsed:.0f}s)", manifest


# ---------------------------------------------------------------------------
# 4. ATL+ gadget and the path checker against lasso enumeration


def _gadget_subqueries(g, f):
    """(succ, start, resolved path) for every strategy of every Boolean quantifier."""
    lab = _operand_labeller(g)
    lab.val(f)
    out = []
    for h in subformulas(f):
        if isinstance(h, Coalition) and not isinstance(h.path, (Next, Until, Release, Finally,
                                                                 Globally)):
            res = resolve(lab, h.path)
            A = g.coalition(h.agents)
            per_state = []
            for s in range(g.n_states):
                mc = g.move_counts(s)
                per_state.append(list(product(*[range(mc[a]) for a in A])))
            for moves in product(*per_state):
                F = MemorylessStrategy(A, tuple(moves))
                succ = outcome_graph(g, F)
                for s in range(g.n_states):
                    out.append((succ, s, res))
    return out


def _random_path(rng, n, depth=2):
    def S():
        return frozenset(x for x in range(n) if rng.random() < 0.5)
    r = rng.random()
    if depth == 0 or r < 0.5:
        tag = rng.choice(["st", "X", "U", "R", "Fi", "Gi"])
        if tag in ("U", "R"):
            return (tag, S(), S())
        return (tag, S())
    if r < 0.65:
        return ("not", _random_path(rng, n, depth - 1))
    return (rng.choice(["and", "or"]), _random_path(rng, n, depth - 1),
            _random_path(rng, n, depth - 1))


def criterion_4(seed=0, n=200, n_graphs=300):
    t0 = time.perf_counter()
    bad = trues = subq = 0
    d = Digest()
    for i in range(n):
        rng = rng_for(seed, "c4", i)
        nx, ny = rng.choice([(0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)])
        inst = R.random_snsat(rng, rng.randint(1, 2), nx, ny, rng.randint(1, 3))
        ri = R.gen_snsat2_atlplus(inst)
        got = check_atlplus(ri.structure, ri.formula).holds(ri.query)
        trues += ri.expected
        bad += got != ri.expected
        d.add(inst, got)
        if ri.structure.n_states <= 5:
            for succ, s, res in _gadget_subqueries(ri.structure, ri.formula):
                subq += 1
                if universal_path_check(succ, s, res) != lasso_check(succ, s, res):
                    bad += 1
    # random small graphs with random Boolean path formulas
    for i in range(n_graphs):
        rng = rng_for(seed, "c4g", i)
        k = rng.randint(1, 5)
        succ = [sorted(rng.sample(range(k), rng.randint(1, min(2, k)))) for _ in range(k)]
        p = _random_path(rng, k)
        for s in range(k):
            subq += 1
            a = universal_path_check(succ, s, p)
            if a != lasso_check(succ, s, p):
                bad += 1
            d.add(a)
    elapsed = time.perf_counter() - t0
    passed = bad == 0
    return passed, (f"{n} gadget instances ({trues} true), {subq} path sub-queries, "
                    f"{bad} disagreements ({elapsed:.0f}s)"), \
        {"instances": n, "true": trues, "subqueries": subq, "disagreements": bad,
         "digest": d.hex()}


# ---------------------------------------------------------------------------
# 5. translations


SRC_KIND = {"e_to_i": "cgs-explicit", "i_to_e": "cgs-implicit", "e_to_ats": "cgs-explicit",
            "i_to_ats": "cgs-implicit", "ats_to_e": "ats", "ats_to_i": "ats"}

TRIPLE_SETS = {
    "P1": ["{b_{a,1,1}, d_{a,1,2}, d_{a,1,3}}",
           "{c_{a,2,2}, c_{a,2,3}, d_{a,2,1}}",
           "{a_{a,3,1}, d_{a,3,2}, d_{a,3,3}}"],
    "P2": ["{a_{a,3,1}, b_{a,1,1}, d_{a,2,1}}",
           "{c_{a,2,2}, d_{a,1,2}, d_{a,3,2}}",
           "{c_{a,2,3}, d_{a,1,3}, d_{a,3,3}}"],
}


def triple_sets():
    g = load_model(os.path.join(FIX, "triples.model"))
    tr = e_to_ats(g)
    h = tr.structure
    a = h.state_id("a")
    out = {}
    for j, agent in enumerate(h.agents):
        out[agent] = ["{" + ", ".join(sorted(tr.render_state(q) for q in c)) + "}"
                      for c in h.choices[a][j]]
    return out


def criterion_5(seed=0, n=200):
    t0 = time.perf_counter()
    manifest = {}
    bad = 0
    for (src, dst), fn in sorted(TRANSLATIONS.items(), key=lambda kv: fn_name(kv[1])):
        name = fn_name(fn)
        d = Digest()
        fails = 0
        for i in range(n):
            g = random_structure(rng_for(seed, "c5", name, i), SRC_KIND[name], max_states=5)
            tr = fn(g)
            h = tr.structure
            if h.kind != dst or validate(h) or not check_bisim(g, h, tr.relation):
                fails += 1
            d.add(h.n_states)
        manifest[name] = {"structures": n, "failures": fails, "digest": d.hex()}
        bad += fails
    rt = 0
    for i in range(n):
        g = random_structure(rng_for(seed, "c5rt", i), "cgs-explicit")
        if i_to_e(e_to_i(g).structure).structure != g:
            rt += 1
        h = random_structure(rng_for(seed, "c5rti", i), "cgs-implicit")
        e = i_to_e(h).structure
        if i_to_e(e_to_i(e).structure).structure != e:
            rt += 1
    manifest["round_trip_failures"] = rt
    triples = triple_sets()
    manifest["triples"] = triples
    triples_ok = triples == TRIPLE_SETS
    elapsed = time.perf_counter() - t0
    passed = bad == 0 and rt == 0 and triples_ok
    return passed, (f"{n} structures x 6 maps, {bad} failures, {rt} round-trip failures, "
                    f"triple choice sets {'verbatim' if triples_ok else 'DIFFER'} ({elapsed:.0f}s)"), manifest


def fn_name(fn):
    return fn.__name__


# ---------------------------------------------------------------------------
# 6. ATS to implicit CGS worked example


def criterion_6(seed=0):
    g = load_model(os.path.join(FIX, "choice_example.ats"))
    h = ats_to_i(g).structure
    l0 = g.state_id("l0")
    A1, A2 = 0, 1
    expected = {
        "l1": lambda m: (m[A1] in (0, 1)) and m[A2] == 1,
        "l2": lambda m: m[A1] == 0 and m[A2] == 0,
        "l3": lambda m: m[A1] == 1 and m[A2] == 0,
    }
    rules = h.rules[l0]
    ours = {}
    for cond, t in rules[:-1]:
        ours[h.states[t]] = cond
    ok = set(ours) == set(expected)
    table = []
    for m in product(range(2), range(2)):
        mv = dict(enumerate(m))
        for t, cond in sorted(ours.items()):
            a = eval_condition(cond, mv) is True
            b = expected[t](m)
            table.append((m, t, a, b))
            ok = ok and a == b
        target = h.states[h.successor(l0, m)]
        ok = ok and expected[target](m)
    return ok, "guards match the worked example on all 4 joint moves", \
        {"table": [[list(m), t, a, b] for m, t, a, b in table]}


# ---------------------------------------------------------------------------
# 7. expressiveness family


def atlorig_formulas(max_size, agents=("A1", "A2"), aps=("a", "b")):
    from atlcheck.formula import TRUE, FALSE
    coal = [tuple(a for a, b in zip(agents, bits) if b) for bits in product((0, 1), repeat=len(agents))]
    by = {1: [Prop(p) for p in aps] + [TRUE, FALSE]}
    for n in range(2, max_size + 1):
        out = [Not(f) for f in by[n - 1]]
        for k in range(1, n - 1):
            for f in by[k]:
                for h in by[n - 1 - k]:
                    out += [Or(f, h), And(f, h)]
        if n >= 3:
            for f in by[n - 2]:
                for A in coal:
                    out += [Coalition(A, Next(f)), Coalition(A, Globally(f)),
                            Coalition(A, Finally(f))]
        for k in range(1, n - 2):
            for f in by[k]:
                for h in by[n - 2 - k]:
                    out += [Coalition(A, Until(f, h)) for A in coal]
        by[n] = out
    return [f for n in range(1, max_size + 1) for f in by[n]]


def criterion_7(seed=0):
    phi = R.release_formula()
    disj = parse("<<A1>> G (a | b) | <<A1>> ((a | b) U b)", "atlorig")
    ok = True
    rows = []
    differs_at = []
    for i in range(1, 7):
        g, s, t = R.gen_expressiveness_family(i)
        r = check(g, phi)
        o = oracle_check(g, phi)
        F = synthesize(g, t, phi)
        always4 = F is not None and F.moves[t] == (3,)
        ver = F is not None and verify_strategy(g, t, F, phi)
        # the strategy that plays 4 at s'_i and anything elsewhere
        G4 = MemorylessStrategy(F.coalition, tuple((3,) if q == t else (0,) for q in range(g.n_states))) \
            if F is not None else None
        ver4 = G4 is not None and verify_strategy(g, t, G4, phi)
        row_ok = (not r.holds(s)) and r.holds(t) and (not o.holds(s)) and o.holds(t) \
            and always4 and ver and ver4
        ok = ok and row_ok
        od = oracle_check(g, disj)
        if od.holds(t) != o.holds(t):
            differs_at.append(i)
        rows.append([i, r.holds(s), r.holds(t), always4, ver, od.holds(t)])
    g, s, t = R.gen_expressiveness_family(3)
    fs = [f for f in atlorig_formulas(3) if size(f) <= 3]
    distinguishing = [to_str(f) for f in fs if check(g, f).holds(s) != check(g, f).holds(t)]
    ok = ok and not distinguishing and bool(differs_at)
    return ok, (f"s_i fails and s'_i satisfies <<A1>>(b R (a|b)) with move 4 for i=1..6; "
                f"{len(fs)} ATLorig formulas of size <= 3 agree at s3/s'3; "
                f"disjunction differs at i in {differs_at}"), \
        {"rows": rows, "atlorig_checked": len(fs), "distinguishing": distinguishing,
         "disjunction_differs": differs_at}


# ---------------------------------------------------------------------------
# 8. EATL


def criterion_8(seed=0, per_kind=200):
    t0 = time.perf_counter()
    bad = 0
    manifest = {}
    for kind in KINDS:
        d = Digest()
        kbad = 0
        for i in range(per_kind):
            g = random_structure(rng_for(seed, "c8", kind, i), kind, max_states=5)
            cs = coalitions(g)
            fs = []
            for A in cs:
                for l in literals():
                    fs += [Coalition(A, InfOften(l)), Coalition(A, AlmostAlways(l))]
                    inner = Coalition(A, Next(l))
                    fs += [Coalition(A, InfOften(inner)), Coalition(A, AlmostAlways(Not(inner)))]
            for f in fs:
                a = check(g, f).states
                b = oracle_check(g, f).states
                kbad += a != b
                d.add(tuple(sorted(a)))
        manifest[kind] = {"structures": per_kind, "disagreements": kbad, "digest": d.hex()}
        bad += kbad
    # single-agent identities
    ident = 0
    for i in range(per_kind):
        kind = KINDS[i % 3]
        g = random_structure(rng_for(seed, "c8k", i), kind, max_states=5, max_agents=1)
        agt = g.agents
        p = Prop("p")
        lhs1 = check(g, Coalition(agt, AlmostAlways(p))).states
        rhs1 = check(g, Coalition(agt, Finally(Coalition(agt, Globally(p))))).states
        lhs2 = check(g, Coalition((), InfOften(p))).states
        rhs2 = check(g, Coalition((), Globally(Coalition((), Finally(p))))).states
        ident += (lhs1 != rhs1) + (lhs2 != rhs2)
    manifest["identity_failures"] = ident
    elapsed = time.perf_counter() - t0
    return bad == 0 and ident == 0, \
        (f"{per_kind} structures per kind, {bad} disagreements, {ident} identity failures "
         f"({elapsed:.0f}s)"), manifest


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
            5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8}


def dumps(manifest):
    return json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n"


def write_manifest(out, k, seed, manifest):
    # the pass flag is left out because time limits feed into it
    path = os.path.join(out, f"criterion_{k}.json")
    with open(path, "w") as f:
        f.write(dumps({"criterion": k, "seed": seed, "manifest": manifest}))
    return path


def run_all(seed, out=None, only=None):
    results = {}
    for k, fn in CRITERIA.items():
        if only and k not in only:
            continue
        passed, detail, manifest = fn(seed)
        results[k] = (passed, detail, manifest)
        if out:
            write_manifest(out, k, seed, manifest)
    return results


if __name__ == "__main__":
    import argparse
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", required=True)
    ap.add_argument("--only", type=int, nargs="*")
    a = ap.parse_args()
    os.makedirs(a.out, exist_ok=True)
    for k, (passed, detail, _) in run_all(a.seed, a.out, a.only).items():
        print(f"{'PASS' if passed else 'FAIL'} criterion {k}: {detail}")

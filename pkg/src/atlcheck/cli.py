"""Command-line interface.

Exit codes: 0 satisfied or success, 1 unsatisfied or failure, 2 engine
disagreement or failed self-check, 3 input error (parse, resolution,
invalid structure), 4 budget exceeded.
"""

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from .checker import (
    check, check_atlplus, oracle_check, synthesize, verify_strategy,
)
from .cpre import cpre_witness
from .errors import AtlError, BudgetExceeded
from .formula import (
    Coalition, check_dialect, is_state, parse, parse_lines, subformulas, to_str,
)
from .gamestruct import require_valid, validate
from .modelio import dump_model, parse_model
from .translate import check_bisim, largest_bisim, translate

EXIT_SAT, EXIT_UNSAT, EXIT_DISAGREE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3, 4

KIND_EXT = {"cgs-explicit": "cgse", "cgs-implicit": "cgsi", "ats": "ats"}


class Run:
    """Collects the report, the input digests and the run manifest."""

    def __init__(self, args):
        self.args = args
        self.inputs = {}
        self.lines = []
        self.data = {}
        self.seed = None

    def read(self, path):
        with open(path, "rb") as f:
            raw = f.read()
        self.inputs[path] = hashlib.sha256(raw).hexdigest()
        return raw.decode()

    def say(self, line=""):
        self.lines.append(line)

    def emit(self, code):
        a = self.args
        if getattr(a, "json", False):
            out = dict(self.data)
            out["exit"] = code
            sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
        elif self.lines:
            sys.stdout.write("\n".join(self.lines) + "\n")
        if getattr(a, "run_manifest", None):
            write_json(a.run_manifest, self.manifest(code))
        return code

    def manifest(self, code):
        return {
            "command": self.args.command,
            "argv": self.args.argv,
            "inputs": dict(sorted(self.inputs.items())),
            "seed": self.seed,
            "version": __version__,
            "outcome": {"exit": code, "summary": self.data.get("summary", "")},
        }


def write_json(path, obj):
    with open(path, "w") as f:
        f.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load(run, path):
    g = parse_model(run.read(path))
    require_valid(g)
    return g


def _formulas(run, spec, dialect):
    if os.path.isfile(spec):
        return parse_lines(run.read(spec), dialect)
    return [parse(spec, dialect)]


def _engine_fn(name, dialect):
    if dialect == "atlplus":
        return {"fixpoint": check_atlplus, "oracle": oracle_check}[name]
    return {"fixpoint": check, "oracle": oracle_check}[name]


def _disagreement(g, f, r1, r2):
    """Smallest state subformula (in postorder) labelled differently."""
    for h in subformulas(f):
        if is_state(h) and h in r1 and h in r2 and r1[h] != r2[h]:
            return h
    return f


def _names(g, ids):
    return g.state_names(ids)


# ---------------------------------------------------------------------------
# check


def cmd_check(run):
    a = run.args
    g = _load(run, a.model)
    init = g.state_id(a.init) if a.init is not None else None
    run.data.update(model=a.model, engine=a.engine, dialect=a.dialect)

    if a.cpre is not None:
        A = [x for x in a.cpre[0].split(",") if x]
        S = [x for x in a.cpre[1].split(",") if x]
        wit = cpre_witness(g, A, S)
        coal = g.coalition(A)
        rows = {}
        for s in sorted(wit):
            mv = {g.agents[ag]: m + 1 for ag, m in zip(coal, wit[s])}
            rows[g.states[s]] = mv
            run.say(f"{g.states[s]}: " + " ".join(f"{k}={v}" for k, v in mv.items()))
        run.data["cpre"] = rows
        if a.formulas is None:
            run.data["summary"] = f"cpre has {len(rows)} states"
            return run.emit(EXIT_SAT if init is None or g.states[init] in rows else EXIT_UNSAT)

    if a.formulas is None:
        raise AtlError("no formulas given")
    fs = _formulas(run, a.formulas, a.dialect)
    for f in fs:
        check_dialect(f, a.dialect)

    expect = None
    if a.expect:
        expect = json.loads(run.read(a.expect))

    engines = ["fixpoint", "oracle"] if a.engine == "both" else [a.engine]
    results = []
    code = EXIT_SAT
    all_hold = True
    for f in fs:
        res = [_engine_fn(e, a.dialect)(g, f) for e in engines]
        r = res[0]
        entry = {"formula": to_str(f), "states": _names(g, r.states)}
        run.say(f"formula: {to_str(f)}")
        run.say("states: " + " ".join(_names(g, r.states)))
        if len(res) == 2 and res[0].states != res[1].states:
            h = _disagreement(g, f, res[0], res[1])
            entry["disagreement"] = {
                "subformula": to_str(h),
                "fixpoint": _names(g, res[0][h]),
                "oracle": _names(g, res[1][h]),
            }
            run.say(f"disagreement at {to_str(h)}: fixpoint "
                    + " ".join(_names(g, res[0][h])) + " / oracle "
                    + " ".join(_names(g, res[1][h])))
            code = EXIT_DISAGREE
        if init is not None:
            ok = init in r.states
            entry["holds_at_init"] = ok
            run.say(f"at {g.states[init]}: {'true' if ok else 'false'}")
            all_hold = all_hold and ok
        if a.witness and isinstance(f, Coalition):
            start = init if init is not None else (min(r.states) if r.states else None)
            F = synthesize(g, start, f) if start is not None and start in r.states else None
            if F is not None:
                if not verify_strategy(g, start, F, f):
                    raise AssertionError("synthesized strategy failed verification")
                entry["witness"] = F.as_dict(g)
                run.say("witness:")
                run.say(F.render(g))
            else:
                entry["witness"] = None
        results.append(entry)
    run.data["results"] = results

    if code == EXIT_DISAGREE:
        run.data["summary"] = "engines disagree"
        return run.emit(code)
    if expect is not None:
        f = fs[0]
        r = results[0]
        ok = True
        for q in expect["queries"]:
            got = q["state"] in r["states"]
            if got != q["expected"]:
                ok = False
            run.say(f"expected {q['expected']} at {q['state']}: got {got}")
        if to_str(f) != expect["formula"]:
            run.say("note: formula differs from the manifest formula")
        run.data["expect_matched"] = ok
        run.data["summary"] = "manifest matched" if ok else "manifest mismatch"
        return run.emit(EXIT_SAT if ok else EXIT_UNSAT)
    if init is not None:
        code = EXIT_SAT if all_hold else EXIT_UNSAT
    run.data["summary"] = f"{len(fs)} formulas checked"
    return run.emit(code)


# ---------------------------------------------------------------------------
# translate / bisim / validate


def _rel_lines(g1, g2, rel):
    return [f"{g1.states[x]} ~ {g2.states[y]}" for x, y in sorted(rel)]


def cmd_translate(run):
    a = run.args
    g = _load(run, a.model)
    tr = translate(g, a.to)
    h = tr.structure
    require_valid(h)
    text = dump_model(h)
    rel = _rel_lines(g, h, tr.relation)
    run.data.update(kind=h.kind, states=len(h.states),
                    summary=f"{g.kind} -> {h.kind}, {len(h.states)} states")
    if a.out:
        with open(a.out, "w") as f:
            f.write(text)
    else:
        run.data["model"] = text
        sys.stdout.write(text)
    if a.emit_relation:
        run.data["relation"] = rel
        if a.emit_relation == "-":
            run.lines.extend(rel)
        else:
            with open(a.emit_relation, "w") as f:
                f.write("\n".join(rel) + "\n")
    return run.emit(EXIT_SAT)


def _read_relation(run, path, g1, g2):
    rel = set()
    for ln, raw in enumerate(run.read(path).splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("~")]
        if len(parts) != 2:
            raise AtlError(f"line {ln}: expected 'state ~ state'")
        rel.add((g1.state_id(parts[0]), g2.state_id(parts[1])))
    return frozenset(rel)


def cmd_bisim(run):
    a = run.args
    g1 = _load(run, a.model1)
    g2 = _load(run, a.model2)
    if a.relation:
        rel = _read_relation(run, a.relation, g1, g2)
        rep = check_bisim(g1, g2, rel)
        ok = rep.ok and bool(rel)
        reason = rep.reason or ("" if rel else "empty relation")
    else:
        # the largest alternating bisimulation, required to be total both ways
        rel = largest_bisim(g1, g2)
        left = {x for x, _ in rel}
        right = {y for _, y in rel}
        missing = [g1.states[s] for s in range(g1.n_states) if s not in left] + \
                  [g2.states[s] for s in range(g2.n_states) if s not in right]
        ok = not missing
        reason = "" if ok else "unrelated states: " + " ".join(missing)
    run.data.update(bisimilar=ok, reason=reason, relation=_rel_lines(g1, g2, rel),
                    summary="bisimilar" if ok else "not bisimilar")
    run.say("bisimilar" if ok else f"not bisimilar: {reason}")
    if ok and a.show_relation:
        run.lines.extend(_rel_lines(g1, g2, rel))
    return run.emit(EXIT_SAT if ok else EXIT_UNSAT)


def cmd_validate(run):
    a = run.args
    g = parse_model(run.read(a.model))
    vs = validate(g)
    run.data.update(kind=g.kind, violations=[str(v) for v in vs],
                    summary="valid" if not vs else f"{len(vs)} violations")
    if vs:
        for v in vs:
            run.say(str(v))
    else:
        run.say(f"valid {g.kind}: {g.n_states} states, {g.n_agents} agents")
    return run.emit(EXIT_SAT if not vs else EXIT_UNSAT)


# ---------------------------------------------------------------------------
# synthesize


def cmd_synthesize(run):
    a = run.args
    g = _load(run, a.model)
    fs = _formulas(run, a.formula, a.dialect)
    if len(fs) != 1 or not isinstance(fs[0], Coalition):
        raise AtlError("synthesize needs exactly one formula of the form <<A>> path")
    f = fs[0]
    check_dialect(f, a.dialect)
    s = g.state_id(a.init)
    F = synthesize(g, s, f, budget=a.budget)
    run.data.update(formula=to_str(f), state=g.states[s])
    if F is None:
        run.data.update(strategy=None, verified=False, summary="no memoryless strategy")
        run.say(f"no memoryless strategy for {to_str(f)} at {g.states[s]}")
        return run.emit(EXIT_UNSAT)
    ok = verify_strategy(g, s, F, f)
    run.data.update(strategy=F.as_dict(g), verified=ok,
                    summary="verified" if ok else "verification failed")
    run.say(F.render(g))
    run.say("verified" if ok else "verification FAILED")
    return run.emit(EXIT_SAT if ok else EXIT_DISAGREE)


# ---------------------------------------------------------------------------
# generate


GEN_DEFAULTS = {
    "3sat": {"vars": 3, "clauses": 3},
    "snsat": {"levels": 2, "x": 1, "clauses": 2},
    "snsat2": {"levels": 2, "x": 1, "y": 1, "clauses": 2},
    "qbf2": {"x": 2, "y": 2, "clauses": 3, "form": "sigma"},
    "atlplus": {"levels": 2, "x": 1, "y": 1, "clauses": 2},
    "family": {"i": 4},
}


def _parse_size(kind, text):
    params = dict(GEN_DEFAULTS[kind])
    if not text:
        return params
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" in part:
            k, v = part.split("=", 1)
        else:
            # a bare number sets the first parameter
            k, v = next(iter(GEN_DEFAULTS[kind])), part
        k = k.strip()
        if k not in params:
            raise AtlError(f"unknown size parameter {k!r} for {kind}")
        params[k] = v.strip() if k == "form" else int(v)
    return params


def generate(kind, seed, params):
    """(structure, formula, manifest dict) for a generator run."""
    from . import reductions as R
    from .sampling import rng_for
    rng = rng_for(seed, kind)
    dialect = "atl"
    if kind == "family":
        g, s, t = R.gen_expressiveness_family(params["i"])
        f = R.release_formula()
        queries = [{"state": g.states[s], "expected": False},
                   {"state": g.states[t], "expected": True}]
        instance = None
    else:
        if kind == "3sat":
            inst = R.random_cnf(rng, params["vars"], params["clauses"])
            ri = R.gen_3sat_ats(inst)
        elif kind == "snsat":
            inst = R.random_snsat(rng, params["levels"], params["x"], 0, params["clauses"])
            ri = R.gen_snsat_ats(inst)
        elif kind == "snsat2":
            inst = R.random_snsat(rng, params["levels"], params["x"], params["y"],
                                  params["clauses"])
            ri = R.gen_snsat2_cgsi(inst)
        elif kind == "qbf2":
            inst = R.random_qbf(rng, params["x"], params["y"], params["clauses"])
            ri = R.gen_e2sat_cgsi(inst, params["form"])
        elif kind == "atlplus":
            inst = R.random_snsat(rng, params["levels"], params["x"], params["y"],
                                  params["clauses"])
            ri = R.gen_snsat2_atlplus(inst)
            dialect = "atlplus"
        else:
            raise AtlError(f"unknown generator {kind!r}")
        g, f = ri.structure, ri.formula
        queries = [{"state": g.states[ri.query], "expected": ri.expected}]
        instance = inst.to_json()
    manifest = {
        "generator": kind,
        "seed": seed,
        "params": params,
        "dialect": dialect,
        "formula": to_str(f),
        "queries": queries,
        "instance": instance,
        "version": __version__,
    }
    return g, f, manifest


def cmd_generate(run):
    a = run.args
    params = _parse_size(a.kind, a.size)
    run.seed = a.seed
    g, f, manifest = generate(a.kind, a.seed, params)
    os.makedirs(a.out, exist_ok=True)
    model_path = os.path.join(a.out, f"model.{KIND_EXT[g.kind]}")
    with open(model_path, "w") as fh:
        fh.write(dump_model(g))
    with open(os.path.join(a.out, "formula.txt"), "w") as fh:
        fh.write(to_str(f) + "\n")
    write_json(os.path.join(a.out, "manifest.json"), manifest)
    run.data.update(manifest=manifest, summary=f"generated {a.kind}")
    run.say(f"wrote {model_path}, formula.txt, manifest.json")
    for q in manifest["queries"]:
        run.say(f"expected {str(q['expected']).lower()} at {q['state']}")
    return run.emit(EXIT_SAT)


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="atlcheck", description="ATL model checking toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="JSON report on stdout")
        sp.add_argument("--run-manifest", metavar="FILE", help="write the run manifest here")

    c = sub.add_parser("check", help="label formulas on a structure")
    c.add_argument("model")
    c.add_argument("formulas", nargs="?", help="formula file, or a formula")
    c.add_argument("--dialect", default="atl", choices=["atl", "atlorig", "eatl", "atlplus"])
    c.add_argument("--engine", default="fixpoint", choices=["fixpoint", "oracle", "both"])
    c.add_argument("--witness", action="store_true")
    c.add_argument("--init", help="designated initial state; sets the exit code")
    c.add_argument("--cpre", nargs=2, metavar=("AGENTS", "STATES"),
                   help="print the forcing moves of CPre(AGENTS, STATES); comma lists")
    c.add_argument("--expect", metavar="MANIFEST", help="compare with a generated manifest")
    common(c)

    t = sub.add_parser("translate", help="convert between structure kinds")
    t.add_argument("model")
    t.add_argument("--to", required=True, choices=list(KIND_EXT))
    t.add_argument("--out", help="write the model here instead of stdout")
    t.add_argument("--emit-relation", nargs="?", const="-", metavar="FILE",
                   help="print the relation as 'a ~ b' lines (to FILE if given)")
    common(t)

    b = sub.add_parser("bisim", help="alternating bisimulation between two structures")
    b.add_argument("model1")
    b.add_argument("model2")
    b.add_argument("--relation", help="file of 'a ~ b' lines to check")
    b.add_argument("--show-relation", action="store_true")
    common(b)

    g = sub.add_parser("generate", help="instances of the hardness reductions")
    g.add_argument("kind", choices=list(GEN_DEFAULTS))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--size", help="k=v list, e.g. vars=4,clauses=3")
    g.add_argument("--out", required=True)
    common(g)

    s = sub.add_parser("synthesize", help="memoryless witness strategy")
    s.add_argument("model")
    s.add_argument("formula")
    s.add_argument("--init", required=True)
    s.add_argument("--dialect", default="atl", choices=["atl", "atlorig", "eatl", "atlplus"])
    s.add_argument("--budget", type=int)
    common(s)

    v = sub.add_parser("validate", help="report structure violations")
    v.add_argument("model")
    common(v)
    return p


COMMANDS = {
    "check": cmd_check, "translate": cmd_translate, "bisim": cmd_bisim,
    "generate": cmd_generate, "synthesize": cmd_synthesize, "validate": cmd_validate,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    run = Run(args)
    try:
        return COMMANDS[args.command](run)
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        run.data["error"] = str(e)
        run.data["summary"] = "budget exceeded"
        return run.emit(EXIT_BUDGET)
    except (AtlError, OSError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        run.data["error"] = str(e)
        run.data["summary"] = "input error"
        return run.emit(EXIT_INPUT)


if __name__ == "__main__":
    sys.exit(main())

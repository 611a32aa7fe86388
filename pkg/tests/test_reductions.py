import random

import pytest

from atlcheck import reductions as R
from atlcheck.checker import check, check_atlplus, oracle_check
from atlcheck.formula import parse
from atlcheck.gamestruct import validate


def lit(v, p=True):
    return (v, p)


def test_cnf_brute_force():
    sat = R.CnfInstance(("x1", "x2"), ((lit("x1"), lit("x2")), (lit("x1", False),)))
    assert sat.satisfiable()
    unsat = R.CnfInstance(("x1",), ((lit("x1"),), (lit("x1", False),)))
    assert not unsat.satisfiable()


def test_qbf_quantifier_order():
    # x <-> y: forall x exists y holds, exists x forall y does not
    q = R.QbfInstance(("x",), ("y",), ((lit("x"), lit("y", False)), (lit("x", False), lit("y"))))
    assert q.forall_exists()
    assert not q.exists_forall()


def test_eval_snsat_levels():
    inst = R.SnsatInstance((
        R.Level(("x1",), (), ((lit("x1"),),)),
        R.Level(("x2",), (), ((lit("z1", False), lit("x2")), (lit("x2", False),))),
    ))
    v = R.eval_snsat(inst)
    assert v.z == {"z1": True, "z2": False}
    assert v.x == {"x1": True, "x2": False}


def test_snsat_scope_checked():
    with pytest.raises(R.InstanceError):
        R.SnsatInstance((R.Level(("x1",), (), ((lit("z1"),),)),))
    with pytest.raises(R.InstanceError):
        R.SnsatInstance((R.Level(("x1",), (), ()), R.Level(("x1",), (), ())))


def test_complementary_clause_rejected():
    inst = R.CnfInstance(("x1", "x2"), ((lit("x1"), lit("x1", False), lit("x2")),))
    with pytest.raises(R.InstanceError):
        R.gen_3sat_ats(inst)


def test_empty_pool_rejected():
    with pytest.raises(R.InstanceError):
        R.random_snsat(random.Random(0), 1, 0, 0, 2)


def test_3sat_state_count_and_answer():
    rng = random.Random(5)
    for _ in range(30):
        inst = R.random_cnf(rng, 3, rng.randint(1, 4))
        ri = R.gen_3sat_ats(inst)
        assert ri.structure.n_states == 8 * len(inst.clauses) + 1
        assert validate(ri.structure) == []
        assert check(ri.structure, ri.formula).holds(ri.query) == ri.expected == inst.satisfiable()


def test_3sat_unsat_instance():
    cl = tuple(tuple(lit(v, (k >> i) & 1 == 1) for i, v in enumerate(("x1", "x2", "x3")))
               for k in range(8))
    inst = R.CnfInstance(("x1", "x2", "x3"), cl)
    ri = R.gen_3sat_ats(inst)
    assert ri.expected is False
    assert not check(ri.structure, ri.formula).holds(ri.query)
    assert not oracle_check(ri.structure, ri.formula).holds(ri.query)


def test_snsat_ats():
    rng = random.Random(6)
    for _ in range(20):
        inst = R.random_snsat(rng, rng.randint(1, 3), 2, 0, 2)
        ri = R.gen_snsat_ats(inst)
        assert check(ri.structure, ri.formula).holds(ri.query) == ri.expected


@pytest.mark.parametrize("form", ["sigma", "pi"])
def test_e2sat_cgsi(form):
    rng = random.Random(7)
    for _ in range(25):
        inst = R.random_qbf(rng, 2, 2, rng.randint(1, 3))
        ri = R.gen_e2sat_cgsi(inst, form)
        want = inst.exists_forall() if form == "sigma" else inst.forall_exists()
        assert ri.expected == want
        assert check(ri.structure, ri.formula).holds(ri.query) == want


def test_snsat2_cgsi_records_valuation():
    rng = random.Random(8)
    for _ in range(15):
        inst = R.random_snsat(rng, 2, 1, 1, 2)
        ri = R.gen_snsat2_cgsi(inst)
        assert "valuation" in ri.provenance
        assert check(ri.structure, ri.formula).holds(ri.query) == ri.expected


def test_atlplus_single_level_true():
    inst = R.SnsatInstance((R.Level(("x1",), ("y1",), ((lit("x1"), lit("y1")),)),))
    ri = R.gen_snsat2_atlplus(inst)
    g = ri.structure
    assert ri.expected is True
    assert ri.query == g.state_id("z1")
    assert check_atlplus(g, ri.formula).holds("z1")


def test_atlplus_random_agree():
    rng = random.Random(9)
    for _ in range(15):
        inst = R.random_snsat(rng, rng.randint(1, 2), 1, 1, 2)
        ri = R.gen_snsat2_atlplus(inst)
        assert check_atlplus(ri.structure, ri.formula).holds(ri.query) == ri.expected


def test_atlplus_start_state_is_not_an_s_state():
    inst = R.SnsatInstance((R.Level((), ("y1",), ((lit("y1"),),)),))
    g = R.gen_snsat2_atlplus(inst).structure
    for s in range(g.n_states):
        assert ("s" in g.labels[s]) == R._is_s(g.states[s])
    assert "start" in g.states


def test_expressiveness_family():
    phi = R.release_formula()
    disj = parse("<<A1>> G (a | b) | <<A1>> ((a | b) U b)", "atlorig")
    for i in range(1, 5):
        g, s, t = R.gen_expressiveness_family(i)
        assert g.labels[s] == g.labels[t] == {"a"}
        r = check(g, phi)
        assert not r.holds(s)
        assert r.holds(t)
        assert check(g, disj).holds(t) != r.holds(t)
    with pytest.raises(ValueError):
        R.gen_expressiveness_family(0)

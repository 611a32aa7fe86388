import pytest

from atlcheck.cpre import CpreTable, cpre, cpre_witness
from atlcheck.gamestruct import next_restricted, joint_moves
from atlcheck.sampling import KINDS, coalitions, random_structure, rng_for


def test_cgs_nd_single_agent_cannot_force_p(cgs_nd):
    S = ["l1", "l2"]
    assert cgs_nd.state_id("l0") not in cpre(cgs_nd, ["A1"], S)
    assert cgs_nd.state_id("l0") not in cpre(cgs_nd, ["A2"], ["l1p", "l2p"])
    # leaves loop, so they force their own label
    assert cpre(cgs_nd, ["A1"], S) == cgs_nd.state_set(S)


def test_cgs_nd_grand_coalition_witness(cgs_nd):
    w = cpre_witness(cgs_nd, ["A1", "A2"], ["l1p"])
    assert w[cgs_nd.state_id("l0")] == (0, 1)


def test_ats_nd_grand_coalition_witness(ats_nd):
    w = cpre_witness(ats_nd, ["A1", "A2"], ["l1"])
    l0 = ats_nd.state_id("l0")
    assert w[l0] == (0, 0)
    first = [sorted(ats_nd.states[x] for x in ats_nd.choices[l0][a][w[l0][a]]) for a in range(2)]
    assert first == [["l1", "l1p"], ["l1", "l2p"]]


def test_empty_coalition_is_universal(cgs_nd):
    assert cpre(cgs_nd, [], ["l1", "l1p", "l2p", "l2"]) == cgs_nd.state_set(["l0", "l1", "l1p", "l2p", "l2"])
    assert cgs_nd.state_id("l0") not in cpre(cgs_nd, [], ["l1", "l1p", "l2p"])


def test_ats_unoffered_state_does_not_block():
    from atlcheck.gamestruct import Ats
    # A offers {b, c}; B's choices never include c, so A's set still forces b
    ch = [[[frozenset({1, 2})], [frozenset({1})]], [[frozenset({1})], [frozenset({1})]],
          [[frozenset({2})], [frozenset({2})]]]
    g = Ats(["A", "B"], ["a", "b", "c"], [], [set()] * 3, ch)
    assert 0 in cpre(g, ["A"], ["b"])


def _brute(g, A, S):
    A = g.coalition(A)
    out = set()
    for s in range(g.n_states):
        for m in joint_moves(g, s, A):
            if next_restricted(g, s, A, m) <= S:
                out.add(s)
                break
    return out


@pytest.mark.parametrize("kind", KINDS)
def test_matches_definition(kind):
    for i in range(60):
        rng = rng_for(11, "cpre", kind, i)
        g = random_structure(rng, kind)
        S = frozenset(s for s in range(g.n_states) if rng.random() < 0.5)
        for A in coalitions(g):
            assert cpre(g, A, S) == _brute(g, A, S)
            T = CpreTable.get(g, g.coalition(A))
            mask = sum(1 << s for s in S)
            assert T.cpre_mask(mask) == sum(1 << s for s in _brute(g, A, S))


@pytest.mark.parametrize("kind", KINDS)
def test_monotone_in_set_and_coalition(kind):
    for i in range(40):
        rng = rng_for(12, "mono", kind, i)
        g = random_structure(rng, kind)
        S = frozenset(s for s in range(g.n_states) if rng.random() < 0.5)
        S2 = S | {rng.randrange(g.n_states)}
        for A in coalitions(g):
            assert cpre(g, A, S) <= cpre(g, A, S2)
            assert cpre(g, A, S) <= cpre(g, g.agents, S)


def test_witness_moves_really_force(cgs_nd):
    for A in (["A1"], ["A2"], ["A1", "A2"]):
        S = cgs_nd.state_set(["l1", "l1p"])
        for s, m in cpre_witness(cgs_nd, A, S).items():
            assert next_restricted(cgs_nd, s, cgs_nd.coalition(A), m) <= S

from fractions import Fraction

import pytest

from dpcst import node as nd
from dpcst.node import (
    CS,
    INF,
    SE,
    SN,
    Accept,
    Connect,
    Deliver,
    EpsilonComputed,
    Initiate,
    Merge,
    ProtocolError,
    Reject,
    Report,
    RoundStarted,
    SpontaneousWakeup,
    Status,
    Test,
    compute_epsilon_edge,
    initialize,
    transition,
)

F = Fraction


def mk(node_id, is_root, prize, weights):
    return initialize(node_id, is_root, F(prize), {e: F(w) for e, w in weights.items()})


def sends(emits):
    return nd.sends(emits)


def acts(emits):
    return nd.actions(emits)


def test_initialize_root():
    st = mk(1, True, 5, {(1, 2): 3})
    assert st.cs == CS.INACTIVE
    assert st.root_flag and not st.prize_flag
    assert st.se[(1, 2)] == SE.BASIC and st.epm[(1, 2)] is False
    assert st.d_v == 0 and st.comp_w == 0 and st.d_h == 0


def test_initialize_non_root():
    st = mk(2, False, 5, {(1, 2): 3, (2, 3): 1})
    assert st.cs == CS.SLEEPING
    assert st.prize_flag and not st.root_flag
    assert all(se == SE.BASIC for se in st.se.values())
    assert st.received_ts == INF


def test_epsilon_five_cases():
    # active/active halves the residual
    assert compute_epsilon_edge(CS.ACTIVE, CS.ACTIVE, SE.BASIC, F(10), F(0), F(0), F(0)) == 5
    # active/inactive takes it whole
    assert compute_epsilon_edge(CS.ACTIVE, CS.INACTIVE, SE.BASIC, F(10), F(2), F(3), F(2)) == 5
    # active/sleeping: own component's highest deficit stands in
    assert compute_epsilon_edge(CS.ACTIVE, CS.SLEEPING, SE.BASIC, F(12), F(7), None, F(7)) == -1
    # inactive/sleeping
    assert compute_epsilon_edge(CS.INACTIVE, CS.SLEEPING, SE.BASIC, F(21), F(2), None, F(7)) == 12
    # inactive/inactive: invisible unless the edge is marked refind
    assert compute_epsilon_edge(CS.INACTIVE, CS.INACTIVE, SE.BASIC, F(5), F(1), F(1), F(1)) == INF
    assert compute_epsilon_edge(CS.INACTIVE, CS.INACTIVE, SE.REFIND, F(5), F(1), F(1), F(1)) == 3


def test_epsilon_rejects_impossible_observations():
    with pytest.raises(ProtocolError):
        compute_epsilon_edge(CS.INACTIVE, CS.ACTIVE, SE.BASIC, F(5), F(0), F(0), F(0))
    with pytest.raises(ProtocolError):
        compute_epsilon_edge(CS.SLEEPING, CS.ACTIVE, SE.BASIC, F(5), F(0), F(0), F(0))


def test_root_wakeup_starts_round_and_tests():
    st = mk(1, True, 5, {(1, 2): 3, (1, 3): 4})
    st2, emits = transition(st, SpontaneousWakeup())
    assert any(isinstance(a, RoundStarted) for a in acts(emits))
    out = sends(emits)
    assert [(e, type(m).__name__) for e, m in out] == [((1, 2), "Test"), ((1, 3), "Test")]
    assert st2.test_count == 2 and st2.sn == SN.FIND
    assert st.test_count == 0  # input untouched


def test_transition_is_pure():
    st = mk(1, True, 5, {(1, 2): 3})
    a1 = transition(st, SpontaneousWakeup())
    a2 = transition(st, SpontaneousWakeup())
    assert a1 == a2


def test_initiate_forwards_and_counts():
    st = mk(2, False, 4, {(1, 2): 3, (2, 3): 5, (2, 4): 6})
    st.cs = CS.INACTIVE
    st.se[(1, 2)] = SE.BRANCH
    st.se[(2, 3)] = SE.BRANCH
    st2, emits = transition(st, Deliver((1, 2), Initiate(9, SN.FIND), 1))
    out = sends(emits)
    assert ((2, 3), Initiate(9, SN.FIND)) in out
    assert st2.find_count == 1 and st2.in_branch == (1, 2) and st2.lc == 9
    assert ((2, 4), Test(9)) in out
    assert st2.test_count == 1


def test_initiate_on_non_branch_edge_asserts():
    st = mk(2, False, 4, {(1, 2): 3})
    with pytest.raises(ProtocolError):
        transition(st, Deliver((1, 2), Initiate(9, SN.FIND), 1))


def test_leaf_with_all_edges_rejected_reports_immediately():
    st = mk(2, False, 4, {(1, 2): 3, (2, 3): 5})
    st.cs = CS.INACTIVE
    st.se[(1, 2)] = SE.BRANCH
    st.se[(2, 3)] = SE.REJECTED
    st2, emits = transition(st, Deliver((1, 2), Initiate(9, SN.FIND), 1))
    assert st2.test_count == 0
    reports = [m for _, m in sends(emits) if isinstance(m, Report)]
    assert len(reports) == 1 and reports[0].best_epsilon == INF


def test_test_same_component_rejects():
    st = mk(2, False, 4, {(1, 2): 3})
    st.lc = 9
    _, emits = transition(st, Deliver((1, 2), Test(9), 1))
    assert sends(emits) == [((1, 2), Reject())]


def test_test_other_component_reports_status():
    st = mk(2, False, 4, {(1, 2): 3})
    st.cs = CS.INACTIVE
    st.d_v = F(7)
    _, emits = transition(st, Deliver((1, 2), Test(9), 1))
    assert sends(emits) == [((1, 2), Status(CS.INACTIVE, F(7)))]


def _mid_round(st):
    st.sn = SN.FIND
    st.best_epsilon = INF
    st.best_edge = None
    return st


def test_status_fold_strict_less_keeps_smaller_edge_on_tie():
    st = mk(2, False, 4, {(1, 2): 8, (2, 3): 8, (2, 4): 8})
    st.cs = CS.ACTIVE
    st.lc = 2
    _mid_round(st)
    st.test_count = 3
    st1, _ = transition(st, Deliver((2, 4), Status(CS.ACTIVE, F(2)), 1))
    assert st1.best_epsilon == 3 and st1.best_edge == (2, 4)
    st2, _ = transition(st1, Deliver((2, 3), Status(CS.ACTIVE, F(2)), 2))
    assert st2.best_edge == (2, 3)  # same epsilon, smaller edge wins
    st3, _ = transition(st2, Deliver((1, 2), Status(CS.ACTIVE, F(4)), 3))
    assert st3.best_epsilon == 2 and st3.best_edge == (1, 2)


def test_reject_marks_edge_and_clears_pending():
    st = mk(2, False, 4, {(1, 2): 3, (2, 3): 5})
    st.cs = CS.INACTIVE
    st.sn = SN.FIND
    st.test_count = 2
    st.proceed_flag = True
    st.proceed_in_edge = (1, 2)
    st.received_ts = 5
    st2, emits = transition(st, Deliver((1, 2), Reject(), 9))
    assert st2.se[(1, 2)] == SE.REJECTED
    assert not st2.proceed_flag and st2.proceed_in_edge is None
    assert st2.received_ts == INF
    assert sends(emits) == []  # one test still outstanding


def test_report_aggregates_min_prize_and_dh():
    st = mk(2, False, 4, {(1, 2): 3, (2, 3): 5})
    st.cs = CS.ACTIVE
    st.se[(2, 3)] = SE.BRANCH
    st.in_branch = (1, 2)
    st.se[(1, 2)] = SE.BRANCH
    _mid_round(st)
    st.find_count = 1
    st.test_count = 0
    st.best_epsilon = F(3)
    st.best_edge = (1, 2)
    st.tp = F(0)
    rep = Report(F(5), F(9), F(4), False, INF)
    st2, emits = transition(st, Deliver((2, 3), rep, 7))
    out = sends(emits)
    assert st2.best_epsilon == 3  # own candidate smaller than child's
    assert st2.d_h == 9
    up = [m for e, m in out if isinstance(m, Report)]
    assert len(up) == 1
    assert up[0].tp == F(4) + st.prize
    assert up[0].d_h == 9


def test_connect_wakes_sleeping_and_accepts_worked_example():
    # payload from the worked merge: Connect(2, 14, 7, 7) on a weight-12 edge
    st = mk(1, False, 10, {(1, 2): 12})
    st2, emits = transition(st, Deliver((1, 2), Connect(2, F(14), F(7), F(7)), 3))
    accepts = [m for _, m in sends(emits) if isinstance(m, Accept)]
    assert len(accepts) == 1
    acc = accepts[0]
    assert acc.leader_flag is False  # 1 < 2, the connect sender leads
    assert acc.total_w == 19
    assert acc.d_h == 6
    assert st2.d_v == 6 and st2.comp_w == 19 and st2.cs == CS.ACTIVE
    assert st2.se[(1, 2)] == SE.BRANCH


def test_connect_refused_by_cheap_sleeping_node():
    st = mk(1, False, 2, {(1, 2): 12})  # prize 2 < any growth headroom
    st2, emits = transition(st, Deliver((1, 2), Connect(2, F(14), F(7), F(7)), 3))
    assert [type(m).__name__ for _, m in sends(emits)] == ["RefindEpsilon"]
    assert st2.cs == CS.INACTIVE and st2.labelled_flag
    assert st2.d_v == 2  # deficit settles at the prize
    assert st2.d_h == 2


def test_connect_while_active_asserts():
    st = mk(1, False, 10, {(1, 2): 12})
    st.cs = CS.ACTIVE
    with pytest.raises(ProtocolError):
        transition(st, Deliver((1, 2), Connect(2, F(14), F(7), F(7)), 3))


def test_merge_routed_by_frontier_emits_connect():
    st = mk(2, False, 12, {(1, 2): 12, (2, 5): 14})
    st.cs = CS.ACTIVE
    st.se[(2, 5)] = SE.BRANCH
    st.comp_w = F(14)
    st.d_v = F(7)
    st.best_edge = (1, 2)
    st.best_epsilon = F(-1)
    _, emits = transition(st, Deliver((2, 5), Merge(F(-1), F(7)), 4))
    assert sends(emits) == [((1, 2), Connect(2, F(14), F(7), F(7)))]


def test_accept_on_unexpected_edge_asserts():
    st = mk(2, False, 12, {(1, 2): 12, (2, 5): 14})
    st.best_edge = (2, 5)
    with pytest.raises(ProtocolError):
        transition(st, Deliver((1, 2), Accept(True, False, F(1), F(1)), 4))


def test_update_info_deactivation_flood():
    st = mk(2, False, 12, {(1, 2): 12, (2, 5): 14})
    st.cs = CS.ACTIVE
    st.se[(2, 5)] = SE.BRANCH
    st.se[(1, 2)] = SE.BRANCH
    st.d_v = F(7)
    msg = nd.UpdateInfo(F(3), False, True, F(30), F(10))
    st2, emits = transition(st, Deliver((2, 5), msg, 4))
    assert st2.cs == CS.INACTIVE and st2.labelled_flag
    assert st2.d_v == 10 and st2.comp_w == 30 and st2.d_h == 10
    assert ((1, 2), msg) in sends(emits)


def test_update_info_root_flood_sets_steiner_membership():
    st = mk(2, False, 12, {(1, 2): 12})
    st.cs = CS.ACTIVE
    msg = nd.UpdateInfo(F(3), True, False, F(30), F(10))
    st2, _ = transition(st, Deliver((1, 2), msg, 4))
    assert st2.cs == CS.INACTIVE and not st2.prize_flag and st2.root_flag


def test_refind_marks_and_relays():
    st = mk(2, False, 12, {(1, 2): 12, (2, 5): 14})
    st.se[(2, 5)] = SE.BRANCH
    st.in_branch = (2, 5)
    st2, emits = transition(st, Deliver((1, 2), nd.RefindEpsilon(), 4))
    assert st2.se[(1, 2)] == SE.REFIND
    assert sends(emits) == [((2, 5), nd.RefindEpsilon())]


def test_refind_at_leader_restarts_round():
    st = mk(2, False, 12, {(1, 2): 12})
    st.cs = CS.ACTIVE
    st.in_branch = None
    _, emits = transition(st, Deliver((1, 2), nd.RefindEpsilon(), 4))
    assert any(isinstance(a, RoundStarted) for a in acts(emits))


def test_proceed_wakes_sleeping_node():
    st = mk(4, False, 26, {(3, 4): 40})
    st2, emits = transition(st, Deliver((3, 4), nd.Proceed(F(15)), 11))
    assert st2.cs == CS.ACTIVE
    assert st2.d_v == 15 and st2.comp_w == 15 and st2.d_h == 15
    assert st2.proceed_flag and st2.proceed_in_edge == (3, 4)
    assert st2.received_ts == 11
    assert any(isinstance(a, RoundStarted) for a in acts(emits))


def test_proceed_pokes_inactive_leader():
    st = mk(3, False, 15, {(3, 9): 21, (3, 4): 40})
    st.cs = CS.INACTIVE
    st.in_branch = None
    st2, emits = transition(st, Deliver((3, 9), nd.Proceed(F(7)), 11))
    assert st2.proceed_flag and st2.received_ts == 11
    assert any(isinstance(a, RoundStarted) for a in acts(emits))


def test_outside_back_at_leader_restarts_round():
    st = mk(1, True, 5, {(1, 2): 3})
    st.cs = CS.INACTIVE
    _, emits = transition(st, Deliver((1, 2), nd.Back(), 4))
    assert any(isinstance(a, RoundStarted) for a in acts(emits))


def test_outside_back_ignores_stale_pointer_and_recomputes():
    # an answer to a proceed sent over (1, 2) must reach the leader even if a
    # round-stale back_edge pointer is still set
    st = mk(2, False, 5, {(1, 2): 3, (2, 3): 3})
    st.cs = CS.INACTIVE
    st.se[(2, 3)] = SE.BRANCH
    st.back_edge = (2, 3)
    st.in_branch = None  # this node led the last round
    _, emits = transition(st, Deliver((1, 2), nd.Back(), 4))
    assert any(isinstance(a, RoundStarted) for a in acts(emits))


def test_outside_back_relays_toward_leader():
    st = mk(2, False, 5, {(1, 2): 3, (2, 3): 3})
    st.cs = CS.INACTIVE
    st.se[(2, 3)] = SE.BRANCH
    st.in_branch = (2, 3)
    _, emits = transition(st, Deliver((1, 2), nd.Back(), 4))
    assert sends(emits) == [((2, 3), nd.Back())]


def test_routed_back_follows_pointer_once():
    st = mk(2, False, 5, {(1, 2): 3, (2, 3): 3})
    st.cs = CS.INACTIVE
    st.se[(1, 2)] = SE.BRANCH
    st.se[(2, 3)] = SE.BRANCH
    st.in_branch = (1, 2)
    st.back_edge = (2, 3)
    st2, emits = transition(st, Deliver((1, 2), nd.Back(), 4))
    assert sends(emits) == [((2, 3), nd.Back())]
    assert st2.back_edge is None


def test_routed_back_exits_at_the_pending_holder():
    st = mk(2, False, 5, {(1, 2): 3, (2, 3): 3})
    st.cs = CS.INACTIVE
    st.se[(2, 3)] = SE.BRANCH
    st.in_branch = (2, 3)
    st.proceed_flag = True
    st.proceed_in_edge = (1, 2)
    st.received_ts = 9
    st2, emits = transition(st, Deliver((2, 3), nd.Back(), 4))
    assert sends(emits) == [((1, 2), nd.Back())]
    assert not st2.proceed_flag and st2.received_ts == INF


def test_prune_unlabelled_leaf_stays_silent():
    st = mk(2, False, 5, {(1, 2): 3})
    st.root_flag = True
    st.prize_flag = False
    st.se[(1, 2)] = SE.BRANCH
    st.in_branch = (1, 2)
    st2, emits = transition(st, Deliver((1, 2), nd.Prune(), 4))
    assert sends(emits) == []
    assert st2.se[(1, 2)] == SE.BRANCH
    assert st2.prize_flag is False  # stays in the steiner part


def test_prune_labelled_leaf_prunes_itself():
    st = mk(11, False, 3, {(7, 11): 4})
    st.root_flag = True
    st.labelled_flag = True
    st.se[(7, 11)] = SE.BRANCH
    st.in_branch = (7, 11)
    st2, emits = transition(st, Deliver((7, 11), nd.Prune(), 4))
    assert st2.prize_flag is True and st2.root_flag is False
    assert sends(emits) == [((7, 11), nd.BackwardPrune())]
    assert st2.se[(7, 11)] == SE.BASIC


def test_prune_resets_non_root_component_edges():
    st = mk(2, False, 5, {(1, 2): 3, (2, 3): 3, (2, 4): 9})
    st.cs = CS.INACTIVE
    st.se[(2, 3)] = SE.BRANCH
    st.se[(2, 4)] = SE.REJECTED
    st2, emits = transition(st, Deliver((1, 2), nd.Prune(), 4))
    assert ((2, 3), nd.Prune()) in sends(emits)
    assert all(se == SE.BASIC for se in st2.se.values())


def test_backward_prune_cascades_when_children_done():
    st = mk(7, False, 4, {(7, 11): 4, (7, 9): 12})
    st.root_flag = True
    st.labelled_flag = True
    st.se[(7, 11)] = SE.BRANCH
    st.se[(7, 9)] = SE.BRANCH
    st.in_branch = (7, 9)
    st.prune_msg_count = 1
    st2, emits = transition(st, Deliver((7, 11), nd.BackwardPrune(), 4))
    assert st2.prize_flag is True
    assert ((7, 9), nd.BackwardPrune()) in sends(emits)
    assert st2.se[(7, 9)] == SE.BASIC and st2.se[(7, 11)] == SE.BASIC

"""Per-node protocol automaton for the distributed primal-dual PCST solver.

Each node is a pure transition function: (state, event) -> (state', sends,
actions).  All asynchrony lives in the simulator; the automaton never shares
state with other nodes.  Component-level quantities (component weight W,
highest deficit d_h, total prize TP) are replicated into member nodes and kept
consistent by the update flood that follows every merge or deactivation.

Infinity is represented by float("inf"), used only as a sentinel in epsilon
and timestamp fields: it is compared against exact Fractions but never enters
arithmetic.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .instance import Edge, norm_edge

INF = float("inf")


class CS(Enum):
    SLEEPING = "sleeping"
    ACTIVE = "active"
    INACTIVE = "inactive"


class SE(Enum):
    BASIC = "basic"
    BRANCH = "branch"
    REJECTED = "rejected"
    REFIND = "refind"


class SN(Enum):
    FIND = "find"
    FOUND = "found"


class ProtocolError(AssertionError):
    """A state the protocol proves unreachable; reaching it is an implementation bug."""


# ---------------------------------------------------------------------------
# Wire messages


@dataclass(frozen=True)
class Initiate:
    leader: int
    sn: SN


@dataclass(frozen=True)
class Test:
    __test__ = False  # not a pytest class

    leader: int


@dataclass(frozen=True)
class Status:
    cs: CS
    deficit: Fraction


@dataclass(frozen=True)
class Reject:
    pass


@dataclass(frozen=True)
class Report:
    best_epsilon: Fraction | float
    d_h: Fraction
    tp: Fraction
    pf: bool
    ts: int | float


@dataclass(frozen=True)
class Merge:
    epsilon: Fraction
    d_h: Fraction


@dataclass(frozen=True)
class Connect:
    nid: int
    comp_w: Fraction
    deficit: Fraction
    d_h: Fraction


@dataclass(frozen=True)
class Accept:
    leader_flag: bool
    root_flag: bool
    total_w: Fraction
    d_h: Fraction


@dataclass(frozen=True)
class RefindEpsilon:
    pass


@dataclass(frozen=True)
class UpdateInfo:
    epsilon: Fraction
    root_flag: bool
    deactivate_flag: bool
    total_w: Fraction
    d_h: Fraction


@dataclass(frozen=True)
class Proceed:
    d_h: Fraction


@dataclass(frozen=True)
class Back:
    pass


@dataclass(frozen=True)
class Prune:
    pass


@dataclass(frozen=True)
class BackwardPrune:
    pass


Message = (
    Initiate
    | Test
    | Status
    | Reject
    | Report
    | Merge
    | Connect
    | Accept
    | RefindEpsilon
    | UpdateInfo
    | Proceed
    | Back
    | Prune
    | BackwardPrune
)


# ---------------------------------------------------------------------------
# Local events


@dataclass(frozen=True)
class SpontaneousWakeup:
    pass


@dataclass(frozen=True)
class Deliver:
    edge: Edge
    message: Message
    seq: int  # global delivery sequence number; source of received_ts


LocalEvent = SpontaneousWakeup | Deliver


# Actions reported to the harness alongside the state transition.


@dataclass(frozen=True)
class RoundStarted:
    leader: int


@dataclass(frozen=True)
class EpsilonComputed:
    leader: int
    eps1: Fraction | float
    eps2: Fraction | None
    chosen: str  # merge | deactivate | proceed | back | prune


Action = RoundStarted | EpsilonComputed


# ---------------------------------------------------------------------------
# Node state


@dataclass
class NodeState:
    id: int
    is_root: bool
    prize: Fraction
    weights: dict[Edge, Fraction]  # incident edges only; static

    cs: CS = CS.SLEEPING
    se: dict[Edge, SE] = field(default_factory=dict)
    epm: dict[Edge, bool] = field(default_factory=dict)
    d_v: Fraction = Fraction(0)
    comp_w: Fraction = Fraction(0)  # W of own component, replicated
    d_h: Fraction = Fraction(0)
    prize_flag: bool = True
    labelled_flag: bool = False
    root_flag: bool = False
    leader_flag: bool = False
    proceed_flag: bool = False
    proceed_in_edge: Edge | None = None
    in_branch: Edge | None = None
    best_edge: Edge | None = None
    back_edge: Edge | None = None
    best_epsilon: Fraction | float = INF
    lc: int = 0  # leader id of the current round
    sn: SN = SN.FOUND
    tp: Fraction = Fraction(0)
    pf: bool = False
    find_count: int = 0
    test_count: int = 0
    prune_msg_count: int = 0
    received_ts: int | float = INF
    ts: int | float = INF
    prune_seen: bool = False

    def edges(self) -> list[Edge]:
        return sorted(self.weights)

    def branch_edges(self) -> list[Edge]:
        return [e for e in self.edges() if self.se[e] == SE.BRANCH]

    def copy(self) -> "NodeState":
        return dataclasses.replace(
            self, se=dict(self.se), epm=dict(self.epm), weights=self.weights
        )


def initialize(node_id: int, is_root: bool, prize: Fraction, weights: dict[Edge, Fraction]) -> NodeState:
    st = NodeState(id=node_id, is_root=is_root, prize=prize, weights=dict(weights))
    st.se = {e: SE.BASIC for e in st.weights}
    st.epm = {e: False for e in st.weights}
    st.lc = node_id
    if is_root:
        st.cs = CS.INACTIVE
        st.root_flag = True
        st.prize_flag = False
    return st


def compute_epsilon_edge(
    cs_local: CS,
    cs_remote: CS,
    se_local: SE,
    w_e: Fraction,
    d_v: Fraction,
    d_remote: Fraction | None,
    d_h: Fraction,
) -> Fraction | float:
    """Growth-rate headroom of one inter-component edge.

    A sleeping neighbor has no deficit of its own yet; the local component's
    highest deficit d_h stands in for it.  Two inactive components only see
    each other through a refind-marked edge.
    """
    if cs_local == CS.ACTIVE:
        if cs_remote == CS.ACTIVE:
            return (w_e - d_v - d_remote) / 2
        if cs_remote == CS.INACTIVE:
            return w_e - d_v - d_remote
        if cs_remote == CS.SLEEPING:
            return (w_e - d_v - d_h) / 2
    elif cs_local == CS.INACTIVE:
        if cs_remote == CS.SLEEPING:
            return w_e - d_v - d_h
        if cs_remote == CS.INACTIVE:
            if se_local == SE.REFIND:
                return w_e - d_v - d_remote
            return INF
        raise ProtocolError("inactive component observed an active neighbor")
    raise ProtocolError(f"epsilon computed in component state {cs_local}")


Send = tuple[Edge, Message]
Emission = Send | Action  # in true emission order; round tags depend on it


def sends(emissions: list[Emission]) -> list[Send]:
    return [em for em in emissions if isinstance(em, tuple)]


def actions(emissions: list[Emission]) -> list[Action]:
    return [em for em in emissions if not isinstance(em, tuple)]


class _Ctx:
    """Collects sends and actions, in order, while handlers mutate the state copy."""

    def __init__(self, st: NodeState):
        self.st = st
        self.emits: list[Emission] = []

    def send(self, edge: Edge, msg: Message):
        self.emits.append((edge, msg))

    def act(self, action: Action):
        self.emits.append(action)


def transition(state: NodeState, event: LocalEvent) -> tuple[NodeState, list[Emission]]:
    """Apply one event; pure in (state, event)."""
    ctx = _Ctx(state.copy())
    st = ctx.st
    if isinstance(event, SpontaneousWakeup):
        if not st.is_root:
            raise ProtocolError("spontaneous wakeup at a non-root node")
        _proc_initiate(ctx)
        return ctx.st, ctx.emits
    msg = event.message
    e = norm_edge(*event.edge)
    if e not in st.weights:
        raise ProtocolError(f"delivery on unknown edge {e} at node {st.id}")
    handler = _HANDLERS[type(msg)]
    handler(ctx, e, msg, event)
    return ctx.st, ctx.emits


# ---------------------------------------------------------------------------
# Round machinery


def _proc_initiate(ctx: _Ctx):
    st = ctx.st
    st.sn = SN.FIND
    st.find_count = 0
    st.best_epsilon = INF
    st.best_edge = None
    st.lc = st.id
    st.tp = Fraction(0)
    st.pf = False
    st.back_edge = None
    st.ts = INF
    st.in_branch = None
    ctx.act(RoundStarted(st.id))
    for e in st.branch_edges():
        ctx.send(e, Initiate(st.lc, SN.FIND))
        st.find_count += 1
    if st.sn == SN.FIND:
        _proc_test(ctx)
    _proc_report(ctx)


def _on_initiate(ctx: _Ctx, e: Edge, msg: Initiate, event: Deliver):
    st = ctx.st
    if st.se[e] != SE.BRANCH:
        raise ProtocolError(f"initiate on non-branch edge {e} at node {st.id}")
    st.sn = msg.sn
    st.find_count = 0
    st.best_epsilon = INF
    st.best_edge = None
    st.lc = msg.leader
    st.tp = Fraction(0)
    st.pf = False
    st.back_edge = None
    st.ts = INF
    st.in_branch = e
    for e2 in st.branch_edges():
        if e2 != e:
            ctx.send(e2, Initiate(msg.leader, msg.sn))
            st.find_count += 1
    if msg.sn == SN.FIND:
        _proc_test(ctx)
    _proc_report(ctx)


def _proc_test(ctx: _Ctx):
    st = ctx.st
    st.test_count = 0
    for e in st.edges():
        if st.se[e] in (SE.BASIC, SE.REFIND):
            ctx.send(e, Test(st.lc))
            st.test_count += 1


def _on_test(ctx: _Ctx, e: Edge, msg: Test, event: Deliver):
    st = ctx.st
    if st.lc == msg.leader:
        ctx.send(e, Reject())
    else:
        ctx.send(e, Status(st.cs, st.d_v))


def _fold_candidate(st: NodeState, eps, e: Edge):
    # smallest epsilon wins; equal epsilons resolve to the smallest incident
    # edge id, so the fold does not depend on delivery order
    if eps < st.best_epsilon or (
        eps == st.best_epsilon and st.best_edge is not None and e < st.best_edge
    ):
        st.best_epsilon = eps
        st.best_edge = e


def _on_status(ctx: _Ctx, e: Edge, msg: Status, event: Deliver):
    st = ctx.st
    st.test_count -= 1
    eps = compute_epsilon_edge(
        st.cs, msg.cs, st.se[e], st.weights[e], st.d_v, msg.deficit, st.d_h
    )
    _fold_candidate(st, eps, e)
    _proc_report(ctx)


def _on_reject(ctx: _Ctx, e: Edge, msg: Reject, event: Deliver):
    st = ctx.st
    st.test_count -= 1
    st.se[e] = SE.REJECTED
    if st.proceed_in_edge == e:
        _clear_pending(st)
    _proc_report(ctx)


def _clear_pending(st: NodeState):
    st.proceed_in_edge = None
    st.proceed_flag = False
    st.received_ts = INF


def _proc_report(ctx: _Ctx):
    st = ctx.st
    if st.find_count != 0 or st.test_count != 0 or st.sn != SN.FIND:
        return
    st.sn = SN.FOUND
    if st.d_h < st.d_v:
        st.d_h = st.d_v
    if st.cs == CS.ACTIVE:
        st.tp += st.prize
    if st.proceed_flag:
        st.pf = True
        if st.ts > st.received_ts:
            st.ts = st.received_ts
            st.back_edge = None
    if st.in_branch is not None:
        ctx.send(st.in_branch, Report(st.best_epsilon, st.d_h, st.tp, st.pf, st.ts))
    else:
        _decide(ctx)


def _on_report(ctx: _Ctx, e: Edge, msg: Report, event: Deliver):
    st = ctx.st
    st.find_count -= 1
    if msg.pf:
        st.pf = True
        if st.ts > msg.ts:
            st.ts = msg.ts
            st.back_edge = e
    if st.cs == CS.ACTIVE:
        st.tp += msg.tp
    if st.d_h < msg.d_h:
        st.d_h = msg.d_h
    _fold_candidate(st, msg.best_epsilon, e)
    _proc_report(ctx)


def _decide(ctx: _Ctx):
    """Leader action once every initiate and test has been answered."""
    st = ctx.st
    eps1 = st.best_epsilon
    if not st.root_flag and st.cs == CS.ACTIVE:
        eps2 = st.tp - st.comp_w
        if eps1 < eps2:
            ctx.act(EpsilonComputed(st.id, eps1, eps2, "merge"))
            if st.best_edge is None:
                raise ProtocolError("merge decided without a best edge")
            if st.se[st.best_edge] == SE.BRANCH:
                ctx.send(st.best_edge, Merge(eps1, st.d_h))
            else:
                ctx.send(st.best_edge, Connect(st.id, st.comp_w, st.d_v, st.d_h))
        else:
            ctx.act(EpsilonComputed(st.id, eps1, eps2, "deactivate"))
            st.cs = CS.INACTIVE
            st.d_v += eps2
            st.comp_w += eps2
            st.d_h += eps2
            st.labelled_flag = True
            for e in st.branch_edges():
                ctx.send(e, UpdateInfo(eps2, st.root_flag, True, st.comp_w, st.d_h))
            _proc_initiate(ctx)
    elif st.cs == CS.INACTIVE:
        if eps1 == INF:
            if st.ts == INF:
                if st.is_root:
                    ctx.act(EpsilonComputed(st.id, eps1, None, "prune"))
                    for e in st.edges():
                        if st.se[e] == SE.BRANCH or (st.epm[e] and st.se[e] != SE.REJECTED):
                            ctx.send(e, Prune())
                        if st.se[e] == SE.BRANCH:
                            st.prune_msg_count += 1
                else:
                    raise ProtocolError(
                        f"non-root leader {st.id} has no outgoing option and no pending proceed"
                    )
            else:
                ctx.act(EpsilonComputed(st.id, eps1, None, "back"))
                if st.back_edge is not None:
                    # one-shot pointer: a later back must not re-follow it
                    ctx.send(st.back_edge, Back())
                    st.back_edge = None
                elif st.proceed_flag:
                    ctx.send(st.proceed_in_edge, Back())
                    _clear_pending(st)
                else:
                    raise ProtocolError("finite TS with no route for the back")
        else:
            ctx.act(EpsilonComputed(st.id, eps1, None, "proceed"))
            if st.best_edge is None:
                raise ProtocolError("proceed decided without a best edge")
            ctx.send(st.best_edge, Proceed(st.d_h))
            _mark_proceed_edge(st, st.best_edge)
    else:
        raise ProtocolError(f"decide reached in state {st.cs} root_flag={st.root_flag}")


# ---------------------------------------------------------------------------
# Merging


def _on_merge(ctx: _Ctx, e: Edge, msg: Merge, event: Deliver):
    st = ctx.st
    if st.best_edge is None:
        raise ProtocolError("merge routed to a node without a best edge")
    if st.se[st.best_edge] == SE.BRANCH:
        ctx.send(st.best_edge, Merge(msg.epsilon, msg.d_h))
    else:
        ctx.send(st.best_edge, Connect(st.id, st.comp_w, st.d_v, msg.d_h))


def _on_connect(ctx: _Ctx, e: Edge, msg: Connect, event: Deliver):
    st = ctx.st
    if st.cs == CS.SLEEPING:
        st.cs = CS.ACTIVE
        st.d_h = msg.d_h
        st.d_v = msg.d_h
        st.comp_w = msg.d_h
        eps1 = (st.weights[e] - st.d_v - msg.deficit) / 2
        eps2 = st.prize - st.comp_w
        if eps1 < eps2:
            st.leader_flag = st.id > msg.nid
            st.d_h += eps1
            st.d_v += eps1
            st.comp_w += msg.comp_w + 2 * eps1
            st.se[e] = SE.BRANCH
            ctx.send(e, Accept(st.leader_flag, st.root_flag, st.comp_w, st.d_h))
            if st.leader_flag:
                _proc_initiate(ctx)
        else:
            st.cs = CS.INACTIVE
            st.comp_w += eps2
            st.d_v += eps2
            st.d_h = msg.d_h + eps2
            st.labelled_flag = True
            ctx.send(e, RefindEpsilon())
    elif st.cs == CS.INACTIVE:
        if st.root_flag:
            st.leader_flag = True
        else:
            st.cs = CS.ACTIVE
            st.leader_flag = st.id > msg.nid
        eps1 = st.weights[e] - st.d_v - msg.deficit
        st.comp_w += msg.comp_w + eps1
        d_t = msg.d_h + eps1
        if st.d_h < d_t:
            st.d_h = d_t
        for e2 in st.branch_edges():
            if e2 != e:
                ctx.send(e2, UpdateInfo(Fraction(0), st.root_flag, False, st.comp_w, st.d_h))
        st.se[e] = SE.BRANCH
        if st.proceed_in_edge == e:
            _clear_pending(st)
        ctx.send(e, Accept(st.leader_flag, st.root_flag, st.comp_w, st.d_h))
        # In the root component only the root itself restarts the round; it
        # does so on receiving the update flood.  Elsewhere the higher-id
        # endpoint leads.
        if st.leader_flag and (not st.root_flag or st.is_root):
            _proc_initiate(ctx)
    else:
        raise ProtocolError(f"connect received while active at node {st.id}")


def _on_accept(ctx: _Ctx, e: Edge, msg: Accept, event: Deliver):
    st = ctx.st
    if e != st.best_edge:
        raise ProtocolError(f"accept on unexpected edge {e} at node {st.id}")
    st.se[e] = SE.BRANCH
    st.root_flag = msg.root_flag
    st.d_h = msg.d_h
    st.d_v += st.best_epsilon
    st.comp_w = msg.total_w
    if msg.root_flag:
        st.cs = CS.INACTIVE
        st.prize_flag = False
    else:
        st.cs = CS.ACTIVE
    if st.proceed_in_edge == e and st.proceed_flag:
        _clear_pending(st)
    for e2 in st.branch_edges():
        if e2 != e:
            ctx.send(
                e2, UpdateInfo(st.best_epsilon, st.root_flag, False, msg.total_w, st.d_h)
            )
    if not msg.leader_flag:
        _proc_initiate(ctx)


def _on_update_info(ctx: _Ctx, e: Edge, msg: UpdateInfo, event: Deliver):
    st = ctx.st
    if msg.root_flag and msg.deactivate_flag:
        raise ProtocolError("deactivation flood inside the root component")
    if msg.root_flag:
        st.cs = CS.INACTIVE
        st.prize_flag = False
    elif msg.deactivate_flag:
        st.cs = CS.INACTIVE
        st.labelled_flag = True
    else:
        st.cs = CS.ACTIVE
    st.root_flag = msg.root_flag
    st.d_h = msg.d_h
    st.d_v += msg.epsilon
    st.comp_w = msg.total_w
    for e2 in st.branch_edges():
        if e2 != e:
            ctx.send(e2, msg)
    if st.is_root:
        _proc_initiate(ctx)


def _on_refind(ctx: _Ctx, e: Edge, msg: RefindEpsilon, event: Deliver):
    st = ctx.st
    if st.se[e] == SE.BASIC:
        st.se[e] = SE.REFIND
    if st.in_branch is not None:
        ctx.send(st.in_branch, RefindEpsilon())
    else:
        _proc_initiate(ctx)


# ---------------------------------------------------------------------------
# Proceed / back


def _on_proceed(ctx: _Ctx, e: Edge, msg: Proceed, event: Deliver):
    st = ctx.st
    if st.se[e] == SE.BRANCH and st.in_branch == e:
        # Routed down from the leader toward the frontier of the round.
        if st.best_edge is None:
            raise ProtocolError("proceed routed to a node without a best edge")
        ctx.send(st.best_edge, Proceed(msg.d_h))
        _mark_proceed_edge(st, st.best_edge)
    elif st.se[e] == SE.BASIC:
        st.proceed_flag = True
        st.proceed_in_edge = e
        st.received_ts = event.seq
        if st.cs == CS.SLEEPING:
            _wakeup(ctx, msg.d_h)
        elif st.cs == CS.INACTIVE:
            if st.in_branch is not None:
                ctx.send(st.in_branch, Proceed(msg.d_h))
            else:
                _proc_initiate(ctx)
        else:
            raise ProtocolError("proceed delivered to an active component")
    elif st.se[e] == SE.BRANCH:
        if st.in_branch is not None:
            ctx.send(st.in_branch, Proceed(msg.d_h))
        else:
            _proc_initiate(ctx)
    else:
        raise ProtocolError(f"proceed on {st.se[e].value} edge {e}")


def _mark_proceed_edge(st: NodeState, e: Edge):
    # Every sent proceed leaves an EPM mark: the edge may be the only path
    # the prune flood has to whatever forms behind it.  A refused-connect
    # singleton in particular is reachable solely over its refind edge, and
    # anything it later wakes hangs behind that edge too.
    if st.se[e] == SE.REFIND:
        st.se[e] = SE.BASIC
    if st.se[e] == SE.BASIC:
        st.epm[e] = True


def _wakeup(ctx: _Ctx, d_k: Fraction):
    st = ctx.st
    st.cs = CS.ACTIVE
    st.d_v = d_k
    st.comp_w = d_k
    if d_k > st.d_h:
        st.d_h = d_k
    _proc_initiate(ctx)


def _on_back(ctx: _Ctx, e: Edge, msg: Back, event: Deliver):
    st = ctx.st
    if st.se[e] == SE.BRANCH and st.in_branch == e:
        # Routed down from the leader toward the earliest pending proceed.
        if st.back_edge is not None:
            ctx.send(st.back_edge, Back())
            st.back_edge = None
        elif st.proceed_flag:
            ctx.send(st.proceed_in_edge, Back())
            _clear_pending(st)
        else:
            raise ProtocolError(f"routed back at node {st.id} found no pending")
    else:
        # Either the answer to a proceed this component sent out over e, or a
        # child relaying such an answer: the leader must recompute, because
        # other options (sleeping neighbors, refind edges) may remain.
        if st.in_branch is not None:
            ctx.send(st.in_branch, Back())
        else:
            _proc_initiate(ctx)


# ---------------------------------------------------------------------------
# Pruning


def _prune_forward_edges(st: NodeState, exclude: Edge | None) -> list[Edge]:
    out = []
    for e in st.edges():
        if e == exclude:
            continue
        if st.se[e] == SE.BRANCH or (st.epm[e] and st.se[e] != SE.REJECTED):
            out.append(e)
    return out


def _prunable(st: NodeState, via: Edge) -> bool:
    return (
        st.labelled_flag
        and st.se[via] == SE.BRANCH
        and len(st.branch_edges()) == 1
    )


def _prune_self(ctx: _Ctx, via: Edge):
    st = ctx.st
    st.prize_flag = True
    st.root_flag = False
    st.labelled_flag = False
    for e2 in st.edges():
        if e2 != via and st.epm[e2] and st.se[e2] != SE.REJECTED:
            ctx.send(e2, Prune())
    ctx.send(via, BackwardPrune())
    st.se[via] = SE.BASIC


def _on_prune(ctx: _Ctx, e: Edge, msg: Prune, event: Deliver):
    st = ctx.st
    if st.root_flag:
        # The tree flood reaches every member over its branch edge; a copy
        # arriving sideways (over a wake edge from a dormant component) must
        # not consume that duty, or the real flood stalls on deduplication
        # and a prunable leaf survives.
        if st.se[e] != SE.BRANCH or st.prune_seen:
            return
        st.prune_seen = True
        if _prunable(st, e):
            _prune_self(ctx, e)
        else:
            for e2 in _prune_forward_edges(st, e):
                ctx.send(e2, Prune())
                if st.se[e2] == SE.BRANCH:
                    st.prune_msg_count += 1
    else:
        if st.prune_seen:
            return
        st.prune_seen = True
        for e2 in _prune_forward_edges(st, e):
            ctx.send(e2, Prune())
        for e2 in st.edges():
            if st.se[e2] != SE.BASIC:
                st.se[e2] = SE.BASIC


def _on_backward_prune(ctx: _Ctx, e: Edge, msg: BackwardPrune, event: Deliver):
    st = ctx.st
    st.prune_msg_count -= 1
    st.se[e] = SE.BASIC
    if st.labelled_flag and st.prune_msg_count == 0 and st.in_branch is not None:
        st.prize_flag = True
        st.root_flag = False
        st.labelled_flag = False
        for e2 in st.edges():
            if e2 != st.in_branch and st.epm[e2] and st.se[e2] != SE.REJECTED:
                ctx.send(e2, Prune())
        ctx.send(st.in_branch, BackwardPrune())
        st.se[st.in_branch] = SE.BASIC


_HANDLERS = {
    Initiate: _on_initiate,
    Test: _on_test,
    Status: _on_status,
    Reject: _on_reject,
    Report: _on_report,
    Merge: _on_merge,
    Connect: _on_connect,
    Accept: _on_accept,
    RefindEpsilon: _on_refind,
    UpdateInfo: _on_update_info,
    Proceed: _on_proceed,
    Back: _on_back,
    Prune: _on_prune,
    BackwardPrune: _on_backward_prune,
}

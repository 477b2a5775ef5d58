"""Dual-certificate reconstruction and verification.

The growth phase implicitly grows one dual variable per component snapshot.
Reconstruction replays the trace with an independent shadow of every node's
deficit and component weight, crediting moats exactly when the protocol rules
say they grow: a node woken with initial deficit d carries a moat of mass d
around itself, a merge grows the joining side(s) by the merge epsilon, and a
deactivation grows the component's moat to penalty tightness.  Negative
epsilons subtract with ordinary signed arithmetic.

Divergence between the shadow and the traced state changes means the system
under test and the reconstruction disagree: exit-code-3 territory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import node as nd
from . import sim as sm
from .exact import ExactResult
from .instance import Edge, PcstInstance, Solution, format_rational, make_solution, norm_edge


class ReplayDivergence(RuntimeError):
    """Recomputed state disagrees with the traced state."""


@dataclass
class Moat:
    nodes: frozenset[int]
    y: Fraction


@dataclass
class DualCertificate:
    moats: list[Moat]
    solution: Solution
    deactivated: list[frozenset[int]] = field(default_factory=list)

    def y_of(self, nodes: frozenset[int]) -> Fraction:
        for m in self.moats:
            if m.nodes == nodes:
                return m.y
        return Fraction(0)

    def total(self) -> Fraction:
        return sum((m.y for m in self.moats), Fraction(0))

    def cut_sum(self, e: Edge) -> Fraction:
        u, v = e
        total = Fraction(0)
        for m in self.moats:
            if (u in m.nodes) != (v in m.nodes):
                total += m.y
        return total

    def inside_sum(self, nodes: frozenset[int]) -> Fraction:
        total = Fraction(0)
        for m in self.moats:
            if m.nodes <= nodes:
                total += m.y
        return total


@dataclass
class Report:
    check: str
    status: str  # "pass" | "violation" | "partial"
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status != "violation"

    def to_json_dict(self) -> dict:
        return {"check": self.check, "status": self.status, "witnesses": self.witnesses}


# ---------------------------------------------------------------------------
# Replay


class _Replay:
    def __init__(self, inst: PcstInstance):
        self.inst = inst
        self.parent = {v: v for v in inst.node_ids}
        self.cs = {v: nd.CS.SLEEPING for v in inst.node_ids}
        self.cs[inst.root] = nd.CS.INACTIVE
        self.d = {v: Fraction(0) for v in inst.node_ids}
        self.w = {v: Fraction(0) for v in inst.node_ids}  # by component root
        self.y: dict[frozenset[int], Fraction] = {}
        self.order: list[frozenset[int]] = []
        self.deactivated: list[frozenset[int]] = []
        self.merge_edges: set[Edge] = set()
        # mirror of the system under test, driven by StateChange records
        self.traced_d = {v: Fraction(0) for v in inst.node_ids}
        self.traced_w = {v: Fraction(0) for v in inst.node_ids}
        self.traced_prize = {v: v != inst.root for v in inst.node_ids}

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def members(self, v: int) -> frozenset[int]:
        r = self.find(v)
        return frozenset(u for u in self.inst.node_ids if self.find(u) == r)

    def credit(self, nodes: frozenset[int], eps: Fraction):
        if eps == 0:
            return
        if nodes not in self.y:
            self.y[nodes] = Fraction(0)
            self.order.append(nodes)
        self.y[nodes] += eps

    def grow(self, comp_of: int, eps: Fraction):
        members = self.members(comp_of)
        self.credit(members, eps)
        for u in members:
            self.d[u] += eps
        self.w[self.find(comp_of)] += eps

    def wake(self, v: int, d_k: Fraction):
        self.cs[v] = nd.CS.ACTIVE
        self.d[v] = d_k
        self.w[self.find(v)] = d_k
        self.credit(frozenset([v]), d_k)

    def union(self, u: int, v: int, new_w: Fraction, active: bool):
        ru, rv = self.find(u), self.find(v)
        self.parent[ru] = rv
        self.w[rv] = new_w
        state = nd.CS.ACTIVE if active else nd.CS.INACTIVE
        for x in self.members(v):
            self.cs[x] = state

    def contains_root(self, v: int) -> bool:
        return self.find(v) == self.find(self.inst.root)


def reconstruct_duals(trace: sm.Trace, inst: PcstInstance, solution: Solution | None = None) -> DualCertificate:
    """Replay a growth trace into an explicit dual certificate.

    Credits moats from delivery events, cross-checks its shadow state against
    the traced StateChange stream, and confirms the bookkeeping identities
    (deficit = sum of covering moats, component weight = sum of inner moats)
    at every round boundary.
    """
    rp = _Replay(inst)
    pending_checks: list[tuple[int, int]] = []  # (step, leader)
    step_records: list[sm.Record] = []
    current_step = None

    def flush():
        for rec in step_records:
            if isinstance(rec, sm.StateChange):
                if rec.field == "d_v":
                    rp.traced_d[rec.node] = rec.new
                elif rec.field == "comp_w":
                    rp.traced_w[rec.node] = rec.new
                elif rec.field == "prize_flag":
                    rp.traced_prize[rec.node] = rec.new
        for (step, leader) in pending_checks:
            _check_identities(rp, leader, step)
        pending_checks.clear()
        step_records.clear()

    for rec in trace:
        if current_step is not None and rec.step != current_step:
            flush()
        current_step = rec.step
        step_records.append(rec)
        if isinstance(rec, sm.Delivery):
            _replay_delivery(rp, rec)
        elif isinstance(rec, sm.EpsilonRecord):
            if rec.chosen == "deactivate":
                rp.grow(rec.leader, rec.eps2)
                rp.cs[rec.leader] = nd.CS.INACTIVE
                members = rp.members(rec.leader)
                for u in members:
                    rp.cs[u] = nd.CS.INACTIVE
                rp.deactivated.append(members)
        elif isinstance(rec, sm.RoundBoundary):
            pending_checks.append((rec.step, rec.leader))
    flush()
    for v in inst.node_ids:
        if rp.d[v] != rp.traced_d[v]:
            raise ReplayDivergence(
                f"final deficit of node {v}: traced {rp.traced_d[v]}, replayed {rp.d[v]}"
            )
    # deficit overshoot across an edge between two components that never met
    # is a certificate infeasibility, not a replay mismatch: the cut sum over
    # such an edge equals the deficit sum, so check_edge_packing reports it
    moats = [Moat(nodes, y) for nodes, y in ((s, rp.y[s]) for s in rp.order)]
    if solution is None:
        # Distributed output: prize flags name the steiner part; its tree is
        # the merge edges both of whose endpoints survived pruning.
        steiner = {v for v in inst.node_ids if not rp.traced_prize[v]}
        branch = [e for e in rp.merge_edges if e[0] in steiner and e[1] in steiner]
        solution = make_solution(inst, branch, steiner)
    return DualCertificate(moats, solution, rp.deactivated)


def _check_identities(rp: _Replay, leader: int, step: int):
    """Deficits and component weights must equal their moat sums; the round
    leader's replicas must match the trace exactly."""
    if rp.traced_d[leader] != rp.d[leader]:
        raise ReplayDivergence(
            f"step {step}: leader {leader} deficit traced {rp.traced_d[leader]} "
            f"!= replayed {rp.d[leader]}"
        )
    if rp.cs[leader] != nd.CS.SLEEPING and rp.traced_w[leader] != rp.w[rp.find(leader)]:
        raise ReplayDivergence(
            f"step {step}: leader {leader} component weight traced "
            f"{rp.traced_w[leader]} != replayed {rp.w[rp.find(leader)]}"
        )
    for v in rp.inst.node_ids:
        covering = sum((y for s, y in rp.y.items() if v in s), Fraction(0))
        if rp.d[v] != covering:
            raise ReplayDivergence(
                f"step {step}: node {v} deficit {rp.d[v]} != moat sum {covering}"
            )
    seen = set()
    for v in rp.inst.node_ids:
        r = rp.find(v)
        if r in seen:
            continue
        seen.add(r)
        members = rp.members(v)
        inner = sum((y for s, y in rp.y.items() if s <= members), Fraction(0))
        if rp.w[r] != inner:
            raise ReplayDivergence(
                f"step {step}: component of {v} weight {rp.w[r]} != moat sum {inner}"
            )


def _replay_delivery(rp: _Replay, rec: sm.Delivery):
    msg = rec.message
    sender, receiver = rec.link
    e = norm_edge(sender, receiver)
    w_e = rp.inst.weights[e]
    if isinstance(msg, nd.Proceed):
        if rp.cs[receiver] == nd.CS.SLEEPING:
            rp.wake(receiver, msg.d_h)
    elif isinstance(msg, nd.Connect):
        if msg.deficit != rp.d[sender]:
            raise ReplayDivergence(
                f"connect from {sender} carries deficit {msg.deficit}, replay has {rp.d[sender]}"
            )
        if rp.cs[receiver] == nd.CS.SLEEPING:
            rp.wake(receiver, msg.d_h)
            eps1 = (w_e - rp.d[receiver] - msg.deficit) / 2
            eps2 = rp.inst.prizes[receiver] - rp.w[rp.find(receiver)]
            if eps1 < eps2:
                rp.grow(receiver, eps1)
                rp.grow(sender, eps1)
                new_w = rp.w[rp.find(receiver)] + rp.w[rp.find(sender)]
                rp.union(sender, receiver, new_w, active=not rp.contains_root(receiver))
                rp.merge_edges.add(e)
            else:
                rp.grow(receiver, eps2)
                rp.cs[receiver] = nd.CS.INACTIVE
                rp.deactivated.append(frozenset([receiver]))
        elif rp.cs[receiver] == nd.CS.INACTIVE:
            eps1 = w_e - rp.d[receiver] - msg.deficit
            rp.grow(sender, eps1)
            new_w = rp.w[rp.find(receiver)] + rp.w[rp.find(sender)]
            contains_root = rp.contains_root(receiver)
            rp.union(sender, receiver, new_w, active=not contains_root)
            rp.merge_edges.add(e)
        else:
            raise ReplayDivergence(f"connect delivered to active node {receiver}")


# ---------------------------------------------------------------------------
# Certificate checks


def check_edge_packing(cert: DualCertificate, inst: PcstInstance) -> Report:
    """Moat mass across any edge stays within its weight; branch edges tight."""
    witnesses = []
    for e in sorted(inst.weights):
        s = cert.cut_sum(e)
        if s > inst.weights[e]:
            witnesses.append(
                {"edge": list(e), "sum": format_rational(s), "weight": format_rational(inst.weights[e])}
            )
    for e in sorted(cert.solution.branch_edges):
        s = cert.cut_sum(e)
        if s != inst.weights[e]:
            witnesses.append(
                {
                    "edge": list(e),
                    "sum": format_rational(s),
                    "weight": format_rational(inst.weights[e]),
                    "required": "equality",
                }
            )
    return Report("edge_packing", "violation" if witnesses else "pass", witnesses)


def check_penalty_packing(cert: DualCertificate, inst: PcstInstance) -> Report:
    """Moat mass inside any root-free node set stays within its prizes.

    Exhaustive over all subsets up to 12 nodes; on the laminar support family
    only (reported as partial) beyond that.  Deactivated components that ended
    up penalized must be exactly tight.
    """
    witnesses = []
    others = sorted(v for v in inst.node_ids if v != inst.root)
    exhaustive = len(inst.node_ids) <= 12
    if exhaustive:
        idx = {v: i for i, v in enumerate(others)}
        moat_masks = []
        for m in cert.moats:
            if inst.root in m.nodes:
                if m.y != 0:
                    witnesses.append({"set": sorted(m.nodes), "reason": "root moat with mass"})
                continue
            mask = 0
            for v in m.nodes:
                mask |= 1 << idx[v]
            moat_masks.append((mask, m.y))
        prize_list = [inst.prizes[v] for v in others]
        for u_mask in range(1, 1 << len(others)):
            inner = Fraction(0)
            for mask, y in moat_masks:
                if mask & ~u_mask == 0:
                    inner += y
            cap = Fraction(0)
            for i in range(len(others)):
                if u_mask >> i & 1:
                    cap += prize_list[i]
            if inner > cap:
                witnesses.append(
                    {
                        "set": sorted(others[i] for i in range(len(others)) if u_mask >> i & 1),
                        "sum": format_rational(inner),
                        "prizes": format_rational(cap),
                    }
                )
    else:
        for m in cert.moats:
            if inst.root in m.nodes:
                continue
            inner = cert.inside_sum(m.nodes)
            cap = sum((inst.prizes[v] for v in m.nodes), Fraction(0))
            if inner > cap:
                witnesses.append(
                    {"set": sorted(m.nodes), "sum": format_rational(inner), "prizes": format_rational(cap)}
                )
    for comp in cert.deactivated:
        if comp <= cert.solution.penalty_nodes:
            inner = cert.inside_sum(comp)
            cap = sum((inst.prizes[v] for v in comp), Fraction(0))
            if inner != cap:
                witnesses.append(
                    {
                        "set": sorted(comp),
                        "sum": format_rational(inner),
                        "prizes": format_rational(cap),
                        "required": "equality (deactivated and pruned)",
                    }
                )
    if witnesses:
        return Report("penalty_packing", "violation", witnesses)
    return Report("penalty_packing", "pass" if exhaustive else "partial", [])


def check_ratio(cert: DualCertificate, inst: PcstInstance, exact: ExactResult | None = None) -> Report:
    """objective <= (2 - 1/(n-1)) * dual mass, and dual mass <= optimum."""
    n = inst.n
    if n < 2:
        return Report("ratio", "pass", [])
    factor = Fraction(2) - Fraction(1, n - 1)
    dual = cert.total()
    obj = cert.solution.objective
    witnesses = []
    if obj > factor * dual:
        witnesses.append(
            {
                "objective": format_rational(obj),
                "dual_total": format_rational(dual),
                "factor": format_rational(factor),
            }
        )
    if exact is not None:
        if dual > exact.opt_value:
            witnesses.append(
                {"dual_total": format_rational(dual), "optimum": format_rational(exact.opt_value)}
            )
        if obj > factor * exact.opt_value:
            witnesses.append(
                {
                    "objective": format_rational(obj),
                    "optimum": format_rational(exact.opt_value),
                    "factor": format_rational(factor),
                }
            )
    return Report("ratio", "violation" if witnesses else "pass", witnesses)


def check_bounds(trace: sm.Trace, inst: PcstInstance) -> Report:
    """Message and round counts against their worst-case caps."""
    n, m = inst.n, inst.m
    counts = sm.count_messages(trace)
    witnesses = []
    cap = sm.round_message_bound(n, m)
    for rnd, c in sorted(counts["per_round"].items()):
        if c > cap:
            witnesses.append({"round": rnd, "messages": c, "cap": cap})
    if counts["rounds"] > 9 * n - 7:
        witnesses.append({"rounds": counts["rounds"], "cap": 9 * n - 7})
    # proceed/back caps are on leader decisions, not on per-hop routing
    acts = counts["actions"]
    for kind, cap_k in (("proceed", n - 1), ("back", n - 1)):
        if acts.get(kind, 0) > cap_k:
            witnesses.append({"action": kind, "count": acts[kind], "cap": cap_k})
    by = counts["by_type"]
    for kind, cap_k in (("Prune", 2 * n - 2), ("BackwardPrune", n - 1)):
        if by.get(kind, 0) > cap_k:
            witnesses.append({"type": kind, "count": by[kind], "cap": cap_k})
    if counts["total"] > sm.message_bound(n, m):
        witnesses.append({"total": counts["total"], "cap": sm.message_bound(n, m)})
    for v, c in sorted(counts["prune_receipts"].items()):
        if c > 1:
            witnesses.append({"node": v, "prune_receipts": c, "cap": 1})
    return Report("bounds", "violation" if witnesses else "pass", witnesses)


def verify_trace(
    trace: sm.Trace,
    inst: PcstInstance,
    solution: Solution,
    exact: ExactResult | None = None,
) -> list[Report]:
    cert = reconstruct_duals(trace, inst, solution)
    return [
        check_edge_packing(cert, inst),
        check_penalty_packing(cert, inst),
        check_ratio(cert, inst, exact),
        check_bounds(trace, inst),
    ]

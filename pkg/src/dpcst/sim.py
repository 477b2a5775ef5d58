"""Deterministic discrete-event simulator for the node protocol.

Per-directed-link FIFO queues, two delivery policies, and a total-order trace
of everything that happens.  Messages carry a causal round tag: a handler's
sends inherit the tag of the delivery that triggered them, and starting a
round bumps the tag, so per-round message accounting is exact even while
floods from the previous action are still in flight.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, fields
from fractions import Fraction

from . import node as nd
from .instance import Edge, PcstInstance, Solution, format_rational, make_solution, norm_edge

# growth-phase wire types count against the per-round cap; Prune and
# BackwardPrune have their own totals
GROWTH_TYPES = (
    "Initiate",
    "Test",
    "Status",
    "Reject",
    "Report",
    "Merge",
    "Connect",
    "Accept",
    "RefindEpsilon",
    "UpdateInfo",
    "Proceed",
    "Back",
)


class LivelockError(RuntimeError):
    """Step budget exceeded before quiescence."""


# ---------------------------------------------------------------------------
# Trace records


@dataclass(frozen=True)
class Delivery:
    step: int
    link: tuple[int, int]  # (sender, receiver)
    message: nd.Message
    round_index: int


@dataclass(frozen=True)
class StateChange:
    step: int
    node: int
    field: str
    old: object
    new: object


@dataclass(frozen=True)
class EpsilonRecord:
    step: int
    leader: int
    eps1: Fraction | float
    eps2: Fraction | None
    chosen: str


@dataclass(frozen=True)
class RoundBoundary:
    step: int
    leader: int
    round_index: int


@dataclass(frozen=True)
class PhaseBoundary:
    step: int


Record = Delivery | StateChange | EpsilonRecord | RoundBoundary | PhaseBoundary
Trace = list


def message_bound(n: int, m: int) -> int:
    """Worst-case total message count for an (n, m) instance."""
    return (9 * n - 7) * (6 * n + 2 * m - 4) + 3 * (n - 1)


def round_message_bound(n: int, m: int) -> int:
    return 6 * n + 2 * m - 4


@dataclass
class Schedule:
    policy: str  # "eager" or "seeded"
    seed: int | None = None

    @staticmethod
    def eager() -> "Schedule":
        return Schedule("eager")

    @staticmethod
    def seeded(seed: int) -> "Schedule":
        return Schedule("seeded", seed)


_TRACKED_FIELDS = (
    "cs",
    "d_v",
    "comp_w",
    "d_h",
    "prize_flag",
    "labelled_flag",
    "root_flag",
    "lc",
)


def _plain(x):
    return x.value if isinstance(x, nd.CS) else x


class Simulation:
    """One protocol execution over an instance under a delivery schedule."""

    def __init__(self, inst: PcstInstance, schedule: Schedule | None = None):
        inst.validate()
        self.inst = inst
        self.schedule = schedule or Schedule.eager()
        self.rng = random.Random(self.schedule.seed) if self.schedule.policy == "seeded" else None
        self.nodes: dict[int, nd.NodeState] = {}
        for v in inst.node_ids:
            weights = {norm_edge(v, u): inst.weights[norm_edge(v, u)] for u in inst.neighbors(v)}
            self.nodes[v] = nd.initialize(v, v == inst.root, inst.prizes[v], weights)
        # directed link -> queue of (message, send_seq, round_tag)
        self.queues: dict[tuple[int, int], deque] = {
            (u, v): deque()
            for (a, b) in sorted(inst.weights)
            for (u, v) in ((a, b), (b, a))
        }
        self.links = sorted(self.queues)
        self.trace: Trace = []
        self.step = 0
        self.send_seq = 0
        self.round_index = 0
        self.pruning_started = False
        self.root_wakeup_pending = True
        self.budget = 10 * message_bound(inst.n, inst.m) + 10

    # -- plumbing

    def in_flight(self) -> int:
        return sum(len(q) for q in self.queues.values()) + (1 if self.root_wakeup_pending else 0)

    def _enqueue(self, sender: int, edge: Edge, msg: nd.Message, round_tag: int):
        receiver = edge[0] if edge[1] == sender else edge[1]
        self.queues[(sender, receiver)].append((msg, self.send_seq, round_tag))
        self.send_seq += 1
        if isinstance(msg, nd.Prune) and not self.pruning_started:
            self.pruning_started = True
            self.trace.append(PhaseBoundary(self.step))

    def _apply(self, node_id: int, event, round_tag: int):
        old = self.nodes[node_id]
        new, emissions = nd.transition(old, event)
        self.nodes[node_id] = new
        # Sends inherit the round tag current at their emission point; a round
        # started mid-handler re-tags only what follows it.
        current_tag = round_tag
        for em in emissions:
            if isinstance(em, tuple):
                edge, msg = em
                self._enqueue(node_id, edge, msg, current_tag)
            elif isinstance(em, nd.RoundStarted):
                self.round_index += 1
                current_tag = self.round_index
                self.trace.append(RoundBoundary(self.step, em.leader, self.round_index))
            elif isinstance(em, nd.EpsilonComputed):
                self.trace.append(
                    EpsilonRecord(self.step, em.leader, em.eps1, em.eps2, em.chosen)
                )
                if em.chosen == "prune" and not self.pruning_started:
                    self.pruning_started = True
                    self.trace.append(PhaseBoundary(self.step))
        for f in _TRACKED_FIELDS:
            a, b = getattr(old, f), getattr(new, f)
            if a != b:
                self.trace.append(StateChange(self.step, node_id, f, _plain(a), _plain(b)))

    def deliverable_links(self) -> list[tuple[int, int]]:
        return [l for l in self.links if self.queues[l]]

    def step_once(self):
        """Deliver one message (or the root wakeup) per the schedule.

        Component-update floods (UpdateInfo) and round starts (Initiate)
        preempt other traffic: members must see their component's new state
        before a concurrent probe over a shortcut edge can ask them for it.
        Per-link FIFO is never violated.
        """
        if self.root_wakeup_pending:
            self.root_wakeup_pending = False
            self.step += 1
            self._apply(self.inst.root, nd.SpontaneousWakeup(), self.round_index)
            return
        candidates = self.deliverable_links()
        if not candidates:
            raise RuntimeError("step_once called at quiescence")
        control = [
            l
            for l in candidates
            if any(isinstance(m, (nd.UpdateInfo, nd.Initiate)) for (m, _s, _t) in self.queues[l])
        ]
        pool = control or candidates
        if self.rng is not None:
            link = pool[self.rng.randrange(len(pool))]
        else:
            link = min(pool, key=lambda l: self.queues[l][0][1])
        msg, _seq, tag = self.queues[link].popleft()
        self.step += 1
        self.trace.append(Delivery(self.step, link, msg, tag))
        sender, receiver = link
        self._apply(receiver, nd.Deliver(norm_edge(sender, receiver), msg, self.step), tag)

    def run_to_quiescence(self) -> Trace:
        while self.in_flight():
            if self.step > self.budget:
                raise LivelockError(
                    f"no quiescence after {self.step} deliveries (budget {self.budget})"
                )
            self.step_once()
        return self.trace


def new_simulation(inst: PcstInstance, schedule: Schedule | None = None) -> Simulation:
    return Simulation(inst, schedule)


def run(inst: PcstInstance, schedule: Schedule | None = None) -> Simulation:
    sim = Simulation(inst, schedule)
    sim.run_to_quiescence()
    return sim


# ---------------------------------------------------------------------------
# Post-run extraction and accounting


def extract_solution(sim: Simulation) -> Solution:
    """Read the distributed output: prize flags plus branch marks."""
    steiner = {v for v, st in sim.nodes.items() if not st.prize_flag}
    branch = []
    for e in sim.inst.weights:
        u, v = e
        mu = sim.nodes[u].se[e] == nd.SE.BRANCH
        mv = sim.nodes[v].se[e] == nd.SE.BRANCH
        if mu != mv:
            raise nd.ProtocolError(f"asymmetric branch marks on {e}")
        if mu:
            branch.append(e)
    return make_solution(sim.inst, branch, steiner)


def count_messages(trace: Trace) -> dict:
    """Totals by type, growth-phase counts per round, leader-level action
    counts, and prune receipts per node."""
    by_type: dict[str, int] = {}
    per_round: dict[int, int] = {}
    prune_receipts: dict[int, int] = {}
    actions: dict[str, int] = {}
    for rec in trace:
        if isinstance(rec, Delivery):
            name = type(rec.message).__name__
            by_type[name] = by_type.get(name, 0) + 1
            if name in GROWTH_TYPES:
                per_round[rec.round_index] = per_round.get(rec.round_index, 0) + 1
            if name == "Prune":
                prune_receipts[rec.link[1]] = prune_receipts.get(rec.link[1], 0) + 1
        elif isinstance(rec, EpsilonRecord):
            actions[rec.chosen] = actions.get(rec.chosen, 0) + 1
    rounds = max((r.round_index for r in trace if isinstance(r, RoundBoundary)), default=0)
    return {
        "by_type": by_type,
        "per_round": per_round,
        "rounds": rounds,
        "total": sum(by_type.values()),
        "actions": actions,
        "prune_receipts": prune_receipts,
    }


# ---------------------------------------------------------------------------
# JSON-lines trace serialization


def _to_jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if x == nd.INF and isinstance(x, float):
        return "inf"
    if isinstance(x, nd.CS) or isinstance(x, nd.SN):
        return x.value
    if isinstance(x, tuple):
        return list(x)
    return x


def _message_to_json(msg: nd.Message) -> dict:
    d = {"type": type(msg).__name__}
    for f in fields(msg):
        d[f.name] = _to_jsonable(getattr(msg, f.name))
    return d


_MSG_TYPES = {
    cls.__name__: cls
    for cls in (
        nd.Initiate, nd.Test, nd.Status, nd.Reject, nd.Report, nd.Merge,
        nd.Connect, nd.Accept, nd.RefindEpsilon, nd.UpdateInfo, nd.Proceed,
        nd.Back, nd.Prune, nd.BackwardPrune,
    )
}


def _rational_from_json(x):
    if x == "inf":
        return nd.INF
    if isinstance(x, str):
        if "/" in x:
            n, _, d = x.partition("/")
            return Fraction(int(n), int(d))
        return Fraction(int(x))
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return x


def _message_from_json(d: dict) -> nd.Message:
    cls = _MSG_TYPES[d["type"]]
    kwargs = {}
    for f in fields(cls):
        v = d[f.name]
        if f.name in ("leader", "nid"):
            kwargs[f.name] = v
        elif f.name == "sn":
            kwargs[f.name] = nd.SN(v)
        elif f.name == "cs":
            kwargs[f.name] = nd.CS(v)
        elif f.name in ("pf", "root_flag", "leader_flag", "deactivate_flag"):
            kwargs[f.name] = bool(v)
        elif f.name == "ts":
            kwargs[f.name] = nd.INF if v == "inf" else v
        else:
            kwargs[f.name] = _rational_from_json(v)
    return cls(**kwargs)


def record_to_json(rec: Record) -> dict:
    if isinstance(rec, Delivery):
        return {
            "kind": "delivery",
            "step": rec.step,
            "link": list(rec.link),
            "round": rec.round_index,
            "message": _message_to_json(rec.message),
        }
    if isinstance(rec, StateChange):
        return {
            "kind": "state",
            "step": rec.step,
            "node": rec.node,
            "field": rec.field,
            "old": _to_jsonable(rec.old),
            "new": _to_jsonable(rec.new),
        }
    if isinstance(rec, EpsilonRecord):
        return {
            "kind": "epsilon",
            "step": rec.step,
            "leader": rec.leader,
            "eps1": _to_jsonable(rec.eps1),
            "eps2": _to_jsonable(rec.eps2),
            "chosen": rec.chosen,
        }
    if isinstance(rec, RoundBoundary):
        return {"kind": "round", "step": rec.step, "leader": rec.leader, "round": rec.round_index}
    if isinstance(rec, PhaseBoundary):
        return {"kind": "phase", "step": rec.step}
    raise TypeError(f"unknown record {rec!r}")


def record_from_json(d: dict) -> Record:
    kind = d["kind"]
    if kind == "delivery":
        return Delivery(d["step"], tuple(d["link"]), _message_from_json(d["message"]), d["round"])
    if kind == "state":
        old, new = d["old"], d["new"]
        f = d["field"]
        if f in ("d_v", "comp_w", "d_h"):
            old, new = _rational_from_json(old), _rational_from_json(new)
        return StateChange(d["step"], d["node"], f, old, new)
    if kind == "epsilon":
        eps2 = d["eps2"]
        return EpsilonRecord(
            d["step"],
            d["leader"],
            _rational_from_json(d["eps1"]),
            None if eps2 is None else _rational_from_json(eps2),
            d["chosen"],
        )
    if kind == "round":
        return RoundBoundary(d["step"], d["leader"], d["round"])
    if kind == "phase":
        return PhaseBoundary(d["step"])
    raise ValueError(f"unknown record kind {kind!r}")


def write_trace(trace: Trace, path: str):
    with open(path, "w") as fh:
        for rec in trace:
            fh.write(json.dumps(record_to_json(rec), sort_keys=False) + "\n")


def read_trace(path: str) -> Trace:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(record_from_json(json.loads(line)))
    return out

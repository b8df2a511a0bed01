"""Interval-valued message propagation over a growing active set.

A query starts from an active set holding only the query node and
alternates propagation with expansion.  Arcs outside the active set
contribute vacuous [0, 1] messages, except that a child arc leading
only to childless unobserved territory contributes an exact
uninformative message (that branch sums out of the posterior, so
treating it as unknown would only widen the result for no reason).

Messages are pulled recursively toward the query, so each directed
message is computed once per evaluation.  Every computed vector is
paired with a scale interval bracketing the mass its normalization
discarded; conditioned evaluations (see ``loops``) use those scales to
weight cutset instances.
"""

from __future__ import annotations

import itertools
import sys
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .intervals import (
    ONE,
    ConflictingEvidenceError,
    Interval,
    IntervalVector,
    iv_mul,
    normalize_scaled,
    simplex_dot,
    vacuous,
)
from .network import BeliefNetwork, Evidence, relevant_set

SATISFIED = "satisfied"
SATURATED = "saturated"
BUDGET = "budget"


# -- active set -------------------------------------------------------------


@dataclass(frozen=True)
class ActiveSet:
    """The node and arc subset propagation currently runs over.

    An arc between two included nodes may legitimately be absent; such
    missing arcs are how loop-avoiding strategies keep the working
    graph singly connected.
    """

    nodes: frozenset[str]
    arcs: frozenset[tuple[str, str]]

    @staticmethod
    def initial(query: str) -> "ActiveSet":
        return ActiveSet(frozenset({query}), frozenset())

    def validate(self, net: BeliefNetwork, query: str) -> None:
        if query not in self.nodes:
            raise ValueError("active set must contain the query node")
        net_arcs = set(net.arcs)
        for p, c in self.arcs:
            if (p, c) not in net_arcs:
                raise ValueError(f"arc {(p, c)} not in network")
            if p not in self.nodes or c not in self.nodes:
                raise ValueError(f"arc {(p, c)} endpoint outside active set")
        # Connectivity over included arcs only.
        adj: dict[str, list[str]] = {v: [] for v in self.nodes}
        for p, c in self.arcs:
            adj[p].append(c)
            adj[c].append(p)
        seen = {query}
        stack = [query]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != set(self.nodes):
            raise ValueError("active set is not connected")


def _skeleton_acyclic(nodes: Iterable[str], arcs: Iterable[tuple[str, str]]) -> bool:
    parent = {v: v for v in nodes}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for p, c in arcs:
        rp, rc = find(p), find(c)
        if rp == rc:
            return False
        parent[rp] = rc
    return True


# -- messages and cache -------------------------------------------------------


@dataclass(frozen=True)
class Message:
    kind: str  # "pi" or "lambda"
    arc: tuple[str, str]
    value: IntervalVector
    vacuous: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("pi", "lambda"):
            raise ValueError("message kind must be 'pi' or 'lambda'")
        if self.vacuous and not self.value.is_vacuous():
            raise ValueError("vacuous flag on a non-vacuous value")

    @staticmethod
    def vacuous_message(kind: str, arc: tuple[str, str], n: int) -> "Message":
        return Message(kind, arc, vacuous(n), vacuous=True)


@dataclass
class _CacheEntry:
    value: object
    fp: object
    deps: tuple


class MessageCache:
    """Message store keyed by (kind, arc), with exact change detection."""

    def __init__(self) -> None:
        self.entries: dict = {}

    def update(self, key, value, fp=None, deps=()) -> bool:
        old = self.entries.get(key)
        changed = old is None or old.value != value
        self.entries[key] = _CacheEntry(value, fp, tuple(deps))
        return changed

    def get(self, key):
        entry = self.entries.get(key)
        return None if entry is None else entry.value

    def __len__(self) -> int:
        return len(self.entries)


def cache_update(cache: MessageCache, message: Message) -> bool:
    """Store a message; report whether it differs from the cached value.

    Comparison is exact, so an unchanged message lets the caller stop
    re-propagating along that path when iterating.
    """
    return cache.update((message.kind, message.arc), message.value)


# -- propagation core ---------------------------------------------------------


class _Context:
    """Per-query constants shared by every instance evaluation."""

    def __init__(
        self,
        net: BeliefNetwork,
        active: ActiveSet,
        evidence: Mapping[str, int],
        query: str,
    ):
        self.net = net
        self.active = active
        self.evidence = dict(evidence)
        self.query = query
        self.arcs = set(active.arcs)
        self.ancestral = net.ancestral_closure({query, *self.evidence})

    def node_fingerprint(self, node_id: str):
        net = self.net
        return (
            self.evidence.get(node_id),
            tuple((p, (p, node_id) in self.arcs) for p in net.parents(node_id)),
            tuple((w, (node_id, w) in self.arcs) for w in net.children(node_id)),
        )


class _Run:
    """One pull-based evaluation, optionally under cutset clamps."""

    def __init__(
        self,
        ctx: _Context,
        clamps: Mapping[str, int] | None = None,
        cache: MessageCache | None = None,
    ):
        self.ctx = ctx
        self.clamps = dict(clamps or {})
        self.cache = cache if not self.clamps else None
        self._memo: dict = {}
        self._frames: list[list] = []
        self.visits = 0
        self.touched: set[str] = set()
        needed = 4 * len(ctx.active.nodes) + 500
        if sys.getrecursionlimit() < needed:
            sys.setrecursionlimit(needed)

    # pinned nodes are split: they emit indicator messages downward and a
    # bare indicator likelihood upward, which is what cuts loops.
    def _pinned(self, x: str) -> int | None:
        if x in self.clamps:
            return self.clamps[x]
        return self.ctx.evidence.get(x)

    def pull(self, key, record: bool = True):
        if record and self._frames:
            self._frames[-1].append(key)
        hit = self._memo.get(key)
        if hit is not None:
            return hit[0]
        fp = None
        if self.cache is not None:
            fp = self.ctx.node_fingerprint(key[1])
            entry = self.cache.entries.get(key)
            if entry is not None and entry.fp == fp:
                reusable = True
                for d in entry.deps:
                    self.pull(d, record=False)
                    if self._memo[d][1]:
                        reusable = False
                        break
                if reusable:
                    self._memo[key] = (entry.value, False)
                    return entry.value
        frame: list = []
        self._frames.append(frame)
        value = self._compute(key)
        self._frames.pop()
        changed = True
        if self.cache is not None:
            changed = self.cache.update(key, value, fp, frame)
        self._memo[key] = (value, changed)
        self.visits += 1
        self.touched.add(key[1])
        return value

    def _compute(self, key):
        kind = key[0]
        if kind == "pi_val":
            return self._pi_value(key[1])
        if kind == "lam_val":
            return self._lambda_value(key[1])
        if kind == "pi_msg":
            return self._pi_message(key[1], key[2])
        if kind == "lam_msg":
            return self._lambda_message(key[1], key[2])
        raise AssertionError(key)

    def _parent_inputs(self, x: str):
        """Messages over parent arcs; vacuous where the arc is absent."""
        net = self.ctx.net
        msgs: list[IntervalVector] = []
        scale = ONE
        for p in net.parents(x):
            if (p, x) in self.ctx.arcs:
                vec, s = self.pull(("pi_msg", p, x))
                msgs.append(vec)
                scale = iv_mul(scale, s)
            else:
                msgs.append(vacuous(net.state_count(p)))
        return msgs, scale

    def _joint_weights(self, msgs: Sequence[IntervalVector]) -> IntervalVector:
        entries = []
        for config in itertools.product(*[range(len(m)) for m in msgs]):
            e = ONE
            for m, s in zip(msgs, config):
                e = iv_mul(e, m[s])
            entries.append(e)
        return IntervalVector(entries)

    def _pi_value(self, x: str):
        net = self.ctx.net
        node = net.node(x)
        msgs, scale = self._parent_inputs(x)
        weights = self._joint_weights(msgs)
        out = []
        for i in range(len(node.states)):
            column = IntervalVector(Interval.point(row[i]) for row in node.cpt)
            out.append(simplex_dot(column, weights))
        vec, z = normalize_scaled(IntervalVector(out))
        return vec, iv_mul(scale, z)

    def _lambda_value(self, x: str):
        net = self.ctx.net
        n = net.state_count(x)
        pinned = self._pinned(x)
        if pinned is not None:
            return IntervalVector.indicator(n, pinned), ONE
        prod = IntervalVector.ones(n)
        scale = ONE
        for w in net.children(x):
            if (x, w) in self.ctx.arcs:
                vec, s = self.pull(("lam_msg", w, x))
                prod = prod.product(vec)
                scale = iv_mul(scale, s)
            elif w in self.ctx.ancestral:
                prod = prod.product(vacuous(n))
            # Otherwise the branch under w holds no evidence and no query:
            # its true likelihood message is exactly flat, so it drops out.
        vec, z = normalize_scaled(prod)
        return vec, iv_mul(scale, z)

    def _pi_message(self, u: str, x: str):
        net = self.ctx.net
        pinned = self._pinned(u)
        if pinned is not None:
            return IntervalVector.indicator(net.state_count(u), pinned), ONE
        prod, scale = self.pull(("pi_val", u))
        for w in net.children(u):
            if w == x:
                continue
            if (u, w) in self.ctx.arcs:
                vec, s = self.pull(("lam_msg", w, u))
                prod = prod.product(vec)
                scale = iv_mul(scale, s)
            elif w in self.ctx.ancestral:
                prod = prod.product(vacuous(len(prod)))
        vec, z = normalize_scaled(prod)
        return vec, iv_mul(scale, z)

    def _lambda_message(self, x: str, u: str):
        net = self.ctx.net
        node = net.node(x)
        lam, scale = self.pull(("lam_val", x))
        j = node.parents.index(u)
        others = [p for p in node.parents if p != u]
        msgs: list[IntervalVector] = []
        for p in others:
            if (p, x) in self.ctx.arcs:
                vec, s = self.pull(("pi_msg", p, x))
                msgs.append(vec)
                scale = iv_mul(scale, s)
            else:
                msgs.append(vacuous(net.state_count(p)))
        weights = self._joint_weights(msgs)
        other_ranges = [range(net.state_count(p)) for p in others]
        out = []
        for y in range(net.state_count(u)):
            a_entries = []
            for oc in itertools.product(*other_ranges):
                config = list(oc[:j]) + [y] + list(oc[j:])
                row = net.cpt_row(x, config)
                column = IntervalVector(Interval.point(v) for v in row)
                a_entries.append(simplex_dot(column, lam))
            out.append(simplex_dot(IntervalVector(a_entries), weights))
        vec, z = normalize_scaled(IntervalVector(out))
        return vec, iv_mul(scale, z)

    def belief(self, x: str):
        """Belief bounds at x plus the evidence-mass interval of this run."""
        net = self.ctx.net
        if x in self.clamps:
            raise ValueError("belief of a clamped node is fixed by construction")
        n = net.state_count(x)
        if x in self.ctx.evidence:
            k = self.ctx.evidence[x]
            pvec, ps = self.pull(("pi_val", x))
            if pvec[k].hi <= 0.0:
                raise ConflictingEvidenceError(
                    f"observed state {k} of {x!r} has zero probability"
                )
            return IntervalVector.indicator(n, k), iv_mul(ps, pvec[k])
        lam, ls = self.pull(("lam_val", x))
        pvec, ps = self.pull(("pi_val", x))
        vec, _ = normalize_scaled(lam.product(pvec))
        mass = iv_mul(iv_mul(ls, ps), simplex_dot(lam, pvec))
        return vec, mass

    def component_mass(self, x: str) -> Interval:
        """Evidence mass of the piece of the working graph holding x.

        Equals the belief mass at x; in a singly connected piece the
        same total comes out at whichever member node it is read.
        """
        if x in self.clamps or x in self.ctx.evidence:
            raise ValueError("mass must be read at an unpinned node")
        lam, ls = self.pull(("lam_val", x))
        pvec, ps = self.pull(("pi_val", x))
        return iv_mul(iv_mul(ls, ps), simplex_dot(lam, pvec))


# -- single-step kernels (exposed for direct use and testing) -----------------


def pi_hat(
    net: BeliefNetwork, node: str, parent_messages: Mapping[str, IntervalVector]
) -> IntervalVector:
    """Prior-side bounds for a node given messages from its parents.

    Missing parents default to vacuous messages.  Result is normalized.
    """
    active = ActiveSet(
        frozenset({node, *parent_messages}),
        frozenset((p, node) for p in parent_messages),
    )
    ctx = _Context(net, active, {}, node)
    run = _Run(ctx)
    for p, vec in parent_messages.items():
        run._memo[("pi_msg", p, node)] = ((vec, ONE), False)
    vec, _ = run._pi_value(node)
    return vec


def lambda_hat(
    net: BeliefNetwork,
    node: str,
    child_messages: Mapping[str, IntervalVector],
    observed_state: int | None = None,
) -> IntervalVector:
    """Likelihood-side bounds: normalized product of child messages.

    An observed node is a point indicator regardless of its children.
    """
    n = net.state_count(node)
    if observed_state is not None:
        return IntervalVector.indicator(n, observed_state)
    prod = IntervalVector.ones(n)
    for vec in child_messages.values():
        prod = prod.product(vec)
    vec, _ = normalize_scaled(prod)
    return vec


def bel_hat(pi_vec: IntervalVector, lam_vec: IntervalVector) -> IntervalVector:
    """Normalized entrywise product of the two directional summaries."""
    vec, _ = normalize_scaled(lam_vec.product(pi_vec))
    return vec


def pi_msg(
    net: BeliefNetwork,
    node: str,
    child: str,
    pi_vec: IntervalVector,
    sibling_messages: Mapping[str, IntervalVector],
    observed_state: int | None = None,
) -> Message:
    """Message a node sends to one child: its prior side times the
    likelihood messages from every other child."""
    n = net.state_count(node)
    if observed_state is not None:
        return Message("pi", (node, child), IntervalVector.indicator(n, observed_state))
    prod = pi_vec
    for w, vec in sibling_messages.items():
        if w == child:
            continue
        prod = prod.product(vec)
    vec, _ = normalize_scaled(prod)
    return Message("pi", (node, child), vec)


def lambda_msg(
    net: BeliefNetwork,
    node: str,
    parent: str,
    lam_vec: IntervalVector,
    coparent_messages: Mapping[str, IntervalVector],
) -> Message:
    """Message a node sends up to one parent.

    The inner pass bounds the likelihood for each joint configuration of
    the node's parents; the outer pass sums out the co-parents under
    their message weights.
    """
    j = net.parents(node).index(parent)
    others = [p for p in net.parents(node) if p != parent]
    run_msgs = [
        coparent_messages.get(p, vacuous(net.state_count(p))) for p in others
    ]
    entries = []
    for config in itertools.product(*[range(len(m)) for m in run_msgs]):
        e = ONE
        for m, s in zip(run_msgs, config):
            e = iv_mul(e, m[s])
        entries.append(e)
    weights = IntervalVector(entries)
    other_ranges = [range(net.state_count(p)) for p in others]
    out = []
    for y in range(net.state_count(parent)):
        a_entries = []
        for oc in itertools.product(*other_ranges):
            full = list(oc[:j]) + [y] + list(oc[j:])
            row = net.cpt_row(node, full)
            column = IntervalVector(Interval.point(v) for v in row)
            a_entries.append(simplex_dot(column, lam_vec))
        out.append(simplex_dot(IntervalVector(a_entries), weights))
    vec, _ = normalize_scaled(IntervalVector(out))
    return Message("lambda", (parent, node), vec)


def propagate(
    net: BeliefNetwork,
    active: ActiveSet,
    evidence: Mapping[str, int],
    query: str,
    cache: MessageCache | None = None,
) -> IntervalVector:
    """Belief bounds at the query over a singly connected active set.

    Messages are computed in one pass toward the query; arcs absent
    from the active set contribute boundary messages as described in
    the module docstring.  Multiply connected active sets need
    ``loops.propagate_mixed``.
    """
    active.validate(net, query)
    if not _skeleton_acyclic(active.nodes, active.arcs):
        raise ValueError("active set contains loops; use propagate_mixed")
    run = _Run(_Context(net, active, evidence, query), {}, cache)
    vec, _ = run.belief(query)
    return vec


# -- stopping and results ------------------------------------------------------


@dataclass(frozen=True)
class StopCriterion:
    """Either a target width or a one-sided probability test."""

    target_width: float | None = None
    threshold: tuple[int, str, float] | None = None

    def __post_init__(self) -> None:
        if (self.target_width is None) == (self.threshold is None):
            raise ValueError("exactly one stopping rule must be given")
        if self.target_width is not None and not 0.0 <= self.target_width <= 1.0:
            raise ValueError("target width must lie in [0, 1]")
        if self.threshold is not None and self.threshold[1] not in (">", "<"):
            raise ValueError("threshold direction must be '>' or '<'")

    @staticmethod
    def width(w: float) -> "StopCriterion":
        return StopCriterion(target_width=w)

    @staticmethod
    def prob_threshold(state: int, direction: str, p: float) -> "StopCriterion":
        return StopCriterion(threshold=(state, direction, p))

    def met(self, bel: IntervalVector) -> bool:
        if self.target_width is not None:
            return bel.max_width <= self.target_width
        state, _, p = self.threshold
        return bel[state].lo > p or bel[state].hi < p

    def verdict(self, bel: IntervalVector) -> bool | None:
        """Resolved answer of a threshold test, if it is resolved."""
        if self.threshold is None:
            return None
        state, direction, p = self.threshold
        if bel[state].lo > p:
            return direction == ">"
        if bel[state].hi < p:
            return direction == "<"
        return None


@dataclass
class QueryResult:
    query: str
    bel: IntervalVector
    status: str
    iterations: int
    widths: list[float] = field(default_factory=list)
    active_nodes: list[int] = field(default_factory=list)
    elapsed: list[float] = field(default_factory=list)
    bels: list[IntervalVector] = field(default_factory=list)
    node_visits: int = 0
    threshold_answer: bool | None = None

    @property
    def achieved_width(self) -> float:
        return self.bel.max_width


# -- active-set expansion -------------------------------------------------------


class BreadthFirst:
    """Add every relevant neighbor of the current set, with all induced arcs."""

    def step(
        self,
        net: BeliefNetwork,
        active: ActiveSet,
        query: str,
        evidence: Mapping[str, int],
        relevant: set[str],
    ) -> ActiveSet | None:
        new_nodes = {
            w
            for v in active.nodes
            for w in net.skeleton_neighbors(v)
            if w in relevant and w not in active.nodes
        }
        nodes = set(active.nodes) | new_nodes
        arcs = {(p, c) for (p, c) in net.arcs if p in nodes and c in nodes}
        if nodes == set(active.nodes) and arcs == set(active.arcs):
            return None
        return ActiveSet(frozenset(nodes), frozenset(arcs))


class NoLoops:
    """Breadth-first growth that never closes an undirected cycle.

    Candidate arcs are scanned in network order each round; an arc
    whose endpoints are already connected inside the active set stays
    out permanently, so the active set remains a polytree.
    """

    def step(self, net, active, query, evidence, relevant) -> ActiveSet | None:
        new_nodes = {
            w
            for v in active.nodes
            for w in net.skeleton_neighbors(v)
            if w in relevant and w not in active.nodes
        }
        nodes = set(active.nodes) | new_nodes
        candidates = sorted(
            (
                (p, c)
                for (p, c) in net.arcs
                if p in nodes and c in nodes and (p, c) not in active.arcs
            ),
            key=lambda a: (net.order(a[0]), net.order(a[1])),
        )
        parent = {v: v for v in nodes}

        def find(v: str) -> str:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for p, c in active.arcs:
            parent[find(p)] = find(c)
        arcs = set(active.arcs)
        for p, c in candidates:
            rp, rc = find(p), find(c)
            if rp != rc:
                parent[rp] = rc
                arcs.add((p, c))
        if nodes == set(active.nodes) and arcs == set(active.arcs):
            return None
        return ActiveSet(frozenset(nodes), frozenset(arcs))


class DelayedLoops:
    """Breadth-first growth where cycle-closing arcs wait a few rounds."""

    def __init__(self, delay: int = 5):
        self.delay = delay
        self.round = 0
        self.first_seen: dict[tuple[str, str], int] = {}

    def step(self, net, active, query, evidence, relevant) -> ActiveSet | None:
        self.round += 1
        new_nodes = {
            w
            for v in active.nodes
            for w in net.skeleton_neighbors(v)
            if w in relevant and w not in active.nodes
        }
        nodes = set(active.nodes) | new_nodes
        candidates = sorted(
            (
                (p, c)
                for (p, c) in net.arcs
                if p in nodes and c in nodes and (p, c) not in active.arcs
            ),
            key=lambda a: (net.order(a[0]), net.order(a[1])),
        )
        parent = {v: v for v in nodes}

        def find(v: str) -> str:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for p, c in active.arcs:
            parent[find(p)] = find(c)
        arcs = set(active.arcs)
        pending = False
        for p, c in candidates:
            rp, rc = find(p), find(c)
            if rp != rc:
                parent[rp] = rc
                arcs.add((p, c))
                continue
            seen = self.first_seen.setdefault((p, c), self.round)
            if self.round - seen >= self.delay:
                arcs.add((p, c))
            else:
                pending = True
        if nodes == set(active.nodes) and arcs == set(active.arcs):
            return active if pending else None
        return ActiveSet(frozenset(nodes), frozenset(arcs))


def make_strategy(spec, delay: int = 5):
    if not isinstance(spec, str):
        return spec
    name = spec.replace("_", "-").lower()
    if name in ("bfs", "breadth-first"):
        return BreadthFirst()
    if name == "no-loops":
        return NoLoops()
    if name == "delayed":
        return DelayedLoops(delay)
    raise ValueError(f"unknown strategy {spec!r}")


def expand(
    active: ActiveSet,
    strategy,
    net: BeliefNetwork,
    query: str,
    evidence: Mapping[str, int],
) -> ActiveSet | None:
    """One expansion round.  Returns None at a fixed point."""
    strategy = make_strategy(strategy)
    relevant = relevant_set(net, query, evidence)
    grown = strategy.step(net, active, query, evidence, relevant)
    if grown is not None and grown == active:
        return active
    return grown


# -- the anytime loop -----------------------------------------------------------


def answer_query(
    net: BeliefNetwork,
    query: str,
    evidence: Mapping[str, int] | None = None,
    strategy="bfs",
    stop: StopCriterion | None = None,
    budget_ms: float | None = None,
    instance_cap: int = 65536,
    use_cache: bool = True,
) -> QueryResult:
    """Iteratively expand and propagate until the stop criterion holds.

    Evidence given here is merged over any evidence stored on the
    network.  The result records per-iteration belief bounds, widths,
    active-set sizes, and timings; its status tells whether the
    criterion was met, the active set saturated, or the budget ran out.
    """
    from .loops import evaluate

    net.node(query)
    eff: Evidence = dict(net.evidence)
    eff.update(evidence or {})
    for v, s in eff.items():
        if not 0 <= s < net.state_count(v):
            raise ValueError(f"evidence state {s} out of range for {v!r}")
    stop = stop if stop is not None else StopCriterion.width(0.0)
    strategy_obj = make_strategy(strategy)
    relevant = relevant_set(net, query, eff)
    active = ActiveSet.initial(query)
    cache = MessageCache() if use_cache else None

    widths: list[float] = []
    sizes: list[int] = []
    timings: list[float] = []
    bels: list[IntervalVector] = []
    visits = 0
    started = time.perf_counter()
    status = SATURATED
    bel = vacuous(net.state_count(query))
    while True:
        t0 = time.perf_counter()
        bel, v = evaluate(net, active, eff, query, instance_cap=instance_cap, cache=cache)
        timings.append(time.perf_counter() - t0)
        bels.append(bel)
        widths.append(bel.max_width)
        sizes.append(len(active.nodes))
        visits += v
        if stop.met(bel):
            status = SATISFIED
            break
        if budget_ms is not None and (time.perf_counter() - started) * 1000.0 >= budget_ms:
            status = BUDGET
            break
        grown = strategy_obj.step(net, active, query, eff, relevant)
        while grown is not None and grown == active:
            grown = strategy_obj.step(net, active, query, eff, relevant)
        if grown is None:
            status = SATURATED
            break
        active = grown
    return QueryResult(
        query=query,
        bel=bel,
        status=status,
        iterations=len(bels),
        widths=widths,
        active_nodes=sizes,
        elapsed=timings,
        bels=bels,
        node_visits=visits,
        threshold_answer=stop.verdict(bel),
    )

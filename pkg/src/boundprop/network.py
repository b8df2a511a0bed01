"""Belief-network representation, validation, and structural queries.

Networks are immutable after construction.  Conditional probability
tables are stored as one row per joint parent configuration, with the
last-listed parent varying fastest; that order is also the on-disk row
order, so files round-trip bit for bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

ROW_SUM_TOL = 1e-9

Evidence = dict[str, int]


class NetworkFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Node:
    id: str
    states: tuple[str, ...]
    parents: tuple[str, ...]
    cpt: tuple[tuple[float, ...], ...]


class BeliefNetwork:
    """Directed acyclic network of categorical variables with CPTs."""

    def __init__(self, name: str, nodes: Sequence[Node], evidence: Mapping[str, int] | None = None):
        self.name = name
        self.nodes = tuple(nodes)
        self._by_id = {n.id: n for n in self.nodes}
        if len(self._by_id) != len(self.nodes):
            raise NetworkFormatError("duplicate node id")
        self._order = {n.id: i for i, n in enumerate(self.nodes)}
        children: dict[str, list[str]] = {n.id: [] for n in self.nodes}
        for n in self.nodes:
            for p in n.parents:
                if p not in self._by_id:
                    raise NetworkFormatError(f"unknown node reference {p!r} in parents of {n.id!r}")
                children[p].append(n.id)
        self._children = {k: tuple(v) for k, v in children.items()}
        self._validate()
        self.evidence: Evidence = dict(evidence or {})
        for node_id, state in self.evidence.items():
            if node_id not in self._by_id:
                raise NetworkFormatError(f"evidence for unknown node {node_id!r}")
            if not 0 <= state < len(self._by_id[node_id].states):
                raise NetworkFormatError(f"evidence state out of range for {node_id!r}")

    def _validate(self) -> None:
        for n in self.nodes:
            if len(n.states) < 2:
                raise NetworkFormatError(f"node {n.id!r} needs at least two states")
            if len(set(n.states)) != len(n.states):
                raise NetworkFormatError(f"node {n.id!r} has duplicate state names")
            if len(set(n.parents)) != len(n.parents):
                raise NetworkFormatError(f"node {n.id!r} lists a parent twice")
            expected_rows = 1
            for p in n.parents:
                expected_rows *= len(self._by_id[p].states)
            if len(n.cpt) != expected_rows:
                raise NetworkFormatError(
                    f"cpt of {n.id!r} has {len(n.cpt)} rows, expected {expected_rows}"
                )
            for r, row in enumerate(n.cpt):
                if len(row) != len(n.states):
                    raise NetworkFormatError(f"cpt row {r} of {n.id!r} has wrong length")
                for v in row:
                    if not 0.0 <= v <= 1.0:
                        raise NetworkFormatError(f"cpt entry {v} of {n.id!r} outside [0, 1]")
                if abs(sum(row) - 1.0) > ROW_SUM_TOL:
                    raise NetworkFormatError(
                        f"cpt row {r} of {n.id!r} sums to {sum(row)!r}, not 1"
                    )
        if self._topological_order() is None:
            raise NetworkFormatError("cycle detected")

    def _topological_order(self) -> list[str] | None:
        indeg = {n.id: len(n.parents) for n in self.nodes}
        ready = [n.id for n in self.nodes if indeg[n.id] == 0]
        out: list[str] = []
        while ready:
            v = ready.pop()
            out.append(v)
            for c in self._children[v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        return out if len(out) == len(self.nodes) else None

    # -- basic accessors -------------------------------------------------

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._by_id

    def node(self, node_id: str) -> Node:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise KeyError(f"no node {node_id!r} in network {self.name!r}") from None

    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def order(self, node_id: str) -> int:
        return self._order[node_id]

    def states(self, node_id: str) -> tuple[str, ...]:
        return self.node(node_id).states

    def state_count(self, node_id: str) -> int:
        return len(self.node(node_id).states)

    def state_index(self, node_id: str, state_name: str) -> int:
        states = self.node(node_id).states
        try:
            return states.index(state_name)
        except ValueError:
            raise KeyError(f"node {node_id!r} has no state {state_name!r}") from None

    def parents(self, node_id: str) -> tuple[str, ...]:
        return self.node(node_id).parents

    def children(self, node_id: str) -> tuple[str, ...]:
        return self._children[node_id]

    @property
    def arcs(self) -> tuple[tuple[str, str], ...]:
        return tuple((p, n.id) for n in self.nodes for p in n.parents)

    def parent_configs(self, node_id: str) -> Iterator[tuple[int, ...]]:
        """Joint parent configurations in CPT row order (last parent fastest)."""
        ranges = [range(len(self._by_id[p].states)) for p in self.node(node_id).parents]
        return itertools.product(*ranges)

    def config_index(self, node_id: str, config: Sequence[int]) -> int:
        idx = 0
        for p, s in zip(self.node(node_id).parents, config):
            idx = idx * len(self._by_id[p].states) + s
        return idx

    def cpt_row(self, node_id: str, config: Sequence[int]) -> tuple[float, ...]:
        return self.node(node_id).cpt[self.config_index(node_id, config)]

    # -- structural queries ----------------------------------------------

    def skeleton_neighbors(self, node_id: str) -> tuple[str, ...]:
        n = self.node(node_id)
        return tuple(dict.fromkeys(n.parents + self._children[node_id]))

    def ancestral_closure(self, seed: Iterable[str]) -> set[str]:
        """The seed nodes together with all their ancestors."""
        out: set[str] = set()
        stack = [s for s in seed]
        while stack:
            v = stack.pop()
            if v in out:
                continue
            out.add(v)
            stack.extend(self.node(v).parents)
        return out

    def evidence_from_names(self, pairs: Mapping[str, str]) -> Evidence:
        return {node: self.state_index(node, state) for node, state in pairs.items()}


def is_polytree(net: BeliefNetwork) -> bool:
    """True when the undirected skeleton has no cycle."""
    parent = {n.id: n.id for n in net.nodes}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for p, c in net.arcs:
        rp, rc = find(p), find(c)
        if rp == rc:
            return False
        parent[rp] = rc
    return True


# -- d-separation ---------------------------------------------------------


def reachable_from(net: BeliefNetwork, source: str, observed: Iterable[str]) -> set[str]:
    """Nodes joined to ``source`` by a trail active given ``observed``.

    A trail is active when every intermediate collider is observed or
    has an observed descendant and every other intermediate node is
    unobserved.  The endpoints themselves never block: an observed
    neighbor of the source is still reached, which is what message
    propagation needs (its observation feeds the source directly).
    """
    z = set(observed)
    ancestors_of_z = net.ancestral_closure(z)
    reached = {source}
    # (node, came_in_along_arc_into_node)
    frontier: list[tuple[str, bool]] = []
    seen: set[tuple[str, bool]] = set()
    for p in net.parents(source):
        frontier.append((p, False))
    for c in net.children(source):
        frontier.append((c, True))
    while frontier:
        v, arrived_down = frontier.pop()
        if (v, arrived_down) in seen:
            continue
        seen.add((v, arrived_down))
        reached.add(v)
        if arrived_down:
            # Arrived along an arc into v.  Passing on to a child keeps v a
            # chain node (must be unobserved); passing back up to a parent
            # makes v a collider (needs observation at or below v).
            if v not in z:
                for c in net.children(v):
                    frontier.append((c, True))
            if v in ancestors_of_z:
                for p in net.parents(v):
                    frontier.append((p, False))
        else:
            # Arrived against an arc out of v: v is a chain or fork node.
            if v not in z:
                for p in net.parents(v):
                    frontier.append((p, False))
                for c in net.children(v):
                    frontier.append((c, True))
    return reached


def d_separated(net: BeliefNetwork, a: str, b: str, evidence: Mapping[str, int] | Iterable[str]) -> bool:
    """True when no active trail joins ``a`` and ``b`` given the evidence."""
    observed = evidence.keys() if isinstance(evidence, Mapping) else evidence
    net.node(a), net.node(b)
    if a == b:
        return False
    return b not in reachable_from(net, a, observed)


def relevant_set(net: BeliefNetwork, query: str, evidence: Mapping[str, int] | Iterable[str]) -> set[str]:
    """Nodes that can influence the query's posterior.

    A node matters only if it is joined to the query by an active trail
    and sits in the ancestral closure of the query and the evidence;
    anything else either cannot pass information or sums out of the
    posterior exactly (childless unobserved branches).
    """
    observed = set(evidence.keys() if isinstance(evidence, Mapping) else evidence)
    closure = net.ancestral_closure({query, *observed})
    reach = reachable_from(net, query, observed)
    return (reach & closure) | {query}


# -- loop structure --------------------------------------------------------


@dataclass(frozen=True)
class LoopCluster:
    """A maximal multiply connected piece: the union of overlapping cycles."""

    nodes: frozenset[str]
    arcs: frozenset[tuple[str, str]]


def _skeleton_bridges(nodes: Sequence[str], edges: Sequence[tuple[str, str]]) -> set[frozenset[str]]:
    """Bridges of the undirected multigraph, by iterative lowpoint DFS."""
    adj: dict[str, list[tuple[str, int]]] = {v: [] for v in nodes}
    for i, (a, b) in enumerate(edges):
        adj[a].append((b, i))
        adj[b].append((a, i))
    visited: set[str] = set()
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    bridges: set[frozenset[str]] = set()
    counter = 0
    for root in nodes:
        if root in visited:
            continue
        stack: list[tuple[str, int, Iterator[tuple[str, int]]]] = []
        visited.add(root)
        disc[root] = low[root] = counter
        counter += 1
        stack.append((root, -1, iter(adj[root])))
        while stack:
            v, in_edge, it = stack[-1]
            advanced = False
            for w, edge_id in it:
                if edge_id == in_edge:
                    continue
                if w not in visited:
                    visited.add(w)
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, edge_id, iter(adj[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        bridges.add(frozenset((u, v)))
    return bridges


def find_loop_clusters(
    net_or_nodes: BeliefNetwork | Sequence[str],
    arcs: Sequence[tuple[str, str]] | None = None,
) -> tuple[LoopCluster, ...]:
    """Group every arc that lies on an undirected cycle into clusters.

    Two cycles sharing any node fall into the same cluster, so clusters
    are node-disjoint and removing them all leaves a forest.  Accepts a
    network, or an explicit (nodes, arcs) pair for subgraphs.
    """
    if isinstance(net_or_nodes, BeliefNetwork):
        nodes: Sequence[str] = net_or_nodes.node_ids()
        arc_list = list(net_or_nodes.arcs)
    else:
        nodes = net_or_nodes
        arc_list = list(arcs or ())
    bridges = _skeleton_bridges(nodes, arc_list)
    cyclic = [(p, c) for (p, c) in arc_list if frozenset((p, c)) not in bridges]
    # Union-find over endpoints of cycle arcs.
    parent: dict[str, str] = {}

    def find(v: str) -> str:
        parent.setdefault(v, v)
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for p, c in cyclic:
        parent[find(p)] = find(c)
    groups: dict[str, tuple[set[str], set[tuple[str, str]]]] = {}
    for p, c in cyclic:
        root = find(p)
        ns, es = groups.setdefault(root, (set(), set()))
        ns.update((p, c))
        es.add((p, c))
    order = {v: i for i, v in enumerate(nodes)}
    clusters = [
        LoopCluster(frozenset(ns), frozenset(es))
        for ns, es in groups.values()
    ]
    clusters.sort(key=lambda k: min(order[v] for v in k.nodes))
    return tuple(clusters)


# -- file format ------------------------------------------------------------


def _fmt_real(x: float) -> str:
    return f"{x:.17g}"


def parse_network(text: str) -> BeliefNetwork:
    """Parse the line-oriented network format.

    Grammar, one declaration per line, ``#`` starts a comment:

        network <name>
        node <id> states <s1> <s2> ...
        parents <id> [<p1> <p2> ...]
        cpt <id>            (followed by one row per parent configuration)
        evidence <id> <state-name>
    """
    name: str | None = None
    states: dict[str, tuple[str, ...]] = {}
    parents: dict[str, tuple[str, ...]] = {}
    cpts: dict[str, list[tuple[float, ...]]] = {}
    evidence: dict[str, str] = {}
    node_order: list[str] = []

    pending_cpt: str | None = None
    pending_rows_needed = 0

    def rows_expected(node_id: str) -> int:
        total = 1
        for p in parents.get(node_id, ()):
            total *= len(states[p])
        return total

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if pending_cpt is not None:
            try:
                row = tuple(float(t) for t in tokens)
            except ValueError:
                raise NetworkFormatError(
                    f"expected {pending_rows_needed} more cpt row(s) for {pending_cpt!r}",
                    lineno,
                )
            if len(row) != len(states[pending_cpt]):
                raise NetworkFormatError(
                    f"cpt row for {pending_cpt!r} has {len(row)} values, "
                    f"expected {len(states[pending_cpt])}",
                    lineno,
                )
            cpts[pending_cpt].append(row)
            pending_rows_needed -= 1
            if pending_rows_needed == 0:
                pending_cpt = None
            continue
        keyword = tokens[0]
        if keyword == "network":
            if len(tokens) != 2:
                raise NetworkFormatError("network line needs exactly one name", lineno)
            if name is not None:
                raise NetworkFormatError("duplicate network line", lineno)
            name = tokens[1]
        elif keyword == "node":
            if len(tokens) < 5 or tokens[2] != "states":
                raise NetworkFormatError(
                    "node line must read: node <id> states <s1> <s2> ...", lineno
                )
            node_id = tokens[1]
            if node_id in states:
                raise NetworkFormatError(f"duplicate node {node_id!r}", lineno)
            states[node_id] = tuple(tokens[3:])
            node_order.append(node_id)
        elif keyword == "parents":
            if len(tokens) < 2:
                raise NetworkFormatError("parents line needs a node id", lineno)
            node_id = tokens[1]
            if node_id not in states:
                raise NetworkFormatError(f"parents for undeclared node {node_id!r}", lineno)
            if node_id in parents:
                raise NetworkFormatError(f"duplicate parents line for {node_id!r}", lineno)
            if node_id in cpts:
                raise NetworkFormatError(f"parents of {node_id!r} declared after its cpt", lineno)
            for p in tokens[2:]:
                if p not in states:
                    raise NetworkFormatError(f"unknown node reference {p!r}", lineno)
            parents[node_id] = tuple(tokens[2:])
        elif keyword == "cpt":
            if len(tokens) != 2:
                raise NetworkFormatError("cpt line needs exactly one node id", lineno)
            node_id = tokens[1]
            if node_id not in states:
                raise NetworkFormatError(f"cpt for undeclared node {node_id!r}", lineno)
            if node_id in cpts:
                raise NetworkFormatError(f"duplicate cpt for {node_id!r}", lineno)
            cpts[node_id] = []
            pending_cpt = node_id
            pending_rows_needed = rows_expected(node_id)
        elif keyword == "evidence":
            if len(tokens) != 3:
                raise NetworkFormatError("evidence line must read: evidence <id> <state>", lineno)
            node_id, state_name = tokens[1], tokens[2]
            if node_id not in states:
                raise NetworkFormatError(f"evidence for undeclared node {node_id!r}", lineno)
            if state_name not in states[node_id]:
                raise NetworkFormatError(
                    f"node {node_id!r} has no state {state_name!r}", lineno
                )
            if node_id in evidence:
                raise NetworkFormatError(f"duplicate evidence for {node_id!r}", lineno)
            evidence[node_id] = state_name
        else:
            raise NetworkFormatError(f"unknown declaration {keyword!r}", lineno)

    if pending_cpt is not None:
        raise NetworkFormatError(
            f"file ended with {pending_rows_needed} cpt row(s) missing for {pending_cpt!r}"
        )
    if name is None:
        raise NetworkFormatError("missing network line")
    missing = [v for v in node_order if v not in cpts]
    if missing:
        raise NetworkFormatError(f"missing cpt for {missing[0]!r}")

    nodes = [
        Node(
            id=v,
            states=states[v],
            parents=parents.get(v, ()),
            cpt=tuple(cpts[v]),
        )
        for v in node_order
    ]
    net = BeliefNetwork(name, nodes)
    return BeliefNetwork(
        name, nodes, evidence={v: net.state_index(v, s) for v, s in evidence.items()}
    )


def serialize_network(net: BeliefNetwork) -> str:
    lines = [f"network {net.name}"]
    for n in net.nodes:
        lines.append(f"node {n.id} states " + " ".join(n.states))
    for n in net.nodes:
        lines.append(f"parents {n.id}" + ("" if not n.parents else " " + " ".join(n.parents)))
    for n in net.nodes:
        lines.append(f"cpt {n.id}")
        for row in n.cpt:
            lines.append(" ".join(_fmt_real(v) for v in row))
    for node_id, state in net.evidence.items():
        lines.append(f"evidence {node_id} {net.states(node_id)[state]}")
    return "\n".join(lines) + "\n"

"""Ground-truth engines: joint enumeration and point message passing.

Both are deliberately independent of the interval machinery so they can
serve as oracles for it.  Enumeration works on any network up to a
state-space cap; the point polytree solver is linear-time but limited
to singly connected networks.
"""

from __future__ import annotations

import itertools
from typing import Mapping, Sequence

import numpy as np

from .intervals import ConflictingEvidenceError
from .network import BeliefNetwork, is_polytree

STATE_SPACE_CAP = 2 ** 24


class StateSpaceError(ValueError):
    """Joint state space too large to enumerate."""


def joint_table(net: BeliefNetwork) -> np.ndarray:
    """Full joint distribution as an array with one axis per node."""
    shape = tuple(net.state_count(v) for v in net.node_ids())
    total = 1
    for s in shape:
        total *= s
    if total > STATE_SPACE_CAP:
        raise StateSpaceError(f"joint table of shape {shape} exceeds cap {STATE_SPACE_CAP}")
    axis = {v: i for i, v in enumerate(net.node_ids())}
    joint = np.ones(shape, dtype=np.float64)
    for n in net.nodes:
        involved = list(n.parents) + [n.id]
        table = np.asarray(n.cpt, dtype=np.float64).reshape(
            [net.state_count(p) for p in n.parents] + [len(n.states)]
        )
        # Move the factor's axes into global axis order, pad the rest with 1s.
        perm = sorted(range(len(involved)), key=lambda i: axis[involved[i]])
        table = np.transpose(table, perm)
        full_shape = [1] * len(shape)
        for i in perm:
            full_shape[axis[involved[i]]] = net.state_count(involved[i])
        joint = joint * table.reshape(full_shape)
    return joint


def _evidence_slice(net: BeliefNetwork, evidence: Mapping[str, int]) -> tuple:
    idx: list[object] = []
    for v in net.node_ids():
        idx.append(evidence[v] if v in evidence else slice(None))
    return tuple(idx)


def enumerate_marginal(
    net: BeliefNetwork, evidence: Mapping[str, int], node: str
) -> tuple[float, ...]:
    """Exact conditional marginal of ``node`` by summing the joint."""
    joint = joint_table(net)
    sub = joint[_evidence_slice(net, evidence)]
    if node in evidence:
        total = float(np.sum(sub))
        if total <= 0.0:
            raise ConflictingEvidenceError("evidence has zero probability")
        out = [0.0] * net.state_count(node)
        out[evidence[node]] = 1.0
        return tuple(out)
    remaining = [v for v in net.node_ids() if v not in evidence]
    keep = remaining.index(node)
    other_axes = tuple(i for i in range(sub.ndim) if i != keep)
    vec = np.sum(sub, axis=other_axes)
    total = float(np.sum(vec))
    if total <= 0.0:
        raise ConflictingEvidenceError("evidence has zero probability")
    return tuple(float(x) for x in vec / total)


def clamped_state_range(
    net: BeliefNetwork, evidence: Mapping[str, int], query: str, clamp: str
) -> tuple[tuple[float, float], ...]:
    """Per-state min and max of the query conditional over clamp states.

    For each state b of ``clamp``, the joint is evaluated with b held
    fixed (not summed), the query conditional is formed, and the
    pointwise envelope over b is returned.  This is the reference
    envelope a propagation that severed the clamp node's outgoing
    influence must still contain.
    """
    if query in evidence or clamp in evidence or clamp == query:
        raise ValueError("query and clamp must be distinct unobserved nodes")
    joint = joint_table(net)
    sub = joint[_evidence_slice(net, evidence)]
    remaining = [v for v in net.node_ids() if v not in evidence]
    q_axis = remaining.index(query)
    b_axis = remaining.index(clamp)
    mins: list[float] = []
    maxs: list[float] = []
    n_q = net.state_count(query)
    lo = [float("inf")] * n_q
    hi = [float("-inf")] * n_q
    for b in range(net.state_count(clamp)):
        plane = np.take(sub, b, axis=b_axis)
        axes = tuple(i for i in range(plane.ndim) if i != (q_axis if q_axis < b_axis else q_axis - 1))
        vec = np.sum(plane, axis=axes)
        total = float(np.sum(vec))
        if total <= 0.0:
            continue
        cond = vec / total
        for i in range(n_q):
            lo[i] = min(lo[i], float(cond[i]))
            hi[i] = max(hi[i], float(cond[i]))
    if lo[0] == float("inf"):
        raise ConflictingEvidenceError("evidence has zero probability")
    return tuple(zip(lo, hi))


def polytree_exact(
    net: BeliefNetwork, evidence: Mapping[str, int], node: str
) -> tuple[float, ...]:
    """Exact marginal on a polytree via point-valued message passing."""
    if not is_polytree(net):
        raise ValueError("polytree_exact requires a singly connected network")
    net.node(node)

    pi_msgs: dict[tuple[str, str], list[float]] = {}
    lam_msgs: dict[tuple[str, str], list[float]] = {}

    def _norm(v: Sequence[float]) -> list[float]:
        total = sum(v)
        if total <= 0.0:
            raise ConflictingEvidenceError("evidence has zero probability")
        return [x / total for x in v]

    def pi_value(x: str) -> list[float]:
        n = net.node(x)
        msgs = [pi_message(p, x) for p in n.parents]
        out = [0.0] * len(n.states)
        for config in net.parent_configs(x):
            w = 1.0
            for m, s in zip(msgs, config):
                w *= m[s]
            if w == 0.0:
                continue
            row = net.cpt_row(x, config)
            for i, v in enumerate(row):
                out[i] += w * v
        return out

    def lambda_value(x: str) -> list[float]:
        n = net.node(x)
        out = [1.0] * len(n.states)
        if x in evidence:
            out = [1.0 if i == evidence[x] else 0.0 for i in range(len(n.states))]
        for c in net.children(x):
            m = lambda_message(c, x)
            out = [a * b for a, b in zip(out, m)]
        return out

    def pi_message(u: str, x: str) -> list[float]:
        key = (u, x)
        if key in pi_msgs:
            return pi_msgs[key]
        if u in evidence:
            msg = [1.0 if i == evidence[u] else 0.0 for i in range(net.state_count(u))]
        else:
            out = pi_value(u)
            for c in net.children(u):
                if c == x:
                    continue
                m = lambda_message(c, u)
                out = [a * b for a, b in zip(out, m)]
            msg = _norm(out)
        pi_msgs[key] = msg
        return msg

    def lambda_message(x: str, u: str) -> list[float]:
        key = (x, u)
        if key in lam_msgs:
            return lam_msgs[key]
        n = net.node(x)
        lam = lambda_value(x)
        j = n.parents.index(u)
        others = [p for p in n.parents if p != u]
        msgs = [pi_message(p, x) for p in others]
        out = [0.0] * net.state_count(u)
        other_ranges = [range(net.state_count(p)) for p in others]
        for oc in itertools.product(*other_ranges):
            w = 1.0
            for m, s in zip(msgs, oc):
                w *= m[s]
            if w == 0.0:
                continue
            for y in range(net.state_count(u)):
                config = list(oc[:j]) + [y] + list(oc[j:])
                row = net.cpt_row(x, config)
                out[y] += w * sum(r * l for r, l in zip(row, lam))
        total = sum(out)
        if total > 0.0:
            out = [v / total for v in out]
        lam_msgs[key] = out
        return out

    if node in evidence:
        return tuple(
            1.0 if i == evidence[node] else 0.0 for i in range(net.state_count(node))
        )
    bel = [p * l for p, l in zip(pi_value(node), lambda_value(node))]
    return tuple(_norm(bel))

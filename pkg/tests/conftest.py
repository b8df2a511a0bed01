import random

import pytest

from boundprop import parse_network
from boundprop.netgen import sample_skewed_row


def build_net(name, spec, seed=None, state_counts=None):
    """Assemble a network from {node: parents}, with seeded random rows.

    Node order follows the dict order.  With no seed, every row is
    uniform over the node's states.
    """
    rng = random.Random(seed) if seed is not None else None
    counts = state_counts or {}
    lines = [f"network {name}"]
    for node in spec:
        k = counts.get(node, 2)
        lines.append(f"node {node} states " + " ".join(f"s{i}" for i in range(k)))
    for node, parents in spec.items():
        lines.append(f"parents {node}" + ("" if not parents else " " + " ".join(parents)))
    for node, parents in spec.items():
        k = counts.get(node, 2)
        rows = 1
        for p in parents:
            rows *= counts.get(p, 2)
        lines.append(f"cpt {node}")
        for _ in range(rows):
            if rng is None:
                lines.append(" ".join(f"{1.0 / k:.17g}" for _ in range(k)))
            else:
                lines.append(" ".join(f"{v:.17g}" for v in sample_skewed_row(k, rng)))
    return parse_network("\n".join(lines))


CHAIN_AB = """
network chain
node A states t f
node B states t f
parents A
parents B A
cpt A
0.3 0.7
cpt B
0.9 0.1
0.2 0.8
"""


@pytest.fixture
def chain_ab():
    return parse_network(CHAIN_AB)


@pytest.fixture
def diamond():
    # A -> B, A -> C, B -> D, C -> D
    return build_net(
        "diamond",
        {"A": [], "B": ["A"], "C": ["A"], "D": ["B", "C"]},
        seed=11,
    )


@pytest.fixture
def figure_net():
    # Y -> A -> {B, C}, {B, C} -> D -> X: one loop A-B-D-C plus stems.
    return build_net(
        "figure",
        {"Y": [], "A": ["Y"], "B": ["A"], "C": ["A"], "D": ["B", "C"], "X": ["D"]},
        seed=23,
    )

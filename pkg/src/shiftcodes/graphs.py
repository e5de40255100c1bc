"""Small graph helpers: strongly connected components, periods, phases."""

from math import gcd

import networkx as nx


def digraph(states, edges):
    g = nx.MultiDiGraph()
    g.add_nodes_from(states)
    g.add_edges_from((s, d) for _, s, d in edges)
    return g


def components(states, edges):
    """Strongly connected components that carry at least one cycle, in a stable order."""
    order = {s: i for i, s in enumerate(states)}
    g = digraph(states, edges)
    out = []
    for comp in nx.strongly_connected_components(g):
        comp = sorted(comp, key=order.__getitem__)
        if len(comp) > 1 or g.has_edge(comp[0], comp[0]):
            out.append(comp)
    out.sort(key=lambda c: order[c[0]])
    return out


def strongly_connected(states, edges):
    if not states:
        return False
    comps = components(states, edges)
    return len(comps) == 1 and len(comps[0]) == len(states)


def period_classes(states, edges):
    """Period and phase labels of a strongly connected graph.

    Returns (p, phase) with phase[s] in range(p) and every edge raising
    the phase by one modulo p.
    """
    succ = {s: [] for s in states}
    for _, s, d in edges:
        succ[s].append(d)
    root = states[0]
    level = {root: 0}
    queue = [root]
    for s in queue:
        for d in succ[s]:
            if d not in level:
                level[d] = level[s] + 1
                queue.append(d)
    p = 0
    for _, s, d in edges:
        if s in level and d in level:
            p = gcd(p, level[s] + 1 - level[d])
    p = abs(p) or 1
    return p, {s: level[s] % p for s in level}


def bool_matmul(a, b):
    n = len(a)
    m = len(b[0]) if b else 0
    cols = [[b[k][j] for k in range(len(b))] for j in range(m)]
    return [[any(x and y for x, y in zip(row, col)) for col in cols] for row in a]


def int_matmul(a, b):
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]

from listpack.graph import Graph


def complete(n):
    return Graph.from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle(n):
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def star(leaves, centre=1):
    others = [v for v in range(1, leaves + 2) if v != centre]
    return Graph.from_edges(leaves + 1, [(centre, v) for v in others])


def complete_bipartite(a, b):
    return Graph.from_edges(a + b, [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)])


def petersen():
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(6 + i, 6 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)

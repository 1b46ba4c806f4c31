"""Random instances for the builders, kept small enough for exact checks."""
import itertools

from listpack.cover import random_cover
from listpack.fixtures import random_graph
from listpack.graph import CaterpillarDecomposition, Graph, LayerPartition, cartesian_product, treedepth_forest_small


def layered_instance(rng):
    layers, edges, n = [], [], 0
    for _ in range(rng.randint(1, 3)):
        size = rng.randint(1, 3)
        layer = list(range(n + 1, n + size + 1))
        edges += [(u, v) for u, v in itertools.combinations(layer, 2) if rng.random() < 0.7]
        if n:
            for v in layer:
                if rng.random() < 0.7:
                    edges.append((rng.randint(1, n), v))
        layers.append(tuple(layer))
        n += size
    g = Graph.from_edges(n, edges)
    # one fold for every vertex: gluing needs the outside neighbour's list to be no smaller
    k = max(len(layer) for layer in layers) + 1 + (rng.random() < 0.3)
    c = random_cover(g, k, rng, full=rng.random() < 0.5)
    return c, LayerPartition(tuple(layers))


def treedepth_instance(rng):
    g = random_graph(rng.randint(1, 5), 0.5, rng)
    f = treedepth_forest_small(g)
    sizes = [f.depth + (rng.random() < 0.2) for _ in g.vertices]
    return random_cover(g, sizes, rng, full=rng.random() < 0.5), f


def cartesian_instance(rng):
    # support grows fast with the product size, so keep it at six vertices or fewer
    n1 = rng.randint(1, 3)
    g1 = random_graph(n1, 0.6, rng)
    g2 = random_graph(rng.randint(1, 6 // n1 if n1 > 1 else 3), 0.6, rng)
    k1 = g1.vertex_count
    n2 = g2.vertex_count
    g = cartesian_product(g1, g2)
    sizes = [k1 + g2.degree((v - 1) % n2 + 1) + (rng.random() < 0.2) for v in g.vertices]
    return random_cover(g, sizes, rng, full=rng.random() < 0.5), g1, g2, k1


def caterpillar_instance(rng):
    p = rng.randint(1, 3)
    sets = [tuple(range(1, p + 2))]
    for i in range(rng.randint(0, 4)):
        sets.append(tuple(rng.sample(sets[-1], p)) + (p + 2 + i,))
    n = p + 1 + len(sets) - 1
    edges = {e for a in sets for e in itertools.combinations(sorted(a), 2) if rng.random() < 0.8}
    g = Graph.from_edges(n, sorted(edges))
    return random_cover(g, p + 1, rng, full=rng.random() < 0.5), CaterpillarDecomposition(p, tuple(sets))

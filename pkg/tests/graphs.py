"""Random connected multigraphs shared by several test modules."""
import numpy as np

from stabnet.network import NetworkGraph


def random_multigraph(rng, max_bulk=6, n_boundary=3, p=2, N=1, extra=None):
    nb = int(rng.integers(1, max_bulk + 1))
    bulk = [f"x{i}" for i in range(nb)]
    bnd = [chr(ord("A") + i) for i in range(n_boundary)]
    edges = [(bulk[i], bulk[int(rng.integers(0, i))]) for i in range(1, nb)]
    edges += [(b, bulk[int(rng.integers(0, nb))]) for b in bnd]
    k = int(rng.integers(0, 2 * nb + 1)) if extra is None else extra
    for _ in range(k):
        u, v = rng.choice(nb + n_boundary, size=2, replace=False)
        names = bulk + bnd
        edges.append((names[u], names[v]))
    return NetworkGraph(bulk + bnd, bnd, edges, p, N)


def brute_min_cut(G, region):
    """Minimum over all bulk subsets, written independently of the library."""
    region = set(region)
    bulk = G.bulk
    best, count = None, 0
    for mask in range(1 << len(bulk)):
        W = region | {x for i, x in enumerate(bulk) if mask >> i & 1}
        c = sum((u in W) != (v in W) for u, v in G.edges)
        if best is None or c < best:
            best, count = c, 1
        elif c == best:
            count += 1
    return best, count


def ladder(rungs, p=2, N=1):
    """2 x rungs ladder of bulk vertices with boundary legs at both ends."""
    top = [f"t{i}" for i in range(rungs)]
    bot = [f"b{i}" for i in range(rungs)]
    edges = [(top[i], top[i + 1]) for i in range(rungs - 1)]
    edges += [(bot[i], bot[i + 1]) for i in range(rungs - 1)]
    edges += list(zip(top, bot))
    edges += [("A", top[0]), ("B", bot[0]), ("C", top[-1]), ("D", bot[-1])]
    return NetworkGraph(top + bot + ["A", "B", "C", "D"], ["A", "B", "C", "D"], edges, p, N)

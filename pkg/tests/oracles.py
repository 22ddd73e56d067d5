"""Reference implementations kept deliberately naive and independent of
the package internals."""
import math
from collections import Counter, deque


def reverse_bfs(adj_in, root):
    """Visit order of a plain BFS over in-edges (``adj_in[v]`` = tails of edges into v)."""
    seen = {root}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adj_in[u]:
            if v not in seen:
                seen.add(v)
                order.append(v)
                queue.append(v)
    return order


def brute_greedy(sets, k, n):
    """Greedy max coverage on python sets; ties to the lowest id.

    Returns ``(seeds, gains)``; once nothing is left the lowest unchosen
    id is taken with gain 0.
    """
    live = [set(s) for s in sets]
    seeds, gains = [], []
    for _ in range(k):
        best, best_gain = None, 0
        for v in range(n):
            gain = sum(1 for s in live if v in s)
            if gain > best_gain:
                best, best_gain = v, gain
        if best is None:
            best = min(v for v in range(n) if v not in seeds)
        seeds.append(best)
        gains.append(best_gain)
        live = [s for s in live if best not in s]
    return seeds, gains


def log_binom_sum(n, k):
    return math.fsum(math.log(n - k + j) - math.log(j) for j in range(1, k + 1))


def theta_direct(n, k, eps, i):
    """Sample-count formula evaluated term by term with natural logs."""
    a = 2 + 2 * math.sqrt(2) / 3 * eps
    b = log_binom_sum(n, k) * math.log(n) + math.log(math.log(n, 2))
    return a * b * 2 ** i / (2 * eps ** 2)


def skew_direct(xs):
    t = len(xs)
    mean = math.fsum(xs) / t
    m2 = math.fsum((x - mean) ** 2 for x in xs) / t
    m3 = math.fsum((x - mean) ** 3 for x in xs) / t
    if m2 == 0:
        return 0.0
    return m3 / math.sqrt(m2) ** 3


def density_direct(xs, n):
    return sum(xs) / (len(xs) * n)


def huffman_cost(freqs):
    """Optimal total weighted code length via repeated merging of the two lightest."""
    weights = sorted(f for f in freqs if f > 0)
    if len(weights) == 1:
        return weights[0]
    cost = 0
    while len(weights) > 1:
        a = weights.pop(0)
        b = weights.pop(0)
        cost += a + b
        # insert keeping order
        lo = 0
        while lo < len(weights) and weights[lo] < a + b:
            lo += 1
        weights.insert(lo, a + b)
    return cost


def multiset(xs):
    return Counter(int(x) for x in xs)

"""Independent reference implementations used only by the test suite.

Everything here is deliberately written from first principles (brute-force
enumeration, straight textbook recursions, event-driven simulation) so the
library is checked against code that shares none of its shortcuts.
"""

import heapq
import itertools
import math

import numpy as np


def nine_copy_distance(a, b, width, height):
    """Toroidal distance by exhaustive minimum over the nine copies of b."""
    best = math.inf
    for sx in (-width, 0.0, width):
        for sy in (-height, 0.0, height):
            best = min(best, math.hypot(a[0] - b[0] - sx, a[1] - b[1] - sy))
    return best


def erlang_b(capacity, rho):
    """Erlang-B blocking via the standard stable inverse recursion."""
    inv = 1.0
    for j in range(1, capacity + 1):
        inv = 1.0 + inv * j / rho
    return 1.0 / inv


def loss_system_enumeration(classes, capacity):
    """Per-class blocking of a multi-rate loss system by brute force.

    Enumerates every feasible occupancy vector (n_1, ..., n_k) with
    sum n_j d_j <= capacity, weights it by the truncated product-form
    probability prod rho_j^{n_j}/n_j!, and reads off per-class blocking as
    the probability that class j does not fit.
    """
    rhos = [c[0] for c in classes]
    demands = [c[1] for c in classes]
    ranges = [range(capacity // d + 1) for d in demands]
    total = 0.0
    blocked = [0.0] * len(classes)
    for occ in itertools.product(*ranges):
        used = sum(n * d for n, d in zip(occ, demands))
        if used > capacity:
            continue
        w = 1.0
        for n, rho in zip(occ, rhos):
            w *= rho**n / math.factorial(n)
        total += w
        for j, d in enumerate(demands):
            if used + d > capacity:
                blocked[j] += w
    return np.array([b / total for b in blocked])


def simulate_loss_system(classes, capacity, n_arrivals, seed):
    """Event-driven loss-system simulation with exponential holding times.

    Poisson arrivals per class (rate rho_j, holding rate 1), complete
    blocking, no queue.  Returns (per-class blocking, per-class standard
    error, per-class arrival counts).
    """
    rng = np.random.default_rng(seed)
    rhos = np.array([c[0] for c in classes], dtype=float)
    demands = [c[1] for c in classes]
    p_class = rhos / rhos.sum()
    total_rate = rhos.sum()

    arrivals = np.zeros(len(classes), dtype=np.int64)
    blocks = np.zeros(len(classes), dtype=np.int64)
    departures = []  # heap of (time, units)
    used = 0
    t = 0.0
    for _ in range(n_arrivals):
        t += rng.exponential(1.0 / total_rate)
        while departures and departures[0][0] <= t:
            _, units = heapq.heappop(departures)
            used -= units
        j = int(rng.choice(len(classes), p=p_class))
        arrivals[j] += 1
        d = demands[j]
        if used + d > capacity:
            blocks[j] += 1
        else:
            used += d
            heapq.heappush(departures, (t + rng.exponential(1.0), d))
    blocking = blocks / np.maximum(arrivals, 1)
    se = np.sqrt(blocking * (1.0 - blocking) / np.maximum(arrivals, 1))
    return blocking, se, arrivals

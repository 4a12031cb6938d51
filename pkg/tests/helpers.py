import itertools

import numpy as np
from scipy.optimize import minimize


def two_blocks(n):
    """Two disjoint complete graphs on n vertices each."""
    adj = np.zeros((2 * n, 2 * n), dtype=bool)
    adj[:n, :n] = True
    adj[n:, n:] = True
    np.fill_diagonal(adj, False)
    return adj


def _dense_G(prog):
    left, alpha, beta = prog.constraints()
    G = np.zeros((left.size, 2 * prog.n))
    G[np.arange(left.size), left] = alpha
    G[np.arange(left.size), left + 1] = beta
    return G


def brute_force_optimum(prog):
    """Exhaustive active-set oracle plus multi-start SLSQP.

    The optimum is P_K(c)/||P_K(c)||, and P_K(c) is the projection of c onto
    the null space of its active constraints, so scanning every subset of
    constraint rows finds it exactly.
    """
    G = _dense_G(prog)
    c = prog.c
    best = 0.0
    for r in range(G.shape[0] + 1):
        for rows in itertools.combinations(range(G.shape[0]), r):
            if rows:
                _, s, vt = np.linalg.svd(G[list(rows)])
                rank = int(np.sum(s > 1e-12))
                N = vt[rank:].T
            else:
                N = np.eye(G.shape[1])
            if N.shape[1] == 0:
                continue
            p = N @ (N.T @ c)
            norm = np.linalg.norm(p)
            if norm < 1e-12 or np.max(G @ p) > 1e-12 * norm:
                continue
            best = max(best, float(c @ p / norm))
    rng = np.random.default_rng(0)
    cons = [{"type": "ineq", "fun": lambda x: -G @ x, "jac": lambda x: -G},
            {"type": "ineq", "fun": lambda x: 1 - x @ x, "jac": lambda x: -2 * x}]
    for _ in range(20):
        res = minimize(lambda x: -c @ x, rng.standard_normal(G.shape[1]) * 0.3, jac=lambda x: -c,
                       constraints=cons, method="SLSQP", options={"ftol": 1e-12, "maxiter": 500})
        if res.success and np.max(G @ res.x) <= 1e-9 and res.x @ res.x <= 1 + 1e-9:
            best = max(best, float(c @ res.x))
    return best

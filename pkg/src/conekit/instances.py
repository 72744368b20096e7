"""Instance generation and problem reductions: max-clique and standard-QP
matrices, DIMACS graph ingestion, and seeded random generators.

All generators are pure functions of (parameters, seed); seeding uses
numpy's PCG64 via default_rng, recorded as the generator identity in
emitted metadata.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .copositivity import (
    COPOSITIVE,
    NOT_COPOSITIVE,
    CopoConfig,
    test_copositive,
)
from .linalg import as_sym_matrix

GENERATOR_ID = "numpy-pcg64"


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InconsistentHeader(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; edges are 0-indexed pairs (i, j) with i < j."""

    n: int
    edges: frozenset

    def __post_init__(self):
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"invalid edge ({i}, {j}) for {self.n} nodes")

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def load_dimacs(path) -> Graph:
    """Parse a DIMACS edge-list file ("p edge n m" header, "e i j" lines)."""
    n = None
    declared_m = None
    edges = set()
    edge_lines = 0
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            parts = line.split()
            if parts[0] == "p":
                if n is not None:
                    raise ParseError("duplicate problem line", lineno)
                if len(parts) != 4 or parts[1] not in ("edge", "col"):
                    raise ParseError("malformed problem line", lineno)
                try:
                    n, declared_m = int(parts[2]), int(parts[3])
                except ValueError:
                    raise ParseError("non-integer header fields", lineno) from None
                if n < 1 or declared_m < 0:
                    raise ParseError("invalid header counts", lineno)
            elif parts[0] == "e":
                if n is None:
                    raise ParseError("edge before problem line", lineno)
                if len(parts) != 3:
                    raise ParseError("malformed edge line", lineno)
                try:
                    i, j = int(parts[1]), int(parts[2])
                except ValueError:
                    raise ParseError("non-integer endpoints", lineno) from None
                if i == j:
                    raise ParseError(f"self-loop on node {i}", lineno)
                if not (1 <= i <= n and 1 <= j <= n):
                    raise ParseError(f"endpoint out of range ({i}, {j})", lineno)
                edges.add((min(i, j) - 1, max(i, j) - 1))
                edge_lines += 1
            else:
                raise ParseError(f"unknown record {parts[0]!r}", lineno)
    if n is None:
        raise ParseError("missing problem line", 0)
    if edge_lines != declared_m:
        raise InconsistentHeader(
            f"header declares {declared_m} edges, file has {edge_lines}"
        )
    return Graph(n, frozenset(edges))


def save_dimacs(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"p edge {g.n} {g.m}\n")
        for i, j in sorted(g.edges):
            fh.write(f"e {i + 1} {j + 1}\n")


def max_clique_matrix(g: Graph, gamma: float) -> np.ndarray:
    """The clique-detection matrix gamma * (E - adjacency) - E."""
    e = np.ones((g.n, g.n))
    return gamma * (e - g.adjacency()) - e


def std_qp_matrix(q: np.ndarray, gamma: float) -> np.ndarray:
    """The level-shift matrix Q - gamma * E for the simplex-constrained QP."""
    q = as_sym_matrix(q)
    return q - gamma * np.ones_like(q)


def clique_number(
    g: Graph, cfg: CopoConfig | None = None, budget: int | None = None
) -> int | None:
    """Clique number via copositivity probes at half-integer shifts.

    Probing gamma = k + 1/2 keeps every tested matrix strictly inside or
    outside the copositive cone (the boundary matrix at the clique number
    itself stalls partition algorithms).  Binary search over k; returns None
    if any probe exhausts its budget.
    """
    if g.n < 1:
        raise ValueError("graph must be nonempty")
    if g.n == 1:
        return 1
    if cfg is None:
        cfg = CopoConfig()
    if budget is not None:
        cfg = CopoConfig(**{**cfg.__dict__, "max_iterations": budget})
    lo, hi = 1, g.n  # probe at k + 1/2: copositive => omega <= k
    while lo < hi:
        mid = (lo + hi) // 2
        res = test_copositive(max_clique_matrix(g, mid + 0.5), cfg)
        if res.outcome == COPOSITIVE:
            hi = mid
        elif res.outcome == NOT_COPOSITIVE:
            lo = mid + 1
        else:
            return None
    return lo


@dataclass
class QpBound:
    """Bracket [lo, hi] on the simplex-QP optimum; converged marks whether
    the bracket closed to the requested width."""

    lo: float
    hi: float
    converged: bool


def qp_optimum(
    q: np.ndarray,
    cfg: CopoConfig | None = None,
    eta: float = 0.1,
    budget: int | None = None,
) -> QpBound:
    """Bracket the minimum of x^T Q x over the standard simplex by bisection
    on the level shift: a copositive probe raises the lower bound, a
    non-copositive probe lowers the upper bound."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    q = as_sym_matrix(q)
    if cfg is None:
        cfg = CopoConfig()
    if budget is not None:
        cfg = CopoConfig(**{**cfg.__dict__, "max_iterations": budget})
    diag = np.diag(q)
    lo = float(np.min(diag) - q.shape[0] * np.max(np.abs(q)))
    hi = float(np.max(diag))
    while hi - lo > eta:
        mid = 0.5 * (lo + hi)
        res = test_copositive(std_qp_matrix(q, mid), cfg)
        if res.outcome == COPOSITIVE:
            lo = mid
        elif res.outcome == NOT_COPOSITIVE:
            hi = mid
        else:
            return QpBound(lo, hi, converged=False)
    return QpBound(lo, hi, converged=True)


def gen_random_spn(n: int, seed) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Random member of the PSD-plus-nonnegative cone: S is a Gaussian Gram
    matrix, N a symmetrized uniform matrix shifted so its smallest diagonal
    entry is zero.  Returns (A, S, N) with A = S + N."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((n, n))
    s = b @ b.T
    f = rng.uniform(0.0, 1.0, size=(n, n))
    c = f + f.T
    n_mat = c - np.min(np.diag(c)) * np.eye(n)
    return s + n_mat, s, n_mat


@dataclass(frozen=True)
class PlantedQp:
    """Simplex QP with a known global minimizer x_star and optimum t."""

    Q: np.ndarray
    x_star: np.ndarray
    t: float


def gen_planted_qp(
    n: int,
    support_size: int,
    t: float,
    noise_scale: float = 1.0,
    seed=None,
) -> PlantedQp:
    """Simplex QP with a planted minimizer.

    Draws x_star uniformly on a random face of the simplex, then builds
    Q = t*E + R^T H R + N0 with R = I - x_star e^T (so R x = x - x_star on
    the simplex), H a scaled Gaussian Gram matrix, and N0 nonnegative noise
    vanishing on the support block.  The form then satisfies
    x^T Q x = t + (x - x_star)^T H (x - x_star) + x^T N0 x >= t on the
    simplex, with equality at x_star.
    """
    if not (1 <= support_size <= n):
        raise ValueError("support_size must lie in [1, n]")
    rng = np.random.default_rng(seed)
    support = np.sort(rng.choice(n, size=support_size, replace=False))
    x_star = np.zeros(n)
    x_star[support] = rng.dirichlet(np.ones(support_size))
    e = np.ones(n)
    r = np.eye(n) - np.outer(x_star, e)
    g = rng.standard_normal((n, n))
    h = noise_scale * (g @ g.T) / n
    n0 = noise_scale * _symmetric_uniform(rng, n)
    n0[np.ix_(support, support)] = 0.0
    q = t * np.outer(e, e) + r.T @ h @ r + n0
    q = (q + q.T) / 2.0
    return PlantedQp(Q=q, x_star=x_star, t=float(t))


def _symmetric_uniform(rng, n):
    f = rng.uniform(0.0, 1.0, size=(n, n))
    return (f + f.T) / 2.0


def gen_gnp_graph(n: int, p: float, seed=None) -> Graph:
    """Erdos-Renyi graph with edge probability p."""
    rng = np.random.default_rng(seed)
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.uniform() < p:
                edges.add((i, j))
    return Graph(n, frozenset(edges))


def plant_clique(g: Graph, k: int, seed=None) -> Graph:
    """Add a k-clique on random nodes, guaranteeing clique number >= k."""
    if not (1 <= k <= g.n):
        raise ValueError("clique size must lie in [1, n]")
    rng = np.random.default_rng(seed)
    nodes = sorted(rng.choice(g.n, size=k, replace=False))
    extra = {
        (nodes[a], nodes[b]) for a in range(k) for b in range(a + 1, k)
    }
    return Graph(g.n, frozenset(set(g.edges) | extra))

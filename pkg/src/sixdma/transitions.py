"""Movement cost model and optimal antenna-to-target matching.

Movement happens on the position grid graph: one step relocates a surface to a
grid neighbour. Per-antenna step counts are BFS distances; a period transition
assigns current antenna positions to target positions with the penalized cost

    C[u, v] = d[u, v] + kappa * d[u, v]^2

where kappa below 1/(U * d_max^2) keeps the penalty sum under one full step.
The planner first minimizes the total step count, then the slowest antenna's
step count among minimum-total assignments, then spreads the remaining steps
as evenly as possible via the penalty term.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .geometry import ConfigSpace

_BIG = 1e12


class UnreachableTargetError(ValueError):
    """A requested target position is not reachable on the grid graph."""


class PositionGraph:
    """Undirected movement graph over catalog positions."""

    def __init__(self, adjacency: list[list[int]]):
        self.adjacency = adjacency
        self._all_pairs: np.ndarray | None = None

    @classmethod
    def from_config_space(cls, space: ConfigSpace) -> "PositionGraph":
        return cls([list(nbrs) for nbrs in space.neighbors])

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    def all_pairs_distances(self) -> np.ndarray:
        """BFS distances between every pair of nodes, cached. -1 = unreachable."""
        if self._all_pairs is None:
            n = self.node_count
            dist = np.full((n, n), -1, dtype=int)
            for s in range(n):
                dist[s] = _bfs_from(self.adjacency, s)
            self._all_pairs = dist
        return self._all_pairs

    def diameter(self) -> int:
        dist = self.all_pairs_distances()
        if (dist < 0).any():
            raise UnreachableTargetError("graph is disconnected")
        return int(dist.max())


def _bfs_from(adjacency: list[list[int]], src: int) -> np.ndarray:
    dist = np.full(len(adjacency), -1, dtype=int)
    dist[src] = 0
    queue = deque([src])
    while queue:
        a = queue.popleft()
        for b in adjacency[a]:
            if dist[b] < 0:
                dist[b] = dist[a] + 1
                queue.append(b)
    return dist


def bfs_distance(graph: PositionGraph, src: int, dst: int) -> int:
    """Minimum number of grid steps from src to dst."""
    n = graph.node_count
    if not (0 <= src < n and 0 <= dst < n):
        raise IndexError("node index out of range")
    d = int(_bfs_from(graph.adjacency, src)[dst])
    if d < 0:
        raise UnreachableTargetError(f"no path from {src} to {dst}")
    return d


def default_kappa(U: int, d_max: int) -> float:
    """Penalty weight strictly inside the admissible range (0, 1/(U*d_max^2))."""
    if U < 1 or d_max < 1:
        raise ValueError("U and d_max must be >= 1")
    return 0.5 / (U * d_max * d_max)


@dataclass
class CostMatrices:
    steps: np.ndarray      # (U, U) BFS step counts
    penalized: np.ndarray  # steps + kappa * steps^2
    kappa: float


def build_cost_matrices(graph: PositionGraph, src_positions, dst_positions,
                        kappa: float | None = None) -> CostMatrices:
    src = list(src_positions)
    dst = list(dst_positions)
    if len(src) != len(dst):
        raise ValueError("source and target sets must have equal size")
    apd = graph.all_pairs_distances()
    D = apd[np.ix_(src, dst)].astype(float)
    if (D < 0).any():
        raise UnreachableTargetError("some targets unreachable from sources")
    if kappa is None:
        kappa = default_kappa(len(src), graph.diameter())
    return CostMatrices(steps=D, penalized=D + kappa * D * D, kappa=kappa)


@dataclass(frozen=True)
class TransitionPlan:
    assignment: tuple[int, ...]   # antenna u moves to target slot assignment[u]
    steps: tuple[int, ...]        # per-antenna step counts
    total_steps: int
    max_steps: int
    energy_lower_bound: float
    time_lower_bound: float
    kappa: float


def _solve(C: np.ndarray) -> tuple[np.ndarray, float]:
    rows, cols = linear_sum_assignment(C)
    return cols, float(C[rows, cols].sum())


def plan_transition(graph: PositionGraph, src_positions, dst_positions,
                    kappa: float | None = None, delta_e: float = 1.0,
                    delta_t_step: float = 1.0) -> TransitionPlan:
    """Optimal matching of current antenna positions to target positions.

    Guarantees, in order: total step count is the global minimum over all
    assignments; among minimum-total assignments, the largest per-antenna step
    count is minimal; among those, the kappa-penalized cost (load balance) is
    minimal; remaining ties go to the lexicographically smallest
    (source, target) matching, so the plan is a deterministic function of its
    inputs.
    """
    mats = build_cost_matrices(graph, src_positions, dst_positions, kappa)
    D, C = mats.steps, mats.penalized
    U = D.shape[0]

    _, s_star = _solve(D)

    # smallest max-step threshold that still attains the minimum total
    tau_star = None
    for tau in np.unique(D):
        Dt = np.where(D <= tau, D, _BIG)
        _, total = _solve(Dt)
        if total <= s_star + 1e-9:
            tau_star = tau
            break
    assert tau_star is not None

    # kappa-penalized refinement inside the (min total, min max) set; the
    # penalty sum is < 1 while totals are integers, so the optimum keeps s_star
    _, c_star = _solve(np.where(D <= tau_star, C, _BIG))
    tol = 1e-9 * max(1.0, abs(c_star))

    # lexicographic (source, then target) refinement at fixed cost and threshold
    Ct = np.where(D <= tau_star, C, _BIG)
    fixed: dict[int, int] = {}
    free_targets = set(range(U))
    for u in range(U):
        fixed_cost = sum(C[a, b] for a, b in fixed.items())
        rest_rows = [a for a in range(U) if a > u]
        for v in sorted(free_targets):
            if D[u, v] > tau_star:
                continue
            rest_cols = sorted(free_targets - {v})
            if rest_rows:
                sub, total = _solve(Ct[np.ix_(rest_rows, rest_cols)])
                if total >= _BIG / 2:
                    continue
            else:
                total = 0.0
            if fixed_cost + C[u, v] + total <= c_star + tol:
                fixed[u] = v
                free_targets.remove(v)
                break
        assert u in fixed, "no cost-preserving target found"

    assignment = tuple(fixed[u] for u in range(U))
    steps = tuple(int(D[u, fixed[u]]) for u in range(U))
    total_steps = int(sum(steps))
    max_steps = int(max(steps)) if steps else 0
    return TransitionPlan(
        assignment=assignment,
        steps=steps,
        total_steps=total_steps,
        max_steps=max_steps,
        energy_lower_bound=delta_e * total_steps,
        time_lower_bound=delta_t_step * max_steps,
        kappa=mats.kappa,
    )

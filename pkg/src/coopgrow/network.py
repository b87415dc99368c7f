"""Growing undirected simple graphs with preferential or uniform attachment."""

from __future__ import annotations

import enum
import os

import numpy as np

__all__ = ["GrowthMechanism", "Network", "write_edge_list"]


class GrowthMechanism(enum.Enum):
    """How a newcomer picks the existing nodes it links to."""

    PREFERENTIAL = "ba"
    RANDOM = "random"

    @classmethod
    def from_label(cls, label: str) -> "GrowthMechanism":
        for mech in cls:
            if mech.value == label:
                return mech
        raise ValueError(f"unknown growth mechanism {label!r}; expected 'ba' or 'random'")


class Network:
    """Undirected simple graph that only ever gains nodes and edges.

    Nodes are numbered 0..N-1 in insertion order. Storage is append-friendly
    and numpy-backed so the hot paths of a simulation (degree lookups,
    uniform neighbor picks, per-edge payoff sums) stay vectorized:

    * a padded per-node neighbor table (row i holds the neighbors of i in
      the order the edges were created),
    * flat edge arrays (one entry per undirected edge),
    * a flat list of edge endpoints in which every node appears once per
      unit of degree, used for degree-proportional target sampling.

    A freshly constructed ``Network(n0)`` is the complete graph on ``n0``
    nodes; ``n0 = 1`` is a single isolated node. Deleting nodes or edges is
    unsupported.
    """

    def __init__(self, n0: int):
        if n0 < 1:
            raise ValueError(f"seed clique needs at least 1 node, got {n0}")
        self._n = 0  # nodes
        self._m = 0  # edges
        self._n_isolated = 0
        cap_nodes = max(2 * n0, 16)
        cap_cols = max(n0 - 1, 4)
        cap_edges = max(n0 * (n0 - 1), 32)
        self._deg = np.zeros(cap_nodes, dtype=np.int64)
        self._nbr = np.zeros((cap_nodes, cap_cols), dtype=np.int32)
        self._eu = np.zeros(cap_edges, dtype=np.int64)
        self._ev = np.zeros(cap_edges, dtype=np.int64)
        self._endpoints = np.zeros(2 * cap_edges, dtype=np.int32)
        for _ in range(n0):
            self._new_node()
        for i in range(n0):
            for j in range(i + 1, n0):
                self._add_edge(i, j)

    @classmethod
    def from_edges(cls, num_nodes: int, edges) -> "Network":
        """Build a graph with ``num_nodes`` nodes and the given (i, j) edges.

        Mainly useful for constructing fixed test topologies; growth methods
        work on the result exactly as on a grown graph.
        """
        if num_nodes < 1:
            raise ValueError("need at least one node")
        net = cls(1)
        for _ in range(num_nodes - 1):
            net._new_node()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise ValueError(f"edge ({u}, {v}) out of range for {num_nodes} nodes")
            if u in net._nbr[v, : net._deg[v]]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            net._add_edge(u, v)
        return net

    # -- storage -----------------------------------------------------------

    def _new_node(self) -> int:
        if self._n == len(self._deg):
            grow = self._n * 2
            self._deg = np.concatenate([self._deg, np.zeros(self._n, dtype=np.int64)])
            pad = np.zeros((grow - self._nbr.shape[0], self._nbr.shape[1]), dtype=np.int32)
            self._nbr = np.concatenate([self._nbr, pad])
        idx = self._n
        self._n += 1
        self._n_isolated += 1
        return idx

    def _add_edge(self, u: int, v: int) -> None:
        if self._m == len(self._eu):
            grow = self._m * 2
            self._eu = np.concatenate([self._eu, np.zeros(self._m, dtype=np.int64)])
            self._ev = np.concatenate([self._ev, np.zeros(self._m, dtype=np.int64)])
            self._endpoints = np.concatenate(
                [self._endpoints, np.zeros(2 * grow - len(self._endpoints), dtype=np.int32)]
            )
        need = max(self._deg[u], self._deg[v]) + 1
        if need > self._nbr.shape[1]:
            extra = np.zeros((self._nbr.shape[0], self._nbr.shape[1]), dtype=np.int32)
            self._nbr = np.concatenate([self._nbr, extra], axis=1)
        self._eu[self._m] = u
        self._ev[self._m] = v
        self._endpoints[2 * self._m] = u
        self._endpoints[2 * self._m + 1] = v
        self._m += 1
        for a, b in ((u, v), (v, u)):
            if self._deg[a] == 0:
                self._n_isolated -= 1
            self._nbr[a, self._deg[a]] = b
            self._deg[a] += 1

    # -- queries -----------------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return self._n

    @property
    def edge_count(self) -> int:
        return self._m

    @property
    def degree_sum(self) -> int:
        return 2 * self._m

    @property
    def degrees(self) -> np.ndarray:
        """Degree of every node (read-only view, do not modify)."""
        return self._deg[: self._n]

    @property
    def neighbor_table(self) -> np.ndarray:
        """Padded neighbor table view: row i is valid up to degrees[i]."""
        return self._nbr[: self._n]

    @property
    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoint arrays (u, v), one entry per edge in creation order."""
        return self._eu[: self._m], self._ev[: self._m]

    def degree(self, i: int) -> int:
        self._check_node(i)
        return int(self._deg[i])

    def neighbors(self, i: int) -> np.ndarray:
        """Neighbors of node i in edge-creation order."""
        self._check_node(i)
        return self._nbr[i, : self._deg[i]].astype(np.int64)

    def _check_node(self, i: int) -> None:
        if not 0 <= i < self._n:
            raise ValueError(f"node {i} out of range (have {self._n} nodes)")

    # -- growth ------------------------------------------------------------

    def sample_targets_preferential(self, L: int, rng: np.random.Generator) -> np.ndarray:
        """Draw L distinct existing nodes, each degree-proportionally.

        Draws are sequential without replacement: every draw is exactly
        degree-proportional over the not-yet-chosen nodes (rejection on the
        flat endpoint list, which lists each node once per unit of degree).
        """
        L = self._check_link_count(L)
        if L == self._n:
            return np.arange(self._n, dtype=np.int64)
        if self._m == 0:
            # Edgeless graph (1-node seed): all degree weights vanish, so the
            # first attachment falls back to a uniform draw.
            return self._sample_uniform(L, rng)
        if L > self._n - self._n_isolated:
            raise ValueError(
                f"cannot pick {L} degree-weighted targets: only "
                f"{self._n - self._n_isolated} nodes have nonzero degree"
            )
        ends = self._endpoints
        span = 2 * self._m
        chosen: list[int] = []
        seen: set[int] = set()
        while len(chosen) < L:
            for idx in rng.integers(0, span, size=L - len(chosen) + 4):
                t = int(ends[idx])
                if t not in seen:
                    seen.add(t)
                    chosen.append(t)
                    if len(chosen) == L:
                        break
        return np.asarray(chosen, dtype=np.int64)

    def sample_targets_random(self, L: int, rng: np.random.Generator) -> np.ndarray:
        """Draw L distinct existing nodes uniformly without replacement."""
        L = self._check_link_count(L)
        if L == self._n:
            return np.arange(self._n, dtype=np.int64)
        return self._sample_uniform(L, rng)

    def _sample_uniform(self, L: int, rng: np.random.Generator) -> np.ndarray:
        chosen: list[int] = []
        seen: set[int] = set()
        while len(chosen) < L:
            for t in rng.integers(0, self._n, size=L - len(chosen) + 4):
                t = int(t)
                if t not in seen:
                    seen.add(t)
                    chosen.append(t)
                    if len(chosen) == L:
                        break
        return np.asarray(chosen, dtype=np.int64)

    def _check_link_count(self, L: int) -> int:
        L = int(L)
        if L < 1:
            raise ValueError(f"need at least one link per new node, got L={L}")
        if L > self._n:
            raise ValueError(f"cannot attach {L} links: only {self._n} nodes exist")
        return L

    def add_node_preferential(self, L: int, rng: np.random.Generator) -> int:
        """Add one node with L links, targets drawn degree-proportionally."""
        targets = self.sample_targets_preferential(L, rng)
        return self._attach(targets)

    def add_node_random(self, L: int, rng: np.random.Generator) -> int:
        """Add one node with L links, targets drawn uniformly."""
        targets = self.sample_targets_random(L, rng)
        return self._attach(targets)

    def add_node(self, mechanism: GrowthMechanism, L: int, rng: np.random.Generator) -> int:
        if mechanism is GrowthMechanism.PREFERENTIAL:
            return self.add_node_preferential(L, rng)
        if mechanism is GrowthMechanism.RANDOM:
            return self.add_node_random(L, rng)
        raise ValueError(f"unknown growth mechanism {mechanism!r}")

    def _attach(self, targets: np.ndarray) -> int:
        """Bulk-wire one new node to distinct existing targets."""
        new = self._new_node()
        k = len(targets)
        while self._m + k > len(self._eu):
            grow = len(self._eu) * 2
            self._eu = np.concatenate([self._eu, np.zeros(len(self._eu), dtype=np.int64)])
            self._ev = np.concatenate([self._ev, np.zeros(len(self._ev), dtype=np.int64)])
            self._endpoints = np.concatenate(
                [self._endpoints, np.zeros(2 * grow - len(self._endpoints), dtype=np.int32)]
            )
        need = max(int(self._deg[targets].max()) + 1, k) if k else 0
        while need > self._nbr.shape[1]:
            extra = np.zeros((self._nbr.shape[0], self._nbr.shape[1]), dtype=np.int32)
            self._nbr = np.concatenate([self._nbr, extra], axis=1)
        m = self._m
        self._eu[m : m + k] = targets
        self._ev[m : m + k] = new
        ends = self._endpoints[2 * m : 2 * (m + k)]
        ends[0::2] = targets
        ends[1::2] = new
        self._m += k
        self._nbr[new, :k] = targets
        self._nbr[targets, self._deg[targets]] = new  # targets are distinct
        self._n_isolated -= int(np.count_nonzero(self._deg[targets] == 0))
        self._deg[targets] += 1
        self._deg[new] = k
        if k:
            self._n_isolated -= 1
        return new


def write_edge_list(net: Network, path, *, mechanism, L: int, seed: int) -> None:
    """Write a plain-text edge list: one "i j" pair per line, i < j, in edge
    creation order, preceded by a single metadata header line."""
    label = mechanism.value if isinstance(mechanism, GrowthMechanism) else str(mechanism)
    eu, ev = net.edges
    lo = np.minimum(eu, ev)
    hi = np.maximum(eu, ev)
    own = isinstance(path, (str, os.PathLike))
    fh = open(path, "w") if own else path
    try:
        fh.write(
            f"# nodes={net.num_nodes} edges={net.edge_count} "
            f"mechanism={label} L={L} seed={seed}\n"
        )
        for a, b in zip(lo, hi):
            fh.write(f"{a} {b}\n")
    finally:
        if own:
            fh.close()

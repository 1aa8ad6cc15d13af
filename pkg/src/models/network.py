# src/models/network.py

"""
Modelo de red para gossip: grafo simple, conexo y no dirigido con valores
privados por nodo, y el reporte de una simulación
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from core.errors import ContractViolation


Edge = Tuple[int, int]


@dataclass(frozen=True)
class GossipNetwork:
    """
    Red (V, E) con n nodos y valores c ∈ R^n

    Los nodos se indexan desde 0. Cada arista no dirigida aparece una sola vez
    orientada como (min, max); el orden de la lista fija el orden de las filas
    de las matrices de los modelos.
    """
    n: int
    edges: List[Edge]
    values: Optional[np.ndarray] = None

    def __post_init__(self):
        oriented = [(min(int(i), int(j)), max(int(i), int(j))) for i, j in self.edges]
        object.__setattr__(self, 'edges', oriented)

        values = (np.zeros(self.n) if self.values is None
                  else np.array(self.values, dtype=np.float64).reshape(-1))
        object.__setattr__(self, 'values', values)
        self.validate()

    def validate(self) -> None:
        """Validar que el grafo sea simple, conexo y con n valores"""
        if self.n < 2:
            raise ContractViolation("network needs at least 2 nodes")
        if self.values.shape[0] != self.n:
            raise ContractViolation(
                f"expected {self.n} node values, got {self.values.shape[0]}"
            )

        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ContractViolation(f"self-loop at node {i}")
            if i < 0 or j >= self.n:
                raise ContractViolation(f"edge ({i}, {j}) out of range 0..{self.n - 1}")
            if (i, j) in seen:
                raise ContractViolation(f"duplicate edge ({i}, {j})")
            seen.add((i, j))

        if not nx.is_connected(self.graph):
            raise ContractViolation("network is not connected")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def neighbors(self) -> List[List[int]]:
        """Listas de adyacencia N(i), ordenadas"""
        return [sorted(self.graph.neighbors(i)) for i in range(self.n)]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(adjacent) for adjacent in self.neighbors])

    @property
    def mean(self) -> float:
        """c̄ = Σ c_i / n"""
        return float(self.values.mean())

    def edge_index(self, edge: Edge) -> int:
        """Posición de la arista en la lista (fila del modelo 1)"""
        i, j = edge
        try:
            return self.edges.index((min(i, j), max(i, j)))
        except ValueError:
            raise ContractViolation(f"edge ({i}, {j}) is not in the network") from None

    def with_values(self, values: Sequence[float]) -> 'GossipNetwork':
        return GossipNetwork(n=self.n, edges=list(self.edges), values=values)

    # ═══════════════════════════════════════════════════════════
    # CONSTRUCTORES
    # ═══════════════════════════════════════════════════════════

    @classmethod
    def from_graph(cls, graph: nx.Graph, values=None) -> 'GossipNetwork':
        """Red a partir de un grafo networkx con nodos 0..n−1"""
        return cls(n=graph.number_of_nodes(), edges=sorted(graph.edges()), values=values)

    @classmethod
    def complete(cls, n: int, values=None) -> 'GossipNetwork':
        return cls.from_graph(nx.complete_graph(n), values)

    @classmethod
    def path(cls, n: int, values=None) -> 'GossipNetwork':
        return cls.from_graph(nx.path_graph(n), values)

    @classmethod
    def star(cls, n: int, values=None) -> 'GossipNetwork':
        """Estrella con centro 0 y hojas 1..n−1"""
        return cls.from_graph(nx.star_graph(n - 1), values)

    @classmethod
    def random_connected(
        cls,
        n: int,
        p: float,
        seed: int = 0,
        values=None,
        max_attempts: int = 1000
    ) -> 'GossipNetwork':
        """
        Grafo G(n, p) re-muestreado hasta que sea conexo

        Args:
            n: Número de nodos
            p: Probabilidad de cada arista
            seed: Semilla
            values: Valores de los nodos (por defecto 0)
            max_attempts: Intentos antes de rendirse
        """
        if not 0 < p <= 1:
            raise ContractViolation(f"edge probability must be in (0, 1], got {p}")
        rng = np.random.default_rng(seed)
        for _ in range(max_attempts):
            graph = nx.gnp_random_graph(n, p, seed=int(rng.integers(2 ** 31)))
            if nx.is_connected(graph):
                return cls.from_graph(graph, values)
        raise ContractViolation(f"no connected G({n}, {p}) after {max_attempts} attempts")

    def spanning_tree(self) -> 'GossipNetwork':
        """Subgrafo generador (árbol) sobre los mismos nodos y valores"""
        tree = nx.minimum_spanning_tree(self.graph)
        return GossipNetwork(n=self.n, edges=sorted(tree.edges()), values=self.values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'm': self.m,
            'max_degree': int(self.degrees.max()),
            'mean': self.mean
        }


@dataclass
class GossipReport:
    """
    Resultado de `run_gossip`

    corrections = A^T y^k con y^k los pesos duales de aristas (modelo 1) o
    nodos (modelo 2); converge a δ_i = c̄ − c_i.
    """
    model: int
    rounds: int
    trace_rounds: List[int] = field(default_factory=list)
    trace_values: List[np.ndarray] = field(default_factory=list)
    final_values: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    corrections: Optional[np.ndarray] = None
    gap: Optional[float] = None

    def max_deviation(self, target: float) -> float:
        """max_i |x_i − target| en los valores finales"""
        return float(np.max(np.abs(self.final_values - target)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'model': self.model,
            'rounds': self.rounds,
            'recorded': len(self.trace_rounds),
            'final_values': self.final_values.tolist() if self.final_values is not None else None,
            'gap': self.gap
        }

"""Eigenvector centrality as a QUBO: builders, exact and annealing solvers,
and tau-sweep node hierarchies, with classical reference measures."""

__version__ = "0.1.0"

from .centrality import (
    CentralityVector,
    degree_centrality,
    eigencentrality,
    matrix_exponential,
    penalty_relaxation,
    top_tau,
    walk_centrality,
)
from .errors import (
    CapacityError,
    ConvergenceError,
    DisconnectedGraphError,
    ECQuboError,
    GraphError,
)
from .graph import Graph, adjacency, builtin, degrees, density, load_graph, parse_edge_list
from .qubo import (
    IsingModel,
    QuboMatrix,
    build_ec_qubo,
    build_naive_qubo,
    constraint_matrix,
    default_penalties,
    qubo_energy,
    to_ising,
)
from .ranking import compare_rankings, rank_from_sweep, tau_sweep
from .solvers import SampleSet, ground_nodes, solve_exhaustive, solve_fixed_weight, solve_sa

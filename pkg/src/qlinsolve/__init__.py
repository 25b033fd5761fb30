"""Linear equations and division as QUBO problems, with exact and annealing solvers."""
from .anneal import Annealer, BruteForce, SampleSet, SamplerConfig, make_solver, sample, sample_embedded
from .chimera import (
    BrokenChainError,
    ChimeraGraph,
    Embedding,
    build_chimera,
    embed_complete_graph,
    embed_hamiltonian,
    unembed,
    verify_embedding,
)
from .division import DivisionProblem, build_division_qubo, iterate_division, solve_division
from .encoding import BinaryEncoding, decode, encode_nearest, exponent_offset, floorexp
from .fixtures import FIXTURES, get_fixture
from .landscape import compare_embedded_landscape, degeneracy_report, gray_projection, gray_sequence
from .linear_system import (
    MatrixProblem,
    SingularMatrixError,
    build_linear_qubo,
    condition_number,
    invert_matrix,
    iterate_linear,
    solve_linear,
)
from .qubo_core import QuboModel, brute_force_solve, energy, scale_by_max_coupling, to_ising

__version__ = "0.1.0"

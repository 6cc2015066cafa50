from .matroid import (
    Matroid, FreeMatroid, UniformMatroid, PartitionMatroid, LaminarMatroid, ExplicitMatroid, ConstraintDecomposition
)
from .multigraph import Multigraph
from .lp_relaxation import solve_lp1
from .adaptive_rounding import DegreeBoundedMST, SolveResult, run
from .oracle import OracleReport, verify_solution, brute_force_opt
from .instance import Instance, parse_instance, emit_instance, save_instance
from .generator import generate_instance

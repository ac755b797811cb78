"""qkahler: exact verification of braided differential calculi and
Kahler/Lefschetz certificates on quantized cominuscule flag manifolds.

The engine computes braidings of based irreducible modules over the
standard quantized enveloping algebras, assembles the associated
first-order calculus tensors, machine-checks the component identities
they must satisfy, builds the quotient two-form complex, and certifies
the Lefschetz determinants with exact Laurent-polynomial arithmetic.
"""

__version__ = "0.1.0"

from .rootdata import build_root_system, classical_flag_dim, irreducible_nodes
from .scalars import Scalar, evaluate, parse
from .uqrep import build_irrep, dual_rep
from .braiding import (build_family, solve_braiding, verify_appendix_duality,
                       verify_conjugation, verify_yang_baxter)
from .quantalg import CoordinateAlgebra, build_coordinate_algebra
from .hkcalc import (build_T, build_calc_tensors, verify_del_delbar,
                     verify_idT1, verify_idT2, verify_tbraid_constant)
from .kahlercert import (PhiComplex, build_phi_complex, compute_I1,
                         lefschetz_certificate, phi_kappa,
                         star_reality_check, verify_classical_limit)

__all__ = [
    "__version__",
    "build_root_system", "classical_flag_dim", "irreducible_nodes",
    "Scalar", "evaluate", "parse",
    "build_irrep", "dual_rep",
    "build_family", "solve_braiding", "verify_appendix_duality",
    "verify_conjugation", "verify_yang_baxter",
    "CoordinateAlgebra", "build_coordinate_algebra",
    "build_T", "build_calc_tensors", "verify_del_delbar",
    "verify_idT1", "verify_idT2", "verify_tbraid_constant",
    "PhiComplex", "build_phi_complex", "compute_I1",
    "lefschetz_certificate", "phi_kappa",
    "star_reality_check", "verify_classical_limit",
]

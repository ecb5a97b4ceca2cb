"""Invariant-theoretic analysis of symplectic representations of connected
reductive groups: exact root data and weight combinatorics, the iterated
local-structure reduction (rank, complexity, little Weyl group, isotropy),
explicit matrix models, and numeric verification of the structure theory.
"""

__version__ = "0.1.0"

from .rootdata import (
    RootDatum,
    build_root_datum,
    enumerate_weyl,
    levi_subdatum,
    positive_roots,
    subspace_normalizer,
)
from .reps import (
    DualityClass,
    SympRepSpec,
    decompose_weights,
    duality_class,
    freudenthal_multiplicities,
    invariant_dims,
    validate_symplectic_spec,
    weyl_dim,
)
from .classify import (
    WeightStatus,
    is_singular_weight,
    lemma2chi_conditions,
    terminal_decomposition,
    weight_status,
)
from .reduction import (
    AnalysisReport,
    analyze,
    choose_nonterminal_weight,
    compute_gamma,
    centralizer_levi,
    determine_little_weyl,
    isotropy_shape,
    rank_complexity,
    reduce_step,
    run_reduction,
)
from .matrixrep import MatrixRep, build_rep, find_hw_vectors
from .numeric import (
    coisotropy_test,
    inv_moment_eval,
    jacobian_rank_and_orbit,
    moment_eval,
    phi_solve_q_embed,
    poisson_bracket,
    verify_commute,
)
from .sections import build_section, char_reduction_phi, rho_psg, torus_section
from .verify import verify_suite

"""Construction and numerical verification of ruled austere 4-folds.

Library layout:

- numerics: exact second-order jets of closed-form maps, Jacobi eigensolver,
  orthonormal complements, numerical rank.
- geometry: adapted frames, second fundamental forms, rulings, relative
  nullity, ruling-map holomorphy.
- austere: exact austerity tests for matrices and subspaces; the three
  maximal 4x4 models.
- families: generalized helicoids, products, cones, complex cones, controls.
- classify: which maximal model(s) a shape-operator span fits after rotation.
- slag: conormal-bundle Lagrangian and calibration-phase checks.
- cli: command-line driver (`austere4 ...`).
"""

from .austere import (
    QCParams,
    SymSpan,
    eigen_symmetry_oracle,
    is_austere_matrix,
    is_austere_subspace,
    is_simple,
    lambda3_from,
    qa_basis,
    qa_complex_structure,
    qb_basis,
    qb_matrix,
    qc_basis,
    qc_matrix,
    span_odd_trace_defect,
)
from .families import (
    HelicoidSpec,
    HoloCurveSpec,
    classical_helicoid,
    complex_cone,
    default_complex_cone,
    generalized_helicoid,
    helicoid_cone,
    helicoid_times_plane,
    product_immersion,
    product_of_helicoids,
    sphere,
)
from .geometry import (
    Immersion,
    PointFrame,
    SecondFundamentalForm,
    austere_defect,
    frame_at,
    gauss_map_rank,
    is_austere_immersion,
    mean_curvature_vector,
    normal_rank,
    relative_nullity,
    ruled_condition_check,
    ruling_frame_basis,
    ruling_invariance_defect,
    ruling_map_holomorphy_defect,
    ruling_straightness_defect,
    sample_grid,
    sample_random,
    second_fundamental_form,
    shape_operator,
)
from .numerics import (
    DomainError,
    ExprMap,
    Jet2,
    SingularImmersionError,
    SymMatrix,
    finite_diff_second,
    jet_eval,
    numerical_rank,
    orthonormal_complement,
    sym_eig,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

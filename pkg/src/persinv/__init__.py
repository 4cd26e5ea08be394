"""Exact rank invariants, signed cube decompositions and power-sum features
of finite multiparameter persistence modules."""

from .core import (
    InvalidModuleError,
    PersistenceModule,
    ValidationReport,
    direct_sum,
    interval_module,
    module_from_cubes,
    rank,
    rank_real,
    rank_table,
    validate,
    zero_module,
)
from .decomposition import (
    NotRankInvariantError,
    SignedCubeSet,
    cube_rank,
    decompose,
    order_cmp,
    reconstruct,
    signed_rank,
)
from .grid import CubeSpec, GridBox, RankInvariant
from .invariants import (
    FeatureVector,
    InvariantIndex,
    f_cube,
    f_integral_oracle,
    f_interval_1d,
    f_module,
    f_signed,
    f_to_p_matrix,
    feature_vector,
    p_module,
    p_signed,
)

__version__ = "0.1.0"

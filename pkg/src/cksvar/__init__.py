"""Censored and kinked structural VARs with unit roots.

Model construction and canonical transforms live in :mod:`cksvar.model`,
rank-pattern classification and projection geometry in :mod:`cksvar.vecm`,
stability certificates in :mod:`cksvar.companion` and :mod:`cksvar.jsr`,
path simulation in :mod:`cksvar.simulate`, discretised limit processes in
:mod:`cksvar.limits`, and the Monte Carlo harness in
:mod:`cksvar.montecarlo`.
"""

from .errors import (
    AssumptionViolationError,
    CaseError,
    CksvarError,
    CoherenceError,
    DgpError,
    DimensionMismatchError,
    ModelFileError,
)
from .model import (
    CanonicalModel,
    CksvarModel,
    DgpReport,
    flip_y,
    istar,
    load_model,
    save_model,
    split,
    threshold_shift,
    to_canonical,
    validate_dgp,
)
from .vecm import (
    Case,
    CaseClassification,
    Factorization,
    KinkGeometry,
    ProjectionPair,
    VecmForm,
    canonical_model_from_vecm,
    classify_case,
    factorize_pi,
    kink_geometry,
    orthocomplement,
    projection_case1,
    projections,
    vecm_decompose,
)
from .jsr import CompanionSet, JsrEstimate, jsr_bounds
from .companion import (
    AssumptionReport,
    build_case2_set,
    build_F,
    det_poly_roots,
    verify_assumptions,
)
from .simulate import (
    InnovationSpec,
    Path,
    ScaledPath,
    gen_innovations,
    scale_path,
    short_memory_case1,
    short_memory_case2,
    simulate,
    simulate_batch,
)
from .limits import (
    BrownianGrid,
    LimitPath,
    brownian_grid,
    censor,
    kink,
    limit_case1,
    limit_case2,
    regulate,
)
from .examples import EXAMPLES, build_example, list_examples
from .montecarlo import KS_THRESHOLDS, McReport, McSpec, ResidualReport, residual_check, run_mc

__version__ = "0.1.0"

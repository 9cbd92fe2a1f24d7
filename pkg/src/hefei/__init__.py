"""Two-qubit separability via chiral Dirac-frame inequalities."""

__version__ = "0.1.0"

from .criteria import (
    HefeiMargins,
    PptResult,
    Verdict,
    chsh_max,
    concurrence,
    expectation_identity_check,
    hefei_margins,
    ppt_test,
)
from .dirac_frame import GammaSet, LocalFrame, build_gammas, build_observables, expansion_coefficients, verify_algebra
from .errors import HefeiError
from .frame_search import CriterionReport, SearchConfig, certify, seed_frames
from .states import (
    DensityMatrix,
    PureState,
    SchmidtForm,
    partial_time_reversal,
    partial_transpose,
    pure_to_density,
    random_mixed,
    random_pure,
    random_separable,
    schmidt_decompose,
    singlet,
    validate_density,
    werner,
)

"""Dimension distortion bounds for quasiconformal and quasisymmetric maps.

Closed-form bounds live in :mod:`qsdim.bounds`; the hyperbolic-geometry lemma
harness in :mod:`qsdim.hyperbolic`; pressure, entropy and Bowen's formula in
:mod:`qsdim.thermo`; explicit holomorphic motions in :mod:`qsdim.motion`;
multifractal spectra in :mod:`qsdim.spectra`.
"""

from .bounds import (
    Dilatation,
    antisym_expand,
    blaschke_sq,
    compress_bound,
    conformal_contract_bound,
    conformal_expand_bound,
    dilatation_convert,
    expand_bound,
    lp_exponent_bound,
    makarov_dim_lower,
    qs_norm_bounds,
)
from .estimators import BoxCountingSpectrum, IntegralMeansSpectrum, LegendreTransformer
from .exceptions import DepthOverflowError, DomainError, InjectivityError, NumericError, QSDimError
from .hyperbolic import (
    extremal_quotient_bound,
    hyp_dist,
    pseudo_hyp,
    schwarz_pick_quotient,
    three_point_check,
    verify_blaschke_lemma,
    verify_three_point,
)
from .motion import (
    MapFamily,
    MotionConfig,
    complex_radii,
    family_eval,
    image_diameter,
    qs_constant,
    stretch_eval,
    verify_packing_implication,
    verify_phi_properties,
)
from .spectra import (
    SelfSimilarMeasure,
    SpectrumCurve,
    beta_bound_theorem3,
    beta_estimate,
    box_f_estimate,
    check_spectrum_symmetries,
    conjectured_lower,
    f_bound_theorem3,
    f_oracle,
    legendre_transform,
    quasidisk_beta_bound,
    tau_selfsimilar,
)
from .thermo import (
    ComplexRadii,
    DiskPacking,
    bowen_dimension,
    entropy,
    gibbs_weights,
    lyapunov,
    phi_function,
    pressure,
    variational_gap,
)

__version__ = "0.1.0"

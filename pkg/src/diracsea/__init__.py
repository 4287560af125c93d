"""Numerical toolkit for the continuum-limit analysis of regularized Dirac seas."""

from .spectra import MassSpectrum, MixingCoefficients, LogConstants, solve_mixing, log_constants
from .regularization import (EXPONENTIAL, HARD_CUTOFF, RegularizationModel,
                             FieldConstants, basic_ratios, field_constants,
                             weak_eval, el_residual, scan)
from .kernels import (KernelPoint, StaticProfile, fhat_closed, fhat_quadrature,
                      kernel_points, spectral_identity_residual, static_profile,
                      yukawa, static_correction, uehling_coefficient)
from .axial import (AxialRequest, AxialSolution, construct, smax, smax_oracle,
                    verify_conditions)
from .chains import (ChainSurrogate, conjugate_pairing, same_spectrum,
                     vacuum_spectrum, chiral_spectrum, q_factor,
                     null_frame_components)

__version__ = "0.1.0"

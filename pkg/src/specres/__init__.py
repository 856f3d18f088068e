"""Heat coefficients and spectral zeta residues from finite partial spectra."""

from specres.errors import (EmptySpectrum, IllConditioned, InsufficientData, InvalidCutoff,
                            InvalidPoles, InvalidScales, NonpositiveEigenvalue, ParseError,
                            PoleOfGamma, QuadratureFailure, ScheduleViolation, SpecResError)
from specres.estimator import (EstimateResult, convergence_slope, dixmier_baseline,
                               epsilon_schedule, estimate_coefficient, estimate_with_epsilon,
                               sweep, to_zeta_residue)
from specres.filters import (F_laplace, Filter, PoleSet, basis_moment, build_filter, f_time,
                             moment_quadrature)
from specres.localized import (WeightedSpectrum, circle_projection_weights, estimate_localized,
                               load_weighted_spectrum)
from specres.models import (OracleData, Spectrum, circle_spectrum, load_spectrum,
                            sphere_spectrum, torus2_spectrum)
from specres.special_functions import gamma, upper_gamma

__version__ = "0.1.0"

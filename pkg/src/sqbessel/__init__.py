"""Index transforms with squared Bessel kernels.

The kernel ``Phi_tau(x) = sqrt(pi) sech(pi tau) Re J_{i tau}(sqrt x)^2`` pairs
functions on ``(0, inf)`` with functions of the index ``tau``:

    (F f)(tau) = int_0^inf Phi_tau(x) f(x) dx
    (G g)(x)   = int_R Phi_tau(x) g(tau) dtau

Submodules: ``specfun`` (gamma and Bessel functions of complex order),
``quad`` (quadrature and finite differences), ``mellin``, ``kernel``,
``transform`` (forward and inverse transforms with their inversions), ``pde``
(the spectral solution on a wedge), ``verify`` and ``cli``.  The
scikit-learn wrappers live in ``sqbessel.estimators``.
"""

from .errors import (ContourError, ConvergenceError, DomainError,
                     IntegrabilityError, NormError, PoleError, QuadratureError,
                     SchemaError, SqBesselError, StripError, TruncationWarning)
from .kernel import phi, phi_cosine_rep, phi_direct, phi_mellin_barnes
from .mellin import MellinStrip, SampledFunction
from .quad import ContourSpec, DiffStencil, QuadConfig
from .transform import (ForwardResult, InverseResult, G_operator, forward_F,
                        forward_F_via_phi, inverse_G, invert_F_2_13,
                        invert_G_3_5)
from .pde import WedgeSpec, evaluate_u, pde_residual_polar

__version__ = "0.1.0"

__all__ = [
    "ContourError", "ConvergenceError", "DomainError", "IntegrabilityError",
    "NormError", "PoleError", "QuadratureError", "SchemaError",
    "SqBesselError", "StripError", "TruncationWarning",
    "phi", "phi_direct", "phi_mellin_barnes", "phi_cosine_rep",
    "MellinStrip", "SampledFunction", "ContourSpec", "DiffStencil",
    "QuadConfig", "ForwardResult", "InverseResult", "forward_F",
    "forward_F_via_phi", "inverse_G", "G_operator", "invert_F_2_13",
    "invert_G_3_5", "WedgeSpec", "evaluate_u", "pde_residual_polar",
]

"""hardyfrac: numerics for the fractional Hardy operator (-Delta)^s + mu |x|^(-2s).

Closed-form constants and exponents, principal-value evaluation of the
operator on radial functions, verification of the distributional identities
pairing the fundamental solution with a point mass, a radial collocation
solver for the singular Dirichlet problem on the unit ball, and probes of
the nonexistence regimes.
"""

from .special import (
    ProblemParams,
    PoleError,
    gamma_ln,
    cns,
    c_s,
    sigma_tau,
    mu0,
    riesz_delta_const,
    omega_sphere,
)
from .exponents import ExponentPair, SubcriticalMuError, tau_pair, mu_of_tau
from .kernelops import QuadSpec, QuadratureError
from .profiles import (
    PowerLogProfile,
    PlateauBump,
    AnnularBump,
    SmoothCutoff,
    ProductProfile,
    SumProfile,
    log_grid,
)
from .radial_kernel import (
    RadialFunction,
    sphere_kernel,
    frac_lap_pv,
    hardy_apply,
    phi_mu,
    gamma_mu,
    lambda_mu,
    phi_profile,
    gamma_profile,
    gagliardo_seminorm_probe,
    gagliardo_log_rate,
)
from .weighted_op import (
    TestFunction,
    weighted_frac_lap,
    lambda_bound_check,
    adjoint_identity_check,
    adjoint_pointwise_residual,
)
from .constants import HFunctionTag, h_eval, csmu, cs0
from .identity import IdentityReport, verify_theorem_b, verify_solution_identity
from .solver import (
    DirichletProblem,
    SolveReport,
    SolverError,
    solve,
    build_phi_omega,
    assemble_uk,
    monotone_approx_solve,
)
from .probe import (
    ProbeReport,
    delta_sequence_probe,
    divergence_probe,
    subcritical_mu_probe,
)

__version__ = "0.1.0"

"""Numerical toolkit for real-interpolation K/J-functionals, limiting
interpolation norms, lattice-parameter norms and extrapolation
functionals, with desk-scale verification suites for the underlying
norm-equivalence identities."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .grid import LogGrid, QuadResult, SampledFunction, StepRearrangement, integrate, rearrange, sup_norm
from .kfunc import (
    DiscretePairElement,
    QuasiConcaveProfile,
    VectorValuedInstance,
    j_functional,
    k_discrete,
    k_discrete_interp,
    k_L1_Linf,
    k_Lp_Linf,
    k_weakL1_Linf,
    pisier_k,
    pisier_product_k,
    realize_conv0,
)
from .lattice import (
    LatticeParam,
    NormValue,
    PowerLogWeight,
    apply_Q,
    apply_R,
    apply_S,
    apply_T,
    estimate_op_norm,
    lattice_norm,
    parse_lattice_spec,
    tilde_weight,
)
from .interpnorm import (
    ThetaQ,
    check_equivK,
    holmstedt_L1_Lp,
    limit_theta0,
    lp_norm_K,
    norm_constant,
    phi_theta_q,
)
from .extrapolate import (
    eta_of_t,
    extrap_norm_K,
    hardy_chain,
    p_of_n,
    q_of_t,
    seq_extrap_norm,
    theta_of_t,
    verify_baseq,
    xi_of_t,
)
from .grand import GrandParams, grand_norm_def, grand_norm_fk, k_side_llogl, llogl_alpha_norm
from .schatten import (
    CompactOperator,
    components,
    matsaev_extrap,
    matsaev_norm,
    s_numbers,
    schatten_norm,
    volterra,
)
from .suites import SuiteOptions, run_suite

__version__ = "0.1.0"

"""Born-approximation reflections and the broadband one-way reflector.

For a local potential the first-order reflection amplitudes are
proportional to the potential's Fourier transform at momentum transfer
-+2k:

    R^l = -(sqrt(2 pi) i m / (k hbar^2)) V~(-2k)
    R^r = -(sqrt(2 pi) i m / (k hbar^2)) V~(+2k)

so a potential whose spectrum vanishes for all k >= 0 reflects nothing
from the right at any momentum.  Demanding V~(k) = sqrt(2 pi) alpha k on
the negative axis gives the regularized inverse-square profile
alpha / (x - i eps)^2, a local PT-symmetric potential; transmission
follows from generalized unitarity, |T|^2 = 1 - conj(R^r) R^l.

The exact solves here resolve the eps-scale peak with a graded mesh and
keep alpha adjustable: the Born value is only first order, so alpha is
re-tuned against the exact solver (bisection) to pin |R^l|^2 at a
reference momentum.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BracketingError
from .kernels import RegularizedInverseSquare, SampledKernel, fourier_transform_local
from .solver import SolverConfig, scatter
from .units import HALF_WIDTH


@dataclass(frozen=True)
class BornPrediction:
    """First-order amplitudes at one momentum; T_abs2 comes from the
    generalized-unitarity rearrangement, exact when R^r = 0."""

    k: float
    Rl: complex
    Rr: complex
    T_abs2: float


def _numeric_fourier(profile: np.ndarray, nodes: np.ndarray, q: float) -> complex:
    return np.trapezoid(profile * np.exp(-1j * q * nodes), nodes) / np.sqrt(2.0 * np.pi)


def born_reflections(potential, k: float) -> tuple[complex, complex]:
    """First-order (R^l, R^r) for a local potential at k > 0.

    Uses the analytic Fourier transform for the regularized
    inverse-square profile and quadrature over the stored grid for
    sampled local potentials.
    """
    if k <= 0:
        raise ValueError("incident wavenumber k must be positive")
    pref = -1j * np.sqrt(2.0 * np.pi) / k
    if isinstance(potential, RegularizedInverseSquare):
        vt_m = fourier_transform_local(potential, -2.0 * k)
        vt_p = fourier_transform_local(potential, 2.0 * k)
    elif isinstance(potential, SampledKernel) and potential.is_local:
        vt_m = _numeric_fourier(np.asarray(potential.values), potential.grid, -2.0 * k)
        vt_p = _numeric_fourier(np.asarray(potential.values), potential.grid, 2.0 * k)
    else:
        raise ValueError("born_reflections needs a local potential")
    return pref * vt_m, pref * vt_p


def born_prediction(potential, k: float) -> BornPrediction:
    Rl, Rr = born_reflections(potential, k)
    return BornPrediction(k, Rl, Rr, float(1.0 - (np.conj(Rr) * Rl).real))


def design_broadband_reflector(alpha: float, epsilon: float,
                               d: float = HALF_WIDTH) -> RegularizedInverseSquare:
    """The one-way reflector profile alpha / (x - i epsilon)^2.

    Its spectrum satisfies V~(k) = 0 for k >= 0 by construction, so the
    Born right-reflection vanishes at every momentum.
    """
    return RegularizedInverseSquare(alpha=alpha, epsilon=epsilon, d=d)


def graded_mesh(epsilon: float, d: float = HALF_WIDTH, k_max: float = 5.0,
                n_core: int = 801,
                tail_spacing: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Graded mesh and weights over [-d, d] resolving the eps-scale peak.

    The core |x| <= min(d, 1) holds images of a uniform grid under
    x = eps sinh(t): spacing grows from far below eps/4 at the origin to
    ~2% at the core edge, and the weights are the mapped trapezoid rule,
    whose Euler-Maclaurin error sits only at the (smooth) section ends.
    A chord trapezoid rule on geometrically growing nodes would instead
    accumulate an O(growth^2) error along the 1/x^2 tail that no amount
    of peak refinement removes.  Beyond the core, uniform tails carry the
    slowly varying remainder of the potential out to d.
    """
    if epsilon <= 0 or d <= 0:
        raise ValueError("epsilon and d must be positive")
    core = min(d, 1.0)
    t_max = np.arcsinh(core / epsilon)
    t = np.linspace(-t_max, t_max, n_core)
    xc = epsilon * np.sinh(t)
    wc = epsilon * np.cosh(t) * (t[1] - t[0])
    wc[0] *= 0.5
    wc[-1] *= 0.5
    xc[0], xc[-1] = -core, core  # map is exact at the ends up to roundoff
    if d <= core:
        return xc, wc
    if tail_spacing is None:
        tail_spacing = min(0.03 * core, 2.0 * np.pi / k_max / 40.0)
    n_tail = int(np.ceil((d - core) / tail_spacing))
    xt = np.linspace(core, d, n_tail + 1)
    wt = np.full(n_tail + 1, xt[1] - xt[0])
    wt[0] *= 0.5
    wt[-1] *= 0.5
    x = np.concatenate([-xt[::-1], xc[1:-1], xt])
    w = np.concatenate([wt[::-1], np.zeros(n_core - 2), wt])
    w[n_tail : n_tail + n_core] += wc
    return x, w


def reflector_config(epsilon: float, window: float = 4.0 * HALF_WIDTH,
                     k_max: float = 5.0, n_core: int = 801,
                     tail_spacing: float | None = None) -> SolverConfig:
    """Solver configuration with the graded mesh for the reflector.

    ``window`` is the half-width of the solve domain; the 1/x^2 tails
    beyond |x| ~ 1 still matter (cutting them re-opens R^r at low k), so
    the default keeps k*window >= 2 down to k d = 0.5.
    Convergence is checked by doubling the window.
    """
    nodes, weights = graded_mesh(epsilon, window, k_max=k_max, n_core=n_core,
                                 tail_spacing=tail_spacing)
    return SolverConfig(n_grid=nodes.size, quadrature="trapezoid",
                        nodes=nodes, weights=weights)


def tune_alpha(epsilon: float, k_ref: float, target: float = 1.0,
               alpha_hi: float = 4.0 / (4.0 * np.pi), tol: float = 1e-4,
               max_iter: int = 80, window: float = 4.0 * HALF_WIDTH,
               config: SolverConfig | None = None) -> float:
    """Bisect alpha so the exact solver gives |R^l(k_ref)|^2 = target.

    The Born estimate alpha = 1/(4 pi) under-reflects once the exact
    dynamics are included; the bisection absorbs that.  Raises
    BracketingError (with the scan trace) if [0, alpha_hi] does not
    bracket the target.
    """
    if k_ref <= 0:
        raise ValueError("reference wavenumber must be positive")
    if target == 0.0:
        return 0.0
    config = config or reflector_config(epsilon, window, k_max=max(5.0, k_ref))
    trace = []

    def objective(alpha: float) -> float:
        pot = RegularizedInverseSquare(alpha=alpha, epsilon=epsilon, d=window)
        res = scatter(pot, k_ref, "left", config)
        value = abs(res.R) ** 2 - target
        trace.append((alpha, value + target))
        return value

    lo, hi = 0.0, alpha_hi
    f_lo, f_hi = -target, objective(hi)
    if f_lo * f_hi > 0:
        raise BracketingError(
            f"|R^l|^2 - {target} does not change sign on [0, {alpha_hi}]", trace
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = objective(mid)
        if abs(f_mid) <= tol:
            return mid
        if f_lo * f_mid <= 0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    raise BracketingError(
        f"bisection did not reach |{target} - |R^l|^2| <= {tol} in {max_iter} steps",
        trace,
    )

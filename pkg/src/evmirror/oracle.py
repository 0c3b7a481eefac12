"""Independent numerical cross-checks for the closed forms in :mod:`mirror`.

The Numerov integrator knows nothing about Bessel functions: it marches
``psi'' = (P^2 e^{-2z} - alpha^2) psi`` outward from deep inside the
barrier, where the decaying solution dominates, and the phase is read off
by a least-squares fit in free space.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import mirror
from .errors import AccuracyError, DomainError, FitError
from .mirror import WaveFunctionSample

#: Resolution guard: the step times alpha must stay below this.
MAX_H_ALPHA = 0.05
#: Innermost grid point needs ``u >= SEED_U_FACTOR * alpha``.
SEED_U_FACTOR = 10.0
#: Default seed depth never shallower than this ``u``.
SEED_U_MIN = 25.0
#: Beyond this ``u`` the outward growth e^u leaves double range.
SEED_U_MAX = 700.0


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid ``z_min .. z_max`` with ``n_points`` nodes."""

    z_min: float
    z_max: float
    n_points: int

    def __post_init__(self):
        if not self.z_min < self.z_max:
            raise DomainError("grid needs z_min < z_max")
        if self.n_points < 3:
            raise DomainError("grid needs at least 3 points")

    @property
    def step(self):
        return (self.z_max - self.z_min) / (self.n_points - 1)

    def points(self):
        return np.linspace(self.z_min, self.z_max, self.n_points)

    def check_resolution(self, alpha):
        if self.step * alpha >= MAX_H_ALPHA:
            raise DomainError(
                f"step h = {self.step:.3g} too coarse: h*alpha = {self.step * alpha:.3g} "
                f">= {MAX_H_ALPHA}"
            )


@dataclass(frozen=True)
class PhaseFit:
    """Result of fitting ``A sin(alpha z + phase/2)``."""

    phase: float
    amplitude: float
    residual: float


def default_grid(params, step=None, z_max=None):
    """Grid reaching from a safe seed depth into the asymptotic window.

    The seed depth puts ``u = max(10 alpha, 25)`` at ``z_min``; ``z_max`` by
    default adds two de Broglie wavelengths past the start of the
    asymptotic window.
    """
    a = params.alpha
    u_seed = max(SEED_U_FACTOR * a, SEED_U_MIN)
    z_min = math.log(params.p_max_red / u_seed)
    if z_max is None:
        z_max = mirror.asymptotic_window_start(params) + 2.0 * (2.0 * math.pi / a)
    if step is None:
        step = min(0.01, 0.01 / a, 0.25 / u_seed)
    n = int(math.ceil((z_max - z_min) / step)) + 1
    return GridSpec(z_min, z_min + (n - 1) * step, n)


def numerov_solve(params, grid):
    """Integrate the stationary equation outward with the Numerov scheme.

    Seeded at the two innermost nodes with the decaying form
    ``exp(-u) / sqrt(u)``; the overall scale of the result is arbitrary
    (positive deep inside the barrier).

    Returns
    -------
    WaveFunctionSample
    """
    a = params.alpha
    if a <= 0:
        raise DomainError("numerov_solve needs alpha > 0")
    grid.check_resolution(a)
    z = grid.points()
    h = grid.step
    u = params.p_max_red * np.exp(-z)
    u0 = float(u[0])
    if u0 < SEED_U_FACTOR * a * (1.0 - 1e-12):
        z_ok = math.log(params.p_max_red / (SEED_U_FACTOR * a))
        raise DomainError(
            f"z_min = {grid.z_min:.6g} is not deep enough in the barrier; use z_min <= {z_ok:.6g}"
        )
    if u0 > SEED_U_MAX * (1.0 + 1e-12):
        z_ok = math.log(params.p_max_red / SEED_U_MAX)
        raise DomainError(
            f"z_min = {grid.z_min:.6g} is too deep (seed underflows); use z_min >= {z_ok:.6g}"
        )
    g = u * u - a * a
    c = h * h / 12.0
    if c * g[0] >= 0.5:
        raise DomainError(f"step h = {h:.3g} unstable at the seed depth; need h*u < {math.sqrt(6):.3g}")
    f = (1.0 - c * g).tolist()
    hg = (h * h * g).tolist()
    n = len(f)
    psi = [0.0] * n
    psi[0] = 1.0
    psi[1] = math.sqrt(u0 / u[1]) * math.exp(u0 - u[1])
    w_prev = f[0] * psi[0]
    w = f[1] * psi[1]
    for i in range(1, n - 1):
        w_next = 2.0 * w - w_prev + hg[i] * psi[i]
        psi[i + 1] = w_next / f[i + 1]
        w_prev, w = w, w_next
        if abs(w) > 1e250:
            scale = 1e-250
            w *= scale
            w_prev *= scale
            for j in range(i + 2):
                psi[j] *= scale
    return WaveFunctionSample(z, np.array(psi))


def extract_phase(samples, alpha, reference=None, tol=1e-6):
    """Least-squares fit of ``A sin(alpha z + phi)`` to asymptotic samples.

    Returns ``2 phi`` as the reflection phase.  The fit alone fixes it only
    modulo 2 pi (the sign of an oracle solution is arbitrary); with
    ``reference`` the nearest branch to that value is chosen, which makes
    this a validation tool rather than an independent discovery.

    Raises
    ------
    FitError
        If the relative RMS residual exceeds ``tol`` or the window is too
        short.
    """
    z = np.asarray(samples.z, dtype=float).ravel()
    psi = np.asarray(samples.psi, dtype=float).ravel()
    if z.size < 8:
        raise FitError(f"need at least 8 samples, got {z.size}")
    if alpha * (z.max() - z.min()) < 2.0 * math.pi * (1.0 - 1e-9):
        raise FitError("fit window shorter than one de Broglie wavelength")
    basis = np.column_stack([np.sin(alpha * z), np.cos(alpha * z)])
    (s, cc), *_ = np.linalg.lstsq(basis, psi, rcond=None)
    amp = math.hypot(s, cc)
    if amp == 0:
        raise FitError("fitted amplitude vanishes")
    resid = psi - basis @ np.array([s, cc])
    residual = float(np.sqrt(np.mean(resid**2))) / amp
    if residual > tol:
        raise FitError(
            f"relative RMS residual {residual:.3g} above {tol:.3g}; window not asymptotic?"
        )
    phase = 2.0 * math.atan2(cc, s)
    if reference is not None:
        phase += 2.0 * math.pi * round((reference - phase) / (2.0 * math.pi))
    return PhaseFit(phase, amp, residual)


def numerov_phase_shift(params, grid=None, tol=1e-6, reference=None):
    """Reflection phase from a Numerov solve.

    The branch is chosen nearest to ``reference``, by default the closed
    form of :func:`mirror.schr_phase_shift`.
    """
    grid = grid or default_grid(params)
    sol = numerov_solve(params, grid)
    z_w = mirror.asymptotic_window_start(params)
    keep = sol.z >= z_w
    if not keep.any():
        raise DomainError(f"grid ends at {grid.z_max:.6g}, before the asymptotic window {z_w:.6g}")
    window = WaveFunctionSample(sol.z[keep], sol.psi[keep])
    if reference is None:
        reference = mirror.schr_phase_shift(params)
    return extract_phase(window, params.alpha, reference=reference, tol=tol)


def wkb_action_quadrature(params, z):
    """Adaptive quadrature of ``int_{z0}^{z} p(z') dz'``.

    Substituting ``z' = z0 + s^2`` removes the square-root zero of ``p``
    at the turning point, so the integrand ``2 s p(z0 + s^2)`` is smooth.
    """
    z0 = mirror.turning_point(params)
    z = float(z)
    if z < z0:
        raise DomainError(f"z = {z:.6g} lies below the turning point {z0:.6g}")
    if z == z0:
        return 0.0
    a = params.alpha

    def integrand(s):
        w = math.exp(-s * s)  # P e^{-z'} / alpha
        return 2.0 * s * a * math.sqrt((1.0 - w) * (1.0 + w))

    s_max = math.sqrt(z - z0)
    val, err = integrate.quad(integrand, 0.0, s_max, epsabs=1e-13, epsrel=1e-13, limit=200)
    if err > 1e-10 * max(1.0, abs(val)):
        raise AccuracyError("action quadrature did not converge", estimate=err)
    return val

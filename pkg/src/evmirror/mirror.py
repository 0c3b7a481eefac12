"""Closed-form reflection quantities for the exponential barrier.

Units throughout: hbar = kappa = M = 1, so lengths are in 1/kappa, momenta
in hbar*kappa and times in M/(hbar*kappa^2).  The barrier is
``V(z) = P^2 exp(-2z) / 2`` and an atom arrives with momentum ``-alpha``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import ApplicabilityError, DomainError
from .specfun import EULER_GAMMA

#: Largest alpha accepted by :func:`schr_effective_mirror_small_alpha`.
SMALL_ALPHA_MAX = 0.2
#: ``u = P exp(-z)`` below ``ASYMPTOTIC_U_FACTOR * alpha**2`` counts as free space.
ASYMPTOTIC_U_FACTOR = 1e-8


@dataclass(frozen=True)
class MirrorParams:
    """Dimensionless barrier description.

    Attributes
    ----------
    alpha : float
        Incident momentum in units of hbar*kappa.
    p_max_red : float
        Barrier height parameter ``p_max / (hbar kappa)``.

    Notes
    -----
    ``alpha >= p_max_red`` is accepted: the model potential keeps growing
    for ``z -> -inf`` so the wave is still reflected, only the turning point
    moves behind the dielectric surface at ``z = 0``.  Use
    :attr:`turns_before_surface` to test the physical condition.
    """

    alpha: float
    p_max_red: float

    def __post_init__(self):
        a, p = float(self.alpha), float(self.p_max_red)
        if not (math.isfinite(a) and a >= 0):
            raise DomainError(f"alpha must be finite and >= 0, got {self.alpha!r}")
        if not (math.isfinite(p) and p > 0):
            raise DomainError(f"p_max_red must be finite and > 0, got {self.p_max_red!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "p_max_red", p)

    @property
    def turns_before_surface(self):
        return 0 < self.alpha < self.p_max_red

    def with_alpha(self, alpha):
        return MirrorParams(alpha, self.p_max_red)


@dataclass(frozen=True)
class EffectiveMirror:
    """Instantaneous-reflection equivalent: phase ``delta_phi`` at position ``zeta``.

    The full shift is ``delta_phi - 2 alpha zeta``; ``delta_phi`` is kept in
    ``[0, 2 pi)``.
    """

    delta_phi: float
    zeta: float

    def __post_init__(self):
        object.__setattr__(self, "delta_phi", float(self.delta_phi) % (2.0 * math.pi))

    def phase_shift(self, alpha):
        return self.delta_phi - 2.0 * alpha * self.zeta


@dataclass(frozen=True)
class WaveFunctionSample:
    """Real wave-function values ``psi`` sampled at positions ``z``.

    Both fields are numpy arrays of the same shape (0-d for a single point).
    """

    z: np.ndarray
    psi: np.ndarray


def _require_positive_alpha(params):
    if params.alpha <= 0:
        raise DomainError("this quantity needs alpha > 0")


# --- classical ---------------------------------------------------------------


def turning_point(params):
    """Classical turning point ``z0 = ln(P / alpha)``."""
    _require_positive_alpha(params)
    return math.log(params.p_max_red / params.alpha)


def reflection_time(params):
    """Time scale of the bounce, ``1 / alpha`` in natural units."""
    _require_positive_alpha(params)
    return 1.0 / params.alpha


def _log_cosh(x):
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)


def classical_trajectory(params, t):
    """Position ``z(t) = z0 + ln cosh(alpha t)`` of the classical bounce.

    Works for arrays; ``ln cosh`` is rewritten to stay finite for large
    ``|t|``.
    """
    z0 = turning_point(params)
    return z0 + _log_cosh(np.asarray(t, dtype=float) / reflection_time(params))


def classical_velocity(params, t):
    """Analytic ``dz/dt = alpha tanh(alpha t)``."""
    _require_positive_alpha(params)
    return params.alpha * np.tanh(params.alpha * np.asarray(t, dtype=float))


def classical_mirror_position(params):
    """Point where the incoming and outgoing asymptotes cross, ``z0 - ln 2``."""
    return turning_point(params) - math.log(2.0)


def classical_momentum(params, z):
    """Momentum ``p(z) = sqrt(alpha^2 - P^2 exp(-2z))`` in the allowed region."""
    z = np.asarray(z, dtype=float)
    z0 = turning_point(params)
    if np.any(z < z0):
        raise DomainError(f"z below the turning point z0 = {z0:.6g} is classically forbidden")
    w = params.p_max_red * np.exp(-z) / params.alpha
    return params.alpha * np.sqrt(np.clip((1.0 - w) * (1.0 + w), 0.0, None))


# --- WKB ---------------------------------------------------------------------


def wkb_action(params, z):
    """Closed-form action ``int_{z0}^{z} p dz' = alpha (artanh(p/alpha) - p/alpha)``.

    ``artanh`` is evaluated as ``ln((1 + s) / w)`` with ``s = p/alpha`` and
    ``w = P e^{-z} / alpha``, which stays accurate when ``s`` rounds to 1.
    """
    z = np.asarray(z, dtype=float)
    z0 = turning_point(params)
    if np.any(z < z0):
        raise DomainError(f"z below the turning point z0 = {z0:.6g}")
    a = params.alpha
    log_w = math.log(params.p_max_red / a) - z
    w = np.exp(log_w)
    s = np.sqrt(np.clip((1.0 - w) * (1.0 + w), 0.0, None))
    return a * (np.log1p(s) - log_w - s)


def wkb_wavefunction(params, z):
    """WKB standing wave ``sqrt(4/p) sin(pi/4 + action)`` for ``z > z0``."""
    z = np.asarray(z, dtype=float)
    z0 = turning_point(params)
    if np.any(z <= z0):
        raise DomainError(f"the WKB wave function diverges at z0 = {z0:.6g}; need z > z0")
    p = classical_momentum(params, z)
    psi = np.sqrt(4.0 / p) * np.sin(0.25 * math.pi + wkb_action(params, z))
    return WaveFunctionSample(z, psi)


def wkb_phase_shift(params):
    """Semiclassical reflection phase ``pi/2 - 2 alpha (1 + ln(P / 2 alpha))``."""
    a = params.alpha
    if a == 0:
        return 0.5 * math.pi
    return 0.5 * math.pi - 2.0 * a * (1.0 + math.log(params.p_max_red / (2.0 * a)))


def wkb_effective_mirror(params):
    return EffectiveMirror(0.5 * math.pi, classical_mirror_position(params) + 1.0)


# --- exact solution -----------------------------------------------------------


def _u_of_z(params, z):
    return params.p_max_red * np.exp(-np.asarray(z, dtype=float))


def schr_wavefunction(params, z, method="bessel_k"):
    """Exact real standing wave for the exponential barrier.

    ``method="bessel_k"`` evaluates ``sqrt(4 sinh(pi alpha)/pi) K_{i alpha}(u)``
    with ``u = P e^{-z}``; ``method="bessel_i"`` forms the same function
    from ``(I_{-i alpha} - I_{i alpha}) / 2i`` in plain double precision,
    which loses about ``2u / ln 10`` digits deep inside the barrier.
    """
    _require_positive_alpha(params)
    a = params.alpha
    z = np.asarray(z, dtype=float)
    u = _u_of_z(params, z)
    if np.any(u <= 0) or not np.all(np.isfinite(u)):
        raise DomainError("z out of range: u = P exp(-z) must be a positive finite number")
    flat = u.ravel()
    out = np.empty_like(flat)
    if method == "bessel_k":
        pref = math.sqrt(4.0 * math.sinh(math.pi * a) / math.pi)
        for i, ui in enumerate(flat):
            out[i] = pref * specfun.bessel_k_imag_order(a, ui)[0]
    elif method == "bessel_i":
        pref = math.sqrt(4.0 / a) * specfun.abs_gamma_1i(a)
        for i, ui in enumerate(flat):
            out[i] = -pref * specfun.bessel_i_imag_order(a, ui)[0].imag
    else:
        raise ValueError(f"unknown method {method!r}")
    return WaveFunctionSample(z, out.reshape(u.shape))


def schr_phase_shift_curve(alpha, p_max_red):
    """Vectorised ``-2 alpha ln(P/2) + 2 arg Gamma(1 + i alpha)``."""
    alpha = np.asarray(alpha, dtype=float)
    return -2.0 * alpha * math.log(0.5 * p_max_red) + 2.0 * specfun.arg_gamma_1i(alpha)


def schr_phase_shift(params):
    """Exact reflection phase (unwrapped); 0 at ``alpha = 0``."""
    return float(schr_phase_shift_curve(params.alpha, params.p_max_red))


def schr_effective_mirror_small_alpha(params):
    """Quantum-regime mirror: no phase jump, position ``ln(P/2) + gamma``."""
    if params.alpha > SMALL_ALPHA_MAX:
        raise ApplicabilityError(
            f"small-alpha mirror requires alpha <= {SMALL_ALPHA_MAX}, got {params.alpha}"
        )
    return EffectiveMirror(0.0, math.log(0.5 * params.p_max_red) + EULER_GAMMA)


def wavepacket_mirror_position(params):
    """Group-delay mirror ``ln(P/2) - Re Psi(1 + i alpha)`` for mean momentum alpha."""
    return math.log(0.5 * params.p_max_red) - specfun.re_digamma_1i(params.alpha)


def asymptotic_window_start(params):
    """Smallest z where ``P e^{-z}`` falls below ``ASYMPTOTIC_U_FACTOR * alpha^2``."""
    _require_positive_alpha(params)
    return math.log(params.p_max_red / (ASYMPTOTIC_U_FACTOR * params.alpha**2))

"""Asymptotic wave packets and the group-delay effective mirror.

Far from the barrier the incident and reflected packets are superpositions
of free plane waves,

    psi_inc(z, t) =  int phi(p) exp(-i p^2 t/2 - i p z) dp
    psi_ref(z, t) = -int phi(p) exp(-i p^2 t/2 + i p z + i dphi(p)) dp,

evaluated here by direct quadrature over a momentum grid.  Straight-line
fits to the centroids give the mirror position seen by the packet.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import mirror
from .errors import CoverageError, DomainError, RegimeError

#: Allowed deviation of the snapshot norm from 1.
NORM_TOL = 1e-6
#: Minimum coefficient of determination for the centroid line fits.
MIN_R_SQUARED = 0.999
#: Half-width of the momentum grid in units of sigma_p.
SPECTRUM_HALF_WIDTH = 6.0
#: Packets are kept where the potential is below ``1e-8`` of the kinetic energy.
ASYMPTOTIC_U_RATIO = 1e-4


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian packet with mean momentum ``p_bar`` and width ``sigma_p``.

    ``sigma_p`` is the width of the momentum *amplitude*,
    ``phi(p) ~ exp(-(p - p_bar)^2 / (2 sigma_p^2))``, so the momentum
    density has standard deviation ``sigma_p / sqrt(2)``.
    """

    p_bar: float
    sigma_p: float
    p_max_red: float

    def __post_init__(self):
        pb, sg, pm = float(self.p_bar), float(self.sigma_p), float(self.p_max_red)
        if not all(math.isfinite(x) and x > 0 for x in (pb, sg, pm)):
            raise DomainError("p_bar, sigma_p and p_max_red must be finite and > 0")
        if sg > pb / 5.0 * (1.0 + 1e-12):
            raise DomainError(f"sigma_p = {sg} exceeds p_bar/5 = {pb / 5.0}")
        if not pb + 5.0 * sg < pm:
            raise DomainError(
                f"p_bar + 5 sigma_p = {pb + 5.0 * sg} must stay below p_max_red = {pm}"
            )
        object.__setattr__(self, "p_bar", pb)
        object.__setattr__(self, "sigma_p", sg)
        object.__setattr__(self, "p_max_red", pm)


@dataclass(frozen=True)
class MomentumSpectrum:
    """Real amplitudes on a uniform momentum grid.

    Normalised so that ``2 pi sum(amplitude^2) dp = 1``, which makes the
    position-space packet unit-normalised.  ``outside_weight`` is the
    analytic density weight of the underlying Gaussian outside
    ``(0, p_max_red)``.
    """

    p: np.ndarray
    amplitude: np.ndarray
    dp: float
    p_max_red: float
    outside_weight: float

    def mean_momentum(self):
        w = self.amplitude**2
        return float(np.sum(self.p * w) / np.sum(w))


@dataclass(frozen=True)
class PacketSnapshot:
    """Position density of a packet at time ``t``."""

    t: float
    z_grid: np.ndarray
    density: np.ndarray
    centroid: float
    norm: float = field(default=1.0)


def gaussian_spectrum(spec, n_nodes=1024):
    """Gaussian amplitude table covering ``p_bar +- 6 sigma_p`` inside ``(0, P)``."""
    if n_nodes < 512:
        raise DomainError(f"need at least 512 momentum nodes, got {n_nodes}")
    lo = max(spec.p_bar - SPECTRUM_HALF_WIDTH * spec.sigma_p, 0.0)
    hi = min(spec.p_bar + SPECTRUM_HALF_WIDTH * spec.sigma_p, spec.p_max_red)
    p, dp = np.linspace(lo, hi, n_nodes, retstep=True)
    amp = np.exp(-0.5 * ((p - spec.p_bar) / spec.sigma_p) ** 2)
    amp /= math.sqrt(2.0 * math.pi * np.sum(amp**2) * dp)
    # density ~ exp(-(p - p_bar)^2 / sigma^2): tails are erfc of distance / sigma
    outside = 0.5 * (
        special.erfc(spec.p_bar / spec.sigma_p)
        + special.erfc((spec.p_max_red - spec.p_bar) / spec.sigma_p)
    )
    return MomentumSpectrum(p, amp, float(dp), spec.p_max_red, float(outside))


def _snapshot(t, z, psi):
    density = np.abs(psi) ** 2
    norm = float(np.trapezoid(density, z))
    if abs(norm - 1.0) > NORM_TOL:
        raise CoverageError(
            f"packet density integrates to {norm:.9g} on z in [{z[0]:.4g}, {z[-1]:.4g}] at t = {t:.6g}; "
            "widen the grid"
        )
    centroid = float(np.trapezoid(z * density, z) / norm)
    return PacketSnapshot(float(t), z, density, centroid, norm)


def _superpose(spectrum, z, t, sign, extra_phase):
    z = np.asarray(z, dtype=float)
    p = spectrum.p
    coeff = spectrum.amplitude * np.exp(1j * (extra_phase - 0.5 * p * p * t)) * spectrum.dp
    return np.exp(sign * 1j * np.outer(z, p)) @ coeff, z


def synthesize_incident(spectrum, z_grid, t):
    """Incident packet at time ``t``; its centroid moves as ``-p_bar t``."""
    psi, z = _superpose(spectrum, z_grid, float(t), -1.0, 0.0)
    return _snapshot(t, z, psi)


def synthesize_reflected(spectrum, z_grid, t, params, phase_fn=None):
    """Reflected packet at time ``t``.

    Each component picks up the exact reflection phase at its own momentum;
    ``phase_fn(p)`` overrides it (a zero phase models a hard wall at the
    origin).
    """
    if abs(params.p_max_red - spectrum.p_max_red) > 1e-12 * spectrum.p_max_red:
        raise DomainError("spectrum and mirror parameters use different p_max_red")
    if phase_fn is None:
        phase = mirror.schr_phase_shift_curve(spectrum.p, params.p_max_red)
    else:
        phase = np.asarray(phase_fn(spectrum.p), dtype=float)
    psi, z = _superpose(spectrum, z_grid, float(t), 1.0, phase)
    return _snapshot(t, z, -psi)


def _line_fit(snaps):
    t = np.array([s.t for s in snaps])
    c = np.array([s.centroid for s in snaps])
    if t.size < 3:
        raise RegimeError("need at least 3 snapshots per packet for a line fit")
    slope, intercept = np.polyfit(t, c, 1)
    ss_tot = float(np.sum((c - c.mean()) ** 2))
    ss_res = float(np.sum((c - (slope * t + intercept)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return slope, intercept, r2


def effective_mirror_from_delay(incident, reflected):
    """Mirror position from straight-line fits to the two centroid tracks.

    The incident centroid follows ``b_inc - p t`` and the reflected one
    ``b_ref + p t``; a packet bouncing off a hard wall at ``zeta`` gives
    ``b_ref - b_inc = 2 zeta``.

    Raises
    ------
    RegimeError
        If either track is not a straight line (R^2 < 0.999).
    """
    fits = {}
    for name, snaps in (("incident", incident), ("reflected", reflected)):
        slope, intercept, r2 = _line_fit(list(snaps))
        if r2 < MIN_R_SQUARED:
            raise RegimeError(f"{name} centroid motion is not linear (R^2 = {r2:.6f})")
        fits[name] = intercept
    return 0.5 * (fits["reflected"] - fits["incident"])


@dataclass(frozen=True)
class DelayMeasurement:
    """Centroid tracks and the mirror position they imply."""

    zeta_measured: float
    zeta_analytic: float
    incident: tuple
    reflected: tuple

    @property
    def relative_deviation(self):
        return abs(self.zeta_measured - self.zeta_analytic) / abs(self.zeta_analytic)


def _spatial_width(spec, t):
    # density ~ exp(-sigma^2 z^2 (...)) : standard deviation 1/(sigma sqrt 2) at t = 0
    s2 = spec.sigma_p**2
    return math.sqrt(1.0 + (s2 * t) ** 2) / (spec.sigma_p * math.sqrt(2.0))


def measurement_times(spec, n_times=8, margin=6.0):
    """Positive times at which a packet sits in the asymptotic region.

    The first time is the earliest at which the packet centre is ``margin``
    spatial widths beyond ``ln(P / (1e-4 p_bar))``; the series then runs to
    twice that time.
    """
    z_start = math.log(spec.p_max_red / (ASYMPTOTIC_U_RATIO * spec.p_bar))

    def clearance(t):
        return spec.p_bar * t - margin * _spatial_width(spec, t) - z_start

    if spec.p_bar <= margin * spec.sigma_p / math.sqrt(2.0):
        raise DomainError("packet spreads faster than it moves; cannot reach the asymptotic region")
    t = 1.0
    while clearance(t) <= 0:
        t *= 1.25
    return np.linspace(t, 2.0 * t, n_times)


def measure_mirror_position(params, spec, n_times=8, n_nodes=1024, phase_fn=None):
    """Synthesize incident and reflected tracks and fit the mirror position.

    Incident snapshots are taken at ``-t`` and reflected ones at ``+t`` for
    the times from :func:`measurement_times`.
    """
    spectrum = gaussian_spectrum(spec, n_nodes)
    times = measurement_times(spec, n_times)
    t_max = float(times[-1])
    shift = 2.0 * abs(mirror.wavepacket_mirror_position(params.with_alpha(spec.p_bar)))
    half = 10.0 * _spatial_width(spec, t_max)
    z_lo = spec.p_bar * times[0] - shift - half
    z_hi = spec.p_bar * t_max + shift + half
    dz = 0.1 * _spatial_width(spec, 0.0)
    z = np.linspace(z_lo, z_hi, int(math.ceil((z_hi - z_lo) / dz)) + 1)
    inc = tuple(synthesize_incident(spectrum, z, -t) for t in times)
    ref = tuple(synthesize_reflected(spectrum, z, t, params, phase_fn) for t in times)
    zeta = effective_mirror_from_delay(inc, ref)
    analytic = mirror.wavepacket_mirror_position(params.with_alpha(spec.p_bar))
    return DelayMeasurement(zeta, analytic, inc, ref)

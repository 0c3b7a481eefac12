"""Oracle-versus-closed-form check matrix behind ``evmirror validate``.

Every check returns a :class:`CheckResult`; a check that raises is recorded
as a failure carrying the exception text, so one broken case never hides the
rest of the suite.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import mirror, oracle, specfun
from .errors import ConfigError
from .mirror import MirrorParams

ALPHAS = (0.1, 0.5, 1.0, 3.0, 8.0, 20.0)
P_VALUES = (5.0, 10.0, 50.0)

PHASE_TOL = 1e-6
ACTION_TOL = 1e-9
SCALE_TOL = 1e-12
ENERGY_TOL = 1e-10
CONVERGENCE_RANGE = (12.0, 20.0)
GAMMA_TOL = 1e-12
PATH_TOL = 1e-9
CONJ_TOL = 1e-13
REALITY_TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check; ``measured`` is compared against ``tolerance``."""

    group: str
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""


def _matrix():
    return [MirrorParams(a, p) for a in ALPHAS for p in P_VALUES]


def _label(params):
    return f"alpha={params.alpha:g},P={params.p_max_red:g}"


def check_numerov(phase_shift):
    def one(prm):
        ref = phase_shift(prm)
        fit = oracle.numerov_phase_shift(prm, reference=ref)
        return abs(fit.phase - ref), PHASE_TOL, f"fit residual {fit.residual:.2e}"

    return [("numerov " + _label(prm), lambda prm=prm: one(prm)) for prm in _matrix()]


def check_action(phase_shift):
    def one(prm):
        z0 = mirror.turning_point(prm)
        worst = 0.0
        for dz in (0.01, 0.5, 3.0, 10.0):
            q = oracle.wkb_action_quadrature(prm, z0 + dz)
            c = float(mirror.wkb_action(prm, z0 + dz))
            worst = max(worst, abs(q - c) / max(1.0, abs(c)))
        return worst, ACTION_TOL, "relative to max(1, |S|)"

    return [("action " + _label(prm), lambda prm=prm: one(prm)) for prm in _matrix()]


def check_scale(phase_shift):
    a = 0.7

    def phase(prm):
        shifted = MirrorParams(prm.alpha, prm.p_max_red * math.exp(a))
        dphi = abs(phase_shift(shifted) - (phase_shift(prm) - 2.0 * prm.alpha * a))
        return dphi / max(1.0, abs(phase_shift(prm))), SCALE_TOL, "shift a = 0.7"

    def psi(prm):
        shifted = MirrorParams(prm.alpha, prm.p_max_red * math.exp(a))
        z = mirror.turning_point(prm) + np.linspace(-1.0, 6.0, 15)
        ref = mirror.schr_wavefunction(prm, z).psi
        moved = mirror.schr_wavefunction(shifted, z + a).psi
        return float(np.max(np.abs(ref - moved)) / np.max(np.abs(ref))), SCALE_TOL, "relative to max |psi|"

    rows = []
    for prm in _matrix():
        rows.append(("scale phase " + _label(prm), lambda prm=prm: phase(prm)))
        rows.append(("scale psi " + _label(prm), lambda prm=prm: psi(prm)))
    return rows


def check_energy(phase_shift):
    def one(prm):
        t = np.linspace(-20.0, 20.0, 81) / prm.alpha
        z = mirror.classical_trajectory(prm, t)
        v = mirror.classical_velocity(prm, t)
        e = v**2 + prm.p_max_red**2 * np.exp(-2.0 * z)
        return float(np.max(np.abs(e - prm.alpha**2)) / prm.alpha**2), ENERGY_TOL, "relative to alpha^2"

    return [("energy " + _label(prm), lambda prm=prm: one(prm)) for prm in _matrix()]


def convergence_ratio(params, phase_shift=None, h=None):
    """Numerov phase error ratio ``e(h) / e(h/2)``, nominally 16."""
    phase_shift = phase_shift or mirror.schr_phase_shift
    ref = phase_shift(params)
    h = h or 0.048 / max(params.alpha, 1.0)
    errs = []
    for step in (h, h / 2):
        fit = oracle.numerov_phase_shift(params, oracle.default_grid(params, step=step), reference=ref)
        errs.append(abs(fit.phase - ref))
    return (errs[0] / errs[1] if errs[1] > 0 else math.inf), errs


def check_convergence(phase_shift):
    lo, hi = CONVERGENCE_RANGE

    def one(prm):
        ratio, errs = convergence_ratio(prm, phase_shift)
        detail = f"e(h)={errs[0]:.3e}, e(h/2)={errs[1]:.3e}"
        return ratio, hi, detail, lo <= ratio <= hi

    return [
        ("convergence " + _label(prm), lambda prm=prm: one(prm))
        for prm in (MirrorParams(3.0, 10.0), MirrorParams(1.0, 10.0))
    ]


def _gamma_identity():
    worst = 0.0
    for a in (0.01, 0.1, 1.0, 3.0, 10.0):
        lhs = math.exp(2.0 * specfun.ln_gamma_complex(1.0 + 1j * a).real)
        rhs = float(specfun._x_over_sinh(math.pi * a))
        worst = max(worst, abs(lhs - rhs) / rhs)
    return worst, GAMMA_TOL, "|Gamma(1+ia)|^2 vs pi a / sinh(pi a)"


def _k_paths():
    worst = 0.0
    for a in np.linspace(0.0, 8.0, 9):
        for u in np.linspace(8.0, 16.0, 9):
            ks = specfun.bessel_k_imag_order(a, u, method="series")[0]
            ki = specfun.bessel_k_imag_order(a, u, method="integral")[0]
            worst = max(worst, abs(ks - ki) / abs(ki))
    return worst, PATH_TOL, "u in [8, 16], alpha in [0, 8]"


def _grid_pairs():
    for a in np.linspace(0.05, 10.0, 20):
        for u in np.geomspace(0.01, 10.0, 20):
            yield float(a), float(u)


def _conjugate_symmetry():
    worst = 0.0
    for a, u in _grid_pairs():
        c = specfun._i_series(a, u)[0].conjugate()
        im = specfun._i_series(-a, u)[0]
        worst = max(worst, abs(im.real - c.real) / abs(c), abs(im.imag - c.imag) / abs(c))
    return worst, CONJ_TOL, "20x20 (alpha, u) grid, orders summed separately"


def _k_reality():
    worst = 0.0
    for a, u in _grid_pairs():
        ip = specfun._i_series(a, u)[0]
        im = specfun._i_series(-a, u)[0]
        comb = (math.pi / math.sinh(math.pi * a)) * (im - ip) / 2j
        k = specfun.bessel_k_imag_order(a, u)[0]
        worst = max(worst, abs(comb.imag) / max(abs(k), abs(comb)))
    return worst, REALITY_TOL, "20x20 (alpha, u) grid"


def check_specfun(phase_shift):
    return [
        ("gamma modulus identity", _gamma_identity),
        ("K series/integral paths", _k_paths),
        ("I conjugate symmetry", _conjugate_symmetry),
        ("K reality", _k_reality),
    ]


CHECKS = {
    "numerov": check_numerov,
    "action": check_action,
    "scale": check_scale,
    "energy": check_energy,
    "convergence": check_convergence,
    "specfun": check_specfun,
}


def run_checks(groups=None, phase_shift=None):
    """Run the selected check groups (all by default).

    ``phase_shift`` replaces the closed-form phase used as the reference,
    which lets a test plant a wrong formula and watch the suite catch it.

    Raises
    ------
    ConfigError
        If the selection is empty or names an unknown group.
    """
    if groups is None:
        groups = list(CHECKS)
    groups = list(groups)
    if not groups:
        raise ConfigError(f"no checks selected; choose from {', '.join(CHECKS)}")
    unknown = [g for g in groups if g not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown check group(s) {unknown}; choose from {', '.join(CHECKS)}")
    phase_shift = phase_shift or mirror.schr_phase_shift
    results = []
    for g in groups:
        try:
            rows = CHECKS[g](phase_shift)
        except Exception as exc:  # recorded, never fatal
            results.append(CheckResult(g, g, False, math.nan, math.nan, f"{type(exc).__name__}: {exc}"))
            continue
        for name, thunk in rows:
            try:
                row = thunk()
            except Exception as exc:  # recorded, never fatal
                results.append(CheckResult(g, name, False, math.nan, math.nan, f"{type(exc).__name__}: {exc}"))
                continue
            if len(row) == 4:
                measured, tol, detail, ok = row
            else:
                measured, tol, detail = row
                ok = measured <= tol
            results.append(CheckResult(g, name, bool(ok), float(measured), float(tol), detail))
    return results

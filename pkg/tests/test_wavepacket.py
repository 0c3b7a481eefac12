import math

import numpy as np
import pytest

from evmirror import mirror, wavepacket
from evmirror.errors import CoverageError, DomainError, RegimeError
from evmirror.mirror import MirrorParams
from evmirror.wavepacket import PacketSnapshot, PacketSpec


def test_packet_spec_guards():
    PacketSpec(5.0, 1.0, 10.1)
    with pytest.raises(DomainError, match="p_bar/5"):
        PacketSpec(5.0, 1.1, 20.0)
    with pytest.raises(DomainError, match="below p_max_red"):
        PacketSpec(8.0, 0.5, 10.0)
    with pytest.raises(DomainError):
        PacketSpec(-1.0, 0.1, 10.0)


def test_spectrum_grid_and_normalisation():
    spec = PacketSpec(5.0, 0.5, 10.0)
    s = wavepacket.gaussian_spectrum(spec)
    assert s.p.size >= 512
    assert s.p[0] == pytest.approx(2.0) and s.p[-1] == pytest.approx(8.0)
    assert 2 * math.pi * np.sum(s.amplitude**2) * s.dp == pytest.approx(1.0, abs=1e-14)
    assert s.mean_momentum() == pytest.approx(5.0, abs=1e-12)
    with pytest.raises(DomainError):
        wavepacket.gaussian_spectrum(spec, n_nodes=100)


def test_spectrum_tail_weight_at_width_limit():
    s = wavepacket.gaussian_spectrum(PacketSpec(1.0, 0.2, 3.0))
    assert s.outside_weight < 1e-10
    assert s.p[0] == 0.0


def _grid(center, half, n=1200):
    return np.linspace(center - half, center + half, n)


def test_incident_centroid_motion_and_norm():
    spec = PacketSpec(5.0, 0.5, 10.0)
    s = wavepacket.gaussian_spectrum(spec)
    c0 = wavepacket.synthesize_incident(s, _grid(0.0, 40.0), 0.0)
    assert c0.norm == pytest.approx(1.0, abs=1e-6)
    var0 = np.trapezoid((c0.z_grid - c0.centroid) ** 2 * c0.density, c0.z_grid)
    for t in (1.0, 2.5, 5.0):
        c = wavepacket.synthesize_incident(s, _grid(-5 * t, 40.0), t)
        assert c.centroid - c0.centroid == pytest.approx(-5.0 * t, abs=1e-4)
        var = np.trapezoid((c.z_grid - c.centroid) ** 2 * c.density, c.z_grid)
        assert var >= var0


def test_coverage_error_when_grid_misses_packet():
    s = wavepacket.gaussian_spectrum(PacketSpec(5.0, 0.5, 10.0))
    with pytest.raises(CoverageError):
        wavepacket.synthesize_incident(s, np.linspace(100, 120, 400), 0.0)


def test_reflected_norm_equals_incident_norm():
    prm = MirrorParams(5.0, 10.0)
    s = wavepacket.gaussian_spectrum(PacketSpec(5.0, 0.5, 10.0))
    inc = wavepacket.synthesize_incident(s, _grid(30.0, 40.0), -6.0)
    ref = wavepacket.synthesize_reflected(s, _grid(30.0, 40.0), 6.0, prm)
    assert inc.norm == pytest.approx(ref.norm, abs=1e-6)


def test_reflected_needs_matching_barrier():
    s = wavepacket.gaussian_spectrum(PacketSpec(5.0, 0.5, 10.0))
    with pytest.raises(DomainError):
        wavepacket.synthesize_reflected(s, _grid(0, 30), 1.0, MirrorParams(5.0, 11.0))


def test_monochromatic_limit_carries_exact_phase():
    # a narrow spectrum at t = 0: the phased superposition is exp(i dphi(p_bar)) at z = 0
    prm = MirrorParams(3.0, 10.0)
    spec = PacketSpec(3.0, 1e-3, 10.0)
    s = wavepacket.gaussian_spectrum(spec)
    z = np.linspace(-3000, 3000, 3)
    psi, _ = wavepacket._superpose(s, z, 0.0, 1.0, mirror.schr_phase_shift_curve(s.p, 10.0))
    phase = np.angle(psi[1])
    # spectral averaging adds the curvature term dphi'' sigma^2 / 2 (the weights are amplitudes)
    h = 1e-3
    curv = mirror.schr_phase_shift_curve(np.array([3.0 - h, 3.0, 3.0 + h]), 10.0) @ np.array([1, -2, 1]) / h**2
    expected = mirror.schr_phase_shift(prm) + curv * 1e-6 / 2
    expected = (expected + math.pi) % (2 * math.pi) - math.pi
    assert phase == pytest.approx(expected, abs=1e-9)


def test_hard_wall_injection_gives_mirror_at_origin():
    prm = MirrorParams(5.0, 10.0)
    res = wavepacket.measure_mirror_position(prm, PacketSpec(5.0, 0.5, 10.0), phase_fn=np.zeros_like)
    assert abs(res.zeta_measured) < 1e-9


def test_semiclassical_packet_tracks_classical_mirror():
    prm = MirrorParams(8.0, 10.0)
    res = wavepacket.measure_mirror_position(prm, PacketSpec(8.0, 0.3, 10.0))
    zc = mirror.classical_mirror_position(prm)
    assert abs(res.zeta_measured - zc) <= 0.02 * abs(zc)


def test_quantum_packet_matches_digamma_value():
    prm = MirrorParams(0.5, 10.0)
    res = wavepacket.measure_mirror_position(prm, PacketSpec(0.5, 0.1, 10.0))
    assert res.relative_deviation <= 0.05
    assert res.zeta_measured == pytest.approx(math.log(5) + mirror.EULER_GAMMA, rel=0.15)


def test_group_delay_tolerance_shrinks_with_width():
    prm = MirrorParams(8.0, 10.0)
    wide = wavepacket.measure_mirror_position(prm, PacketSpec(8.0, 0.39, 10.0))
    narrow = wavepacket.measure_mirror_position(prm, PacketSpec(8.0, 0.2, 10.0))
    assert wide.relative_deviation <= 0.02
    assert narrow.relative_deviation < wide.relative_deviation


def test_regime_crossover_shape():
    zs = []
    for a in (0.3, 1.0, 3.0, 8.0):
        sig = min(a / 10, (10 - a) / 5.5)
        zs.append(wavepacket.measure_mirror_position(MirrorParams(a, 10.0), PacketSpec(a, sig, 10.0)).zeta_measured)
    plateau = math.log(5) + mirror.EULER_GAMMA
    assert abs(zs[0] - plateau) < 0.2
    assert zs[0] > zs[1] > zs[2] > zs[3]
    assert abs(zs[3] - mirror.classical_mirror_position(MirrorParams(8.0, 10.0))) < 0.01


def test_effective_mirror_from_delay_synthetic_lines():
    z = np.zeros(3)
    inc = [PacketSnapshot(-t, z, z, 1.0 - 2.0 * t) for t in (1.0, 2.0, 3.0)]
    ref = [PacketSnapshot(t, z, z, 2.0 * t + 1.6) for t in (1.0, 2.0, 3.0)]
    assert wavepacket.effective_mirror_from_delay(inc, ref) == pytest.approx(0.3)


def test_effective_mirror_from_delay_rejects_curved_tracks():
    z = np.zeros(3)
    inc = [PacketSnapshot(-t, z, z, -2.0 * t) for t in (1.0, 2.0, 3.0, 4.0)]
    ref = [PacketSnapshot(t, z, z, (t - 2.5) ** 2) for t in (1.0, 2.0, 3.0, 4.0)]
    with pytest.raises(RegimeError):
        wavepacket.effective_mirror_from_delay(inc, ref)
    with pytest.raises(RegimeError):
        wavepacket.effective_mirror_from_delay(inc[:2], ref[:2])


def test_measurement_times_keep_packet_asymptotic():
    spec = PacketSpec(0.5, 0.1, 10.0)
    t = wavepacket.measurement_times(spec)
    z_start = math.log(10 / (1e-4 * 0.5))
    assert np.all(0.5 * t - 6 * wavepacket._spatial_width(spec, t[0]) > z_start)

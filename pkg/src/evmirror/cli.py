"""Command-line front end: ``evmirror <command> [options]``.

Every command writes one table, either CSV (``#`` metadata lines, a header
row, 17-significant-digit floats) or JSON (``meta``, ``columns`` and a
``data`` object holding one array per column).  Output depends only on the
arguments, so repeated runs are byte-identical.

Exit status: 0 success, 1 failed validation or numerical failure, 2 usage or
configuration error.
"""

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import __version__, expparams, mirror, validate, wavepacket
from .errors import ConfigError, DomainError, MirrorError
from .mirror import MirrorParams

COMMANDS = ("trajectory", "wavefunction", "phase", "mirrors", "packet", "table", "validate")

COLUMNS = {
    "trajectory": ("t_over_tau", "kappa_z", "asymptote", "zeta_cl"),
    "wavefunction": ("kappa_z", "psi_wkb", "psi_schr"),
    "phase": ("alpha", "dphi_wkb", "dphi_schr", "difference"),
    "mirrors": ("alpha_bar", "zeta_cl", "zeta_wkb", "zeta_wp"),
    "packet": ("t", "z_incident", "z_reflected"),
    "table": ("quantity", "computed", "reference", "rel_deviation", "tolerance", "verdict"),
    "validate": ("group", "check", "passed", "measured", "tolerance", "detail"),
}

DEFAULT_ALPHA = 3.0
DEFAULT_PMAX = 10.0
DEFAULT_SWEEPS = {
    "trajectory": "-5:5:201",
    "wavefunction": "-1:8:901",
    "phase": "0.01:20:100:log",
    "mirrors": "0.05:20:100:log",
}


@dataclass(frozen=True)
class Sweep:
    start: float
    stop: float
    n_points: int
    log: bool = False

    def values(self):
        if self.n_points == 1:
            return np.array([self.start])
        if self.log:
            return np.geomspace(self.start, self.stop, self.n_points)
        return np.linspace(self.start, self.stop, self.n_points)


@dataclass(frozen=True)
class RunConfig:
    command: str
    alpha: float
    p_max_red: float
    sweep: Sweep = None
    output_format: str = "csv"
    output_path: str = None


def parse_sweep(text, positive=True):
    """Parse ``start:stop:n[:log]``; ``n = 1`` is a single query at ``start``."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("log", "lin")):
        raise ConfigError(f"sweep must look like start:stop:n[:log], got {text!r}")
    try:
        start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"sweep must look like start:stop:n[:log], got {text!r}") from None
    log = len(parts) == 4 and parts[3] == "log"
    if n < 1 or not (math.isfinite(start) and math.isfinite(stop)):
        raise ConfigError(f"sweep needs finite bounds and n >= 1, got {text!r}")
    if n >= 2 and not start < stop:
        raise ConfigError(f"sweep range must be ordered (start < stop), got {text!r}")
    if (positive or log) and start <= 0:
        raise ConfigError(f"sweep range must be positive, got {text!r}")
    return Sweep(start, stop, n, log)


# --- output -------------------------------------------------------------------


def _cell_csv(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "" if math.isnan(v) else "%.17g" % v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    text = str(v)
    return '"' + text.replace('"', '""') + '"' if ("," in text or '"' in text) else text


def _cell_json(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        return None if not math.isfinite(v) else float(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v


def render(columns, rows, meta, fmt):
    if fmt == "json":
        doc = {
            "meta": {k: _cell_json(v) for k, v in meta.items()},
            "columns": list(columns),
            "data": {c: [_cell_json(r[i]) for r in rows] for i, c in enumerate(columns)},
        }
        return json.dumps(doc, indent=2) + "\n"
    lines = [f"# {k}: {_cell_csv(v) if not isinstance(v, str) else v}" for k, v in meta.items()]
    lines.append(",".join(columns))
    lines.extend(",".join(_cell_csv(v) for v in r) for r in rows)
    return "\n".join(lines) + "\n"


# --- commands -----------------------------------------------------------------


def _params(cfg):
    try:
        return MirrorParams(cfg.alpha, cfg.p_max_red)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def cmd_trajectory(cfg):
    prm = _params(cfg)
    if prm.alpha == 0:
        raise ConfigError("trajectory needs alpha > 0")
    x = cfg.sweep.values()
    z = mirror.classical_trajectory(prm, x * mirror.reflection_time(prm))
    zc = mirror.classical_mirror_position(prm)
    rows = [(xi, zi, zc + abs(xi), zc) for xi, zi in zip(x, z)]
    meta = {"turning_point": mirror.turning_point(prm), "zeta_cl": zc}
    return rows, meta


def cmd_wavefunction(cfg):
    prm = _params(cfg)
    if prm.alpha == 0:
        raise ConfigError("wavefunction needs alpha > 0")
    z = cfg.sweep.values()
    z0 = mirror.turning_point(prm)
    schr = mirror.schr_wavefunction(prm, z).psi
    rows = []
    for zi, si in zip(z, schr):
        wkb = float(mirror.wkb_wavefunction(prm, zi).psi) if zi > z0 else None
        rows.append((zi, wkb, si))
    meta = {"turning_point": z0, "note": "psi_wkb left empty for z <= turning_point"}
    return rows, meta


def cmd_phase(cfg):
    rows = []
    for a in cfg.sweep.values():
        prm = MirrorParams(a, cfg.p_max_red)
        w, s = mirror.wkb_phase_shift(prm), mirror.schr_phase_shift(prm)
        rows.append((a, w, s, s - w))
    return rows, {}


def cmd_mirrors(cfg):
    rows = []
    for a in cfg.sweep.values():
        prm = MirrorParams(a, cfg.p_max_red)
        zc = mirror.classical_mirror_position(prm)
        rows.append((a, zc, mirror.wkb_effective_mirror(prm).zeta, mirror.wavepacket_mirror_position(prm)))
    return rows, {"small_alpha_limit": math.log(0.5 * cfg.p_max_red) + mirror.EULER_GAMMA}


def cmd_packet(cfg, p_bar, sigma_p):
    try:
        spec = wavepacket.PacketSpec(p_bar, sigma_p, cfg.p_max_red)
    except DomainError as exc:
        raise ConfigError(f"packet parameters: {exc}") from None
    prm = MirrorParams(p_bar, cfg.p_max_red)
    try:
        res = wavepacket.measure_mirror_position(prm, spec)
    except MirrorError as exc:
        raise MirrorError(f"packet p_bar={p_bar:g}, sigma_p={sigma_p:g}: {exc}") from exc
    rows = [(r.t, i.centroid, r.centroid) for i, r in zip(res.incident, res.reflected)]
    meta = {
        "p_bar": p_bar,
        "sigma_p": sigma_p,
        "zeta_wp_measured": res.zeta_measured,
        "zeta_wp_analytic": res.zeta_analytic,
        "relative_deviation": res.relative_deviation,
        "note": "z_incident sampled at -t, z_reflected at +t",
    }
    return rows, meta


def cmd_table(cfg, params_path):
    phys = expparams.load_params(params_path) if params_path else expparams.rb85_defaults()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", expparams.CoherenceWarning)
        report = expparams.build_table(phys)
    rows = [
        (name, val, ref, dev, tol, "pass" if ok else "fail")
        for name, val, ref, dev, tol, ok in expparams.table_rows(report)
    ]
    meta = {
        "source": params_path or "built-in Rb-85 defaults",
        "coherent": report.coherent,
        "adiabatic": report.adiabatic,
        "p_infty": "p_max",
        "nonadiabatic_probability": expparams.NONADIABATIC_ANNOTATION,
        "spont_emission_formula": "(Gamma/Delta) * p_max/(hbar kappa)",
    }
    if caught:
        meta["warning"] = str(caught[0].message)
    return rows, meta


def cmd_validate(cfg, checks, phase_shift=None):
    results = validate.run_checks(checks, phase_shift=phase_shift)
    rows = [(r.group, r.name, r.passed, r.measured, r.tolerance, r.detail) for r in results]
    n_fail = sum(not r.passed for r in results)
    meta = {"checks": len(results), "failures": n_fail}
    return rows, meta


# --- entry point --------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=None, help=f"incident momentum in hbar*kappa (default {DEFAULT_ALPHA:g})")
    common.add_argument("--pmax", type=float, default=DEFAULT_PMAX, help="p_max in hbar*kappa (default %(default)g)")
    common.add_argument("--sweep", default=None, help="start:stop:n[:log] for the swept variable")
    common.add_argument("--pbar", type=float, default=5.0, help="packet mean momentum (default %(default)g)")
    common.add_argument("--sigma-p", type=float, default=None, help="packet momentum width (default pbar/10)")
    common.add_argument("--params", default=None, help="physical parameter file for 'table'")
    common.add_argument("--checks", default=None, help="comma-separated check groups for 'validate'")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default standard output)")

    parser = argparse.ArgumentParser(prog="evmirror", description="Atomic reflection from an evanescent-wave mirror.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "trajectory": "classical bounce z(t) and its asymptotes",
        "wavefunction": "WKB and exact standing waves versus z",
        "phase": "WKB and exact reflection phase versus alpha",
        "mirrors": "classical, WKB and wave-packet mirror positions versus alpha",
        "packet": "wave-packet centroids and the fitted mirror position",
        "table": "laboratory parameters against typical published values",
        "validate": "oracle cross-checks of the closed forms",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _config(ns):
    sweep = None
    cmd = ns.command
    if cmd in DEFAULT_SWEEPS:
        if ns.sweep is not None:
            sweep = parse_sweep(ns.sweep, positive=cmd in ("phase", "mirrors"))
        elif cmd in ("phase", "mirrors") and ns.alpha is not None:
            sweep = Sweep(ns.alpha, ns.alpha, 1)
        else:
            sweep = parse_sweep(DEFAULT_SWEEPS[cmd], positive=False)
    alpha = DEFAULT_ALPHA if ns.alpha is None else ns.alpha
    if not (math.isfinite(ns.pmax) and ns.pmax > 0):
        raise ConfigError(f"--pmax must be positive, got {ns.pmax}")
    return RunConfig(cmd, alpha, ns.pmax, sweep, ns.format, ns.out)


def run(cfg, ns, phase_shift=None):
    """Dispatch to the command; returns ``(text, exit_status)``."""
    cmd = cfg.command
    if cmd == "packet":
        sigma = ns.sigma_p if ns.sigma_p is not None else ns.pbar / 10.0
        rows, meta = cmd_packet(cfg, ns.pbar, sigma)
    elif cmd == "table":
        rows, meta = cmd_table(cfg, ns.params)
    elif cmd == "validate":
        checks = None if ns.checks is None else [c for c in ns.checks.split(",") if c.strip()]
        rows, meta = cmd_validate(cfg, checks, phase_shift)
    else:
        rows, meta = globals()["cmd_" + cmd](cfg)
    header = {"command": cmd, "version": __version__}
    if cmd not in ("table", "validate"):
        header["p_max_red"] = cfg.p_max_red
    if cmd in ("trajectory", "wavefunction"):
        header["alpha"] = cfg.alpha
    header.update(meta)
    text = render(COLUMNS[cmd], rows, header, cfg.output_format)
    status = 0
    if cmd == "validate" and meta["failures"]:
        status = 1
    if cmd == "table" and any(r[-1] == "fail" for r in rows):
        status = 1
    return text, status


def main(argv=None, phase_shift=None):
    """Console entry point; ``phase_shift`` swaps the reference formula for ``validate``."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _config(ns)
        text, status = run(cfg, ns, phase_shift)
    except (ConfigError, OSError) as exc:
        print(f"evmirror {ns.command}: error: {exc}", file=sys.stderr)
        return 2
    except MirrorError as exc:
        print(f"evmirror {ns.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.command == "validate":
        verdict = "all checks passed" if status == 0 else "FAILURES detected"
        print(f"validate: {verdict}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Exit codes: 0 all checks pass, 1 verification failure, 2 usage/config
error, 3 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import STANDARD_GRAVITY, ConfigError, RunConfig, load_config
from .constants import HBAR_SI, M_ELECTRON, UniversalConstants
from .equiv import (
    RegimeViolation,
    derive_particle_params,
    electron_calibration,
    ep_violation_report,
    freefall_simulate,
)
from .hamtrans import derive, gravity_field_factor, reference_effective_mass, verify_commuting_split, verify_q_brackets
from .ncspace import build_ncrep, verify_algebra, verify_jacobi
from .serialize import SCHEMA_VERSION, write_csv, write_json, write_text
from .spectra import (
    FockBasisSpec,
    NonConvergence,
    NumericParams,
    airy_levels,
    dispersion_fit,
    ground_energy,
    oscillator_offset,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONV = 0, 1, 2, 3
DEFAULT_OUT = "ncfield-out"


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _envelope(command: str, cfg: RunConfig, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "config": cfg.source, **body}


# -- parameter assembly ----------------------------------------------------

def working_params(cfg: RunConfig) -> NumericParams:
    if cfg.units != "working":
        raise ConfigError("this command needs working units ([run] units = working)")
    try:
        return NumericParams(
            hbar=cfg.param("hbar", 1.0),
            mass=cfg.param("m", 1.0),
            field_factor=cfg.param("kappa", 1.0),
            l0=cfg.param("l0", 1.0),
            m_osc=cfg.param("m_osc", 1.0),
            omega=cfg.param("omega", 1.0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def ep_setting(cfg: RunConfig):
    """Constants, gravity and shared parameters for the EP/free-fall commands."""
    if cfg.units == "si":
        c = UniversalConstants.codata2018()
        hbar = cfg.param("hbar", HBAR_SI)
        shared = NumericParams(
            hbar=hbar,
            mass=cfg.param("m", M_ELECTRON),
            field_factor=0.0,
            l0=cfg.param("l0", c.planck_length),
            m_osc=cfg.param("m_osc", c.planck_mass),
            omega=cfg.param("omega", c.planck_frequency),
        )
        g = cfg.param("g", STANDARD_GRAVITY)
    else:
        c = UniversalConstants.working_units()
        shared = working_params(cfg).replace(field_factor=0.0)
        g = cfg.param("g", 1.0)
    return c, g, shared


def _catalog(cfg: RunConfig):
    if not cfg.particles:
        raise ConfigError("particle catalog is empty ([particles] section)")
    return cfg.particles


def _derived(cfg: RunConfig, constants):
    names = {p.name: p for p in cfg.particles}
    if cfg.ep.reference not in names:
        raise ConfigError(f"reference particle {cfg.ep.reference!r} is not in the catalog")
    cal = electron_calibration(constants, names[cfg.ep.reference].mass)
    params = [derive_particle_params(p.mass, cal, constants, name=p.name) for p in cfg.particles]
    return cal, params


# -- commands --------------------------------------------------------------

def cmd_verify_algebra(cfg: RunConfig, out: Path, args) -> int:
    rep = build_ncrep(cfg.shift)
    algebra, jacobi = verify_algebra(rep), verify_jacobi(rep)
    ok = algebra.passed and jacobi.passed
    write_json(out / "algebra_report.json", _envelope("verify-algebra", cfg, {
        "shift": str(cfg.shift),
        "algebra": algebra.to_dict(),
        "jacobi": jacobi.to_dict(),
        "pass": ok,
    }))
    write_text(out / "algebra_report.txt", algebra.to_text() + jacobi.to_text())
    for c in algebra.failures + jacobi.failures:
        _log(f"FAIL {c.name}: residual {c.residual}")
    _log(f"algebra {len(algebra) - len(algebra.failures)}/{len(algebra)}, "
         f"jacobi {len(jacobi) - len(jacobi.failures)}/{len(jacobi)}")
    return EXIT_OK if ok else EXIT_FAIL


def _field_factor(cfg: RunConfig):
    return {"kappa": None, "gravity": gravity_field_factor(), "zero": 0}[cfg.transform_field]


def cmd_transform(cfg: RunConfig, out: Path, args) -> int:
    f = _field_factor(cfg)
    d = derive(f, cfg.shift)
    golden = reference_effective_mass(f)
    qrep, split = verify_q_brackets(d.decomposed), verify_commuting_split(d.decomposed)
    meff_ok = d.effective_mass == golden
    ok = d.exact and meff_ok and qrep.passed and split.passed
    text = "\n".join([
        f"H_abstract = {d.abstract.to_text()}",
        f"H_substituted = {d.substituted.to_text()}",
        d.decomposed.to_text().rstrip("\n"),
        f"m_eff = {d.effective_mass.to_text()}",
        f"m_eff_reference = {golden.to_text()}",
        "",
    ])
    write_text(out / "transform.txt", text + qrep.to_text() + split.to_text())
    write_json(out / "transform.json", _envelope("transform", cfg, {
        "field": cfg.transform_field,
        "abstract": d.abstract.to_text(),
        "substituted": d.substituted.to_text(),
        "decomposed": {
            "kinetic_coeffs": [c.to_text() for c in d.decomposed.kinetic_coeffs],
            "field_term": d.decomposed.field_term.to_text(),
            "q_defs": [q.to_text() for q in d.decomposed.q_defs],
            "osc_part": d.decomposed.osc_part.to_text(),
        },
        "effective_mass": d.effective_mass.to_text(),
        "effective_mass_matches_reference": meff_ok,
        "decomposition_exact": d.exact,
        "q_brackets": qrep.to_dict(),
        "commuting_split": split.to_dict(),
        "pass": ok,
    }))
    print(f"m_eff = {d.effective_mass.to_text()}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_spectrum(cfg: RunConfig, out: Path, args) -> int:
    p = working_params(cfg)
    sc = cfg.spectrum
    basis = FockBasisSpec(sc.n_max)
    cap = sc.n_max_cap
    try:
        fit = dispersion_fit(p, sc.k_grid, basis, sc.direction, sc.tolerance, cap, sc.method)
        d = np.asarray(sc.direction, float) / np.linalg.norm(sc.direction)
        check = ground_energy(p, sc.check_k * d[0], sc.check_k * d[1], basis, sc.tolerance, cap, sc.method)
    except NonConvergence as exc:
        _log(f"non-convergence: {exc}")
        write_json(out / "spectrum.json", _envelope("spectrum", cfg, {
            "error": "non-convergence", "message": str(exc), "truncation_delta": exc.delta, "n_max": exc.n_max,
        }))
        return EXIT_NONCONV
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    offset = oscillator_offset(p, basis)

    cols = ["k1", "k2", "ground_energy", "analytic_energy", "rel_err"]
    write_csv(out / "dispersion.csv", cols, fit.rows())
    levels = []
    if p.field_factor != 0 and sc.airy_levels > 0:
        from .airy import airy_zeros

        zs = airy_zeros(sc.airy_levels)
        es = airy_levels(p, sc.airy_levels)
        levels = [{"n": n, "airy_zero": z, "energy": e} for n, (z, e) in enumerate(zip(zs, es), 1)]
        write_csv(out / "airy_levels.csv", ["n", "airy_zero", "energy"], levels)
    if args.emit_plot_data:
        rows = [{
            "k": math.hypot(g.k1, g.k2),
            "hbar2k2_over_2": p.hbar**2 * (g.k1**2 + g.k2**2) / 2,
            "delta_E": g.energy - fit.e0,
            "fit_delta_E": fit.inv_meff_fit * p.hbar**2 * (g.k1**2 + g.k2**2) / 2,
            "ground_energy": g.energy,
            "analytic_energy": g.analytic,
        } for g in fit.points]
        write_csv(out / "dispersion.dat", list(rows[0]), rows, sep=" ", header_prefix="# ")

    meff_ok = fit.rel_dev <= sc.meff_tolerance
    write_json(out / "spectrum.json", _envelope("spectrum", cfg, {
        "params": p.symbol_values(),
        "n_max": sc.n_max,
        "dispersion_fit": {
            "meff_fit": fit.meff_fit,
            "meff_symbolic": fit.meff_symbolic,
            "rel_dev": fit.rel_dev,
            "fit_residual": fit.fit_residual,
            "e0": fit.e0,
            "pass": meff_ok,
        },
        "check_point": {
            "k1": check.k1, "k2": check.k2, "ground_energy": check.energy,
            "analytic_energy": check.analytic, "analytic_half_quantum": check.analytic_half_quantum,
            "truncation_delta": check.truncation_delta, "n_max": check.n_max,
        },
        "oscillator_offset": offset.to_dict(),
        "airy_levels": levels,
        "pass": meff_ok,
    }))
    print(f"m_eff fit = {fit.meff_fit:.12g} (symbolic {fit.meff_symbolic:.12g}, rel dev {fit.rel_dev:.2e})")
    if offset.half_quantum_discrepancy:
        _log(f"note: oscillator offset {offset.measured:.12g} = 3/2 hbar*omega, not 1/2 hbar*omega")
    return EXIT_OK if meff_ok else EXIT_FAIL


def _ep_body(cfg: RunConfig):
    particles = _catalog(cfg)
    constants, g, shared = ep_setting(cfg)
    tol = cfg.ep.tolerance
    masses = [p.mass for p in particles]
    body = {"units": cfg.units, "mode": cfg.ep.mode, "g": g,
            "constants": {k: getattr(constants, k) for k in
                          ("planck_mass", "planck_length", "planck_frequency", "hbar")}}
    pparams = None
    if cfg.ep.reference in {p.name for p in particles}:
        cal, pparams = _derived(cfg, constants)
        body["calibration"] = cal.to_dict()
    if cfg.ep.mode == "derived":
        if pparams is None:
            _derived(cfg, constants)  # raises the missing-reference error
        body["particle_params"] = [pp.to_dict() for pp in pparams]
        report = ep_violation_report(masses, g, per_particle=pparams, constants=constants, tolerance=tol)
        per_numeric = [pp.numeric(constants.hbar) for pp in pparams]
    else:
        report = ep_violation_report(masses, g, shared_params=shared, constants=constants, tolerance=tol)
        per_numeric = [shared] * len(particles)
    body["report"] = report.to_dict()
    return particles, g, report, per_numeric, body


def _trajectories(cfg, particles, g, per_numeric):
    fc = cfg.freefall
    t = np.linspace(fc.t_start, fc.t_stop, fc.n_t)
    return [freefall_simulate(p.mass, prm, g, fc.position, t, velocity=fc.velocity, name=p.name)
            for p, prm in zip(particles, per_numeric)]


def cmd_ep(cfg: RunConfig, out: Path, args) -> int:
    try:
        particles, g, report, per_numeric, body = _ep_body(cfg)
    except RegimeViolation as exc:
        _log(f"regime violation: {exc}")
        return EXIT_FAIL
    if cfg.ep.trajectories:
        for tr in _trajectories(cfg, particles, g, per_numeric):
            write_csv(out / f"trajectory_{tr.name}.csv", ["t", "x1", "x2", "x3"], tr.rows())
    body["assert_recovered"] = cfg.ep.assert_recovered
    write_json(out / "ep_report.json", _envelope("ep", cfg, body))
    if "calibration" in body:
        print(f"A_tilde = {body['calibration']['A_tilde']:.6g}, gamma_tilde = {body['calibration']['gamma_tilde']:.6g}")
    print(f"eta = {report.eta:.3e}, recovered = {report.recovered}")
    if cfg.ep.assert_recovered and not report.recovered:
        _log("equivalence-principle recovery asserted but a condition check failed")
        return EXIT_FAIL
    return EXIT_OK


def cmd_freefall(cfg: RunConfig, out: Path, args) -> int:
    try:
        particles, g, report, per_numeric, _ = _ep_body(cfg)
        trs = _trajectories(cfg, particles, g, per_numeric)
    except RegimeViolation as exc:
        _log(f"regime violation: {exc}")
        return EXIT_FAIL
    for tr in trs:
        write_csv(out / f"trajectory_{tr.name}.csv", ["t", "x1", "x2", "x3"], tr.rows())
    sep = max(float(np.max(np.abs(tr.x - trs[0].x))) for tr in trs)
    ok = not cfg.freefall.assert_coincide or sep <= cfg.freefall.tolerance
    write_json(out / "freefall.json", _envelope("freefall", cfg, {
        "units": cfg.units,
        "mode": cfg.ep.mode,
        "g": g,
        "particles": [{"name": tr.name, "mass": tr.mass, "meff": tr.meff,
                       "final_position": tr.x[-1].tolist()} for tr in trs],
        "max_separation": sep,
        "assert_coincide": cfg.freefall.assert_coincide,
        "pass": ok,
    }))
    print(f"max trajectory separation = {sep:.3e}")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "verify-algebra": cmd_verify_algebra,
    "transform": cmd_transform,
    "spectrum": cmd_spectrum,
    "ep": cmd_ep,
    "freefall": cmd_freefall,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncfield", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", metavar="PATH", help="INI run configuration")
        sp.add_argument("--out", metavar="DIR", help=f"output directory (default {DEFAULT_OUT})")
        sp.add_argument("--emit-plot-data", action="store_true", help="also write whitespace-separated plot data")
        sp.add_argument("--tolerance", type=float, metavar="X",
                        help="override convergence tolerance (spectrum) or condition tolerance (ep, freefall)")
        sp.add_argument("--n-max", type=int, metavar="N", help="override Fock truncation n_max")
    return parser


def apply_overrides(cfg: RunConfig, args) -> None:
    if args.tolerance is not None:
        if not args.tolerance > 0:
            raise ConfigError("--tolerance must be positive")
        cfg.spectrum.tolerance = args.tolerance
        cfg.ep.tolerance = args.tolerance
        cfg.freefall.tolerance = args.tolerance
    if args.n_max is not None:
        if args.n_max < 1:
            raise ConfigError("--n-max must be >= 1")
        cfg.spectrum.n_max = args.n_max


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        apply_overrides(cfg, args)
        out = Path(args.out or cfg.out_dir or DEFAULT_OUT)
        return COMMANDS[args.command](cfg, out, args)
    except ConfigError as exc:
        _log(f"config error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

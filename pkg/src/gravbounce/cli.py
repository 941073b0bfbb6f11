"""Command-line entry point: ``gravbounce <command> [options]``.

Every computing command writes one CSV table (see :mod:`gravbounce.export`).
Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 output error.
The only environment setting read is ``GRAVBOUNCE_THREADS`` (threads used to
fill Wigner grids).
"""
from __future__ import annotations

import argparse
import os
import sys
from importlib import resources

import numpy as np

from . import __version__
from . import double_mirror as dm
from . import free_fall as ff
from . import gravity_states as gs
from . import quadrature
from . import wigner as wg
from . import yukawa as yk
from .config import COMMANDS, FIELD_NAMES, MIXTURES, QUANTITIES, SYSTEMS, RunConfig, parse_config
from .errors import ConfigError, DomainError, QuadratureError, RootFindingError
from .export import Table, export_grid

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_OUTPUT = 4

THREADS_ENV = "GRAVBOUNCE_THREADS"

_FLAG_HELP = {
    "system": f"state family: {', '.join(SYSTEMS)}",
    "n": "single-mirror level index",
    "n1": "first level of a superposition",
    "n2": "second level of a superposition",
    "n_max": "number of single-mirror levels to tabulate",
    "L": "slit width (length, default unit um)",
    "h": "step height below the slit (length)",
    "m": "slit mode index",
    "m_max": "number of slit modes",
    "N": "basis truncation below the slit",
    "p1": "weight of the first component",
    "p2": "weight of the second component",
    "mixture": f"mixture kind: {', '.join(MIXTURES)}",
    "quantity": f"output quantity: {', '.join(QUANTITIES)}",
    "W0": "Yukawa strength (energy, default unit peV)",
    "delta": "Yukawa range (length)",
    "g": "gravitational acceleration in m/s^2",
    "z_min": "height axis start (um, or scaled for single-mirror systems)",
    "z_max": "height axis end",
    "z_samples": "height samples",
    "k_min": "wavenumber axis start (1/um, or scaled for single-mirror systems)",
    "k_max": "wavenumber axis end",
    "k_samples": "wavenumber samples",
    "times": "comma-separated times (default unit ms)",
    "abs_tol": "absolute quadrature tolerance",
    "rel_tol": "relative quadrature tolerance",
    "output": "output CSV path ('-' for stdout)",
}


def _flag(name):
    return "--" + name.replace("_", "-")


def build_parser():
    parser = argparse.ArgumentParser(prog="gravbounce", allow_abbrev=False,
                                     description="Gravitationally bound neutron states: tables and grids as CSV.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", metavar="FILE",
                        help="key = value file (or a previous export); flags override it")
    for name in FIELD_NAMES:
        if name == "command":
            continue
        common.add_argument(_flag(name), dest=name, default=None, metavar="VALUE", help=_FLAG_HELP.get(name))
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for cmd in COMMANDS:
        sub.add_parser(cmd, parents=[common], allow_abbrev=False, help=f"{cmd} table")
    rep = sub.add_parser("reproduce-figures", allow_abbrev=False, help="run every shipped figure configuration")
    rep.add_argument("--outdir", default="figure_data", help="directory for the CSV files")
    rep.add_argument("--only", action="append", default=None, metavar="NAME",
                     help="run only this configuration (repeatable)")
    rep.add_argument("--list", action="store_true", help="list the shipped configurations and exit")
    return parser


# ---------------------------------------------------------------------------
# helpers


def _threads():
    text = os.environ.get(THREADS_ENV, "").strip()
    if not text:
        return 1
    try:
        n = int(text)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV}: expected a positive integer, got {text!r}", THREADS_ENV) from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV}: expected a positive integer, got {text!r}", THREADS_ENV)
    return n


def _axis(lo, hi, n):
    return np.array([lo]) if n == 1 else np.linspace(lo, hi, n)


def _z_axis(cfg):
    return _axis(cfg.z_min, cfg.z_max, cfg.z_samples)


def _k_axis(cfg):
    return _axis(cfg.k_min, cfg.k_max, cfg.k_samples)


def _grid(*axes):
    """Row-major product of the axes (first axis outermost)."""
    mesh = np.meshgrid(*axes, indexing="ij")
    return [m.ravel() for m in mesh]


def _scales(cfg):
    return gs.make_scales(g=cfg.g)


def _scale_meta(scales):
    return (("z0_um", scales.z0), ("E0_peV", scales.E0))


def _expansion(cfg, scales, m=None):
    return ff.default_expansion(m or cfg.m, scales, cfg.h, cfg.L, cfg.N)


def _mode(cfg, scales):
    return dm.solve_modes(scales, cfg.L, cfg.m)[cfg.m - 1]


def _superposition(cfg, scales):
    return gs.SuperpositionSpec(cfg.p1, cfg.p2, (gs.level(scales, cfg.n1), gs.level(scales, cfg.n2)))


# ---------------------------------------------------------------------------
# commands


def cmd_levels(cfg: RunConfig) -> Table:
    scales = _scales(cfg)
    rows = [(lv.n, lv.a_n, lv.E_n, lv.z_n) for lv in gs.levels(scales, cfg.n_max)]
    return Table(("n", "a_n", "E_n_peV", "z_n_um"), np.array(rows), _scale_meta(scales))


def cmd_modes(cfg: RunConfig) -> Table:
    scales = _scales(cfg)
    rows = [(md.m, md.z_bar, md.E_bar, md.a_m, md.b_m, md.N_m) for md in dm.solve_modes(scales, cfg.L, cfg.m_max)]
    return Table(("m", "z_bar_um", "E_bar_peV", "a_m", "b_m", "N_m"), np.array(rows), _scale_meta(scales))


def cmd_wavefunction(cfg: RunConfig) -> Table:
    scales = _scales(cfg)
    z = _z_axis(cfg)
    meta = _scale_meta(scales)
    if cfg.system == "single":
        lv = gs.level(scales, cfg.n)
        psi = np.asarray(gs.eigenfunction(lv, z))
        return Table(("zeta", "psi", "density"), np.column_stack([z, psi, psi * psi]), meta)
    if cfg.system == "double":
        psi = dm.mode_profile(_mode(cfg, scales), z)
        return Table(("z_um", "psi", "density"), np.column_stack([z, psi, psi * psi]), meta)
    t = np.array(cfg.times)
    zz, tt = _grid(z, t)
    if cfg.system == "superposition":
        dens = gs.superposition_density(_superposition(cfg, scales), zz, tt)
        return _time_table("zeta", z, t, [("density", dens)], meta)
    e = _expansion(cfg, scales)
    gc, gsn = ff.region2_components(e, zz, tt)
    # the slit mode shifted up by h, for comparison with the truncated expansion
    psi_1 = ff.region1_wavefunction(e.mode, cfg.h, zz, tt)
    return Table(("z_um", "t_s", "re", "im", "density", "re_I", "im_I"),
                 np.column_stack([zz, tt, gc, -gsn, gc * gc + gsn * gsn, psi_1.real, psi_1.imag]), meta)


def cmd_spectrum(cfg: RunConfig) -> Table:
    scales = _scales(cfg)
    k = _k_axis(cfg)
    meta = _scale_meta(scales)
    if cfg.system == "single":
        spec = quadrature.QuadratureSpec(abs_tol=cfg.abs_tol, rel_tol=cfg.rel_tol,
                                         k_max=max(quadrature.DEFAULT_SPEC.k_max, float(np.max(np.abs(k)))))
        fc, fs = gs.momentum_components(gs.level(scales, cfg.n), k, spec=spec)
        return Table(("k_scaled", "f_c", "f_s", "density"), np.column_stack([k, fc, fs, fc * fc + fs * fs]), meta)
    if cfg.system == "double":
        ac, as_ = dm.mode_alpha(_mode(cfg, scales), k)
        md = _mode(cfg, scales)
        dens = dm.mode_spectral_function(md, k)
        return Table(("k_per_um", "alpha_c", "alpha_s", "density"), np.column_stack([k, ac, as_, dens]), meta)
    t = np.array(cfg.times)
    if cfg.system == "superposition":
        dens = gs.superposition_momentum_density(_superposition(cfg, scales), k[:, None], t[None, :])
        return _time_table("k_scaled", k, t, [("density", dens)], meta)
    # time carries the leading axis in the momentum routines; transpose so k is outermost
    re, im = (a.T for a in ff.momentum_components(_expansion(cfg, scales), k, t[:, None]))
    return _time_table("k_per_um", k, t, [("re", re), ("im", im), ("density", re * re + im * im)], meta)


def _wave_state(cfg, scales):
    t = cfg.times[0]
    if cfg.system == "single":
        return wg.single_state(gs.level(scales, cfg.n))
    if cfg.system == "superposition":
        return wg.superposition_state(_superposition(cfg, scales), t)
    if cfg.system == "double":
        return wg.mode_state(_mode(cfg, scales))
    return wg.region2_state(_expansion(cfg, scales), t)


def cmd_wigner(cfg: RunConfig) -> Table:
    scales = _scales(cfg)
    z, k, workers = _z_axis(cfg), _k_axis(cfg), _threads()
    if cfg.system == "superposition" and cfg.mixture == "incoherent":
        # period average: the weighted sum of the two level functions
        sup = _superposition(cfg, scales)
        parts = [wg.wigner_grid(wg.single_state(lv), z, k, workers=workers).W for lv in sup.levels]
        W = cfg.p1 * parts[0] + cfg.p2 * parts[1]
        tag = wg.SCALED
    else:
        state = _wave_state(cfg, scales)
        W, tag = wg.wigner_grid(state, z, k, workers=workers).W, state.unit_tag
    zz, kk = _grid(z, k)
    names = ("zeta", "k_scaled", "W") if tag == wg.SCALED else ("z_um", "k_per_um", "W")
    meta = _scale_meta(scales) + (("unit_tag", tag),)
    return Table(names, np.column_stack([zz, kk, W.ravel()]), meta)


def _time_table(axis_name, x, t, columns, meta):
    """Rows over ``x`` (outer) and ``t`` (inner); ``columns`` hold ``(len(x), len(t))`` arrays."""
    xx, tt = _grid(x, t)
    names = (axis_name, "t_s") + tuple(name for name, _ in columns)
    data = [xx, tt] + [np.asarray(v).ravel() for _, v in columns]
    return Table(names, np.column_stack(data), meta)


def _trig_parts(state, z, t):
    gc, gsn = ff.region2_components(state, z[:, None], t[None, :])
    return gc * gc, gsn * gsn


def _momentum_density(state, k, t):
    return ff.momentum_density(state, k, t[:, None]).T


def cmd_evolve(cfg: RunConfig) -> Table:
    scales = _scales(cfg)
    e = _expansion(cfg, scales)
    meta = _scale_meta(scales)
    t = np.array(cfg.times)
    if cfg.quantity == "coefficients":
        rows = np.column_stack([np.arange(1, e.N + 1), e.D, e.coefficients])
        return Table(("n", "D_n", "c_n"), rows, meta)
    if cfg.quantity == "position":
        z = _z_axis(cfg)
        cos2, sin2 = _trig_parts(e, z, t)
        return _time_table("z_um", z, t, [("density", cos2 + sin2), ("cos_part", cos2), ("sin_part", sin2)], meta)
    k = _k_axis(cfg)
    return _time_table("k_per_um", k, t, [("density", _momentum_density(e, k, t))], meta)


def _mixture_superposition(cfg, scales, t):
    sup = _superposition(cfg, scales)
    coherent = cfg.mixture == "coherent"
    meta = _scale_meta(scales)
    if cfg.quantity == "position":
        z = _z_axis(cfg)
        if coherent:
            dens = gs.superposition_density(sup, z[:, None], t[None, :])
        else:
            dens = np.broadcast_to(gs.superposition_density_average(sup, z)[:, None], (len(z), len(t)))
        return _time_table("zeta", z, t, [("density", dens)], meta)
    k = _k_axis(cfg)
    if coherent:
        dens = gs.superposition_momentum_density(sup, k[:, None], t[None, :])
    else:
        dens = np.broadcast_to(gs.superposition_momentum_density_average(sup, k)[:, None], (len(k), len(t)))
    return _time_table("k_scaled", k, t, [("density", dens)], meta)


def cmd_mixture(cfg: RunConfig) -> Table:
    scales = _scales(cfg)
    t = np.array(cfg.times)
    if cfg.system == "superposition":
        return _mixture_superposition(cfg, scales, t)
    meta = _scale_meta(scales)
    e1, e2 = _expansion(cfg, scales, 1), _expansion(cfg, scales, 2)
    if cfg.mixture == "coherent":
        mix = ff.coherent_mixture(e1, e2, cfg.p1, cfg.p2)
    if cfg.quantity == "position":
        z = _z_axis(cfg)
        if cfg.mixture == "coherent":
            cos2, sin2 = _trig_parts(mix, z, t)
        else:
            (c1, s1), (c2, s2) = _trig_parts(e1, z, t), _trig_parts(e2, z, t)
            cos2, sin2 = cfg.p1 * c1 + cfg.p2 * c2, cfg.p1 * s1 + cfg.p2 * s2
        return _time_table("z_um", z, t, [("density", cos2 + sin2), ("cos_part", cos2), ("sin_part", sin2)], meta)
    k = _k_axis(cfg)
    if cfg.mixture == "coherent":
        dens = _momentum_density(mix, k, t)
    else:
        dens = cfg.p1 * _momentum_density(e1, k, t) + cfg.p2 * _momentum_density(e2, k, t)
    return _time_table("k_per_um", k, t, [("density", dens)], meta)


def cmd_yukawa(cfg: RunConfig) -> Table:
    scales = _scales(cfg)
    model = yk.yukawa_model(cfg.W0, cfg.delta, cfg.N, scales)
    meta = _scale_meta(scales)
    if cfg.quantity == "levels":
        rows = np.column_stack([np.arange(1, model.N + 1), model.E, model.eps, np.diag(model.J)])
        return Table(("n", "E_n_peV", "eps_n_peV", "J_nn_peV"), rows, meta)
    if cfg.quantity == "potential":
        z = _z_axis(cfg)
        w = yk.yukawa_potential(model, z)
        v = scales.mg_peV_per_um * z + w
        return Table(("z_um", "V_peV", "W_peV"), np.column_stack([z, v, w]), meta)
    p = yk.perturb(_expansion(cfg, scales), model)
    t = np.array(cfg.times)
    if cfg.quantity in ("position", "delta-position"):
        fn = yk.perturbed_density if cfg.quantity == "position" else yk.delta_space
        label = "density" if cfg.quantity == "position" else "delta"
        z = _z_axis(cfg)
        return _time_table("z_um", z, t, [(label, fn(p, z[:, None], t[None, :]))], meta)
    fn = yk.perturbed_momentum_density if cfg.quantity == "momentum" else yk.delta_momentum
    label = "density" if cfg.quantity == "momentum" else "delta"
    k = _k_axis(cfg)
    return _time_table("k_per_um", k, t, [(label, fn(p, k, t[:, None]).T)], meta)


COMMAND_TABLE = {
    "levels": cmd_levels,
    "modes": cmd_modes,
    "wavefunction": cmd_wavefunction,
    "spectrum": cmd_spectrum,
    "wigner": cmd_wigner,
    "evolve": cmd_evolve,
    "mixture": cmd_mixture,
    "yukawa": cmd_yukawa,
}


def run(cfg: RunConfig, path=None):
    """Compute the table for ``cfg`` and write it; returns the path (None for stdout)."""
    table = COMMAND_TABLE[cfg.command](cfg)
    return export_grid(table, cfg, path)


# ---------------------------------------------------------------------------
# figure configurations


def figure_configs():
    """Names of the shipped figure configurations, sorted."""
    root = resources.files("gravbounce") / "figures"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".cfg"))


def figure_config_text(name):
    return (resources.files("gravbounce") / "figures" / f"{name}.cfg").read_text(encoding="utf-8")


def reproduce_figures(outdir, only=None, log=sys.stderr):
    names = figure_configs()
    if only:
        unknown = sorted(set(only) - set(names))
        if unknown:
            raise ConfigError(f"only: unknown figure configuration(s) {', '.join(unknown)}", "only")
        names = [n for n in names if n in only]
    os.makedirs(outdir, exist_ok=True)
    written = []
    for name in names:
        cfg = parse_config({}, figure_config_text(name), f"{name}.cfg")
        path = os.path.join(outdir, f"{name}.csv")
        run(cfg, path)
        print(f"wrote {path}", file=log)
        written.append(path)
    return written


# ---------------------------------------------------------------------------


def _fail(category, message, code):
    print(f"gravbounce: error[{category}]: {message}", file=sys.stderr)
    return code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "reproduce-figures":
            if args.list:
                for name in figure_configs():
                    print(name)
                return EXIT_OK
            reproduce_figures(args.outdir, args.only)
            return EXIT_OK
        values = {name: getattr(args, name) for name in FIELD_NAMES if name != "command"}
        values["command"] = args.command
        text = None
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        cfg = parse_config(values, text, args.config or "<config>")
        run(cfg)
    except (ConfigError, DomainError) as exc:
        return _fail("input", str(exc), EXIT_INPUT)
    except (RootFindingError, QuadratureError) as exc:
        return _fail("numeric", str(exc), EXIT_NUMERIC)
    except OSError as exc:
        return _fail("output", str(exc), EXIT_OUTPUT)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line interface: ``ptising <subcommand> ...``.

Single-point results print as ``key = value`` lines (or one JSON object with
``--format json``).  Exit status is 0 on success, 1 on a domain or
verification failure and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__, berry, kernels, phase, response, scan, spectrum
from .errors import DomainError, NonConvergenceError
from .model import FieldPoint, dispersion, to_polar

log = logging.getLogger("ptising")


def _fmt(v) -> str:
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        if v.imag == 0:
            return "%.17g" % v.real
        return "%.17g%+.17gj" % (v.real, v.imag)
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _jsonable(v):
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": float(v.real), "im": float(v.imag)}
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    return v


def _emit(args, pairs) -> None:
    if args.format == "json":
        print(json.dumps({k: _jsonable(v) for k, v in pairs}))
    else:
        for k, v in pairs:
            print(f"{k} = {_fmt(v)}")


def _point(args) -> FieldPoint:
    return FieldPoint(args.eta, args.xi, args.J)


def _mode(args):
    if getattr(args, "sites", None) is not None:
        return spectrum.FiniteN(args.sites)
    return spectrum.Thermodynamic(args.quad_points)


# ---------------------------------------------------------------------------
# subcommands


def cmd_dispersion(args):
    p = _point(args)
    _emit(args, [("n", args.n), ("k", args.k), ("eps", dispersion(args.n, args.k, p))])
    return 0


def cmd_energy(args):
    p = _point(args)
    mode = _mode(args)
    if isinstance(mode, spectrum.FiniteN):
        res = spectrum.ground_energy(mode.two_n, p)
        _emit(args, [("mode", str(mode)), ("e_total", res.e_total), ("eps_g", res.eps_g)])
    else:
        _emit(args, [("mode", str(mode)), ("eps_g", spectrum.energy_density(p, mode))])
    return 0


def cmd_laplacian(args):
    p = _point(args)
    mode = _mode(args)
    rec = response.response(p, mode)
    pairs = [("mode", str(mode)), ("eps_g", rec.eps_g), ("d_eta", rec.d_eta), ("d_xi", rec.d_xi),
             ("d2_eta", rec.d2_eta), ("d2_xi", rec.d2_xi), ("d2_mixed", rec.d2_mixed),
             ("laplacian", rec.laplacian), ("m_a", rec.m_a), ("m_b", rec.m_b),
             ("boundary_distance", rec.boundary_distance)]
    if args.fd:
        pairs.append(("laplacian_fd", response.laplacian_fd(p, args.step, mode)))
    _emit(args, pairs)
    return 0


def cmd_berry(args):
    p = _point(args)
    mode = _mode(args)
    fn = berry.curvature_preset_sum if args.preset == "sum" else berry.curvature_preset_diff
    r, phi = to_polar(p)
    _emit(args, [("preset", args.preset), ("mode", str(mode)), ("C", fn(p, mode)),
                 ("chi", berry.chi_prefactor(phi))])
    return 0


def cmd_phase(args):
    p = _point(args)
    label = phase.classify(p, args.tol)
    if args.format == "json":
        _emit(args, [("phase", label.value), ("boundary_distance", phase.boundary_distance(p))])
    else:
        print(label.value)
    return 0


def cmd_scan(args):
    with open(args.config) as fh:
        cfg_dict = json.load(fh)
    if args.jobs is not None:
        cfg_dict["jobs"] = args.jobs
    elif "jobs" not in cfg_dict:
        cfg_dict["jobs"] = os.cpu_count() or 1
    if args.out_format is not None:
        cfg_dict["format"] = args.out_format
    cfg = scan.ScanConfig.from_dict(cfg_dict)
    table = scan.run_scan(cfg, progress=not args.quiet)
    data = scan.serialize(table)
    if args.out == "-":
        sys.stdout.buffer.write(data)
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)
        log.info("wrote %d points to %s", len(table), args.out)
    return 0


def cmd_oracle(args):
    from .oracle import block, chain  # heavy imports only when needed

    p = _point(args)
    which = args.oracle
    ok = True
    if which == "chain":
        rep = chain.sector_ground_compare(args.sites, p)
        ok = rep.agrees(args.tol)
        pairs = [("sites", rep.two_n), ("even_min", rep.even_min), ("odd_min", rep.odd_min),
                 ("free_fermion", rep.free_fermion), ("difference", rep.difference),
                 ("lowest_sector", rep.lowest_sector.name), ("agree", ok)]
    elif which == "pt":
        rep = chain.pt_check(args.sites, p)
        ok = rep.pt_defect < args.tol
        pairs = [("sites", args.sites), ("pt_defect", rep.pt_defect), ("p_defect", rep.p_defect),
                 ("t_defect", rep.t_defect), ("pt_symmetric", ok)]
    elif which == "block":
        rep = block.block_check(args.k, p)
        ok = rep.eigen_gap < args.tol and max(rep.residuals) < args.tol
        pairs = [("k", args.k), ("eigen_gap", rep.eigen_gap), ("max_residual", max(rep.residuals)),
                 ("biortho_defect", rep.biortho_defect), ("agree", ok)]
    elif which == "biortho":
        m = block.biorthogonality_matrix(args.k, p)
        defect = float(np.abs(m - np.eye(6)).max())
        ok = defect < args.tol
        pairs = [("k", args.k), ("biortho_defect", defect), ("biorthonormal", ok)]
    else:  # overlap47
        defect = block.block_ground_overlap_check(args.k, p, args.h)
        ok = defect < args.tol
        pairs = [("k", args.k), ("h", args.h), ("antisym_defect", defect), ("vanishes", ok)]
    _emit(args, pairs)
    return 0 if ok else 1


def cmd_asymptotics(args):
    if args.where == "circle":
        pred = response.asymptotic_laplacian_circle(args.r, args.phi)
        pairs = [("r", args.r), ("phi", args.phi), ("prediction", pred)]
        if args.compare:
            p = FieldPoint(args.r * math.cos(args.phi), args.r * math.sin(args.phi))
            pairs.append(("laplacian", response.laplacian_eps_g(p)))
    else:
        pred = response.asymptotic_laplacian_axis(args.eta)
        pairs = [("eta", args.eta), ("prediction", pred)]
        if args.compare:
            pairs.append(("laplacian", response.laplacian_eps_g(FieldPoint(args.eta, args.xi))))
    _emit(args, pairs)
    return 0


# ---------------------------------------------------------------------------
# parser


def _field_args(p, required=True):
    p.add_argument("--eta", type=float, required=required, help="real part of the field (units of J)")
    p.add_argument("--xi", type=float, required=required, help="staggered imaginary part of the field")
    p.add_argument("--J", type=float, default=1.0, help="Ising coupling (default 1)")


def _mode_args(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--sites", type=int, help="finite ring with this many sites (2N)")
    g.add_argument("--thermodynamic", action="store_true", help="infinite ring (default)")
    p.add_argument("--quad-points", type=int, default=512, help="quadrature nodes in the thermodynamic limit")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    ap = argparse.ArgumentParser(prog="ptising", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--backend", choices=kernels.available_backends(), help="kernel backend")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dispersion", parents=[common], help="quasiparticle coefficient eps_n^k")
    _field_args(p)
    p.add_argument("--k", type=float, required=True, help="cell momentum")
    p.add_argument("--n", type=int, default=1, choices=range(1, 7), help="branch 1..6")
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("energy", parents=[common], help="ground-state energy")
    _field_args(p)
    _mode_args(p)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("laplacian", parents=[common], help="derivatives and Laplacian of eps_g")
    _field_args(p)
    _mode_args(p)
    p.add_argument("--fd", action="store_true", help="also report the finite-difference Laplacian")
    p.add_argument("--step", type=float, default=None, help="finite-difference step")
    p.set_defaults(func=cmd_laplacian)

    p = sub.add_parser("berry", parents=[common], help="Berry curvature density for a preset map")
    _field_args(p)
    _mode_args(p)
    p.add_argument("--preset", choices=("sum", "diff"), required=True)
    p.set_defaults(func=cmd_berry)

    p = sub.add_parser("phase", parents=[common], help="phase label of a field point")
    _field_args(p)
    p.add_argument("--tol", type=float, default=1e-9, help="width of the boundary collar")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("scan", help="sweep the field plane from a JSON config")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    p.add_argument("--config", required=True, help="JSON scan configuration")
    p.add_argument("--out", required=True, help="output file, or - for stdout")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: config, else all CPUs)")
    p.add_argument("--out-format", choices=scan.FORMATS, default=None, help="override the config format")
    p.add_argument("--quiet", action="store_true", help="no progress on stderr")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("oracle", help="exact-diagonalisation cross-checks")
    osub = p.add_subparsers(dest="oracle", required=True)
    for name, helptext in (("chain", "sector ground energies vs free fermions"),
                           ("pt", "PT commutator defects of the chain"),
                           ("block", "momentum-block eigenrelation"),
                           ("biortho", "biorthogonality of the pair states"),
                           ("overlap47", "antisymmetric ground-state overlap")):
        q = osub.add_parser(name, parents=[common], help=helptext)
        _field_args(q)
        if name in ("chain", "pt"):
            q.add_argument("--sites", type=int, default=8, help="ring size 2N (4..12)")
        else:
            q.add_argument("--k", type=float, default=math.pi / 3, help="cell momentum in (0, pi)")
        if name == "overlap47":
            q.add_argument("--h", type=float, default=1e-4, help="finite-difference step")
        default_tol = {"chain": 1e-8, "pt": 1e-12, "block": 1e-9, "biortho": 1e-10, "overlap47": 1e-6}[name]
        q.add_argument("--tol", type=float, default=default_tol, help="pass threshold")
        q.set_defaults(func=cmd_oracle)

    p = sub.add_parser("asymptotics", help="logarithmic-divergence predictions")
    asub = p.add_subparsers(dest="where", required=True)
    q = asub.add_parser("circle", parents=[common], help="near r = 1")
    q.add_argument("--r", type=float, required=True)
    q.add_argument("--phi", type=float, required=True)
    q.add_argument("--compare", action="store_true", help="also evaluate the thermodynamic Laplacian")
    q.set_defaults(func=cmd_asymptotics)
    q = asub.add_parser("axis", parents=[common], help="near eta = 0 at large |xi|")
    q.add_argument("--eta", type=float, required=True)
    q.add_argument("--xi", type=float, default=5.0, help="field used with --compare")
    q.add_argument("--compare", action="store_true", help="also evaluate the thermodynamic Laplacian")
    q.set_defaults(func=cmd_asymptotics)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.INFO if getattr(args, "verbose", False) else os.environ.get("PTISING_LOG", "WARNING")
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.backend:
        kernels.set_backend(args.backend)
    try:
        return args.func(args)
    except (DomainError, NonConvergenceError) as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"ptising: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

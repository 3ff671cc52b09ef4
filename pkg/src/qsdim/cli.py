"""Command-line front end.

Exit codes: 0 on success, 1 when a verification finds violations, 2 on bad
input (usage errors, malformed files, out-of-range values).
"""

import argparse
import sys

import numpy as np

from . import bounds, hyperbolic, io, motion, spectra, thermo
from .exceptions import DomainError, QSDimError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
    return p


def _grid01(n):
    return np.linspace(0.0, 1.0, n)


# bounds ---------------------------------------------------------------------

def _bounds_dist(a):
    deltas = _grid01(a.grid) if a.grid else [a.delta]
    rows = [(d, a.k, bounds.compress_bound(d, a.k), bounds.expand_bound(d, a.k)) for d in deltas]
    return ("delta", "k", "D", "Dstar"), rows


def _bounds_expand(a):
    deltas = _grid01(a.grid) if a.grid else [a.delta]
    return ("delta", "k", "Dstar"), [(d, a.k, bounds.expand_bound(d, a.k)) for d in deltas]


def _bounds_antisym(a):
    vals = _grid01(a.grid) if a.grid else [a.Delta]
    return ("Delta", "k", "value"), [(d, a.k, bounds.antisym_expand(d, a.k)) for d in vals]


def _bounds_conformal(a):
    deltas = _grid01(a.grid) if a.grid else [a.delta]
    rows = [(d, a.k, bounds.conformal_expand_bound(d, a.k), bounds.conformal_contract_bound(d, a.k))
            for d in deltas]
    return ("delta", "k", "expand", "contract"), rows


def _bounds_makarov(a):
    return ("dimE", "t", "beta", "value"), [(a.dimE, a.t, a.beta, bounds.makarov_dim_lower(a.dimE, a.t, a.beta))]


def _bounds_lp(a):
    return ("K", "p"), [(a.K, bounds.lp_exponent_bound(a.K))]


def _bounds_convert(a):
    if (a.k is None) == (a.K is None):
        raise DomainError("give exactly one of --k or --K")
    if a.k is not None:
        return ("K",), [(bounds.dilatation_convert(a.k, "k_to_K"),)]
    return ("k",), [(bounds.dilatation_convert(a.K, "K_to_k"),)]


def _bounds_qsnorm(a):
    if (a.rho is None) == (a.K is None):
        raise DomainError("give exactly one of --rho or --K")
    if a.rho is not None:
        return ("k_bound",), [(bounds.qs_norm_bounds(a.rho, "rho_to_k"),)]
    return ("rho_bound",), [(bounds.qs_norm_bounds(a.K, "K_to_rho"),)]


def _need(a, *names):
    for n in names:
        if getattr(a, n) is None and not getattr(a, "grid", None):
            raise DomainError(f"--{n} is required (or use --grid)")


def cmd_bounds(a):
    handlers = {
        "dist": (_bounds_dist, ("delta",)),
        "expand": (_bounds_expand, ("delta",)),
        "antisym": (_bounds_antisym, ("Delta",)),
        "conformal": (_bounds_conformal, ("delta",)),
        "makarov": (_bounds_makarov, ()),
        "lp": (_bounds_lp, ()),
        "convert": (_bounds_convert, ()),
        "qsnorm": (_bounds_qsnorm, ()),
    }
    fn, required = handlers[a.sub]
    _need(a, *required)
    header, rows = fn(a)
    return EXIT_OK, io.dumps_table(header, rows, a.fmt)


# verify ---------------------------------------------------------------------

def _config(a):
    return motion.MotionConfig(a.rho, a=a.a, steps=a.steps, qs_samples=a.qs_samples, seed=a.seed)


def cmd_verify(a):
    if a.sub == "blaschke":
        rep = hyperbolic.verify_blaschke_lemma(a.samples, a.seed, a.max_terms, a.tol)
        report = rep.as_dict()
    elif a.sub == "threepoint":
        rep = hyperbolic.verify_three_point(a.samples, a.seed, a.max_terms, a.tol)
        report = rep.as_dict()
    elif a.sub == "phi":
        packing, family = io.load_packing(a.packing)
        cfg = _config(a)
        delta = a.delta
        if delta is None:
            delta = thermo.bowen_dimension(motion.resolve_a(family, cfg) * packing.radii)
        rep = motion.verify_phi_properties(packing, family, delta, cfg)
        report = rep.as_dict()
        report.update(worst_margin=min(rep.margins.values()), samples=rep.points, seed=a.seed)
    else:
        packing, family = io.load_packing(a.packing)
        rep = motion.verify_packing_implication(packing, family, a.k, a.delta, _config(a))
        report = rep.as_dict()
        report.update(worst_margin=rep.conclusion_sum - 1.0, samples=len(packing), seed=a.seed)
    code = EXIT_OK if report["violations"] == 0 else EXIT_FAIL
    return code, io.dumps_json(report)


# spectra --------------------------------------------------------------------

def _points(value, grid, lo, hi):
    if value is not None:
        return np.atleast_1d(np.asarray(value, dtype=float))
    if not grid:
        raise DomainError("give a point value or --grid")
    return np.linspace(lo, hi, grid)


def _beta_map(name, k):
    if name == "identity":
        return lambda z: z
    if name == "rotation":
        return lambda z: np.exp(1j * k) * z
    return spectra.cayley_stretch(k)


def cmd_spectra(a):
    comments = ()
    if a.sub == "f-bound":
        xs = np.atleast_1d(a.alpha) if a.alpha is not None else spectra.f_bound_grid(a.K, a.grid or 101)
        header, rows = ("alpha", "f"), [(x, spectra.f_bound_theorem3(x, a.K)) for x in xs]
    elif a.sub == "beta-bound":
        ts = _points(a.t, a.grid, a.tmin, a.tmax)
        header, rows = ("t", "beta"), [(t, spectra.beta_bound_theorem3(t, a.K)) for t in ts]
    elif a.sub == "quasidisk":
        c = 1.0 + a.k * a.k
        ts = _points(a.t, a.grid, c, a.tmax if a.tmax is not None else 2.0 * c / a.k)
        header, rows = ("t", "beta"), [(t, spectra.quasidisk_beta_bound(t, a.k)) for t in ts]
    elif a.sub == "conjectured":
        ts = _points(a.t, a.grid, -2.0 / a.k, 2.0 / a.k)
        header, rows = ("t", "beta"), [(t, spectra.conjectured_lower(t, a.k)) for t in ts]
        comments = ("conjectural",)
    elif a.sub == "f-est":
        m = io.load_measure(a.measure)
        lo, hi = m.alpha_range
        grid = np.linspace(lo - a.eps, hi + a.eps, a.grid) if a.grid else None
        curve = spectra.box_f_estimate(m, a.r, a.eps, grid)
        header, rows = ("alpha", "f"), list(zip(curve.x, curve.y))
    elif a.sub == "beta-est":
        phi = _beta_map(a.map, a.k)
        ts = np.atleast_1d(a.t)
        header = ("t", "beta", "residual")
        rows = []
        for t in ts:
            fit = spectra.beta_fit(phi, t, a.j0, a.j1, a.nodes)
            rows.append((t, fit.beta, fit.residual))
    elif a.sub == "legendre":
        curve = io.load_curve_csv(a.infile)
        out = spectra.legendre_transform(curve, a.direction)
        header, rows = ("x", "y"), list(zip(out.x, out.y))
    else:
        m = io.load_measure(a.measure)
        qs = _points(a.q, a.grid, a.qmin, a.qmax)
        rows = []
        for q in qs:
            T = spectra.tau_selfsimilar(m, q)
            alpha = spectra.alpha_of_q(m, q, T)
            rows.append((q, T, alpha, q * alpha + T))
        header = ("q", "tau", "alpha", "f")
    return EXIT_OK, io.dumps_table(header, rows, a.fmt, comments)


def cmd_bowen(a):
    packing, _ = io.load_packing(a.packing)
    return EXIT_OK, io.dumps_table(("dimension",), [(thermo.bowen_dimension(packing.radii),)], a.fmt)


# parser ---------------------------------------------------------------------

def build_parser():
    common = _common()
    parser = _Parser(prog="qsdim", description="Dimension distortion bounds and their numerical checks.")
    cmds = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pb = cmds.add_parser("bounds", help="evaluate closed-form bounds")
    bsub = pb.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name in ("dist", "expand", "conformal"):
        q = bsub.add_parser(name, parents=[common])
        q.add_argument("--delta", type=float)
        q.add_argument("--k", type=float, required=True)
        q.add_argument("--grid", type=int)
    q = bsub.add_parser("antisym", parents=[common])
    q.add_argument("--Delta", type=float)
    q.add_argument("--k", type=float, required=True)
    q.add_argument("--grid", type=int)
    q = bsub.add_parser("makarov", parents=[common])
    q.add_argument("--dimE", type=float, required=True)
    q.add_argument("--t", type=float, required=True)
    q.add_argument("--beta", type=float, required=True)
    q = bsub.add_parser("lp", parents=[common])
    q.add_argument("--K", type=float, required=True)
    q = bsub.add_parser("convert", parents=[common])
    q.add_argument("--k", type=float)
    q.add_argument("--K", type=float)
    q = bsub.add_parser("qsnorm", parents=[common])
    q.add_argument("--rho", type=float)
    q.add_argument("--K", type=float)
    pb.set_defaults(func=cmd_bounds)

    pv = cmds.add_parser("verify", help="run verification suites")
    vsub = pv.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name, samples, tol in (("blaschke", 10_000, hyperbolic.INEQ_TOL), ("threepoint", 1000, 1e-10)):
        q = vsub.add_parser(name, parents=[common])
        q.add_argument("--samples", type=int, default=samples)
        q.add_argument("--seed", type=int, default=42)
        q.add_argument("--tol", type=float, default=tol)
        q.add_argument("--max-terms", type=int, default=4, dest="max_terms")
    for name in ("phi", "packing"):
        q = vsub.add_parser(name, parents=[common])
        q.add_argument("--packing", required=True)
        q.add_argument("--delta", type=float, required=name == "packing",
                       help="dimension exponent" + ("" if name == "packing" else
                                                    " (default: Bowen dimension of the rescaled radii)"))
        q.add_argument("--rho", type=float, default=0.9)
        q.add_argument("--a", type=float, help="rescaling constant (default 1/C^2, empirical)")
        q.add_argument("--steps", type=int, default=16)
        q.add_argument("--qs-samples", type=int, default=100_000, dest="qs_samples")
        q.add_argument("--seed", type=int, default=42)
        if name == "packing":
            q.add_argument("--k", type=float, required=True)
    pv.set_defaults(func=cmd_verify)

    ps = cmds.add_parser("spectra", help="spectrum curves and estimators")
    ssub = ps.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    q = ssub.add_parser("f-bound", parents=[common])
    q.add_argument("--K", type=float, required=True)
    q.add_argument("--alpha", type=float)
    q.add_argument("--grid", type=int)
    q = ssub.add_parser("beta-bound", parents=[common])
    q.add_argument("--K", type=float, required=True)
    q.add_argument("--t", type=float)
    q.add_argument("--grid", type=int)
    q.add_argument("--tmin", type=float, default=-4.0)
    q.add_argument("--tmax", type=float, default=8.0)
    q = ssub.add_parser("quasidisk", parents=[common])
    q.add_argument("--k", type=float, required=True)
    q.add_argument("--t", type=float)
    q.add_argument("--grid", type=int)
    q.add_argument("--tmax", type=float)
    q = ssub.add_parser("conjectured", parents=[common])
    q.add_argument("--k", type=float, required=True)
    q.add_argument("--t", type=float)
    q.add_argument("--grid", type=int)
    q = ssub.add_parser("f-est", parents=[common])
    q.add_argument("--measure", required=True)
    q.add_argument("--r", type=float, default=2.0**-20)
    q.add_argument("--eps", type=float, default=0.05)
    q.add_argument("--grid", type=int)
    q = ssub.add_parser("beta-est", parents=[common])
    q.add_argument("--map", choices=("identity", "rotation", "stretch"), default="stretch")
    q.add_argument("--k", type=float, default=1.0 / 3.0, help="stretch dilatation or rotation angle")
    q.add_argument("--t", type=float, nargs="+", required=True)
    q.add_argument("--j0", type=int, default=6)
    q.add_argument("--j1", type=int, default=14)
    q.add_argument("--nodes", type=int, default=2**12)
    q = ssub.add_parser("legendre", parents=[common])
    q.add_argument("--in", required=True, dest="infile")
    q.add_argument("--direction", choices=("f_to_beta", "beta_to_f"), default="f_to_beta")
    q = ssub.add_parser("tau", parents=[common])
    q.add_argument("--measure", required=True)
    q.add_argument("--q", type=float)
    q.add_argument("--grid", type=int)
    q.add_argument("--qmin", type=float, default=-5.0)
    q.add_argument("--qmax", type=float, default=5.0)
    ps.set_defaults(func=cmd_spectra)

    pw = cmds.add_parser("bowen", parents=[common], help="Bowen dimension of a packing")
    pw.add_argument("--packing", required=True)
    pw.set_defaults(func=cmd_bowen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = args.func(args)
    except (QSDimError, ValueError) as exc:
        print(f"qsdim: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"qsdim: error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

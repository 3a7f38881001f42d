"""Command-line interface: ``sympwig <command> [options]``.

Inputs are JSON documents (see :mod:`sympwig.io`); results go to standard
output as sorted-key JSON.  Exit codes: 0 success, 2 invalid input (with an
``{"error", "detail"}`` object on stdout), 3 a search ran out of budget,
1 anything else.
"""

import argparse
import csv
import io as _stringio
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import gauss_states, io, matcore, sympl
from .errors import SearchExhausted, ValidationError
from .gauss_states import GaussianState, NWPoint, Region
from .polygauss import convolve, grid_min, klm_check
from .polygauss.grid import default_box, grid_values
from .polygauss.landscape import generate_nongaussian_region, validate_certificate

EXIT_OK, EXIT_INTERNAL, EXIT_VALIDATION, EXIT_SEARCH = 0, 1, 2, 3
GAUSSIAN_REGIONS = ("A3", "A5", "A6", "A7")


def _threads():
    raw = os.environ.get("SYMPWIG_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return min(4, os.cpu_count() or 1)


def _batch(func, items):
    """``func`` over ``items`` in order, on at most SYMPWIG_THREADS threads.

    A single input gives a single result rather than a one-element list.
    """
    if len(items) == 1:
        return func(items[0])
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(func, items))


def _load_cov(path):
    return io.parse_matrix(io.load_json(path), "covariance")


def _load_form(path):
    return io.parse_form(io.load_json(path))


def _load_function(path):
    return io.parse_function(io.load_json(path))


def _form_summary(form):
    return {"matrix": form.omega, "scale": form.scale}


# -- commands ---------------------------------------------------------------


def cmd_spectrum(args):
    form = _load_form(args.form)

    def run(path):
        spec = sympl.symplectic_spectrum(_load_cov(path), form)
        return {
            "spectrum": spec.values,
            "lambda1": spec.lambda1,
            "wigner": bool(spec.lambda1 >= 0.5 - args.tol),
        }

    return _batch(run, args.cov)


def cmd_williamson(args):
    cov, form = _load_cov(args.cov), _load_form(args.form)
    w = sympl.williamson(cov, form)
    s_inv = np.linalg.inv(w.s.s)
    return {
        "s": w.s.s,
        "d": w.d,
        "diagonal_residual": float(np.linalg.norm(s_inv @ cov @ s_inv.T - w.diagonal)),
        "form_residual": w.s.residual(),
    }


def cmd_darboux(args):
    form = _load_form(args.form)
    s = sympl.darboux_factor(form)
    return {"s": s.s, "residual": s.residual(), "form": _form_summary(form)}


def cmd_verify(args):
    form = _load_form(args.form)

    def run(path):
        cov = _load_cov(path)
        herm = gauss_states.uncertainty_matrix(cov, form.omega, args.alpha)
        verdict, min_eig = matcore.is_psd_hermitian(herm, args.tol)
        lam1 = sympl.symplectic_spectrum(cov, form).lambda1
        return {
            "psd": verdict,
            "min_eigenvalue": min_eig,
            "lambda1": lam1,
            "spectral_verdict": bool(lam1 >= 0.5 * abs(args.alpha) - args.tol),
        }

    return _batch(run, args.cov)


def cmd_nw(args):
    if args.combine:
        a1, path1, a2, path2 = args.combine
        points = [
            NWPoint(float(alpha), io.parse_matrix(io.load_json(path), "form"))
            for alpha, path in ((a1, path1), (a2, path2))
        ]
        out = gauss_states.nw_combine(*points)
        return {"alpha": out.alpha, "sigma_matrix": out.sigma_matrix}
    if not (args.cov and args.form):
        raise ValidationError("nw needs --cov and --form, or --combine")
    state = GaussianState.centered(_load_cov(args.cov), _load_form(args.form))
    interval = gauss_states.nw_interval(state)
    return {"lo": interval.lo, "hi": interval.hi, "lambda1": interval.hi / 2}


def _classify_function(doc, f1, f2, tol):
    """Re-derive a generated non-Gaussian function and re-check its certificate."""
    meta = doc.get("certificate")
    if not meta:
        raise ValidationError("only generated non-Gaussian documents can be classified")
    f = io.parse_function(doc)
    g, cert = generate_nongaussian_region(meta["region"], f1, f2, seed=meta["seed"])
    z = cert.negative_point
    same = abs(float(f(z)) - float(g(z))) <= 1e-9 * max(1.0, abs(float(g(z))))
    checks = validate_certificate(g, cert, f1, f2, tol=tol)
    return {
        "region": meta["region"] if same and all(checks.values()) else None,
        "matches_regeneration": bool(same),
        "checks": checks,
    }


def cmd_classify(args):
    f1, f2 = _load_form(args.form1), _load_form(args.form2)
    gauss_states.require_distinct(f1, f2)

    def run(path):
        doc = io.load_json(path)
        if isinstance(doc, dict) and doc.get("kind") == "polygauss":
            return _classify_function(doc, f1, f2, args.tol)
        c = gauss_states.classify_report(io.parse_matrix(doc, "covariance"), f1, f2, args.tol)
        return {
            "region": c.region.value,
            "lambda1_form1": c.lambda1_form1,
            "lambda1_form2": c.lambda1_form2,
            "interval_form1": c.interval_form1,
            "interval_form2": c.interval_form2,
        }

    return _batch(run, args.cov)


def cmd_ppt(args):
    cov = _load_cov(args.cov)
    state = GaussianState.centered(cov, sympl.Form.standard(cov.shape[0] // 2))
    verdict, lam1 = gauss_states.ppt_check(state, args.split, args.tol)
    return {"separable_necessary": verdict, "lambda1_ppt": lam1}


def cmd_transform(args):
    doc = io.load_json(args.state)
    if doc.get("kind") == "state":
        state = io.parse_state(doc)
    else:
        cov = io.parse_matrix(doc, "covariance")
        state = GaussianState.centered(cov, sympl.Form.standard(cov.shape[0] // 2))
    m = io.parse_matrix(io.load_json(args.map), "map")
    image, report = gauss_states.transform(state, m, args.tol)
    return {
        "state": io.state_document(image),
        "report": {
            "induced_form": report.induced_form.omega,
            "alpha": report.alpha,
            "m_symplectic": report.m_symplectic,
            "m_antisymplectic": report.m_antisymplectic,
            "still_wigner_on_form1": report.still_wigner_on_form1,
            "wigner_on_form2": report.wigner_on_form2,
            "lambda1_form1": report.lambda1_form1,
            "lambda1_form2": report.lambda1_form2,
            "lambda1_image": report.lambda1_image,
        },
    }


def _certificate_document(cert, seed):
    out = {
        "region": cert.region.value,
        "seed": seed,
        "negative_point": cert.negative_point,
        "negative_value": cert.negative_value,
        "weights": list(cert.weights),
    }
    if cert.witness_overlap is not None:
        out["witness_overlap"] = cert.witness_overlap
    for key in ("alpha0", "gamma0", "lambda1_eta1", "lambda1_eta2", "fock_index"):
        if key in cert.details:
            out[key] = cert.details[key]
    return out


def cmd_generate(args):
    f1, f2 = _load_form(args.form1), _load_form(args.form2)
    gauss_states.require_distinct(f1, f2)
    if args.region in GAUSSIAN_REGIONS:
        state = gauss_states.generate_gaussian_region(args.region, f1, f2, seed=args.seed)
        return io.state_document(state)
    f, cert = generate_nongaussian_region(args.region, f1, f2, seed=args.seed)
    doc = io.polygauss_document(f)
    doc["certificate"] = _certificate_document(cert, args.seed)
    return doc


def cmd_klm(args):
    f = _load_function(args.function)
    sigma = io.parse_matrix(io.load_json(args.sigma), "form")
    points = args.points
    if args.points_file:
        points = io.real_array(io.load_json(args.points_file), "points")
    report = klm_check(f, args.alpha, sigma, points=points, seed=args.seed, tol=args.tol)
    return {
        "alpha": report.alpha,
        "points": len(report.points),
        "min_eig": report.min_eig,
        "threshold": report.threshold,
        "verdict": report.verdict,
    }


def cmd_convolve(args):
    f, g = _load_function(args.f), _load_function(args.g)
    return io.polygauss_document(convolve(f, g))


def grid_csv(f, axes):
    """CSV text of ``f`` on ``axes``: header ``axis1,...,value``, one sample per line."""
    pts, values = grid_values(f, axes)
    buf = _stringio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"axis{i + 1}" for i in range(f.dim)] + ["value"])
    for p, v in zip(pts, values):
        writer.writerow([io.format_float(float(x)) for x in p] + [io.format_float(float(v))])
    return buf.getvalue()


def cmd_grid(args):
    paths = args.function
    if len(paths) > 1 and not os.path.isdir(args.out):
        raise ValidationError("with several functions --out must be an existing directory")

    def run(path):
        f = _load_function(path)
        axes = default_box(f, args.box_sigmas, args.per_axis)
        if os.path.isdir(args.out):
            stem = os.path.splitext(os.path.basename(path))[0]
            target = os.path.join(args.out, stem + ".csv")
        else:
            target = args.out
        io.write_atomic(target, grid_csv(f, axes))
        value, point = grid_min(f, args.box_sigmas, args.per_axis)
        return {
            "csv": target,
            "axes": [{"min": lo, "max": hi, "count": axes.count} for lo, hi in zip(axes.lows, axes.highs)],
            "min": value,
            "argmin": point,
        }

    return _batch(run, paths)


# -- parser -----------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="sympwig", description=__doc__.splitlines()[0])
    parser.add_argument("--tol", type=float, default=matcore.DEFAULT_TOL, help="verdict tolerance")
    parser.add_argument("--seed", type=int, default=0, help="seed for searches and samplers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="symplectic spectrum of covariances on a form")
    p.add_argument("--cov", nargs="+", required=True)
    p.add_argument("--form", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("williamson", help="Williamson factorization on a form")
    p.add_argument("--cov", required=True)
    p.add_argument("--form", required=True)
    p.set_defaults(func=cmd_williamson)

    p = sub.add_parser("darboux", help="Darboux matrix S with S J S^T = form")
    p.add_argument("--form", required=True)
    p.set_defaults(func=cmd_darboux)

    p = sub.add_parser("verify", help="Hermitian uncertainty test of cov + (i alpha/2) form")
    p.add_argument("--cov", nargs="+", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("nw", help="NW interval of a Gaussian, or combine two NW points")
    p.add_argument("--cov")
    p.add_argument("--form")
    p.add_argument("--combine", nargs=4, metavar=("ALPHA1", "SIGMA1", "ALPHA2", "SIGMA2"))
    p.set_defaults(func=cmd_nw)

    p = sub.add_parser("classify", help="landscape region of covariances or generated functions")
    p.add_argument("--cov", nargs="+", required=True, help="covariance, state or generated polygauss documents")
    p.add_argument("--form1", required=True)
    p.add_argument("--form2", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("ppt", help="partial-transpose test on the standard form")
    p.add_argument("--cov", required=True)
    p.add_argument("--split", type=int, required=True, help="number of modes in the first party")
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("transform", help="apply W -> |det M| W(Mz) to a Gaussian")
    p.add_argument("--state", required=True, help="state or covariance document")
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("generate", help="a member of a landscape region")
    p.add_argument("--region", required=True, choices=[r.value for r in Region])
    p.add_argument("--form1", required=True)
    p.add_argument("--form2", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("klm", help="sampled twisted-positivity check")
    p.add_argument("--function", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--sigma", required=True, help="form document holding Sigma")
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--points-file", help="JSON array of explicit points")
    p.set_defaults(func=cmd_klm)

    p = sub.add_parser("convolve", help="convolution of two functions")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("grid", help="CSV samples of functions on a box, plus the grid minimum")
    p.add_argument("--function", nargs="+", required=True)
    p.add_argument("--out", required=True, help="CSV path, or a directory for several functions")
    p.add_argument("--per-axis", type=int, default=24)
    p.add_argument("--box-sigmas", type=float, default=4.0)
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except SearchExhausted as exc:
        print(io.dumps({"error": type(exc).__name__, "detail": str(exc), "diagnostics": _plain(exc.diagnostics)}))
        return EXIT_SEARCH
    except (ValueError, KeyError, TypeError) as exc:
        # ValidationError is a ValueError; the others come from malformed documents
        print(io.dumps({"error": type(exc).__name__, "detail": str(exc)}))
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001 - reported as an internal failure
        print(io.dumps({"error": type(exc).__name__, "detail": str(exc)}), file=sys.stderr)
        return EXIT_INTERNAL
    print(io.dumps(result))
    return EXIT_OK


def _plain(obj):
    """Diagnostics reduced to JSON-serializable values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.ndarray, np.generic)):
        return obj.tolist()
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return repr(obj)


if __name__ == "__main__":
    sys.exit(main())

"""JSON documents for matrices, Gaussian states and PolyGauss functions.

Every document records the coordinate ordering ``x1..xn,p1..pn``.  Output
is byte-stable: keys are sorted and floats are written with 17 significant
digits, which round-trips every double exactly.
"""

import json
import math
import os
import tempfile
import warnings

import numpy as np

from . import matcore, sympl
from .errors import DimensionMismatch, NontrivialFormAtN1, ValidationError
from .gauss_states import GaussianState
from .polygauss.core import PolyGauss, Term, gaussian_pg
from .polygauss.fock import fock_product
from .polygauss.poly import Poly

ORDERING = "x1..xn,p1..pn"
MATRIX_KINDS = ("covariance", "form", "map")


class DocumentError(ValidationError):
    """A JSON document is missing fields or has the wrong layout."""


# -- serialization ----------------------------------------------------------


def format_float(x):
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x!r}")
    text = format(x, ".17g")
    # keep floats recognisable as floats after a round trip
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _encode(obj, out):
    if isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(", ")
            out.append(json.dumps(str(key)))
            out.append(": ")
            _encode(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _encode(item, out)
        out.append("]")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif obj is None:
        out.append("null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    """Serialize to JSON with sorted keys and 17-significant-digit floats."""
    out = []
    _encode(obj, out)
    return "".join(out)


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from exc


def _field(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(f"document lacks field {key!r}")
    return doc[key]


def real_array(value, name):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{name} is not an array of numbers") from exc
    if not np.all(np.isfinite(arr)):
        raise matcore.NonFinite(f"{name} has non-finite entries")
    return arr


def _check_ordering(doc):
    ordering = doc.get("ordering", ORDERING)
    if ordering != ORDERING:
        raise DocumentError(f"unsupported ordering {ordering!r}; expected {ORDERING!r}")


# -- matrices ---------------------------------------------------------------


def matrix_document(m, kind):
    m = np.asarray(m, dtype=float)
    if kind not in MATRIX_KINDS:
        raise ValueError(f"unknown matrix kind {kind!r}")
    return {"kind": kind, "n": m.shape[0] // 2, "ordering": ORDERING, "matrix": m.tolist()}


def parse_matrix(doc, kind):
    """Validated matrix of the given kind from a MatrixDocument.

    A state document is accepted where a covariance is expected.
    """
    if kind == "covariance" and isinstance(doc, dict) and doc.get("kind") == "state":
        return parse_state(doc).cov
    _check_ordering(doc)
    got = _field(doc, "kind")
    if got != kind:
        raise DocumentError(f"expected a {kind} document, got {got!r}")
    n = _field(doc, "n")
    if not isinstance(n, int) or n < 1:
        raise DocumentError("n must be a positive integer")
    m = real_array(_field(doc, "matrix"), "matrix")
    if m.shape != (2 * n, 2 * n):
        raise DimensionMismatch(f"matrix has shape {m.shape}, expected {(2 * n, 2 * n)}")
    if kind == "covariance":
        return matcore.check_spd(m, "covariance")
    if kind == "form":
        return matcore.check_skew(m, name="form")
    if abs(np.linalg.det(m)) <= 1e-12:
        raise matcore.Singular("map is singular")
    return m


def parse_form(doc):
    """A normalized :class:`sympl.Form` from a form document.

    The one-mode rescaling warning is suppressed here; the rescale factor is
    reported as ``scale`` wherever a form is echoed.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NontrivialFormAtN1)
        return sympl.make_form(parse_matrix(doc, "form"))


# -- states -----------------------------------------------------------------


def state_document(state):
    return {
        "kind": "state",
        "n": state.n,
        "ordering": ORDERING,
        "mean": state.mean.tolist(),
        "cov": state.cov.tolist(),
        "form": state.form.omega.tolist(),
    }


def parse_state(doc):
    _check_ordering(doc)
    if _field(doc, "kind") != "state":
        raise DocumentError("expected a state document")
    cov = real_array(_field(doc, "cov"), "cov")
    n = cov.shape[0] // 2
    mean = real_array(doc.get("mean", np.zeros(2 * n)), "mean")
    form_raw = doc.get("form")
    if form_raw is None:
        form = sympl.Form.standard(n)
    else:
        form = parse_form({"kind": "form", "n": n, "matrix": form_raw})
    return GaussianState(mean, cov, form)


# -- PolyGauss --------------------------------------------------------------


def _poly_document(poly):
    monomials = []
    for exps, c in sorted(poly.terms.items()):
        c = complex(c)
        if c.imag != 0:
            raise ValueError("only real polynomials can be serialized")
        monomials.append({"exponents": list(exps), "coeff": c.real})
    return monomials


def polygauss_document(f):
    return {
        "kind": "polygauss",
        "n": f.n,
        "ordering": ORDERING,
        "form": None if f.form is None else f.form.omega.tolist(),
        "terms": [
            {
                "coeff": t.coeff,
                "center": t.center.tolist(),
                "shape": t.shape.tolist(),
                "poly": _poly_document(t.poly),
            }
            for t in f.terms
        ],
    }


def _parse_poly(monomials, nvars):
    terms = {}
    for mono in monomials:
        exps = tuple(_field(mono, "exponents"))
        if len(exps) != nvars or any(not isinstance(e, int) or e < 0 for e in exps):
            raise DocumentError("bad monomial exponents")
        terms[exps] = terms.get(exps, 0.0) + float(_field(mono, "coeff"))
    return Poly(nvars, terms)


def parse_function(doc):
    """A :class:`PolyGauss` from a polygauss, fock or state document.

    Fock documents look like ``{"kind": "fock", "indices": [1, 0],
    "planck_alpha": 1.0}``; state documents become their Gaussian density.
    """
    kind = _field(doc, "kind")
    if kind == "fock":
        indices = _field(doc, "indices")
        if not indices or any(not isinstance(m, int) for m in indices):
            raise DocumentError("indices must be a non-empty list of integers")
        return fock_product(tuple(indices), float(doc.get("planck_alpha", 1.0)))
    if kind == "state":
        return gaussian_pg(parse_state(doc))
    if kind != "polygauss":
        raise DocumentError(f"expected a polygauss, fock or state document, got {kind!r}")
    _check_ordering(doc)
    n = _field(doc, "n")
    if not isinstance(n, int) or n < 1:
        raise DocumentError("n must be a positive integer")
    terms = []
    for t in _field(doc, "terms"):
        terms.append(
            Term(
                float(_field(t, "coeff")),
                real_array(_field(t, "center"), "center"),
                real_array(_field(t, "shape"), "shape"),
                _parse_poly(_field(t, "poly"), 2 * n),
            )
        )
    form = doc.get("form")
    if form is not None:
        form = parse_form({"kind": "form", "n": n, "matrix": form})
    return PolyGauss(n, tuple(terms), form)

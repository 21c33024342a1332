"""JSON schemas shared by the command-line layer.

Scalars travel as strings in the exact formats the fields parse; every
composite payload mirrors the .to_json() of the object it describes.
Schema violations carry JSON-pointer paths.
"""

from __future__ import annotations

import json
from typing import Optional

from .algebra import (
    Involution, PiFunctional, Quat, QuaternionAlgebra,
    involution_canonical, involution_int, quat_create, sym_spaces,
)
from .dform import QuadraticDSpace
from .dlinalg import DMatrix, DVector, RightDSpace
from .hermitian import HermitianSpace
from .scalars import Field, ParseError, field_from_json
from .springerlab import ExtensionExperiment


class SchemaError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _get(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError(path or "/", "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}/{key}", "missing")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"{path}/{key}",
                          f"expected {kind.__name__}, got {type(v).__name__}")
    return v


def _scalar(F: Field, s, path):
    if not isinstance(s, str):
        raise SchemaError(path, "scalars are strings")
    try:
        return F.parse(s)
    except (ParseError, ValueError) as e:
        raise SchemaError(path, f"bad scalar {s!r}: {e}")


def _quat(A: QuaternionAlgebra, coords, path) -> Quat:
    if not isinstance(coords, list) or len(coords) != 4:
        raise SchemaError(path, "a quaternion is a list of 4 scalar strings")
    return A.element([_scalar(A.F, c, f"{path}/{i}")
                      for i, c in enumerate(coords)])


def algebra_from_json(obj, path="/algebra") -> QuaternionAlgebra:
    try:
        F = field_from_json(_get(obj, "field", path, dict))
    except ParseError as e:
        raise SchemaError(f"{path}/field", str(e))
    a = _scalar(F, _get(obj, "a", path), f"{path}/a")
    b = _scalar(F, _get(obj, "b", path), f"{path}/b")
    return quat_create(F, a, b)


def involution_from_json(A: QuaternionAlgebra, obj,
                         path="/involution") -> Involution:
    kind = _get(obj, "kind", path, str)
    if kind == "canonical":
        return involution_canonical(A)
    if kind == "int_s":
        return involution_int(A, _quat(A, _get(obj, "s", path), f"{path}/s"))
    raise SchemaError(f"{path}/kind", f"unknown involution kind {kind!r}")


def context_from_json(obj, path=""):
    """Algebra-with-involution context: algebra, involution, lambda, pi."""
    A = algebra_from_json(_get(obj, "algebra", path, dict), f"{path}/algebra")
    sigma = involution_from_json(
        A, _get(obj, "involution", path, dict), f"{path}/involution")
    lam = _get(obj, "lambda", path, int)
    if lam not in (1, -1):
        raise SchemaError(f"{path}/lambda", "must be 1 or -1")
    spaces = sym_spaces(A, sigma, lam)
    coeffs = _get(obj, "pi", path, list)
    if len(coeffs) != len(spaces.sym_basis):
        raise SchemaError(
            f"{path}/pi",
            f"need {len(spaces.sym_basis)} coefficients, got {len(coeffs)}")
    pi = PiFunctional(spaces, [_scalar(A.F, c, f"{path}/pi/{i}")
                               for i, c in enumerate(coeffs)])
    return A, sigma, lam, pi


def dform_from_json(obj, path="") -> QuadraticDSpace:
    if isinstance(obj, dict) and "dform" in obj:
        obj, path = obj["dform"], f"{path}/dform"
    sp = _get(obj, "space", path, dict)
    A = algebra_from_json(_get(sp, "algebra", f"{path}/space", dict),
                          f"{path}/space/algebra")
    n = _get(sp, "dim", f"{path}/space", int)
    if n < 0:
        raise SchemaError(f"{path}/space/dim", "negative dimension")
    rows = _get(obj, "gram_upper", path, list)
    if len(rows) != 4 * n:
        raise SchemaError(f"{path}/gram_upper",
                          f"need {4 * n} rows, got {len(rows)}")
    gram = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 4 * n:
            raise SchemaError(f"{path}/gram_upper/{r}",
                              f"need {4 * n} entries")
        gram.append([_scalar(A.F, x, f"{path}/gram_upper/{r}/{c}")
                     for c, x in enumerate(row)])
    return QuadraticDSpace(RightDSpace(A, n), gram)


def hermitian_from_json(obj, path="") -> HermitianSpace:
    h = _get(obj, "hermitian", path, dict)
    path = f"{path}/hermitian"
    A = algebra_from_json(_get(h, "algebra", path, dict), f"{path}/algebra")
    sigma = involution_from_json(A, _get(h, "sigma", path, dict),
                                 f"{path}/sigma")
    lam = _get(h, "lambda", path, int)
    if lam not in (1, -1):
        raise SchemaError(f"{path}/lambda", "must be 1 or -1")
    rows = _get(h, "gram", path, list)
    gram = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(rows):
            raise SchemaError(f"{path}/gram/{r}", "gram must be square")
        gram.append([_quat(A, x, f"{path}/gram/{r}/{c}")
                     for c, x in enumerate(row)])
    return HermitianSpace(sigma, lam, gram)


def pi_for(h: HermitianSpace, coeffs, path="/pi") -> PiFunctional:
    spaces = sym_spaces(h.A, h.sigma, h.lam)
    if not isinstance(coeffs, list) or len(coeffs) != len(spaces.sym_basis):
        raise SchemaError(path, f"need {len(spaces.sym_basis)} coefficients")
    return PiFunctional(spaces, [_scalar(h.A.F, c, f"{path}/{i}")
                                 for i, c in enumerate(coeffs)])


def vector_from_json(space: RightDSpace, data, path="") -> DVector:
    if not isinstance(data, list) or len(data) != space.n:
        raise SchemaError(path, f"need {space.n} quaternion entries")
    return space.vector([_quat(space.D, e, f"{path}/{i}")
                         for i, e in enumerate(data)])


def dmatrix_to_json(f: DMatrix) -> list:
    return [[[str(c) for c in x.coords] for x in row] for row in f.rows]


def dmatrix_from_json(D: QuaternionAlgebra, data, path="") -> DMatrix:
    if not isinstance(data, list):
        raise SchemaError(path, "expected a matrix")
    rows = [[_quat(D, x, f"{path}/{r}/{c}") for c, x in enumerate(row)]
            for r, row in enumerate(data)]
    return DMatrix(D, rows)


def experiment_from_json(obj, path="") -> ExtensionExperiment:
    e = _get(obj, "experiment", path, dict)
    path = f"{path}/experiment"
    subj = _get(e, "subject", path, dict)
    pi: Optional[PiFunctional] = None
    if "hermitian" in subj:
        subject = hermitian_from_json(subj, f"{path}/subject")
        pi = pi_for(subject, _get(e, "pi", path, list), f"{path}/pi")
    else:
        subject = dform_from_json(subj, f"{path}/subject")
    F = subject.A.F if isinstance(subject, HermitianSpace) else subject.space.F
    exts = []
    for i, coeffs in enumerate(_get(e, "extensions", path, list)):
        if not isinstance(coeffs, list):
            raise SchemaError(f"{path}/extensions/{i}", "expected a list")
        exts.append([_scalar(F, c, f"{path}/extensions/{i}/{j}")
                     for j, c in enumerate(coeffs)])
    kwargs = {}
    if "budgets" in e:
        kwargs["budgets"] = _get(e, "budgets", path, list)
    if "base_budget" in e:
        kwargs["base_budget"] = _get(e, "base_budget", path, int)
    if "assume_anisotropic" in e:
        kwargs["assume_anisotropic"] = _get(e, "assume_anisotropic", path,
                                            bool)
    return ExtensionExperiment(subject, exts, pi=pi, **kwargs)


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"

"""Batch command line over the library.

Each run reads JSON payloads, does one analysis, prints a one-line
summary, and emits a canonical JSON report (sorted keys, two-space
indent) either to stdout or to --out.  Exit codes: 0 definitive answer,
2 tri-state Unknown (budget exhausted), 1 input or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import serialize, witt
from .algebra import AlgebraError, quat_create
from .dform import (
    DFormError, certify_dform, d_diagonalize, orth_sum, perp, scale,
    rems_counterexample,
)
from .dlinalg import span_D
from .hermitian import (
    HermitianError, NotAdmitting, herm_eval, isometry_test, isotropy_search,
    pi_invariant, realize,
)
from .scalars import FieldError
from .serialize import SchemaError, dumps_canonical
from .springerlab import SpringerLabError, run_experiment
from .witt import witt_decompose

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNKNOWN = 2


class CliError(Exception):
    pass


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise CliError(f"{path} is not JSON: {e}")


def _emit(args, report: dict, summary: str) -> None:
    text = dumps_canonical(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)


def _report(args, command: str, inputs: dict, result: dict) -> dict:
    rep = {"command": command, "seed": args.seed, "budget": args.budget}
    rep.update(inputs)
    rep["result"] = result
    return rep


def _unwrap_dform(obj):
    # accept either a raw blob or a report that embeds one
    if isinstance(obj, dict) and "result" in obj and "command" in obj:
        obj = obj["result"]
    return obj


def _pi_payload(obj):
    if isinstance(obj, list):
        return obj
    if isinstance(obj, dict) and "pi" in obj:
        return obj["pi"]
    raise SchemaError("/pi", "expected a coefficient list or a context "
                      "object with a 'pi' member")


# ------------------------------------------------------------- commands

def cmd_check_dform(args) -> int:
    blob = _unwrap_dform(_load(args.input))
    q = serialize.dform_from_json(blob)
    cert = certify_dform(q, budget=args.budget)
    result = {"certificate": cert.to_json(), "dim": q.space.n}
    rep = _report(args, "check-dform", {"input": q.to_json()}, result)
    note = cert.reason if cert.status == "certified" else (
        "exact witness" if cert.status == "refuted"
        else f"{cert.samples} samples")
    _emit(args, rep, f"check-dform: {cert.status} ({note})")
    return EXIT_OK if cert.status in ("certified", "refuted") else EXIT_UNKNOWN


def cmd_diagonalize(args) -> int:
    q = serialize.dform_from_json(_unwrap_dform(_load(args.input)))
    diag = d_diagonalize(q, budget=args.budget)
    result = {
        "radical_basis": [v.to_json() for v in diag.rad_basis],
        "block_basis": [v.to_json() for v in diag.block_basis],
        "block_values": [str(q.evaluate(v)) for v in diag.block_basis],
    }
    rep = _report(args, "diagonalize", {"input": q.to_json()}, result)
    _emit(args, rep, f"diagonalize: {len(diag.rad_basis)} radical + "
          f"{len(diag.block_basis)} block vectors")
    return EXIT_OK


def cmd_witt(args) -> int:
    q = serialize.dform_from_json(_unwrap_dform(_load(args.input)))
    report = witt_decompose(q, budget=args.budget)
    rep = _report(args, "witt", {"input": q.to_json()}, report.to_json())
    status = report.kernel_status.status
    _emit(args, rep, f"witt: {len(report.planes)} plane(s), kernel dim "
          f"{report.anisotropic_kernel.space.n} ({status})")
    return EXIT_OK if status == "anisotropic" else EXIT_UNKNOWN


def cmd_herm_invariant(args) -> int:
    h = serialize.hermitian_from_json(_load(args.input))
    pi = serialize.pi_for(h, _pi_payload(_load(args.pi)))
    q = pi_invariant(h, pi)
    result = {"dform": q.to_json(), "certificate": q.certificate.to_json(),
              "pi": pi.to_json()}
    rep = _report(args, "herm-invariant", {"input": h.to_json()}, result)
    _emit(args, rep, f"herm-invariant: dim_F {4 * h.n} form "
          f"({q.certificate.reason})")
    return EXIT_OK


def cmd_herm_isometry(args) -> int:
    h = serialize.hermitian_from_json(_load(args.input))
    h2 = serialize.hermitian_from_json(_load(args.input2))
    pi = serialize.pi_for(h, _pi_payload(_load(args.pi)))
    out = isometry_test(h, h2, pi, budget=args.budget)
    result: dict = {"status": out.status}
    if out.status == "isometric":
        result["f"] = serialize.dmatrix_to_json(out.f)
    elif out.status == "not_isometric":
        result["reason"] = out.reason
    rep = _report(args, "herm-isometry",
                  {"input": h.to_json(), "input2": h2.to_json(),
                   "pi": pi.to_json()}, result)
    _emit(args, rep, f"herm-isometry: {out.status}"
          + (f" ({out.reason})" if out.reason else ""))
    return EXIT_OK if out.status != "unknown" else EXIT_UNKNOWN


def cmd_herm_isotropy(args) -> int:
    h = serialize.hermitian_from_json(_load(args.input))
    out = isotropy_search(h, budget=args.budget)
    result: dict = {"status": out.status, "samples": out.samples}
    if out.status == "found":
        result["v"] = out.v.to_json()
    elif out.status == "anisotropic":
        result["certificate"] = out.detail
    rep = _report(args, "herm-isotropy", {"input": h.to_json()}, result)
    _emit(args, rep, f"herm-isotropy: {out.status}"
          + (f" ({out.detail})" if out.detail else ""))
    return EXIT_OK if out.status != "unknown" else EXIT_UNKNOWN


def cmd_realize(args) -> int:
    q = serialize.dform_from_json(_unwrap_dform(_load(args.input)))
    A, sigma, lam, pi = serialize.context_from_json(_load(args.pi))
    if A != q.space.D:
        raise CliError("pi context algebra differs from the form's algebra")
    try:
        h = realize(q, pi)
        result = {"status": "realized", "hermitian": h.to_json()["hermitian"]}
        summary = f"realize: hermitian gram over {h.A!r}"
    except NotAdmitting as e:
        result = {"status": "not-admitting", "detail": str(e)}
        summary = "realize: form does not admit the algebra"
    rep = _report(args, "realize",
                  {"input": q.to_json(), "pi": pi.to_json(),
                   "lambda": lam, "sigma": sigma.to_json()}, result)
    _emit(args, rep, summary)
    return EXIT_OK


def cmd_rems_demo(args) -> int:
    if args.input:
        D = serialize.algebra_from_json(_load(args.input), "/")
    else:
        from .scalars import QQ
        D = quat_create(QQ, QQ.scalar(-1), QQ.scalar(-1))
    q, q2, witness = rems_counterexample(D)
    s = orth_sum(q, scale(-1, q2))
    s.certificate = witness
    result = {
        "dform": s.to_json(),
        "summands": [q.to_json(), q2.to_json()],
        "witness": witness.to_json(),
    }
    rep = _report(args, "rems-demo", {}, result)
    _emit(args, rep, "rems-demo: orthogonal sum of two certified forms "
          "refuted with an exact witness")
    return EXIT_OK


def cmd_springer(args) -> int:
    blob = _load(args.input)
    exp = serialize.experiment_from_json(blob)
    report = run_experiment(exp)
    result = report.to_json(include_timings=args.timings)
    rep = _report(args, "springer", {"input": blob}, result)
    found = len(report.counterexample_candidates)
    _emit(args, rep, f"springer: {found} counterexample candidate(s) over "
          f"{len(report.runs)} extension(s); base {report.base_status}")
    return EXIT_OK if found else EXIT_UNKNOWN


def _verify_witt(rep) -> list[str]:
    q = serialize.dform_from_json(rep["input"])
    res = rep["result"]
    bad = []
    for i, p in enumerate(res["planes"]):
        v = serialize.vector_from_json(q.space, p["v"], f"/result/planes/{i}/v")
        if not witt.is_d_isotropic_vector(q, v):
            bad.append(f"plane {i}: v is not D-isotropic")
    n = q.space.n
    kdim = len(res["kernel"]["gram_upper"]) // 4
    if 2 * len(res["planes"]) + kdim != n:
        bad.append("plane/kernel dimension count mismatch")
    return bad


def _verify_isometry(rep) -> list[str]:
    h = serialize.hermitian_from_json(rep["input"])
    h2 = serialize.hermitian_from_json(rep["input2"])
    res = rep["result"]
    if res["status"] != "isometric":
        return []
    f = serialize.dmatrix_from_json(h.A, res["f"], "/result/f")
    db = h.space.d_basis()
    for r in range(h.n):
        for c in range(h.n):
            if herm_eval(h2, f.apply(db[r]), f.apply(db[c])) != h.gram[r][c]:
                return ["f does not carry the gram of input onto input2"]
    return []


def _verify_refutation(q, wit) -> list[str]:
    if "witness" in wit:  # full certificate blob, not the bare triple
        wit = wit["witness"]
    v = serialize.vector_from_json(q.space, wit["v"], "/witness/v")
    u = serialize.vector_from_json(q.space, wit["u"], "/witness/u")
    d = serialize._quat(q.space.D, wit["d"], "/witness/d")
    P = perp(q, span_D([v], q.space))
    if not P.contains_vector(u):
        return ["witness u is not in (vD)-perp"]
    if P.contains_vector(u * d):
        return ["witness u*d stayed inside (vD)-perp"]
    return []


def cmd_verify(args) -> int:
    rep = _load(args.input)
    if not isinstance(rep, dict) or "command" not in rep:
        raise CliError("not a report file (missing 'command')")
    cmd = rep["command"]
    res = rep.get("result", {})
    bad: list[str] = []
    checked = True
    if cmd == "witt":
        bad = _verify_witt(rep)
    elif cmd == "herm-isometry":
        bad = _verify_isometry(rep)
    elif cmd == "herm-isotropy":
        h = serialize.hermitian_from_json(rep["input"])
        if res.get("status") == "found":
            v = serialize.vector_from_json(h.space, res["v"], "/result/v")
            if not herm_eval(h, v, v).is_zero():
                bad.append("isotropy witness does not vanish")
        else:
            checked = False
    elif cmd in ("check-dform", "rems-demo"):
        blob = res.get("dform", rep.get("input"))
        q = serialize.dform_from_json(blob)
        wit = (res.get("witness")
               or res.get("certificate", {}).get("witness"))
        if wit:
            bad = _verify_refutation(q, wit)
        else:
            cert = certify_dform(q, budget=args.budget)
            status = res.get("certificate", {}).get("status")
            if status and cert.status != status:
                bad.append(f"re-certification gave {cert.status}, "
                           f"report says {status}")
    elif cmd == "herm-invariant":
        h = serialize.hermitian_from_json(rep["input"])
        pi = serialize.pi_for(h, res["pi"], "/result/pi")
        q = pi_invariant(h, pi)
        if q.to_json() != res["dform"]:
            bad.append("pi-invariant gram differs from the report")
    elif cmd == "realize":
        if res.get("status") == "realized":
            q = serialize.dform_from_json(rep["input"])
            h = serialize.hermitian_from_json({"hermitian": res["hermitian"]})
            pi = serialize.pi_for(h, rep["pi"], "/pi")
            if pi_invariant(h, pi).gram_upper != q.gram_upper:
                bad.append("realized form does not reproduce the invariant")
        else:
            checked = False
    elif cmd == "diagonalize":
        q = serialize.dform_from_json(rep["input"])
        vecs = [serialize.vector_from_json(q.space, b, "/result")
                for b in res["radical_basis"] + res["block_basis"]]
        for i, u in enumerate(vecs):
            for v in vecs[i + 1:]:
                if not q.polar(u, v).is_zero():
                    bad.append("diagonal basis is not orthogonal")
    elif cmd == "springer":
        exp = serialize.experiment_from_json(rep["input"])
        from .springerlab import _extend_dform, _subject_dform
        from .scalars import extend
        q = _subject_dform(exp)
        for i, run in enumerate(res.get("extensions", [])):
            if run.get("status") != "witness-found":
                continue
            F = exp.field
            K = extend(F, [F.parse(c) for c in run["minpoly"]])
            qK = _extend_dform(q, K)
            v = serialize.vector_from_json(
                qK.space, run["witness"], f"/result/extensions/{i}/witness")
            if not witt.is_d_isotropic_vector(qK, v):
                bad.append(f"extension {i}: witness not D-isotropic")
    else:
        raise CliError(f"no verifier for command {cmd!r}")
    if bad:
        for b in bad:
            print(f"verify: FAIL {b}", file=sys.stderr)
        return EXIT_ERROR
    summary = "verify: all embedded witnesses check out" if checked else \
        "verify: nothing to re-check in this report"
    result = {"verified": not bad, "checked": checked}
    _emit(args, _report(args, "verify", {"input": rep.get("command")},
                        result), summary)
    return EXIT_OK


COMMANDS = {
    "check-dform": cmd_check_dform,
    "diagonalize": cmd_diagonalize,
    "witt": cmd_witt,
    "herm-invariant": cmd_herm_invariant,
    "herm-isometry": cmd_herm_isometry,
    "herm-isotropy": cmd_herm_isotropy,
    "realize": cmd_realize,
    "rems-demo": cmd_rems_demo,
    "springer": cmd_springer,
    "verify": cmd_verify,
}

NEEDS_INPUT = {"check-dform", "diagonalize", "witt", "herm-invariant",
               "herm-isometry", "herm-isotropy", "realize", "springer",
               "verify"}
NEEDS_INPUT2 = {"herm-isometry"}
NEEDS_PI = {"herm-invariant", "herm-isometry", "realize"}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dform",
        description="exact analyses of quadratic D-forms and hermitian "
                    "forms over quaternion algebras")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", help="input JSON path",
                       required=name in NEEDS_INPUT)
        p.add_argument("--input2", help="second input JSON path",
                       required=name in NEEDS_INPUT2)
        p.add_argument("--pi", help="functional coefficients or context JSON",
                       required=name in NEEDS_PI)
        p.add_argument("--budget", type=int, default=300)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the report here")
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock timings in the report")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (CliError, SchemaError, FieldError, AlgebraError,
            DFormError, HermitianError, SpringerLabError, witt.WittError,
            KeyError, TypeError) as e:
        kind = type(e).__name__
        print(f"error ({kind}): {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())

"""Odd-degree base-change experiments on anisotropic forms.

Whether D-anisotropy survives odd-degree field extensions is open; this
module gathers evidence only.  A run takes an anisotropic subject (a
quadratic D-form, or a hermitian form paired with a functional pi),
pushes it up a list of odd-degree simple extensions, and hunts for
isotropic vectors within a budget.  A found vector is a counterexample
candidate and is re-verified exactly on the whole cyclic block; absence
of a witness is reported as exactly that, never as anisotropy over K.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .algebra import PiFunctional, involution_canonical, pi_extend
from .dform import PiProvenance, QuadraticDSpace
from .dlinalg import RightDSpace
from .hermitian import HermitianSpace, base_change, pi_invariant
from .scalars import Field, Scalar, extend
from .witt import IsotropyOutcome, d_isotropic_search, is_d_isotropic_vector

Subject = Union[QuadraticDSpace, HermitianSpace]


class SpringerLabError(Exception):
    pass


class EvenDegree(SpringerLabError):
    pass


class IsotropicSubject(SpringerLabError):
    def __init__(self, v):
        super().__init__("subject is isotropic over the base field")
        self.v = v


@dataclass
class ExtensionExperiment:
    """Subject plus a list of monic odd-degree minimal polynomials
    (ascending coefficients) and per-extension search budgets."""

    subject: Subject
    extensions: list[list[Scalar]]
    pi: Optional[PiFunctional] = None
    base_budget: int = 300
    budgets: Optional[Sequence[int]] = None
    assume_anisotropic: bool = False
    results: list[IsotropyOutcome] = field(default_factory=list)

    def __post_init__(self):
        F = self.field
        exts = []
        for coeffs in self.extensions:
            cs = [c if isinstance(c, Scalar) else F.scalar(c) for c in coeffs]
            deg = len(cs) - 1
            if deg % 2 == 0 or deg < 3:
                raise EvenDegree(f"degree {deg}: need odd degree >= 3")
            if cs[-1] != F.one:
                raise SpringerLabError("minimal polynomial must be monic")
            exts.append(cs)
        self.extensions = exts
        if self.budgets is not None and len(self.budgets) != len(exts):
            raise SpringerLabError("one budget per extension")

    @property
    def field(self) -> Field:
        if isinstance(self.subject, HermitianSpace):
            return self.subject.A.F
        return self.subject.space.F

    def budget_for(self, idx: int) -> int:
        return self.base_budget if self.budgets is None else self.budgets[idx]


@dataclass
class ExtensionRun:
    minpoly: list[Scalar]
    budget: int
    status: str  # "witness-found" | "no-witness"
    witness: Optional[object] = None
    reverified: Optional[bool] = None
    samples: int = 0
    seconds: float = 0.0

    def to_json(self, include_timings: bool = False) -> dict:
        out = {
            "minpoly": [str(c) for c in self.minpoly],
            "degree": len(self.minpoly) - 1,
            "budget": self.budget,
            "status": self.status,
            "samples": self.samples,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
            out["reverified"] = bool(self.reverified)
        if include_timings:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class ExperimentReport:
    base_status: str  # "certified" | "assumed"
    base_outcome: IsotropyOutcome
    runs: list[ExtensionRun]

    @property
    def counterexample_candidates(self) -> list[ExtensionRun]:
        return [r for r in self.runs if r.status == "witness-found"]

    def to_json(self, include_timings: bool = False) -> dict:
        return {
            "base": {"status": self.base_status,
                     "search": self.base_outcome.to_json()},
            "extensions": [r.to_json(include_timings) for r in self.runs],
            "candidates": len(self.counterexample_candidates),
        }


def _subject_dform(exp: ExtensionExperiment) -> QuadraticDSpace:
    if isinstance(exp.subject, HermitianSpace):
        if exp.pi is None:
            raise SpringerLabError("hermitian subject needs a functional pi")
        return pi_invariant(exp.subject, exp.pi)
    return exp.subject


def _extend_dform(q: QuadraticDSpace, K: Field) -> QuadraticDSpace:
    """Scalar extension of q; provenance-carrying forms go through the
    hermitian level so the two routes are forced to agree."""
    prov = q.provenance
    if prov is not None:
        h = HermitianSpace(prov.sigma, prov.lam, prov.herm_gram)
        hK = base_change(h, K)
        piK = pi_extend(prov.pi, K)
        qK = pi_invariant(hK, piK)
        # extend-then-invariant vs invariant-then-extend, entrywise
        m = len(q.gram_upper)
        for r in range(m):
            for c in range(m):
                if qK.gram_upper[r][c] != K.embed(q.gram_upper[r][c]):
                    raise SpringerLabError("functoriality violated")
        return qK
    from .algebra import involution_extend
    sigK = involution_extend(involution_canonical(q.space.D), K)
    DK = sigK.A
    g = [[K.embed(x) for x in row] for row in q.gram_upper]
    return QuadraticDSpace(RightDSpace(DK, q.space.n), g,
                           certificate=q.certificate)


def run_experiment(exp: ExtensionExperiment) -> ExperimentReport:
    q = _subject_dform(exp)
    base = d_isotropic_search(q, budget=exp.base_budget)
    if base.status == "found":
        raise IsotropicSubject(base.v)
    if base.status == "anisotropic":
        base_status = "certified"
    elif exp.assume_anisotropic:
        base_status = "assumed"
    else:
        raise SpringerLabError(
            "base anisotropy unknown at this budget; set "
            "assume_anisotropic to proceed")
    F = exp.field
    runs: list[ExtensionRun] = []
    exp.results = []
    for idx, coeffs in enumerate(exp.extensions):
        K = extend(F, coeffs)
        qK = _extend_dform(q, K)
        budget = exp.budget_for(idx)
        t0 = time.perf_counter()
        out = d_isotropic_search(qK, budget=budget)
        dt = time.perf_counter() - t0
        exp.results.append(out)
        if out.status == "found":
            ok = is_d_isotropic_vector(qK, out.v)
            if not ok:
                raise SpringerLabError("witness failed exact re-verification")
            runs.append(ExtensionRun(coeffs, budget, "witness-found",
                                     witness=out.v, reverified=True,
                                     samples=out.samples, seconds=dt))
        else:
            # never claim anisotropy over K, whatever the search said
            runs.append(ExtensionRun(coeffs, budget, "no-witness",
                                     samples=out.samples, seconds=dt))
    return ExperimentReport(base_status, base, runs)

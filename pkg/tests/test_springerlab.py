import json

import pytest

from dforms.algebra import involution_canonical
from dforms.hermitian import canonical_pi, herm_create, herm_eval, pi_invariant
from dforms.scalars import QQ, F2T, Reducible
from dforms.springerlab import (
    EvenDegree, ExtensionExperiment, IsotropicSubject, SpringerLabError,
    run_experiment,
)


def skew_i(H):
    return herm_create(H, involution_canonical(H), -1, [[H.basis()[1]]])


def test_flagship_no_witness(H):
    h = skew_i(H)
    pi = canonical_pi(H, h.sigma, -1)
    exp = ExtensionExperiment(
        h, [[-2, 0, 0, 1], [-1, -1, 0, 1]], pi=pi, base_budget=3)
    rep = run_experiment(exp)
    assert rep.base_status == "certified"
    assert [r.status for r in rep.runs] == ["no-witness", "no-witness"]
    assert rep.counterexample_candidates == []
    blob = rep.to_json()
    assert blob["candidates"] == 0
    # evidence only: no anisotropy claim over K anywhere in the report
    assert "anisotropic" not in json.dumps(blob["extensions"])
    assert len(exp.results) == 2


def test_planted_witness_found(C2D):
    F = F2T
    t = F.scalar("t")
    g = involution_canonical(C2D)
    c = C2D.from_scalar(t + F.one)
    h = herm_create(C2D, g, 1, [[c, C2D.zero], [C2D.zero, C2D.one]])
    pi = canonical_pi(C2D, g, 1)
    exp = ExtensionExperiment(
        h, [[t, F.zero, F.zero, F.one]], pi=pi,
        base_budget=4, budgets=[320], assume_anisotropic=True)
    rep = run_experiment(exp)
    assert rep.base_status == "assumed"
    run = rep.runs[0]
    assert run.status == "witness-found"
    assert run.reverified
    v = run.witness
    # independent confirmation at the hermitian level over K
    from dforms.hermitian import base_change
    from dforms.scalars import extend
    K = extend(F, [t, F.zero, F.zero, F.one])
    hK = base_change(h, K)
    w = hK.space.vector(list(v.entries))
    assert herm_eval(hK, w, w).is_zero()
    assert exp.results[0].status == "found"


def test_even_degree_rejected(H):
    h = skew_i(H)
    pi = canonical_pi(H, h.sigma, -1)
    with pytest.raises(EvenDegree):
        ExtensionExperiment(h, [[1, 0, 1]], pi=pi)
    with pytest.raises(EvenDegree):
        ExtensionExperiment(h, [[1, 1]], pi=pi)


def test_reducible_surfaces_at_run(H):
    h = skew_i(H)
    pi = canonical_pi(H, h.sigma, -1)
    exp = ExtensionExperiment(h, [[-1, 0, 0, 1]], pi=pi, base_budget=3)
    with pytest.raises(Reducible):
        run_experiment(exp)


def test_isotropic_subject_refused(H):
    i = H.basis()[1]
    g = involution_canonical(H)
    h = herm_create(H, g, -1, [[i, H.zero], [H.zero, -i]])
    pi = canonical_pi(H, g, -1)
    exp = ExtensionExperiment(h, [[-2, 0, 0, 1]], pi=pi, base_budget=300)
    with pytest.raises(IsotropicSubject):
        run_experiment(exp)


def test_unknown_base_needs_flag(C2D):
    F = F2T
    t = F.scalar("t")
    g = involution_canonical(C2D)
    c = C2D.from_scalar(t + F.one)
    h = herm_create(C2D, g, 1, [[c, C2D.zero], [C2D.zero, C2D.one]])
    pi = canonical_pi(C2D, g, 1)
    exp = ExtensionExperiment(h, [[t, F.zero, F.zero, F.one]], pi=pi,
                              base_budget=4)
    with pytest.raises(SpringerLabError):
        run_experiment(exp)


def test_monic_required(H):
    h = skew_i(H)
    pi = canonical_pi(H, h.sigma, -1)
    with pytest.raises(SpringerLabError):
        ExtensionExperiment(h, [[-2, 0, 0, 2]], pi=pi)


def test_report_deterministic(H):
    h = skew_i(H)
    pi = canonical_pi(H, h.sigma, -1)
    blobs = []
    for _ in range(2):
        exp = ExtensionExperiment(h, [[-2, 0, 0, 1]], pi=pi, base_budget=3)
        blobs.append(json.dumps(run_experiment(exp).to_json(),
                                sort_keys=True))
    assert blobs[0] == blobs[1]
    assert "seconds" not in blobs[0]


def test_timings_opt_in(H):
    h = skew_i(H)
    pi = canonical_pi(H, h.sigma, -1)
    exp = ExtensionExperiment(h, [[-2, 0, 0, 1]], pi=pi, base_budget=3)
    blob = run_experiment(exp).to_json(include_timings=True)
    assert all("seconds" in r for r in blob["extensions"])

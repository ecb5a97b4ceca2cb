"""The numeric verification battery behind the `verify` CLI command.

Every check compares the matrix model against either a closed-form statement
or the combinatorial analysis, with fixed tolerances.  Residual maxima and
the seed are reported so runs are reproducible.
"""

from dataclasses import dataclass

import numpy as np

from .classify import terminal_decomposition
from .errors import SymprepError
from .matrixrep import build_rep, find_hw_vectors
from .numeric import (
    coisotropy_test,
    inv_moment_component_fn,
    inv_moment_eval,
    invariant_coord_count,
    jacobian_rank_and_orbit,
    local_subspace,
    moment_coords,
    moment_eval,
    poisson_bracket,
    seeded_samples,
    verify_commute,
)
from .reduction import analyze
from .sections import build_section, rho_psg, verify_section


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""


@dataclass
class VerifyReport:
    passed: bool
    checks: list
    seed: int
    samples: int
    analysis: object

    def failing(self):
        return [c for c in self.checks if not c.passed]


def _check(checks, name, residual, tol, detail=""):
    checks.append(CheckResult(name, float(residual), tol, float(residual) <= tol, detail))


def _flag(checks, name, ok, detail=""):
    checks.append(CheckResult(name, 0.0 if ok else 1.0, 0.5, bool(ok), detail))


def verify_suite(spec, seed=0, samples=20, analysis=None):
    """Run the full numeric battery for a catalog module."""
    rep = build_rep(spec)
    analysis = analysis or analyze(spec)
    rng = np.random.default_rng(seed)
    checks = []

    # infinitesimal invariance of the form, in floating point
    res = 0.0
    for m in rep.lie:
        res = max(res, float(np.max(np.abs(m.T @ rep.j + rep.j @ m))) if m.size else 0.0)
    _check(checks, "form_invariance", res, 1e-10)

    # moment map defining identity, round-tripped through the matrix form
    res = 0.0
    from .numeric import _frames

    for v in seeded_samples(rng, rep.dim, max(3, samples // 4)):
        mv = moment_eval(rep, v)
        for i, m in enumerate(rep.lie):
            res = max(res, abs(mv.coords[i] - 0.5 * rep.omega(m @ v, v)))
        for frame, mat in zip(_frames(rep), mv.factor_matrices):
            for lab, ref in zip(frame.labels, frame.mats):
                back = float(np.trace(mat @ ref))
                res = max(res, abs(back - mv.coords[rep.lie_index[lab]]))
    _check(checks, "moment_identity", res, 1e-12)

    # equivariance along nilpotent one-parameter flows
    res = _equivariance_residual(rep, rng)
    _check(checks, "moment_equivariance", res, 1e-8)

    # highest-weight structure matches the spec
    try:
        find_hw_vectors(rep)
        _flag(checks, "highest_weight_structure", True)
    except SymprepError as exc:
        _flag(checks, "highest_weight_structure", False, str(exc))

    # closed form for lone defining symplectic blocks
    res = _sp_closed_form_residual(rep, rng)
    if res is not None:
        _check(checks, "sp_standard_closed_form", res[0], 1e-12)
        _check(checks, "sp_standard_rank_one", res[1], 1e-8)
        _check(checks, "sp_standard_nilpotent", res[2], 1e-8)
        _check(checks, "sp_standard_invariant_zero", res[3], 1e-10)

    # invariant moment map image vs the combinatorial rank/complexity
    est_rk, est_orbit, est_c = jacobian_rank_and_orbit(rep, max(5, samples // 2), seed)
    _flag(
        checks,
        "rank_complexity_match",
        est_rk == analysis.rk_s and est_c == analysis.c_s,
        f"numeric (rk, c) = ({est_rk}, {est_c}), "
        f"combinatorial ({analysis.rk_s}, {analysis.c_s})",
    )
    coiso = coisotropy_test(rep, max(5, samples // 2), seed)
    _flag(
        checks,
        "coisotropy_matches_mf",
        coiso == analysis.mf,
        f"coisotropic={coiso}, mf={analysis.mf}",
    )

    # local structure solve and the commuting square, on every non-terminal
    # weight of the module
    verdict = terminal_decomposition(spec)
    if not verdict.terminal:
        chi = verdict.witness
        res_sigma = res_perp = res_levi = res_char = 0.0
        v0, v0m, du, sbasis = local_subspace(rep, chi)
        bmat = np.array([[float(x) for x in b] for b in sbasis]).T
        done = 0
        attempts = 0
        while done < samples and attempts < 20 * samples:
            attempts += 1
            s = bmat @ rng.standard_normal(bmat.shape[1])
            try:
                rc = verify_commute(rep, chi, v0, s)
            except SymprepError:
                continue
            res_sigma = max(res_sigma, rc.embedding.residual_sigma)
            res_perp = max(res_perp, rc.embedding.residual_perp)
            res_levi = max(res_levi, rc.residual_levi)
            res_char = max(res_char, rc.residual_charpoly)
            done += 1
        _flag(checks, "q_embed_samples", done == samples, f"{done}/{samples} samples")
        _check(checks, "q_embed_sigma", res_sigma, 1e-9)
        _check(checks, "q_embed_perp", res_perp, 1e-9)
        _check(checks, "commute_levi_restriction", res_levi, 1e-9)
        _check(checks, "commute_invariant_image", res_char, 1e-9)

    # sections: exact construction, float residual of the invariant image
    section = build_section(rep)
    sr = verify_section(rep, section, samples=samples, seed=seed)
    _check(checks, "section_residual", sr.residual_max, 1e-8)
    _flag(checks, "section_zero_fiber", sr.zero_fiber_ok)

    # separating one-parameter subgroup exists and verifies exactly
    try:
        rho_psg(spec.datum, spec)
        _flag(checks, "separating_psg", True)
    except SymprepError as exc:
        _flag(checks, "separating_psg", False, str(exc))

    # pulled-back invariants Poisson-commute
    res = 0.0
    ninv = invariant_coord_count(rep)
    fns = [inv_moment_component_fn(rep, i) for i in range(ninv)]
    for v in seeded_samples(rng, rep.dim, max(3, samples // 5)):
        for i in range(ninv):
            for j in range(i, ninv):
                res = max(res, abs(poisson_bracket(rep, fns[i], fns[j], v)))
    _check(checks, "moment_pullback_commutes", res, 1e-8)

    passed = all(c.passed for c in checks)
    return VerifyReport(passed, checks, seed, samples, analysis)


def _equivariance_residual(rep, rng):
    """m(exp(t e) v) vs coadjoint transport, with the exact nilpotent series
    exponential."""
    res = 0.0
    labels = [lab for lab in rep.lie_labels if lab[0] == "e"][:2]
    for lab in labels:
        x = rep.lie_matrix(lab)
        t = 0.7
        g = np.eye(rep.dim)
        term = np.eye(rep.dim)
        k = 1
        while np.max(np.abs(term)) > 0:
            term = term @ (t * x) / k
            g = g + term
            k += 1
            if k > rep.dim + 2:
                break
        ginv = np.linalg.inv(g)
        for v in seeded_samples(rng, rep.dim, 2):
            before = moment_coords(rep, v)
            after = moment_coords(rep, g @ v)
            for i, m in enumerate(rep.lie):
                lhs = after[i]
                rhs = 0.5 * rep.omega((ginv @ m @ g) @ v, v)
                res = max(res, abs(lhs - rhs))
    return res


def _sp_closed_form_residual(rep, rng):
    """For a lone type-C defining block: m(v) = -1/2 v v^T J, nilpotent of
    rank one, invariant image zero.  Returns the four residual maxima, or
    None when not applicable."""
    if len(rep.blocks) != 1:
        return None
    kind, weight, start, size = rep.blocks[0]
    if kind != "symplectic":
        return None
    datum = rep.datum
    if len(datum.factors) != 1 or datum.factors[0][0] not in ("A", "C"):
        return None
    letter, n = datum.factors[0]
    expected_dim = 2 if letter == "A" else 2 * n
    if rep.dim != expected_dim:
        return None
    closed_res = rank_res = eig_res = inv_res = 0.0
    for v in seeded_samples(rng, rep.dim, 20):
        mv = moment_eval(rep, v)
        closed = -0.5 * np.outer(v, v) @ rep.j
        closed_res = max(
            closed_res, float(np.max(np.abs(mv.factor_matrices[0] - closed)))
        )
        sv = np.linalg.svd(mv.factor_matrices[0], compute_uv=False)
        if sv.size > 1:
            rank_res = max(rank_res, float(sv[1]))
        eig = np.linalg.eigvals(mv.factor_matrices[0])
        eig_res = max(eig_res, float(np.max(np.abs(eig))))
        inv_res = max(inv_res, float(np.max(np.abs(inv_moment_eval(rep, v)))))
    return closed_res, rank_res, eig_res, inv_res

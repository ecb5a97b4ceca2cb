import numpy as np
import pytest

from symprep.errors import (
    DimensionMismatch,
    NoReductionAvailable,
    SOutsideDomain,
)
from symprep.matrixrep import build_rep
from symprep.numeric import (
    coisotropy_test,
    coordinate_fn,
    exact_hw_vector,
    inv_moment_component_fn,
    inv_moment_eval,
    jacobian_rank_and_orbit,
    local_subspace,
    moment_component_fn,
    moment_coords,
    moment_eval,
    phi_solve_q_embed,
    poisson_bracket,
    verify_commute,
)
from symprep.reps import validate_symplectic_spec

from corpus import A1, A2, C2, T1, catalog


def _rep(datum, summands):
    return build_rep(validate_symplectic_spec(datum, summands))


def test_moment_closed_form_sp2():
    rep = _rep(A1, [((1,), 1)])
    v = np.array([1.0, 0.0])
    mv = moment_eval(rep, v)
    expected = -0.5 * np.outer(v, v) @ rep.j
    assert np.max(np.abs(mv.factor_matrices[0] - expected)) <= 1e-15
    assert np.linalg.matrix_rank(mv.factor_matrices[0]) == 1


def test_moment_torus_example():
    rep = _rep(T1, [((1,), 1), ((-1,), 1)])
    coords = moment_coords(rep, np.array([2.0, 3.0]))
    assert abs(coords[0] - 6.0) <= 1e-14


def test_moment_of_zero_vanishes():
    rep = _rep(C2, [((1, 0), 1)])
    assert np.max(np.abs(moment_coords(rep, np.zeros(rep.dim)))) == 0.0


def test_moment_dimension_mismatch():
    rep = _rep(A1, [((1,), 1)])
    with pytest.raises(DimensionMismatch):
        moment_coords(rep, np.zeros(5))


def test_inv_moment_examples():
    rep = _rep(C2, [((1, 0), 1)])
    rng = np.random.default_rng(0)
    for _ in range(5):
        v = rng.standard_normal(rep.dim)
        v /= np.linalg.norm(v)
        assert np.max(np.abs(inv_moment_eval(rep, v))) <= 1e-10
    rep = _rep(T1, [((1,), 1), ((-1,), 1)])
    out = inv_moment_eval(rep, np.array([2.0, 3.0]))
    assert abs(out[0] - 6.0) <= 1e-14
    rep = _rep(A1, [((1,), 2)])
    v = np.array([1.0, 0.0, 1.0, 0.0])  # vector paired with a covector on it
    out = inv_moment_eval(rep, v)
    assert abs(out[0]) > 1e-3  # generic pairing gives a nonzero invariant


def test_jacobian_rank_and_orbit_examples():
    assert jacobian_rank_and_orbit(_rep(C2, [((1, 0), 1)]), 6, 0) == (0, 4, 0)
    assert jacobian_rank_and_orbit(_rep(A1, [((1,), 2)]), 6, 0) == (1, 3, 0)
    assert jacobian_rank_and_orbit(_rep(A1, [((2,), 2)]), 6, 0) == (1, 3, 1)


def test_coisotropy_examples():
    assert coisotropy_test(_rep(A1, [((3,), 1)]), 6, 0)
    assert not coisotropy_test(_rep(A1, [((2,), 2)]), 6, 0)
    assert coisotropy_test(_rep(C2, [((1, 0), 1)]), 6, 0)


def test_phi_solve_examples():
    rng = np.random.default_rng(11)
    # 1x1 systems
    for summands, chi in [([((1,), 2)], (1,)), ([((3,), 1)], (3,))]:
        rep = _rep(A1, summands)
        v0, v0m, du, basis = local_subspace(rep, chi)
        assert len(du) == 1
        bmat = np.array([[float(x) for x in b] for b in basis]).T
        s = bmat @ rng.standard_normal(bmat.shape[1])
        emb = phi_solve_q_embed(rep, chi, v0, s)
        assert emb.system_matrix.shape == (1, 1)
        assert emb.residual_sigma <= 1e-12
        assert emb.residual_perp <= 1e-12
    # 2x2 triangular system
    rep = _rep(A2, [((1, 0), 1), ((0, 1), 1)])
    v0, v0m, du, basis = local_subspace(rep, (1, 0))
    assert len(du) == 2
    bmat = np.array([[float(x) for x in b] for b in basis]).T
    s = bmat @ rng.standard_normal(bmat.shape[1])
    emb = phi_solve_q_embed(rep, (1, 0), v0, s)
    heights = [r.height for r in du]
    assert heights == sorted(heights)
    assert emb.residual_sigma <= 1e-12


def test_phi_solve_domain_guard():
    rep = _rep(A1, [((1,), 2)])
    v0, v0m, du, basis = local_subspace(rep, (1,))
    # v0m has omega(s, v0) = -1... pick the S-direction pairing to zero
    dead = next(
        b for b in basis if rep.omega_exact(b, v0) == 0
    )
    with pytest.raises(SOutsideDomain):
        phi_solve_q_embed(rep, (1,), v0, np.array([float(x) for x in dead]))


def test_verify_commute_examples():
    rng = np.random.default_rng(13)
    for datum, summands, chi in [
        (A1, [((1,), 2)], (1,)),
        (A2, [((1, 0), 1), ((0, 1), 1)], (1, 0)),
    ]:
        rep = _rep(datum, summands)
        v0, _, _, basis = local_subspace(rep, chi)
        bmat = np.array([[float(x) for x in b] for b in basis]).T
        for _ in range(5):
            s = bmat @ rng.standard_normal(bmat.shape[1])
            try:
                out = verify_commute(rep, chi, v0, s)
            except SOutsideDomain:
                continue
            assert out.residual_levi <= 1e-10
            assert out.residual_charpoly <= 1e-10


def test_verify_commute_rejects_terminal():
    rep = _rep(C2, [((1, 0), 1)])
    v0 = exact_hw_vector(rep, (1, 0))
    with pytest.raises(NoReductionAvailable):
        verify_commute(rep, (1, 0), v0, np.zeros(rep.dim))


def test_poisson_darboux_and_antisymmetry():
    rep = _rep(A1, [((1,), 2)])
    rng = np.random.default_rng(3)
    v = rng.standard_normal(rep.dim)
    x1, y1 = coordinate_fn(0), coordinate_fn(2)
    assert abs(poisson_bracket(rep, x1, y1, v) - 1.0) <= 1e-12
    assert abs(poisson_bracket(rep, x1, x1, v)) <= 1e-12
    f = moment_component_fn(rep, ("h", 0))
    assert abs(poisson_bracket(rep, f, f, v)) <= 1e-12
    assert abs(
        poisson_bracket(rep, f, x1, v) + poisson_bracket(rep, x1, f, v)
    ) <= 1e-12


def test_poisson_moment_is_homomorphism():
    rep = _rep(A1, [((1,), 2)])
    rng = np.random.default_rng(5)
    v = rng.standard_normal(rep.dim)
    me = moment_component_fn(rep, ("e", (1,)))
    mf = moment_component_fn(rep, ("f", (1,)))
    mh = moment_component_fn(rep, ("h", 0))
    assert abs(poisson_bracket(rep, me, mf, v) - mh.value(v)) <= 1e-12


def test_poisson_pullbacks_commute():
    for name in ("sl2_two_standards", "sl2_adjoint_pair", "sl3_std_dual"):
        spec, _ = catalog()[name]
        rep = build_rep(spec)
        rng = np.random.default_rng(7)
        fns = [
            inv_moment_component_fn(rep, i)
            for i in range(len(inv_moment_eval(rep, np.zeros(rep.dim))))
        ]
        for _ in range(3):
            v = rng.standard_normal(rep.dim)
            v /= np.linalg.norm(v)
            for i in range(len(fns)):
                for j in range(i + 1, len(fns)):
                    assert abs(poisson_bracket(rep, fns[i], fns[j], v)) <= 1e-8


def test_equivariance_spot():
    rep = _rep(A2, [((1, 0), 1), ((0, 1), 1)])
    x = rep.lie_matrix(("e", (1, 0)))
    g = np.eye(rep.dim) + 0.3 * x + 0.045 * x @ x  # exp for this nilpotent
    rng = np.random.default_rng(2)
    v = rng.standard_normal(rep.dim)
    ginv = np.linalg.inv(g)
    for i, m in enumerate(rep.lie):
        lhs = moment_coords(rep, g @ v)[i]
        rhs = 0.5 * rep.omega((ginv @ m @ g) @ v, v)
        assert abs(lhs - rhs) <= 1e-10


def test_inv_moment_conjugation_invariance():
    rep = _rep(A2, [((1, 0), 1), ((0, 1), 1)])
    x = rep.lie_matrix(("e", (1, 1)))
    g = np.eye(rep.dim) + 0.4 * x + 0.08 * x @ x
    rng = np.random.default_rng(8)
    for _ in range(3):
        v = rng.standard_normal(rep.dim)
        v /= np.linalg.norm(v)
        before = inv_moment_eval(rep, v)
        after = inv_moment_eval(rep, g @ v)
        assert np.max(np.abs(before - after)) <= 1e-9

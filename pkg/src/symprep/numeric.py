"""Floating-point and exact-rational verification of the structure theory.

Everything here works on MatrixRep models: moment maps and their invariant
images, numerical rank/complexity estimates, coisotropy of generic orbits,
the nonlinear embedding q of the local-structure step, moment-map sections
over a*, and Poisson brackets.  Random sampling is seeded and reproducible;
rank decisions use singular-value thresholds at unit input scale.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .classify import terminal_decomposition
from .errors import (
    DimensionMismatch,
    InternalConsistencyError,
    NoReductionAvailable,
    NotSupported,
    NumericalDegeneracy,
    SingularSystem,
    SOutsideDomain,
)
from .linalg import (
    canon,
    cvec,
    nullspace,
    rref,
    vdot,
)
from .matrixrep import _reference_block, highest_weight_vectors, root_recipes
from .rootdata import positive_roots

RANK_TOL = 1e-8
IDENTITY_TOL = 1e-10
DOMAIN_TOL = 1e-6


def seeded_samples(rng, dim, count):
    """Integer-lattice-offset Gaussian sample vectors, unit-normalized."""
    out = []
    for _ in range(count):
        v = rng.integers(-2, 3, size=dim) + rng.standard_normal(dim)
        n = np.linalg.norm(v)
        if n < 1e-9:
            v = np.ones(dim)
            n = np.linalg.norm(v)
        out.append(v / n)
    return out


def moment_coords(rep, v):
    """m(v) as the vector of values on the Chevalley basis of g."""
    v = np.asarray(v)
    if v.shape[0] != rep.dim:
        raise DimensionMismatch(f"vector length {v.shape[0]} != dim {rep.dim}")
    jv = rep.j @ v
    return np.array([0.5 * (m @ v) @ jv for m in rep.lie])


def charpoly_coeffs(a):
    """[c_1..c_n] of det(tI - A), by the Faddeev-LeVerrier recursion (analytic
    in the entries, unlike eigenvalue-based routines)."""
    n = a.shape[0]
    mk = np.eye(n, dtype=a.dtype)
    out = []
    for k in range(1, n + 1):
        am = a @ mk
        ck = -np.trace(am) / k
        out.append(ck)
        mk = am + ck * np.eye(n, dtype=a.dtype)
    return out


class _FactorFrame:
    """Reference defining module of one simple factor with an exact trace-form
    Gram matrix over its Chevalley basis elements."""

    def __init__(self, datum, fi):
        letter, frank = datum.factors[fi]
        self.letter, self.frank = letter, frank
        self.idxs = datum.standard_order[fi]
        block = _reference_block(letter, frank)
        self.dim = block.dim
        from .matrixrep import _single_factor_datum
        from .linalg import comm, mat_scale

        local = _single_factor_datum(letter, frank)
        pos_local = positive_roots(local)
        x = {}
        y = {}
        for i in range(frank):
            e = tuple(1 if j == i else 0 for j in range(frank))
            x[e] = block.e[i]
            y[e] = block.f[i]
        recipes = root_recipes(letter, frank)
        for coords in sorted(recipes, key=sum):
            i_loc, lower, c = recipes[coords]
            simp = tuple(1 if j == i_loc else 0 for j in range(frank))
            x[coords] = mat_scale(Fraction(1, 1) / c, comm(x[simp], x[lower]))
            y[coords] = comm(y[simp], y[lower])

        def to_global(local_coords):
            g = [0] * datum.rank
            for loc, gi in enumerate(self.idxs):
                g[gi] = local_coords[loc]
            return tuple(g)

        self.labels = [("h", gi) for gi in self.idxs]
        mats = [block.h[loc] for loc in range(frank)]
        for r in pos_local:
            self.labels.append(("e", to_global(r.coords)))
            mats.append(x[r.coords])
            self.labels.append(("f", to_global(r.coords)))
            mats.append(y[r.coords])
        self.mats = [np.array(m, dtype=float) for m in mats]
        gram = np.array(
            [[float(np.trace(a @ b)) for b in self.mats] for a in self.mats]
        )
        self.gram_inv = np.linalg.inv(gram)
        ht = np.array(
            [[float(np.trace(a @ b)) for b in self.mats[:frank]]
             for a in self.mats[:frank]]
        )
        self.gram_t_inv = np.linalg.inv(ht)

    def n_invariant_coords(self):
        if self.letter == "A":
            return self.dim - 1  # c_2..c_n of a traceless matrix
        return self.frank        # even coefficients c_2, c_4, .., c_2n

    def invariant_coords_of(self, mat):
        coeffs = charpoly_coeffs(mat)
        if self.letter == "A":
            return coeffs[1:]
        return coeffs[1::2]


def _frames(rep):
    if not hasattr(rep, "_frames_cache"):
        object.__setattr__(
            rep,
            "_frames_cache",
            [_FactorFrame(rep.datum, fi) for fi in range(len(rep.datum.factors))],
        )
    return rep._frames_cache


def factor_matrix_forms(rep, coords):
    """Per-factor matrices of a moment value, via the trace-form Gram solve."""
    out = []
    for frame in _frames(rep):
        rhs = np.array(
            [coords[rep.lie_index[lab]] for lab in frame.labels],
            dtype=coords.dtype if hasattr(coords, "dtype") else float,
        )
        u = frame.gram_inv @ rhs
        mat = sum(
            ui * m.astype(rhs.dtype) for ui, m in zip(u, frame.mats)
        )
        out.append(mat)
    return out


@dataclass
class MomentValue:
    coords: np.ndarray
    factor_matrices: list
    central_values: np.ndarray


def moment_eval(rep, v):
    coords = moment_coords(rep, v)
    central = np.array(
        [coords[rep.lie_index[("z", l)]]
         for l in range(_central_rank(rep.datum))]
    )
    return MomentValue(coords, factor_matrix_forms(rep, coords), central)


def _central_rank(datum):
    return datum.ambient_dim - sum(n for _, n in datum.factors)


def invariant_coord_count(rep):
    return sum(f.n_invariant_coords() for f in _frames(rep)) + _central_rank(rep.datum)


def inv_moment_eval(rep, v):
    """Invariant moment map: per-factor characteristic coefficients of the
    moment value followed by the central linear coordinates."""
    for letter, frank in rep.datum.factors:
        if letter not in ("A", "C"):
            raise NotSupported(f"no invariant coordinates for type {letter}{frank}")
    coords = moment_coords(rep, v)
    values = []
    for frame, mat in zip(_frames(rep), factor_matrix_forms(rep, coords)):
        values.extend(frame.invariant_coords_of(mat))
    for l in range(_central_rank(rep.datum)):
        values.append(coords[rep.lie_index[("z", l)]])
    return np.array(values)


def chevalley_target(rep, a):
    """Invariant coordinates of a point a in t*, for comparison against
    inv_moment_eval along a section."""
    a = cvec(a)
    values = []
    for frame in _frames(rep):
        rhs = np.array(
            [float(vdot(a, rep.datum.simple_coroots[gi])) for gi in frame.idxs]
        )
        u = frame.gram_t_inv @ rhs
        mat = sum(ui * m for ui, m in zip(u, frame.mats[: frame.frank]))
        values.extend(frame.invariant_coords_of(mat))
    base = sum(n for _, n in rep.datum.factors)
    for l in range(_central_rank(rep.datum)):
        values.append(float(a[base + l]))
    return np.array(values)


def _numeric_rank(mat, tol=RANK_TOL):
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(np.asarray(mat, dtype=float), compute_uv=False)
    if sv.size == 0:
        return 0
    scale = max(1.0, sv[0])
    return int(np.sum(sv > tol * scale))


def orbit_directions(rep, v):
    return np.array([m @ v for m in rep.lie])


def jacobian_inv_moment(rep, v):
    """Exact-to-machine-precision Jacobian via complex-step differentiation."""
    v = np.asarray(v, dtype=float)
    h = 1e-100
    cols = []
    for j in range(rep.dim):
        vc = v.astype(complex)
        vc[j] += 1j * h
        cols.append(np.imag(inv_moment_eval(rep, vc)) / h)
    return np.array(cols).T


def jacobian_rank_and_orbit(rep, samples=8, seed=0):
    """(est_rk, est_orbit_dim, est_c) maximized over seeded samples."""
    if samples < 5:
        raise ValueError("need at least five samples")
    rng = np.random.default_rng(seed)
    rk = 0
    orbit = 0
    for v in seeded_samples(rng, rep.dim, samples):
        rk = max(rk, _numeric_rank(jacobian_inv_moment(rep, v)))
        orbit = max(orbit, _numeric_rank(orbit_directions(rep, v)))
    rest = rep.dim - orbit - rk
    if rest < 0 or rest % 2:
        raise NumericalDegeneracy(
            f"dim V - orbit - rank = {rest} is not an even nonneg integer"
        )
    return rk, orbit, rest // 2


def coisotropy_test(rep, samples=8, seed=0, tol=RANK_TOL):
    """True when the symplectic perp of the generic orbit tangent lies inside
    the tangent itself, for every sample."""
    rng = np.random.default_rng(seed)
    for v in seeded_samples(rng, rep.dim, samples):
        tangent = orbit_directions(rep, v)
        u, sv, vt = np.linalg.svd(tangent)
        cut = np.sum(sv > tol * max(1.0, sv[0] if sv.size else 1.0))
        tan_basis = vt[:cut].T  # columns span g.v
        rows = tangent @ rep.j  # omega(xi v, .) functionals
        u2, sv2, vt2 = np.linalg.svd(rows)
        cut2 = np.sum(sv2 > tol * max(1.0, sv2[0] if sv2.size else 1.0))
        perp = vt2[cut2:].T     # columns span (g.v)^perp
        if perp.size == 0:
            continue
        resid = perp - tan_basis @ (tan_basis.T @ perp)
        if np.linalg.norm(resid, ord=2) > 1e-8:
            return False
    return True


# -- local structure: the solve for q ----------------------------------------

def exact_hw_vector(rep, chi, index=0):
    basis = highest_weight_vectors(rep, cvec(chi))
    if not basis:
        raise InternalConsistencyError(f"no highest weight vector of weight {chi}")
    return basis[index]


def lowest_weight_vectors(rep, weight):
    datum = rep.datum
    n = rep.dim
    rows = []
    for i in range(datum.rank):
        coords = tuple(1 if j == i else 0 for j in range(datum.rank))
        rows.extend(rep.lie_matrix_exact(("f", coords)))
    space = nullspace(rows, n) if rows else [
        cvec([1 if k == i else 0 for k in range(n)]) for i in range(n)
    ]
    out = []
    weight = cvec(weight)
    for vec in space:
        parts = {}
        for a, x in enumerate(vec):
            if x:
                parts.setdefault(rep.weight_labels[a], [0] * n)[a] = x
        if weight in parts:
            out.append(cvec(parts[weight]))
    red, piv = rref(out) if out else ([], [])
    return [red[i] for i in range(len(piv))]


def dual_lowest_vector(rep, chi, v0):
    """Lowest weight vector of weight -chi with omega(v0m, v0) = 1, chosen
    minimal-norm inside the lowest-weight space."""
    chi = cvec(chi)
    cands = lowest_weight_vectors(rep, tuple(-x for x in chi))
    if not cands:
        raise InternalConsistencyError(f"no lowest weight vector of weight {-1}")
    pair = [rep.omega_exact(c, v0) for c in cands]
    norm = sum(Fraction(p) ** 2 for p in pair)
    if norm == 0:
        raise InternalConsistencyError("lowest-weight space pairs to zero with v0")
    coeff = [canon(Fraction(p) / norm) for p in pair]
    n = rep.dim
    out = [Fraction(0)] * n
    for c, cand in zip(coeff, cands):
        for a in range(n):
            out[a] += Fraction(c) * Fraction(cand[a])
    v0m = cvec(out)
    if rep.omega_exact(v0m, v0) != 1:
        raise InternalConsistencyError("lowest vector normalization failed")
    return v0m


def delta_u_roots(datum, chi):
    chi = cvec(chi)
    du = [r for r in positive_roots(datum) if vdot(chi, r.coroot_vec) > 0]
    du.sort(key=lambda r: (r.height, r.coords))
    return du


def local_subspace(rep, chi, v0=None, v0m=None, datum=None):
    """Exact basis (weight-labeled) of S = (p_u^- v0)^perp cap (p_u v0^-)^perp."""
    datum = datum or rep.datum
    chi = cvec(chi)
    v0 = v0 if v0 is not None else exact_hw_vector(rep, chi)
    v0m = v0m if v0m is not None else dual_lowest_vector(rep, chi, v0)
    du = delta_u_roots(datum, chi)
    n = rep.dim
    rows = []
    for r in du:
        fm = rep.lie_matrix_exact(("f", _coords_for(rep, r)))
        em = rep.lie_matrix_exact(("e", _coords_for(rep, r)))
        fv = _exact_matvec(fm, v0)
        ev = _exact_matvec(em, v0m)
        rows.append(_omega_row(rep, fv))
        rows.append(_omega_row(rep, ev))
    basis = nullspace(rows, n) if rows else [
        cvec([1 if k == i else 0 for k in range(n)]) for i in range(n)
    ]
    return v0, v0m, du, [cvec(b) for b in basis]


def _coords_for(rep, root):
    """Original-datum simple-root coordinates of a root given by its ambient
    vector (roots of Levi subdata are roots of the parent)."""
    if not hasattr(rep, "_root_by_vec"):
        object.__setattr__(
            rep,
            "_root_by_vec",
            {r.vec: r.coords for r in positive_roots(rep.datum)},
        )
    return rep._root_by_vec[root.vec]


def _exact_matvec(mat, v):
    n = len(v)
    return cvec(
        tuple(
            sum(Fraction(mat[a][b]) * Fraction(v[b]) for b in range(n) if mat[a][b])
            for a in range(n)
        )
    )


def _omega_row(rep, u):
    n = rep.dim
    return cvec(
        tuple(
            sum(Fraction(u[a]) * Fraction(rep.j_exact[a][b]) for a in range(n)
                if u[a] and rep.j_exact[a][b])
            for b in range(n)
        )
    )


@dataclass
class QEmbedding:
    q: np.ndarray
    xi_minus: np.ndarray
    system_matrix: np.ndarray
    residual_sigma: float
    residual_perp: float


def phi_solve_q_embed(rep, chi, v0, s, datum=None, tol=DOMAIN_TOL):
    """Solve the square linear system for xi_- in p_u^- and return
    q(s) = s + xi_-(s) v0 together with its membership residuals.

    The system matrix is asserted to be triangular in root-height order with
    nonvanishing diagonal."""
    datum = datum or rep.datum
    chi = cvec(chi)
    v0f = np.array([float(x) for x in v0])
    s = np.asarray(s, dtype=float)
    if abs(rep.omega(s, v0f)) < tol:
        raise SOutsideDomain("omega(s, v0) is below the domain tolerance")
    du = delta_u_roots(datum, chi)
    k = len(du)
    fmats = [
        np.asarray(rep.lie_matrix(("f", _coords_for(rep, r))), dtype=float)
        for r in du
    ]
    emats = [
        np.asarray(rep.lie_matrix(("e", _coords_for(rep, r))), dtype=float)
        for r in du
    ]
    fv0 = [m @ v0f for m in fmats]
    a = np.zeros((k, k))
    rhs = np.zeros(k)
    for ai in range(k):
        for bi in range(k):
            a[ai, bi] = rep.omega(emats[ai] @ fv0[bi], s)
        rhs[ai] = -0.5 * rep.omega(emats[ai] @ s, s)
    scale = max(1.0, float(np.max(np.abs(a))))
    for ai in range(k):
        for bi in range(k):
            hi, hj = du[ai].height, du[bi].height
            lower = hj < hi or (hj == hi and ai != bi)
            if lower and abs(a[ai, bi]) > 1e-9 * scale:
                raise InternalConsistencyError(
                    f"system matrix not triangular at ({ai},{bi})"
                )
    for ai in range(k):
        if abs(a[ai, ai]) < tol:
            raise SingularSystem(f"triangular diagonal vanishes at {du[ai].coords}")
    coeff = np.linalg.solve(a, rhs)
    q = s + sum(c * fv for c, fv in zip(coeff, fv0))
    res_sigma = max(
        (abs(rep.omega(em @ q, q)) for em in emats), default=0.0
    )
    res_perp = max((abs(rep.omega(fv, q)) for fv in fv0), default=0.0)
    return QEmbedding(q, coeff, a, res_sigma, res_perp)


@dataclass
class CommuteReport:
    residual_levi: float
    residual_charpoly: float
    embedding: QEmbedding


def verify_commute(rep, chi, v0, s, datum=None):
    """Check the two commutation statements for the embedding q: restriction
    of the moment value to the Levi equals the moment value inside S, and the
    characteristic polynomials agree with those of the Levi projection."""
    datum = datum or rep.datum
    verdict = terminal_decomposition(rep.spec)
    if verdict.terminal:
        raise NoReductionAvailable("module is terminal; nothing to reduce")
    emb = phi_solve_q_embed(rep, chi, v0, s, datum=datum)
    chi = cvec(chi)
    levi_labels = [("h", i) for i in range(rep.datum.rank)]
    levi_labels += [("z", l) for l in range(_central_rank(rep.datum))]
    for r in positive_roots(rep.datum):
        if vdot(chi, r.coroot_vec) == 0:
            levi_labels.append(("e", r.coords))
            levi_labels.append(("f", r.coords))
    s = np.asarray(s, dtype=float)
    res_levi = 0.0
    for lab in levi_labels:
        m = rep.lie_matrix(lab)
        res_levi = max(
            res_levi,
            abs(0.5 * rep.omega(m @ emb.q, emb.q) - 0.5 * rep.omega(m @ s, s)),
        )
    coords = moment_coords(rep, emb.q)
    proj = coords.copy()
    keep = set(levi_labels)
    for i, lab in enumerate(rep.lie_labels):
        if lab[0] in ("e", "f") and lab not in keep:
            proj[i] = 0.0
    full = factor_matrix_forms(rep, coords)
    red = factor_matrix_forms(rep, proj)
    res_char = 0.0
    for mf, mr in zip(full, red):
        cf = np.array(charpoly_coeffs(mf))
        cr = np.array(charpoly_coeffs(mr))
        res_char = max(res_char, float(np.max(np.abs(cf - cr))) if cf.size else 0.0)
    return CommuteReport(res_levi, res_char, emb)


# -- Poisson brackets ---------------------------------------------------------

@dataclass
class PolyFn:
    """Function on the module with an optional exact gradient; black boxes
    fall back to central finite differences."""

    value: callable
    grad: callable = None
    fd_step: float = 1e-5

    def gradient(self, v):
        if self.grad is not None:
            return np.asarray(self.grad(v), dtype=float)
        v = np.asarray(v, dtype=float)
        g = np.zeros_like(v)
        for j in range(v.size):
            e = np.zeros_like(v)
            e[j] = self.fd_step
            g[j] = (self.value(v + e) - self.value(v - e)) / (2 * self.fd_step)
        return g


def coordinate_fn(i):
    return PolyFn(value=lambda v: float(v[i]),
                  grad=lambda v: np.eye(len(v))[i])


def moment_component_fn(rep, label):
    """The moment coordinate v -> 1/2 omega(xi v, v) with its exact gradient
    -J xi v."""
    xi = rep.lie_matrix(label)

    def val(v):
        v = np.asarray(v, dtype=float)
        return 0.5 * (xi @ v) @ (rep.j @ v)

    def grad(v):
        return -(rep.j @ (xi @ np.asarray(v, dtype=float)))

    return PolyFn(value=val, grad=grad)


def inv_moment_component_fn(rep, idx):
    """One invariant-moment coordinate; the gradient is a complex-step
    derivative of the analytic coefficient formula."""

    def val(v):
        return float(np.real(inv_moment_eval(rep, np.asarray(v, dtype=float))[idx]))

    def grad(v):
        v = np.asarray(v, dtype=float)
        h = 1e-100
        g = np.zeros_like(v)
        for j in range(v.size):
            vc = v.astype(complex)
            vc[j] += 1j * h
            g[j] = np.imag(inv_moment_eval(rep, vc)[idx]) / h
        return g

    return PolyFn(value=val, grad=grad)


def poisson_bracket(rep, f, g, v):
    """{f, g}(v) = omega(H_f, H_g)(v) with Hamiltonian fields from the model's
    form; equals -grad(f) . J^{-1} grad(g)."""
    gf = f.gradient(v) if isinstance(f, PolyFn) else PolyFn(f).gradient(v)
    gg = g.gradient(v) if isinstance(g, PolyFn) else PolyFn(g).gradient(v)
    return float(-gf @ np.linalg.solve(rep.j, gg))

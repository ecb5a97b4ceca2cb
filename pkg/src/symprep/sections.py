"""Moment-map sections over a*: exact torus sections, the affine one-line
reduction Phi, and the recursive section through the local-structure chain.

The construction mirrors the reduction trace: at the terminal stage the
character pairs are put into symplectically normalized coordinate pairs and
solved exactly; each non-terminal stage contributes one hyperbolic pair
(v0, v0^-) whose coefficient is fixed so that the invariant image picks up
exactly the prescribed component along the step's character direction.  All
section values are exact rational vectors; invariant-moment-map residuals are
checked in floating point on top.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DomainError,
    InternalConsistencyError,
    StageNotRealizable,
)
from .classify import WeightStatus, weight_status
from .linalg import (
    canon,
    cvec,
    echelon_basis,
    in_span,
    is_zero_vec,
    lin_solve,
    nullspace,
    rref,
    same_span,
    vdot,
)
from .numeric import (
    _exact_matvec,
    _omega_row,
    chevalley_target,
    dual_lowest_vector,
    inv_moment_eval,
)
from .reduction import run_reduction
from .rootdata import positive_roots


def _diag_action_exact(labels, functional, p):
    return cvec(tuple(vdot(w, functional) * Fraction(x) for w, x in zip(labels, p)))


def torus_moment_exact(rep, p):
    """The t*-valued moment of p as an ambient vector.  Exact.

    Requires the model's datum to be freshly built, so that the j-th ambient
    coordinate is the pairing against the j-th simple coroot."""
    datum = rep.datum
    for i, c in enumerate(datum.simple_coroots):
        if any(x != (1 if k == i else 0) for k, x in enumerate(c)):
            raise InternalConsistencyError("torus moment needs a fresh datum")
    vec = [0] * datum.ambient_dim
    for j in range(datum.ambient_dim):
        e = tuple(1 if k == j else 0 for k in range(datum.ambient_dim))
        hp = _diag_action_exact(rep.weight_labels, e, p)
        vec[j] = canon(Fraction(rep.omega_exact(hp, p)) / 2)
    return cvec(vec)


@dataclass(frozen=True)
class CharPair:
    """A hyperbolic pair of character lines with omega(x, y) = 1."""

    x_vec: tuple
    y_vec: tuple
    chi: tuple


def _plan_pairs(chis, killed, hints):
    """Order the pairs the way the inductive construction walks them:
    critical characters first (each with a chart choice), then a greedy basis
    of the rest, then dependent pairs."""
    remaining = list(range(len(chis)))
    killed_rows = [cvec(k) for k in killed]
    plan = []
    while True:
        crit = None
        for i in remaining:
            if is_zero_vec(chis[i]):
                continue
            others = [chis[j] for j in remaining if j != i] + killed_rows
            if in_span(others, chis[i]) is None:
                crit = i
                break
        if crit is None:
            break
        chart = hints.get(crit, "x") if hints else "x"
        if chart not in ("x", "y"):
            raise DomainError(f"chart hint must be 'x' or 'y', got {chart!r}")
        plan.append((crit, f"critical-{chart}"))
        remaining.remove(crit)
    span_rows = list(killed_rows)
    for i in remaining:
        if not is_zero_vec(chis[i]) and in_span(span_rows, chis[i]) is None:
            span_rows.append(chis[i])
            plan.append((i, "basis"))
        else:
            plan.append((i, "dependent"))
    return plan


def _solve_coefficient(target, lead, rest):
    """Unique coefficient of lead in target modulo span(rest); None when the
    target is outside span(lead) + span(rest)."""
    cols = [lead] + list(rest)
    sol = in_span(cols, target)
    if sol is None:
        return None
    return sol[0]


def _apply_plan(chis, killed, plan, a):
    """Coordinates (x_i, y_i) with sum x_i y_i chi_i = a modulo span(killed)."""
    killed_rows = [cvec(k) for k in killed]
    a_rem = cvec(a)
    coords = {}
    peeled = []
    for i, mode in plan:
        if not mode.startswith("critical"):
            continue
        rest = [chis[j] for j, _ in plan if j != i and j not in peeled]
        t = _solve_coefficient(a_rem, chis[i], rest + killed_rows)
        if t is None:
            raise DomainError("target outside the span of the section characters")
        coords[i] = (t, 1) if mode == "critical-y" else (1, t)
        a_rem = cvec(tuple(x - t * c for x, c in zip(a_rem, chis[i])))
        peeled.append(i)
    basis_idx = [i for i, mode in plan if mode == "basis"]
    cols = [chis[i] for i in basis_idx] + killed_rows
    sol = in_span(cols, a_rem) if cols else (() if is_zero_vec(a_rem) else None)
    if sol is None:
        raise DomainError("target outside the span of the section characters")
    for k, i in enumerate(basis_idx):
        coords[i] = (1, sol[k])
    for i, mode in plan:
        if mode == "dependent":
            coords[i] = (0, 0)
    return coords


@dataclass
class TorusSection:
    pairs: tuple
    killed: tuple
    plan: tuple
    a_star_basis: tuple
    dim: int

    def apply(self, a):
        """Exact section value at a; requires a in the reachable span."""
        coords = _apply_plan([p.chi for p in self.pairs], self.killed, self.plan, a)
        out = [Fraction(0)] * self.dim
        for i, pair in enumerate(self.pairs):
            x, y = coords[i]
            for k in range(self.dim):
                out[k] += Fraction(x) * Fraction(pair.x_vec[k])
                out[k] += Fraction(y) * Fraction(pair.y_vec[k])
        return cvec(out)


def _character_pairs_from_columns(rep, columns):
    """Hyperbolic pair structure on a span of character columns, exactly.

    Nonzero weights are matched with their negatives through the inverse of
    the pairing matrix; zero-weight columns go through a symplectic
    Gram-Schmidt."""
    by_weight = {}
    for col in columns:
        w = _column_weight(rep, col)
        by_weight.setdefault(w, []).append(col)
    pairs = []
    seen = set()
    for w in sorted(by_weight, reverse=True):
        if w in seen:
            continue
        neg = cvec(tuple(-x for x in w))
        if neg == w:
            pairs.extend(_zero_weight_pairs(rep, by_weight[w]))
            seen.add(w)
            continue
        if neg not in by_weight or len(by_weight[neg]) != len(by_weight[w]):
            raise InternalConsistencyError("unmatched character columns")
        cp, cm = by_weight[w], by_weight[neg]
        k = len(cp)
        pmat = [[rep.omega_exact(cp[a], cm[b]) for b in range(k)] for a in range(k)]
        pinv = _invert_exact(pmat)
        if pinv is None:
            raise InternalConsistencyError("degenerate character pairing block")
        for q in range(k):
            y = [Fraction(0)] * rep.dim
            for b in range(k):
                for t in range(rep.dim):
                    y[t] += Fraction(pinv[b][q]) * Fraction(cm[b][t])
            pairs.append(CharPair(cvec(cp[q]), cvec(y), w))
        seen.update({w, neg})
    return pairs


def _column_weight(rep, col):
    w = None
    for a, x in enumerate(col):
        if x:
            if w is None:
                w = rep.weight_labels[a]
            elif w != rep.weight_labels[a]:
                raise InternalConsistencyError("column is not weight homogeneous")
    if w is None:
        raise InternalConsistencyError("zero column")
    return w


def _zero_weight_pairs(rep, cols):
    cols = [cvec(c) for c in cols]
    pairs = []
    while cols:
        u = cols[0]
        rest = cols[1:]
        partner = next(
            (i for i, v in enumerate(rest) if rep.omega_exact(u, v) != 0), None
        )
        if partner is None:
            raise InternalConsistencyError("isotropic zero-weight character block")
        scale = rep.omega_exact(u, rest[partner])
        v = cvec(tuple(canon(Fraction(x) / scale) for x in rest[partner]))
        others = [w for i, w in enumerate(rest) if i != partner]
        projected = []
        for w in others:
            cu = rep.omega_exact(w, u)
            cv = rep.omega_exact(w, v)
            projected.append(
                cvec(
                    tuple(
                        Fraction(wx) + cu * Fraction(vx) - cv * Fraction(ux)
                        for wx, vx, ux in zip(w, v, u)
                    )
                )
            )
        pairs.append(CharPair(u, v, cvec((0,) * rep.datum.ambient_dim)))
        cols = projected
    return pairs


def _invert_exact(m):
    n = len(m)
    aug = [list(map(Fraction, m[i])) + [Fraction(1 if j == i else 0) for j in range(n)]
           for i in range(n)]
    red, piv = rref(aug)
    if piv != list(range(n)):
        return None
    return [row[n:] for row in red]


def torus_section(rep, component_hint=None):
    """Exact section of the torus moment map with m(sigma(a)) = a on the span
    of the characters; component_hint selects the chart at critical weights."""
    if rep.datum.rank != 0:
        from .errors import NotSupported

        raise NotSupported(
            f"torus section requires a torus module; datum is "
            f"{rep.datum.type_string()}"
        )
    cols = [
        cvec(tuple(1 if k == a else 0 for k in range(rep.dim)))
        for a in range(rep.dim)
    ]
    pairs = _character_pairs_from_columns(rep, cols)
    hints = _normalize_hints(component_hint, len(pairs))
    plan = _plan_pairs([p.chi for p in pairs], (), hints)
    basis = echelon_basis([p.chi for p in pairs if not is_zero_vec(p.chi)])
    return TorusSection(
        pairs=tuple(pairs),
        killed=(),
        plan=tuple(plan),
        a_star_basis=tuple(basis),
        dim=rep.dim,
    )


def _normalize_hints(component_hint, npairs):
    if component_hint is None:
        return {}
    if isinstance(component_hint, str):
        return {i: component_hint for i in range(npairs)}
    return dict(component_hint)


def central_element_for(datum, chi, killed=()):
    """Coweight functional vanishing on the datum's roots and on previously
    peeled characters, pairing to one with chi."""
    rows = [cvec(r) for r in datum.simple_roots]
    rows += [cvec(k) for k in killed]
    rows.append(cvec(chi))
    rhs = [0] * (len(rows) - 1) + [1]
    sol = lin_solve(rows, rhs)
    if sol is None:
        raise InternalConsistencyError(
            f"no central functional separates {chi} from the peeled characters"
        )
    return sol


def char_reduction_phi(rep, v0_char, t, y, v, v0m=None):
    """Affine change of chart along a one-dimensional submodule: returns
    Phi(v, t, y) with the character component of the moment value equal to
    t*y and the complementary component equal to that of v.

    v must be exactly omega-orthogonal to the v0/v0^- pair; y must be nonzero."""
    y = canon(y)
    t = canon(t)
    if y == 0:
        raise DomainError("y must be nonzero")
    v0 = cvec(v0_char)
    chi = _column_weight_tolerant(rep, v0)
    if v0m is None:
        v0m = dual_lowest_vector(rep, chi, v0)
    v = cvec(v)
    if rep.omega_exact(v, v0) != 0 or rep.omega_exact(v, v0m) != 0:
        raise DomainError("v must lie in the omega-complement of the pair")
    if is_zero_vec(chi):
        x = t
    else:
        xi_c = central_element_for(rep.datum, chi)
        fv = canon(Fraction(rep.omega_exact(
            _diag_action_exact(rep.weight_labels, xi_c, v), v)) / 2)
        # omega(v0m, v0) = 1 makes the pair contribute -x*y to the chi-part;
        # the character component of the image is t*y
        x = canon((Fraction(fv) - Fraction(t) * Fraction(y)) / Fraction(y))
    out = [
        Fraction(vv) + Fraction(x) * Fraction(a) + Fraction(y) * Fraction(b)
        for vv, a, b in zip(v, v0, v0m)
    ]
    return cvec(out), cvec(v0m)


def _column_weight_tolerant(rep, col):
    return _column_weight(rep, col)


@dataclass
class SectionLayer:
    v0: tuple
    v0m: tuple
    chi: tuple
    xi_c: tuple


@dataclass
class SectionMap:
    rep: object
    layers: tuple          # outermost first
    terminal_pairs: tuple
    terminal_plan: tuple
    killed: tuple          # chi per layer, outermost first
    a_star_basis: tuple

    def apply(self, a):
        """Exact section value with t-moment equal to a; raises DomainError
        when a is outside the span of a*."""
        a = cvec(a)
        coords = _apply_plan(
            [p.chi for p in self.terminal_pairs], self.killed,
            self.terminal_plan, a,
        )
        p = [Fraction(0)] * self.rep.dim
        for i, pair in enumerate(self.terminal_pairs):
            x, y = coords[i]
            for k in range(self.rep.dim):
                p[k] += Fraction(x) * Fraction(pair.x_vec[k])
                p[k] += Fraction(y) * Fraction(pair.y_vec[k])
        p = cvec(p)
        for layer in reversed(self.layers):
            t = vdot(a, layer.xi_c)
            fv = canon(Fraction(self.rep.omega_exact(
                _diag_action_exact(self.rep.weight_labels, layer.xi_c, p), p)) / 2)
            x = canon(Fraction(fv) - Fraction(t))  # y = 1
            p = cvec(
                tuple(
                    Fraction(pv) + Fraction(x) * Fraction(a0) + Fraction(b0)
                    for pv, a0, b0 in zip(p, layer.v0, layer.v0m)
                )
            )
        m = torus_moment_exact(self.rep, p)
        if m != a:
            raise InternalConsistencyError(
                f"section misses its target: m_t = {m}, wanted {a}"
            )
        return p


def build_section(rep, component_hint=None):
    """Section of the invariant moment map along the reduction chain of the
    model's module.  Exact; validated against the combinatorial a*."""
    trace, td = run_reduction(rep.spec)
    datum = rep.datum
    n = rep.dim
    cols = [cvec(tuple(1 if k == a else 0 for k in range(n))) for a in range(n)]
    killed = []
    layers = []
    current = rep.spec
    for step in trace:
        chi = step.chosen_chi
        v0 = _hw_vector_in_columns(rep, cols, current, chi)
        v0m = _lowest_dual_in_columns(rep, cols, current, chi, v0)
        xi_c = central_element_for(step.levi, chi, killed)
        rows = []
        for r in step.delta_u:
            coords = _root_coords(rep, r)
            fv = _exact_matvec(rep.lie_matrix_exact(("f", coords)), v0)
            ev = _exact_matvec(rep.lie_matrix_exact(("e", coords)), v0m)
            rows.append(_omega_row(rep, fv))
            rows.append(_omega_row(rep, ev))
        s_cols = _cut_columns(rep, cols, rows)
        for v in (v0, v0m):
            if any(vdot(row, v) != 0 for row in rows):
                raise StageNotRealizable(
                    "chosen highest weight vector escapes its own slice"
                )
        sbar_rows = [_omega_row(rep, v0), _omega_row(rep, v0m)]
        cols = _cut_columns(rep, s_cols, sbar_rows)
        layers.append(SectionLayer(v0=v0, v0m=v0m, chi=chi, xi_c=xi_c))
        killed.append(chi)
        current = step.s_spec
    # terminal stage: keep the character columns, zero the symplectic blocks
    term_datum = td.terminal_group
    char_cols = []
    for col in cols:
        w = _column_weight(rep, col)
        if all(vdot(w, c) == 0 for c in term_datum.simple_coroots):
            char_cols.append(col)
    pairs = _character_pairs_from_columns(rep, char_cols)
    hints = _normalize_hints(component_hint, len(pairs))
    plan = _plan_pairs([p.chi for p in pairs], killed, hints)
    span_rows = [p.chi for p in pairs if not is_zero_vec(p.chi)] + killed
    basis = echelon_basis(span_rows)
    if not same_span(list(basis), list(td.a_star_basis)):
        raise InternalConsistencyError(
            "section characters span a different a* than the reduction"
        )
    return SectionMap(
        rep=rep,
        layers=tuple(layers),
        terminal_pairs=tuple(pairs),
        terminal_plan=tuple(plan),
        killed=tuple(killed),
        a_star_basis=tuple(basis),
    )


def _root_coords(rep, root):
    if not hasattr(rep, "_root_by_vec"):
        object.__setattr__(
            rep,
            "_root_by_vec",
            {r.vec: r.coords for r in positive_roots(rep.datum)},
        )
    return rep._root_by_vec[root.vec]


def _cut_columns(rep, cols, rows):
    """Intersect the span of weight-homogeneous columns with the joint kernel
    of the functionals, weight space by weight space."""
    if not rows:
        return list(cols)
    by_weight = {}
    for col in cols:
        by_weight.setdefault(_column_weight(rep, col), []).append(col)
    out = []
    for w in sorted(by_weight):
        group = by_weight[w]
        cmat = [[vdot(row, col) for col in group] for row in rows]
        if all(all(x == 0 for x in r) for r in cmat):
            out.extend(group)
            continue
        for coeffs in nullspace(cmat, len(group)):
            vec = [Fraction(0)] * rep.dim
            for c, col in zip(coeffs, group):
                for k in range(rep.dim):
                    vec[k] += Fraction(c) * Fraction(col[k])
            out.append(cvec(vec))
    return out


def _hw_vector_in_columns(rep, cols, spec, chi):
    """First exact highest weight vector of the given weight inside the span
    of the columns, with respect to the current datum."""
    datum = spec.datum
    chi = cvec(chi)
    group = [c for c in cols if _column_weight(rep, c) == chi]
    if not group:
        raise StageNotRealizable(f"no columns of weight {chi} at this stage")
    cmat = []
    for sr in datum.simple_roots:
        coords = _root_coords(rep, _find_root(rep, sr))
        mat = rep.lie_matrix_exact(("e", coords))
        imgs = [_exact_matvec(mat, col) for col in group]
        for a in range(rep.dim):
            row = [Fraction(img[a]) for img in imgs]
            if any(row):
                cmat.append(cvec(row))
    space = nullspace(cmat, len(group)) if cmat else [
        cvec(tuple(1 if i == j else 0 for j in range(len(group))))
        for i in range(len(group))
    ]
    if not space:
        raise StageNotRealizable(f"no highest weight vector of weight {chi}")
    coeffs = space[0]
    vec = [Fraction(0)] * rep.dim
    for c, col in zip(coeffs, group):
        for k in range(rep.dim):
            vec[k] += Fraction(c) * Fraction(col[k])
    return cvec(vec)


def _lowest_dual_in_columns(rep, cols, spec, chi, v0):
    datum = spec.datum
    neg = cvec(tuple(-x for x in chi))
    group = [c for c in cols if _column_weight(rep, c) == neg]
    if not group:
        raise StageNotRealizable(f"no columns of weight {neg} at this stage")
    cmat = []
    for sr in datum.simple_roots:
        coords = _root_coords(rep, _find_root(rep, sr))
        mat = rep.lie_matrix_exact(("f", coords))
        imgs = [_exact_matvec(mat, col) for col in group]
        for a in range(rep.dim):
            row = [Fraction(img[a]) for img in imgs]
            if any(row):
                cmat.append(cvec(row))
    space = nullspace(cmat, len(group)) if cmat else [
        cvec(tuple(1 if i == j else 0 for j in range(len(group))))
        for i in range(len(group))
    ]
    cands = []
    for coeffs in space:
        vec = [Fraction(0)] * rep.dim
        for c, col in zip(coeffs, group):
            for k in range(rep.dim):
                vec[k] += Fraction(c) * Fraction(col[k])
        cands.append(cvec(vec))
    pairings = [rep.omega_exact(c, v0) for c in cands]
    norm = sum(Fraction(p) ** 2 for p in pairings)
    if norm == 0:
        raise StageNotRealizable("lowest-weight space pairs to zero with v0")
    out = [Fraction(0)] * rep.dim
    for p, cand in zip(pairings, cands):
        w = Fraction(p) / norm
        for k in range(rep.dim):
            out[k] += w * Fraction(cand[k])
    v0m = cvec(out)
    if rep.omega_exact(v0m, v0) != 1:
        raise InternalConsistencyError("hyperbolic pair normalization failed")
    return v0m


def _find_root(rep, vec):
    for r in positive_roots(rep.datum):
        if r.vec == cvec(vec):
            return r
    raise InternalConsistencyError(f"{vec} is not a positive root of the model")


@dataclass
class SectionReport:
    residual_max: float
    zero_fiber_ok: bool
    samples: int
    a_star_basis: tuple


def verify_section(rep, section=None, samples=20, seed=0):
    """Sample rational points of a*, evaluate the section exactly, and compare
    the invariant image against the embedded target in floating point."""
    if section is None:
        section = build_section(rep)
    rng = np.random.default_rng(seed)
    basis = section.a_star_basis
    resid = 0.0
    for _ in range(samples):
        if basis:
            coeffs = [
                Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4)))
                for _ in basis
            ]
            a = cvec(
                tuple(
                    sum(c * Fraction(b[k]) for c, b in zip(coeffs, basis))
                    for k in range(rep.datum.ambient_dim)
                )
            )
        else:
            a = cvec((0,) * rep.datum.ambient_dim)
        p = section.apply(a)
        pf = np.array([float(x) for x in p])
        resid = max(
            resid,
            float(np.max(np.abs(inv_moment_eval(rep, pf) - chevalley_target(rep, a))))
            if len(inv_moment_eval(rep, pf))
            else 0.0,
        )
    zero = cvec((0,) * rep.datum.ambient_dim)
    p0 = section.apply(zero)
    pf0 = np.array([float(x) for x in p0])
    iv = inv_moment_eval(rep, pf0)
    zero_ok = bool(np.all(np.abs(iv) <= 1e-8)) if iv.size else True
    return SectionReport(
        residual_max=resid,
        zero_fiber_ok=zero_ok,
        samples=samples,
        a_star_basis=basis,
    )


# -- auxiliary one-parameter subgroup ----------------------------------------

_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59,
           61, 67, 71, 73, 79, 83, 89, 97]


def rho_psg(datum, spec):
    """Rational coweight with positive pairing against every positive root,
    separating terminal from non-terminal highest weights and separating all
    weights of the module pairwise.  Deterministic perturbation search."""
    if datum.rank:
        base = lin_solve([cvec(r) for r in datum.simple_roots],
                         [1] * datum.rank)
        if base is None:
            raise InternalConsistencyError("independent simple roots expected")
    else:
        base = cvec((0,) * datum.ambient_dim)
    dim = datum.ambient_dim
    statuses = {w: weight_status(spec, w) for w, _ in spec.summands}
    terminal_hw = [w for w, s in statuses.items() if s is not WeightStatus.NON_TERMINAL]
    nonterminal_hw = [w for w, s in statuses.items() if s is WeightStatus.NON_TERMINAL]
    weights = sorted(spec.weight_multiset())
    pos = positive_roots(datum)

    def ok(rho):
        if any(vdot(r.vec, rho) <= 0 for r in pos):
            return False
        for t in terminal_hw:
            for nt in nonterminal_hw:
                if not vdot(t, rho) < vdot(nt, rho):
                    return False
        for i in range(len(weights)):
            for j in range(i + 1, len(weights)):
                if vdot(weights[i], rho) == vdot(weights[j], rho):
                    return False
        return True

    for p in _PRIMES:
        cand = cvec(
            tuple(Fraction(base[k]) + Fraction(k + 1, p) for k in range(dim))
        )
        if ok(cand):
            return cand
    for p in _PRIMES:
        cand = cvec(
            tuple(
                Fraction(base[k]) + Fraction(1, p ** (k + 1)) for k in range(dim)
            )
        )
        if ok(cand):
            return cand
    raise InternalConsistencyError("no separating one-parameter subgroup found")

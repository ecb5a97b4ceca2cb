"""Iterated symplectic local-structure reduction and the derived invariants.

Each step removes the weight strings tied to a chosen non-terminal highest
weight, passes to the Levi centralizing it, and re-validates.  The terminal
stage yields the character pairs spanning a*, the symplectic factor sizes, and
from there the rank, complexity, Gamma = N(a*)/C(a*), the little Weyl group
(by Hilbert/Molien matching when multiplicity free), and the generic isotropy
shape.
"""

from dataclasses import dataclass
from fractions import Fraction

from .classify import WeightStatus, terminal_decomposition, weight_status
from .errors import (
    InternalConsistencyError,
    NoNonTerminalWeight,
    NotACharacter,
    SymprepError,
    WeylCapExceeded,
)
from .linalg import (
    canon,
    cvec,
    echelon_basis,
    identity,
    mat_mul,
    poly_det,
    rank,
    series_inv,
    vdot,
    vsub,
)
from .reps import (
    DEFAULT_SYM_DEGREE_BUDGET,
    decompose_weights,
    invariant_dims,
    validate_symplectic_spec,
    weight_key,
)
from .rootdata import (
    DEFAULT_WEYL_CAP,
    enumerate_weyl,
    levi_subdatum,
    positive_roots,
    subspace_normalizer,
    subsystem_datum,
)

DEFAULT_HILBERT_DEGREE = 8


@dataclass(frozen=True)
class ReductionStep:
    chosen_chi: tuple
    delta_u: tuple          # positive roots with <chi, alpha^vee> > 0
    levi: object            # RootDatum of M
    s_weights: tuple        # frozen weight multiset of S
    s_summands: tuple       # decomposition of S under M
    s_spec: object          # validated SympRepSpec for (S, M)


@dataclass(frozen=True)
class TerminalData:
    terminal_spec: object
    terminal_group: object
    character_pairs: tuple
    sp_factor_sizes: tuple
    a_star_basis: tuple
    a_rank: int
    c: int


def choose_nonterminal_weight(spec):
    """Deterministic choice: maximal rho^vee-height, lexicographic tie-break."""
    cands = [
        w for w, _ in spec.summands
        if weight_status(spec, w) is WeightStatus.NON_TERMINAL
    ]
    if not cands:
        raise NoNonTerminalWeight("module is terminal")
    return max(cands, key=lambda w: weight_key(spec.datum, w))


def reduce_step(spec, chi):
    """One local-structure step (V, G) -> (S, M) for the chosen weight."""
    datum = spec.datum
    chi = cvec(chi)
    if weight_status(spec, chi) is not WeightStatus.NON_TERMINAL:
        raise SymprepError(f"{chi} is not a non-terminal weight of the module")
    delta_u = tuple(
        r for r in positive_roots(datum) if vdot(chi, r.coroot_vec) > 0
    )
    levi_idx = [
        i for i in range(datum.rank) if vdot(chi, datum.simple_coroots[i]) == 0
    ]
    levi = levi_subdatum(datum, levi_idx)
    v_weights = spec.weight_multiset()
    s_weights = dict(v_weights)
    for r in delta_u:
        for removed in (cvec(vsub(chi, r.vec)), cvec(vsub(r.vec, chi))):
            newm = s_weights.get(removed, 0) - 1
            if newm < 0:
                raise InternalConsistencyError(
                    f"weight {removed} missing while carving out S"
                )
            if newm:
                s_weights[removed] = newm
            else:
                del s_weights[removed]
    if sum(s_weights.values()) != sum(v_weights.values()) - 2 * len(delta_u):
        raise InternalConsistencyError("dim S != dim V - 2|Delta_u|")
    for w, m in s_weights.items():
        if s_weights.get(cvec(tuple(-x for x in w)), 0) != m:
            raise InternalConsistencyError("S weights not stable under negation")
    try:
        s_summands = decompose_weights(levi, s_weights)
    except NotACharacter as exc:
        raise InternalConsistencyError(f"S is not an M-character: {exc}") from exc
    s_spec = validate_symplectic_spec(levi, s_summands)
    step = ReductionStep(
        chosen_chi=chi,
        delta_u=delta_u,
        levi=levi,
        s_weights=tuple(sorted(s_weights.items())),
        s_summands=tuple(s_summands),
        s_spec=s_spec,
    )
    return step, s_spec


def run_reduction(spec, first_choice=None):
    """Iterate reduce_step to a terminal module; returns (trace, TerminalData).

    first_choice overrides the weight selection at the first step only (used
    by the permanence checks)."""
    trace = []
    current = spec
    while True:
        verdict = terminal_decomposition(current)
        if verdict.terminal:
            break
        if first_choice is not None and not trace:
            chi = cvec(first_choice)
            if weight_status(current, chi) is not WeightStatus.NON_TERMINAL:
                raise SymprepError(f"{chi} is not an admissible first choice")
        else:
            chi = choose_nonterminal_weight(current)
        step, current = reduce_step(current, chi)
        trace.append(step)
    pairs = verdict.character_pairs
    basis = echelon_basis(list(pairs)) if pairs else []
    a_rank = len(basis)
    c = len(pairs) - a_rank
    if c < 0:
        raise InternalConsistencyError("negative complexity")
    td = TerminalData(
        terminal_spec=current,
        terminal_group=current.datum,
        character_pairs=pairs,
        sp_factor_sizes=verdict.sp_factor_sizes,
        a_star_basis=tuple(basis),
        a_rank=a_rank,
        c=c,
    )
    return trace, td


def rank_complexity(td):
    rk = td.a_rank
    c = td.c
    if rk + 2 * c != 2 * len(td.character_pairs) - td.a_rank:
        raise InternalConsistencyError("rank/complexity bookkeeping mismatch")
    return rk, c


def centralizer_levi(datum, a_star_basis, weyl_cap=DEFAULT_WEYL_CAP,
                     expect=None):
    """Levi whose roots pair to zero with every vector of a*; optionally
    asserted W_G-conjugate to an expected subdatum."""
    pos = [
        r for r in positive_roots(datum)
        if all(vdot(b, r.coroot_vec) == 0 for b in a_star_basis)
    ]
    levi = subsystem_datum(datum, pos)
    if expect is not None:
        mine = {r.vec for r in positive_roots(levi)}
        theirs = {r.vec for r in positive_roots(expect)}
        ok = False
        for w in enumerate_weyl(datum, weyl_cap):
            if {cvec(w.apply(v)) for v in theirs} == mine:
                ok = True
                break
        if not ok:
            raise InternalConsistencyError(
                "centralizer Levi is not conjugate to the terminal group"
            )
    return levi


def compute_gamma(datum, a_star_basis, weyl_cap=DEFAULT_WEYL_CAP):
    return subspace_normalizer(datum, list(a_star_basis), weyl_cap)


# -- little Weyl group via Hilbert/Molien matching ---------------------------

def _group_closure(mats, dim):
    ident = identity(dim)
    elems = {ident}
    frontier = [ident]
    gens = list(mats)
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = mat_mul(m, g)
                if p not in elems:
                    elems.add(p)
                    nxt.append(p)
        frontier = nxt
    return frozenset(elems)


def reflection_subgroups(gamma):
    """All subgroups generated by subsets of the reflections of Gamma."""
    k = len(gamma.a_star_basis)
    refl = [gamma.gamma_matrices[i] for i in gamma.reflection_indices]
    subs = {_group_closure([], k)}
    # closure of each subset; the lattice is tiny so plain powerset is fine
    from itertools import combinations

    for size in range(1, len(refl) + 1):
        for combo in combinations(refl, size):
            subs.add(_group_closure(combo, k))
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


def molien_series(mats, max_degree):
    """Molien series of a matrix group, exact, as coefficients 0..max_degree."""
    mats = list(mats)
    k = len(mats[0]) if mats and mats[0] else 0
    if k == 0:
        return [1] + [0] * max_degree
    total = [Fraction(0)] * (max_degree + 1)
    for g in mats:
        entry = [
            [
                [1 if i == j else 0, canon(-g[i][j])]
                for j in range(k)
            ]
            for i in range(k)
        ]
        det = poly_det(entry, trunc=max_degree)
        inv = series_inv(det, max_degree)
        for d in range(max_degree + 1):
            total[d] += Fraction(inv[d]) if d < len(inv) else 0
    out = []
    for d in range(max_degree + 1):
        v = total[d] / len(mats)
        if v.denominator != 1 or v < 0:
            raise InternalConsistencyError("Molien series is not integral")
        out.append(int(v))
    return out


def reflection_degrees(mats):
    """Fundamental invariant degrees of a finite reflection group."""
    k = len(mats[0]) if mats and mats[0] else 0
    if k == 0:
        return ()
    nrefl = sum(
        1 for g in mats
        if rank([vsub(row, identity(k)[i]) for i, row in enumerate(g)]) == 1
    )
    bound = nrefl + k
    series = molien_series(mats, bound)
    poly = series_inv(series, bound)
    # peel factors (1 - t^d); the product has k of them
    degrees = []
    work = [Fraction(x) for x in poly]
    for _ in range(k):
        d = next((i for i in range(1, len(work)) if work[i] != 0), None)
        if d is None or work[d] > 0:
            raise InternalConsistencyError("Molien series is not of reflection type")
        # divide by (1 - t^d); repeated degrees peel one factor at a time
        quot = [Fraction(0)] * (len(work) - d)
        for i in range(len(quot)):
            quot[i] = work[i] + (quot[i - d] if i >= d else 0)
        work = quot
        degrees.append(d)
    if any(x != (1 if i == 0 else 0) for i, x in enumerate(work)):
        raise InternalConsistencyError("reflection degree extraction left a remainder")
    return tuple(sorted(degrees))


@dataclass(frozen=True)
class LittleWeylResult:
    status: str            # 'exact' | 'unknown' | 'ambiguous'
    order: int = None
    degrees: tuple = None
    matrices: tuple = None
    candidates: tuple = None   # orders of reflection subgroups considered
    matched_degree: int = None


def determine_little_weyl(
    spec,
    td,
    gamma,
    mf,
    hilbert_degree=DEFAULT_HILBERT_DEGREE,
    degree_budget=DEFAULT_SYM_DEGREE_BUDGET,
):
    """Identify W_V among reflection subgroups of Gamma by matching the
    invariant Hilbert series against Molien series in squared degrees.

    Only valid when the module is multiplicity free; otherwise the result is
    Unknown with the candidate subgroups listed."""
    subs = reflection_subgroups(gamma)
    if not mf:
        return LittleWeylResult(
            status="unknown",
            candidates=tuple(sorted(len(s) for s in subs)),
        )
    degree = min(hilbert_degree, degree_budget)
    if degree % 2:
        degree -= 1
    while True:
        hilb = invariant_dims(spec, degree, degree_budget=degree_budget)
        matches = []
        for sub in subs:
            mol = molien_series(sorted(sub), degree // 2)
            ok = True
            for d in range(degree + 1):
                want = mol[d // 2] if d % 2 == 0 else 0
                if want != hilb[d]:
                    ok = False
                    break
            if ok:
                matches.append(sub)
        if len(matches) == 1:
            mats = sorted(matches[0])
            return LittleWeylResult(
                status="exact",
                order=len(mats),
                degrees=reflection_degrees(mats),
                matrices=tuple(mats),
                matched_degree=degree,
            )
        if not matches:
            raise InternalConsistencyError(
                "no reflection subgroup of Gamma matches the Hilbert series"
            )
        if degree + 2 > degree_budget:
            return LittleWeylResult(
                status="ambiguous",
                candidates=tuple(sorted(len(m) for m in matches)),
                matched_degree=degree,
            )
        degree += 2


@dataclass(frozen=True)
class IsotropyShape:
    dim_h: int
    sp_parts: tuple
    a_rank: int
    reductive_constraint: str


def isotropy_shape(datum, td, levi):
    """Dimension and block shape of the generic isotropy group."""
    dim_l = levi.dim_group()
    dim_h = dim_l - td.a_rank - 2 * sum(td.sp_factor_sizes)
    if dim_h < 0:
        raise InternalConsistencyError("negative isotropy dimension")
    return IsotropyShape(
        dim_h=dim_h,
        sp_parts=tuple(f"Sp_{2 * m - 1}" for m in td.sp_factor_sizes),
        a_rank=td.a_rank,
        reductive_constraint="(L,L) <= H <= L with L/H = A",
    )


@dataclass(frozen=True)
class AnalysisReport:
    spec: object
    rk_s: int
    c_s: int
    mf: bool
    a_star_basis: tuple
    a_rank: int
    sp_factor_sizes: tuple
    levi: object
    gamma: object
    little_weyl: object
    isotropy: object
    trace: tuple
    terminal: object


def analyze(
    spec,
    weyl_cap=DEFAULT_WEYL_CAP,
    hilbert_degree=DEFAULT_HILBERT_DEGREE,
    degree_budget=DEFAULT_SYM_DEGREE_BUDGET,
):
    """Full structural analysis of a validated symplectic module."""
    order = spec.datum.weyl_order()
    if order > weyl_cap:
        raise WeylCapExceeded(order, weyl_cap)
    trace, td = run_reduction(spec)
    rk, c = rank_complexity(td)
    mf = c == 0
    gamma = compute_gamma(spec.datum, td.a_star_basis, weyl_cap)
    levi = centralizer_levi(
        spec.datum, td.a_star_basis, weyl_cap, expect=td.terminal_group
    )
    lw = determine_little_weyl(
        spec, td, gamma, mf, hilbert_degree, degree_budget
    )
    if lw.status == "exact" and len(gamma.gamma_matrices) % lw.order != 0:
        raise InternalConsistencyError("|W_V| does not divide |Gamma|")
    iso = isotropy_shape(spec.datum, td, levi)
    return AnalysisReport(
        spec=spec,
        rk_s=rk,
        c_s=c,
        mf=mf,
        a_star_basis=td.a_star_basis,
        a_rank=td.a_rank,
        sp_factor_sizes=td.sp_factor_sizes,
        levi=levi,
        gamma=gamma,
        little_weyl=lw,
        isotropy=iso,
        trace=tuple(trace),
        terminal=td,
    )

"""Highest-weight modules as exact weight multisets.

Weight multiplicities come from Freudenthal's recursion, duality types from
the parity of <lambda, 2 rho^vee>, and invariant dimensions from symmetric
power multisets combined with the Weyl alternation over wrho - rho.  All
arithmetic is exact.
"""

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import (
    BudgetExceeded,
    InternalConsistencyError,
    NotACharacter,
    NotDominant,
    NotSelfDual,
    OddOrthogonalMultiplicity,
)
from .linalg import canon, cvec, vdot
from .rootdata import (
    DEFAULT_WEYL_CAP,
    dominant_representative,
    dual_weight,
    enumerate_weyl,
    height,
    positive_roots,
    rho_strict,
    rho_vee,
    weyl_orbit,
)

DEFAULT_DIM_CAP = 5000
DEFAULT_SYM_DIM_BUDGET = 16
DEFAULT_SYM_DEGREE_BUDGET = 10


def weight_key(datum, w):
    """Sort key: rho^vee-height first, then lexicographic on coordinates."""
    return (height(datum, w), tuple(Fraction(x) for x in w))


def weyl_dim(datum, lam):
    """Weyl dimension formula; exact integer."""
    lam = cvec(lam)
    if not datum.is_dominant(lam):
        raise NotDominant(lam, f"{lam} is not dominant")
    num = Fraction(1)
    for r in positive_roots(datum):
        coheight = sum(r.coroot_coords)  # <rho, beta^vee>
        top = vdot(lam, r.coroot_vec) + coheight
        num *= Fraction(top, coheight)
    assert num.denominator == 1
    return int(num)


@lru_cache(maxsize=None)
def _freudenthal_cached(datum, lam, dim_cap):
    dim = weyl_dim(datum, lam)
    if dim > dim_cap:
        raise BudgetExceeded(
            f"irrep dimension {dim} exceeds cap {dim_cap} for weight {lam}"
        )
    k = datum.rank
    if k == 0:
        return ((lam, 1),)
    pos = positive_roots(datum)
    rho = rho_strict(datum)
    rvee = rho_vee(datum)
    hmax = int(vdot(lam, rvee))  # sum of root offsets is an integer <= this
    # all dominant mu = lam - sum n_i alpha_i with sum n_i <= height bound
    dominants = {}  # weight vec -> (offset tuple, multiplicity or None)
    for n in product(range(hmax + 1), repeat=k):
        if sum(n) > hmax:
            continue
        mu = list(lam)
        for i, ni in enumerate(n):
            if ni:
                for a in range(datum.ambient_dim):
                    mu[a] -= ni * datum.simple_roots[i][a]
        mu = cvec(mu)
        if datum.is_dominant(mu):
            dominants[mu] = n
    mult = {}
    from .rootdata import _length_data

    lengths = _length_data(datum)
    for mu, n in sorted(dominants.items(), key=lambda kv: sum(kv[1])):
        if sum(n) == 0:
            mult[mu] = 1
            continue
        num = Fraction(0)
        for r in pos:
            kk = 1
            while True:
                off = tuple(n[i] - kk * r.coords[i] for i in range(k))
                if any(x < 0 for x in off):
                    break
                nu = list(lam)
                for i, ni in enumerate(off):
                    if ni:
                        for a in range(datum.ambient_dim):
                            nu[a] -= ni * datum.simple_roots[i][a]
                nu = cvec(nu)
                dom_nu = dominant_representative(datum, nu)[0]
                m_nu = mult.get(dom_nu, 0)
                if m_nu:
                    num += m_nu * r.half_length * vdot(nu, r.coroot_vec)
                kk += 1
        y = cvec(
            tuple(2 * lam[a] - sum(n[i] * datum.simple_roots[i][a] for i in range(k))
                  + 2 * rho[a] for a in range(datum.ambient_dim))
        )  # lam + mu + 2 rho
        den = sum(Fraction(n[i]) * lengths[i] * vdot(y, datum.simple_coroots[i])
                  for i in range(k))
        if den == 0:
            raise InternalConsistencyError("vanishing Freudenthal denominator")
        m = 2 * num / den
        if m.denominator != 1 or m < 1:
            raise InternalConsistencyError(
                f"Freudenthal produced non-positive-integer multiplicity {m}"
            )
        mult[mu] = int(m)
    full = {}
    for mu, m in mult.items():
        for v in weyl_orbit(datum, mu):
            full[v] = m
    total = sum(full.values())
    if total != dim:
        raise InternalConsistencyError(
            f"weight multiset mass {total} != Weyl dimension {dim}"
        )
    return tuple(sorted(full.items()))


def freudenthal_multiplicities(datum, lam, dim_cap=DEFAULT_DIM_CAP):
    """Exact weight multiset of the irreducible module with highest weight lam."""
    return dict(_freudenthal_cached(datum, cvec(lam), dim_cap))


class DualityClass(enum.Enum):
    SYMPLECTIC = "symplectic"
    ORTHOGONAL = "orthogonal"
    COMPLEX = "complex"


def duality_class(datum, lam):
    """Frobenius-Schur type of the irreducible module with highest weight lam."""
    lam = cvec(lam)
    if not datum.is_dominant(lam):
        raise NotDominant(lam, f"{lam} is not dominant")
    if dual_weight(datum, lam) != lam:
        return DualityClass.COMPLEX
    two_rho_vee = tuple(canon(2 * x) for x in rho_vee(datum))
    ind = vdot(lam, two_rho_vee)
    assert Fraction(ind).denominator == 1
    return DualityClass.SYMPLECTIC if int(ind) % 2 else DualityClass.ORTHOGONAL


@dataclass(frozen=True)
class PairingItem:
    """How one block of the module carries the symplectic form."""

    kind: str        # 'symplectic' | 'dual_pair' | 'orthogonal_double'
    weight: tuple
    partner: tuple
    count: int


@dataclass(frozen=True)
class SympRepSpec:
    datum: object
    summands: tuple      # ((weight, mult), ...) sorted by descending weight_key
    pairing_plan: tuple  # (PairingItem, ...)

    @property
    def dim(self):
        return sum(m * weyl_dim(self.datum, w) for w, m in self.summands)

    def multiplicity(self, w):
        w = cvec(w)
        for wt, m in self.summands:
            if wt == w:
                return m
        return 0

    def weight_multiset(self):
        return total_weight_multiset(self.datum, self.summands)


def validate_symplectic_spec(datum, raw_summands, dim_cap=DEFAULT_DIM_CAP):
    """Check that an invariant symplectic form exists and fix a pairing plan.

    Complex-type weights must occur with the same multiplicity as their duals,
    orthogonal-type weights with even multiplicity; symplectic-type weights are
    unconstrained.
    """
    merged = {}
    for w, m in raw_summands:
        w = cvec(w)
        if m <= 0:
            raise NotDominant(w, f"multiplicity of {w} must be positive")
        if not datum.is_dominant(w):
            raise NotDominant(w, f"highest weight {w} is not dominant")
        merged[w] = merged.get(w, 0) + m
    order = sorted(merged, key=lambda w: weight_key(datum, w), reverse=True)
    plan = []
    seen = set()
    for w in order:
        if w in seen:
            continue
        cls = duality_class(datum, w)
        if cls is DualityClass.SYMPLECTIC:
            plan.append(PairingItem("symplectic", w, w, merged[w]))
            seen.add(w)
        elif cls is DualityClass.ORTHOGONAL:
            if merged[w] % 2:
                raise OddOrthogonalMultiplicity(w)
            plan.append(PairingItem("orthogonal_double", w, w, merged[w] // 2))
            seen.add(w)
        else:
            dual = dual_weight(datum, w)
            if merged.get(dual, 0) != merged[w]:
                raise NotSelfDual(w)
            plan.append(PairingItem("dual_pair", w, dual, merged[w]))
            seen.add(w)
            seen.add(dual)
    summands = tuple((w, merged[w]) for w in order)
    return SympRepSpec(datum=datum, summands=summands, pairing_plan=tuple(plan))


def total_weight_multiset(datum, summands, dim_cap=DEFAULT_DIM_CAP):
    total = {}
    for w, m in summands:
        for v, c in freudenthal_multiplicities(datum, w, dim_cap).items():
            total[v] = total.get(v, 0) + m * c
    return total


def decompose_weights(datum, multiset, dim_cap=DEFAULT_DIM_CAP):
    """Irreducible content of a genuine character, by repeated extraction of
    the maximal weight (height first, lexicographic tie-break)."""
    rem = {cvec(w): m for w, m in multiset.items() if m}
    out = []
    while rem:
        top = max(rem, key=lambda w: weight_key(datum, w))
        m = rem[top]
        if m < 0 or not datum.is_dominant(top):
            raise NotACharacter(
                f"maximal weight {top} has multiplicity {m} and is "
                f"{'not ' if not datum.is_dominant(top) else ''}dominant"
            )
        for v, c in freudenthal_multiplicities(datum, top, dim_cap).items():
            new = rem.get(v, 0) - m * c
            if new < 0:
                raise NotACharacter(f"multiplicity of {v} drops below zero")
            if new:
                rem[v] = new
            else:
                rem.pop(v, None)
        out.append((top, m))
    return out


# -- symmetric powers and invariant dimensions -------------------------------

def _freeze(multiset):
    return tuple(sorted((cvec(w), m) for w, m in multiset.items() if m))


@lru_cache(maxsize=None)
def _sym_powers_cached(frozen, max_degree):
    """Multisets of S^d V for d = 0..max_degree via Newton's identity
    h_d = (1/d) sum_k p_k h_(d-k)."""
    if frozen:
        n = len(frozen[0][0])
    else:
        n = 0
    zero = (0,) * n
    weights = list(frozen)
    h = [{zero: Fraction(1)}]
    powers = [None]
    for k in range(1, max_degree + 1):
        powers.append({tuple(canon(k * x) for x in w): m for w, m in weights})
    for d in range(1, max_degree + 1):
        acc = {}
        for k in range(1, d + 1):
            for w, m in powers[k].items():
                for v, c in h[d - k].items():
                    key = tuple(canon(a + b) for a, b in zip(w, v))
                    acc[key] = acc.get(key, Fraction(0)) + m * c
        hd = {}
        for wv, val in acc.items():
            q = val / d
            if q:
                hd[wv] = q
        h.append(hd)
    out = []
    for hd in h:
        clean = {}
        for wv, val in hd.items():
            f = Fraction(val)
            if f.denominator != 1:
                raise InternalConsistencyError("non-integral symmetric power")
            clean[wv] = int(f)
        out.append(clean)
    return tuple(tuple(sorted(hd.items())) for hd in out)


def symmetric_power_multisets(multiset, max_degree):
    return [dict(t) for t in _sym_powers_cached(_freeze(multiset), max_degree)]


def invariant_dims(
    spec,
    max_degree,
    dim_budget=DEFAULT_SYM_DIM_BUDGET,
    degree_budget=DEFAULT_SYM_DEGREE_BUDGET,
    weyl_cap=DEFAULT_WEYL_CAP,
):
    """dim (S^d V)^G for d = 0..max_degree, via the Weyl alternation
    sum_w (-1)^l(w) m_{S^d V}(w rho - rho) on symmetric-power multisets."""
    datum = spec.datum
    dim_v = spec.dim
    if dim_v > dim_budget:
        raise BudgetExceeded(f"dim V = {dim_v} exceeds budget {dim_budget}")
    if max_degree > degree_budget:
        raise BudgetExceeded(
            f"degree {max_degree} exceeds budget {degree_budget}"
        )
    sym = symmetric_power_multisets(spec.weight_multiset(), max_degree)
    rho = rho_strict(datum)
    targets = []
    for w in enumerate_weyl(datum, weyl_cap):
        targets.append((cvec(vdot_sub(w.apply(rho), rho)), w.sign))
    out = []
    for d in range(max_degree + 1):
        hd = sym[d]
        val = sum(sign * hd.get(t, 0) for t, sign in targets)
        if val < 0:
            raise InternalConsistencyError("negative invariant dimension")
        out.append(int(val))
    if out[0] != 1:
        raise InternalConsistencyError("degree-0 invariants must be 1-dim")
    return out


def vdot_sub(a, b):
    return tuple(canon(x - y) for x, y in zip(a, b))

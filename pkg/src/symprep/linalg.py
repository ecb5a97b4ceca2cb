"""Exact dense linear algebra over the rationals.

Vectors are tuples, matrices are tuples of row tuples.  Entries are ints or
Fractions; every routine keeps arithmetic exact.  Sizes here are tiny (a few
dozen at most), so the quadratic/cubic loops below are deliberate.
"""

from fractions import Fraction
from math import gcd


def canon(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f


def cvec(xs):
    return tuple(canon(x) for x in xs)


def cmat(rows):
    return tuple(cvec(r) for r in rows)


def vadd(a, b):
    return tuple(canon(x + y) for x, y in zip(a, b))


def vsub(a, b):
    return tuple(canon(x - y) for x, y in zip(a, b))


def vneg(a):
    return tuple(canon(-x) for x in a)


def vscale(c, a):
    return tuple(canon(c * x) for x in a)


def vdot(a, b):
    if len(a) != len(b):
        raise ValueError(f"length mismatch {len(a)} vs {len(b)}")
    return canon(sum(Fraction(x) * Fraction(y) for x, y in zip(a, b)))


def is_zero_vec(a):
    return all(x == 0 for x in a)


def zeros(m, n):
    return tuple((0,) * n for _ in range(m))


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a):
    return tuple(zip(*a)) if a else ()


def mat_vec(a, v):
    return tuple(vdot(row, v) for row in a)


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(vdot(row, col) for col in bt) for row in a)


def mat_add(a, b):
    return tuple(vadd(x, y) for x, y in zip(a, b))


def mat_sub(a, b):
    return tuple(vsub(x, y) for x, y in zip(a, b))


def mat_scale(c, a):
    return tuple(vscale(c, row) for row in a)


def comm(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def kron(a, b):
    if not a or not b:
        return ()
    bm, bn = len(b), len(b[0])
    out = []
    for arow in a:
        for i in range(bm):
            out.append(tuple(canon(x * b[i][j]) for x in arow for j in range(bn)))
    return tuple(out)


def blockdiag(blocks):
    blocks = [b for b in blocks if b]
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = canon(x)
        off += len(b)
    return tuple(tuple(r) for r in out)


def rref(rows):
    """Reduced row echelon form.  Returns (rows, pivot column indices)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [cvec(row) for row in m], pivots


def rank(rows):
    return len(rref(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of {x : A x = 0} for A given row-wise."""
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty constraint list")
        ncols = len(rows[0])
    if not rows:
        return [tuple(identity(ncols)[i]) for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * ncols
        x[fcol] = Fraction(1)
        for i, pcol in enumerate(pivots):
            x[pcol] = -Fraction(red[i][fcol]) if i < len(red) else Fraction(0)
        basis.append(cvec(x))
    return basis


def lin_solve(rows, b):
    """One exact solution of A x = b (free variables zero), or None."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [tuple(r) + (bv,) for r, bv in zip(rows, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, pcol in enumerate(pivots):
        x[pcol] = Fraction(red[i][-1])
    return cvec(x)


def in_span(basis_rows, v):
    """Coefficients c with sum c_i basis_i = v, or None."""
    if not basis_rows:
        return () if is_zero_vec(v) else None
    cols = transpose(basis_rows)
    return lin_solve(cols, v)


def solve_columns(b_cols, target_cols):
    """Solve B X = T column-wise where B is given column-wise.  None if any
    target column is outside the column span."""
    rows = transpose(b_cols)
    out = []
    for t in transpose(target_cols):
        c = in_span(rows, t)
        if c is None:
            return None
        out.append(c)
    return transpose(out)


def primitive_int_vector(v):
    """Scale a rational vector to coprime integers with positive leading entry."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x != 0), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def echelon_basis(rows):
    """Canonical basis of the row span: rref rows, scaled primitive-integer."""
    red, pivots = rref(rows)
    return [primitive_int_vector(red[i]) for i in range(len(pivots))]


def same_span(rows_a, rows_b):
    return echelon_basis(rows_a) == echelon_basis(rows_b)


# -- truncated power series / small polynomial helpers (rational) -----------

def poly_mul(p, q, trunc=None):
    n = len(p) + len(q) - 1 if p and q else 0
    if trunc is not None:
        n = min(n, trunc + 1)
    out = [Fraction(0)] * n
    for i, a in enumerate(p):
        if a == 0 or i >= n:
            continue
        for j, b in enumerate(q):
            if i + j >= n:
                break
            out[i + j] += Fraction(a) * Fraction(b)
    return [canon(x) for x in out]


def series_inv(p, trunc):
    """Coefficients of 1/p(t) up to degree trunc; requires p[0] != 0."""
    if not p or p[0] == 0:
        raise ZeroDivisionError("series has no inverse")
    inv = [Fraction(1) / Fraction(p[0])]
    for n in range(1, trunc + 1):
        s = Fraction(0)
        for k in range(1, min(n, len(p) - 1) + 1):
            s += Fraction(p[k]) * inv[n - k]
        inv.append(-s / Fraction(p[0]))
    return [canon(x) for x in inv]


def poly_det(mat_of_polys, trunc=None):
    """Determinant of a small matrix whose entries are polynomials in t."""
    n = len(mat_of_polys)
    if n == 0:
        return [1]

    def det(rows, cols):
        if len(cols) == 1:
            return mat_of_polys[rows[0]][cols[0]]
        r = rows[0]
        acc = [Fraction(0)]
        for k, c in enumerate(cols):
            entry = mat_of_polys[r][c]
            if all(x == 0 for x in entry):
                continue
            sub = det(rows[1:], cols[:k] + cols[k + 1:])
            term = poly_mul(entry, sub, trunc)
            if k % 2:
                term = [-x for x in term]
            m = max(len(acc), len(term))
            acc = [
                (acc[i] if i < len(acc) else 0) + (term[i] if i < len(term) else 0)
                for i in range(m)
            ]
        return [canon(x) for x in acc]

    return det(tuple(range(n)), tuple(range(n)))

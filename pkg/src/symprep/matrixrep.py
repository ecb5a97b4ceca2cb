"""Explicit Chevalley-basis matrix models for a catalog of classical modules.

Supported blocks: torus characters, any irreducible of a rank-1 factor, the
defining module (or its dual) of a type-A factor, the defining module of a
type-C factor, external tensors of those across product factors, duals, direct
sums, and the canonical pairing form on U + U*.  Construction is exact over
the rationals; float mirrors are attached for the numeric verification layer.

Root vectors beyond the simple ones are produced by bracket recipes whose
scalars are calibrated once per factor in a faithful defining module, so the
same abstract Lie algebra element acts consistently in every block.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BudgetExceeded,
    InternalConsistencyError,
    NotSupported,
)
from .linalg import (
    blockdiag,
    canon,
    comm,
    cvec,
    identity,
    kron,
    mat_scale,
    nullspace,
    transpose,
    vdot,
)
from .reps import freudenthal_multiplicities
from .rootdata import positive_roots

DEFAULT_DIM_CAP = 64


def _unit(n, i, j, val=1):
    m = [[0] * n for _ in range(n)]
    m[i][j] = val
    return tuple(tuple(r) for r in m)


@dataclass(frozen=True)
class FactorBlock:
    """Matrices of one simple factor's module in its local numbering."""

    dim: int
    e: tuple       # per local simple root
    f: tuple
    h: tuple
    weights: tuple  # local fundamental-weight coordinates per basis vector


def _trivial_block(rank):
    z = ((0,),)
    return FactorBlock(1, (z,) * rank, (z,) * rank, (z,) * rank, (((0,) * rank),))


def _sl2_block(m):
    n = m + 1
    e = [[0] * n for _ in range(n)]
    f = [[0] * n for _ in range(n)]
    h = [[0] * n for _ in range(n)]
    for j in range(n):
        h[j][j] = m - 2 * j
        if j + 1 < n:
            f[j + 1][j] = 1
            e[j][j + 1] = (j + 1) * (m - j)
    mk = lambda a: tuple(tuple(r) for r in a)
    weights = tuple(((m - 2 * j,)) for j in range(n))
    return FactorBlock(n, (mk(e),), (mk(f),), (mk(h),), weights)


def _sln_standard_block(n):
    e = tuple(_unit(n, i, i + 1) for i in range(n - 1))
    f = tuple(_unit(n, i + 1, i) for i in range(n - 1))
    h = []
    for i in range(n - 1):
        m = [[0] * n for _ in range(n)]
        m[i][i] = 1
        m[i + 1][i + 1] = -1
        h.append(tuple(tuple(r) for r in m))
    weights = tuple(
        tuple((1 if j == i else (-1 if j == i + 1 else 0)) for i in range(n - 1))
        for j in range(n)
    )
    return FactorBlock(n, e, f, tuple(h), weights)


def _spn_standard_block(n):
    dim = 2 * n
    e, f, h = [], [], []
    for i in range(n - 1):
        em = [[0] * dim for _ in range(dim)]
        em[i][i + 1] = 1
        em[n + i + 1][n + i] = -1
        fm = [[0] * dim for _ in range(dim)]
        fm[i + 1][i] = 1
        fm[n + i][n + i + 1] = -1
        hm = [[0] * dim for _ in range(dim)]
        hm[i][i] = 1
        hm[i + 1][i + 1] = -1
        hm[n + i][n + i] = -1
        hm[n + i + 1][n + i + 1] = 1
        e.append(tuple(map(tuple, em)))
        f.append(tuple(map(tuple, fm)))
        h.append(tuple(map(tuple, hm)))
    em = [[0] * dim for _ in range(dim)]
    em[n - 1][2 * n - 1] = 1
    fm = [[0] * dim for _ in range(dim)]
    fm[2 * n - 1][n - 1] = 1
    hm = [[0] * dim for _ in range(dim)]
    hm[n - 1][n - 1] = 1
    hm[2 * n - 1][2 * n - 1] = -1
    e.append(tuple(map(tuple, em)))
    f.append(tuple(map(tuple, fm)))
    h.append(tuple(map(tuple, hm)))

    def eps(j):  # local coordinates of epsilon_j in the C_n weight basis
        return tuple(
            (1 if j == i else (-1 if j == i + 1 else 0)) for i in range(n - 1)
        ) + ((1 if j == n - 1 else 0),)

    weights = tuple(eps(j) for j in range(n)) + tuple(
        tuple(-x for x in eps(j)) for j in range(n)
    )
    return FactorBlock(dim, tuple(e), tuple(f), tuple(h), weights)


def _dual_block(b):
    neg_t = lambda m: mat_scale(-1, transpose(m))
    return FactorBlock(
        b.dim,
        tuple(neg_t(m) for m in b.e),
        tuple(neg_t(m) for m in b.f),
        tuple(neg_t(m) for m in b.h),
        tuple(tuple(-x for x in w) for w in b.weights),
    )


def _factor_block(letter, rank, local_weight):
    lw = tuple(local_weight)
    if all(x == 0 for x in lw):
        return _trivial_block(rank)
    if letter == "A" and rank == 1:
        return _sl2_block(int(lw[0]))
    if letter == "A":
        n = rank + 1
        if lw == (1,) + (0,) * (rank - 1):
            return _sln_standard_block(n)
        if lw == (0,) * (rank - 1) + (1,):
            return _dual_block(_sln_standard_block(n))
        raise NotSupported(
            f"no matrix model for weight {lw} of type A{rank}; only the "
            "defining module and its dual are in the catalog"
        )
    if letter == "C":
        if lw == (1,) + (0,) * (rank - 1):
            return _spn_standard_block(rank)
        raise NotSupported(
            f"no matrix model for weight {lw} of type C{rank}; only the "
            "defining module is in the catalog"
        )
    raise NotSupported(f"no matrix models for factors of type {letter}{rank}")


def _reference_block(letter, rank):
    if letter == "A":
        return _sl2_block(1) if rank == 1 else _sln_standard_block(rank + 1)
    if letter == "C":
        return _spn_standard_block(rank)
    raise NotSupported(f"no reference module for type {letter}{rank}")


def _single_factor_datum(letter, rank):
    from .rootdata import build_root_datum

    return build_root_datum([(letter, rank)])


def _first_nonzero_ratio(a, b):
    """c with a = c * b for exactly proportional matrices, else None."""
    c = None
    for ra, rb in zip(a, b):
        for xa, xb in zip(ra, rb):
            if xb == 0:
                if xa != 0:
                    return None
                continue
            r = Fraction(xa, xb) if not isinstance(xa, Fraction) else Fraction(xa) / xb
            if c is None:
                c = r
            elif c != r:
                return None
    return c


def _root_recipes(letter, rank):
    """Bracket recipes (gamma -> (simple index, lower root, scalar)) for all
    non-simple positive roots, calibrated in the defining module."""
    datum = _single_factor_datum(letter, rank)
    ref = _reference_block(letter, rank)
    pos = positive_roots(datum)
    by_coords = {r.coords: r for r in pos}
    x = {}
    y = {}
    hmat = {}
    for r in pos:
        hvec = [
            [sum(r.coroot_coords[j] * ref.h[j][a][b] for j in range(rank))
             for b in range(ref.dim)] for a in range(ref.dim)
        ]
        hmat[r.coords] = tuple(tuple(canon(v) for v in row) for row in hvec)
    recipes = {}
    for i in range(rank):
        e = tuple(1 if j == i else 0 for j in range(rank))
        x[e] = ref.e[i]
        y[e] = ref.f[i]
    for r in sorted(pos, key=lambda r: r.height):
        if r.height == 1:
            continue
        found = None
        for i in range(rank):
            lower = tuple(
                r.coords[j] - (1 if j == i else 0) for j in range(rank)
            )
            if any(v < 0 for v in lower) or lower not in by_coords:
                continue
            if by_coords[lower].coords not in x:
                continue
            a = comm(x[tuple(1 if j == i else 0 for j in range(rank))], x[lower])
            b = comm(y[tuple(1 if j == i else 0 for j in range(rank))], y[lower])
            bracket = comm(a, b)
            c = _first_nonzero_ratio(bracket, hmat[r.coords])
            if c is None or c == 0:
                continue
            x[r.coords] = mat_scale(Fraction(1, 1) / c, a)
            y[r.coords] = b
            found = (i, lower, c)
            break
        if found is None:
            raise InternalConsistencyError(
                f"no bracket recipe found for root {r.coords} of {letter}{rank}"
            )
        recipes[r.coords] = found
    return recipes


_RECIPE_CACHE = {}


def root_recipes(letter, rank):
    key = (letter, rank)
    if key not in _RECIPE_CACHE:
        _RECIPE_CACHE[key] = _root_recipes(letter, rank)
    return _RECIPE_CACHE[key]


@dataclass(frozen=True)
class MatrixRep:
    """A concrete symplectic module: exact matrices plus float mirrors."""

    spec: object
    datum: object
    dim: int
    weight_labels: tuple
    j_exact: tuple
    lie_labels: tuple    # ('h', i) | ('z', l) | ('e', coords) | ('f', coords)
    lie_exact: tuple
    blocks: tuple        # (kind, weight, start, size) per plan block copy
    provenance: str

    def __post_init__(self):
        object.__setattr__(
            self, "j", np.array(self.j_exact, dtype=float)
        )
        object.__setattr__(
            self,
            "lie",
            tuple(np.array(m, dtype=float) for m in self.lie_exact),
        )
        object.__setattr__(
            self,
            "lie_index",
            {lab: i for i, lab in enumerate(self.lie_labels)},
        )

    def lie_matrix(self, label):
        return self.lie[self.lie_index[label]]

    def lie_matrix_exact(self, label):
        return self.lie_exact[self.lie_index[label]]

    def coweight_action(self, functional):
        """Diagonal action of a torus element given as a coweight functional."""
        return tuple(vdot(w, functional) for w in self.weight_labels)

    def omega(self, u, v):
        return float(np.asarray(u) @ self.j @ np.asarray(v))

    def omega_exact(self, u, v):
        return canon(
            sum(
                Fraction(u[a]) * self.j_exact[a][b] * Fraction(v[b])
                for a in range(self.dim)
                for b in range(self.dim)
                if self.j_exact[a][b]
            )
        )


def _summand_matrices(datum, weight):
    """Per-global-generator exact matrices of the irreducible with the given
    highest weight, via external tensor over the factors."""
    blocks = []
    for fi, (letter, frank) in enumerate(datum.factors):
        idxs = datum.standard_order[fi]
        local = tuple(vdot(weight, datum.simple_coroots[i]) for i in idxs)
        blocks.append((fi, idxs, _factor_block(letter, frank, local)))
    dims = [b.dim for _, _, b in blocks]
    total = 1
    for d in dims:
        total *= d

    def promote(fpos, mat):
        # I_{d0} x ... x mat x ... x I_{dn}
        out = None
        for k, d in enumerate(dims):
            piece = mat if k == fpos else identity(d)
            out = piece if out is None else kron(out, piece)
        return out

    gens = {}
    for fi, idxs, block in blocks:
        for loc, gi in enumerate(idxs):
            gens[("e", gi)] = promote(fi, block.e[loc])
            gens[("f", gi)] = promote(fi, block.f[loc])
            gens[("h", gi)] = promote(fi, block.h[loc])
    # central charges: identity times the central coordinate of the weight
    base = sum(n for _, n in datum.factors)
    for l in range(datum.ambient_dim - base):
        charge = weight[base + l]
        gens[("z", l)] = mat_scale(charge, identity(total))
    # weight labels: local weights reassembled into ambient coordinates
    labels = []
    import itertools

    for combo in itertools.product(*(range(d) for d in dims)):
        amb = [0] * datum.ambient_dim
        for (fi, idxs, block), pos in zip(blocks, combo):
            lw = block.weights[pos]
            for loc, gi in enumerate(idxs):
                amb[gi] = lw[loc]
        for l in range(datum.ambient_dim - base):
            amb[base + l] = weight[base + l]
        labels.append(cvec(amb))
    return total, gens, tuple(labels)


def _dual_summand(dim, gens, labels):
    dgens = {k: mat_scale(-1, transpose(m)) for k, m in gens.items()}
    dlabels = tuple(cvec(tuple(-x for x in w)) for w in labels)
    return dim, dgens, dlabels


def _invariant_symplectic_form(dim, gens):
    """Solve X^T J + J X = 0 over skew J; the solution line is normalized so
    its first nonzero entry is one."""
    pairs = [(a, b) for a in range(dim) for b in range(a + 1, dim)]
    idx = {p: i for i, p in enumerate(pairs)}
    rows = []
    for g in gens.values():
        # equation matrix for X^T J + J X = 0 entrywise
        gt = transpose(g)
        for a in range(dim):
            for b in range(a, dim):
                row = [Fraction(0)] * len(pairs)

                def add(p, q, coef):
                    if p == q or coef == 0:
                        return
                    if p < q:
                        row[idx[(p, q)]] += coef
                    else:
                        row[idx[(q, p)]] -= coef

                for k in range(dim):
                    add(k, b, gt[a][k])   # (X^T J)_{ab}
                    add(a, k, g[k][b])    # (J X)_{ab}
                if any(row):
                    rows.append(cvec(row))
    space = nullspace(rows, len(pairs)) if rows else [
        cvec([1 if i == 0 else 0 for i in range(len(pairs))])
    ]
    if len(space) != 1:
        raise InternalConsistencyError(
            f"invariant form space has dimension {len(space)}, expected 1"
        )
    sol = space[0]
    lead = next(x for x in sol if x != 0)
    sol = [canon(Fraction(x) / Fraction(lead)) for x in sol]
    j = [[0] * dim for _ in range(dim)]
    for (a, b), i in idx.items():
        j[a][b] = sol[i]
        j[b][a] = canon(-sol[i])
    return tuple(tuple(r) for r in j)


def build_rep(spec, dim_cap=DEFAULT_DIM_CAP):
    """Assemble the matrix model of a validated spec, block by block."""
    datum = spec.datum
    if spec.dim > dim_cap:
        raise BudgetExceeded(f"total dimension {spec.dim} exceeds cap {dim_cap}")
    for letter, frank in datum.factors:
        if letter not in ("A", "C"):
            raise NotSupported(f"type {letter}{frank} factors have no matrix models")
    parts = []   # (gens, labels, jblock, desc, kind, weight)
    for item in spec.pairing_plan:
        dim_u, gens, labels = _summand_matrices(datum, item.weight)
        if item.kind == "symplectic":
            # Even multiplicities are presented as U + U* so that rational
            # isotropic highest weight vectors exist; a lone copy carries its
            # own invariant form.
            if item.count >= 2:
                ddim, dgens, dlabels = _dual_summand(dim_u, gens, labels)
                merged = {k: blockdiag([gens[k], dgens[k]]) for k in gens}
                mlabels = labels + dlabels
                j = [[0] * (2 * dim_u) for _ in range(2 * dim_u)]
                for a in range(dim_u):
                    j[a][dim_u + a] = 1
                    j[dim_u + a][a] = -1
                pair_unit = (
                    merged,
                    mlabels,
                    tuple(tuple(r) for r in j),
                    f"irr{item.weight}+dual",
                    "symplectic_pair",
                    item.weight,
                )
                parts.extend([pair_unit] * (item.count // 2))
            if item.count % 2:
                j = _invariant_symplectic_form(dim_u, gens)
                parts.append(
                    (gens, labels, j, f"irr{item.weight}", "symplectic", item.weight)
                )
        else:
            ddim, dgens, dlabels = _dual_summand(dim_u, gens, labels)
            merged = {
                k: blockdiag([gens[k], dgens[k]]) for k in gens
            }
            mlabels = labels + dlabels
            j = [[0] * (2 * dim_u) for _ in range(2 * dim_u)]
            for a in range(dim_u):
                j[a][dim_u + a] = 1
                j[dim_u + a][a] = -1
            j = tuple(tuple(r) for r in j)
            unit = (
                merged,
                mlabels,
                j,
                f"irr{item.weight}+dual",
                item.kind,
                item.weight,
            )
            parts.extend([unit] * item.count)
    total = sum(len(p[1]) for p in parts)
    gen_keys = (
        [("h", i) for i in range(datum.rank)]
        + [("z", l) for l in range(datum.ambient_dim - sum(n for _, n in datum.factors))]
        + [("e", i) for i in range(datum.rank)]
        + [("f", i) for i in range(datum.rank)]
    )
    assembled = {}
    for key in gen_keys:
        kind = key[0]
        lookup = key if kind in ("z",) else key
        mats = []
        for gens, labels, _, _, _, _ in parts:
            if kind == "z":
                mats.append(gens[("z", key[1])])
            else:
                mats.append(gens[(kind, key[1])])
        assembled[key] = blockdiag(mats) if mats else ()
    jfull = blockdiag([p[2] for p in parts])
    labels_full = tuple(l for p in parts for l in p[1])
    blocks = []
    off = 0
    for gens, labels, _, desc, kind, weight in parts:
        blocks.append((kind, weight, off, len(labels)))
        off += len(labels)

    # extend to all roots by the calibrated bracket recipes
    simple_e = {}
    simple_f = {}
    for i in range(datum.rank):
        coords = tuple(1 if j == i else 0 for j in range(datum.rank))
        simple_e[coords] = assembled[("e", i)]
        simple_f[coords] = assembled[("f", i)]
    pos = positive_roots(datum)
    xroot = dict(simple_e)
    yroot = dict(simple_f)
    for fi, (letter, frank) in enumerate(datum.factors):
        idxs = datum.standard_order[fi]
        recipes = root_recipes(letter, frank)
        for local_coords in sorted(recipes, key=lambda c: sum(c)):
            i_loc, lower_loc, cscale = recipes[local_coords]

            def to_global(local):
                g = [0] * datum.rank
                for loc, gi in enumerate(idxs):
                    g[gi] = local[loc]
                return tuple(g)

            gcoords = to_global(local_coords)
            gsimple = to_global(
                tuple(1 if j == i_loc else 0 for j in range(frank))
            )
            glower = to_global(lower_loc)
            a = comm(xroot[gsimple], xroot[glower])
            xroot[gcoords] = mat_scale(Fraction(1, 1) / cscale, a)
            yroot[gcoords] = comm(yroot[gsimple], yroot[glower])

    lie_labels = []
    lie_mats = []
    for i in range(datum.rank):
        lie_labels.append(("h", i))
        lie_mats.append(assembled[("h", i)])
    central = datum.ambient_dim - sum(n for _, n in datum.factors)
    for l in range(central):
        lie_labels.append(("z", l))
        lie_mats.append(assembled[("z", l)])
    for r in pos:
        lie_labels.append(("e", r.coords))
        lie_mats.append(xroot[r.coords])
        lie_labels.append(("f", r.coords))
        lie_mats.append(yroot[r.coords])

    rep = MatrixRep(
        spec=spec,
        datum=datum,
        dim=total,
        weight_labels=labels_full,
        j_exact=jfull,
        lie_labels=tuple(lie_labels),
        lie_exact=tuple(lie_mats),
        blocks=tuple(blocks),
        provenance=" + ".join(p[3] for p in parts),
    )
    _check_rep(rep)
    return rep


def _check_rep(rep):
    """Exact structural invariants of a freshly built model."""
    datum = rep.datum
    n = rep.dim
    # J skew and invertible
    for a in range(n):
        for b in range(n):
            if rep.j_exact[a][b] != -rep.j_exact[b][a]:
                raise InternalConsistencyError("J is not skew")
    if len(nullspace(rep.j_exact, n)) != 0:
        raise InternalConsistencyError("J is degenerate")
    pos = {r.coords: r for r in positive_roots(datum)}
    for lab, mat in zip(rep.lie_labels, rep.lie_exact):
        # infinitesimal invariance X^T J + J X = 0, exactly
        xt = transpose(mat)
        for a in range(n):
            for b in range(n):
                s = canon(
                    sum(Fraction(xt[a][k]) * rep.j_exact[k][b] for k in range(n))
                    + sum(Fraction(rep.j_exact[a][k]) * mat[k][b] for k in range(n))
                )
                if s != 0:
                    raise InternalConsistencyError(
                        f"form not invariant under {lab}"
                    )
        if lab[0] == "h":
            diag = rep.coweight_action(datum.simple_coroots[lab[1]])
            for a in range(n):
                for b in range(n):
                    want = diag[a] if a == b else 0
                    if mat[a][b] != want:
                        raise InternalConsistencyError(
                            f"Cartan matrix {lab} disagrees with weight labels"
                        )
    # [e_alpha, f_alpha] = alpha^vee on each weight space, exactly
    for coords, r in pos.items():
        e = rep.lie_matrix_exact(("e", coords))
        f = rep.lie_matrix_exact(("f", coords))
        br = comm(e, f)
        diag = rep.coweight_action(r.coroot_vec)
        for a in range(n):
            for b in range(n):
                want = diag[a] if a == b else 0
                if br[a][b] != want:
                    raise InternalConsistencyError(
                        f"[e,f] != coroot action for root {coords}"
                    )
    # weight multiset equals the combinatorial one
    want = {}
    for w, m in rep.spec.summands:
        for v, c in freudenthal_multiplicities(datum, w).items():
            want[v] = want.get(v, 0) + m * c
    got = {}
    for w in rep.weight_labels:
        got[w] = got.get(w, 0) + 1
    if want != got:
        raise InternalConsistencyError(
            "matrix-model weight multiset disagrees with the combinatorial one"
        )


def highest_weight_vectors(rep, weight=None):
    """Exact highest-weight structure: {weight: basis of the hw space}."""
    datum = rep.datum
    n = rep.dim
    rows = []
    for i in range(datum.rank):
        rows.extend(rep.lie_matrix_exact(("e", tuple(
            1 if j == i else 0 for j in range(datum.rank)
        ))))
    if rows:
        space = nullspace(rows, n)
    else:
        space = [tuple(identity(n)[i]) for i in range(n)]
    by_weight = {}
    for vec in space:
        # group by weight: a null vector of the raising operators decomposes
        # into weight-homogeneous null vectors; split it
        parts = {}
        for a, x in enumerate(vec):
            if x:
                parts.setdefault(rep.weight_labels[a], [0] * n)[a] = x
        for w, v in parts.items():
            by_weight.setdefault(w, []).append(cvec(v))
    out = {}
    for w, vecs in by_weight.items():
        basis = []
        from .linalg import rref

        red, piv = rref(vecs)
        for i in range(len(piv)):
            basis.append(red[i])
        out[w] = tuple(basis)
    if weight is not None:
        return out.get(cvec(weight), ())
    return out


def find_hw_vectors(rep):
    """(weight, basis) pairs sorted by weight, with multiplicities matching
    the spec summands."""
    table = highest_weight_vectors(rep)
    want = {cvec(w): m for w, m in rep.spec.summands}
    got = {w: len(b) for w, b in table.items()}
    if want != got:
        raise InternalConsistencyError(
            f"highest-weight structure {got} disagrees with the spec {want}"
        )
    return sorted(table.items())

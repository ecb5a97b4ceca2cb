"""Exact root data: Cartan matrices, root systems, Weyl groups, Levi subdata.

Ambient convention: the character lattice of the maximal torus is coordinatized
by the fundamental-weight basis of the declared simple factors followed by one
integer coordinate per central-torus direction.  A weight vector w therefore
satisfies <w, alpha_i^vee> = w[i] for the i-th declared simple coroot, and
central coordinates pair to zero with every coroot.  Levi and subsystem data
share the same ambient lattice; their simple coroots are stored as explicit
functionals so that pairings remain plain dot products.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial

from .errors import (
    DimensionMismatch,
    InternalConsistencyError,
    InvalidCartanType,
    WeylCapExceeded,
)
from .linalg import (
    canon,
    cvec,
    echelon_basis,
    identity,
    in_span,
    lin_solve,
    mat_mul,
    mat_vec,
    rank,
    vdot,
    vscale,
    vsub,
)

DEFAULT_WEYL_CAP = 10 ** 6

_VALID_LETTERS = "ABCDEFG"


def cartan_matrix(letter, n):
    """Cartan matrix M[i][j] = <alpha_i, alpha_j^vee> in Bourbaki numbering."""
    if letter not in _VALID_LETTERS or n < 1:
        raise InvalidCartanType(f"invalid Cartan type {letter}{n}")
    if letter in "EFG":
        allowed = {"E": (6, 7, 8), "F": (4,), "G": (2,)}[letter]
        if n not in allowed:
            raise InvalidCartanType(f"invalid Cartan type {letter}{n}")
    if letter in "BCD" and n < 2:
        raise InvalidCartanType(f"invalid Cartan type {letter}{n}")
    if letter == "D" and n < 3:
        raise InvalidCartanType(f"invalid Cartan type {letter}{n}")

    m = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def edge(i, j, mij=-1, mji=-1):
        m[i][j] = mij
        m[j][i] = mji

    if letter == "A" or (letter in "BC" and n >= 2) or letter == "F":
        for i in range(n - 1):
            edge(i, i + 1)
    if letter == "B":
        edge(n - 2, n - 1, -2, -1)
    elif letter == "C":
        edge(n - 2, n - 1, -1, -2)
    elif letter == "D":
        for i in range(n - 3):
            edge(i, i + 1)
        edge(n - 3, n - 2)
        edge(n - 3, n - 1) if n > 3 else edge(0, 2)
    elif letter == "E":
        for i, j in [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]:
            edge(i, j)
    elif letter == "F":
        edge(1, 2, -2, -1)
    elif letter == "G":
        edge(0, 1, -1, -3)
    return tuple(tuple(r) for r in m)


def _weyl_order_of_factor(letter, n):
    if letter == "A":
        return factorial(n + 1)
    if letter in "BC":
        return 2 ** n * factorial(n)
    if letter == "D":
        return 2 ** (n - 1) * factorial(n)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("G", 2): 12}[(letter, n)]


def normalize_factor(letter, n):
    """Resolve low-rank coincidences to a canonical letter."""
    letter = letter.upper()
    if letter not in _VALID_LETTERS:
        raise InvalidCartanType(f"invalid Cartan letter {letter!r}")
    if not isinstance(n, int) or n < 1:
        raise InvalidCartanType(f"invalid rank {n!r} for type {letter}")
    if letter in "BC" and n == 1:
        return [("A", 1)]
    if letter == "D":
        if n == 2:
            return [("A", 1), ("A", 1)]
        if n == 3:
            return [("A", 3)]
    cartan_matrix(letter, n)  # validates
    return [(letter, n)]


@dataclass(frozen=True)
class RootDatum:
    """Root datum on a fixed ambient weight lattice.

    simple_roots[i] is the weight-coordinate vector of alpha_i and
    simple_coroots[i] the functional computing <., alpha_i^vee>.
    """

    factors: tuple
    central_rank: int
    ambient_dim: int
    simple_roots: tuple
    simple_coroots: tuple
    factor_of_simple: tuple
    standard_order: tuple = None  # per factor: simple indices in Bourbaki order

    def __post_init__(self):
        if self.standard_order is None:
            order, off = [], 0
            for _, n in self.factors:
                order.append(tuple(range(off, off + n)))
                off += n
            object.__setattr__(self, "standard_order", tuple(order))

    @property
    def rank(self):
        return len(self.simple_roots)

    def cartan_pairing(self):
        return tuple(
            tuple(vdot(a, c) for c in self.simple_coroots) for a in self.simple_roots
        )

    def pairing(self, w, i):
        if len(w) != self.ambient_dim:
            raise DimensionMismatch(
                f"weight length {len(w)} != ambient dim {self.ambient_dim}"
            )
        return vdot(w, self.simple_coroots[i])

    def is_dominant(self, w):
        return all(self.pairing(w, i) >= 0 for i in range(self.rank))

    def reflect(self, i, w):
        return cvec(vsub(w, vscale(self.pairing(w, i), self.simple_roots[i])))

    def reflection_matrix(self, i):
        al, co = self.simple_roots[i], self.simple_coroots[i]
        return tuple(
            tuple(canon((1 if a == b else 0) - al[a] * co[b]) for b in range(self.ambient_dim))
            for a in range(self.ambient_dim)
        )

    def type_string(self):
        parts = [f"{l}{n}" for l, n in self.factors]
        torus = self.ambient_dim - sum(n for _, n in self.factors)
        if torus or not parts:
            parts.append(f"T{torus}")
        return "x".join(parts)

    def weyl_order(self):
        out = 1
        for l, n in self.factors:
            out *= _weyl_order_of_factor(l, n)
        return out

    def dim_group(self):
        return self.ambient_dim + 2 * len(positive_roots(self))


def build_root_datum(factors, central_rank=0):
    """Assemble a root datum from (letter, rank) factors plus a central torus."""
    if central_rank < 0:
        raise InvalidCartanType("central torus rank must be nonnegative")
    norm = []
    for letter, n in factors:
        norm.extend(normalize_factor(letter, n))
    total = sum(n for _, n in norm)
    dim = total + central_rank
    roots, coroots, owner = [], [], []
    off = 0
    for fi, (letter, n) in enumerate(norm):
        m = cartan_matrix(letter, n)
        for i in range(n):
            row = [0] * dim
            for j in range(n):
                row[off + j] = m[i][j]
            roots.append(tuple(row))
            e = [0] * dim
            e[off + i] = 1
            coroots.append(tuple(e))
            owner.append(fi)
        off += n
    return RootDatum(
        factors=tuple(norm),
        central_rank=central_rank,
        ambient_dim=dim,
        simple_roots=tuple(roots),
        simple_coroots=tuple(coroots),
        factor_of_simple=tuple(owner),
    )


@dataclass(frozen=True)
class Root:
    """One root with its coordinates over the simple roots/coroots."""

    coords: tuple        # over simple roots
    vec: tuple           # ambient weight coordinates
    coroot_coords: tuple  # beta^vee over simple coroots
    coroot_vec: tuple    # functional on the ambient lattice
    half_length: Fraction  # (beta, beta)/2 in the normalization used here

    @property
    def height(self):
        return sum(self.coords)


def _length_data(datum):
    """(alpha_i, alpha_i)/2 per simple root, one scale per Dynkin component."""
    m = datum.cartan_pairing()
    k = datum.rank
    d = [None] * k
    for start in range(k):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(k):
                if i != j and m[i][j] != 0 and d[j] is None:
                    d[j] = canon(d[i] * Fraction(m[j][i], m[i][j]))
                    stack.append(j)
    return tuple(d)


@lru_cache(maxsize=None)
def positive_roots(datum):
    """All positive roots, by reflection closure of the simple system."""
    k = datum.rank
    if k == 0:
        return ()
    m = datum.cartan_pairing()
    lengths = _length_data(datum)
    seen = {}
    frontier = []
    for i in range(k):
        e = tuple(1 if j == i else 0 for j in range(k))
        seen[e] = (e, lengths[i])
        frontier.append(e)
    while frontier:
        nxt = []
        for b in frontier:
            c, d = seen[b]
            for j in range(k):
                pair_b = canon(sum(b[t] * m[t][j] for t in range(k)))
                pair_c = canon(sum(c[t] * m[j][t] for t in range(k)))
                b2 = tuple(
                    canon(b[t] - (pair_b if t == j else 0)) for t in range(k)
                )
                if b2 not in seen:
                    c2 = tuple(
                        canon(c[t] - (pair_c if t == j else 0)) for t in range(k)
                    )
                    seen[b2] = (c2, d)
                    nxt.append(b2)
        frontier = nxt
    out = []
    for b, (c, d) in seen.items():
        if all(x >= 0 for x in b):
            vec = cvec(
                tuple(
                    sum(b[i] * datum.simple_roots[i][a] for i in range(k))
                    for a in range(datum.ambient_dim)
                )
            )
            cv = cvec(
                tuple(
                    sum(c[i] * datum.simple_coroots[i][a] for i in range(k))
                    for a in range(datum.ambient_dim)
                )
            )
            out.append(Root(b, vec, c, cv, d))
    out.sort(key=lambda r: (r.height, r.coords))
    return tuple(out)


@lru_cache(maxsize=None)
def rho_vee(datum):
    """Half-sum of positive coroots, as a functional on the ambient lattice."""
    acc = [Fraction(0)] * datum.ambient_dim
    for r in positive_roots(datum):
        for a in range(datum.ambient_dim):
            acc[a] += Fraction(r.coroot_vec[a], 2)
    return cvec(acc)


def height(datum, w):
    """<w, rho^vee>; strictly monotone along dominance order."""
    return vdot(w, rho_vee(datum))


@lru_cache(maxsize=None)
def rho_strict(datum):
    """Some vector pairing to 1 with every simple coroot."""
    if datum.rank == 0:
        return (0,) * datum.ambient_dim
    sol = lin_solve(datum.simple_coroots, (1,) * datum.rank)
    if sol is None:
        raise InternalConsistencyError("simple coroots are dependent")
    return sol


def dominant_representative(datum, w):
    """Dominant W-orbit representative plus the word moving w to it."""
    cur = cvec(w)
    word = []
    while True:
        j = next(
            (i for i in range(datum.rank) if datum.pairing(cur, i) < 0), None
        )
        if j is None:
            return cur, tuple(word)
        cur = datum.reflect(j, cur)
        word.append(j)


def dual_weight(datum, w):
    """Highest weight of the dual module, -w0 w, for dominant w."""
    return dominant_representative(datum, vneg_vec(w))[0]


def vneg_vec(w):
    return tuple(canon(-x) for x in w)


def weyl_orbit(datum, w):
    seen = {cvec(w)}
    frontier = [cvec(w)]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(datum.rank):
                u = datum.reflect(i, v)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return seen


@dataclass(frozen=True)
class WeylElement:
    matrix: tuple
    word: tuple

    @property
    def length(self):
        return len(self.word)

    def apply(self, w):
        return mat_vec(self.matrix, w)

    @property
    def sign(self):
        return -1 if self.length % 2 else 1


@lru_cache(maxsize=None)
def _enumerate_weyl_cached(datum, cap):
    order = datum.weyl_order()
    if order > cap:
        raise WeylCapExceeded(order, cap)
    gens = [datum.reflection_matrix(i) for i in range(datum.rank)]
    ident = identity(datum.ambient_dim)
    elems = {ident: ()}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            w = elems[m]
            for j, s in enumerate(gens):
                m2 = mat_mul(m, s)
                if m2 not in elems:
                    elems[m2] = w + (j,)
                    nxt.append(m2)
        frontier = nxt
    if len(elems) != order:
        raise InternalConsistencyError(
            f"Weyl enumeration produced {len(elems)} elements, expected {order}"
        )
    out = [WeylElement(m, w) for m, w in elems.items()]
    out.sort(key=lambda e: (e.length, e.word))
    return tuple(out)


def enumerate_weyl(datum, cap=DEFAULT_WEYL_CAP):
    """All Weyl group elements with reduced words, identity first."""
    return _enumerate_weyl_cached(datum, cap)


def longest_element(datum, cap=DEFAULT_WEYL_CAP):
    if datum.rank == 0:
        return WeylElement(identity(datum.ambient_dim), ())
    elems = enumerate_weyl(datum, cap)
    return elems[-1]


def w0_image(datum, w):
    """Image of w under the longest element (no full enumeration needed).

    The word moving a strictly antidominant vector to the dominant chamber is
    a reduced word for w0; it is applied here in the same order it was
    recorded.
    """
    word0 = dominant_representative(datum, vneg_vec(rho_strict(datum)))[1]
    cur = cvec(w)
    for j in word0:
        cur = datum.reflect(j, cur)
    return cur


# -- Levi subdata and Dynkin classification ---------------------------------

def _match_component(sub_m):
    """Classify an irreducible Cartan matrix; returns (letter, rank, perm)
    with perm[k] = local index of the node in Bourbaki position k."""
    n = len(sub_m)
    candidates = []
    for letter in "ACBDEFG":  # prefer C over B so BC2 components read as C2
        try:
            std = cartan_matrix(letter, n)
        except InvalidCartanType:
            continue
        candidates.append((letter, std))
    for letter, std in candidates:
        for perm in permutations(range(n)):
            ok = True
            for a in range(n):
                for b in range(n):
                    if std[a][b] != sub_m[perm[a]][perm[b]]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return letter, n, perm
    raise InvalidCartanType("submatrix is not a Cartan matrix of finite type")


def datum_from_root_list(parent, roots, coroots, central_rank=None):
    """Build a (sub)datum on the parent's ambient lattice from explicit
    simple roots and coroot functionals."""
    k = len(roots)
    m = tuple(tuple(vdot(r, c) for c in coroots) for r in roots)
    # split into components
    comp_of = [None] * k
    comps = []
    for s in range(k):
        if comp_of[s] is not None:
            continue
        comp = [s]
        comp_of[s] = len(comps)
        stack = [s]
        while stack:
            i = stack.pop()
            for j in range(k):
                if i != j and m[i][j] != 0 and comp_of[j] is None:
                    comp_of[j] = len(comps)
                    comp.append(j)
                    stack.append(j)
        comps.append(sorted(comp))
    factors, order = [], []
    for comp in comps:
        sub = tuple(tuple(m[i][j] for j in comp) for i in comp)
        letter, n, perm = _match_component(sub)
        factors.append((letter, n))
        order.append(tuple(comp[perm[a]] for a in range(n)))
    owner = [0] * k
    for fi, comp in enumerate(comps):
        for i in comp:
            owner[i] = fi
    if central_rank is None:
        central_rank = parent.ambient_dim - k
    return RootDatum(
        factors=tuple(factors),
        central_rank=central_rank,
        ambient_dim=parent.ambient_dim,
        simple_roots=tuple(cvec(r) for r in roots),
        simple_coroots=tuple(cvec(c) for c in coroots),
        factor_of_simple=tuple(owner),
        standard_order=tuple(order),
    )


def levi_subdatum(datum, simple_subset):
    """Standard Levi on a subset of simple roots; shares the ambient lattice."""
    subset = sorted(set(simple_subset))
    for i in subset:
        if not 0 <= i < datum.rank:
            raise IndexError(f"simple root index {i} out of range")
    roots = [datum.simple_roots[i] for i in subset]
    coroots = [datum.simple_coroots[i] for i in subset]
    return datum_from_root_list(datum, roots, coroots)


def subsystem_datum(datum, root_subset):
    """Datum on the root subsystem given by a closed symmetric set of roots,
    presented by its indecomposable positive elements."""
    pos = [r for r in root_subset]
    vecs = {r.vec for r in pos}
    simple = []
    for r in pos:
        decomposable = any(
            vsub(r.vec, s.vec) in vecs for s in pos if s.vec != r.vec
        )
        if not decomposable:
            simple.append(r)
    simple.sort(key=lambda r: (r.height, r.coords))
    return datum_from_root_list(
        datum, [r.vec for r in simple], [r.coroot_vec for r in simple]
    )


# -- normalizer / centralizer of a subspace of t* ---------------------------

@dataclass(frozen=True)
class SubspaceGroupData:
    a_star_basis: tuple
    normalizer_elements: tuple
    centralizer_elements: tuple
    gamma_matrices: tuple          # faithful action on a*-coordinates
    gamma_representatives: tuple   # one WeylElement per gamma matrix
    reflection_indices: tuple      # indices into gamma_matrices

    @property
    def gamma_order(self):
        return len(self.gamma_matrices)


def subspace_normalizer(datum, a_star_basis, cap=DEFAULT_WEYL_CAP):
    """N(a*), C(a*) and the faithful quotient acting on a*."""
    basis = echelon_basis(list(a_star_basis))
    k = len(basis)
    elems = enumerate_weyl(datum, cap)
    normalizer, centralizer = [], []
    gamma = {}
    for w in elems:
        images = [w.apply(b) for b in basis]
        coeffs = []
        inside = True
        for img in images:
            c = in_span(basis, img)
            if c is None:
                inside = False
                break
            coeffs.append(c)
        if not inside:
            continue
        normalizer.append(w)
        if all(img == b for img, b in zip(images, basis)):
            centralizer.append(w)
        # action on a*-coordinates: columns are images of basis vectors
        mat = tuple(tuple(coeffs[j][i] for j in range(k)) for i in range(k))
        if mat not in gamma:
            gamma[mat] = w
    mats = sorted(gamma.keys())
    if len(normalizer) != len(mats) * len(centralizer):
        raise InternalConsistencyError("|N| != |Gamma| * |C|")
    refl = tuple(
        i for i, g in enumerate(mats)
        if k > 0 and rank([vsub(row, identity(k)[r]) for r, row in enumerate(g)]) == 1
    )
    return SubspaceGroupData(
        a_star_basis=tuple(basis),
        normalizer_elements=tuple(normalizer),
        centralizer_elements=tuple(centralizer),
        gamma_matrices=tuple(mats),
        gamma_representatives=tuple(gamma[m] for m in mats),
        reflection_indices=refl,
    )

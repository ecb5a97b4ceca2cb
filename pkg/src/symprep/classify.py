"""Weight taxonomy: singular weights, terminal weights, terminal decompositions.

A dominant weight is singular when it is the defining fundamental weight of a
symplectic simple factor (type C_n for n >= 1, counting A1 as C1) and acts
trivially everywhere else.  A highest weight of a validated module is terminal
when it is singular with multiplicity one or restricts to a character of the
whole group.
"""

import enum
from dataclasses import dataclass

from .errors import InternalConsistencyError, SymprepError
from .linalg import cvec, in_span, vdot, vsub
from .reps import weight_key
from .rootdata import positive_roots


class WeightStatus(enum.Enum):
    CHARACTER = "character"
    SINGULAR = "singular"
    NON_TERMINAL = "non_terminal"


def _symplectic_node(letter, rank):
    """Bourbaki index of the node carrying the defining symplectic weight,
    or None when the factor has no such representation."""
    if letter == "A" and rank == 1:
        return 0
    if letter == "C":
        return 0
    if letter == "B" and rank == 2:
        return 1  # B2 = C2 with reversed numbering; the short node carries it
    return None


def is_singular_weight(datum, chi):
    """(flag, factor index): chi is the defining weight of a C-type factor and
    vanishes on every other factor and on the central torus."""
    chi = cvec(chi)
    if not datum.is_dominant(chi):
        raise SymprepError(f"{chi} is not dominant")
    if datum.rank == 0:
        return False, None
    # trivial on the central torus <=> chi lies in the span of the roots
    if in_span([r for r in datum.simple_roots], chi) is None:
        return False, None
    pairings = [vdot(chi, c) for c in datum.simple_coroots]
    for fi, (letter, rank) in enumerate(datum.factors):
        node = _symplectic_node(letter, rank)
        if node is None:
            continue
        target_index = datum.standard_order[fi][node]
        if all(
            p == (1 if i == target_index else 0) for i, p in enumerate(pairings)
        ):
            return True, fi
    return False, None


def singular_sp_halfdim(datum, factor_index):
    """m with Sp_{2m} the image of the singular factor's action."""
    letter, rank = datum.factors[factor_index]
    if letter in ("C", "B"):
        return rank
    if letter == "A" and rank == 1:
        return 1
    raise InternalConsistencyError("factor carries no symplectic weight")


def weight_status(spec, chi):
    """Status of a highest weight inside a validated module."""
    chi = cvec(chi)
    mult = spec.multiplicity(chi)
    if mult == 0:
        raise SymprepError(f"{chi} is not a summand of the module")
    datum = spec.datum
    if all(vdot(chi, c) == 0 for c in datum.simple_coroots):
        return WeightStatus.CHARACTER
    flag, _ = is_singular_weight(datum, chi)
    if flag and mult == 1:
        return WeightStatus.SINGULAR
    return WeightStatus.NON_TERMINAL


@dataclass(frozen=True)
class TerminalVerdict:
    terminal: bool
    witness: tuple          # a non-terminal weight, or None
    character_pairs: tuple  # one representative weight per (chi, -chi) pair
    sp_factor_sizes: tuple  # m_i per symplectic factor


def terminal_decomposition(spec):
    """Decide terminality and extract the character pairs and Sp-block sizes."""
    datum = spec.datum
    statuses = {w: weight_status(spec, w) for w, _ in spec.summands}
    non_terminal = [w for w, s in statuses.items() if s is WeightStatus.NON_TERMINAL]
    if non_terminal:
        witness = max(non_terminal, key=lambda w: weight_key(datum, w))
        return TerminalVerdict(False, witness, (), ())
    pairs = []
    chars = {w: m for w, m in spec.summands if statuses[w] is WeightStatus.CHARACTER}
    seen = set()
    for w in sorted(chars, key=lambda w: weight_key(datum, w), reverse=True):
        if w in seen:
            continue
        neg = cvec(tuple(-x for x in w))
        if neg == w:  # the zero character; validated multiplicity is even
            if chars[w] % 2:
                raise InternalConsistencyError("odd zero-character multiplicity")
            pairs.extend([w] * (chars[w] // 2))
            seen.add(w)
            continue
        if chars.get(neg, 0) != chars[w]:
            raise InternalConsistencyError("unpaired character summand")
        rep = max(w, neg, key=lambda v: weight_key(datum, v))
        pairs.extend([rep] * chars[w])
        seen.update({w, neg})
    sizes = []
    for w, m in spec.summands:
        if statuses[w] is WeightStatus.SINGULAR:
            _, fi = is_singular_weight(datum, w)
            sizes.append(singular_sp_halfdim(datum, fi))
    dim = spec.dim
    if 2 * sum(sizes) + 2 * len(pairs) != dim:
        raise InternalConsistencyError(
            f"terminal blocks account for {2*sum(sizes) + 2*len(pairs)} of {dim} dims"
        )
    return TerminalVerdict(True, None, tuple(pairs), tuple(sorted(sizes)))


@dataclass(frozen=True)
class TwoChiReport:
    chi: tuple
    symplectic_type: bool       # hypothesis: the irreducible carries a
    double_is_root: bool        # symplectic form.  2 chi in Delta+
    double_is_2a_minus_b: bool  # 2 chi = 2 alpha - beta
    double_is_a_plus_b: bool    # 2 chi = alpha + beta
    chi_is_root: bool
    singular: bool

    @property
    def any_condition(self):
        return (
            self.double_is_root
            or self.double_is_2a_minus_b
            or self.double_is_a_plus_b
        )


def lemma2chi_conditions(datum, chi):
    """Arithmetic sufficient conditions for singularity of the highest weight
    of an irreducible symplectic module, by brute force over pairs of positive
    roots.  The implications only hold under the symplectic-type hypothesis;
    both are asserted here."""
    from .reps import DualityClass, duality_class

    chi = cvec(chi)
    if not datum.is_dominant(chi):
        raise SymprepError(f"{chi} is not dominant")
    two_chi = cvec(tuple(2 * x for x in chi))
    pos = [r.vec for r in positive_roots(datum)]
    posset = set(pos)
    cond1 = two_chi in posset
    cond2 = any(
        cvec(vsub(tuple(2 * x for x in a), b)) == two_chi for a in pos for b in pos
    )
    cond3 = any(
        cvec(tuple(x + y for x, y in zip(a, b))) == two_chi for a in pos for b in pos
    )
    singular, _ = is_singular_weight(datum, chi)
    rep = TwoChiReport(
        chi=chi,
        symplectic_type=duality_class(datum, chi) is DualityClass.SYMPLECTIC,
        double_is_root=cond1,
        double_is_2a_minus_b=cond2,
        double_is_a_plus_b=cond3,
        chi_is_root=chi in posset,
        singular=singular,
    )
    if rep.symplectic_type and rep.any_condition and not singular:
        raise InternalConsistencyError(
            f"arithmetic singularity condition fired for non-singular {chi}"
        )
    if rep.symplectic_type and rep.chi_is_root:
        raise InternalConsistencyError(
            f"symplectic highest weight {chi} lies in Delta+"
        )
    if singular and rep.chi_is_root:
        raise InternalConsistencyError(f"singular weight {chi} lies in Delta+")
    return rep

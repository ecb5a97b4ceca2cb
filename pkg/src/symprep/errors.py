"""Exception hierarchy shared across the package."""


class SymprepError(Exception):
    """Base class for all library errors."""


class InvalidCartanType(SymprepError):
    """Unrecognized or out-of-range Cartan letter/rank combination."""


class DimensionMismatch(SymprepError):
    """Vector length incompatible with the ambient lattice."""


class WeylCapExceeded(SymprepError):
    """Weyl group larger than the configured enumeration cap."""

    def __init__(self, order, cap):
        super().__init__(
            f"group too large: |W| = {order} exceeds the enumeration cap {cap}"
        )
        self.order = order
        self.cap = cap


class BudgetExceeded(SymprepError):
    """Irrep dimension or symmetric-power budget exceeded."""


class NotACharacter(SymprepError):
    """Weight multiset is not the character of a genuine module."""


class ValidationError(SymprepError):
    """A representation spec fails the symplectic admissibility checks."""

    code = "Invalid"

    def __init__(self, weight, message=None):
        self.weight = tuple(weight)
        super().__init__(message or f"{self.code}({self.weight})")


class NotSelfDual(ValidationError):
    code = "NotSelfDual"


class OddOrthogonalMultiplicity(ValidationError):
    code = "OddOrthogonalMultiplicity"


class NotDominant(ValidationError):
    code = "NotDominant"


class SpecFormatError(SymprepError):
    """Malformed input document; carries field-addressed messages."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class NotSupported(SymprepError):
    """Requested matrix model is outside the constructible catalog."""


class NoNonTerminalWeight(SymprepError):
    """Reduction step requested on an already terminal representation."""


class NoReductionAvailable(SymprepError):
    """Local-structure verification requested on a terminal representation."""


class SOutsideDomain(SymprepError):
    """Sample pairs to zero against the chosen highest weight vector."""


class SingularSystem(SymprepError):
    """Triangular solve hit a vanishing diagonal entry."""


class DomainError(SymprepError):
    """Argument outside the domain of a partial map (e.g. y = 0)."""


class StageNotRealizable(SymprepError):
    """A reduction stage has no explicit matrix realization in the catalog."""


class NumericalDegeneracy(SymprepError):
    """Rank thresholds could not separate numerical subspaces."""


class InternalConsistencyError(SymprepError):
    """Two independent computations of the same quantity disagree; a defect."""

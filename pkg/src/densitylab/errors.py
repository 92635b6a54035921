"""Exception hierarchy shared across the package."""


class DensityLabError(Exception):
    """Base class for all densitylab errors."""


class PredicateCapExceeded(DensityLabError):
    """A predicate-backed set was queried beyond its enumeration cap."""

    def __init__(self, requested: int, cap: int):
        super().__init__(
            f"predicate set queried at {requested}, beyond its cap {cap}"
        )
        self.requested = requested
        self.cap = cap


class EnumerationBudgetExceeded(DensityLabError):
    """An operation without a closed form would enumerate past the budget."""

    def __init__(self, horizon: int, budget: int, what: str = "enumeration"):
        super().__init__(
            f"{what} at horizon {horizon} exceeds the budget of {budget}"
        )
        self.horizon = horizon
        self.budget = budget


class IndexBeyondSet(DensityLabError):
    """select(S, k) was asked for more elements than a finite set holds."""


class UnknownInfinitude(DensityLabError):
    """An operation requiring a finite/infinite decision met an 'unknown' flag."""


class CardinalityMismatch(DensityLabError):
    """Pairing of two finite sets with different cardinalities."""


class WitnessTooSparse(DensityLabError):
    """The extracted full-density witness fell below the configured floor."""

    def __init__(self, ratio, floor):
        super().__init__(
            f"witness ratio {ratio} is below the floor {floor}; "
            "the sequence does not look statistically convergent to the target"
        )
        self.ratio = ratio
        self.floor = floor


class NoViolationFound(DensityLabError):
    """Invariance-violation search on a permutation whose tail defect is small."""


class ParseError(DensityLabError):
    """Expression text did not conform to the grammar."""

    def __init__(self, message: str, position: int, expected: str = ""):
        detail = f" (expected {expected})" if expected else ""
        super().__init__(f"parse error at position {position}: {message}{detail}")
        self.position = position
        self.expected = expected


class ConfigError(DensityLabError):
    """Experiment configuration violated one of its invariants."""

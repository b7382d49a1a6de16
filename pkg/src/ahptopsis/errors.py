"""Exception hierarchy.

Every error raised by the library derives from :class:`AhpTopsisError`. The
CLI maps the three families below onto its exit codes:

* :class:`ProjectFormatError` -> 1 (file could not be parsed)
* :class:`ConsistencyGateFailed` -> 3
* any other :class:`ValidationError` -> 2
"""


class AhpTopsisError(Exception):
    pass


class ProjectFormatError(AhpTopsisError):
    """Malformed project/CSV/report document."""


class ValidationError(AhpTopsisError, ValueError):
    pass


class NonSquare(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class InvalidIdentifier(ValidationError):
    pass


class NonPositiveEntry(ValidationError):
    def __init__(self, pair, value):
        self.pair = pair
        self.value = value
        super().__init__(
            f"entry at ({pair[0] + 1},{pair[1] + 1}) must be positive and finite, got {value!r}"
        )


class ReciprocityViolation(ValidationError):
    """Worst offending pair (0-based) and its residual |a_ij * a_ji - 1|."""

    def __init__(self, pair, residual, ids=None):
        self.pair = pair
        self.residual = residual
        i, j = pair
        where = f"({i + 1},{j + 1})"
        if ids is not None:
            where += f" [{ids[i]} vs {ids[j]}]"
        super().__init__(f"reciprocity violated at {where}: residual {residual:.3g}")


class ScaleViolation(ValidationError):
    def __init__(self, pair, value):
        self.pair = pair
        self.value = value
        super().__init__(
            f"entry at ({pair[0] + 1},{pair[1] + 1}) = {value!r} lies outside the 1/9..9 scale"
        )


class NegativeScore(ValidationError):
    pass


class ZeroColumn(ValidationError):
    def __init__(self, criterion_id):
        self.criterion_id = criterion_id
        super().__init__(f"criterion {criterion_id!r} has an all-zero score column")


class EmptyCell(ValidationError):
    def __init__(self, alternative, criterion):
        self.alternative = alternative
        self.criterion = criterion
        super().__init__(f"no scores for alternative {alternative!r} on criterion {criterion!r}")


class ZeroWeightComponent(ValidationError):
    pass


class MissingRiEntry(ValidationError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"random index table has no entry for order {n}; supply a custom RI")


class CriterionSetMismatch(ValidationError):
    pass


class EmptySubset(ValidationError):
    pass


class KTooLarge(ValidationError):
    pass


class NoConvergence(ValidationError):
    def __init__(self, max_iter):
        self.max_iter = max_iter
        super().__init__(f"power iteration did not converge in {max_iter} iterations")


class DegenerateAlternative(ValidationError):
    def __init__(self, index, alternative=None):
        self.index = index
        self.alternative = alternative
        name = alternative if alternative is not None else f"#{index}"
        super().__init__(
            f"alternative {name} is at zero distance from both ideals; closeness undefined"
        )


class ConsistencyGateFailed(ValidationError):
    def __init__(self, failures, threshold):
        # failures: list of (expert_id, cr)
        self.failures = list(failures)
        self.threshold = threshold
        detail = ", ".join(
            f"{eid} (CR={'n/a' if cr is None else format(cr, '.4f')})" for eid, cr in self.failures
        )
        super().__init__(f"consistency gate failed (threshold {threshold}): {detail}")


class UnknownReportField(ValidationError):
    pass

"""Exception types raised across the package.

Every error derives from :class:`PCError` (itself a ``ValueError``), so callers
can catch the whole family at once. The CLI maps the class name to stderr.
"""

from __future__ import annotations


class PCError(ValueError):
    """Base class for all pairwise-comparison errors."""


class NonSquare(PCError):
    pass


class TooSmall(PCError):
    pass


class NonPositiveEntry(PCError):
    def __init__(self, i: int, j: int, value: float):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"entry ({i},{j}) = {value!r} is not a positive finite number")


class ReciprocityViolation(PCError):
    def __init__(self, i: int, j: int, product: float):
        self.i, self.j, self.product = i, j, product
        super().__init__(f"a[{i},{j}] * a[{j},{i}] = {product!r}, expected 1")


class UnitDiagonalViolation(PCError):
    def __init__(self, i: int, value: float):
        self.i, self.value = i, value
        super().__init__(f"diagonal entry ({i},{i}) = {value!r}, expected 1")


class NonPositiveWeight(PCError):
    def __init__(self, i: int, value: float):
        self.i, self.value = i, value
        super().__init__(f"weight {i} = {value!r} is not positive")


class InvalidScale(PCError):
    pass


class ParseError(PCError):
    pass


class NoConvergence(PCError):
    def __init__(self, iterations: int, change: float | None = None):
        self.iterations, self.change = iterations, change
        msg = f"power iteration did not converge after {iterations} iterations"
        if change is not None:
            msg += f" (last L1 change {change:.3e})"
        super().__init__(msg)


class InvalidLambda(PCError):
    pass


class LengthMismatch(PCError):
    pass


class TiesPresent(PCError):
    pass


class InvalidKI(PCError):
    pass


class DegenerateGap(PCError):
    pass


class KOutOfRange(PCError):
    pass

"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class RootRefinementError(ArithmeticError):
    """Newton polishing of polynomial roots did not converge."""


class SingularMatrixError(ArithmeticError):
    """LU factorization met a pivot column with no usable entry."""


class ShapeError(ValueError):
    """Operand dimensions do not agree."""


class NonPhysicalIterate(ArithmeticError):
    """An iterate went negative where y**(3/2) has to be evaluated.

    The offending abscissa and value are kept so solvers can decide how to
    damp the step.
    """

    def __init__(self, x, y):
        self.x = x
        self.y = y
        super().__init__(f"negative iterate y({float(x):.6g}) = {float(y):.3e}")

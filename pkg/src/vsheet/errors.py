"""Exception types for the vortex-sheet stability toolkit."""


class VortexSheetError(Exception):
    """Base class for all toolkit errors."""


class InvalidState(VortexSheetError, ValueError):
    """Background state violates a positivity or admissibility constraint."""


class DegenerateF(InvalidState):
    """Deformation gradient row is identically zero and strict mode is on."""


class ZeroFrequency(VortexSheetError, ValueError):
    """The zero frequency point is outside every admissible cone."""


class OutsideCone(VortexSheetError, ValueError):
    """Frequency point has negative growth part (gamma < 0)."""


class BranchAmbiguity(VortexSheetError, ValueError):
    """Square-root branch is ambiguous on the cut and no side hint was given."""


class SymbolPole(VortexSheetError, ArithmeticError):
    """Reduced-symbol entries blow up; carries the name of the vanished factor."""

    def __init__(self, factor, value=None):
        self.factor = factor
        self.value = value
        msg = f"reduced symbol pole: factor {factor} vanished"
        if value is not None:
            msg += f" (|value| = {abs(value):.3e})"
        super().__init__(msg)


class UnexpectedRoot(VortexSheetError, RuntimeError):
    """A determinant root was found that matches no predicted location."""

    def __init__(self, theta, det_abs):
        self.theta = theta
        self.det_abs = det_abs
        super().__init__(
            f"unexpected determinant root near theta = {theta:.12g}"
            f" (|det| = {det_abs:.3e})"
        )


class FitDiverged(VortexSheetError, RuntimeError):
    """A log-log exponent fit failed to converge to a power law."""


class DegenerateEigenvector(VortexSheetError, ArithmeticError):
    """Decaying-mode eigenvector vanished; no pivot can be selected."""


class SeparationFailed(VortexSheetError, ArithmeticError):
    """Triangularization with the frozen pivot failed at the requested point."""


class NearSingularBoundary(VortexSheetError, ArithmeticError):
    """Boundary matrix too close to singular for a trustworthy solve."""

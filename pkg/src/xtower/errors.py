"""Exception types shared across the package."""


class XTowerError(Exception):
    """Base class for all library errors."""


class FieldMismatch(XTowerError):
    """Operands belong to different field specs."""


class DivisionByZero(XTowerError, ZeroDivisionError):
    """Division or inversion of zero."""


class InvalidSubfield(XTowerError):
    """Requested subfield degree does not divide the extension degree."""


class NoSuchRoot(XTowerError):
    """No primitive m-th root of unity: m does not divide p^r - 1."""


class ZeroArgument(XTowerError):
    """Zero passed where a nonzero field element is required."""


class EvenCharacteristic(XTowerError):
    """Operation requires odd characteristic."""


class BadRoot(XTowerError):
    """Element does not have the required multiplicative order."""


class BadCharacteristic(XTowerError):
    """Construction is not available in this characteristic."""


class NoInvolution(XTowerError):
    """Field has no automorphism of order 2."""


class NoAlphaBeta(XTowerError):
    """No solution of alpha^2 + beta^2 = -1 (impossible over finite fields)."""


class NoRootOfUnity(XTowerError):
    """Representation field lacks the required root of unity."""


class BadLambda(XTowerError):
    """Trace-form scaling element violates its case condition."""


class DegenerateForm(XTowerError):
    """Form is degenerate where a nondegenerate one is required."""


class UnsupportedKind(XTowerError):
    """Form kind not supported by this operation."""


class GroupMismatch(XTowerError):
    """Elements belong to different groups."""


class InconsistentCount(XTowerError):
    """Isotropic count matches no extraspecial type (degeneracy guard)."""


class NotAnIsometry(XTowerError):
    """Matrix does not preserve the form."""


class NotASimilitude(XTowerError):
    """Matrix does not scale the form by the claimed factor."""


class DimensionMismatch(XTowerError):
    """Matrix or vector dimensions are incompatible."""


class CapExceeded(XTowerError):
    """Enumeration exceeded the configured cap."""


class EpsilonMismatch(XTowerError):
    """Tensor factors do not share the same central root of unity."""


class NotHermitian(XTowerError):
    """Hermitian form required."""


class WrongCase(XTowerError):
    """Operation invoked outside its splitting case."""


class NotProportional(XTowerError):
    """Empirical factor-set cross-check failed (bug guard)."""


class SplitFailure(XTowerError):
    """A verified pair violates s'(g)s'(h) = s'(gh) (bug guard)."""


class UnsupportedChain(XTowerError):
    """Tower chain configuration violates the case conditions."""


class DepthTooDeep(XTowerError):
    """Materialization depth exceeds the concrete-representation cap."""


class UnsupportedConstruction(XTowerError):
    """Construction is out of the supported concrete range."""

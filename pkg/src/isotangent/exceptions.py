"""Exception hierarchy.

Everything raised on purpose by the package derives from
:class:`IsotangentError`. :class:`InputError` additionally subclasses
``ValueError`` so that callers used to numpy/sklearn conventions can keep
catching that.
"""


class IsotangentError(Exception):
    """Base class for all package errors."""


class InputError(IsotangentError, ValueError):
    """Malformed input: wrong shape, non-finite entries, symmetry violated."""


class DegenerateSpectrumError(IsotangentError):
    """Two eigenvalues (or singular values) are closer than the tolerance."""


class DegenerateGapError(DegenerateSpectrumError):
    """A divided difference would divide by a (near) zero gap."""


class ConvergenceError(IsotangentError):
    """The dense decomposition backend did not converge."""


class IllConditionedError(IsotangentError):
    """A simple eigenvalue has (numerically) orthogonal left/right vectors."""


class AmbiguousMatchingError(IsotangentError):
    """Perturbed eigenvalues cannot be matched unambiguously to the originals."""


class NotInTangentError(IsotangentError):
    """The perturbation does not lie in the tangent space."""


class BoundInfeasibleError(IsotangentError):
    """A bound's denominator is not positive, so the bound says nothing."""


class RegimeError(IsotangentError):
    """The oracle left the perturbative regime (eigenvector normalization failed)."""

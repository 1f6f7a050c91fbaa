"""Exception hierarchy shared across the package."""


class HyposolveError(Exception):
    """Base class for all errors raised by hyposolve."""


# --- straight-line programs ---------------------------------------------


class MalformedSlp(HyposolveError):
    """Structurally invalid straight-line program (bad reference, id gap, ...)."""


class MalformedInput(HyposolveError):
    """Invalid monomial data (negative exponent, empty term list, ...)."""


class NonFiniteIntermediate(HyposolveError):
    """A NaN or infinity appeared during an evaluation or derivative sweep."""


# --- builders -------------------------------------------------------------


class InvalidParams(HyposolveError):
    """Builder parameters outside their legal range."""


class ZeroRow(HyposolveError):
    """A linear-form matrix contains an all-zero row."""


class DegreeTooLow(HyposolveError):
    """Directional derivative requires a homogeneous program of degree >= 2."""


class VanishingOnDirection(HyposolveError):
    """A linear form evaluates to zero at the requested direction."""


class DisconnectedGraph(HyposolveError):
    """Spanning-tree polynomial of a disconnected graph is identically zero."""


class TooLarge(HyposolveError):
    """Problem size exceeds the enumeration-scale limit."""


# --- cone geometry ----------------------------------------------------------


class IllConditioned(HyposolveError):
    """Univariate restriction refit residual too large to trust."""


class NonRealRoots(HyposolveError):
    """Root extraction left an imaginary residue above tolerance."""


class OutsideDomain(HyposolveError):
    """Point is not in the interior of the barrier's domain."""


# --- barriers / solver -----------------------------------------------------


class UnboundedSupport(HyposolveError):
    """Support function of a block is +infinity at the given dual slice."""


class SingularNormalMatrix(HyposolveError):
    """Cholesky factorization of A^T H A failed."""


class NonFiniteDirection(HyposolveError):
    """Newton direction contains NaN or infinity."""


class NonPositiveMu(HyposolveError):
    """Path parameter computed from the iterate is not positive."""


class StepTooSmall(HyposolveError):
    """Line search backtracked below the minimum step length."""

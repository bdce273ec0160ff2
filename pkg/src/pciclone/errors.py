"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the operation's valid domain.

    Raised for invalid mode counts, attenuation-regime requests (more input
    replicas than clones), out-of-range indices, and corrupted state data.
    """


class ConvergenceError(RuntimeError):
    """A numerical search failed to converge within its restart budget."""

"""Exception types shared across the engines."""


class DomainError(ValueError):
    """A search parameter or input lies outside its admissible range."""


class DimensionMismatch(ValueError):
    """A state and an operator do not share a basis dimension."""


class CapacityExceeded(MemoryError):
    """A full-space simulation would exceed the configured amplitude cap."""

"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of a formula or model."""


class NoThresholdError(RuntimeError):
    """The secret-sharing rate has no sign change on the searched interval."""


class UnreachableEfficiencyError(DomainError):
    """A requested efficiency exceeds what the channel delivers at zero distance."""

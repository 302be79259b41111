"""Shared exception types."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the configured evaluation budget."""


class ConfigError(ValueError):
    """An experiment configuration failed validation."""

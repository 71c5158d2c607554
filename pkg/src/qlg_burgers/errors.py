"""Exception hierarchy shared by every module."""


class QLGError(Exception):
    """Base class for errors raised by this package."""


class DomainError(QLGError, ValueError):
    """A value left its physical range (density outside [0, 2], occupation outside [0, 1])."""


class ConfigError(QLGError, ValueError):
    """Invalid run or solver configuration. ``key`` names the offending entry."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


class ContractError(QLGError, ValueError):
    """Inputs that violate an operation's preconditions."""


class AnalysisError(QLGError, RuntimeError):
    """A fit or calibration could not produce a trustworthy estimate."""

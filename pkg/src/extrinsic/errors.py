"""Exception hierarchy.

Input problems derive from :class:`InputError` (a ``ValueError``); failures of an
analysis on otherwise valid input derive from :class:`AnalysisError`.  The CLI
maps the two families onto distinct exit codes.
"""


class InputError(ValueError):
    """Malformed or out-of-contract input."""


class InvalidDistributionError(InputError):
    pass


class CorrelationError(InputError):
    """Correlation matrix is not symmetric, unit-diagonal and PSD."""


class DecodeError(InputError):
    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class AnalysisError(RuntimeError):
    """Valid input for which the requested quantity is undefined."""


class NonUniqueStationaryError(AnalysisError):
    pass


class PosteriorUndefinedError(AnalysisError):
    pass

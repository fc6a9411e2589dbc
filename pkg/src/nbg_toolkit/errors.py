class NbgError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidGameError(NbgError, ValueError):
    pass


class GameFormatError(InvalidGameError):
    """A game file parsed but its content does not describe a valid game."""


class InvalidDistributionError(NbgError, ValueError):
    pass


class UnsupportedGameError(NbgError, TypeError):
    """The operation does not apply to the game's kind or class."""


class ProblemTooLargeError(NbgError, ValueError):
    pass


class InvalidDigraphError(NbgError, ValueError):
    pass


class InvalidParameterError(NbgError, ValueError):
    """A numeric option (delta, step, alpha, degree ...) is outside its range."""


class NoEquilibriumError(NbgError, RuntimeError):
    pass

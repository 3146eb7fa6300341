"""Exception hierarchy shared across the package."""


class RankFairError(Exception):
    """Base class for all errors raised by rankfair."""


class ParameterDomainError(RankFairError, ValueError):
    """Attention-model parameter outside its admissible open interval."""


class InfeasibleTargetError(RankFairError, ValueError):
    """No parameter value can achieve the requested target."""


class LabelError(RankFairError, ValueError):
    """Class label not present in the class space."""


class ModeError(RankFairError, ValueError):
    """Operation applied to the wrong class-space mode (categorical vs scalar)."""


class ShapeError(RankFairError, ValueError):
    """Mismatched lengths or dimensions between inputs."""


class ConfigError(RankFairError, ValueError):
    """Inconsistent or incomplete audit configuration."""


class ParseError(RankFairError, ValueError):
    """Malformed input file.

    `line` is the 1-based line number of the offending row when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

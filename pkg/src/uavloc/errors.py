class ConfigError(ValueError):
    """Invalid scenario or parameter values. CLI exit code 2."""


class NumericalError(ArithmeticError):
    """A non-finite value showed up in a simulation. CLI exit code 3."""

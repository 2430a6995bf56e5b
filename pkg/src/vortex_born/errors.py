"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class NotConverged(RuntimeWarning):
    """A quadrature hit its node budget before successive refinements agreed.

    Emitted as a warning; the partial result is still returned with
    ``converged=False``.
    """


class Infeasible(NotConverged):
    """The requested tolerance cannot be met within the global evaluation cap."""


class RegimeWarning(UserWarning):
    """An approximation is used outside the regime it was derived for."""


class ConfigError(Exception):
    """Invalid scenario configuration (maps to CLI exit code 2)."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)

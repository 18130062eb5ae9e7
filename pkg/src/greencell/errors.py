"""Exception hierarchy."""


class GreenCellError(Exception):
    """Base class for all package errors."""


class DimensionError(GreenCellError, ValueError):
    """Array or profile sizes do not match the scenario."""


class TariffError(GreenCellError, ValueError):
    """Tariff prices violate ``0 < sell < buy < grid``."""


class InfeasibleError(GreenCellError):
    """Some terminal's rate requirement cannot be met."""


class UnsupportedScenarioError(GreenCellError):
    """The scheme is not defined for this scenario shape."""


class BracketError(GreenCellError, ValueError):
    """Root-finding bracket has no sign change."""


class ConvergenceError(GreenCellError, RuntimeError):
    """An iterative method hit its iteration cap."""


class ScenarioValidationError(GreenCellError, ValueError):
    """A scenario failed validation; ``report`` lists every problem."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(report.problems))


class ScenarioParseError(GreenCellError, ValueError):
    """A scenario file could not be parsed."""

"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside its valid domain (bad threshold, degenerate
    geometry, out-of-bounds span, chip rasterizing to zero cells, ...)."""


class NoSinkError(ValueError):
    """Steady-state solve requested with heat applied but no heat sink:
    h = 0 on every cell while total power > 0.  No bounded solution exists
    under all-adiabatic boundaries."""


class RDInstabilityError(ArithmeticError):
    """Reaction-diffusion fields produced NaN/Inf, typically because the
    time step exceeds the explicit-Euler stability bound."""


class ParseError(ValueError):
    """Config file is not valid UTF-8 JSON."""


class ValidationError(ValueError):
    """Config constraint violated.  Message names the offending field."""

    def __init__(self, field: str, problem: str):
        self.field = field
        self.problem = problem
        super().__init__(f"{field}: {problem}")

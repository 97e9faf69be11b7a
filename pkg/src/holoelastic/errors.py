"""Exception types raised across the package."""


class HoloElasticError(Exception):
    """Base class for all package errors."""


class OverflowGuard(HoloElasticError, FloatingPointError):
    """Exponential argument exceeded the overflow guard."""


class BranchCutHit(HoloElasticError, ValueError):
    """A square root was evaluated exactly on its branch cut or branch point."""


class NonFiniteLoss(HoloElasticError, FloatingPointError):
    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class NonFiniteEnergy(NonFiniteLoss):
    pass


class ShapeMismatch(HoloElasticError, ValueError):
    pass


class DegenerateProbe(HoloElasticError, ValueError):
    pass


class ModeMismatch(HoloElasticError, ValueError):
    pass


class EmptyDomain(HoloElasticError, ValueError):
    pass


class UnsupportedBC(HoloElasticError, ValueError):
    pass


class ContourOutsideDomain(HoloElasticError, ValueError):
    pass


class OutOfDomain(HoloElasticError, ValueError):
    pass


class RangeError(HoloElasticError, ValueError):
    pass


class ConfigError(HoloElasticError, ValueError):
    pass

"""Exception types raised by the library."""


class GammaInterpError(ValueError):
    pass


class DegenerateDataError(GammaInterpError):
    pass


class NotExtremalError(GammaInterpError):
    pass


class UnsolvableError(GammaInterpError):
    pass


class RoyalMapError(GammaInterpError):
    pass


class SuperficialMapError(GammaInterpError):
    pass


class NotAnalyticError(GammaInterpError):
    pass


class CancellationError(GammaInterpError):
    pass


class ConstructionError(GammaInterpError):
    pass

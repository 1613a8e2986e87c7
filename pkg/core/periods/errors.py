class PeriodError(Exception):
    """
    Base class for period evaluation errors.
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return self.message


class ZeroDenominator(PeriodError):
    pass


class NotInCone(PeriodError):
    pass


class InvalidVolume(PeriodError):
    pass


__all__ = ["PeriodError", "ZeroDenominator", "NotInCone", "InvalidVolume"]

class SeriesError(Exception):
    """
    Base class for series engine errors.
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return self.message


class NonUnitEigenvalue(SeriesError):
    pass


class MissingStructure(SeriesError):
    """
    An infinite cone was reached with no reduction structure to reduce it.
    """

    pass


class DegenerateSpecialization(SeriesError):
    """
    Evaluating a family coefficient hit a zero denominator or a unit became zero.
    """

    pass


class NonInvertible(DegenerateSpecialization):
    pass


class InvalidCoefficient(SeriesError):
    pass


__all__ = [
    "SeriesError",
    "NonUnitEigenvalue",
    "MissingStructure",
    "DegenerateSpecialization",
    "NonInvertible",
    "InvalidCoefficient",
]

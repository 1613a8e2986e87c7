class ConeError(Exception):
    """
    Base class for cone calculus errors.
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return self.message


class SectorMismatch(ConeError):
    pass


class UnknownRoot(ConeError):
    pass


class SearchCapExceeded(ConeError):
    """
    The integer search ran out of budget before reaching a decision.
    """

    pass


class RankLimitExceeded(ConeError):
    pass


class Unbounded(ConeError):
    pass


__all__ = ["ConeError", "SectorMismatch", "UnknownRoot", "SearchCapExceeded", "RankLimitExceeded", "Unbounded"]

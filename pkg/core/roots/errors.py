class RootDatumError(Exception):
    """
    Base class for errors raised while building or using root data.
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return self.message


class DimensionMismatch(RootDatumError):
    pass


class UnknownPair(RootDatumError):
    pass


class UnsupportedRank(RootDatumError):
    pass


class InvalidGroup(RootDatumError):
    pass


class InvalidPair(RootDatumError):
    pass


class InternalInconsistency(RootDatumError):
    pass

class ReductionError(Exception):
    """
    Base class for reduction structure errors.
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return self.message


class TemplateError(ReductionError):
    pass


class UnknownStructure(ReductionError):
    pass


class EmptyStructure(ReductionError):
    """
    Minimality was requested for a structure without triples.
    """

    pass


__all__ = ["ReductionError", "TemplateError", "UnknownStructure", "EmptyStructure"]

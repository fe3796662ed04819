"""Exception types shared across the package."""


class ConvspecError(Exception):
    pass


class GroupError(ConvspecError, ValueError):
    """Invalid group construction or mixing elements of different groups."""


class ElementParseError(GroupError):
    def __init__(self, literal, reason):
        self.literal = literal
        self.reason = reason
        super().__init__(f"cannot parse element {literal!r}: {reason}")


class ResourceCapError(ConvspecError, RuntimeError):
    """A configured size cap (ball, support, dense eigensolve) was exceeded."""


class BallCapError(ResourceCapError):
    pass


class SupportCapError(ResourceCapError):
    pass


class PreconditionError(ConvspecError, ValueError):
    """An operation was called outside its documented precondition."""


class NonAbelianError(PreconditionError):
    pass

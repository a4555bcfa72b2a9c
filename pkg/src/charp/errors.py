"""Exception hierarchy shared by the library and the CLI."""


class CharpError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(CharpError, ValueError):
    """An operation was called outside its documented domain."""


class ScanCapError(CharpError):
    """An exhaustive scan or field extension exceeded the configured cap."""


class SchemaError(CharpError):
    """A serialized document does not match the expected schema.

    ``pointer`` is a JSON-pointer string locating the offending value.
    """

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.reason = message


class StructureError(CharpError):
    """A decorated tree is malformed (not a tree, dangling references, ...)."""


class EliminationError(CharpError):
    """The inductive elimination met a step with t-valuation different from one."""

    def __init__(self, message, state):
        super().__init__(message)
        self.state = state

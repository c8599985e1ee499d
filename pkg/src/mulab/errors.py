class MalformedInputError(ValueError):
    """Input data does not describe a valid object."""


class ResourceError(RuntimeError):
    """A configured size budget would be exceeded."""


class ConstructionError(ValueError):
    """A requested gluing or construction is not admissible."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness

"""
Exceptions raised by markovdsep.

Validation operations report problems as lists of Violation records; the
classes below are for operations whose preconditions are not met.
"""


class MarkovDsepError(Exception):
    """Base class of every error raised by this package."""


class UnknownIdentifierError(MarkovDsepError, KeyError):
    """A wire, box or type identifier does not exist in the object queried."""

    def __str__(self):
        return Exception.__str__(self)


class InterfaceMismatchError(MarkovDsepError, ValueError):
    """Interfaces of two diagrams, or of a kernel and a model, do not line up."""


class DimensionMismatchError(MarkovDsepError, ValueError):
    """Backend kernels or objects have incompatible shapes."""


class ModelShapeError(MarkovDsepError):
    """A model does not have the shape an operation requires."""


class NotPureBloomError(ModelShapeError):
    """The operation needs every wire to be a global output."""


class InvalidQueryError(MarkovDsepError, ValueError):
    """A separation query or a marginal set is not made of output wires."""


class MissingAssignmentError(MarkovDsepError, KeyError):
    """An interpretation does not cover a type or box type of the model."""

    def __str__(self):
        return Exception.__str__(self)


class NoConditionalsError(MarkovDsepError):
    """The backend cannot build conditionals."""


class ModelFileError(MarkovDsepError, IOError):
    """
    A model or data file could not be ingested.

    Carries the file path, the JSON field path of the offending entry and,
    for syntax errors, the line and column.
    """

    def __init__(self, message, path=None, field=None, line=None, column=None):
        self.message = message
        self.path = path
        self.field = field
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self):
        where = []
        if self.path:
            where.append(str(self.path))
        if self.line is not None:
            where.append('line {}'.format(self.line))
            if self.column is not None:
                where.append('column {}'.format(self.column))
        if self.field:
            where.append(self.field)
        if where:
            return '{}: {}'.format(', '.join(where), self.message)
        return self.message

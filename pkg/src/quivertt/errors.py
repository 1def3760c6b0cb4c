"""Exception types shared across the package.

The CLI maps these onto exit codes: workspace/parse problems are code 1,
precondition violations are code 2, failed verifications are code 3.
"""


class QuiverTTError(Exception):
    """Base class for all package errors."""


class UnsupportedRing(QuiverTTError):
    pass


class RingMismatch(QuiverTTError):
    """Operands built over different coefficient rings."""


class BadElement(QuiverTTError):
    """An element that does not belong to the ring (or cannot be parsed)."""


class CyclicQuiver(QuiverTTError):
    """Raised with a witness cycle when the arrow graph is not acyclic."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("quiver has an oriented cycle: " + " -> ".join(self.cycle))


class UnknownVertex(QuiverTTError):
    pass


class UnknownArrow(QuiverTTError):
    pass


class DuplicateName(QuiverTTError):
    pass


class ShapeMismatch(QuiverTTError):
    """Matrix or representation data with inconsistent dimensions."""


class NotPerfect(QuiverTTError):
    """Operation needs a complex of projectives and none can be produced."""


class NotDerivable(QuiverTTError):
    """Termwise tensor would not compute the derived tensor for these inputs."""


class NonRegularRing(QuiverTTError):
    """Resolution refused: the coefficient ring has infinite global dimension."""


class NotAField(QuiverTTError):
    pass


class MonotonicityViolation(QuiverTTError):
    """A poset-map classification form whose exceptions do not refine the default."""


class IndexOutOfRange(QuiverTTError):
    """A part index outside a filtration system's part list."""


class UniverseNotClosed(QuiverTTError):
    """Brute-force closure left the finite universe it was given."""


class UnknownName(QuiverTTError):
    """A command referenced an object, support, or filtration not in the workspace."""


class WorkspaceError(QuiverTTError):
    """Malformed workspace file or object specification."""

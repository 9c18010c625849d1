"""Exception types shared across the toolkit."""


class TermboundError(Exception):
    """Base class for all toolkit errors."""


class ParseError(TermboundError):
    """Input text does not conform to the expected grammar."""


class DomainTooLarge(TermboundError):
    """Ordinal does not fit below the requested power of omega."""


class OccupiedSlot(TermboundError):
    """Tree path does not address an empty slot."""


class LabelNotDecreasing(TermboundError):
    """Child label is not strictly below its parent's label."""


class BudgetExceeded(TermboundError):
    """A configured enumeration, step, or value ceiling was exceeded."""


class NoRelation(TermboundError):
    """No coordinate of the later point decreases below the earlier one."""


class NotHomogeneous(TermboundError):
    """Sequence has a pair with no strictly decreasing coordinate."""


class BranchNotInTree(TermboundError):
    """Colored list is not a branch of the given tree."""


class EmptySequence(TermboundError):
    """Operation requires a nonempty sequence."""


class NoWitness(TermboundError):
    """Scan found no witness; the stated precondition was violated."""


class LemmaViolated(TermboundError):
    """No lexicographic non-descent inside the computed bound interval."""


class LengthMismatch(TermboundError):
    """Tuples of different lengths were compared."""


class ArityMismatch(TermboundError):
    """Argument count does not match the term's arity."""


class NameCollision(TermboundError):
    """Fresh-name prefix collides with existing variable names."""

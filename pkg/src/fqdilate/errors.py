"""Shared exception types with dedicated CLI exit codes."""


class GuardExceededError(RuntimeError):
    """A search or enumeration would exceed its configured resource guard.

    Deliberately distinct from an exhaustive "nothing found" outcome:
    conflating the two would corrupt certification results.
    """


class FalsificationError(AssertionError):
    """An exactly-verified guarantee failed on a concrete instance.

    Raising this means either the implementation is wrong or a proven
    statement has a counterexample; it is never a recoverable condition.
    """

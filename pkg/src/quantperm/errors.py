"""Shared error type for domain violations.

Raised whenever an operation's preconditions are broken (index out of
range, mismatched radicands, malformed model file, inadmissible
permutation).  The CLI maps it to exit code 1.
"""


class DomainError(ValueError):
    pass

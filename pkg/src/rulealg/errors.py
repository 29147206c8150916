"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """Raised when an operation is called outside its precondition."""

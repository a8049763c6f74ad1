"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid argument or configuration value. CLI maps this to exit code 2."""


class ResourceError(RuntimeError):
    """Register too large for a dense operation. CLI maps this to exit code 3."""

'''Exception types raised by the solvers and the instance loader.

All of them subclass a builtin exception, so callers that already catch
ValueError or TypeError keep working; the command line front end uses the
concrete class to pick its exit code.
'''


class InstanceValidationError(ValueError):
    '''Raised when an Instance (or a FiniteSupport) breaks its invariants.

    Attributes:
    - violations (list): the messages returned by `model.validate`.
    '''

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(
            "Invalid instance: " + "; ".join(self.violations))


class DistributionMismatchError(TypeError):
    '''Raised when a solver is asked to handle a component distribution it
    does not support, e.g. dp-uniform on a finite PMF.'''

    def __init__(self, method: str, item: int, kind: str):
        self.method = method
        self.item = item
        self.kind = kind
        super().__init__(
            f"Method '{method}' cannot handle component {item} "
            f"with distribution of type '{kind}'.")


class InstanceParseError(ValueError):
    '''Raised when an instance, support or result file cannot be read or
    does not follow the documented JSON format.'''

""" Exceptions raised by the solver, the oracle and the instance reader """
from typing import Dict


__all__ = (
    'MMSTError',
    'MatroidDomainError',
    'GraphDomainError',
    'ConfigurationError',
    'InfeasibleError',
    'UnboundedError',
    'InvariantError',
    'StuckError',
    'InstanceParseError'
)


class MMSTError(Exception):
    """ base class """


class MatroidDomainError(MMSTError, ValueError):
    """ element or subset outside a ground set, or invalid matroid parameters """


class GraphDomainError(MMSTError, ValueError):
    """ unknown node or edge """


class ConfigurationError(MMSTError, ValueError):
    """ enumeration threshold exceeded or invalid configuration value """


class InfeasibleError(MMSTError):
    """ the linear program has no feasible point """

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class UnboundedError(MMSTError):
    """ the linear program is unbounded below """


class InvariantError(MMSTError, AssertionError):
    """ a runtime-verified guarantee failed """

    def __init__(self, message: str, state: Dict = None):
        super().__init__(message)
        self.state = state


class StuckError(InvariantError):
    """ an iteration made no progress """


class InstanceParseError(MMSTError, ValueError):
    """ malformed instance file """

    def __init__(self, message: str, field: str = None):
        super().__init__(f'{field}: {message}' if field else message)
        self.field = field

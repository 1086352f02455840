"""Exception hierarchy shared by every ontomvn module."""

from __future__ import annotations


class OntoMvnError(Exception):
    """Base class for all errors raised by ontomvn."""


class ConfigError(OntoMvnError):
    """Problem with project configuration (exit code 2 on the command line)."""


# -- ontology documents -----------------------------------------------------


class OntologySyntaxError(OntoMvnError):
    def __init__(self, message: str, line: int, column: int, token: str | None = None):
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}"
        if token is not None:
            where += f" near {token!r}"
        super().__init__(f"{message} ({where})")


class UnsupportedConstruct(OntoMvnError):
    def __init__(self, construct: str, line: int | None = None, column: int | None = None):
        self.construct = construct
        self.line = line
        self.column = column
        msg = f"unsupported construct {construct}"
        if line is not None:
            msg += f" at line {line}, column {column}"
        super().__init__(msg)


# -- project descriptor -----------------------------------------------------


class XmlError(ConfigError):
    pass


class SchemaError(ConfigError):
    def __init__(self, message: str, element: str | None = None):
        self.element = element
        super().__init__(f"{message} (at {element})" if element else message)


class MissingPom(ConfigError):
    pass


class SuiteError(ConfigError):
    pass


# -- repositories -----------------------------------------------------------


class NotFound(OntoMvnError):
    def __init__(self, coordinate, tried=(), chain=()):
        self.coordinate = coordinate
        self.tried = list(tried)
        self.chain = list(chain)
        msg = f"artifact {coordinate} not found"
        if self.tried:
            msg += "; tried " + ", ".join(self.tried)
        if self.chain:
            msg += "; requested via " + " -> ".join(str(c) for c in self.chain)
        super().__init__(msg)


class ChecksumMismatch(OntoMvnError):
    def __init__(self, path: str, expected: str | None = None, actual: str | None = None):
        self.path = path
        self.expected = expected
        self.actual = actual
        super().__init__(f"checksum mismatch for {path}: expected {expected}, got {actual}")


class TransportError(OntoMvnError):
    def __init__(self, url: str, cause: object = None):
        self.url = url
        self.cause = cause
        super().__init__(f"transport failure for {url}: {cause}")


class RemoteRejected(OntoMvnError):
    def __init__(self, status: int, url: str = ""):
        self.status = status
        self.url = url
        super().__init__(f"remote rejected {url} with HTTP {status}")


class BindError(OntoMvnError):
    pass


class MissingOntologyFile(ConfigError):
    pass


# -- resolution / scaffolding -----------------------------------------------


class UnmappableImport(OntoMvnError):
    def __init__(self, iri: str, reason: str | None = None):
        self.iri = iri
        self.reason = reason
        msg = f"cannot resolve import {iri}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class NonEmptyDirectory(ConfigError):
    pass

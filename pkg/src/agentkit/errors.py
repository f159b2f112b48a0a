"""Exception types shared across the package.

Tool-dispatch failures (UnknownTool, SchemaViolation, HandlerError, timeouts)
are normally converted into error observations rather than raised across the
agent loop; the exception classes exist so the conversion sites have something
precise to catch.
"""

from __future__ import annotations


class AgentKitError(Exception):
    """Base class for every error this package raises deliberately."""


# --- manifest / ingest ---------------------------------------------------

class MalformedManifest(AgentKitError):
    pass


class DuplicateSourceId(AgentKitError):
    pass


class MissingField(AgentKitError):
    pass


class UnsupportedFormat(AgentKitError):
    pass


class DecodeError(AgentKitError):
    pass


class PdfExtractorUnavailable(AgentKitError):
    pass


class FetchError(AgentKitError):
    pass


class EmbeddingError(AgentKitError):
    pass


# --- embeddings / index --------------------------------------------------

class DimensionMismatch(AgentKitError):
    pass


class ProviderUnavailable(AgentKitError):
    pass


class ProviderRejectedInput(AgentKitError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class TooFewEntries(AgentKitError):
    pass


class EmptyKnowledgeBase(AgentKitError):
    pass


# --- artifact file -------------------------------------------------------

class ArtifactError(AgentKitError):
    pass


class BadMagic(ArtifactError):
    pass


class UnsupportedVersion(ArtifactError):
    pass


class TruncatedFile(ArtifactError):
    pass


class DigestMismatch(ArtifactError):
    pass


# --- tool registry -------------------------------------------------------

class InvalidDescriptor(AgentKitError):
    pass


class SchemaViolation(AgentKitError):
    """Argument rejected by a tool's input schema.

    ``path`` is the JSON pointer of the first failing location.
    """

    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.path = path


class UnknownTool(AgentKitError):
    pass


class HandlerError(AgentKitError):
    pass


# --- agent loop ----------------------------------------------------------

class ParseFailure(AgentKitError):
    pass


class SessionBusy(AgentKitError):
    pass


# --- gateway / federation ------------------------------------------------

class DuplicateServiceId(AgentKitError):
    pass


class ToolNameCollision(AgentKitError):
    pass


class MalformedRegister(AgentKitError):
    pass


class ExtensionGone(AgentKitError):
    pass


# --- code runner ---------------------------------------------------------

class RunnerUnavailable(AgentKitError):
    pass


class WorkdirDenied(AgentKitError):
    pass


# --- microscope simulator ------------------------------------------------

class OutOfRange(AgentKitError):
    pass


class BadExposure(AgentKitError):
    pass

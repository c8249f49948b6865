"""Exception types raised across the pipeline.

Everything derives from PkgTriageError so callers can catch the whole
family; the CLI maps subclasses onto exit codes.
"""


class PkgTriageError(Exception):
    """Base class for all errors raised by this package."""


class MissingManifest(PkgTriageError):
    """No package.json was found at the package root."""


class MalformedManifest(PkgTriageError):
    """package.json exists but is not valid JSON or lacks name/version."""


class IoFailure(PkgTriageError):
    """An unrecoverable filesystem or decoding failure."""


class NoMeasurableSource(PkgTriageError):
    """Every filtered source file has zero lines of code."""

    def __init__(self, message: str, name: str | None = None, version: str | None = None):
        self.name = name
        self.version = version
        super().__init__(message)


class MalformedRange(PkgTriageError):
    """A version range string could not be parsed."""


class MalformedVersion(MalformedRange):
    """A version string could not be parsed."""


class MalformedAdvisory(PkgTriageError):
    """An advisory database line is invalid or duplicates an id."""


class InvalidConfidence(PkgTriageError):
    """Confidence level outside the supported z-score table."""


class MissingPackage(PkgTriageError):
    """Ground-truth file names packages absent from the results file."""

    def __init__(self, names: list[str]):
        self.names = names
        super().__init__(f"packages in truth file missing from results: {', '.join(names)}")

"""Exception hierarchy shared by the library and the command line."""


class MvwaveError(Exception):
    """Base class for every error raised by mvwave."""

    exit_code = 1


class ArgumentError(MvwaveError, ValueError):
    """A call argument is out of its documented range."""

    exit_code = 2


class FormatError(MvwaveError, ValueError):
    """An input file or text record is malformed."""

    exit_code = 3


class ConfigurationError(MvwaveError, ValueError):
    """The display geometry cannot support the requested kernel."""

    exit_code = 4


class InvalidPlaneError(ConfigurationError):
    """Plane index is zero or beyond the configured range."""

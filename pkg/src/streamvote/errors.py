"""Exception hierarchy shared by all streamvote modules."""


class StreamVoteError(Exception):
    """Base class for every error raised by this package."""


class ParseError(StreamVoteError, ValueError):
    """Malformed vote-stream text."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class BallotTypeError(StreamVoteError, ValueError):
    """A vote's ballot variant does not match the rule or election."""


class ParameterError(StreamVoteError, ValueError):
    """Out-of-range parameter such as epsilon, k or m."""


class InvalidCommitteeError(StreamVoteError, ValueError):
    """Committee is empty, has duplicates, or names unknown candidates."""


class ScaleError(StreamVoteError):
    """Instance is too large for an exhaustive routine."""

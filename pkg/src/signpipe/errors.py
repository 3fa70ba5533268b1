"""Exception types raised across signpipe."""

from __future__ import annotations


class SignpipeError(Exception):
    """Base class for all signpipe errors."""


class MissingFile(SignpipeError, FileNotFoundError):
    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"no such file: {self.path}")


class UnwritableOutput(SignpipeError, OSError):
    def __init__(self, path, reason: str = ""):
        self.path = str(path)
        super().__init__(f"cannot write {self.path}" + (f": {reason}" if reason else ""))


# lexicon

class MalformedLine(SignpipeError, ValueError):
    def __init__(self, line_number: int, line: str = "", reason: str = ""):
        self.line_number = line_number
        self.line = line
        msg = f"malformed line {line_number}: {line!r}"
        super().__init__(msg + (f" ({reason})" if reason else ""))


class EmptyLexicon(SignpipeError, ValueError):
    pass


class InvalidLexicon(SignpipeError, ValueError):
    pass


# embeddings

class MalformedHeader(SignpipeError, ValueError):
    pass


class ZeroVector(SignpipeError, ValueError):
    pass


class LengthMismatch(SignpipeError, ValueError):
    pass


# motion

class BadJointCount(SignpipeError, ValueError):
    def __init__(self, got: int, frame: int | None = None):
        self.got = got
        self.frame = frame
        where = f" in frame {frame}" if frame is not None else ""
        super().__init__(f"expected 133 joints, got {got}{where}")


class BadLayout(SignpipeError, ValueError):
    pass


class NonFiniteCoordinate(SignpipeError, ValueError):
    def __init__(self, frame: int, joint: int):
        self.frame = frame
        self.joint = joint
        super().__init__(f"non-finite coordinate at frame {frame}, joint {joint}")


class TooFewFrames(SignpipeError, ValueError):
    def __init__(self, got: int):
        self.got = got
        super().__init__(f"a clip needs at least 2 frames, got {got}")


class MalformedClip(SignpipeError, ValueError):
    pass


class DegenerateSkeleton(SignpipeError, ValueError):
    pass


class DuplicateKnotTime(SignpipeError, ValueError):
    def __init__(self, index: int, time: float):
        self.index = index
        self.time = time
        super().__init__(f"knot times must be strictly increasing (index {index}, t={time!r})")


class EmptyClipList(SignpipeError, ValueError):
    pass


class NoResolvableSigns(SignpipeError, LookupError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__("no gloss token resolved to a clip; missing: " + ", ".join(self.missing))


# metrics

class EmptyCorpus(SignpipeError, ValueError):
    pass


class ShapeMismatch(SignpipeError, ValueError):
    pass


class ConfigError(SignpipeError, ValueError):
    pass

"""Exceptions shared by the search modules."""


class SearchTimeout(RuntimeError):
    """A search ran past its deadline."""


class VerificationError(AssertionError):
    """A permutation the search was about to emit is not an automorphism.

    This signals an engine bug; it is never caught internally.
    """


class Deadline:
    """Cheap periodic wall-clock check for long searches."""

    def __init__(self, seconds=None):
        import time
        self._clock = time.monotonic
        self.limit = None if seconds is None else self._clock() + seconds
        self._tick = 0

    def check(self):
        if self.limit is None:
            return
        self._tick += 1
        if self._tick & 255 == 0 and self._clock() > self.limit:
            raise SearchTimeout("time limit exceeded")

"""The exceptions optipac raises. Usage-type problems (bad shapes, bad parameters) are also ValueErrors,
and problems that only show up while running are RuntimeErrors, so callers that don't care about the
details can catch the builtin families."""


class OptipacError(Exception):
    """Base class of every optipac error."""


class BadShape(OptipacError, ValueError):
    """A training sequence or selector has a size the algorithm can't handle (e.g. |S| is not a power of 6)."""


class BadParams(OptipacError, ValueError):
    """A numeric parameter is outside the range where the requested quantity is defined."""


class NotRealizable(OptipacError, RuntimeError):
    """An ERM was handed a sample that no hypothesis in its class is consistent with."""


class NonConvergence(NotRealizable):
    """The perceptron ran out of its pass budget without a clean pass."""


class StreamExhausted(OptipacError, RuntimeError):
    """A boosting run asked for more random blocks than its random string holds."""


class NotSerializable(OptipacError, RuntimeError):
    """A hypothesis came from an ERM optipac doesn't know how to write to disk."""

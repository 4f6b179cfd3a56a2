"""Named random substreams derived from a single master seed."""

import numpy as np

_SEED_MASK = (1 << 64) - 1


def named_rng(seed: int, stream: str) -> np.random.Generator:
    """Return a generator for one named substream of ``seed``.

    Streams with different names are statistically independent, and the same
    (seed, name) pair always reproduces the same sequence, which is what makes
    whole runs replayable from one 64-bit seed.
    """
    entropy = [int(seed) & _SEED_MASK, *stream.encode("utf-8")]
    return np.random.default_rng(np.random.SeedSequence(entropy))

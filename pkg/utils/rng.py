"""Seed plumbing. Every random draw in the package goes through here."""

import numpy as np


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for ``seed`` on the named substream.

    Substreams let independent units (particles, trials, sweep cells) draw
    reproducibly no matter in which order, or on which worker, they run.
    """
    return np.random.default_rng(np.random.SeedSequence([seed, *stream]))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]

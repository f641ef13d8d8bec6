"""Deterministic random streams for reproducible (and parallel) Monte Carlo.

Every random draw in the package comes from a counter-based generator keyed
by ``(master_seed, label, index)``.  A slot/trial therefore owns its own
stream, and results can never depend on worker count, chunking, or call
order.
"""

import numpy as np

# Stream labels.  New experiment types get a new label; never reuse one.
TOPOLOGY = 0
SLOT = 1
OUTAGE = 2
ALIGNMENT = 3
TERMS = 4
PHASES = 5


def stream(master_seed: int, label: int, index: int = 0) -> np.random.Generator:
    """Return the generator for one stream.

    Pure function of its arguments: calling it twice with the same triple
    yields generators that produce identical draw sequences.
    """
    key = np.random.SeedSequence(master_seed, spawn_key=(label, index))
    return np.random.Generator(np.random.Philox(key))

"""Deterministic random streams.

Every randomized draw in the library comes from (seed, operation label,
item index), so reruns and thread counts never change results.
"""

from __future__ import annotations

import hashlib
import random


def stable_rng(seed: int, label: str, index: int = 0) -> random.Random:
    digest = hashlib.sha256(f"{seed}|{label}|{index}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))

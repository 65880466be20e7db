"""Deterministic named sub-streams derived from one run seed.

Every random draw in a run flows from ``substream(seed, name)`` so that
components (contacts, capabilities, workload) can be regenerated
independently and reproducibly on any platform.
"""

from __future__ import annotations

import hashlib
import random


def substream_seed(seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{seed}/{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def substream(seed: int, name: str) -> random.Random:
    return random.Random(substream_seed(seed, name))

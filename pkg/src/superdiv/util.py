"""Small shared helpers: seed derivation and canonical float formatting."""

from __future__ import annotations

import hashlib


def derive_seed(base_seed: int, *labels: str) -> int:
    """Derive a child seed from a base seed and a label path.

    The derivation is a SHA-256 hash of ``"<base>/<label>/<label>..."``, so
    child streams are stable across runs, platforms and worker scheduling.
    """
    text = "/".join([str(int(base_seed)), *labels])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def fmt_float(value: float) -> str:
    """Render a float with full round-trip precision (stable across runs)."""
    return repr(float(value))

"""Blinded manual-evaluation backend: session building, an append-only
judgment store, the rating HTTP service, and unblinded exports."""

from .export import MissingKey, unblind_and_export
from .session import (
    InsufficientFlagged,
    MissingArm,
    MODEL_ARMS,
    build_stage1_session,
    build_stage2_session,
)
from .store import ConflictingRecord, CorruptStore, JudgmentStore

__all__ = [
    "MODEL_ARMS",
    "ConflictingRecord",
    "CorruptStore",
    "InsufficientFlagged",
    "JudgmentStore",
    "MissingArm",
    "MissingKey",
    "build_stage1_session",
    "build_stage2_session",
    "unblind_and_export",
]

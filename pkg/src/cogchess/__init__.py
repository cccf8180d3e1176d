"""Chunk-based chess reasoner with emotion-guided search and an
affect-signal analyzer for multimodal recordings."""

__version__ = "0.1.0"

from .board import Board, Move, Piece, Square, parse_fen, emit_fen  # noqa: F401

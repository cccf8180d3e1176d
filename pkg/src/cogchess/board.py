"""Chess state, FEN I/O, legal move generation and terminal detection.

Board and Move are immutable values; all operations are pure functions of
their inputs, so they are safe to share between threads. The hot kernel
(attack tests, move generation, perft) lives in the compiled
``cogchess._movegen`` extension with ``cogchess._movegen_py`` as a
pure-Python fallback, selected here at import time.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

if os.environ.get("COGCHESS_PURE") == "1":
    from . import _movegen_py as _mg
    KERNEL = "python"
else:
    try:
        from . import _movegen as _mg  # type: ignore[attr-defined]
        KERNEL = "compiled"
    except ImportError:
        from . import _movegen_py as _mg
        KERNEL = "python"


class FenError(ValueError):
    """Malformed or illegal FEN. `code` identifies the specific violation."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class IllegalMoveError(ValueError):
    pass


class Color(Enum):
    WHITE = "white"
    BLACK = "black"

    @property
    def other(self) -> "Color":
        return Color.BLACK if self is Color.WHITE else Color.WHITE


class PieceKind(Enum):
    PAWN = "pawn"
    KNIGHT = "knight"
    BISHOP = "bishop"
    ROOK = "rook"
    QUEEN = "queen"
    KING = "king"


class GameStatus(Enum):
    ONGOING = "ongoing"
    CHECK = "check"
    CHECKMATE = "checkmate"
    STALEMATE = "stalemate"


_KIND_CODE = {
    PieceKind.PAWN: 1, PieceKind.KNIGHT: 2, PieceKind.BISHOP: 3,
    PieceKind.ROOK: 4, PieceKind.QUEEN: 5, PieceKind.KING: 6,
}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}
_FEN_LETTER = {
    PieceKind.PAWN: "p", PieceKind.KNIGHT: "n", PieceKind.BISHOP: "b",
    PieceKind.ROOK: "r", PieceKind.QUEEN: "q", PieceKind.KING: "k",
}
_LETTER_KIND = {v: k for k, v in _FEN_LETTER.items()}


@dataclass(frozen=True, order=True)
class Square:
    """Board coordinate with 1-based file (a=1) and rank."""

    file: int
    rank: int

    def __post_init__(self):
        if not (1 <= self.file <= 8 and 1 <= self.rank <= 8):
            raise ValueError(f"square off board: file={self.file} rank={self.rank}")

    @property
    def index(self) -> int:
        """Flat index, a1 = 0 .. h8 = 63, rank-major."""
        return (self.rank - 1) * 8 + (self.file - 1)

    @property
    def name(self) -> str:
        return "abcdefgh"[self.file - 1] + str(self.rank)

    @classmethod
    def from_index(cls, i: int) -> "Square":
        return cls((i & 7) + 1, (i >> 3) + 1)

    @classmethod
    def from_name(cls, name: str) -> "Square":
        if len(name) != 2 or name[0] not in "abcdefgh" or name[1] not in "12345678":
            raise ValueError(f"bad square name: {name!r}")
        return cls("abcdefgh".index(name[0]) + 1, int(name[1]))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Piece:
    """A piece with a board-unique id. kind/color never change for an id."""

    id: str
    kind: PieceKind
    color: Color
    square: Square


_FLAG_NAMES = (
    (1, "capture"), (2, "castle-short"), (4, "castle-long"),
    (8, "en-passant"), (16, "double-push"),
)
_PROMO_CODE = {None: 0, PieceKind.KNIGHT: 2, PieceKind.BISHOP: 3,
               PieceKind.ROOK: 4, PieceKind.QUEEN: 5}
_CODE_PROMO = {v: k for k, v in _PROMO_CODE.items()}


@dataclass(frozen=True)
class Move:
    from_sq: Square
    to_sq: Square
    promotion: Optional[PieceKind] = None
    flags: frozenset = frozenset()

    @property
    def uci(self) -> str:
        s = self.from_sq.name + self.to_sq.name
        if self.promotion is not None:
            s += _FEN_LETTER[self.promotion]
        return s

    def sort_key(self):
        return (self.from_sq.index, self.to_sq.index, _PROMO_CODE[self.promotion])

    def __str__(self) -> str:
        return self.uci


def _move_from_tuple(t) -> Move:
    frm, to, promo, flags = t
    names = frozenset(name for bit, name in _FLAG_NAMES if flags & bit)
    return Move(Square.from_index(frm), Square.from_index(to), _CODE_PROMO[promo], names)


def _move_to_tuple(m: Move):
    bits = 0
    for bit, name in _FLAG_NAMES:
        if name in m.flags:
            bits |= bit
    return (m.from_sq.index, m.to_sq.index, _PROMO_CODE[m.promotion], bits)


@dataclass(frozen=True)
class CastlingRights:
    white_short: bool = False
    white_long: bool = False
    black_short: bool = False
    black_long: bool = False

    @property
    def mask(self) -> int:
        return (self.white_short * 1 | self.white_long * 2
                | self.black_short * 4 | self.black_long * 8)

    @classmethod
    def from_mask(cls, m: int) -> "CastlingRights":
        return cls(bool(m & 1), bool(m & 2), bool(m & 4), bool(m & 8))

    @property
    def fen(self) -> str:
        s = ("K" if self.white_short else "") + ("Q" if self.white_long else "") \
            + ("k" if self.black_short else "") + ("q" if self.black_long else "")
        return s or "-"


@dataclass(frozen=True)
class Board:
    """Full chess state. Equality is positional (piece ids are ignored)."""

    pieces: tuple
    side_to_move: Color
    castling: CastlingRights
    en_passant: Optional[Square]
    halfmove_clock: int
    fullmove_number: int
    _squares: bytes = field(init=False, repr=False, compare=False, default=b"")

    def __post_init__(self):
        arr = bytearray(64)
        for p in self.pieces:
            code = _KIND_CODE[p.kind] + (6 if p.color is Color.BLACK else 0)
            arr[p.square.index] = code
        object.__setattr__(self, "_squares", bytes(arr))

    # -- kernel plumbing ---------------------------------------------------

    @property
    def _stm(self) -> int:
        return 0 if self.side_to_move is Color.WHITE else 1

    @property
    def _ep(self) -> int:
        return self.en_passant.index if self.en_passant else -1

    def piece_at(self, square: Square) -> Optional[Piece]:
        for p in self.pieces:
            if p.square == square:
                return p
        return None

    def piece_by_id(self, pid: str) -> Optional[Piece]:
        for p in self.pieces:
            if p.id == pid:
                return p
        return None

    # -- operations ----------------------------------------------------------

    def legal_moves(self) -> list:
        """All legal moves, in deterministic (from, to, promotion) order."""
        raw = _mg.legal_moves(self._squares, self._stm, self.castling.mask, self._ep)
        return [_move_from_tuple(t) for t in raw]

    def apply_move(self, move: Move) -> "Board":
        """Apply a legal move, returning the successor board."""
        t = _move_to_tuple(move)
        legal = _mg.legal_moves(self._squares, self._stm, self.castling.mask, self._ep)
        if t not in legal:
            raise IllegalMoveError(f"illegal move {move.uci} in {emit_fen(self)}")
        return self._apply_raw(t)

    def _apply_raw(self, t) -> "Board":
        frm, to, promo, flags = t
        nsq, nstm, ncast, nep, nhalf, nfull = _mg.apply_move(
            self._squares, self._stm, self.castling.mask, self._ep,
            self.halfmove_clock, self.fullmove_number, frm, to, promo, flags)

        by_index = {p.square.index: p for p in self.pieces}
        pieces = []
        mover = by_index[frm]
        cap_sq = to
        if flags & 8:  # en-passant: victim is on the bypassed square
            cap_sq = to - 8 if self.side_to_move is Color.WHITE else to + 8
        for idx, p in by_index.items():
            if idx == frm or idx == cap_sq:
                continue
            pieces.append(p)
        if promo:
            new_id = f"{mover.id}={_FEN_LETTER[_CODE_PROMO[promo]]}{self.fullmove_number}"
            pieces.append(Piece(new_id, _CODE_PROMO[promo], mover.color,
                                Square.from_index(to)))
        else:
            pieces.append(Piece(mover.id, mover.kind, mover.color, Square.from_index(to)))
        if flags & 2:  # short castle: rook h-file -> f-file
            rook_frm, rook_to = (7, 5) if self.side_to_move is Color.WHITE else (63, 61)
            rook = by_index[rook_frm]
            pieces = [p for p in pieces if p.square.index != rook_frm]
            pieces.append(Piece(rook.id, rook.kind, rook.color, Square.from_index(rook_to)))
        elif flags & 4:  # long castle: rook a-file -> d-file
            rook_frm, rook_to = (0, 3) if self.side_to_move is Color.WHITE else (56, 59)
            rook = by_index[rook_frm]
            pieces = [p for p in pieces if p.square.index != rook_frm]
            pieces.append(Piece(rook.id, rook.kind, rook.color, Square.from_index(rook_to)))

        pieces.sort(key=lambda p: p.square.index)
        return Board(
            pieces=tuple(pieces),
            side_to_move=Color.WHITE if nstm == 0 else Color.BLACK,
            castling=CastlingRights.from_mask(ncast),
            en_passant=Square.from_index(nep) if nep >= 0 else None,
            halfmove_clock=nhalf,
            fullmove_number=nfull,
        )

    def in_check(self) -> bool:
        return _mg.in_check(self._squares, self.side_to_move is Color.WHITE)

    def game_status(self) -> GameStatus:
        has_moves = bool(_mg.legal_moves(self._squares, self._stm,
                                         self.castling.mask, self._ep))
        if self.in_check():
            return GameStatus.CHECK if has_moves else GameStatus.CHECKMATE
        return GameStatus.ONGOING if has_moves else GameStatus.STALEMATE

    def perft(self, depth: int) -> int:
        """Leaf count of the legal game tree at exactly `depth`."""
        return _mg.perft(self._squares, self._stm, self.castling.mask, self._ep, depth)

    def attack_squares(self, square: Square) -> list:
        """Squares attacked by the piece on `square` (pawn capture squares only)."""
        return [Square.from_index(i) for i in _mg.attack_targets(self._squares, square.index)]

    def attackers_of(self, square: Square, color: Color) -> list:
        """Pieces of `color` attacking `square`."""
        idxs = _mg.attackers(self._squares, square.index, color is Color.WHITE)
        by_index = {p.square.index: p for p in self.pieces}
        return [by_index[i] for i in idxs]

    def find_move(self, uci: str) -> Move:
        """Look up a legal move by UCI string."""
        for m in self.legal_moves():
            if m.uci == uci:
                return m
        raise IllegalMoveError(f"no legal move {uci!r} in {emit_fen(self)}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Board):
            return NotImplemented
        return (self._squares == other._squares
                and self.side_to_move == other.side_to_move
                and self.castling == other.castling
                and self.en_passant == other.en_passant
                and self.halfmove_clock == other.halfmove_clock
                and self.fullmove_number == other.fullmove_number)

    def __hash__(self):
        return hash((self._squares, self.side_to_move, self.castling,
                     self.en_passant, self.halfmove_clock, self.fullmove_number))


START_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


def parse_fen(text: str) -> Board:
    """Parse a 6-field FEN string into a validated Board."""
    fields = text.split()
    if len(fields) != 6:
        raise FenError("field-count", f"expected 6 fields, got {len(fields)}")
    placement, active, castling, ep, halfmove, fullmove = fields

    ranks = placement.split("/")
    if len(ranks) != 8:
        raise FenError("rank-count", f"expected 8 ranks, got {len(ranks)}")
    pieces = []
    for rank_i, row in enumerate(ranks):
        rank = 8 - rank_i
        file = 1
        for ch in row:
            if ch.isdigit():
                file += int(ch)
            elif ch.lower() in _LETTER_KIND:
                if file > 8:
                    raise FenError("rank-overflow", f"rank {rank} exceeds 8 squares")
                kind = _LETTER_KIND[ch.lower()]
                color = Color.WHITE if ch.isupper() else Color.BLACK
                sq = Square(file, rank)
                pid = f"{'w' if color is Color.WHITE else 'b'}{_FEN_LETTER[kind].upper()}-{sq.name}"
                pieces.append(Piece(pid, kind, color, sq))
                file += 1
            else:
                raise FenError("bad-piece", f"unknown piece letter {ch!r}")
        if file != 9:
            raise FenError("rank-length", f"rank {rank} has {file - 1} squares")

    for color in (Color.WHITE, Color.BLACK):
        kings = [p for p in pieces if p.kind is PieceKind.KING and p.color is color]
        if len(kings) != 1:
            raise FenError("king-count", f"{color.value} has {len(kings)} kings")
    for p in pieces:
        if p.kind is PieceKind.PAWN and p.square.rank in (1, 8):
            raise FenError("pawn-on-back-rank", f"pawn on {p.square.name}")

    if active not in ("w", "b"):
        raise FenError("bad-side", f"side to move must be w or b, got {active!r}")
    side = Color.WHITE if active == "w" else Color.BLACK

    if castling != "-" and (not castling or any(c not in "KQkq" for c in castling)):
        raise FenError("bad-castling", f"bad castling field {castling!r}")
    rights = CastlingRights(
        white_short="K" in castling, white_long="Q" in castling,
        black_short="k" in castling, black_long="q" in castling)
    # Drop rights that the placement cannot support (normalization).
    at = {p.square.index: (p.kind, p.color) for p in pieces}
    wk_home = at.get(4) == (PieceKind.KING, Color.WHITE)
    bk_home = at.get(60) == (PieceKind.KING, Color.BLACK)
    rights = CastlingRights(
        white_short=rights.white_short and wk_home and at.get(7) == (PieceKind.ROOK, Color.WHITE),
        white_long=rights.white_long and wk_home and at.get(0) == (PieceKind.ROOK, Color.WHITE),
        black_short=rights.black_short and bk_home and at.get(63) == (PieceKind.ROOK, Color.BLACK),
        black_long=rights.black_long and bk_home and at.get(56) == (PieceKind.ROOK, Color.BLACK))

    ep_sq: Optional[Square] = None
    if ep != "-":
        try:
            ep_sq = Square.from_name(ep)
        except ValueError as exc:
            raise FenError("bad-en-passant", str(exc)) from exc
        if ep_sq.rank not in (3, 6):
            raise FenError("bad-en-passant", f"en-passant square {ep} not on rank 3/6")

    try:
        half = int(halfmove)
        full = int(fullmove)
    except ValueError as exc:
        raise FenError("bad-clock", f"non-integer clock field") from exc
    if half < 0 or full < 1:
        raise FenError("bad-clock", f"halfmove {half}, fullmove {full}")

    board = Board(tuple(sorted(pieces, key=lambda p: p.square.index)),
                  side, rights, ep_sq, half, full)
    if _mg.in_check(board._squares, side.other is Color.WHITE):
        raise FenError("side-not-to-move-in-check",
                       f"{side.other.value} is in check but {side.value} is to move")
    return board


def emit_fen(b: Board) -> str:
    """Serialize a Board to canonical 6-field FEN."""
    by_index = {p.square.index: p for p in b.pieces}
    rows = []
    for rank in range(8, 0, -1):
        row = ""
        run = 0
        for file in range(1, 9):
            p = by_index.get((rank - 1) * 8 + (file - 1))
            if p is None:
                run += 1
            else:
                if run:
                    row += str(run)
                    run = 0
                letter = _FEN_LETTER[p.kind]
                row += letter.upper() if p.color is Color.WHITE else letter
        if run:
            row += str(run)
        rows.append(row)
    ep = b.en_passant.name if b.en_passant else "-"
    side = "w" if b.side_to_move is Color.WHITE else "b"
    return (f"{'/'.join(rows)} {side} {b.castling.fen} {ep} "
            f"{b.halfmove_clock} {b.fullmove_number}")


def start_board() -> Board:
    return parse_fen(START_FEN)

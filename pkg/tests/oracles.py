"""Independent brute-force oracles used to cross-check the package.

Everything here is written directly from the rules of chess, on purpose
with different data structures and traversal than the package kernels:
positions are immutable dicts keyed by (file, rank) 0..7 coordinates,
moves are found by testing every (from, to) square pair against a
geometric reachability predicate, and application rebuilds the dict.
Keep it slow and obvious; it is the measuring stick, not the product.
"""

from collections import namedtuple

OPos = namedtuple("OPos", "pieces stm castles ep halfmove fullmove")
# pieces: dict {(f, r): ("P", "w")} with kind letter in PNBRQK + color w/b
# stm: "w"/"b"; castles: frozenset of "KQkq"; ep: (f, r) or None

OMove = namedtuple("OMove", "frm to promo kind")
# kind: "normal"/"capture"/"double"/"ep"/"castle-k"/"castle-q"; promo: letter or None


def from_board(board):
    """Convert a cogchess Board into the oracle's representation."""
    kind_letter = {"pawn": "P", "knight": "N", "bishop": "B",
                   "rook": "R", "queen": "Q", "king": "K"}
    pieces = {}
    for p in board.pieces:
        pieces[(p.square.file - 1, p.square.rank - 1)] = (
            kind_letter[p.kind.value], p.color.value[0])
    castles = set()
    if board.castling.white_short:
        castles.add("K")
    if board.castling.white_long:
        castles.add("Q")
    if board.castling.black_short:
        castles.add("k")
    if board.castling.black_long:
        castles.add("q")
    ep = None
    if board.en_passant:
        ep = (board.en_passant.file - 1, board.en_passant.rank - 1)
    return OPos(dict(pieces), board.side_to_move.value[0], frozenset(castles),
                ep, board.halfmove_clock, board.fullmove_number)


def _path_clear(pieces, a, b):
    """All squares strictly between a and b (colinear) are empty."""
    df = (b[0] > a[0]) - (b[0] < a[0])
    dr = (b[1] > a[1]) - (b[1] < a[1])
    f, r = a[0] + df, a[1] + dr
    while (f, r) != b:
        if (f, r) in pieces:
            return False
        f, r = f + df, r + dr
    return True


def geometric_attack(pieces, frm, to):
    """Does the piece at `frm` attack square `to` (capture geometry)?"""
    if frm == to:
        return False
    kind, color = pieces[frm]
    df = to[0] - frm[0]
    dr = to[1] - frm[1]
    if kind == "P":
        fwd = 1 if color == "w" else -1
        return dr == fwd and abs(df) == 1
    if kind == "N":
        return {abs(df), abs(dr)} == {1, 2}
    if kind == "K":
        return max(abs(df), abs(dr)) == 1
    if kind == "R":
        return (df == 0 or dr == 0) and _path_clear(pieces, frm, to)
    if kind == "B":
        return abs(df) == abs(dr) and _path_clear(pieces, frm, to)
    if kind == "Q":
        return (df == 0 or dr == 0 or abs(df) == abs(dr)) \
            and _path_clear(pieces, frm, to)
    raise ValueError(kind)


def square_attacked_by(pieces, sq, color):
    return any(c == color and geometric_attack(pieces, frm, sq)
               for frm, (k, c) in pieces.items())


def king_square(pieces, color):
    for sq, (k, c) in pieces.items():
        if k == "K" and c == color:
            return sq
    return None


def in_check(pieces, color):
    k = king_square(pieces, color)
    other = "b" if color == "w" else "w"
    return k is not None and square_attacked_by(pieces, k, other)


def _candidate_moves(pos):
    """Every geometrically possible move for the side to move (may leave
    the king in check; legality is filtered afterwards by simulation)."""
    pieces, stm = pos.pieces, pos.stm
    out = []
    for frm, (kind, color) in sorted(pieces.items()):
        if color != stm:
            continue
        for tf in range(8):
            for tr in range(8):
                to = (tf, tr)
                if to == frm:
                    continue
                occupant = pieces.get(to)
                if occupant and occupant[1] == stm:
                    continue
                if kind == "P":
                    fwd = 1 if stm == "w" else -1
                    home = 1 if stm == "w" else 6
                    last = 7 if stm == "w" else 0
                    df, dr = tf - frm[0], tr - frm[1]
                    move_kind = None
                    if df == 0 and dr == fwd and occupant is None:
                        move_kind = "normal"
                    elif df == 0 and dr == 2 * fwd and frm[1] == home \
                            and occupant is None \
                            and (frm[0], frm[1] + fwd) not in pieces:
                        move_kind = "double"
                    elif abs(df) == 1 and dr == fwd and occupant is not None:
                        move_kind = "capture"
                    elif abs(df) == 1 and dr == fwd and to == pos.ep:
                        move_kind = "ep"
                    if move_kind is None:
                        continue
                    if tr == last:
                        for promo in "NBRQ":
                            out.append(OMove(frm, to, promo, move_kind))
                    else:
                        out.append(OMove(frm, to, None, move_kind))
                else:
                    if geometric_attack(pieces, frm, to):
                        out.append(OMove(frm, to, None,
                                         "capture" if occupant else "normal"))
    # castling, re-derived from the rulebook
    other = "b" if stm == "w" else "w"
    home_r = 0 if stm == "w" else 7
    king_at = (4, home_r)
    if pieces.get(king_at) == ("K", stm):
        short_right = "K" if stm == "w" else "k"
        long_right = "Q" if stm == "w" else "q"
        if short_right in pos.castles and pieces.get((7, home_r)) == ("R", stm) \
                and (5, home_r) not in pieces and (6, home_r) not in pieces \
                and not square_attacked_by(pieces, (4, home_r), other) \
                and not square_attacked_by(pieces, (5, home_r), other) \
                and not square_attacked_by(pieces, (6, home_r), other):
            out.append(OMove(king_at, (6, home_r), None, "castle-k"))
        if long_right in pos.castles and pieces.get((0, home_r)) == ("R", stm) \
                and (1, home_r) not in pieces and (2, home_r) not in pieces \
                and (3, home_r) not in pieces \
                and not square_attacked_by(pieces, (4, home_r), other) \
                and not square_attacked_by(pieces, (3, home_r), other) \
                and not square_attacked_by(pieces, (2, home_r), other):
            out.append(OMove(king_at, (2, home_r), None, "castle-q"))
    return out


def apply(pos, move):
    """Apply a move functionally, returning the successor position."""
    pieces = dict(pos.pieces)
    stm = pos.stm
    other = "b" if stm == "w" else "w"
    kind, color = pieces.pop(move.frm)
    captured = move.to in pieces
    if move.kind == "ep":
        fwd = 1 if stm == "w" else -1
        del pieces[(move.to[0], move.to[1] - fwd)]
        captured = True
    pieces[move.to] = (move.promo or kind, color)
    home_r = 0 if stm == "w" else 7
    if move.kind == "castle-k":
        del pieces[(7, home_r)]
        pieces[(5, home_r)] = ("R", stm)
    elif move.kind == "castle-q":
        del pieces[(0, home_r)]
        pieces[(3, home_r)] = ("R", stm)

    castles = set(pos.castles)
    own_rights = {"w": "KQ", "b": "kq"}[stm]
    if kind == "K":
        castles -= set(own_rights)
    for corner, right in (((0, 0), "Q"), ((7, 0), "K"), ((0, 7), "q"), ((7, 7), "k")):
        if move.frm == corner or move.to == corner:
            castles.discard(right)

    ep = None
    if move.kind == "double":
        ep = (move.frm[0], (move.frm[1] + move.to[1]) // 2)
    halfmove = 0 if (kind == "P" or captured) else pos.halfmove + 1
    fullmove = pos.fullmove + 1 if stm == "b" else pos.fullmove
    return OPos(pieces, other, frozenset(castles), ep, halfmove, fullmove)


def legal_moves(pos):
    out = []
    for m in _candidate_moves(pos):
        if not in_check(apply(pos, m).pieces, pos.stm):
            out.append(m)
    return out


def perft(pos, depth):
    if depth <= 0:
        return 1
    moves = legal_moves(pos)
    if depth == 1:
        return len(moves)
    return sum(perft(apply(pos, m), depth - 1) for m in moves)


def move_uci(m):
    def name(sq):
        return "abcdefgh"[sq[0]] + str(sq[1] + 1)
    return name(m.frm) + name(m.to) + (m.promo.lower() if m.promo else "")


def game_status(pos):
    moves = legal_moves(pos)
    checked = in_check(pos.pieces, pos.stm)
    if moves:
        return "check" if checked else "ongoing"
    return "checkmate" if checked else "stalemate"


def mate_in(pos, n):
    """True iff the side to move can force checkmate in at most n own moves."""
    if n <= 0:
        return False
    for m in legal_moves(pos):
        nxt = apply(pos, m)
        if game_status(nxt) == "checkmate":
            return True
        if n > 1 and game_status(nxt) in ("ongoing", "check"):
            if all(mate_in(apply(nxt, r), n - 1) for r in legal_moves(nxt)):
                return True
    return False


def mate_line(pos, n):
    """One principal line forcing mate in at most n moves, or None."""
    if n <= 0:
        return None
    for m in legal_moves(pos):
        nxt = apply(pos, m)
        if game_status(nxt) == "checkmate":
            return [move_uci(m)]
        if n > 1 and game_status(nxt) in ("ongoing", "check"):
            replies = legal_moves(nxt)
            if replies and all(mate_in(apply(nxt, r), n - 1) for r in replies):
                tail = mate_line(apply(nxt, replies[0]), n - 1)
                return [move_uci(m), move_uci(replies[0])] + tail
    return None


# --- relation oracle -------------------------------------------------------

def relations(pos):
    """Every (subject, name, objects) triple derived square by square.

    Returned as a set of ("protects"/"threatens", frm, to) and
    ("pins", frm, blocker, behind) tuples in (file, rank) coords.
    """
    pieces = pos.pieces
    out = set()
    for a, (ka, ca) in pieces.items():
        for b, (kb, cb) in pieces.items():
            if a == b:
                continue
            if geometric_attack(pieces, a, b):
                out.add(("protects" if ca == cb else "threatens", a, b))
    for a, (ka, ca) in pieces.items():
        if ka not in "BRQ":
            continue
        for b, (kb, cb) in pieces.items():
            if cb == ca:
                continue
            for c, (kc, cc) in pieces.items():
                if c in (a, b) or cc != cb:
                    continue
                df = c[0] - a[0]
                dr = c[1] - a[1]
                if ka == "R" and not (df == 0 or dr == 0):
                    continue
                if ka == "B" and abs(df) != abs(dr):
                    continue
                if ka == "Q" and not (df == 0 or dr == 0 or abs(df) == abs(dr)):
                    continue
                if not _between(a, b, c):
                    continue
                # b must be the only piece strictly between a and c
                blockers = [s for s in _ray_squares(a, c) if s in pieces]
                if blockers == [b]:
                    out.add(("pins", a, b, c))
    return out


def _ray_squares(a, c):
    df = (c[0] > a[0]) - (c[0] < a[0])
    dr = (c[1] > a[1]) - (c[1] < a[1])
    f, r = a[0] + df, a[1] + dr
    while (f, r) != c:
        yield (f, r)
        f, r = f + df, r + dr


def _between(a, b, c):
    """b lies strictly between a and c on a straight line."""
    return b in set(_ray_squares(a, c))


# --- chunk oracle ----------------------------------------------------------

def walls_of_pawns(pos):
    """All maximal adjacent-file pawn chains of length >= 3, per color."""
    found = set()
    for color in "wb":
        pawns = [sq for sq, (k, c) in pos.pieces.items() if k == "P" and c == color]
        by_file = {}
        for sq in pawns:
            by_file.setdefault(sq[0], []).append(sq)

        chains = []

        def extend(chain):
            f = chain[-1][0] + 1
            nxt = [s for s in by_file.get(f, []) if abs(s[1] - chain[-1][1]) <= 1]
            if not nxt:
                chains.append(tuple(chain))
                return
            for s in nxt:
                extend(chain + [s])

        for f in sorted(by_file):
            for start in by_file[f]:
                left = [s for s in by_file.get(f - 1, []) if abs(s[1] - start[1]) <= 1]
                if not left:  # cannot be extended leftward: chain start
                    extend([start])
        for ch in chains:
            if len(ch) >= 3:
                found.add((color, frozenset(ch)))
    # drop strict subsets
    return {(c, s) for (c, s) in found
            if not any(s < s2 for (c2, s2) in found if c2 == c)}


def batteries(pos):
    """Same-color slider pairs sharing a compatible clear line."""
    out = set()
    sliders = [(sq, k, c) for sq, (k, c) in pos.pieces.items() if k in "BRQ"]
    for i, (a, ka, ca) in enumerate(sliders):
        for b, kb, cb in sliders[i + 1:]:
            if ca != cb:
                continue
            df = b[0] - a[0]
            dr = b[1] - a[1]
            orth = df == 0 or dr == 0
            diag = abs(df) == abs(dr) and df != 0
            if not (orth or diag):
                continue
            ok_a = (orth and ka in "RQ") or (diag and ka in "BQ")
            ok_b = (orth and kb in "RQ") or (diag and kb in "BQ")
            if ok_a and ok_b and _path_clear(pos.pieces, a, b):
                out.add((ca, frozenset((a, b))))
    return out


def trapped_kings(pos):
    """(trapping color, frozenset(king, deniers)) per the chunk definition."""
    out = set()
    for color in "wb":
        other = "b" if color == "w" else "w"
        k = king_square(pos.pieces, color)
        if k is None:
            continue
        escapes = []
        for df in (-1, 0, 1):
            for dr in (-1, 0, 1):
                if df == 0 and dr == 0:
                    continue
                sq = (k[0] + df, k[1] + dr)
                if not (0 <= sq[0] <= 7 and 0 <= sq[1] <= 7):
                    continue
                occ = pos.pieces.get(sq)
                if occ and occ[1] == color:
                    continue
                escapes.append(sq)
        safe = [e for e in escapes if not square_attacked_by(pos.pieces, e, other)]
        if len(safe) > 1:
            continue
        deniers = set()
        for e in escapes:
            att = [sq for sq, (kk, cc) in pos.pieces.items()
                   if cc == other and geometric_attack(pos.pieces, sq, e)]
            if len(att) == 1:
                deniers.add(att[0])
        if deniers:
            out.add((other, frozenset({k} | deniers)))
    return out

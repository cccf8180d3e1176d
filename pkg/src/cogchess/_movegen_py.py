"""Pure-Python move-generation kernel.

Mirror of the compiled ``cogchess._movegen`` extension; ``cogchess.board``
picks whichever imports. Both kernels work on a flat 64-byte mailbox
(a1 = 0 .. h8 = 63, rank-major) with piece codes 1..6 for white
pawn/knight/bishop/rook/queen/king and 7..12 for black, and must return
bit-identical results.

Moves are ``(frm, to, promo, flags)`` int tuples, sorted ascending, with
promo one of 0/2/3/4/5 (none/knight/bishop/rook/queen, color-neutral).
"""

EMPTY = 0
WP, WN, WB, WR, WQ, WK = 1, 2, 3, 4, 5, 6
BP, BN, BB, BR, BQ, BK = 7, 8, 9, 10, 11, 12

FLAG_CAPTURE = 1
FLAG_CASTLE_K = 2
FLAG_CASTLE_Q = 4
FLAG_EP = 8
FLAG_DOUBLE = 16

CASTLE_WK, CASTLE_WQ, CASTLE_BK, CASTLE_BQ = 1, 2, 4, 8

_KNIGHT = ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2))
_KING = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
_ORTH = ((1, 0), (-1, 0), (0, 1), (0, -1))
_DIAG = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def _is_white(p):
    return 1 <= p <= 6


def _is_black(p):
    return p >= 7


def attacked(sq, target, by_white):
    """True if `target` is attacked by at least one piece of the given color."""
    tf = target & 7
    tr = target >> 3

    if by_white:
        # White pawns attack one rank up; look one rank down from the target.
        if tr >= 1:
            if tf >= 1 and sq[target - 9] == WP:
                return True
            if tf <= 6 and sq[target - 7] == WP:
                return True
        kn, kg, rk, bi, qu = WN, WK, WR, WB, WQ
    else:
        if tr <= 6:
            if tf >= 1 and sq[target + 7] == BP:
                return True
            if tf <= 6 and sq[target + 9] == BP:
                return True
        kn, kg, rk, bi, qu = BN, BK, BR, BB, BQ

    for df, dr in _KNIGHT:
        f, r = tf + df, tr + dr
        if 0 <= f <= 7 and 0 <= r <= 7 and sq[r * 8 + f] == kn:
            return True
    for df, dr in _KING:
        f, r = tf + df, tr + dr
        if 0 <= f <= 7 and 0 <= r <= 7 and sq[r * 8 + f] == kg:
            return True
    for df, dr in _ORTH:
        f, r = tf + df, tr + dr
        while 0 <= f <= 7 and 0 <= r <= 7:
            p = sq[r * 8 + f]
            if p != EMPTY:
                if p == rk or p == qu:
                    return True
                break
            f += df
            r += dr
    for df, dr in _DIAG:
        f, r = tf + df, tr + dr
        while 0 <= f <= 7 and 0 <= r <= 7:
            p = sq[r * 8 + f]
            if p != EMPTY:
                if p == bi or p == qu:
                    return True
                break
            f += df
            r += dr
    return False


def attackers(sq, target, by_white):
    """Sorted squares of all pieces of the given color attacking `target`."""
    out = []
    for i in range(64):
        p = sq[i]
        if p == EMPTY or _is_white(p) != bool(by_white):
            continue
        if target in attack_targets(sq, i):
            out.append(i)
    return out


def attack_targets(sq, frm):
    """Sorted squares attacked by the piece at `frm` (pawn capture squares only)."""
    p = sq[frm]
    if p == EMPTY:
        return []
    f = frm & 7
    r = frm >> 3
    out = []
    kind = p if p <= 6 else p - 6

    if kind == WP:
        dr = 1 if p == WP else -1
        for df in (-1, 1):
            nf, nr = f + df, r + dr
            if 0 <= nf <= 7 and 0 <= nr <= 7:
                out.append(nr * 8 + nf)
    elif kind == WN:
        for df, dr in _KNIGHT:
            nf, nr = f + df, r + dr
            if 0 <= nf <= 7 and 0 <= nr <= 7:
                out.append(nr * 8 + nf)
    elif kind == WK:
        for df, dr in _KING:
            nf, nr = f + df, r + dr
            if 0 <= nf <= 7 and 0 <= nr <= 7:
                out.append(nr * 8 + nf)
    else:
        if kind == WR:
            dirs = _ORTH
        elif kind == WB:
            dirs = _DIAG
        else:
            dirs = _ORTH + _DIAG
        for df, dr in dirs:
            nf, nr = f + df, r + dr
            while 0 <= nf <= 7 and 0 <= nr <= 7:
                out.append(nr * 8 + nf)
                if sq[nr * 8 + nf] != EMPTY:
                    break
                nf += df
                nr += dr
    out.sort()
    return out


def _king_square(sq, white):
    code = WK if white else BK
    for i in range(64):
        if sq[i] == code:
            return i
    return -1


def in_check(sq, white):
    k = _king_square(sq, white)
    return k >= 0 and attacked(sq, k, not white)


def _pseudo_moves(sq, stm, castling, ep):
    """Pseudo-legal moves for the side to move (0 = white, 1 = black)."""
    white = stm == 0
    moves = []
    for i in range(64):
        p = sq[i]
        if p == EMPTY or _is_white(p) != white:
            continue
        f = i & 7
        r = i >> 3
        kind = p if p <= 6 else p - 6

        if kind == WP:
            fwd = 8 if white else -8
            start_r = 1 if white else 6
            promo_r = 7 if white else 0
            to = i + fwd
            if sq[to] == EMPTY:
                if (to >> 3) == promo_r:
                    for pk in (WN, WB, WR, WQ):
                        moves.append((i, to, pk, 0))
                else:
                    moves.append((i, to, 0, 0))
                    if r == start_r and sq[i + 2 * fwd] == EMPTY:
                        moves.append((i, i + 2 * fwd, 0, FLAG_DOUBLE))
            dr = 1 if white else -1
            for df in (-1, 1):
                nf, nr = f + df, r + dr
                if not (0 <= nf <= 7 and 0 <= nr <= 7):
                    continue
                to = nr * 8 + nf
                tp = sq[to]
                if tp != EMPTY and _is_white(tp) != white:
                    if nr == promo_r:
                        for pk in (WN, WB, WR, WQ):
                            moves.append((i, to, pk, FLAG_CAPTURE))
                    else:
                        moves.append((i, to, 0, FLAG_CAPTURE))
                elif to == ep and ep >= 0:
                    moves.append((i, to, 0, FLAG_CAPTURE | FLAG_EP))
        elif kind == WN or kind == WK:
            deltas = _KNIGHT if kind == WN else _KING
            for df, dr in deltas:
                nf, nr = f + df, r + dr
                if not (0 <= nf <= 7 and 0 <= nr <= 7):
                    continue
                to = nr * 8 + nf
                tp = sq[to]
                if tp == EMPTY:
                    moves.append((i, to, 0, 0))
                elif _is_white(tp) != white:
                    moves.append((i, to, 0, FLAG_CAPTURE))
        else:
            if kind == WR:
                dirs = _ORTH
            elif kind == WB:
                dirs = _DIAG
            else:
                dirs = _ORTH + _DIAG
            for df, dr in dirs:
                nf, nr = f + df, r + dr
                while 0 <= nf <= 7 and 0 <= nr <= 7:
                    to = nr * 8 + nf
                    tp = sq[to]
                    if tp == EMPTY:
                        moves.append((i, to, 0, 0))
                    elif _is_white(tp) != white:
                        moves.append((i, to, 0, FLAG_CAPTURE))
                        break
                    else:
                        break
                    nf += df
                    nr += dr

    # Castling: rights bit, rook home, empty between, king and transit not attacked.
    if white:
        if (castling & CASTLE_WK) and sq[4] == WK and sq[7] == WR \
                and sq[5] == EMPTY and sq[6] == EMPTY \
                and not attacked(sq, 4, False) and not attacked(sq, 5, False):
            moves.append((4, 6, 0, FLAG_CASTLE_K))
        if (castling & CASTLE_WQ) and sq[4] == WK and sq[0] == WR \
                and sq[1] == EMPTY and sq[2] == EMPTY and sq[3] == EMPTY \
                and not attacked(sq, 4, False) and not attacked(sq, 3, False):
            moves.append((4, 2, 0, FLAG_CASTLE_Q))
    else:
        if (castling & CASTLE_BK) and sq[60] == BK and sq[63] == BR \
                and sq[61] == EMPTY and sq[62] == EMPTY \
                and not attacked(sq, 60, True) and not attacked(sq, 61, True):
            moves.append((60, 62, 0, FLAG_CASTLE_K))
        if (castling & CASTLE_BQ) and sq[60] == BK and sq[56] == BR \
                and sq[57] == EMPTY and sq[58] == EMPTY and sq[59] == EMPTY \
                and not attacked(sq, 60, True) and not attacked(sq, 59, True):
            moves.append((60, 58, 0, FLAG_CASTLE_Q))
    return moves


def _make(arr, stm, frm, to, promo, flags):
    """Apply a move to a mutable array in place. Returns undo info."""
    white = stm == 0
    p = arr[frm]
    captured = arr[to]
    cap_sq = to
    if flags & FLAG_EP:
        cap_sq = to - 8 if white else to + 8
        captured = arr[cap_sq]
        arr[cap_sq] = EMPTY
    arr[frm] = EMPTY
    if promo:
        arr[to] = promo if white else promo + 6
    else:
        arr[to] = p
    if flags & FLAG_CASTLE_K:
        if white:
            arr[7] = EMPTY
            arr[5] = WR
        else:
            arr[63] = EMPTY
            arr[61] = BR
    elif flags & FLAG_CASTLE_Q:
        if white:
            arr[0] = EMPTY
            arr[3] = WR
        else:
            arr[56] = EMPTY
            arr[59] = BR
    return (p, captured, cap_sq)


def _unmake(arr, stm, frm, to, promo, flags, undo):
    white = stm == 0
    p, captured, cap_sq = undo
    arr[frm] = p
    arr[to] = EMPTY
    if captured != EMPTY:
        arr[cap_sq] = captured
    if flags & FLAG_CASTLE_K:
        if white:
            arr[5] = EMPTY
            arr[7] = WR
        else:
            arr[61] = EMPTY
            arr[63] = BR
    elif flags & FLAG_CASTLE_Q:
        if white:
            arr[3] = EMPTY
            arr[0] = WR
        else:
            arr[59] = EMPTY
            arr[56] = BR


def legal_moves(sq, stm, castling, ep):
    """Sorted legal moves for the side to move."""
    arr = bytearray(sq)
    white = stm == 0
    out = []
    for frm, to, promo, flags in _pseudo_moves(sq, stm, castling, ep):
        undo = _make(arr, stm, frm, to, promo, flags)
        if not in_check(arr, white):
            out.append((frm, to, promo, flags))
        _unmake(arr, stm, frm, to, promo, flags, undo)
    out.sort()
    return out


def _update_castling(castling, frm, to):
    if frm == 4:
        castling &= ~(CASTLE_WK | CASTLE_WQ)
    elif frm == 60:
        castling &= ~(CASTLE_BK | CASTLE_BQ)
    if frm == 0 or to == 0:
        castling &= ~CASTLE_WQ
    if frm == 7 or to == 7:
        castling &= ~CASTLE_WK
    if frm == 56 or to == 56:
        castling &= ~CASTLE_BQ
    if frm == 63 or to == 63:
        castling &= ~CASTLE_BK
    return castling


def apply_move(sq, stm, castling, ep, halfmove, fullmove, frm, to, promo, flags):
    """Apply one move; returns the new (squares, stm, castling, ep, halfmove, fullmove)."""
    arr = bytearray(sq)
    pawn = arr[frm] in (WP, BP)
    undo = _make(arr, stm, frm, to, promo, flags)
    capture = undo[1] != EMPTY
    new_half = 0 if (pawn or capture) else halfmove + 1
    new_ep = (frm + to) // 2 if flags & FLAG_DOUBLE else -1
    new_castling = _update_castling(castling, frm, to)
    new_full = fullmove + 1 if stm == 1 else fullmove
    return (bytes(arr), 1 - stm, new_castling, new_ep, new_half, new_full)


def perft(sq, stm, castling, ep, depth):
    """Leaf count of the legal game tree at exactly `depth`."""
    if depth <= 0:
        return 1
    arr = bytearray(sq)
    return _perft_inner(arr, stm, castling, ep, depth)


def _perft_inner(arr, stm, castling, ep, depth):
    white = stm == 0
    moves = []
    for m in _pseudo_moves(arr, stm, castling, ep):
        undo = _make(arr, stm, m[0], m[1], m[2], m[3])
        ok = not in_check(arr, white)
        _unmake(arr, stm, m[0], m[1], m[2], m[3], undo)
        if ok:
            moves.append(m)
    if depth == 1:
        return len(moves)
    total = 0
    for frm, to, promo, flags in moves:
        undo = _make(arr, stm, frm, to, promo, flags)
        new_ep = (frm + to) // 2 if flags & FLAG_DOUBLE else -1
        total += _perft_inner(arr, 1 - stm, _update_castling(castling, frm, to),
                              new_ep, depth - 1)
        _unmake(arr, stm, frm, to, promo, flags, undo)
    return total

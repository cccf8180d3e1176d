# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled move-generation kernel.

Same contract as ``cogchess._movegen_py``: flat 64-byte mailbox
(a1 = 0 .. h8 = 63), piece codes 1..6 white / 7..12 black, moves as
sorted ``(frm, to, promo, flags)`` tuples. The two kernels must return
bit-identical results; ``tests/test_kernel_parity.py`` enforces it.
"""

from libc.string cimport memcpy

cdef enum:
    EMPTY = 0
    WP = 1
    WN = 2
    WB = 3
    WR = 4
    WQ = 5
    WK = 6
    BP = 7
    BN = 8
    BB = 9
    BR = 10
    BQ = 11
    BK = 12

cdef enum:
    FLAG_CAPTURE = 1
    FLAG_CASTLE_K = 2
    FLAG_CASTLE_Q = 4
    FLAG_EP = 8
    FLAG_DOUBLE = 16

cdef enum:
    CASTLE_WK = 1
    CASTLE_WQ = 2
    CASTLE_BK = 4
    CASTLE_BQ = 8

cdef int KNIGHT_D[8][2]
KNIGHT_D[0][:] = [1, 2]
KNIGHT_D[1][:] = [2, 1]
KNIGHT_D[2][:] = [2, -1]
KNIGHT_D[3][:] = [1, -2]
KNIGHT_D[4][:] = [-1, -2]
KNIGHT_D[5][:] = [-2, -1]
KNIGHT_D[6][:] = [-2, 1]
KNIGHT_D[7][:] = [-1, 2]

cdef int KING_D[8][2]
KING_D[0][:] = [1, 0]
KING_D[1][:] = [1, 1]
KING_D[2][:] = [0, 1]
KING_D[3][:] = [-1, 1]
KING_D[4][:] = [-1, 0]
KING_D[5][:] = [-1, -1]
KING_D[6][:] = [0, -1]
KING_D[7][:] = [1, -1]

# first 4 = orthogonal, last 4 = diagonal
cdef int RAY_D[8][2]
RAY_D[0][:] = [1, 0]
RAY_D[1][:] = [-1, 0]
RAY_D[2][:] = [0, 1]
RAY_D[3][:] = [0, -1]
RAY_D[4][:] = [1, 1]
RAY_D[5][:] = [1, -1]
RAY_D[6][:] = [-1, 1]
RAY_D[7][:] = [-1, -1]


cdef inline bint _is_white_c(int p):
    return 1 <= p <= 6


cdef bint _attacked_c(unsigned char *sq, int target, bint by_white):
    cdef int tf = target & 7
    cdef int tr = target >> 3
    cdef int kn, kg, rk, bi, qu, i, f, r, p

    if by_white:
        if tr >= 1:
            if tf >= 1 and sq[target - 9] == WP:
                return True
            if tf <= 6 and sq[target - 7] == WP:
                return True
        kn = WN; kg = WK; rk = WR; bi = WB; qu = WQ
    else:
        if tr <= 6:
            if tf >= 1 and sq[target + 7] == BP:
                return True
            if tf <= 6 and sq[target + 9] == BP:
                return True
        kn = BN; kg = BK; rk = BR; bi = BB; qu = BQ

    for i in range(8):
        f = tf + KNIGHT_D[i][0]
        r = tr + KNIGHT_D[i][1]
        if 0 <= f <= 7 and 0 <= r <= 7 and sq[r * 8 + f] == kn:
            return True
    for i in range(8):
        f = tf + KING_D[i][0]
        r = tr + KING_D[i][1]
        if 0 <= f <= 7 and 0 <= r <= 7 and sq[r * 8 + f] == kg:
            return True
    for i in range(4):
        f = tf + RAY_D[i][0]
        r = tr + RAY_D[i][1]
        while 0 <= f <= 7 and 0 <= r <= 7:
            p = sq[r * 8 + f]
            if p != EMPTY:
                if p == rk or p == qu:
                    return True
                break
            f += RAY_D[i][0]
            r += RAY_D[i][1]
    for i in range(4, 8):
        f = tf + RAY_D[i][0]
        r = tr + RAY_D[i][1]
        while 0 <= f <= 7 and 0 <= r <= 7:
            p = sq[r * 8 + f]
            if p != EMPTY:
                if p == bi or p == qu:
                    return True
                break
            f += RAY_D[i][0]
            r += RAY_D[i][1]
    return False


cdef int _king_square_c(unsigned char *sq, bint white):
    cdef int code = WK if white else BK
    cdef int i
    for i in range(64):
        if sq[i] == code:
            return i
    return -1


cdef bint _in_check_c(unsigned char *sq, bint white):
    cdef int k = _king_square_c(sq, white)
    return k >= 0 and _attacked_c(sq, k, not white)


# A pseudo move is packed into one int: frm | to<<6 | promo<<12 | flags<<16.
cdef int _pseudo_c(unsigned char *sq, int stm, int castling, int ep, int *out):
    cdef bint white = stm == 0
    cdef int n = 0
    cdef int i, f, r, kind, p, tp, to, fwd, start_r, promo_r, nf, nr, d, pk
    cdef int dr, df

    for i in range(64):
        p = sq[i]
        if p == EMPTY or _is_white_c(p) != white:
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
                    for pk in range(WN, WQ + 1):
                        out[n] = i | (to << 6) | (pk << 12); n += 1
                else:
                    out[n] = i | (to << 6); n += 1
                    if r == start_r and sq[i + 2 * fwd] == EMPTY:
                        out[n] = i | ((i + 2 * fwd) << 6) | (FLAG_DOUBLE << 16); n += 1
            dr = 1 if white else -1
            for df in range(-1, 2, 2):
                nf = f + df
                nr = r + dr
                if nf < 0 or nf > 7 or nr < 0 or nr > 7:
                    continue
                to = nr * 8 + nf
                tp = sq[to]
                if tp != EMPTY and _is_white_c(tp) != white:
                    if nr == promo_r:
                        for pk in range(WN, WQ + 1):
                            out[n] = i | (to << 6) | (pk << 12) | (FLAG_CAPTURE << 16); n += 1
                    else:
                        out[n] = i | (to << 6) | (FLAG_CAPTURE << 16); n += 1
                elif to == ep and ep >= 0:
                    out[n] = i | (to << 6) | ((FLAG_CAPTURE | FLAG_EP) << 16); n += 1
        elif kind == WN or kind == WK:
            for d in range(8):
                if kind == WN:
                    nf = f + KNIGHT_D[d][0]
                    nr = r + KNIGHT_D[d][1]
                else:
                    nf = f + KING_D[d][0]
                    nr = r + KING_D[d][1]
                if nf < 0 or nf > 7 or nr < 0 or nr > 7:
                    continue
                to = nr * 8 + nf
                tp = sq[to]
                if tp == EMPTY:
                    out[n] = i | (to << 6); n += 1
                elif _is_white_c(tp) != white:
                    out[n] = i | (to << 6) | (FLAG_CAPTURE << 16); n += 1
        else:
            for d in range(8):
                if kind == WR and d >= 4:
                    break
                if kind == WB and d < 4:
                    continue
                nf = f + RAY_D[d][0]
                nr = r + RAY_D[d][1]
                while 0 <= nf <= 7 and 0 <= nr <= 7:
                    to = nr * 8 + nf
                    tp = sq[to]
                    if tp == EMPTY:
                        out[n] = i | (to << 6); n += 1
                    elif _is_white_c(tp) != white:
                        out[n] = i | (to << 6) | (FLAG_CAPTURE << 16); n += 1
                        break
                    else:
                        break
                    nf += RAY_D[d][0]
                    nr += RAY_D[d][1]

    if white:
        if (castling & CASTLE_WK) and sq[4] == WK and sq[7] == WR \
                and sq[5] == EMPTY and sq[6] == EMPTY \
                and not _attacked_c(sq, 4, False) and not _attacked_c(sq, 5, False):
            out[n] = 4 | (6 << 6) | (FLAG_CASTLE_K << 16); n += 1
        if (castling & CASTLE_WQ) and sq[4] == WK and sq[0] == WR \
                and sq[1] == EMPTY and sq[2] == EMPTY and sq[3] == EMPTY \
                and not _attacked_c(sq, 4, False) and not _attacked_c(sq, 3, False):
            out[n] = 4 | (2 << 6) | (FLAG_CASTLE_Q << 16); n += 1
    else:
        if (castling & CASTLE_BK) and sq[60] == BK and sq[63] == BR \
                and sq[61] == EMPTY and sq[62] == EMPTY \
                and not _attacked_c(sq, 60, True) and not _attacked_c(sq, 61, True):
            out[n] = 60 | (62 << 6) | (FLAG_CASTLE_K << 16); n += 1
        if (castling & CASTLE_BQ) and sq[60] == BK and sq[56] == BR \
                and sq[57] == EMPTY and sq[58] == EMPTY and sq[59] == EMPTY \
                and not _attacked_c(sq, 60, True) and not _attacked_c(sq, 59, True):
            out[n] = 60 | (58 << 6) | (FLAG_CASTLE_Q << 16); n += 1
    return n


cdef void _make_c(unsigned char *arr, int stm, int frm, int to, int promo,
                  int flags, int *undo):
    cdef bint white = stm == 0
    cdef int p = arr[frm]
    cdef int captured = arr[to]
    cdef int cap_sq = to
    if flags & FLAG_EP:
        cap_sq = to - 8 if white else to + 8
        captured = arr[cap_sq]
        arr[cap_sq] = EMPTY
    arr[frm] = EMPTY
    if promo:
        arr[to] = <unsigned char>(promo if white else promo + 6)
    else:
        arr[to] = <unsigned char>p
    if flags & FLAG_CASTLE_K:
        if white:
            arr[7] = EMPTY; arr[5] = WR
        else:
            arr[63] = EMPTY; arr[61] = BR
    elif flags & FLAG_CASTLE_Q:
        if white:
            arr[0] = EMPTY; arr[3] = WR
        else:
            arr[56] = EMPTY; arr[59] = BR
    undo[0] = p
    undo[1] = captured
    undo[2] = cap_sq


cdef void _unmake_c(unsigned char *arr, int stm, int frm, int to, int promo,
                    int flags, int *undo):
    cdef bint white = stm == 0
    arr[frm] = <unsigned char>undo[0]
    arr[to] = EMPTY
    if undo[1] != EMPTY:
        arr[undo[2]] = <unsigned char>undo[1]
    if flags & FLAG_CASTLE_K:
        if white:
            arr[5] = EMPTY; arr[7] = WR
        else:
            arr[61] = EMPTY; arr[63] = BR
    elif flags & FLAG_CASTLE_Q:
        if white:
            arr[3] = EMPTY; arr[0] = WR
        else:
            arr[59] = EMPTY; arr[56] = BR


cdef int _update_castling_c(int castling, int frm, int to):
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


cdef int _legal_c(unsigned char *sq, int stm, int castling, int ep, int *out):
    """Legal moves packed into `out`; returns the count (unsorted)."""
    cdef unsigned char arr[64]
    cdef int pseudo[256]
    cdef int undo[3]
    cdef bint white = stm == 0
    cdef int n = _pseudo_c(sq, stm, castling, ep, pseudo)
    cdef int i, m, frm, to, promo, flags, cnt
    memcpy(arr, sq, 64)
    cnt = 0
    for i in range(n):
        m = pseudo[i]
        frm = m & 63
        to = (m >> 6) & 63
        promo = (m >> 12) & 15
        flags = m >> 16
        _make_c(arr, stm, frm, to, promo, flags, undo)
        if not _in_check_c(arr, white):
            out[cnt] = m
            cnt += 1
        _unmake_c(arr, stm, frm, to, promo, flags, undo)
    return cnt


def legal_moves(bytes sq, int stm, int castling, int ep):
    """Sorted legal moves for the side to move."""
    cdef int out[256]
    cdef int n = _legal_c(<unsigned char *>sq, stm, castling, ep, out)
    cdef int i, m
    res = []
    for i in range(n):
        m = out[i]
        res.append((m & 63, (m >> 6) & 63, (m >> 12) & 15, m >> 16))
    res.sort()
    return res


def apply_move(bytes sq, int stm, int castling, int ep, int halfmove,
               int fullmove, int frm, int to, int promo, int flags):
    """Apply one move; returns the new (squares, stm, castling, ep, halfmove, fullmove)."""
    cdef unsigned char arr[64]
    cdef int undo[3]
    cdef bint pawn
    memcpy(arr, <unsigned char *>sq, 64)
    pawn = arr[frm] == WP or arr[frm] == BP
    _make_c(arr, stm, frm, to, promo, flags, undo)
    cdef int new_half = 0 if (pawn or undo[1] != EMPTY) else halfmove + 1
    cdef int new_ep = (frm + to) // 2 if flags & FLAG_DOUBLE else -1
    cdef int new_castling = _update_castling_c(castling, frm, to)
    cdef int new_full = fullmove + 1 if stm == 1 else fullmove
    return ((<char *>arr)[:64], 1 - stm, new_castling, new_ep, new_half, new_full)


def attacked(bytes sq, int target, bint by_white):
    """True if `target` is attacked by at least one piece of the given color."""
    return _attacked_c(<unsigned char *>sq, target, by_white)


def in_check(bytes sq, bint white):
    return _in_check_c(<unsigned char *>sq, white)


def attack_targets(bytes sq, int frm):
    """Sorted squares attacked by the piece at `frm` (pawn capture squares only)."""
    cdef unsigned char *s = <unsigned char *>sq
    cdef int p = s[frm]
    if p == EMPTY:
        return []
    cdef int f = frm & 7
    cdef int r = frm >> 3
    cdef int kind = p if p <= 6 else p - 6
    cdef int d, nf, nr, dr, df
    out = []

    if kind == WP:
        dr = 1 if p == WP else -1
        for df in range(-1, 2, 2):
            nf = f + df
            nr = r + dr
            if 0 <= nf <= 7 and 0 <= nr <= 7:
                out.append(nr * 8 + nf)
    elif kind == WN or kind == WK:
        for d in range(8):
            if kind == WN:
                nf = f + KNIGHT_D[d][0]
                nr = r + KNIGHT_D[d][1]
            else:
                nf = f + KING_D[d][0]
                nr = r + KING_D[d][1]
            if 0 <= nf <= 7 and 0 <= nr <= 7:
                out.append(nr * 8 + nf)
    else:
        for d in range(8):
            if kind == WR and d >= 4:
                break
            if kind == WB and d < 4:
                continue
            nf = f + RAY_D[d][0]
            nr = r + RAY_D[d][1]
            while 0 <= nf <= 7 and 0 <= nr <= 7:
                out.append(nr * 8 + nf)
                if s[nr * 8 + nf] != EMPTY:
                    break
                nf += RAY_D[d][0]
                nr += RAY_D[d][1]
    out.sort()
    return out


def attackers(bytes sq, int target, bint by_white):
    """Sorted squares of all pieces of the given color attacking `target`."""
    cdef unsigned char *s = <unsigned char *>sq
    cdef int i, p
    out = []
    for i in range(64):
        p = s[i]
        if p == EMPTY or _is_white_c(p) != by_white:
            continue
        if target in attack_targets(sq, i):
            out.append(i)
    return out


cdef long long _perft_c(unsigned char *arr, int stm, int castling, int ep, int depth):
    cdef int moves[256]
    cdef int undo[3]
    cdef int n = _legal_c(arr, stm, castling, ep, moves)
    cdef long long total = 0
    cdef int i, m, frm, to, promo, flags, new_ep
    if depth == 1:
        return n
    for i in range(n):
        m = moves[i]
        frm = m & 63
        to = (m >> 6) & 63
        promo = (m >> 12) & 15
        flags = m >> 16
        _make_c(arr, stm, frm, to, promo, flags, undo)
        new_ep = (frm + to) // 2 if flags & FLAG_DOUBLE else -1
        total += _perft_c(arr, 1 - stm, _update_castling_c(castling, frm, to),
                          new_ep, depth - 1)
        _unmake_c(arr, stm, frm, to, promo, flags, undo)
    return total


def perft(bytes sq, int stm, int castling, int ep, int depth):
    """Leaf count of the legal game tree at exactly `depth`."""
    cdef unsigned char arr[64]
    if depth <= 0:
        return 1
    memcpy(arr, <unsigned char *>sq, 64)
    return _perft_c(arr, stm, castling, ep, depth)

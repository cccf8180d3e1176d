"""Motif-sharing mate-in-2 family for the emotion-guidance experiment.

Every board in the family shares one abstract mating motif: the mover's
queen reaches the 8th rank along a clear diagonal, the defending rook
must capture, and the mover's e-file rook recaptures for mate behind the
defender's pawn wall. Boards differ in queen/rook/king/knight placement,
decorative pawns, and color mirroring, plus a fixed queenside decoy
complex (two pawn walls and a knight) whose relation-rich situations
outrank the sparse mating situation under the cold pre-rank.

A variant joins the pool only if a cold solve (empty long-term memory,
small budgets) provably burns at least one full budget on a decoy
situation before solving, and a solve that learned the family's target
signature solves strictly faster. That property is what the guidance
experiment measures over seeds.
"""

import itertools
from functools import lru_cache

from cogchess.board import parse_fen
from cogchess.memory import LongTermMemory
from cogchess.reasoner import PlayerProfile, SolveLimits, solve

MOTIF_PROFILE = PlayerProfile("aggressive", base_budget=32)
MOTIF_LIMITS = dict(max_total_nodes=5000, max_situations=24)

QUEEN_SPOTS = ("a4", "d7")
ROOK_SPOTS = ("e1", "e2", "e3")
KING_SPOTS = ("g1", "h1", "g2", "h2")
KNIGHT_SPOTS = ("d5", "c4")
EXTRA_PAWNS = (None, "g5", "h5")


def _variant_fen(queen, rook, king, knight, extra, mirrored):
    """Compose the board; None if the placement combination collides."""
    white = {queen: "Q", rook: "R", king: "K", knight: "N",
             "a3": "P", "b4": "P", "c3": "P"}
    black = {"g8": "k", "a8": "r", "f7": "p", "g7": "p", "h7": "p",
             "a5": "p", "b6": "p", "c7": "p"}
    if extra:
        black[extra] = "p"
    if len(white) != 7 or len(black) != (9 if extra else 8):
        return None
    if set(white) & set(black):
        return None

    grid = {}
    for sq, letter in {**white, **black}.items():
        f = "abcdefgh".index(sq[0])
        r = int(sq[1]) - 1
        if mirrored:
            r = 7 - r
            letter = letter.lower() if letter.isupper() else letter.upper()
        grid[(f, r)] = letter

    rows = []
    for r in range(7, -1, -1):
        row = ""
        run = 0
        for f in range(8):
            ch = grid.get((f, r))
            if ch is None:
                run += 1
            else:
                if run:
                    row += str(run)
                    run = 0
                row += ch
        if run:
            row += str(run)
        rows.append(row)
    return f"{'/'.join(rows)} {'b' if mirrored else 'w'} - - 0 1"


def _limits():
    return SolveLimits(**MOTIF_LIMITS)


def _target_signature(ltm):
    positives = [sig for sig, tag in ltm.entries.items() if tag.valence > 0]
    return positives[0] if len(positives) == 1 else None


@lru_cache(maxsize=1)
def variant_pool(max_size=72):
    """Family variants that provably show the guidance effect.

    Returns (target_signature, list of (fen, cold_nodes)).
    """
    target = None
    pool = []
    combos = itertools.product(QUEEN_SPOTS, ROOK_SPOTS, KING_SPOTS,
                               KNIGHT_SPOTS, EXTRA_PAWNS, (False, True))
    for queen, rook, king, knight, extra, mirrored in combos:
        if len(pool) >= max_size:
            break
        fen = _variant_fen(queen, rook, king, knight, extra, mirrored)
        if fen is None:
            continue
        try:
            board = parse_fen(fen)
        except ValueError:
            continue

        cold_ltm = LongTermMemory()
        cold = solve(board, 2, MOTIF_PROFILE, ltm=cold_ltm,
                     limits=_limits(), seed=0)
        if cold.verdict != "solved" or cold.situations_investigated < 2:
            continue
        sig = _target_signature(cold_ltm)
        if sig is None:
            continue
        if target is None:
            target = sig
        elif sig != target:
            continue

        primed = LongTermMemory()
        primed.update(target, 1.0)
        warm = solve(board, 2, MOTIF_PROFILE, ltm=primed,
                     limits=_limits(), seed=0)
        if warm.verdict != "solved" or warm.nodes >= cold.nodes:
            continue
        pool.append((fen, cold.nodes))
    return target, pool


def split_for_seed(rng, train_size=50, held_out_size=10):
    """Seeded disjoint train/held-out FEN lists from the variant pool."""
    _, pool = variant_pool()
    fens = [fen for fen, _ in pool]
    rng.shuffle(fens)
    held_out = fens[:held_out_size]
    rest = fens[held_out_size:]
    train = [rest[i % len(rest)] for i in range(train_size)]
    rng.shuffle(train)
    return train, held_out


def train_ltm(train_fens):
    ltm = LongTermMemory()
    for fen in train_fens:
        solve(parse_fen(fen), 2, MOTIF_PROFILE, ltm=ltm,
              limits=_limits(), seed=0)
    return ltm


def eval_nodes(fens, ltm_text=None):
    """Investigated-node counts; each puzzle sees its own LTM snapshot."""
    nodes = []
    for fen in fens:
        ltm = LongTermMemory.load(ltm_text) if ltm_text else LongTermMemory()
        result = solve(parse_fen(fen), 2, MOTIF_PROFILE, ltm=ltm,
                       limits=_limits(), seed=0)
        nodes.append(result.nodes)
    return nodes

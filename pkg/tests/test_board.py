"""Board module tests: FEN round-trips, move legality, terminal detection,
and oracle equivalence of the move generator."""

import pytest

import oracles
from cogchess.board import (
    Color, FenError, GameStatus, IllegalMoveError, PieceKind, Square,
    emit_fen, parse_fen, start_board, START_FEN,
)
from sampling import playout_positions, random_playout


def test_parse_minimal_position():
    b = parse_fen("8/8/8/8/8/8/8/K6k w - - 0 1")
    assert len(b.pieces) == 2
    assert all(p.kind is PieceKind.KING for p in b.pieces)


def test_parse_start_position():
    b = start_board()
    assert len(b.pieces) == 32
    assert sum(p.color is Color.WHITE for p in b.pieces) == 16
    assert sum(p.color is Color.BLACK for p in b.pieces) == 16


def test_parse_rejects_pawn_on_back_rank():
    with pytest.raises(FenError) as e:
        parse_fen("P7/8/8/8/8/8/8/K6k w - - 0 1")
    assert e.value.code == "pawn-on-back-rank"


def test_parse_rejects_double_kings():
    with pytest.raises(FenError) as e:
        parse_fen("KK6/8/8/8/8/8/8/7k w - - 0 1")
    assert e.value.code == "king-count"


def test_parse_rejects_wrong_field_count():
    with pytest.raises(FenError) as e:
        parse_fen("8/8/8/8/8/8/8/K6k w -")
    assert e.value.code == "field-count"


def test_parse_rejects_side_not_to_move_in_check():
    # white queen gives check to the black king, but white is to move
    with pytest.raises(FenError) as e:
        parse_fen("7k/7Q/8/8/8/8/8/K7 w - - 0 1")
    assert e.value.code == "side-not-to-move-in-check"


def test_fen_round_trip_start():
    assert emit_fen(parse_fen(START_FEN)) == START_FEN


def test_fen_round_trip_board_equality():
    b = random_playout(7, 30)
    assert parse_fen(emit_fen(b)) == b


def test_en_passant_field_after_double_push():
    b = start_board().apply_move(start_board().find_move("e2e4"))
    assert b.en_passant == Square.from_name("e3")
    assert emit_fen(b).split()[3] == "e3"


def test_start_position_has_20_moves():
    assert len(start_board().legal_moves()) == 20


def test_cornered_kings_three_moves():
    b = parse_fen("K7/8/8/8/8/8/8/7k w - - 0 1")
    assert [m.uci for m in b.legal_moves()] == ["a8a7", "a8b7", "a8b8"]


def test_checkmate_has_no_moves():
    b = parse_fen("4R1k1/5ppp/8/8/8/8/8/7K b - - 1 1")
    assert b.legal_moves() == []
    assert b.game_status() is GameStatus.CHECKMATE


def test_apply_e2e4():
    b = start_board()
    nxt = b.apply_move(b.find_move("e2e4"))
    assert nxt.piece_at(Square.from_name("e4")).kind is PieceKind.PAWN
    assert nxt.side_to_move is Color.BLACK
    assert nxt.en_passant == Square.from_name("e3")


def test_apply_castle_short():
    b = parse_fen("4k3/8/8/8/8/8/8/4K2R w K - 0 1")
    nxt = b.apply_move(b.find_move("e1g1"))
    assert nxt.piece_at(Square.from_name("g1")).kind is PieceKind.KING
    assert nxt.piece_at(Square.from_name("f1")).kind is PieceKind.ROOK
    assert not nxt.castling.white_short and not nxt.castling.white_long


def test_apply_en_passant_removes_bypassed_pawn():
    b = parse_fen("4k3/8/8/8/4pP2/8/8/4K3 b - f3 0 1")
    nxt = b.apply_move(b.find_move("e4f3"))
    assert nxt.piece_at(Square.from_name("f4")) is None
    assert nxt.piece_at(Square.from_name("f3")).kind is PieceKind.PAWN


def test_apply_rejects_illegal_move():
    b = start_board()
    with pytest.raises(IllegalMoveError):
        b.apply_move(b.find_move("e2e4").__class__(
            Square.from_name("e2"), Square.from_name("e5")))


def test_status_back_rank_mate():
    b = parse_fen("6k1/5ppp/8/8/8/8/8/4R2K w - - 0 1")
    nxt = b.apply_move(b.find_move("e1e8"))
    assert nxt.game_status() is GameStatus.CHECKMATE


def test_status_stalemate():
    b = parse_fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1")
    assert b.game_status() is GameStatus.STALEMATE


def test_status_start_ongoing():
    assert start_board().game_status() is GameStatus.ONGOING


def test_perft_depth_zero_is_one():
    assert start_board().perft(0) == 1


def test_perft_depth_one_equals_move_count():
    b = random_playout(3, 24)
    assert b.perft(1) == len(b.legal_moves())


def test_perft_start_known_values():
    b = start_board()
    assert b.perft(1) == 20
    assert b.perft(2) == 400
    assert b.perft(3) == 8902


@pytest.mark.parametrize("seed", range(6))
def test_move_generator_matches_oracle(seed):
    b = random_playout(seed + 100, 10 + seed * 9)
    ours = {m.uci for m in b.legal_moves()}
    theirs = {oracles.move_uci(m) for m in oracles.legal_moves(oracles.from_board(b))}
    assert ours == theirs, emit_fen(b)


@pytest.mark.parametrize("fen", [
    # live castling rights on both sides, including through-check denials
    "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
    "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R b KQkq - 0 1",
    "rn1k1b1N/ppp1p1pQ/6q1/1b1pB2p/1P1P1P2/4P1P1/P1P1N3/2R1K2R w K - 3 21",
])
def test_castling_positions_match_oracle(fen):
    b = parse_fen(fen)
    ours = {m.uci for m in b.legal_moves()}
    theirs = {oracles.move_uci(m) for m in oracles.legal_moves(oracles.from_board(b))}
    assert ours == theirs


def test_perft_matches_oracle_depth_two():
    for b in playout_positions(4, seed=5, min_plies=20, max_plies=50):
        assert b.perft(2) == oracles.perft(oracles.from_board(b), 2), emit_fen(b)


@pytest.fixture(scope="module")
def thousand_playouts():
    return playout_positions(1000, seed=11)


def test_fen_round_trip_on_playouts(thousand_playouts):
    for b in thousand_playouts:
        fen = emit_fen(b)
        assert emit_fen(parse_fen(fen)) == fen
        assert parse_fen(fen) == b


def test_perft_consistency_properties(thousand_playouts):
    # perft(1) = |moves| and perft(2) = sum over successors
    for b in thousand_playouts:
        moves = b.legal_moves()
        assert b.perft(1) == len(moves)
        assert b.perft(2) == sum(len(b.apply_move(m).legal_moves()) for m in moves)


def test_mover_never_left_in_check():
    for b in playout_positions(8, seed=31):
        mover_is_white = b.side_to_move is Color.WHITE
        for m in b.legal_moves():
            nxt = b.apply_move(m)
            pos = oracles.from_board(nxt)
            assert not oracles.in_check(pos.pieces, "w" if mover_is_white else "b")


def test_move_ordering_deterministic():
    b = random_playout(17, 25)
    first = [m.uci for m in b.legal_moves()]
    assert first == [m.uci for m in b.legal_moves()]
    assert first == sorted(first, key=lambda u: (
        Square.from_name(u[:2]).index, Square.from_name(u[2:4]).index, u[4:]))


def test_underpromotion_generated():
    b = parse_fen("8/P7/8/8/8/8/8/K6k w - - 0 1")
    ucis = {m.uci for m in b.legal_moves()}
    assert {"a7a8q", "a7a8r", "a7a8b", "a7a8n"} <= ucis

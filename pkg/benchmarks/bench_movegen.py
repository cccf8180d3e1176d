"""Benchmark the compiled move-generation kernel against the pure-Python
fallback. Run from the repository root:

    python benchmarks/bench_movegen.py
"""

import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from cogchess import _movegen_py as pure  # noqa: E402

try:
    from cogchess import _movegen as compiled
except ImportError:
    compiled = None

KIWIPETE = "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1"


def sample_states(count=300, seed=11):
    from cogchess.board import start_board

    rng = random.Random(seed)
    states = []
    for i in range(count):
        b = start_board()
        for _ in range(rng.randint(4, 60)):
            moves = b.legal_moves()
            if not moves:
                break
            b = b.apply_move(rng.choice(moves))
        states.append((b._squares, b._stm, b.castling.mask, b._ep))
    return states


def bench(label, fn, repeat=1):
    best = min(_timed(fn) for _ in range(repeat))
    print(f"  {label:<38} {best * 1000:10.1f} ms")
    return best


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def run(kernel, name, states, start_state, kiwi_state):
    print(f"{name} kernel")
    results = {}
    results["perft3"] = bench(
        "perft(start, 3)", lambda: kernel.perft(*start_state, 3), repeat=2)
    results["perft_kiwi"] = bench(
        "perft(kiwipete, 2)", lambda: kernel.perft(*kiwi_state, 2), repeat=2)
    results["movegen"] = bench(
        f"legal_moves x {len(states)} positions",
        lambda: [kernel.legal_moves(*s) for s in states], repeat=2)
    return results


def main():
    from cogchess.board import parse_fen, start_board

    states = sample_states()
    sb = start_board()
    kb = parse_fen(KIWIPETE)
    start_state = (sb._squares, sb._stm, sb.castling.mask, sb._ep)
    kiwi_state = (kb._squares, kb._stm, kb.castling.mask, kb._ep)

    pure_res = run(pure, "pure-python", states, start_state, kiwi_state)
    if compiled is None:
        print("\ncompiled kernel not built (pip install -e . builds it)")
        return
    comp_res = run(compiled, "compiled", states, start_state, kiwi_state)
    print("\nspeedup (pure / compiled)")
    for key in pure_res:
        print(f"  {key:<38} {pure_res[key] / comp_res[key]:10.1f}x")


if __name__ == "__main__":
    main()

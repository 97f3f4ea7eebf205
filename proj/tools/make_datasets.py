#!/usr/bin/env python3
"""Materialize the evaluation datasets under data/.

iris and wine come from scikit-learn's bundled copies. tictactoe is the
complete enumeration of finished games (first player moving first; boards
reachable when play stops at the first three-in-a-row), encoded b=0, o=1,
x=2 with target "first player wins". diagnosis is the rule-generated acute
inflammation table (six symptoms, bladder-inflammation decision); the rule
is deterministic, so any faithful regeneration is perfectly learnable.
"""

import argparse
import csv
import os
import random


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path}: {len(rows)} rows x {len(header)} cols")


def make_sklearn(outdir):
    from sklearn.datasets import load_iris, load_wine

    for name, loader in [("iris", load_iris), ("wine", load_wine)]:
        data = loader()
        rows = [list(x) + [int(y)] for x, y in zip(data.data, data.target)]
        header = [f"a{i}" for i in range(data.data.shape[1])] + ["label"]
        write_csv(os.path.join(outdir, f"{name}.csv"), header, rows)


def winner(board):
    lines = [(0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8),
             (0, 4, 8), (2, 4, 6)]
    for a, b, c in lines:
        if board[a] != 0 and board[a] == board[b] == board[c]:
            return board[a]
    return 0


def make_tictactoe(outdir):
    # enumerate all play sequences, stopping at a win or a full board;
    # collect the distinct terminal boards. Cells carry the mover index:
    # blank=0, first player=1, second player=2.
    terminals = set()

    def play(board, player):
        w = winner(board)
        if w != 0 or all(v != 0 for v in board):
            terminals.add(tuple(board))
            return
        for i in range(9):
            if board[i] == 0:
                board[i] = player
                play(board, 3 - player)
                board[i] = 0

    play([0] * 9, 2)
    encode = {0: 0, 2: 1, 1: 2}  # blank=0, first player=1, second player=2
    rows = []
    for board in sorted(terminals):
        label = 1 if winner(list(board)) == 2 else 0
        rows.append([encode[v] for v in board] + [label])
    positives = sum(r[-1] for r in rows)
    print(f"tictactoe: {len(rows)} boards, {positives} first-player wins")
    header = [f"c{i}" for i in range(9)] + ["label"]
    write_csv(os.path.join(outdir, "tictactoe.csv"), header, rows)


def make_diagnosis(outdir):
    # six attributes: temperature plus five yes/no symptoms; the decision
    # (inflammation of the urinary bladder) follows the fixed rule
    #   urine pushing AND (micturition pains OR urethral burning)
    rng = random.Random(20240817)
    rows = []
    combos = [(a, b, c, d, e) for a in (0, 1) for b in (0, 1) for c in (0, 1)
              for d in (0, 1) for e in (0, 1)]
    target_rows = 120
    per = target_rows // len(combos) + 1
    pool = combos * per
    rng.shuffle(pool)
    for combo in pool[:target_rows]:
        nausea, lumbar, pushing, micturition, burning = combo
        temp = round(rng.uniform(35.5, 41.5), 1)
        label = 1 if pushing and (micturition or burning) else 0
        rows.append([temp, nausea, lumbar, pushing, micturition, burning, label])
    header = ["temperature", "nausea", "lumbar_pain", "urine_pushing",
              "micturition_pains", "urethra_burning", "label"]
    write_csv(os.path.join(outdir, "diagnosis.csv"), header, rows)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    make_sklearn(args.outdir)
    make_tictactoe(args.outdir)
    make_diagnosis(args.outdir)


if __name__ == "__main__":
    main()

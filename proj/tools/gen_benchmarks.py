#!/usr/bin/env python3
"""Regenerates programs/*.toy benchmark files (except bothin.toy).

eq10/eq20 systems come from a 64-bit LCG so the C++ oracle in
tests/oracles.hpp can rebuild exactly the same coefficients."""
import itertools
import pathlib
import sys

MASK = (1 << 64) - 1


class Lcg:
    def __init__(self, seed):
        self.x = seed & MASK

    def next(self, n):
        self.x = (self.x * 6364136223846793005 + 1442695040888963407) & MASK
        return (self.x >> 33) % n


def linear(coefs, xs):
    out = ""
    for c, x in zip(coefs, xs):
        if c == 0:
            continue
        term = x if abs(c) == 1 else f"{abs(c)} #* {x}"
        if not out:
            out = term if c > 0 else f"0 #- {term}"
        else:
            out += (" #+ " if c > 0 else " #- ") + term
    return out or "0"


def pairwise(xs):
    return [f"{a} /= {b}" for a, b in itertools.combinations(xs, 2)]


def clause(head, conds):
    body = ",\n    ".join(conds)
    return f"{head} :-\n    {body}.\n"


def word(w):
    n = len(w)
    return linear([10 ** (n - 1 - i) for i in range(n)], list(w))


def crypt(name, a, b, c, nonzero, lo=0):
    a, b, c = a.upper(), b.upper(), c.upper()
    nonzero = [x.upper() for x in nonzero]
    letters = sorted(set(a + b + c), key=(a + b + c).index)
    vs = ", ".join(letters)
    conds = [f"domain [{vs}] {lo} 9"]
    conds += [f"{x} /= 0" for x in nonzero]
    conds += pairwise(letters)
    conds += [f"{word(a)} #+ {word(b)} == {word(c)}"]
    conds += [f"labeling [] [{vs}]"]
    sig = " -> ".join(["[int]", "bool"])
    return (f"% {a} + {b} = {c}, digits pairwise distinct.\n\n"
            f"{name} :: {sig}.\n" + clause(f"{name} [{vs}]", conds))


def eq(name, neq, seed):
    g = Lcg(seed)
    sol = [g.next(11) for _ in range(7)]
    xs = [f"X{i + 1}" for i in range(7)]
    conds = [f"domain [{', '.join(xs)}] 0 10"]
    for _ in range(neq):
        coefs = [g.next(101) - 50 for _ in range(7)]
        rhs = sum(c * s for c, s in zip(coefs, sol))
        pos = [c if c > 0 else 0 for c in coefs]
        neg = [-c if c < 0 else 0 for c in coefs]
        # keep both sides non-negative sums: pos . X == neg . X + rhs
        rhs_side = linear(neg, xs)
        if rhs_side == "0":
            rhs_side = str(rhs)
        elif rhs > 0:
            rhs_side += f" #+ {rhs}"
        elif rhs < 0:
            rhs_side += f" #- {-rhs}"
        conds.append(f"{linear(pos, xs)} == {rhs_side}")
    conds.append(f"labeling [] [{', '.join(xs)}]")
    return (f"% {neq} linear equations over 7 variables in 0..10 (LCG seed {seed}).\n\n"
            f"{name} :: [int] -> bool.\n" + clause(f"{name} [{', '.join(xs)}]", conds))


def magic():
    xs = [f"A{i}" for i in range(1, 10)]
    # 3 rows, 3 columns, 1 diagonal
    lines = [(0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 8)]
    conds = [f"domain [{', '.join(xs)}] 1 9"]
    conds += pairwise(xs)
    conds += [f"{xs[a]} #+ {xs[b]} #+ {xs[c]} == 15" for a, b, c in lines]
    conds.append(f"labeling [] [{', '.join(xs)}]")
    return ("% 3x3 magic square, values 1..9, rows, columns and one diagonal sum to 15.\n\n"
            "magic :: [int] -> bool.\n" + clause(f"magic [{', '.join(xs)}]", conds))


def knapsack():
    xs = ["A", "B", "C", "D"]
    weights, values = [3, 4, 5, 7], [4, 5, 7, 9]
    conds = [f"domain [{', '.join(xs)}] 0 4",
             f"{linear(weights, xs)} #<= 20",
             f"{linear(values, xs)} #>= 27",
             f"labeling [] [{', '.join(xs)}]"]
    return ("% Knapsack as a CSP: item counts with weight <= 20 and value >= 27.\n\n"
            "knapsack :: [int] -> bool.\n" + clause(f"knapsack [{', '.join(xs)}]", conds))


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent.parent / "programs")
    files = {
        "smm.toy": crypt("smm", "send", "more", "money", ["s", "m"]),
        "donald.toy": crypt("donald", "donald", "gerald", "robert", []),
        "wwr.toy": crypt("wwr", "wrong", "wrong", "right", [], lo=1),
        "eq10.toy": eq("eq10", 10, 10),
        "eq20.toy": eq("eq20", 20, 20),
        "magic.toy": magic(),
        "knapsack.toy": knapsack(),
    }
    for name, text in files.items():
        (out / name).write_text(text)


if __name__ == "__main__":
    main()

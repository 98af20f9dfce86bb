"""Reference computations that share no code with the package."""
import itertools
import math


def max_complete_area(rows, cols, filled):
    """Largest rows x cols product over all subsets whose cells are all filled."""
    best = 0
    for r in range(1, len(rows) + 1):
        for rs in itertools.combinations(rows, r):
            ok_cols = [c for c in cols if all((x, c) in filled for x in rs)]
            best = max(best, len(rs) * len(ok_cols))
    return best


def matvec(rows, vec):
    return [sum(a * b for a, b in zip(row, vec)) for row in rows]


def abs_cosine(x, y):
    dot = sum(a * b for a, b in zip(x, y))
    return abs(dot) / (math.sqrt(sum(a * a for a in x)) * math.sqrt(sum(b * b for b in y)))


def normalized(x):
    n = math.sqrt(sum(a * a for a in x))
    return [a / n for a in x]

"""Published 7- and 15-variable equation sets in the classical labelling.

Each entry maps a component index to the factor pairs of its velocity terms,
transcribed from the classical octonion-style listings.  These are test
oracles for the line structures shipped in z2top.geometry; the package never
hard-codes them.
"""

CLASSIC_7_PAIRS = {
    1: [(2, 7), (6, 3), (5, 4)],
    2: [(7, 1), (5, 3), (4, 6)],
    3: [(1, 6), (2, 5), (4, 7)],
    4: [(1, 5), (6, 2), (7, 3)],
    5: [(4, 1), (3, 2), (6, 7)],
    6: [(3, 1), (2, 4), (7, 5)],
    7: [(1, 2), (3, 4), (5, 6)],
}

CLASSIC_15_PAIRS = {
    1: [(2, 7), (3, 6), (5, 4), (8, 9), (10, 11), (12, 13), (14, 15)],
    2: [(1, 7), (3, 5), (4, 6), (8, 10), (11, 9), (12, 14), (15, 13)],
    3: [(1, 6), (2, 5), (7, 4), (8, 12), (9, 13), (10, 14), (11, 15)],
    4: [(5, 1), (2, 6), (7, 3), (8, 15), (9, 14), (10, 13), (11, 12)],
    5: [(1, 4), (2, 3), (7, 6), (8, 14), (9, 15), (10, 12), (11, 13)],
    6: [(1, 3), (2, 4), (7, 5), (8, 13), (9, 12), (10, 15), (11, 14)],
    7: [(1, 2), (3, 4), (6, 5), (8, 11), (9, 10), (12, 15), (13, 14)],
    8: [(1, 9), (2, 10), (3, 12), (4, 15), (5, 14), (6, 13), (7, 11)],
    9: [(1, 8), (2, 11), (3, 13), (4, 14), (5, 15), (6, 12), (7, 10)],
    10: [(1, 11), (2, 8), (3, 14), (4, 13), (5, 12), (6, 15), (7, 9)],
    11: [(1, 10), (2, 9), (3, 15), (4, 12), (5, 13), (6, 14), (7, 8)],
    12: [(1, 13), (2, 14), (3, 8), (4, 11), (5, 10), (6, 9), (7, 15)],
    13: [(1, 12), (2, 15), (3, 9), (4, 10), (5, 11), (6, 8), (7, 14)],
    14: [(1, 15), (2, 12), (3, 10), (4, 9), (5, 8), (6, 11), (7, 13)],
    15: [(1, 14), (2, 13), (3, 11), (4, 8), (5, 9), (6, 10), (7, 12)],
}

#: The a-variable index sets of the classical 7-variable listing.
CLASSIC_7_A_SETS = [
    (3, 4, 5, 6),
    (1, 2, 5, 6),
    (1, 3, 5, 7),
    (2, 4, 5, 7),
    (2, 3, 6, 7),
    (1, 4, 6, 7),
    (1, 2, 3, 4),
]


def pairs_to_lines(pairs: dict) -> set:
    return {tuple(sorted((i, j, k))) for i, ps in pairs.items() for j, k in ps}

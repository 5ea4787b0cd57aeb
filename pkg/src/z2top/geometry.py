"""Points, lines and hyperplanes of the binary projective space on 2^n - 1 points.

The canonical labelling is arithmetic: point p (1 <= p <= 2^n - 1) is the
nonzero bit vector whose int value is p, with coordinates (z_0, ..., z_{n-1})
and z_{n-1} the least-significant bit.  Under it, three points form a line
exactly when their indices XOR to zero, so line generation is branch-free.

Classical labellings from the literature (the octonion triples for n = 3 and
a classical listing of the fifteen 7-point planes for n = 4) are shipped as
fixtures and related to the canonical labelling by a relabelling search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import gf2
from .errors import InvalidParameterError, UnsupportedSearchError

#: Largest n for which points are enumerated.
MAX_N_POINTS = 16
#: Largest n for which lines/hyperplanes are materialized (counts grow as 4^n).
MAX_N_INCIDENCE = 12
#: Largest n for which the exhaustive relabelling search runs.
MAX_N_SEARCH = 4


def _check_n(n: int, limit: int) -> None:
    if not isinstance(n, int) or n < 2 or n > limit:
        raise InvalidParameterError(f"n must be an integer in 2..{limit}, got {n!r}")


def num_points(n: int) -> int:
    return 2**n - 1


def num_lines(n: int) -> int:
    return (2**n - 1) * (2 ** (n - 1) - 1) // 3


@dataclass(frozen=True)
class Gf2Point:
    """A nonzero n-bit vector; its int value is the point index."""

    n: int
    index: int

    def __post_init__(self) -> None:
        if not 1 <= self.index <= num_points(self.n):
            raise InvalidParameterError(
                f"point index {self.index} out of range 1..{num_points(self.n)}"
            )

    @property
    def bits(self) -> tuple[int, ...]:
        """Coordinates (z_0, ..., z_{n-1})."""
        return gf2.bits_of(self.index, self.n)

    @property
    def bitstring(self) -> str:
        return format(self.index, f"0{self.n}b")


@dataclass(frozen=True)
class Line:
    """An unordered XOR-closed triple of distinct point indices."""

    points: tuple[int, int, int]

    def __post_init__(self) -> None:
        p, q, r = self.points
        if len({p, q, r}) != 3:
            raise InvalidParameterError(f"line points must be distinct: {self.points}")
        if p ^ q ^ r != 0:
            raise InvalidParameterError(f"not XOR-closed: {self.points}")
        object.__setattr__(self, "points", tuple(sorted(self.points)))

    def __contains__(self, p: int) -> bool:
        return p in self.points

    def third(self, p: int, q: int) -> int:
        return p ^ q


@dataclass(frozen=True)
class Hyperplane:
    """The points orthogonal to a nonzero normal vector."""

    normal: int
    points: tuple[int, ...]

    def __contains__(self, p: int) -> bool:
        return p in self.points


def enumerate_points(n: int) -> list[Gf2Point]:
    """All 2^n - 1 points, sorted by index."""
    _check_n(n, MAX_N_POINTS)
    return [Gf2Point(n, p) for p in range(1, num_points(n) + 1)]


def lines(n: int) -> list[Line]:
    """All unordered triples {p, q, p^q}, sorted."""
    _check_n(n, MAX_N_INCIDENCE)
    d = num_points(n)
    out = []
    for p in range(1, d + 1):
        for q in range(p + 1, d + 1):
            r = p ^ q
            if r > q:
                out.append(Line((p, q, r)))
    assert len(out) == num_lines(n)
    return out


def hyperplanes(n: int) -> list[Hyperplane]:
    """One hyperplane per nonzero normal, each with 2^(n-1) - 1 points."""
    _check_n(n, MAX_N_INCIDENCE)
    d = num_points(n)
    out = []
    for v in range(1, d + 1):
        pts = tuple(p for p in range(1, d + 1) if gf2.dot(v, p) == 0)
        out.append(Hyperplane(normal=v, points=pts))
    return out


@dataclass(frozen=True)
class Collineation:
    """A relabelling of the points 1..2^n - 1 that respects the line structure.

    ``perm[p - 1]`` is the image of point p.  Instances built by
    :meth:`from_matrix` act linearly on the canonical coordinates and map the
    canonical line set onto itself; instances found by the relabelling search
    map the canonical line set onto a target labelling's line set.
    """

    n: int
    perm: tuple[int, ...]
    matrix: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        d = num_points(self.n)
        if sorted(self.perm) != list(range(1, d + 1)):
            raise InvalidParameterError("perm is not a permutation of 1..2^n-1")

    def __call__(self, p: int) -> int:
        return self.perm[p - 1]

    def apply_triple(self, triple: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(self.perm[p - 1] for p in triple))

    @classmethod
    def from_matrix(cls, rows: Sequence[int], n: int) -> "Collineation":
        if len(rows) != n or not gf2.is_invertible(rows):
            raise InvalidParameterError("rows must form an invertible n x n GF(2) matrix")
        perm = tuple(gf2.mat_vec(rows, p) for p in range(1, num_points(n) + 1))
        return cls(n=n, perm=perm, matrix=tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "Collineation":
        return cls.from_matrix(tuple(1 << (n - 1 - i) for i in range(n)), n)


def _validated_triples(n: int, target_lines: Sequence[Iterable[int]]) -> list[tuple[int, ...]]:
    d = num_points(n)
    if len(target_lines) != num_lines(n):
        raise InvalidParameterError(
            f"expected {num_lines(n)} lines for n={n}, got {len(target_lines)}"
        )
    triples = []
    for t in target_lines:
        t = tuple(sorted(t))
        if len(t) != 3 or len(set(t)) != 3 or not all(1 <= p <= d for p in t):
            raise InvalidParameterError(f"not a triple of distinct points in 1..{d}: {t}")
        triples.append(t)
    return triples


def _third_point_table(triples: Iterable[tuple[int, ...]]) -> Optional[dict]:
    """Map each unordered pair on a line to the third point; None if any pair repeats."""
    table: dict[tuple[int, int], int] = {}
    for p, q, r in triples:
        for a, b, c in ((p, q, r), (p, r, q), (q, r, p)):
            if table.setdefault((a, b), c) != c:
                return None
    return table


def _search_relabelling(
    n: int, triples: list[tuple[int, ...]]
) -> Optional[tuple[int, ...]]:
    """First permutation (canonical -> target labels) mapping the canonical
    line set onto the target triples, or None.

    The search enumerates which target labels receive the canonical basis
    points 1, 2, 4, ..., 2^(n-1); each independent choice corresponds to one
    invertible GF(2) matrix, so the space has |GL(n, 2)| live candidates
    (20160 for n = 4).  All other images follow by line closure.
    """
    d = num_points(n)
    target_set = {tuple(t) for t in triples}
    third = _third_point_table(triples)
    if third is None:
        return None
    basis = [1 << j for j in range(n)]
    canonical = [(p, q, p ^ q) for p in range(1, d + 1) for q in range(p + 1, d + 1) if p ^ q > q]
    for frame in itertools.permutations(range(1, d + 1), n):
        perm = [0] * (d + 1)
        for b, t in zip(basis, frame):
            perm[b] = t
        used = set(frame)
        ok = True
        for c in range(3, d + 1):
            if perm[c]:
                continue
            low = c & -c
            img = third.get((min(perm[low], perm[c ^ low]), max(perm[low], perm[c ^ low])))
            if img is None or img in used:
                ok = False
                break
            perm[c] = img
            used.add(img)
        if not ok:
            continue
        image = {tuple(sorted((perm[p], perm[q], perm[r]))) for p, q, r in canonical}
        if image == target_set:
            return tuple(perm[1:])
    return None


def find_collineation(
    n: int, target_lines: Sequence[Iterable[int]]
) -> Optional[Collineation]:
    """Search for a relabelling carrying the canonical line set onto target_lines.

    Returns None when the target triples are not a genuine line structure.
    Refuses n > 4 (the frame space grows like |GL(n, 2)|).
    """
    _check_n(n, MAX_N_POINTS)
    if n > MAX_N_SEARCH:
        raise UnsupportedSearchError(f"relabelling search supports n <= {MAX_N_SEARCH}")
    triples = _validated_triples(n, target_lines)
    perm = _search_relabelling(n, triples)
    if perm is None:
        return None
    return Collineation(n=n, perm=perm)


def find_hyperplane_collineation(
    n: int, target_blocks: Sequence[Iterable[int]]
) -> Optional[Collineation]:
    """Search for a relabelling carrying the canonical hyperplane point sets
    onto the given blocks (compared as unordered sets).

    The line structure is first derived from the blocks: the points collinear
    with a pair are those common to every block containing the pair.
    """
    _check_n(n, MAX_N_POINTS)
    if n > MAX_N_SEARCH:
        raise UnsupportedSearchError(f"relabelling search supports n <= {MAX_N_SEARCH}")
    d = num_points(n)
    hsize = 2 ** (n - 1) - 1
    blocks = [frozenset(b) for b in target_blocks]
    if len(blocks) != d or any(len(b) != hsize for b in blocks):
        raise InvalidParameterError(f"expected {d} blocks of {hsize} points each")
    if any(not all(1 <= p <= d for p in b) for b in blocks):
        raise InvalidParameterError(f"block entries must lie in 1..{d}")
    if len(set(blocks)) != d:
        return None

    if n == 2:
        # Blocks are singletons and carry no pair structure; any labelling works.
        if set(blocks) != {frozenset((p,)) for p in range(1, 4)}:
            return None
        return Collineation.identity(2)

    triples = set()
    for p in range(1, d + 1):
        for q in range(p + 1, d + 1):
            common = frozenset.intersection(*[b for b in blocks if p in b and q in b])
            if len(common) != 3:
                return None
            triples.add(tuple(sorted(common)))
    if len(triples) != num_lines(n):
        return None
    perm = _search_relabelling(n, sorted(triples))
    if perm is None:
        return None
    coll = Collineation(n=n, perm=perm)
    image = {frozenset(coll.perm[p - 1] for p in h.points) for h in hyperplanes(n)}
    if image != set(blocks):
        return None
    return coll


def classic_fano_lines() -> list[tuple[int, int, int]]:
    """The 7 triples of the classical octonion labelling of the 7-point plane."""
    return [
        (1, 2, 7),
        (1, 3, 6),
        (1, 4, 5),
        (2, 3, 5),
        (2, 4, 6),
        (3, 4, 7),
        (5, 6, 7),
    ]


def classic_planes_15() -> list[tuple[int, ...]]:
    """A classical labelling of the fifteen 7-point planes on 15 points.

    Transcribed verbatim (bracket order preserved); treat entries as
    unordered sets.
    """
    return [
        (1, 2, 3, 4, 5, 6, 7),
        (1, 2, 8, 11, 10, 9, 7),
        (1, 3, 8, 13, 12, 9, 6),
        (2, 3, 8, 14, 12, 10, 5),
        (1, 2, 13, 14, 15, 12, 7),
        (1, 3, 14, 11, 10, 15, 6),
        (1, 4, 8, 14, 15, 9, 5),
        (1, 4, 13, 11, 10, 12, 5),
        (2, 3, 11, 13, 15, 9, 5),
        (2, 4, 8, 13, 15, 10, 6),
        (2, 4, 11, 14, 12, 9, 6),
        (3, 4, 8, 11, 15, 12, 7),
        (3, 4, 9, 10, 14, 13, 7),
        (5, 6, 8, 11, 13, 14, 7),
        (5, 6, 9, 10, 12, 15, 7),
    ]


def classic_line_set(n: int) -> list[tuple[int, ...]]:
    """Line triples of the classical labelling, for n <= 4.

    n = 2 coincides with the canonical labelling; n = 3 is the octonion
    triple list; n = 4 is derived from the classical plane listing.
    """
    if n == 2:
        return [line.points for line in lines(2)]
    if n == 3:
        return classic_fano_lines()
    if n == 4:
        blocks = [frozenset(b) for b in classic_planes_15()]
        triples = set()
        for p in range(1, 16):
            for q in range(p + 1, 16):
                common = frozenset.intersection(*[b for b in blocks if p in b and q in b])
                assert len(common) == 3
                triples.add(tuple(sorted(common)))
        return sorted(triples)
    raise InvalidParameterError(f"classical labelling available for n in 2..4, got {n}")


def geometry_json(n: int) -> dict:
    """Geometry dump: points as bit strings, line triples, hyperplane incidences."""
    pts = enumerate_points(n)
    return {
        "schema_version": 1,
        "n": n,
        "points": [p.bitstring for p in pts],
        "lines": [list(line.points) for line in lines(n)],
        "hyperplanes": [
            {"normal": h.normal, "points": list(h.points)} for h in hyperplanes(n)
        ],
    }


def incidence_dot(n: int) -> str:
    """Bipartite point-line incidence graph in DOT format."""
    out = [f"graph incidence_{n} {{"]
    for p in range(1, num_points(n) + 1):
        out.append(f'  p{p} [shape=circle, label="{p}"];')
    for i, line in enumerate(lines(n), start=1):
        out.append(f'  L{i} [shape=box, label="L{i}"];')
        for p in line.points:
            out.append(f"  p{p} -- L{i};")
    out.append("}")
    return "\n".join(out) + "\n"

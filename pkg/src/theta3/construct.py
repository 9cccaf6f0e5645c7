"""Constructors, composition (parallel connection, 2-sum), recognizers.

The building blocks here are the three block families the rest of the
package keeps meeting: circuits U_{n-1,n}, cycle matroids of complete
graphs M(K_n) (all weight-1 and weight-2 vectors of dimension n-1), and
binary projective geometries PG(r-1,2) (all nonzero vectors of dimension
r).  The recognizers answer the converse question, and their _mapping
variants also return an explicit isomorphism onto the constructor's
labeling, which recipe synthesis needs.

Parallel connection glues two matroids across one shared point.  Both
sides are re-coordinatized so the basepoint column becomes the first
unit vector; the two coordinate blocks then overlap in exactly that
first row.  A loop basepoint cannot be moved to a unit column, and the
convention for that degenerate case is a direct sum with the basepoint
contracted on the other side.  Coloop basepoints need no special case:
after the change of basis the rest of that side avoids row 1 entirely,
so the construction degenerates to the right direct sum by itself.
"""

from __future__ import annotations

import re
from math import isqrt

from theta3.budget import Budget
from theta3.gf2 import MAX_DIM, DimensionError, Echelon, _coordinates
from theta3.matroid import (
    BinaryMatroid,
    contract,
    delete,
    direct_sum,
    dual,
)

__all__ = [
    "circuit_matroid",
    "complete_graph_matroid",
    "projective_geometry",
    "cycle_matroid",
    "parallel_connection",
    "two_sum",
    "is_projective",
    "is_complete_graph",
    "is_circuit",
    "is_cocircuit",
    "circuit_mapping",
    "complete_graph_mapping",
    "projective_mapping",
    "catalog_matroid",
    "catalog_listing",
    "complete_graph_edges",
    "cycle_edges",
    "complete_bipartite_edges",
    "theta_edges",
    "K5_LABELED_EDGES",
]


# -- constructors --------------------------------------------------------


def circuit_matroid(n: int) -> BinaryMatroid:
    """U_{n-1,n} on labels e1..en: n-1 units plus their sum (n=1: a loop)."""
    if n < 1:
        raise ValueError("circuit_matroid needs n >= 1")
    if n - 1 > MAX_DIM:
        raise DimensionError(f"circuit on {n} elements needs dimension {n - 1}")
    labels = tuple(f"e{i}" for i in range(1, n + 1))
    units = [1 << i for i in range(n - 1)]
    total = 0
    for u in units:
        total ^= u
    return BinaryMatroid(labels, tuple(units + [total]), n - 1)


def complete_graph_matroid(n: int) -> BinaryMatroid:
    """M(K_n) on labels "i-j": vertex n is grounded, so its edges are units."""
    if n < 1:
        raise ValueError("complete_graph_matroid needs n >= 1")
    if n - 1 > MAX_DIM:
        raise DimensionError(f"M(K_{n}) needs dimension {n - 1}")
    labels = []
    cols = []
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            labels.append(f"{i}-{j}")
            c = 1 << (i - 1)
            if j < n:
                c ^= 1 << (j - 1)
            cols.append(c)
    return BinaryMatroid(tuple(labels), tuple(cols), n - 1)


def projective_geometry(r: int) -> BinaryMatroid:
    """PG(r-1,2) on labels p1..p(2^r-1); the label index is the column value."""
    if r < 1:
        raise ValueError("projective_geometry needs rank >= 1")
    if r > MAX_DIM:
        raise DimensionError(f"projective geometry of rank {r} exceeds MAX_DIM")
    count = (1 << r) - 1
    return BinaryMatroid(
        tuple(f"p{k}" for k in range(1, count + 1)),
        tuple(range(1, count + 1)),
        r,
    )


def cycle_matroid(edges: list[tuple[str, str, str]]) -> BinaryMatroid:
    """Vertex-edge incidence columns over GF(2); graph loops become loops."""
    for e in edges:
        if len(e) != 3:
            raise ValueError(f"edge must be (u, v, label), got {e!r}")
    verts = sorted({u for u, _, _ in edges} | {v for _, v, _ in edges})
    if len(verts) > MAX_DIM:
        raise DimensionError(f"{len(verts)} vertices exceed MAX_DIM = {MAX_DIM}")
    pos = {v: i for i, v in enumerate(verts)}
    labels = tuple(lab for _, _, lab in edges)
    cols = tuple((1 << pos[u]) ^ (1 << pos[v]) for u, v, _ in edges)
    return BinaryMatroid(labels, cols, len(verts))


# -- graph edge lists used by the catalog and the test samplers ----------


def complete_graph_edges(n: int) -> list[tuple[str, str, str]]:
    return [
        (f"v{i}", f"v{j}", f"{i}-{j}")
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    ]


def cycle_edges(n: int) -> list[tuple[str, str, str]]:
    return [(f"v{i}", f"v{i % n + 1}", f"c{i}") for i in range(1, n + 1)]


def complete_bipartite_edges(m: int, n: int) -> list[tuple[str, str, str]]:
    return [
        (f"u{i}", f"w{j}", f"u{i}w{j}")
        for i in range(1, m + 1)
        for j in range(1, n + 1)
    ]


def theta_edges(a: int, b: int, c: int) -> list[tuple[str, str, str]]:
    """Two vertices joined by three internally disjoint paths of the given lengths."""
    if min(a, b, c) < 1:
        raise ValueError("path lengths must be >= 1")
    edges = []
    for name, length in (("A", a), ("B", b), ("C", c)):
        prev = "x"
        for k in range(1, length):
            nxt = f"{name.lower()}{k}"
            edges.append((prev, nxt, f"{name}{k}"))
            prev = nxt
        edges.append((prev, "y", f"{name}{length}"))
    return edges


# The K5 edge labeling whose cycle matroid is dual to the MSTAR_K5
# catalog matrix: pentagon 7,3,6,5,0 around v0..v4, pentagram 8,9,1,2,4.
K5_LABELED_EDGES: list[tuple[str, str, str]] = [
    ("v0", "v1", "7"),
    ("v1", "v2", "3"),
    ("v2", "v3", "6"),
    ("v3", "v4", "5"),
    ("v4", "v0", "0"),
    ("v0", "v2", "8"),
    ("v0", "v3", "9"),
    ("v1", "v4", "1"),
    ("v1", "v3", "2"),
    ("v2", "v4", "4"),
]


# -- composition ---------------------------------------------------------


def _basepoint_first(M: BinaryMatroid, p: str) -> tuple[list[int], int]:
    """Rank-dimension coordinates of M's columns with col(p) mapped to e1."""
    ppos = M._index[p]
    cols = list(M.cols)
    ech = Echelon()
    ech.insert(cols[ppos])
    basis_idx = [ppos]
    for i, c in enumerate(cols):
        if i != ppos and ech.insert(c):
            basis_idx.append(i)
    return _coordinates(cols, basis_idx), len(basis_idx)


def parallel_connection(M: BinaryMatroid, N: BinaryMatroid, pM: str, pN: str) -> BinaryMatroid:
    """Glue M and N across one shared point; the point keeps label pM.

    Loop basepoints degenerate to a direct sum with the basepoint
    contracted on the other side (the loop itself survives).  All other
    cases, coloops included, go through the shared-unit construction.
    """
    cM = M.col_of(pM)
    cN = N.col_of(pN)
    clash = (M.label_set - {pM}) & (N.label_set - {pN})
    if clash:
        raise ValueError(f"label collision outside basepoint: {sorted(clash)}")
    if cM == 0:
        return direct_sum(M, contract(N, [pN]))
    if cN == 0:
        return direct_sum(contract(M, [pM]), N.relabel({pN: pM}))
    am, rm = _basepoint_first(M, pM)
    an, rn = _basepoint_first(N, pN)
    dim = rm + rn - 1
    if dim > MAX_DIM:
        raise DimensionError(f"parallel connection needs dimension {dim} > {MAX_DIM}")
    labels = M.labels + tuple(lab for lab in N.labels if lab != pN)
    cols = list(am)
    for j, lab in enumerate(N.labels):
        if lab == pN:
            continue
        c = an[j]
        cols.append((c & 1) | (c >> 1) << rm)
    return BinaryMatroid(labels, tuple(cols), dim)


def two_sum(M: BinaryMatroid, N: BinaryMatroid, pM: str, pN: str) -> BinaryMatroid:
    """Parallel connection with the glue point removed afterwards."""
    if M.size < 3 or N.size < 3:
        raise ValueError("two_sum needs at least 3 elements on each side")
    return delete(parallel_connection(M, N, pM, pN), [pM])


# -- recognizers ---------------------------------------------------------


def is_circuit(M: BinaryMatroid) -> bool:
    """E(M) itself is a circuit: columns sum to zero with a single dependency."""
    if M.size < 1:
        return False
    total = 0
    for c in M.cols:
        total ^= c
    return total == 0 and M.rank == M.size - 1


def is_cocircuit(M: BinaryMatroid) -> bool:
    """The dual is a circuit, i.e. M = U_{1,n}: rank 1, no loops."""
    return M.size >= 1 and M.rank == 1 and 0 not in M.cols


def is_projective(M: BinaryMatroid) -> bool:
    """Simple with every nonzero vector of its span present: 2^rank - 1 points."""
    return M.size >= 1 and M.is_simple and M.size == (1 << M.rank) - 1


def circuit_mapping(M: BinaryMatroid) -> dict[str, str] | None:
    """Constructor-label to M-label isomorphism, if M is a circuit.

    Any bijection works: every permutation of U_{n-1,n} is an automorphism.
    """
    if not is_circuit(M):
        return None
    return {f"e{i + 1}": lab for i, lab in enumerate(sorted(M.labels))}


def projective_mapping(M: BinaryMatroid) -> dict[str, str] | None:
    """Map p<k> labels onto M, if projective; any basis change is an automorphism."""
    if not is_projective(M):
        return None
    ech = Echelon()
    basis_idx = [i for i, c in enumerate(M.cols) if ech.insert(c)]
    coords = _coordinates(list(M.cols), basis_idx)
    return {f"p{c}": M.labels[i] for i, c in enumerate(coords)}


def _triangle_basis(M: BinaryMatroid, budget: Budget | None) -> list[int] | None:
    """First independent basis whose members pairwise sum to present columns.

    In a genuine M(K_n) such a set is necessarily an edge star (pairwise
    adjacent edge sets are stars or triangles, and triangles are
    dependent), so the first hit is the one to standardize against.
    """
    colset = M.colset
    cols = M.cols
    n = M.size
    r = M.rank
    ech = Echelon()
    chosen: list[int] = []

    def grow(start: int) -> bool:
        if budget is not None:
            budget.tick()
        if len(chosen) == r:
            return True
        for i in range(start, n):
            c = cols[i]
            if any(c ^ cols[j] not in colset for j in chosen):
                continue
            piv = ech.insert(c)
            if not piv:
                continue
            chosen.append(i)
            if grow(i + 1):
                return True
            chosen.pop()
            ech.remove(piv)
        return False

    return chosen if grow(0) else None


def complete_graph_mapping(
    M: BinaryMatroid, budget: Budget | None = None
) -> dict[str, str] | None:
    """Constructor-label to M-label isomorphism, if M is some M(K_n).

    Count and rank filters first; then a star basis is searched and the
    matrix standardized over it.  If all columns come out with weight
    <= 2 they are C(n,2) distinct such vectors, which is all of them,
    and that forces M(K_n) exactly.
    """
    if not M.is_simple and M.size > 0:
        return None
    s = M.size
    n = (1 + isqrt(1 + 8 * s)) // 2
    if n * (n - 1) // 2 != s or M.rank != n - 1:
        return None
    basis = _triangle_basis(M, budget)
    if basis is None:
        return None
    coords = _coordinates(list(M.cols), basis)
    mapping: dict[str, str] = {}
    for i, c in enumerate(coords):
        w = c.bit_count()
        if w > 2:
            return None
        if w == 1:
            a = c.bit_length()
            constructed = f"{a}-{n}"
        else:
            b = c.bit_length()
            a = (c ^ (1 << (b - 1))).bit_length()
            constructed = f"{a}-{b}"
        mapping[constructed] = M.labels[i]
    return mapping


def is_complete_graph(
    M: BinaryMatroid, budget: Budget | None = None
) -> tuple[bool, int | None]:
    mapping = complete_graph_mapping(M, budget)
    if mapping is None:
        return False, None
    n = (1 + isqrt(1 + 8 * M.size)) // 2
    return True, n


# -- named catalog -------------------------------------------------------


def _f7() -> BinaryMatroid:
    """Rank-3 projective geometry with the label equal to the column value."""
    return BinaryMatroid(tuple(str(k) for k in range(1, 8)), tuple(range(1, 8)), 3)


def _mstar_k5() -> BinaryMatroid:
    """Explicit rank-6 representation of the dual of M(K_5).

    Columns 1..6 are the identity; 7, 8, 9, 0 carry the weight-3
    patterns 1110.., ..1101 read row 1 first.
    """
    labels = ("1", "2", "3", "4", "5", "6", "7", "8", "9", "0")
    cols = (1, 2, 4, 8, 16, 32, 7, 44, 50, 25)
    return BinaryMatroid(labels, cols, 6)


def _mstar_k33() -> BinaryMatroid:
    edges = [
        (f"a{i}", f"b{j}", str((i - 1) * 3 + j))
        for i in range(1, 4)
        for j in range(1, 4)
    ]
    return dual(cycle_matroid(edges))


def _m_k24() -> BinaryMatroid:
    return cycle_matroid(complete_bipartite_edges(2, 4))


_FIXED_CATALOG = {
    "F7": _f7,
    "F7STAR": lambda: dual(_f7()),
    "MSTAR_K5": _mstar_k5,
    "MSTAR_K33": _mstar_k33,
    "M_K24": _m_k24,
}


def catalog_matroid(key: str) -> BinaryMatroid:
    """Resolve a named catalog key, e.g. F7, MK(5), PG(3), THETA(2,2,2)."""
    key = key.strip()
    if key in _FIXED_CATALOG:
        return _FIXED_CATALOG[key]()
    m = re.fullmatch(r"MK\((\d+)\)", key)
    if m:
        return complete_graph_matroid(int(m.group(1)))
    m = re.fullmatch(r"PG\((\d+)\)", key)
    if m:
        return projective_geometry(int(m.group(1)))
    m = re.fullmatch(r"CIRCUIT\((\d+)\)", key)
    if m:
        return circuit_matroid(int(m.group(1)))
    m = re.fullmatch(r"THETA\((\d+),(\d+),(\d+)\)", key)
    if m:
        a, b, c = (int(g) for g in m.groups())
        return cycle_matroid(theta_edges(a, b, c))
    raise KeyError(f"unknown catalog key: {key}")


def catalog_listing() -> list[tuple[str, str]]:
    """Key/description pairs for the fixed entries and parameter templates."""
    return [
        ("F7", "rank-3 projective geometry, labels 1..7 (label = column value)"),
        ("F7STAR", "dual of F7, rank 4 on 7 elements"),
        ("MSTAR_K5", "dual of M(K_5), explicit rank-6 matrix, labels 1..9,0"),
        ("MSTAR_K33", "dual of M(K_3,3), rank 4 on 9 elements"),
        ("M_K24", "cycle matroid of K_2,4, rank 5 on 8 elements"),
        ("MK(n)", "cycle matroid of the complete graph K_n"),
        ("PG(r)", "binary projective geometry of rank r (2^r - 1 points)"),
        ("CIRCUIT(n)", "the n-element circuit U_{n-1,n}"),
        ("THETA(a,b,c)", "cycle matroid of the theta graph with path lengths a,b,c"),
    ]

"""Support patterns, triangular rank, and exact biclique cover search.

Patterns and bipartite graphs are stored as bitsets (one int per left
vertex), which keeps the branch-and-bound searches allocation-free.  Both
cover searches are exact at desk scale and carry an explicit node budget;
traversal order is deterministic, so results are reproducible.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .linalg import ExactMatrix

DEFAULT_BUDGET = 2_000_000
_MAX_ENUM_SIDE = 20  # closure enumeration walks 2^side subsets


class SearchBudgetExceeded(Exception):
    """Raised when an exact search runs out of nodes; carries proven bounds."""

    def __init__(self, lower: int, upper: int, nodes: int):
        super().__init__(f"unknown, bounds [{lower},{upper}] after {nodes} nodes")
        self.lower = lower
        self.upper = upper
        self.nodes = nodes


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class SupportPattern:
    """0/1 pattern of an m x n matrix, one bitmask per row."""

    __slots__ = ("rows", "cols", "row_bits")

    def __init__(self, rows: int, cols: int, row_bits):
        bits = tuple(row_bits)
        if len(bits) != rows:
            raise ValueError("need one bitmask per row")
        full = (1 << cols) - 1
        if any(b & ~full for b in bits):
            raise ValueError("row bitmask wider than the column count")
        self.rows = rows
        self.cols = cols
        self.row_bits = bits

    @classmethod
    def from_rows(cls, rows) -> "SupportPattern":
        rows = [list(r) for r in rows]
        m = len(rows)
        n = len(rows[0]) if rows else 0
        if any(len(r) != n for r in rows):
            raise ValueError("ragged rows")
        masks = []
        for r in rows:
            mask = 0
            for j, v in enumerate(r):
                if v not in (0, 1):
                    raise ValueError(f"pattern entries must be 0/1, got {v}")
                mask |= v << j
            masks.append(mask)
        return cls(m, n, masks)

    @classmethod
    def ones(cls, rows: int, cols: int) -> "SupportPattern":
        return cls(rows, cols, [(1 << cols) - 1] * rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SupportPattern":
        return cls(rows, cols, [0] * rows)

    @classmethod
    def identity(cls, n: int) -> "SupportPattern":
        return cls(n, n, [1 << i for i in range(n)])

    def __getitem__(self, key) -> int:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        return (self.row_bits[i] >> j) & 1

    def __eq__(self, other):
        if not isinstance(other, SupportPattern):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.row_bits == other.row_bits
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.row_bits))

    def __repr__(self):
        body = "; ".join(
            "".join(str(self[i, j]) for j in range(self.cols))
            for i in range(self.rows)
        )
        return f"SupportPattern({self.rows}x{self.cols}: {body})"

    def col_bits(self) -> tuple[int, ...]:
        masks = [0] * self.cols
        for i, row in enumerate(self.row_bits):
            for j in _bits(row):
                masks[j] |= 1 << i
        return tuple(masks)

    def ones_count(self) -> int:
        return sum(row.bit_count() for row in self.row_bits)

    def zero_count(self) -> int:
        return self.rows * self.cols - self.ones_count()

    def ones_positions(self) -> list[tuple[int, int]]:
        return [
            (i, j) for i in range(self.rows) for j in _bits(self.row_bits[i])
        ]

    def transpose(self) -> "SupportPattern":
        return SupportPattern(self.cols, self.rows, self.col_bits())

    def complement(self) -> "SupportPattern":
        full = (1 << self.cols) - 1
        return SupportPattern(self.rows, self.cols, [full ^ b for b in self.row_bits])


def support(m: ExactMatrix) -> SupportPattern:
    """Replace every nonzero entry by 1 (exact zero test)."""
    masks = []
    for i in range(m.rows):
        mask = 0
        for j, v in enumerate(m.row(i)):
            if v:
                mask |= 1 << j
        masks.append(mask)
    return SupportPattern(m.rows, m.cols, masks)


class BipartiteGraph:
    """Bipartite graph, one right-neighbor bitmask per left vertex."""

    __slots__ = ("left_count", "right_count", "adj")

    def __init__(self, left_count: int, right_count: int, adj):
        masks = tuple(adj)
        if len(masks) != left_count:
            raise ValueError("need one adjacency bitmask per left vertex")
        full = (1 << right_count) - 1
        if any(a & ~full for a in masks):
            raise ValueError("adjacency bitmask wider than the right side")
        self.left_count = left_count
        self.right_count = right_count
        self.adj = masks

    @classmethod
    def from_edges(cls, left_count: int, right_count: int, edges) -> "BipartiteGraph":
        masks = [0] * left_count
        for u, v in edges:
            if not (0 <= u < left_count and 0 <= v < right_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            masks[u] |= 1 << v
        return cls(left_count, right_count, masks)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.left_count) for v in _bits(self.adj[u])]

    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def complement(self) -> "BipartiteGraph":
        full = (1 << self.right_count) - 1
        return BipartiteGraph(
            self.left_count, self.right_count, [full ^ a for a in self.adj]
        )

    def to_pattern(self) -> SupportPattern:
        return SupportPattern(self.left_count, self.right_count, self.adj)

    def __eq__(self, other):
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            self.left_count == other.left_count
            and self.right_count == other.right_count
            and self.adj == other.adj
        )

    def __repr__(self):
        return (
            f"BipartiteGraph({self.left_count}+{self.right_count} vertices, "
            f"{self.edge_count()} edges)"
        )


def poset_of(m: SupportPattern) -> BipartiteGraph:
    """Hasse diagram with rows below columns: edge (k, l) iff entry (k, l) is 0.

    The zero convention is the one under which subspace-lattice embeddings
    characterize the pattern (row space below column space exactly at the
    zeros); see the package docs for the sign discussion.
    """
    full = (1 << m.cols) - 1
    return BipartiteGraph(m.rows, m.cols, [full ^ b for b in m.row_bits])


@dataclass(frozen=True)
class Biclique:
    """Complete bipartite block: ``left_set`` x ``right_set`` as bitsets."""

    left_set: int
    right_set: int

    def __post_init__(self):
        if self.left_set <= 0 or self.right_set <= 0:
            raise ValueError("a biclique needs nonempty sides")

    def covers(self, u: int, v: int) -> bool:
        return bool((self.left_set >> u) & 1 and (self.right_set >> v) & 1)

    def contains_edge_of(self, g: BipartiteGraph) -> bool:
        return any(g.adj[u] & self.right_set for u in _bits(self.left_set))


@dataclass(frozen=True)
class BicliqueCover:
    bicliques: tuple[Biclique, ...]

    def __len__(self):
        return len(self.bicliques)

    def covers(self, g: BipartiteGraph) -> bool:
        """Every edge of ``g`` lies in some biclique."""
        masks = [0] * g.left_count
        for b in self.bicliques:
            for u in _bits(b.left_set):
                masks[u] |= b.right_set
        return all(g.adj[u] & ~masks[u] == 0 for u in range(g.left_count))

    def avoids(self, g: BipartiteGraph) -> bool:
        """No biclique contains an edge of ``g``."""
        return not any(b.contains_edge_of(g) for b in self.bicliques)


@dataclass(frozen=True)
class CoverSearchResult:
    size: int
    cover: BicliqueCover
    nodes: int


# -- triangular rank ---------------------------------------------------------


def _max_matching(row_masks: list[int], n_cols: int) -> int:
    match_of_col = [-1] * n_cols
    size = 0
    for r, mask in enumerate(row_masks):
        seen = 0

        def augment(u: int) -> bool:
            nonlocal seen
            for c in _bits(row_masks[u] & ~seen):
                seen |= 1 << c
                if match_of_col[c] < 0 or augment(match_of_col[c]):
                    match_of_col[c] = u
                    return True
            return False

        if augment(r):
            size += 1
    return size


def triangular_rank(m: SupportPattern) -> int:
    """Largest t admitting rows k_1..k_t, cols l_1..l_t with entry (k_i, l_i)
    nonzero and (k_i, l_j) zero for all j < i.

    Permuting such a submatrix gives a triangular block with nonzero
    diagonal, so this bounds the rank of every matrix with this support.
    Exact branch and bound; the prune is a bipartite matching upper bound
    on how many pairs can still be appended.
    """
    row_bits = m.row_bits
    n_rows, n_cols = m.rows, m.cols
    best = 0
    seen_states: set[tuple[int, int]] = set()

    def extension_bound(used_rows: int, used_cols: int) -> int:
        # Any future pair uses a row that is zero on every already-chosen
        # column, and the diagonal cells form a matching among 1-entries.
        avail = [
            row_bits[k] & ~used_cols
            for k in range(n_rows)
            if not (used_rows >> k) & 1 and not (row_bits[k] & used_cols)
        ]
        return _max_matching([a for a in avail if a], n_cols)

    def dfs(used_rows: int, used_cols: int, depth: int):
        nonlocal best
        if depth > best:
            best = depth
        key = (used_rows, used_cols)
        if key in seen_states:
            return
        seen_states.add(key)
        if depth + extension_bound(used_rows, used_cols) <= best:
            return
        for k in range(n_rows):
            if (used_rows >> k) & 1 or (row_bits[k] & used_cols):
                continue
            for l in _bits(row_bits[k] & ~used_cols):
                dfs(used_rows | (1 << k), used_cols | (1 << l), depth + 1)

    dfs(0, 0, 0)
    return best


# -- maximal biclique enumeration -------------------------------------------


def _maximal_bicliques(adj: list[int], left_count: int, right_count: int):
    """All inclusion-maximal bicliques (L, R) of the graph, L and R nonempty.

    Closure enumeration over left subsets: R is the intersection of the
    rows' neighborhoods, L the set of all rows containing that R.
    """
    side = min(left_count, right_count)
    if side > _MAX_ENUM_SIDE:
        raise ValueError(
            f"graph too large for exact enumeration (min side {side} > {_MAX_ENUM_SIDE})"
        )
    if left_count > right_count:
        # enumerate on the transpose, swap back
        cols = [0] * right_count
        for u, a in enumerate(adj):
            for v in _bits(a):
                cols[v] |= 1 << u
        return [
            (left, right)
            for right, left in _maximal_bicliques(cols, right_count, left_count)
        ]
    found = {}
    common = [0] * (1 << left_count)
    full_right = (1 << right_count) - 1
    common[0] = full_right
    for mask in range(1, 1 << left_count):
        low = mask & -mask
        r = common[mask ^ low] & adj[low.bit_length() - 1]
        common[mask] = r
        if not r:
            continue
        closure = 0
        for u in range(left_count):
            if adj[u] & r == r:
                closure |= 1 << u
        found[(closure, r)] = None
    return list(found.keys())


# -- exact minimum cover search ----------------------------------------------


def _greedy_cover(cov_masks: list[int], universe: int) -> tuple[int, ...]:
    chosen = []
    uncovered = universe
    while uncovered:
        best_i, best_gain = -1, 0
        for i, cov in enumerate(cov_masks):
            gain = (cov & uncovered).bit_count()
            if gain > best_gain:
                best_i, best_gain = i, gain
        if best_i < 0:  # pragma: no cover - guarded by construction
            raise ValueError("an element is covered by no candidate set")
        chosen.append(best_i)
        uncovered &= ~cov_masks[best_i]
    return tuple(chosen)


def _fooling_bound(co_cover: list[int], uncovered: int) -> int:
    # Greedy set of elements pairwise not coverable by one candidate set;
    # each forces its own set, so the count is a valid lower bound.
    count = 0
    rest = uncovered
    while rest:
        e = (rest & -rest).bit_length() - 1
        count += 1
        rest &= ~co_cover[e]
    return count


class _CoverSearch:
    def __init__(self, cov_masks: list[int], n_elems: int, budget: int):
        self.cov = cov_masks
        self.n = n_elems
        self.budget = budget
        self.universe = (1 << n_elems) - 1
        self.covers_of = [
            [i for i, cov in enumerate(cov_masks) if (cov >> e) & 1]
            for e in range(n_elems)
        ]
        if any(not c for c in self.covers_of):
            raise ValueError("an element is covered by no candidate set")
        self.co_cover = [0] * n_elems
        for e in range(n_elems):
            for i in self.covers_of[e]:
                self.co_cover[e] |= self.cov[i]

    def root_lower_bound(self) -> int:
        return _fooling_bound(self.co_cover, self.universe)

    def solve(self, threads: int = 1) -> tuple[tuple[int, ...], int]:
        """Returns (chosen set indices, nodes explored)."""
        if not self.universe:
            return (), 0
        greedy = _greedy_cover(self.cov, self.universe)
        # Branch on the hardest element at the root; subtrees are
        # independent searches merged by (size, branch index), so the
        # result does not depend on the worker count.
        e = min(range(self.n), key=lambda x: (len(self.covers_of[x]), x))
        branches = self._ordered_candidates(e, self.universe)
        ub = len(greedy)

        def run_branch(i: int):
            best: list = [ub, greedy]
            nodes = [0]
            exhausted = False
            try:
                self._dfs(self.universe & ~self.cov[i], 1, (i,), best, nodes)
            except SearchBudgetExceeded:
                exhausted = True
            return best[0], best[1], nodes[0], exhausted

        if threads > 1 and len(branches) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run_branch, branches))
        else:
            results = [run_branch(i) for i in branches]

        total_nodes = sum(r[2] for r in results)
        best_size, best_choice = min((r[0], tuple(r[1])) for r in results)
        if any(r[3] for r in results):
            lower = self.root_lower_bound()
            if best_size > lower:
                raise SearchBudgetExceeded(lower, best_size, total_nodes)
        return best_choice, total_nodes

    def _ordered_candidates(self, e: int, uncovered: int) -> list[int]:
        return sorted(
            self.covers_of[e],
            key=lambda i: (-(self.cov[i] & uncovered).bit_count(), i),
        )

    def _dfs(self, uncovered: int, count: int, chosen: tuple, best: list, nodes: list):
        nodes[0] += 1
        if nodes[0] > self.budget:
            raise SearchBudgetExceeded(0, best[0], nodes[0])
        if not uncovered:
            if count < best[0]:
                best[0] = count
                best[1] = chosen
            return
        if count + _fooling_bound(self.co_cover, uncovered) >= best[0]:
            return
        e = min(
            _bits(uncovered),
            key=lambda x: (
                sum((self.cov[i] & uncovered).bit_count() > 0 for i in self.covers_of[x]),
                x,
            ),
        )
        for i in self._ordered_candidates(e, uncovered):
            self._dfs(uncovered & ~self.cov[i], count + 1, chosen + (i,), best, nodes)


def _coverage_masks(bicliques, positions_index, adj) -> list[int]:
    masks = []
    for left, right in bicliques:
        mask = 0
        for u in _bits(left):
            for v in _bits(adj[u] & right):
                mask |= 1 << positions_index[(u, v)]
        masks.append(mask)
    return masks


def minimum_biclique_cover(
    m: SupportPattern, budget: int = DEFAULT_BUDGET, threads: int = 1
) -> CoverSearchResult:
    """Exact minimum cover of the 1-entries by all-ones submatrices."""
    ones = m.ones_positions()
    if not ones:
        return CoverSearchResult(0, BicliqueCover(()), 0)
    index = {pos: i for i, pos in enumerate(ones)}
    rects = sorted(_maximal_bicliques(list(m.row_bits), m.rows, m.cols))
    cov = _coverage_masks(rects, index, list(m.row_bits))
    search = _CoverSearch(cov, len(ones), budget)
    chosen, nodes = search.solve(threads=threads)
    cover = BicliqueCover(tuple(Biclique(*rects[i]) for i in chosen))
    return CoverSearchResult(len(chosen), cover, nodes)


def boolean_rank(
    m: SupportPattern, budget: int = DEFAULT_BUDGET, threads: int = 1
) -> int:
    """Minimum number of bicliques (all-ones submatrices) covering the 1s.

    Raises :class:`SearchBudgetExceeded` with proven bounds if the search
    exceeds ``budget`` nodes.
    """
    return minimum_biclique_cover(m, budget=budget, threads=threads).size


def minimum_feasible_cover(
    ones: BipartiteGraph,
    forbidden: BipartiteGraph,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> CoverSearchResult:
    """Minimum number of bicliques covering E(ones), none containing a
    forbidden edge.

    A feasible biclique may contain vertex pairs that are edges of neither
    graph; only the forbidden edges are excluded.  Candidates are the
    maximal bicliques of the bipartite complement of ``forbidden``.
    """
    if (
        ones.left_count != forbidden.left_count
        or ones.right_count != forbidden.right_count
    ):
        raise ValueError("the two graphs must share their vertex sets")
    if any(a & b for a, b in zip(ones.adj, forbidden.adj)):
        raise ValueError("edge sets of ones and forbidden must be disjoint")
    edges = ones.edges()
    if not edges:
        return CoverSearchResult(0, BicliqueCover(()), 0)
    index = {pos: i for i, pos in enumerate(edges)}
    allowed = forbidden.complement()
    rects = sorted(
        _maximal_bicliques(list(allowed.adj), allowed.left_count, allowed.right_count)
    )
    cov = _coverage_masks(rects, index, list(ones.adj))
    keep = [i for i, c in enumerate(cov) if c]
    rects = [rects[i] for i in keep]
    cov = [cov[i] for i in keep]
    search = _CoverSearch(cov, len(edges), budget)
    chosen, nodes = search.solve(threads=threads)
    cover = BicliqueCover(tuple(Biclique(*rects[i]) for i in chosen))
    return CoverSearchResult(len(chosen), cover, nodes)


def feasible_biclique_cover(
    ones: BipartiteGraph,
    forbidden: BipartiteGraph,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> int:
    return minimum_feasible_cover(
        ones, forbidden, budget=budget, threads=threads
    ).size

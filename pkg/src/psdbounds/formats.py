"""Text and JSON wire formats shared by the library and the CLI.

Matrix text: a header line ``m n`` followed by m lines of n entries, each
an integer ``p`` or a fraction ``p/q`` with q > 0.  ``#`` starts a comment.
Patterns use the same layout restricted to 0/1 entries.  Graph text: a
header ``L R`` followed by one line of 1-based right-neighbor indices per
left vertex.  JSON documents carry ``"schema": 1`` and keep exact values
as rational strings; indices in JSON are 1-based, matching the usual
row/column numbering of matrices (the Python API is 0-based).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .embed import SubspaceEmbedding
from .linalg import ExactMatrix, Subspace
from .pattern import BipartiteGraph, SupportPattern
from .psd import Order3Certificate, PsdFactorization, SignAssignment

SCHEMA_VERSION = 1


class FormatError(ValueError):
    """Malformed input text or JSON."""


def _content_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def _parse_entry(token: str) -> Fraction:
    if "." in token:
        raise FormatError(f"bad entry {token!r}: decimals are not exact, use p/q")
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad entry {token!r}: {exc}") from None
    if "/" in token and int(token.split("/", 1)[1]) <= 0:
        raise FormatError(f"bad entry {token!r}: denominator must be positive")
    return value


def parse_matrix(text: str) -> ExactMatrix:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty matrix input")
    header = lines[0].split()
    if len(header) != 2:
        raise FormatError(f"matrix header must be 'm n', got {lines[0]!r}")
    m, n = (int(tok) for tok in header)
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} matrix rows, found {len(lines) - 1}")
    entries = []
    for line in lines[1:]:
        toks = line.split()
        if len(toks) != n:
            raise FormatError(f"expected {n} entries per row, got {len(toks)}")
        entries.extend(_parse_entry(t) for t in toks)
    return ExactMatrix(m, n, entries)


def format_matrix(m: ExactMatrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    for i in range(m.rows):
        lines.append(" ".join(str(v) for v in m.row(i)))
    return "\n".join(lines) + "\n"


def parse_pattern(text: str) -> SupportPattern:
    mat = parse_matrix(text)
    rows = []
    for i in range(mat.rows):
        row = []
        for v in mat.row(i):
            if v not in (0, 1):
                raise FormatError(f"pattern entries must be 0/1, got {v}")
            row.append(int(v))
        rows.append(row)
    return SupportPattern.from_rows(rows)


def format_pattern(p: SupportPattern) -> str:
    lines = [f"{p.rows} {p.cols}"]
    for i in range(p.rows):
        lines.append(" ".join(str(p[i, j]) for j in range(p.cols)))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> BipartiteGraph:
    # keep blank lines: a vertex with no neighbors is an empty line
    lines = [line.split("#", 1)[0] for line in text.splitlines()]
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        raise FormatError("empty graph input")
    header = lines[0].split()
    if len(header) != 2:
        raise FormatError(f"graph header must be 'L R', got {lines[0]!r}")
    left, right = (int(tok) for tok in header)
    body = lines[1 : 1 + left]
    if len(body) < left:
        raise FormatError(f"expected {left} adjacency lines, found {len(body)}")
    adj = []
    for line in body:
        mask = 0
        for tok in line.split():
            v = int(tok)
            if not 1 <= v <= right:
                raise FormatError(f"neighbor index {v} outside 1..{right}")
            mask |= 1 << (v - 1)
        adj.append(mask)
    return BipartiteGraph(left, right, adj)


def format_graph(g: BipartiteGraph) -> str:
    lines = [f"{g.left_count} {g.right_count}"]
    for u in range(g.left_count):
        neigh = [str(v + 1) for v in range(g.right_count) if g.has_edge(u, v)]
        lines.append(" ".join(neigh))
    return "\n".join(lines) + "\n"


# -- JSON ---------------------------------------------------------------------


def _basis_rows(s: Subspace) -> list[list[str]]:
    return [[str(v) for v in s.basis.row(i)] for i in range(s.dim)]


def embedding_to_json(e: SubspaceEmbedding) -> str:
    doc = {
        "schema": SCHEMA_VERSION,
        "kind": "subspace_embedding",
        "ambient_dim": e.ambient_dim,
        "U": [{"basis": _basis_rows(u)} for u in e.U],
        "V": [{"basis": _basis_rows(v)} for v in e.V],
    }
    return json.dumps(doc, indent=2) + "\n"


def embedding_from_json(text: str) -> SubspaceEmbedding:
    doc = _load(text, "subspace_embedding")
    q = int(doc["ambient_dim"])

    def space(obj) -> Subspace:
        rows = [[Fraction(v) for v in row] for row in obj["basis"]]
        return Subspace.from_vectors(q, rows)

    return SubspaceEmbedding(
        q,
        tuple(space(u) for u in doc["U"]),
        tuple(space(v) for v in doc["V"]),
    )


def factorization_to_json(f: PsdFactorization) -> str:
    doc = {
        "schema": SCHEMA_VERSION,
        "kind": "psd_factorization",
        "order": f.order,
        "A": [[str(v) for v in mat.entries] for mat in f.A],
        "B": [[str(v) for v in mat.entries] for mat in f.B],
    }
    return json.dumps(doc, indent=2) + "\n"


def factorization_from_json(text: str) -> PsdFactorization:
    doc = _load(text, "psd_factorization")
    q = int(doc["order"])

    def mat(entries) -> ExactMatrix:
        return ExactMatrix(q, q, [Fraction(v) for v in entries])

    return PsdFactorization(
        q,
        tuple(mat(e) for e in doc["A"]),
        tuple(mat(e) for e in doc["B"]),
    )


def float_factors_from_json(text: str) -> tuple[list[list[float]], list[list[float]], int]:
    """Factor entries as floats (accepts decimal strings), for reduce-rank."""
    doc = _load(text, "psd_factorization")
    q = int(doc["order"])

    def as_floats(entries) -> list[float]:
        return [float(Fraction(v)) for v in entries]

    return [as_floats(e) for e in doc["A"]], [as_floats(e) for e in doc["B"]], q


def certificate_to_json(cert: Order3Certificate) -> str:
    doc = {
        "schema": SCHEMA_VERSION,
        "kind": "order3_certificate",
        "claim": cert.claim,
        "bound": cert.bound,
        "rows": [k + 1 for k in cert.rows],
        "cols": [l + 1 for l in cert.cols],
        "assignments_checked": cert.assignments_checked,
        "min_rank": cert.min_rank,
        "witness": sign_assignment_doc(cert.witness),
        "pinned_rows": [k + 1 for k in cert.pinned_rows],
        "pinned_cols": [l + 1 for l in cert.pinned_cols],
        "column_distinctness": cert.column_distinctness,
        "reason": cert.reason,
    }
    return json.dumps(doc, indent=2) + "\n"


def sign_assignment_doc(w: SignAssignment | None):
    if w is None:
        return None
    return {
        "positions": [[i + 1, j + 1] for i, j in w.positions],
        "signs": list(w.signs),
    }


def _load(text: str, kind: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("kind") != kind:
        raise FormatError(f"expected a {kind} document")
    if doc.get("schema") != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema {doc.get('schema')!r}")
    return doc

"""Ternary incidence data and its dyadic views.

A context couples three element dictionaries (objects, attributes,
conditions) with a set of id triples. The two derivation operators defined
here are the algebraic core used by the miner and by the derivation-based
baseline engine; flattened dyadic views of the context are produced on
demand by :meth:`TriadicContext.project_dyadic`.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .bitsets import full_mask, mask_from_ids, mask_to_ids
from .errors import DIMENSION_NAMES, DataFormatError, UnknownLabelError

DIMENSIONS = (1, 2, 3)


def other_dimensions(i: int) -> tuple[int, int]:
    """The two dimensions paired with ``i``, in ascending order."""
    if i not in DIMENSIONS:
        raise ValueError(f"dimension must be 1, 2 or 3, got {i!r}")
    j, k = sorted(d for d in DIMENSIONS if d != i)
    return j, k


class ElementDictionary:
    """Bijective label <-> dense id mapping for one dimension.

    Ids are assigned in first-seen order, so the same input always produces
    the same numbering. Labels live in exactly one dimension; the same text
    may appear in another dimension under an unrelated id.
    """

    __slots__ = ("dimension", "_labels", "_ids")

    def __init__(self, dimension: int):
        if dimension not in DIMENSIONS:
            raise ValueError(f"dimension must be 1, 2 or 3, got {dimension!r}")
        self.dimension = dimension
        self._labels: list[str] = []
        self._ids: dict[str, int] = {}

    def add(self, label: str) -> int:
        if not isinstance(label, str):
            raise TypeError(f"labels must be strings, got {type(label).__name__}")
        existing = self._ids.get(label)
        if existing is not None:
            return existing
        new_id = len(self._labels)
        self._labels.append(label)
        self._ids[label] = new_id
        return new_id

    def id_of(self, label: str) -> int:
        try:
            return self._ids[label]
        except KeyError:
            raise UnknownLabelError(label, self.dimension) from None

    def label_of(self, element_id: int) -> str:
        return self._labels[element_id]

    def labels_of(self, element_ids: Iterable[int]) -> list[str]:
        """Labels of the given ids, sorted as strings (the display order)."""
        return sorted(self._labels[e] for e in element_ids)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self._labels)

    def __contains__(self, label: object) -> bool:
        return label in self._ids

    def __len__(self) -> int:
        return len(self._labels)

    def __repr__(self) -> str:
        return f"ElementDictionary(dim={self.dimension}, size={len(self)})"


class DyadicContext:
    """Flattened view of a triadic context along one dimension.

    Rows are the elements of the chosen dimension; columns are *all* pairs
    of the two remaining dimensions (the full Cartesian product, whether or
    not a column carries any incidence). Column ``(a_j, a_k)`` sits at index
    ``a_j * |K_k| + a_k``. Rows are bit masks over that column space.
    """

    __slots__ = ("dimension", "row_count", "col_counts", "columns", "row_masks")

    def __init__(
        self,
        dimension: int,
        row_count: int,
        col_counts: tuple[int, int],
        columns: list[tuple[int, int]],
        row_masks: list[int],
    ):
        self.dimension = dimension
        self.row_count = row_count
        self.col_counts = col_counts
        self.columns = columns
        self.row_masks = row_masks

    @property
    def column_count(self) -> int:
        return self.col_counts[0] * self.col_counts[1]

    def column_index(self, pair: tuple[int, int]) -> int:
        return pair[0] * self.col_counts[1] + pair[1]

    def has(self, row: int, pair: tuple[int, int]) -> bool:
        return bool(self.row_masks[row] >> self.column_index(pair) & 1)

    def common_pairs_mask(self, rows: Iterable[int]) -> int:
        """Intersection of the given rows; the full column space if empty."""
        mask = full_mask(self.column_count)
        for r in rows:
            mask &= self.row_masks[r]
        return mask

    def rows_with_block(self, block_mask: int) -> list[int]:
        """Rows whose incidence covers every column in ``block_mask``."""
        return [r for r in range(self.row_count) if self.row_masks[r] & block_mask == block_mask]

    def __repr__(self) -> str:
        return (
            f"DyadicContext(dim={self.dimension}, rows={self.row_count}, "
            f"columns={self.column_count})"
        )


class TriadicContext:
    """Immutable ternary context: three dictionaries plus an id-triple set."""

    def __init__(
        self,
        dictionaries: tuple[ElementDictionary, ElementDictionary, ElementDictionary],
        triples: frozenset[tuple[int, int, int]],
    ):
        self.dictionaries = dictionaries
        self.triples = triples
        sizes = tuple(len(d) for d in dictionaries)
        for a1, a2, a3 in triples:
            if not (0 <= a1 < sizes[0] and 0 <= a2 < sizes[1] and 0 <= a3 < sizes[2]):
                raise ValueError(f"triple ({a1}, {a2}, {a3}) out of range for sizes {sizes}")
        self._pair_rows: dict[int, list[int]] = {}

    @property
    def sizes(self) -> tuple[int, int, int]:
        return (len(self.dictionaries[0]), len(self.dictionaries[1]), len(self.dictionaries[2]))

    def size(self, dimension: int) -> int:
        return len(self.dictionary(dimension))

    def dictionary(self, dimension: int) -> ElementDictionary:
        if dimension not in DIMENSIONS:
            raise ValueError(f"dimension must be 1, 2 or 3, got {dimension!r}")
        return self.dictionaries[dimension - 1]

    def cell_count(self) -> int:
        n1, n2, n3 = self.sizes
        return n1 * n2 * n3

    # -- derivation operators -------------------------------------------------

    def _rows(self, dimension: int) -> list[int]:
        """Per-element pair masks for one dimension, built once on demand."""
        cached = self._pair_rows.get(dimension)
        if cached is None:
            cached = _pair_row_masks(self.triples, self.sizes, dimension)
            self._pair_rows[dimension] = cached
        return cached

    def _check_ids(self, dimension: int, ids: Iterable[int]) -> frozenset[int]:
        ids = frozenset(ids)
        n = self.size(dimension)
        for e in ids:
            if not 0 <= e < n:
                raise ValueError(f"element id {e} out of range for dimension {dimension}")
        return ids

    def derive_outer(self, dimension: int, elements: Iterable[int]) -> frozenset[tuple[int, int]]:
        """Pairs of the other two dimensions incident to every given element.

        The empty set derives to the full pair universe, the convention that
        keeps boundary tri-sets (with an empty component) closed.
        """
        elements = self._check_ids(dimension, elements)
        j, k = other_dimensions(dimension)
        nk = self.size(k)
        rows = self._rows(dimension)
        mask = full_mask(self.size(j) * nk)
        for e in elements:
            mask &= rows[e]
        return frozenset((c // nk, c % nk) for c in mask_to_ids(mask))

    def derive_inner(
        self, dimension: int, left: Iterable[int], right: Iterable[int]
    ) -> frozenset[int]:
        """Elements of ``dimension`` incident to every pair of ``left x right``.

        ``left`` and ``right`` are subsets of the other two dimensions in
        ascending dimension order. An empty block derives to the whole of
        ``K_dimension``.
        """
        j, k = other_dimensions(dimension)
        left = self._check_ids(j, left)
        right = self._check_ids(k, right)
        n = self.size(dimension)
        if not left or not right:
            return frozenset(range(n))
        nk = self.size(k)
        block = mask_from_ids(aj * nk + ak for aj in left for ak in right)
        rows = self._rows(dimension)
        return frozenset(e for e in range(n) if rows[e] & block == block)

    def is_closed_triset(
        self, extent: Iterable[int], intent: Iterable[int], modus: Iterable[int]
    ) -> bool:
        """True iff the tri-set is contained in the incidence and no component
        can grow by a single element without breaking containment."""
        parts = (
            self._check_ids(1, extent),
            self._check_ids(2, intent),
            self._check_ids(3, modus),
        )
        for dim in DIMENSIONS:
            j, k = other_dimensions(dim)
            if self.derive_inner(dim, parts[j - 1], parts[k - 1]) != parts[dim - 1]:
                return False
        return True

    # -- dyadic projection ----------------------------------------------------

    def project_dyadic(self, dimension: int) -> DyadicContext:
        """Materialize the dyadic view along ``dimension``.

        Builds the full column table (one entry per pair of the other two
        dimensions) and the per-row incidence masks from scratch on every
        call; the caller owns the cost, which is what the benchmark measures
        for the baseline engine.
        """
        j, k = other_dimensions(dimension)
        nj, nk = self.size(j), self.size(k)
        columns = [(aj, ak) for aj in range(nj) for ak in range(nk)]
        row_masks = _pair_row_masks(self.triples, self.sizes, dimension)
        return DyadicContext(dimension, self.size(dimension), (nj, nk), columns, row_masks)

    def __repr__(self) -> str:
        n1, n2, n3 = self.sizes
        return f"TriadicContext({n1}x{n2}x{n3}, incidences={len(self.triples)})"


def _pair_row_masks(
    triples: Iterable[tuple[int, int, int]], sizes: tuple[int, int, int], dimension: int
) -> list[int]:
    j, k = other_dimensions(dimension)
    nk = sizes[k - 1]
    rows = [0] * sizes[dimension - 1]
    for triple in triples:
        row = triple[dimension - 1]
        rows[row] |= 1 << (triple[j - 1] * nk + triple[k - 1])
    return rows


# -- construction and file formats ------------------------------------------


def build_context(
    triples: Iterable[tuple[str, str, str]],
    labels: tuple[Sequence[str], Sequence[str], Sequence[str]] | None = None,
) -> TriadicContext:
    """Build a context from labelled triples; duplicates collapse.

    ``labels`` optionally pre-registers elements (in order) so that rows or
    columns without any incidence still exist in their dictionaries.
    """
    dicts = (ElementDictionary(1), ElementDictionary(2), ElementDictionary(3))
    if labels is not None:
        for d, dimension_labels in zip(dicts, labels):
            for label in dimension_labels:
                d.add(label)
    ids = set()
    for t1, t2, t3 in triples:
        ids.add((dicts[0].add(t1), dicts[1].add(t2), dicts[2].add(t3)))
    return TriadicContext(dicts, frozenset(ids))


def parse_triples_text(text: str, source: str = "<string>") -> list[tuple[str, str, str]]:
    """Parse the one-triple-per-line format: ``object,attribute,condition``.

    Lines starting with ``#`` and blank lines are skipped. Field whitespace
    is trimmed, so labels themselves cannot contain commas or leading or
    trailing blanks.
    """
    out: list[tuple[str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 3 or not all(fields):
            raise DataFormatError(
                f"{source}:{lineno}: expected three comma-separated non-empty fields"
            )
        out.append((fields[0], fields[1], fields[2]))
    return out


def load_triples(path) -> TriadicContext:
    with open(path, "r", encoding="utf-8") as fh:
        return build_context(parse_triples_text(fh.read(), source=str(path)))


def write_triples(path, context: TriadicContext) -> None:
    dicts = context.dictionaries
    lines = sorted(
        f"{dicts[0].label_of(a1)},{dicts[1].label_of(a2)},{dicts[2].label_of(a3)}"
        for a1, a2, a3 in context.triples
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
        if lines:
            fh.write("\n")


def parse_table_text(text: str, source: str = "<string>") -> TriadicContext:
    """Parse a compact grid: header row of attribute labels, then one row per
    object holding, per attribute, the string of single-character condition
    labels (``-`` for an empty cell)."""
    header: list[str] | None = None
    objects: list[str] = []
    attributes: list[str] = []
    conditions: list[str] = []
    seen_conditions: set[str] = set()
    triples: list[tuple[str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            header = fields
            attributes = list(header)
            if len(set(attributes)) != len(attributes):
                raise DataFormatError(f"{source}:{lineno}: duplicate attribute label in header")
            continue
        if len(fields) != len(header) + 1:
            raise DataFormatError(
                f"{source}:{lineno}: expected {len(header) + 1} fields, got {len(fields)}"
            )
        obj = fields[0]
        if obj in objects:
            raise DataFormatError(f"{source}:{lineno}: duplicate object label {obj!r}")
        objects.append(obj)
        for attr, cell in zip(header, fields[1:]):
            if cell == "-":
                continue
            for cond in cell:
                if cond not in seen_conditions:
                    seen_conditions.add(cond)
                    conditions.append(cond)
                triples.append((obj, attr, cond))
    if header is None:
        return build_context([])
    return build_context(triples, labels=(objects, attributes, conditions))


def load_table(path) -> TriadicContext:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_table_text(fh.read(), source=str(path))


def load_context(path, fmt: str = "auto") -> TriadicContext:
    """Load a context file, sniffing the format when ``fmt`` is ``auto``.

    A file whose first data line contains exactly two commas is read as
    triples; anything else as a compact table.
    """
    if fmt not in ("auto", "triples", "table"):
        raise ValueError(f"unknown context format {fmt!r}")
    if fmt == "triples":
        return load_triples(path)
    if fmt == "table":
        return load_table(path)
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.count(",") == 2:
            return build_context(parse_triples_text(text, source=str(path)))
        break
    return parse_table_text(text, source=str(path))

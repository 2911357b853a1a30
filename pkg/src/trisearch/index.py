"""Inverted index from concept elements to concept ids.

Once the concepts are mined, a single pass over them is all the query engine
ever needs: each element occurrence becomes one posting. The index replaces
the context and its dyadic views entirely at query time.

On-disk layout (all integers little-endian):

    magic          4 bytes  b"TCIX"
    version        u16      currently 1
    reserved       u16      zero
    concept_count  u32
    element counts u32 x 3  objects, attributes, conditions
    postings       per dimension, per element id 0..n-1:
                   u32 list length, then that many u32 concept ids,
                   strictly increasing
"""

from __future__ import annotations

import struct
from typing import BinaryIO

from .errors import IndexCorruptionError, IndexHeaderError
from .miner import ConceptSet

MAGIC = b"TCIX"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sHHIIII")
_U32 = struct.Struct("<I")


class InvertedIndex:
    """Three posting maps, one per dimension, keyed by dense element id.

    ``postings_by_dim[d][e]`` is the strictly increasing list of ids of the
    concepts whose component ``d+1`` contains element ``e``.
    """

    def __init__(
        self,
        postings_by_dim: tuple[list[list[int]], list[list[int]], list[list[int]]],
        concept_count: int,
        concepts: ConceptSet | None = None,
    ):
        self.postings_by_dim = postings_by_dim
        self.concept_count = concept_count
        self.concepts = concepts

    def postings(self, dimension: int, element_id: int) -> list[int]:
        """Posting list for one element; unknown elements yield []."""
        if dimension not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {dimension!r}")
        lists = self.postings_by_dim[dimension - 1]
        if not 0 <= element_id < len(lists):
            return []
        return lists[element_id]

    def postings_for_label(self, dimension: int, label: str) -> list[int]:
        """Posting list looked up by label; unknown labels yield []."""
        if self.concepts is None:
            raise ValueError("index has no concept set attached for label lookup")
        d = self.concepts.dictionaries[dimension - 1]
        if label not in d:
            return []
        return self.postings(dimension, d.id_of(label))

    def element_counts(self) -> tuple[int, int, int]:
        return tuple(len(lists) for lists in self.postings_by_dim)

    def posting_total(self) -> int:
        return sum(len(p) for lists in self.postings_by_dim for p in lists)

    def same_postings(self, other: "InvertedIndex") -> bool:
        return (
            self.concept_count == other.concept_count
            and self.postings_by_dim == other.postings_by_dim
        )


def build_index(concepts: ConceptSet) -> InvertedIndex:
    """Single pass over the concepts; one posting per element occurrence."""
    counts = tuple(len(d) for d in concepts.dictionaries)
    maps: tuple[list[list[int]], ...] = tuple([[] for _ in range(n)] for n in counts)
    for concept in concepts:
        cid = concept.id
        for lists, elements in zip(maps, concept.parts):
            for e in elements:
                lists[e].append(cid)
    return InvertedIndex(maps, len(concepts), concepts)


def save_index(index: InvertedIndex, path) -> None:
    n1, n2, n3 = index.element_counts()
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, 0, index.concept_count, n1, n2, n3))
        for lists in index.postings_by_dim:
            for posting in lists:
                fh.write(_U32.pack(len(posting)))
                if posting:
                    fh.write(struct.pack(f"<{len(posting)}I", *posting))


def _read_exact(fh: BinaryIO, n: int, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise IndexCorruptionError(f"index file truncated while reading {what}")
    return data


def load_index(path) -> InvertedIndex:
    """Read an index file back; the concept back-reference is left unset."""
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < len(MAGIC) or header[: len(MAGIC)] != MAGIC:
            raise IndexHeaderError(f"{path}: not an index file (bad magic)")
        if len(header) != _HEADER.size:
            raise IndexCorruptionError(f"{path}: index file truncated in header")
        _, version, _, concept_count, n1, n2, n3 = _HEADER.unpack(header)
        if version != FORMAT_VERSION:
            raise IndexHeaderError(
                f"{path}: unsupported index version {version} (expected {FORMAT_VERSION})"
            )
        maps: list[list[list[int]]] = []
        for dim, count in zip((1, 2, 3), (n1, n2, n3)):
            lists: list[list[int]] = []
            for element in range(count):
                what = f"dimension {dim} element {element}"
                (length,) = _U32.unpack(_read_exact(fh, 4, what))
                if length:
                    raw = _read_exact(fh, 4 * length, what)
                    posting = list(struct.unpack(f"<{length}I", raw))
                else:
                    posting = []
                previous = -1
                for cid in posting:
                    if cid >= concept_count:
                        raise IndexCorruptionError(
                            f"{path}: concept id {cid} out of range in {what}"
                        )
                    if cid <= previous:
                        raise IndexCorruptionError(
                            f"{path}: posting list not strictly increasing in {what}"
                        )
                    previous = cid
                lists.append(posting)
            maps.append(lists)
        if fh.read(1):
            raise IndexCorruptionError(f"{path}: trailing bytes after posting sections")
    return InvertedIndex((maps[0], maps[1], maps[2]), concept_count, None)

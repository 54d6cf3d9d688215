"""SNAP-style edge list parsing and assignment output.

Input lines are '#'-prefixed comments or whitespace-separated
``u v`` / ``u v w`` records. Raw vertex ids (arbitrary integers) are
remapped to dense ids in order of first appearance; the reverse map
restores raw ids on output.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Tuple, Union

import numpy as np

from .graph import Graph, build_from_arrays
from .quality import Partition

__all__ = ["ParseError", "RawEdgeList", "parse_snap", "load_graph", "write_assignment"]


class ParseError(ValueError):
    """Malformed input line; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class RawEdgeList:
    """Edges with endpoints remapped to dense ids plus the id maps.

    ``u``/``v``/``w`` are parallel arrays holding one record per input
    line (self-loops and duplicates retained; graph build merges them).
    """

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    id_map: dict
    reverse_map: np.ndarray

    @property
    def n(self) -> int:
        return int(self.reverse_map.size)

    @property
    def num_records(self) -> int:
        return int(self.u.size)

    def raw_edges(self) -> Iterator[Tuple[int, int, float]]:
        """Yield records with original raw ids, in input order."""
        rev = self.reverse_map
        for a, b, c in zip(self.u, self.v, self.w):
            yield int(rev[a]), int(rev[b]), float(c)

    def build(self) -> Graph:
        return build_from_arrays(self.u, self.v, self.w, n=self.n)


def parse_snap(stream: Union[IO[str], Iterable[str]]) -> RawEdgeList:
    """Parse a SNAP-style edge list from a text stream or line iterable."""
    us: list[int] = []
    vs: list[int] = []
    ws: list[float] = []
    id_map: dict[int, int] = {}
    raw_ids: list[int] = []

    def dense(raw: int) -> int:
        d = id_map.get(raw)
        if d is None:
            d = len(id_map)
            id_map[raw] = d
            raw_ids.append(raw)
        return d

    for line_no, line in enumerate(stream, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) not in (2, 3):
            raise ParseError(line_no, f"expected 2 or 3 columns, got {len(parts)}")
        try:
            a = int(parts[0])
            b = int(parts[1])
        except ValueError:
            raise ParseError(line_no, f"non-integer endpoint in {stripped!r}") from None
        if len(parts) == 3:
            try:
                weight = float(parts[2])
            except ValueError:
                raise ParseError(line_no, f"bad weight {parts[2]!r}") from None
            if not np.isfinite(weight):
                raise ParseError(line_no, f"non-finite weight {parts[2]!r}")
        else:
            weight = 1.0
        us.append(dense(a))
        vs.append(dense(b))
        ws.append(weight)

    return RawEdgeList(
        u=np.array(us, dtype=np.int64),
        v=np.array(vs, dtype=np.int64),
        w=np.array(ws, dtype=np.float64),
        id_map=id_map,
        reverse_map=np.array(raw_ids, dtype=np.int64),
    )


def load_graph(path: Union[str, os.PathLike]) -> Tuple[Graph, RawEdgeList]:
    """Parse an edge-list file and build its graph."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = parse_snap(fh)
    return raw.build(), raw


def write_assignment(partition: Partition, reverse_map: np.ndarray,
                     sink: IO[str]) -> None:
    """Write one ``raw_id<TAB>community`` line per vertex, sorted by raw id."""
    if partition.n != len(reverse_map):
        raise ValueError("partition does not cover the vertex set")
    order = np.argsort(reverse_map, kind="stable")
    labels = partition.assignment
    for dense_id in order:
        sink.write(f"{int(reverse_map[dense_id])}\t{int(labels[dense_id])}\n")


def read_assignment(stream: Union[IO[str], Iterable[str]],
                    id_map: dict) -> Partition:
    """Read an assignment TSV back into a partition over dense ids.

    Every graph vertex must be assigned exactly once; unknown raw ids or
    missing vertices are input errors.
    """
    labels = np.full(len(id_map), -1, dtype=np.int64)
    for line_no, line in enumerate(stream, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError(line_no, "expected '<raw_id>\\t<community>'")
        try:
            raw, com = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(line_no, f"non-integer field in {stripped!r}") from None
        dense_id = id_map.get(raw)
        if dense_id is None:
            raise ParseError(line_no, f"unknown vertex id {raw}")
        if com < 0:
            raise ParseError(line_no, f"negative community id {com}")
        labels[dense_id] = com
    if (labels < 0).any():
        missing = int(np.flatnonzero(labels < 0).size)
        raise ValueError(f"assignment misses {missing} vertices")
    return Partition(labels)

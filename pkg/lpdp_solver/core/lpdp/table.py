"""
Block tables: best internal path systems per (boundary matching, touched set)
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from ..exceptions import TableBlowupError

# Pairs of local boundary indices (i, j), i < j, sorted lexicographically
Matching = Tuple[Tuple[int, int], ...]
# (child block id, child matching, child touched mask)
ChildChoice = Tuple[int, Matching, int]

EMPTY_MATCHING: Matching = ()


def canonical_matching(pairs: Iterable[Tuple[int, int]]) -> Matching:
    """Normalize pairs to (min, max) and sort; rejects pairs sharing an index."""
    normalized = sorted((min(a, b), max(a, b)) for a, b in pairs)
    seen = set()
    for a, b in normalized:
        if a == b or a in seen or b in seen:
            raise ValueError(f"not a matching: {normalized}")
        seen.update((a, b))
    return tuple(normalized)


@dataclass(frozen=True)
class Witness:
    """Path system behind one table entry.

    `segments[i]` realizes pair `M[i]`, oriented from its lower-index endpoint,
    as a sequence of view nodes. `choices` records which child entry expands
    each child whose clique edges the segments use.
    """

    segments: Tuple[Tuple[int, ...], ...]
    choices: Tuple[ChildChoice, ...] = ()

    def choice_for(self, child: int) -> Optional[ChildChoice]:
        for choice in self.choices:
            if choice[0] == child:
                return choice
        return None


@dataclass
class BlockTable:
    """Entries keyed by (M, F) with memoized (M, C) queries.

    F is the bitmask of boundary indices touched by the path system; C in a
    query is a bitmask of boundary indices the system must avoid.
    """

    block: int
    boundary: Tuple[int, ...]
    entry_cap: Optional[int] = None
    _entries: Dict[Tuple[Matching, int], Tuple[int, Witness]] = field(default_factory=dict, repr=False)
    _by_matching: Dict[Matching, Dict[int, int]] = field(default_factory=dict, repr=False)
    _query_cache: Dict[Tuple[Matching, int], Optional[Tuple[int, int]]] = field(default_factory=dict, repr=False)
    _project_cache: Dict[Tuple[Matching, int, int], Dict[int, Tuple[int, int]]] = field(
        default_factory=dict, repr=False
    )
    frozen: bool = False

    @classmethod
    def trivial(cls, block: int, boundary: Tuple[int, ...] = ()) -> "BlockTable":
        table = cls(block, boundary)
        table.offer(EMPTY_MATCHING, 0, 0, Witness(()))
        table.freeze()
        return table

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def size(self) -> int:
        return len(self._entries)

    def offer(self, m: Matching, touched: int, value: int, witness: Witness) -> bool:
        """Store the entry if it beats the current value for (m, touched)."""
        if self.frozen:
            raise RuntimeError(f"table of block {self.block} is frozen")
        key = (m, touched)
        current = self._entries.get(key)
        if current is not None and current[0] >= value:
            return False
        if current is None and self.entry_cap is not None and len(self._entries) >= self.entry_cap:
            raise TableBlowupError(
                "Block table exceeded the entry cap",
                details={"block": self.block, "cap": self.entry_cap},
            )
        self._entries[key] = (value, witness)
        self._by_matching.setdefault(m, {})[touched] = value
        return True

    def freeze(self) -> None:
        self.frozen = True

    def entries(self) -> Iterator[Tuple[Matching, int, int]]:
        """(M, F, value) for every stored entry."""
        for (m, touched), (value, _) in self._entries.items():
            yield m, touched, value

    def matchings(self) -> List[Matching]:
        return sorted(self._by_matching)

    def value(self, m: Matching, touched: int) -> Optional[int]:
        entry = self._entries.get((m, touched))
        return None if entry is None else entry[0]

    def witness(self, m: Matching, touched: int) -> Witness:
        return self._entries[(m, touched)][1]

    def has_entry(self, m: Matching, touched: int) -> bool:
        return (m, touched) in self._entries

    def best_entry(self, m: Matching, excluded: int = 0) -> Optional[Tuple[int, int]]:
        """(value, F) of the best entry for `m` avoiding `excluded`; ties go to the smaller F."""
        key = (m, excluded)
        if key in self._query_cache:
            return self._query_cache[key]
        best: Optional[Tuple[int, int]] = None
        for touched, value in self._by_matching.get(m, {}).items():
            if touched & excluded:
                continue
            if best is None or value > best[0] or (value == best[0] and touched < best[1]):
                best = (value, touched)
        self._query_cache[key] = best
        return best

    def query(self, m: Matching, excluded: int = 0) -> Optional[int]:
        """Best internal weight realizing `m` without touching `excluded`; None if infeasible."""
        best = self.best_entry(m, excluded)
        return None if best is None else best[0]

    def project(self, m: Matching, excluded: int, onto: int) -> Dict[int, Tuple[int, int]]:
        """Best (value, F) per distinct F & onto, over entries of `m` avoiding `excluded`."""
        key = (m, excluded, onto)
        cached = self._project_cache.get(key)
        if cached is not None:
            return cached
        result: Dict[int, Tuple[int, int]] = {}
        for touched, value in self._by_matching.get(m, {}).items():
            if touched & excluded:
                continue
            shadow = touched & onto
            current = result.get(shadow)
            if current is None or value > current[0] or (value == current[0] and touched < current[1]):
                result[shadow] = (value, touched)
        self._project_cache[key] = result
        return result

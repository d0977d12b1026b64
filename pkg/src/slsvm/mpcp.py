"""Compilation of a (blank-write-free) Turing machine and its input into a
tile set for the Modified Post Correspondence Problem, plus the
partial-solution predicates shared by the universal heuristics.

A tile is a pair of symbol-token strings; a sequence of tiles is a partial
solution when the concatenation of the tops is a prefix of the
concatenation of the bottoms (equality counts: it is the completed
solution).  Tokens are kept as tuples so multi-character symbol names stay
unambiguous.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .tm import LEFT, RIGHT, TuringMachine, is_normalized

SEPARATOR = "#"


class MpcpError(Exception):
    pass


class UnnormalizedMachine(MpcpError):
    pass


class NoExtension(MpcpError):
    pass


class MultipleExtensions(MpcpError):
    pass


@dataclass(frozen=True)
class Tile:
    top: tuple
    bottom: tuple

    def __post_init__(self):
        if not self.top or not self.bottom:
            raise MpcpError("tile strings must be nonempty")

    def render(self) -> str:
        return f"{''.join(self.top)}|{''.join(self.bottom)}"


@dataclass(frozen=True)
class TileSet:
    tiles: tuple
    count: int
    closing_indices: frozenset
    states: frozenset
    finals: frozenset
    blank: str

    def __post_init__(self):
        if self.count != len(self.tiles):
            raise MpcpError("stored count disagrees with tile array length")

    def render(self) -> str:
        lines = [f"tiles: {self.count}"]
        lines.extend(t.render() for t in self.tiles)
        return "\n".join(lines) + "\n"


def compile_tiles(tm: TuringMachine, input_string: str) -> TileSet:
    """Build the tile set encoding ``(machine, input)``.

    Families are emitted in a fixed order: initial tile, first closing
    tile, copy tiles, transition tiles, consumption tiles, then the
    closing tiles of any further final states.
    """
    if not is_normalized(tm):
        raise UnnormalizedMachine("machine still writes its blank symbol")
    for sym in input_string:
        if sym not in tm.input_alphabet:
            raise MpcpError(f"input symbol {sym!r} not in input alphabet")

    gamma = sorted(tm.tape_alphabet)
    finals = sorted(tm.finals)
    word = tuple(input_string) if input_string else (tm.blank,)

    tiles = [Tile((SEPARATOR,), (SEPARATOR, tm.start) + word + (SEPARATOR,))]
    closing = [Tile((qf, SEPARATOR, SEPARATOR), (SEPARATOR,)) for qf in finals]
    if closing:
        tiles.append(closing[0])

    for x in gamma:
        tiles.append(Tile((x,), (x,)))
    tiles.append(Tile((SEPARATOR,), (SEPARATOR,)))

    for (q, x), (p, y, move) in sorted(tm.delta.items()):
        if move == RIGHT:
            tiles.append(Tile((q, x), (y, p)))
            if x == tm.blank:
                tiles.append(Tile((q, SEPARATOR), (y, p, SEPARATOR)))
        else:
            for z in gamma:
                tiles.append(Tile((z, q, x), (p, z, y)))
            if x == tm.blank:
                for z in gamma:
                    tiles.append(Tile((z, q, SEPARATOR), (p, z, y, SEPARATOR)))

    for qf in finals:
        for x in gamma:
            tiles.append(Tile((x, qf), (qf,)))
        for y in gamma:
            tiles.append(Tile((qf, y), (qf,)))
        for x in gamma:
            for y in gamma:
                tiles.append(Tile((x, qf, y), (qf,)))

    tiles.extend(closing[1:])

    closing_indices = frozenset(
        i for i, t in enumerate(tiles) if t in closing)
    return TileSet(tuple(tiles), len(tiles), closing_indices,
                   tm.states, tm.finals, tm.blank)


def expected_tile_count(tm: TuringMachine) -> int:
    """Closed-form tile count, used as a cross-check on the compiler."""
    gamma = len(tm.tape_alphabet)
    right_rules = sum(1 for (_, _, m) in tm.delta.values() if m == RIGHT)
    left_rules = sum(1 for (_, _, m) in tm.delta.values() if m == LEFT)
    right_on_blank = sum(1 for (q, x), (_, _, m) in tm.delta.items()
                         if m == RIGHT and x == tm.blank)
    left_on_blank = sum(1 for (q, x), (_, _, m) in tm.delta.items()
                        if m == LEFT and x == tm.blank)
    finals = len(tm.finals)
    return (2 + gamma + 1 + right_rules + gamma * left_rules
            + right_on_blank + gamma * left_on_blank
            + finals * (2 * gamma + gamma * gamma)
            + max(finals - 1, 0)
            - (0 if finals else 1))


def concatenations(tiles: Sequence[Tile]):
    top = []
    bottom = []
    for t in tiles:
        top.extend(t.top)
        bottom.extend(t.bottom)
    return top, bottom


def is_partial_solution(tiles: Sequence[Tile]) -> bool:
    """True iff the top concatenation is a prefix of the bottom one
    (equality included)."""
    top, bottom = concatenations(tiles)
    return len(top) <= len(bottom) and top == bottom[:len(top)]


def is_complete_solution(tiles: Sequence[Tile]) -> bool:
    top, bottom = concatenations(tiles)
    return top == bottom


def tile_fits(a_len: int, bottom: Sequence[str], tile: Tile,
              shift: int = 0):
    """Incremental prefix check for appending one tile.

    ``a_len`` is the length of the matched top concatenation so far and
    ``bottom`` the bottom concatenation it is matched against; ``shift``
    offsets top positions into bottom positions (used by the trimmed
    universal GA, where already-matched front material has been dropped).
    Returns ``(fits, complete)``.
    """
    new_a = a_len + len(tile.top)
    new_b = len(bottom) + len(tile.bottom)
    if new_a + shift > new_b:
        return False, False
    for k, token in enumerate(tile.top):
        pos = a_len + k + shift
        if pos < 0:
            continue  # matched material that was trimmed away
        ref = bottom[pos] if pos < len(bottom) else tile.bottom[pos - len(bottom)]
        if token != ref:
            return False, False
    return True, new_a + shift == new_b


def fits_overhang(tile: Tile, overhang: Sequence[str], build: bool = True):
    """Prefix check phrased on the unmatched bottom suffix.

    ``overhang`` holds the bottom tokens not yet covered by the top
    concatenation.  Returns ``(fits, new_overhang)`` with the suffix left
    after appending ``tile`` (empty means the solution is complete), or
    ``(False, None)``.  With ``build=False`` the suffix is not
    materialized (the check alone is O(|tile|)).
    """
    top_len = len(tile.top)
    over_len = len(overhang)
    if top_len > over_len + len(tile.bottom):
        return False, None
    for k, token in enumerate(tile.top):
        ref = overhang[k] if k < over_len else tile.bottom[k - over_len]
        if token != ref:
            return False, None
    if not build:
        return True, None
    if top_len >= over_len:
        return True, tuple(tile.bottom[top_len - over_len:])
    return True, tuple(overhang[top_len:]) + tuple(tile.bottom)


def has_extension_overhang(tile_set: TileSet,
                           overhang: Sequence[str]) -> bool:
    return any(
        fits_overhang(tile_set.tiles[i], overhang, build=False)[0]
        for i in range(1, tile_set.count))


def viable_overhang(tile_set: TileSet, tile: Tile, overhang: Sequence[str]):
    """Overhang-based form of the viability check.

    Returns ``(viable, new_overhang, complete)``.
    """
    fits, new_overhang = fits_overhang(tile, overhang)
    if not fits:
        return False, None, False
    if not new_overhang:
        return True, new_overhang, True
    if has_extension_overhang(tile_set, new_overhang):
        return True, new_overhang, False
    return False, None, False


def has_extension(tile_set: TileSet, a_len: int, bottom: Sequence[str],
                  shift: int = 0) -> bool:
    return has_extension_overhang(tile_set, bottom[a_len + shift:])


def is_viable_extension(tile_set: TileSet, a_len: int,
                        bottom: Sequence[str], tile: Tile,
                        shift: int = 0):
    """A tile extends viably when the prefix property holds afterwards and
    the result is either complete or still extendable by some tile.

    The extra one-step lookahead rejects prefix-legal dead ends (a copy
    tile firing where only a consumption tile can continue), which is what
    makes the next correct tile unique at every step.
    Returns ``(viable, complete)``.
    """
    # start positions of appended tops never fall inside trimmed material,
    # so the overhang slice below is always well defined
    viable, _new, complete = viable_overhang(
        tile_set, tile, bottom[a_len + shift:])
    return viable, complete


def unique_extension(tile_set: TileSet, partial: Sequence[int]) -> int:
    """Index of the single tile that viably extends ``partial``.

    ``partial`` is a sequence of tile indices starting with tile 0.
    Raises :class:`NoExtension` on complete solutions (or dead ends) and
    :class:`MultipleExtensions` if more than one tile qualifies.
    """
    tiles = [tile_set.tiles[i] for i in partial]
    top, bottom = concatenations(tiles)
    if top == bottom:
        raise NoExtension("sequence is already a complete solution")
    found = []
    for i in range(1, tile_set.count):
        viable, _ = is_viable_extension(tile_set, len(top), bottom,
                                        tile_set.tiles[i])
        if viable:
            found.append(i)
    if not found:
        raise NoExtension("no tile extends the partial solution")
    if len(found) > 1:
        raise MultipleExtensions(f"tiles {found} all extend the partial solution")
    return found[0]


def brute_force_mpcp(tile_set: TileSet, max_len: int) -> Optional[list]:
    """Shortest solution of at most ``max_len`` tiles by breadth-first
    search over plain prefix extensions, or None.

    Deliberately independent of the viability machinery above: this is
    the oracle the heuristics are checked against.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    first = tile_set.tiles[0]
    fits, overhang = fits_overhang(first, ())
    if not fits:
        return None
    queue = deque([([0], overhang)])
    while queue:
        seq, overhang = queue.popleft()
        if not overhang:
            return seq
        if len(seq) == max_len:
            continue
        for i in range(1, tile_set.count):
            fits, new_overhang = fits_overhang(tile_set.tiles[i], overhang)
            if fits:
                queue.append((seq + [i], new_overhang))
    return None

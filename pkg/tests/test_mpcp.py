import pytest

from conftest import CORPUS, load_machine, sweeper
from slsvm.mpcp import (MpcpError, MultipleExtensions, NoExtension, Tile,
                        UnnormalizedMachine, brute_force_mpcp, compile_tiles,
                        concatenations, expected_tile_count, fits_overhang,
                        is_complete_solution, is_partial_solution, tile_fits,
                        unique_extension)
from slsvm.tm import normalize

M_ACC_SOLUTION = [0, 5, 4, 6, 4, 1]


@pytest.fixture
def m_acc_tiles(m_acc):
    return compile_tiles(m_acc, "1")


def test_m_acc_tile_inventory(m_acc_tiles):
    ts = m_acc_tiles
    assert ts.count == 14
    assert ts.tiles[0].render() == "#|#q01#"
    assert ts.tiles[1].render() == "qf##|#"
    assert ts.closing_indices == {1}
    assert ts.tiles[5].render() == "q01|1qf"
    renders = [t.render() for t in ts.tiles]
    assert "1|1" in renders and "_|_" in renders and "#|#" in renders
    assert "1qf|qf" in renders and "qf1|qf" in renders and "1qf1|qf" in renders


def test_tile_count_formula_across_machines():
    machines = [normalize(load_machine(name)) for name, _ in CORPUS]
    machines += [load_machine("looper.tm"), sweeper(2), sweeper(4)]
    for m in machines:
        word = sorted(m.input_alphabet)[0]
        ts = compile_tiles(m, word)
        assert ts.count == expected_tile_count(m)


def test_compile_rejects_unnormalized():
    m = load_machine("parity.tm")
    with pytest.raises(UnnormalizedMachine):
        compile_tiles(m, "11")


def test_compile_rejects_bad_input(m_acc):
    with pytest.raises(MpcpError):
        compile_tiles(m_acc, "2")


def test_compile_empty_input_uses_blank(m_acc):
    ts = compile_tiles(m_acc, "")
    assert ts.tiles[0].render() == "#|#q0_#"


def test_tile_validation():
    with pytest.raises(MpcpError):
        Tile((), ("x",))
    with pytest.raises(MpcpError):
        Tile(("x",), ())


def test_tileset_render(m_acc_tiles):
    text = m_acc_tiles.render()
    lines = text.splitlines()
    assert lines[0] == "tiles: 14"
    assert len(lines) == 15
    assert lines[1] == "#|#q01#"


def test_is_partial_solution(m_acc_tiles):
    tiles = m_acc_tiles.tiles
    assert is_partial_solution([tiles[0]])
    one_one = next(t for t in tiles if t.render() == "1|1")
    assert not is_partial_solution([tiles[0], one_one])
    solution = [tiles[i] for i in M_ACC_SOLUTION]
    assert is_partial_solution(solution)
    assert is_complete_solution(solution)
    top, bottom = concatenations(solution)
    assert "".join(bottom) == "#q01#1qf#qf##"


def test_unique_extension_examples(m_acc_tiles):
    assert unique_extension(m_acc_tiles, [0]) == 5
    assert unique_extension(m_acc_tiles, [0, 5]) == 4
    with pytest.raises(NoExtension):
        unique_extension(m_acc_tiles, M_ACC_SOLUTION)


def test_unique_extension_along_whole_solution(m_acc_tiles):
    for k in range(1, len(M_ACC_SOLUTION)):
        assert unique_extension(m_acc_tiles, M_ACC_SOLUTION[:k]) \
            == M_ACC_SOLUTION[k]


def test_brute_force_m_acc(m_acc_tiles):
    assert brute_force_mpcp(m_acc_tiles, 10) == M_ACC_SOLUTION
    assert brute_force_mpcp(m_acc_tiles, 1) is None
    with pytest.raises(ValueError):
        brute_force_mpcp(m_acc_tiles, 0)


def test_brute_force_no_finals():
    text = """
states: q0
input_alphabet: 1
tape_alphabet: 1 _
blank: _
start: q0
rule: q0 1 -> q0 1 R
"""
    from slsvm.tm import parse_tm
    m = parse_tm(text)
    ts = compile_tiles(m, "1")
    assert not ts.closing_indices
    assert brute_force_mpcp(ts, 8) is None
    assert ts.count == expected_tile_count(m)


def test_brute_force_trivial_acceptor():
    m = load_machine("trivial.tm")
    ts = compile_tiles(m, "")
    solution = brute_force_mpcp(ts, 6)
    assert solution is not None
    assert solution[-1] in ts.closing_indices


def test_tile_fits_incremental(m_acc_tiles):
    tiles = m_acc_tiles.tiles
    bottom = list(tiles[0].bottom)
    fits, complete = tile_fits(1, bottom, tiles[5])
    assert fits and not complete
    fits, _ = tile_fits(1, bottom, tiles[2])
    assert not fits


def test_fits_overhang_roundtrip(m_acc_tiles):
    tiles = m_acc_tiles.tiles
    overhang = tiles[0].bottom[1:]
    for idx in M_ACC_SOLUTION[1:]:
        fits, overhang = fits_overhang(tiles[idx], overhang)
        assert fits
    assert overhang == ()


def test_multiple_extensions_never_on_corpus():
    for name, word in CORPUS:
        m = normalize(load_machine(name))
        ts = compile_tiles(m, word)
        solution = brute_force_mpcp(ts, 40)
        assert solution is not None
        for k in range(1, len(solution)):
            try:
                assert unique_extension(ts, solution[:k]) == solution[k]
            except MultipleExtensions as exc:
                pytest.fail(f"{name}: ambiguous extension: {exc}")

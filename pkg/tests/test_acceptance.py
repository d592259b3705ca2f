"""Acceptance suite: one test per criterion, at full stated scale.

Each test prints a single PASS/FAIL line (run pytest with -s to stream them)
and fails hard if its criterion is not met.  Seeds are pinned inside
minla.bench, so the whole suite is reproducible bit for bit.
"""

from minla import bench


def _check(result: bench.CriterionResult):
    print(result.line(), flush=True)
    assert result.passed, result.line()


def test_criterion_01_det_upper_bound():
    _check(bench.criterion_det_upper_bound())


def test_criterion_02_det_lower_bound():
    _check(bench.criterion_det_lower_bound())


def test_criterion_03_rand_cliques_bound():
    _check(bench.criterion_rand_cliques_bound())


def test_criterion_04_rand_lines_bound():
    _check(bench.criterion_rand_lines_bound())


def test_criterion_05_left_right_frequencies():
    _check(bench.criterion_left_right_frequencies())


def test_criterion_06_orientation_frequencies():
    _check(bench.criterion_orientation_frequencies())


def test_criterion_07_oracle_equivalence():
    _check(bench.criterion_oracle_equivalence())


def test_criterion_08_feasibility_characterization():
    _check(bench.criterion_feasibility_characterization())


def test_criterion_09_tree_sandwich():
    _check(bench.criterion_tree_sandwich())


def test_criterion_10_algebraic_bounds():
    _check(bench.criterion_algebraic_bounds())


def test_criterion_11_coin_vectors():
    _check(bench.criterion_coin_vectors())

"""Smoke tests for the python module: build families, play seeded games,
query the solver, and exercise the verification helpers."""

import sys

if len(sys.argv) > 1:
    sys.path.insert(0, sys.argv[1])

import mbl_lab as lab


def test_runs_are_deterministic():
    fam = lab.spread_family(8)
    assert len(fam) == 8 and fam.domain_size == 16
    proto = lab.protocol("cart_weak")
    one = lab.run(proto, fam, "halving", "threshold-maximin", seed=7)
    two = lab.run(proto, fam, "halving", "threshold-maximin", seed=7)
    assert not one.faulted()
    assert one.mistakes <= 3  # floor(log2 8)
    assert one.csv() == two.csv()
    assert one.csv().startswith("# mbl-csv v1")


def test_solver_ground_truth():
    std = lab.protocol("standard")
    lin = lab.linear_family(2, 2, restricted=False)
    assert lab.exact_opt(std, lin) == 2
    assert lab.worst_case(std, lin, "halving") == 2
    assert lab.invariance_check(lin, 2)
    tree = lab.solve_tree(std, lab.threshold_family(4, [1, 2, 3, 4]))
    assert tree.startswith("4 hypotheses, value 2")
    best = lab.run(std, lin, "optimal", "random", seed=3)
    assert best.mistakes <= 2


def test_size_caps_raise():
    weak = lab.protocol("cart_weak")
    try:
        lab.exact_opt(weak, lab.permutation_family(5))
    except lab.SizeCapError:
        pass
    else:
        raise AssertionError("120 hypotheses slipped past the solver cap")


def test_verify_helpers():
    assert lab.p_closed(100) == lab.p_direct(100)
    assert lab.p_closed(2) == 1
    assert lab.check_uniformity(3, 2, 1, [1, 2], [0]) == (1, 3)
    assert lab.check_conditional(3, 2, 1, [1, 2], [1, 1], [0]) == (1, 3)
    names = {row[0] for row in lab.bound_table(16, r=2)}
    assert {"cart_weak_cap", "amb_cap", "eliminate_one"} <= names
    forced = lab.insertion_window_mistakes(
        10, lambda lo, hi, mid: mid - lo + 1 >= hi - mid)
    assert forced >= lab.p_closed(10)


def test_permutation_games():
    s4 = lab.permutation_family(4)
    assert s4.rows_are_permutations()
    proto = lab.protocol("order", r=2)
    t = lab.run(proto, s4, "halving", "insertion", seed=11)
    assert not t.faulted()
    assert t.mistakes >= lab.p_closed(4)


def main():
    tests = [
        test_runs_are_deterministic,
        test_solver_ground_truth,
        test_size_caps_raise,
        test_verify_helpers,
        test_permutation_games,
    ]
    for test in tests:
        test()
        print("ok", test.__name__)


if __name__ == "__main__":
    main()

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussfs.boxlab import (
    BoxSubset,
    CorrelationSpec,
    avoidance_check,
    balanced_laws,
    balanced_moments,
    best_lattice,
    correlation,
    degree_lowering_step,
    density_on_lattice,
    difference_table,
    dp_domain,
    expansion_identity_check,
    forbidden_values,
    indicator_correlation,
    integer_root_floor,
    is_avoiding,
    lattice_partition,
    max_avoiding_density,
    padding_box,
    partition_checks,
)
from gaussfs.gaussian import GaussianInt, enumerate_box
from gaussfs.poly import degree_lower_diff, parse_poly


def G(a, b=0):
    return GaussianInt(a, b)


def random_subset(N, rng, p=0.4):
    return BoxSubset(N, tuple(z for z in enumerate_box(N) if rng.random() < p))


def squares_brute(N):
    """Nonzero squares of norm <= 2(N-1)^2, by direct enumeration."""
    lim = 2 * (N - 1) ** 2
    r = N + 1
    return {G(a, b) ** 2 for a in range(-r, r + 1) for b in range(-r, r + 1)
            if 0 < (G(a, b) ** 2).norm() <= lim}


def avoids_brute(A, values):
    return not any((a - b) in values for a in A.members for b in A.members if a != b)


subsets = st.builds(
    lambda N, bits: BoxSubset.from_mask(N, bits % (1 << (N * N))),
    st.integers(1, 5), st.integers(0, 2**25 - 1))


# region subsets and balanced function


def test_integer_root_floor():
    assert integer_root_floor(16, 4) == 2
    assert integer_root_floor(15, 4) == 1
    assert integer_root_floor(10**30, 3) == 10**10
    with pytest.raises(ValueError):
        integer_root_floor(-1, 2)


@given(st.integers(0, 10**40), st.integers(1, 9))
def test_integer_root_floor_property(n, k):
    r = integer_root_floor(n, k)
    assert r ** k <= n < (r + 1) ** k


def test_subset_validation():
    with pytest.raises(ValueError):
        BoxSubset(2, (G(3, 1),))
    A = BoxSubset(2, (G(2, 2), G(1, 1), G(1, 1)))
    assert A.members == (G(1, 1), G(2, 2)) and A.delta == Fraction(1, 2)


@given(subsets)
def test_balanced_laws_hold(A):
    assert all(balanced_laws(A).values())
    mean, second = balanced_moments(A)
    assert mean == 0 and second == A.delta * (1 - A.delta)

# endregion

# region correlations


def correlation_loop(A, spec):
    """Triple loop over n, x and h with the balanced function."""
    hbox = list(enumerate_box(spec.hside))
    total = Fraction(0)
    count = 0

    def hsums(j):
        if j == 0:
            yield G(0)
            return
        for s in hsums(j - 1):
            for h in hbox:
                yield s + h

    for n in enumerate_box(A.N):
        for x in spec.D:
            for s in hsums(spec.j):
                total += A.f(n) * A.f(n + spec.p.eval(x + s))
                count += 1
    return total / count


@pytest.mark.parametrize("seed", range(6))
def test_correlation_against_loop(seed):
    rng = random.Random(seed)
    N = rng.randint(2, 5)
    A = random_subset(N, rng)
    p = parse_poly(rng.choice(["x^2", "x", "x^2 + (1+i)x", "2x - 1"]))
    D = tuple(G(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(rng.randint(1, 3)))
    spec = CorrelationSpec(p, D, rng.randint(1, 2), rng.randint(0, 2))
    assert correlation(A, spec) == correlation_loop(A, spec)
    assert expansion_identity_check(A, spec)


def test_correlation_independent_of_member_order():
    rng = random.Random(3)
    A = random_subset(5, rng)
    pts = list(A.members)
    rng.shuffle(pts)
    B = BoxSubset(5, tuple(pts))
    spec = CorrelationSpec(parse_poly("x^2"), (G(1, 1), G(2, 0)), 2, 1)
    assert correlation(A, spec) == correlation(B, spec)


def test_indicator_correlation_full_box():
    # with A = [N] and the zero shift, every pair counts
    A = BoxSubset.full(3)
    spec = CorrelationSpec(parse_poly("x"), (G(0),), 1, 0)
    assert indicator_correlation(A, spec) == 1
    assert correlation(A, spec) == 0


def test_correlation_spec_validation():
    with pytest.raises(ValueError):
        CorrelationSpec(parse_poly("x"), (), 1, 0)
    with pytest.raises(ValueError):
        CorrelationSpec(parse_poly("x"), (G(1),), 0, 0)
    assert CorrelationSpec(parse_poly("x"), (G(1), G(2)), 2, 2).weight == 2 * 16

# endregion

# region avoidance


def test_forbidden_values_squares():
    vals = forbidden_values(parse_poly("x^2"), 2 * 4 ** 2)
    assert set(vals) == squares_brute(5)
    assert vals[G(0, 2)] == G(1, 1)
    assert vals[G(4)] == G(2)


def test_avoidance_examples():
    q = parse_poly("x^2")
    assert avoidance_check(BoxSubset(3, (G(1, 1), G(2, 1))), q).avoids is False  # 1 = 1^2
    assert avoidance_check(BoxSubset(3, (G(1, 1), G(3, 2))), q).avoids  # 2+i is not a square
    assert avoidance_check(BoxSubset(3, (G(1, 1), G(3, 3))), q).avoids  # N(2+2i) = 8
    res = avoidance_check(BoxSubset(3, (G(1, 1), G(1, 3))), q)  # 2i = (1+i)^2
    assert not res.avoids
    a, a2, z = res.witness
    assert a - a2 == z * z
    with pytest.raises(ValueError):
        avoidance_check(BoxSubset(2, ()), parse_poly("3"))


@settings(max_examples=100)
@given(subsets)
def test_avoidance_against_brute_force(A):
    sq = squares_brute(A.N)
    expect = avoids_brute(A, sq)
    assert avoidance_check(A, parse_poly("x^2")).avoids == expect
    assert is_avoiding(list(A.members), difference_table(parse_poly("x^2"), A.N), A.N) == expect


def test_max_density_exact_against_subsets():
    q = parse_poly("x^2")
    for N in (2, 3):
        sq = squares_brute(N)
        best = max(k for k in range(N * N + 1)
                   for S in combinations(list(enumerate_box(N)), k)
                   if avoids_brute(BoxSubset(N, S), sq))
        res = max_avoiding_density(N, q, "exact")
        assert len(res.subset) == best and not res.heuristic
        assert avoidance_check(res.subset, q).avoids


def test_max_density_greedy_and_limits():
    q = parse_poly("x^2")
    res = max_avoiding_density(6, q, "greedy")
    assert res.heuristic and avoidance_check(res.subset, q).avoids
    with pytest.raises(ValueError):
        max_avoiding_density(6, q, "exact", exact_limit=4)
    with pytest.raises(ValueError):
        max_avoiding_density(3, q, "magic")

# endregion

# region domains and boxes


def test_dp_domain_example():
    box = dp_domain(16, parse_poly("x^2"))
    assert set(box) == {G(3, 3), G(4, 3), G(3, 4), G(4, 4)}


@pytest.mark.parametrize("text", ["x^2", "x^2 - 3x + 1", "(1+i)x^3 + 5"])
def test_dp_domain_avoids_zeros(text):
    p = parse_poly(text)
    for N in (1, 64, 4096):
        for z in dp_domain(N, p):
            assert not p.eval(z).is_zero()


def test_padding_boxes_contain_shifts():
    p = parse_poly("x^2")
    N = 50
    for kind in ("T", "U", "V"):
        T = padding_box(kind, N, p)
        assert all(z in T for z in enumerate_box(N))
    W = padding_box("W", N, p)
    assert all(1 <= z.re <= N and 1 <= z.im <= N for z in W)
    with pytest.raises(ValueError):
        padding_box("X", N, p)

# endregion

# region lattices and partitions


def test_partition_examples():
    part = lattice_partition(4, 1, 2)
    assert not part.error and len(part.cells) == 4
    part = lattice_partition(5, G(1, 1), 1)
    assert all(partition_checks(part).values())
    with pytest.raises(ValueError):
        lattice_partition(4, 0, 1)


@pytest.mark.parametrize("M", [1, 3, 7, 12])
@pytest.mark.parametrize("xi", [G(1), G(1, 1), G(2, 1), G(-1, 2), G(3)])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_partition_checks(M, xi, m):
    part = lattice_partition(M, xi, m)
    assert all(partition_checks(part).values())
    for u in part.cells:
        assert len(set(part.cell_points(u))) == m * m


def test_density_on_lattice():
    A = BoxSubset(4, (G(1, 1), G(3, 1), G(1, 3), G(3, 3)))
    # n + 2[2] = n + {2+2i, 4+2i, 2+4i, 4+4i}
    assert density_on_lattice(A, G(-1, -1), 2, 2) == 1
    assert density_on_lattice(A, G(0, -1), 2, 2) == 0
    assert density_on_lattice(A, G(1, 1), 1, 2) == Fraction(1, 4)
    with pytest.raises(ValueError):
        density_on_lattice(A, 0, 0, 2)


def test_best_lattice_brute_force():
    rng = random.Random(8)
    A = random_subset(4, rng, 0.5)
    d, n, gamma = best_lattice(A, 2)
    brute = Fraction(0)
    for gr in range(-4, 5):
        for gi in range(-4, 5):
            g = G(gr, gi)
            if g.is_zero():
                continue
            for a in range(-8, 9):
                for b in range(-8, 9):
                    pts = [G(a, b) + g * x for x in enumerate_box(2)]
                    if all(1 <= z.re <= 4 and 1 <= z.im <= 4 for z in pts):
                        brute = max(brute, Fraction(sum(z in A for z in pts), 4))
    assert d == brute == density_on_lattice(A, n, gamma, 2)

# endregion

# region degree lowering


def test_degree_lowering_matches_rescan():
    rng = random.Random(4)
    A = random_subset(4, rng)
    p = parse_poly("x^2 + (1+i)x")
    D = (G(1, 1), G(2, 1))
    res = degree_lowering_step(A, p, D, 2, m=3)
    assert res.step == 3 and res.j == 0 and res.p_prime.degree == 1
    vals = []
    for k in enumerate_box(2):
        for k2 in enumerate_box(2):
            if k != k2:
                pp = degree_lower_diff(p, k, k2)
                vals.append((abs(correlation(A, CorrelationSpec(pp, D, 2, 0))), k, k2))
    best = max(v for v, _, _ in vals)
    first = next((k, k2) for v, k, k2 in vals if v == best)
    assert abs(res.value) == best and (res.k, res.k_prime) == first


def test_degree_lowering_needs_two_shifts():
    with pytest.raises(ValueError):
        degree_lowering_step(BoxSubset(2, ()), parse_poly("x^2"), (G(1),), 1)

# endregion

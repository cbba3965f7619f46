import random
from fractions import Fraction

from flagcone.constructions import (boolean_lattice, chain, thicken,
                                    vertical_double)
from flagcone.corpus import ds_subspace_witness, random_graded_poset
from flagcone.eulerian import (EULERIAN_METHODS, MoebiusTable, ds_residuals,
                               is_half_eulerian_parity, is_k_eulerian,
                               moebius_k, moebius_k_hall)
from flagcone.flags import FlagVector, KParam, flag_f_vector, l_vector
from flagcone.subsets import is_even_set, subsets_of

from helpers import eulerian_fixtures, non_eulerian_fixtures


def test_moebius_small_intervals():
    one = KParam(2)
    C = chain(2)
    assert moebius_k(C, one).value(C.bottom, C.layers[1][0]) == -1
    # a rank-2 interval with exactly 2k middle elements has value +1
    for two_k in (1, 2, 3, 4):
        D = thicken(chain(2), two_k)
        assert moebius_k(D, KParam(two_k)).whole() == 1
    B = boolean_lattice(3)
    assert moebius_k(B, one).whole() == -1


def test_hall_closed_form():
    C = chain(2)
    for two_k in (1, 2, 3, 4):
        k = KParam(two_k)
        expected = Fraction(2, two_k) - 1  # 1/k - 1
        assert moebius_k_hall(C, k) == expected
        assert moebius_k(C, k).whole() == expected
    # -(1 - 2 - 2 + 4) for the doubled rank-3 chain, Eulerian so (-1)^3
    assert moebius_k_hall(thicken(chain(3), 2), KParam(2)) == -1


def test_hall_agrees_with_recursion():
    rng = random.Random(73)
    for _ in range(40):
        P = random_graded_poset(rng, rng.randint(2, 5), max_layer=3)
        for two_k in (1, 2, 3, 4):
            k = KParam(two_k)
            assert moebius_k(P, k).whole() == moebius_k_hall(P, k)


def test_methods_agree_everywhere():
    rng = random.Random(79)
    posets = [random_graded_poset(rng, rng.randint(2, 4), max_layer=3)
              for _ in range(15)]
    cases = [(P, KParam(two_k)) for P in posets for two_k in (1, 2)]
    cases += [(P, k) for _, P, k in eulerian_fixtures()]
    cases += [(P, k) for _, P, k in non_eulerian_fixtures()]
    for P, k in cases:
        verdicts = {m: is_k_eulerian(P, k, m)[0] for m in EULERIAN_METHODS}
        assert len(set(verdicts.values())) == 1, verdicts


def test_eulerian_fixtures_pass_and_are_thick():
    for name, P, k in eulerian_fixtures():
        ok, witness = is_k_eulerian(P, k)
        assert ok, (name, witness)
        assert P.is_r_thick(k.two_k), name
        # alternating sum: sum (-1)^(i-1) f_i = k (1 - (-1)^n)
        F = flag_f_vector(P)
        n = P.n
        total = sum((-1) ** (i - 1) * Fraction(F.entries[1 << (i - 1)])
                    for i in range(1, n + 1))
        assert total == k.k * (1 - (-1) ** n), name


def test_chain_is_not_eulerian_at_k_one():
    ok, witness = is_k_eulerian(chain(3), KParam(2))
    assert not ok and witness is not None
    x, y = witness
    assert chain(3).rank_of[y] - chain(3).rank_of[x] == 2


def test_half_eulerian_examples():
    for rank in (1, 2, 5, 8):
        assert is_half_eulerian_parity(chain(rank))[0]
    assert not is_half_eulerian_parity(thicken(chain(2), 2))[0]  # diamond
    rng = random.Random(83)
    for _ in range(15):
        P = random_graded_poset(rng, rng.randint(2, 4), max_layer=3)
        assert is_half_eulerian_parity(vertical_double(P))[0]
        # parity characterization agrees with the k = 1/2 methods
        assert is_half_eulerian_parity(P)[0] == \
            is_k_eulerian(P, KParam(1))[0]


def test_half_eulerian_iff_even_rank_moebius_vanishes():
    rng = random.Random(89)
    for _ in range(15):
        P = random_graded_poset(rng, rng.randint(2, 4), max_layer=3)
        table = MoebiusTable(P, KParam(2))  # ordinary Moebius function
        vanishing = all(
            table.value(x, y) == 0
            for x, y in P.comparable_pairs()
            if (P.rank_of[y] - P.rank_of[x]) % 2 == 0)
        assert vanishing == is_half_eulerian_parity(P)[0]


def test_replica_intervals_scale_k():
    rng = random.Random(97)
    for _ in range(10):
        P = random_graded_poset(rng, 4, max_layer=3)
        x = P.layers[1][0]
        y = next(z for z in P.layers[3] if P.lt(x, z))
        for ell in (2, 3):
            T = thicken(P, ell)
            xi = next(z for z in T.layers[1]
                      if T.labels[z][0] == (P.labels or {}).get(x, x))
            yj = next(z for z in T.layers[3]
                      if T.labels[z][0] == (P.labels or {}).get(y, y))
            for two_k in (1, 2):
                k = KParam(two_k)
                assert MoebiusTable(P, k).value(x, y) == \
                    MoebiusTable(T, k.scaled(ell)).value(xi, yj)


def test_eulerian_iff_thickening_eulerian():
    rng = random.Random(101)
    cases = [chain(4), boolean_lattice(3)]
    cases += [random_graded_poset(rng, 3, max_layer=3) for _ in range(5)]
    for P in cases:
        for two_k in (1, 2):
            for ell in (2, 3):
                k = KParam(two_k)
                assert is_k_eulerian(P, k)[0] == \
                    is_k_eulerian(thicken(P, ell), KParam(two_k * ell))[0]


def test_ds_residuals_examples():
    one, half = KParam(2), KParam(1)
    rep = ds_residuals(flag_f_vector(boolean_lattice(3)), one)
    assert rep.all_zero_f and rep.all_zero_l and rep.agree
    rep2 = ds_residuals(flag_f_vector(chain(2)), half)
    assert rep2.residuals == [(0, (1, 1), Fraction(0))]
    assert rep2.all_zero_f
    rep3 = ds_residuals(flag_f_vector(chain(3)), one)
    assert not rep3.all_zero_f and not rep3.all_zero_l and rep3.agree


def test_ds_forms_agree_on_arbitrary_vectors():
    # the two residual systems cut out the same subspace
    rng = random.Random(103)
    for _ in range(40):
        n = rng.randint(1, 4)
        entries = {m: rng.randint(-4, 4) for m in subsets_of(n)}
        F = FlagVector(n + 1, entries)
        for two_k in (1, 2, 3):
            rep = ds_residuals(F, KParam(two_k))
            assert rep.agree


def test_ds_witness_lies_in_subspace_without_being_half_eulerian():
    W = ds_subspace_witness()
    half = KParam(1)
    rep = ds_residuals(flag_f_vector(W), half)
    assert rep.all_zero_f and rep.all_zero_l
    ok, witness = is_half_eulerian_parity(W)
    assert not ok
    assert not is_k_eulerian(W, half)[0]
    # the violating interval is one of the rank-4 columns
    x, y = witness
    assert W.rank_of[x] == 0 and W.rank_of[y] == 4


def test_noneven_l_vanishes_for_eulerian_fixtures():
    for name, P, k in eulerian_fixtures():
        L = l_vector(flag_f_vector(P), k)
        for mask, value in L.entries.items():
            if not is_even_set(mask, P.n):
                assert value == 0, (name, mask)

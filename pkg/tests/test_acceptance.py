"""Acceptance suite: one test per criterion, exact assertions only, one
pass/fail line printed per criterion (run with -s to see them live)."""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from flagcone.cone import (IntervalSystem, TABLE_SYSTEMS, blocking_sum,
                           chain_interval_system, family_expr,
                           limit_l_vector, load_rank8_matrix, matrix_rank,
                           maximal_chains, rank8_certificate,
                           rank8_facet_functional, selection_F_S,
                           validate_functional)
from flagcone.constructions import (boolean_lattice, chain,
                                    glued_rank8_poset,
                                    matched_bipartite_poset, regular_swap,
                                    thicken, vertical_double)
from flagcone.corpus import (ds_subspace_witness, random_corpus,
                             random_graded_poset)
from flagcone.errors import DegreeExceeded, InterpolationMismatch
from flagcone.eulerian import (EULERIAN_METHODS, ds_residuals,
                               is_half_eulerian_parity, is_k_eulerian,
                               moebius_k, moebius_k_hall)
from flagcone.exprs import GlueP8Expr
from flagcone.flags import (KParam, LinearFunctional, change_basis, convolve,
                            f_from_l, flag_count, flag_f_vector, l_vector)
from flagcone.subsets import is_even_set

K_VALUES = tuple(KParam(two_k) for two_k in (1, 2, 3, 4))


@contextmanager
def criterion(num, desc, limit=None):
    t0 = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"criterion {num:2d} ({desc}): FAIL")
        raise
    dt = time.monotonic() - t0
    if limit is not None:
        assert dt < limit, f"criterion {num} took {dt:.1f}s, limit {limit}s"
    print(f"criterion {num:2d} ({desc}): PASS in {dt:.2f}s")


@pytest.fixture(scope="module")
def corpus():
    return random_corpus(seed=20260810, count=200, ranks=(2, 6), max_layer=4)


@pytest.fixture(scope="module")
def corpus_flags(corpus):
    return [flag_f_vector(P) for P in corpus]


def test_criterion_1_hall_recursion_agreement(corpus):
    with criterion(1, "Hall closed form equals the recursion", limit=60):
        assert len(corpus) >= 200
        assert {P.rank for P in corpus} == set(range(2, 7))
        for P in corpus:
            for k in K_VALUES:
                assert moebius_k(P, k).whole() == moebius_k_hall(P, k)


def test_criterion_2_transform_round_trip(corpus, corpus_flags):
    with criterion(2, "L transform round trip and thickening invariance"):
        for P, F in zip(corpus, corpus_flags):
            for k in K_VALUES:
                assert f_from_l(l_vector(F, k)) == F
            for ell in (2, 3):
                FT = flag_f_vector(thicken(P, ell))
                for k in K_VALUES:
                    assert l_vector(FT, k.scaled(ell)).entries == \
                        l_vector(F, k).entries


def test_criterion_3_thickening_law(corpus, corpus_flags):
    with criterion(3, "f_S(D^r P) = r^|S| f_S(P)"):
        for P, F in zip(corpus, corpus_flags):
            for r in (2, 3):
                T = flag_f_vector(thicken(P, r))
                for m, v in F.entries.items():
                    assert T.entries[m] == r ** m.bit_count() * v


def _eulerian_fixture_list():
    out = []
    for n in (2, 3, 4):
        out.append((boolean_lattice(n), KParam(2)))
    for j in (1, 2, 3, 4):
        for rank in (3, 4, 7):
            out.append((thicken(chain(rank), j), KParam(j)))
    out.append((thicken(matched_bipartite_poset(2, 4), 2), KParam(2)))
    out.append((glued_rank8_poset(1), KParam(1)))
    return out


def _non_eulerian_fixture_list():
    from flagcone.constructions import thicken_range
    return [(chain(3), KParam(2)),
            (thicken_range(chain(4), 2, 1, 1), KParam(1)),
            (ds_subspace_witness(), KParam(1)),
            (boolean_lattice(3), KParam(1))]


def test_criterion_4_characterization_agreement(corpus):
    with criterion(4, "three k-Eulerian criteria agree; fixtures 2k-thick"):
        for P in corpus:
            for k in K_VALUES:
                verdicts = [is_k_eulerian(P, k, m)[0]
                            for m in EULERIAN_METHODS]
                assert len(set(verdicts)) == 1
        for P, k in _eulerian_fixture_list() + _non_eulerian_fixture_list():
            verdicts = [is_k_eulerian(P, k, m)[0] for m in EULERIAN_METHODS]
            assert len(set(verdicts)) == 1
        for P, k in _eulerian_fixture_list():
            assert is_k_eulerian(P, k)[0]
            assert P.is_r_thick(k.two_k)
            F = flag_f_vector(P)
            total = sum((-1) ** (i - 1) * Fraction(F.entries[1 << (i - 1)])
                        for i in range(1, P.n + 1))
            assert total == k.k * (1 - (-1) ** P.n)


def test_criterion_5_constructed_eulerian_fixtures():
    with criterion(5, "constructed families have the stated Eulerian type",
                   limit=120):
        for n in range(1, 6):
            assert is_k_eulerian(boolean_lattice(n), KParam(2))[0]
        for j in (1, 2, 3, 4):
            for n in range(1, 7):
                assert is_k_eulerian(thicken(chain(n + 1), j), KParam(j))[0]
        rng = random.Random(99)
        for _ in range(100):
            P = random_graded_poset(rng, rng.randint(2, 4), max_layer=3)
            assert is_half_eulerian_parity(vertical_double(P))[0]
        T = thicken(matched_bipartite_poset(2, 4), 2)
        xs, ys = T.layers[1], T.layers[2]
        cycle = [(xs[i], ys[i]) for i in range(4)] + \
                [(xs[i], ys[(i + 1) % 4]) for i in range(4)]
        assert is_k_eulerian(regular_swap(T, cycle), KParam(2))[0]


def test_criterion_6_rank8_limit_vectors():
    with criterion(6, "rank-8 limit vectors reproduce the fixture rows",
                   limit=600):
        half = KParam(1)
        columns, rows = load_rank8_matrix()
        used = set()
        try:
            for name, intervals in TABLE_SYSTEMS:
                vec = limit_l_vector(family_expr(intervals), half,
                                     norm_exp=len(intervals))
                row = tuple(vec.get(c, Fraction(0)) for c in columns)
                assert all(v == 0 for m, v in vec.items()
                           if m not in set(columns)), name
                hits = [i for i, r in enumerate(rows) if r == row]
                assert len(hits) == 1, name
                assert hits[0] not in used, name
                used.add(hits[0])
            glued = limit_l_vector(GlueP8Expr(None), half, norm_exp=4)
        except (DegreeExceeded, InterpolationMismatch) as exc:
            raise AssertionError(f"interpolation guard fired: {exc}")
        row = tuple(glued.get(c, Fraction(0)) for c in columns)
        assert row == rows[19] and row[0] == 4
        assert len(used) == 16


def test_criterion_7_facet_certificate():
    with criterion(7, "rank-8 facet certificate"):
        facet_f = rank8_facet_functional("f")
        facet_l = rank8_facet_functional("L")
        converted = dict(change_basis(facet_f, KParam(1)).coeffs)
        even_part = {m: v for m, v in converted.items()
                     if is_even_set(m, 7)}
        assert even_part == {m: -v for m, v in facet_l.coeffs}
        assert all(not is_even_set(m, 7)
                   for m in set(converted) - set(even_part))

        columns, rows = load_rank8_matrix()
        col_of = dict(zip(columns, range(len(columns))))
        for row in rows:
            assert sum(v * row[col_of[m]] for m, v in facet_l.coeffs) == 0
        assert matrix_rank(rows) == 20

        report = rank8_certificate(corpus_size=500)
        assert report["ok"], report
        detail = report["checks"]["f_form_nonnegative_on_corpus"]["detail"]
        assert detail["corpus_size"] >= 500 and not detail["negatives"]


def _atom_pool():
    atoms = []
    for rank in (2, 3):
        for mask in range(1 << (rank - 1)):
            subset = tuple(i + 1 for i in range(rank - 1) if mask & (1 << i))
            atoms.append(LinearFunctional.make(rank, "f", [(subset, 1)]))
    atoms.append(LinearFunctional.make(4, "f", [((1, 3), 1), ((1,), -1)]))
    return [a for a in atoms if validate_functional(a).valid]


def test_criterion_8_blocking_validator():
    with criterion(8, "blocking validator and thick-poset rescaling"):
        good = LinearFunctional.make(4, "f", [((1, 3), 1), ((1,), -1)])
        assert validate_functional(good).valid
        bad = LinearFunctional.make(4, "f", [((1,), 1), ((1, 3), -1)])
        verdict = validate_functional(bad)
        assert not verdict.valid
        assert blocking_sum(bad, verdict.system) == verdict.value < 0
        assert blocking_sum(bad, IntervalSystem.make(3, [(3, 3)])) == -1

        rng = random.Random(4242)
        atoms = _atom_pool()
        accepted = 0
        while accepted < 50:
            p, q = rng.choice(atoms), rng.choice(atoms)
            if p.rank + q.rank > 7:
                continue
            c = convolve(p, q)
            verdict = validate_functional(c)
            assert verdict.valid, (dict(p.coeffs), dict(q.coeffs))
            accepted += 1
            posets = [random_graded_poset(rng, c.rank, max_layer=3)
                      for _ in range(6)]
            for P in posets:
                assert c.evaluate(P) >= 0
            for r in (2, 3):
                rescaled = LinearFunctional.make(
                    c.rank, "f",
                    [(m, v * r ** (c.n - m.bit_count()))
                     for m, v in c.coeffs])
                for P in posets[:3]:
                    assert rescaled.evaluate(thicken(P, r)) >= 0


def test_criterion_9_selection_machinery():
    with criterion(9, "first-r-atoms selection counts and blocking"):
        rng = random.Random(777)
        combos = 0
        while combos < 50:
            base = random_graded_poset(rng, rng.randint(2, 3), max_layer=2)
            r = rng.randint(2, 3)
            Q = thicken(base, r)
            ordering = {rank: tuple(rng.sample(layer, len(layer)))
                        for rank, layer in enumerate(Q.layers)}
            S = rng.randrange(1 << Q.n)
            sel = selection_F_S(Q, r, ordering, S)
            assert len(sel) == \
                r ** (Q.n - bin(S).count("1")) * flag_count(Q, S)
            selected = set(sel)
            for C in maximal_chains(Q):
                system = chain_interval_system(Q, r, ordering, C)
                assert (C in selected) == system.blocks(S)
            combos += 1


def test_criterion_10_ds_witness():
    with criterion(10, "frozen non-half-Eulerian poset inside DS_{1/2}"):
        W = ds_subspace_witness()
        half = KParam(1)
        report = ds_residuals(flag_f_vector(W), half)
        assert report.all_zero_f and report.all_zero_l
        assert not is_half_eulerian_parity(W)[0]
        assert not is_k_eulerian(W, half)[0]
        # below rank 5 the subspace forces half-Eulerian, which is why the
        # frozen witness has rank 5
        rng = random.Random(31337)
        for _ in range(200):
            P = random_graded_poset(rng, rng.randint(3, 4), max_layer=3)
            rep = ds_residuals(flag_f_vector(P), half)
            if rep.all_zero_f:
                assert is_half_eulerian_parity(P)[0]

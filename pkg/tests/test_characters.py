"""Residue symbols, discriminant splits, and the pinned character."""

import pytest

from pgt.errors import NotPrimeError, PinningError
from pgt.gaussian import (GaussianInt, ResidueRing, canonical_rep,
                          canonical_pair, factor_pair_cached, gcd_pair,
                          ideal_reps_upto, mul, norm, prime_ideals_upto)
from pgt.characters import (DiscriminantSplit, chi, discriminant_split,
                            is_perfect_square, pin_even_unit_values,
                            quadratic_character, residue_symbol)

G = GaussianInt


def test_residue_symbol_examples():
    pi = canonical_rep(G(2, 1))
    assert residue_symbol(G(0, 1), pi) == -1          # i is a non-square mod 2+i
    assert residue_symbol(G(2, 1) * G(3, 0), pi) == 0
    assert residue_symbol(G(3, 0) * G(3, 0), pi) == 1  # squares are residues


def test_residue_symbol_matches_square_enumeration():
    # brute-force the square set of each small odd prime
    for npi, pp in prime_ideals_upto(200):
        if npi == 2:
            continue
        pi = canonical_rep(G(*pp))
        ring = ResidueRing(pp)
        squares = {ring.index(ring.reduce(mul(r, r)))
                   for r in ring.representatives()}
        nonzero = 0
        plus = 0
        for r in ring.representatives():
            s = residue_symbol(G(*r), pi)
            if r == (0, 0):
                assert s == 0
                continue
            nonzero += 1
            want = 1 if ring.index(r) in squares else -1
            assert s == want, (pp, r)
            plus += s == 1
        # residues and non-residues are equinumerous
        assert plus == (npi - 1) // 2


def test_residue_symbol_multiplicative_in_top():
    for npi, pp in prime_ideals_upto(200):
        if npi == 2:
            continue
        pi = canonical_rep(G(*pp))
        ring = ResidueRing(pp)
        table = {ring.index(r): residue_symbol(G(*r), pi)
                 for r in ring.representatives()}
        reps = ring.representatives()
        for a in reps:
            for b in reps:
                prod = ring.reduce(mul(a, b))
                assert table[ring.index(prod)] == \
                    table[ring.index(a)] * table[ring.index(b)]


def test_residue_symbol_rejects_even_and_composite():
    with pytest.raises(NotPrimeError):
        residue_symbol(G(1, 0), canonical_rep(G(1, 1)))
    with pytest.raises(NotPrimeError):
        residue_symbol(G(1, 0), canonical_rep(G(3, 1)))  # norm 10, not prime


def test_perfect_square_detection():
    assert is_perfect_square(G(4, 0))
    assert is_perfect_square(G(-4, 0))
    assert is_perfect_square(G(0, 2))     # (1+i)^2
    assert not is_perfect_square(G(5, 0))
    assert not is_perfect_square(G(32, 0))
    assert not is_perfect_square(G(0, 4))


def test_split_examples():
    sp5 = discriminant_split(G(5, 0))
    assert sp5.l.norm() == 1
    assert canonical_pair(sp5.D.pair) == (5, 0)

    sp12 = discriminant_split(G(12, 0))
    # odd part of D is 3; the (2)-part lands in l
    assert canonical_pair(sp12.D.pair) == (3, 0)
    assert sp12.l.pair == (2, 0)

    with pytest.raises(ValueError):
        discriminant_split(G(4, 0))


def test_split_stability():
    for n in [G(3, 0), G(4, 0), G(7, 0), G(2, 3), G(6, 0), G(1, 1)]:
        delta = n * n - G(4, 0)
        sp = discriminant_split(delta)
        again = discriminant_split(sp.delta)
        assert again.D == sp.D and again.l == sp.l
        # D l^2 is an associate of delta (checked in the dataclass too)
        DiscriminantSplit(delta=sp.delta, D=sp.D, l=sp.l)


def test_pin_even_unit_values():
    sp = discriminant_split(G(5, 0))
    ev, uv, report = pin_even_unit_values(sp.D)
    assert uv == 1
    assert ev in (-1, 0, 1)
    assert report.survivors >= 1

    # ramified D: even value must be 0
    sp_even = discriminant_split(G(1, 1) * G(1, 1) - G(4, 0))  # delta = -4+2i
    if any(norm(p) == 2 for p, _ in factor_pair_cached(sp_even.D.pair)):
        ev2, uv2, _ = pin_even_unit_values(sp_even.D)
        assert ev2 == 0 and uv2 == 1


def test_chi_completely_multiplicative():
    char = quadratic_character(G(5, 0))
    vals = {qp: chi(char, canonical_rep(G(*qp))) for qp in ideal_reps_upto(400)}
    for a in ideal_reps_upto(20):
        for b in ideal_reps_upto(20):
            prod = canonical_pair(mul(a, b))
            if norm(prod) > 400:
                continue
            assert vals[prod] == vals[a] * vals[b], (a, b)


def test_chi_zero_iff_common_factor():
    delta = G(2, 3) * G(2, 3) - G(4, 0)   # delta = -9+12i, D ~ 3
    char = quadratic_character(delta)
    for qp in ideal_reps_upto(200):
        v = chi(char, canonical_rep(G(*qp)))
        shares = norm(gcd_pair(qp, char.D.pair)) != 1
        assert (v == 0) == shares, qp


def test_chi_constant_on_associates():
    char = quadratic_character(G(5, 0))
    for a in range(-10, 11):
        for b in range(-10, 11):
            if a == 0 and b == 0 or a * a + b * b > 1000:
                continue
            reps = {chi(char, canonical_rep(G(a, b) * u))
                    for u in (G(1, 0), G(0, 1), G(-1, 0), G(0, -1))}
            assert len(reps) == 1


def test_unvalidated_character_rejected():
    from pgt.characters import QuadraticCharacter
    raw = QuadraticCharacter(D=G(5, 0), even_value=-1, validated=False)
    with pytest.raises(PinningError):
        chi(raw, canonical_rep(G(3, 0)))


def test_pinning_unique_for_acceptance_deltas():
    for n in [G(3, 0), G(4, 0), G(5, 0), G(1, 2), G(3, 2), G(2, 3)]:
        delta = n * n - G(4, 0)
        char = quadratic_character(delta)
        assert char.report.survivors == 1
        assert not char.report.ambiguous
        assert char.unit_value == 1


def test_pinning_resolves_deep_even_case():
    # delta = 32 = unit * (1+i)^10: candidates only separate at deep powers
    char = quadratic_character(G(32, 0))
    assert char.report.survivors == 1
    split = discriminant_split(G(32, 0))
    prod = mul(split.D.pair, mul(split.l.pair, split.l.pair))
    assert canonical_pair(prod) == canonical_pair((32, 0))

"""Character tables, Irr(B), induction and the Brauer identification."""

from fractions import Fraction

import pytest

from blockext.chars import (
    ClassFunction,
    block_char_on_subgroup,
    brauer_chars,
    build_irr_B,
    char_table,
    decomposition_matrix,
    full_group,
    induce,
    induced_block_char,
    irr_over_phi,
    lifts_of,
    mackey_restrict_induced,
    reduce_to_brauer,
    restrict,
)
from blockext.cyclotomic import zeta
from blockext.groups import build_group

C4 = (1, 2, 3, 0)
QI = (2, 3, 1, 0, 6, 7, 5, 4)
QJ = (4, 5, 7, 6, 1, 0, 2, 3)


def sl23_generators():
    # SL(2,3) on the 8 nonzero vectors of F_3 x F_3
    vecs = [(a, b) for a in range(3) for b in range(3)][1:]
    idx = {v: i for i, v in enumerate(vecs)}
    def perm(m):
        out = []
        for (a, b) in vecs:
            out.append(idx[((m[0][0] * a + m[0][1] * b) % 3,
                            (m[1][0] * a + m[1][1] * b) % 3)])
        return tuple(out)
    return [perm([[1, 1], [0, 1]]), perm([[0, 2], [1, 0]])]


class TestCharTable:
    def test_c4(self):
        E = build_group([C4])
        table = char_table(E)
        assert [ch.degree() for ch in table] == [1, 1, 1, 1]
        vals = {v for ch in table for v in ch.values}
        assert vals == {zeta(1), zeta(4), zeta(4) ** 2, zeta(4) ** 3}

    def test_q8(self):
        table = char_table(build_group([QI, QJ]))
        assert sorted(ch.degree() for ch in table) == [1, 1, 1, 1, 2]

    def test_s3(self):
        table = char_table(build_group([(1, 0, 2), (2, 1, 0)]))
        assert sorted(ch.degree() for ch in table) == [1, 1, 2]

    def test_sl23(self):
        E = build_group(sl23_generators())
        assert E.n == 24
        table = char_table(E)
        assert sorted(ch.degree() for ch in table) == [1, 1, 1, 2, 2, 2, 3]

    def test_deterministic(self):
        t1 = char_table(build_group([(1, 0, 2), (2, 1, 0)]))
        E2 = build_group([(1, 0, 2), (2, 1, 0)])
        t2 = char_table(E2)
        assert [c.values for c in t1] == [c.values for c in t2]


class TestIrrOverPhi:
    def test_z_equals_f(self):
        Z = build_group([(1, 0)])
        chars = irr_over_phi(Z, 1, 2, 1)
        assert len(chars) == 1 and chars[0](1) == zeta(2)

    def test_c4_over_c2(self):
        E = build_group([C4])
        chars = irr_over_phi(E, 2, 2, 1)
        assert len(chars) == 2
        gen_vals = sorted((ch(1).sort_key() for ch in chars))
        assert gen_vals == sorted([zeta(4).sort_key(), (zeta(4) ** 3).sort_key()])

    def test_trivial_phi_kernel_condition(self):
        E = build_group([C4])
        chars = irr_over_phi(E, 2, 2, 0)
        assert len(chars) == 2
        assert all(ch(2) == zeta(1) for ch in chars)


class TestIrrB:
    def test_example_a(self, example_a):
        irrB = build_irr_B(example_a)
        assert sorted(c.degree for c in irrB) == [1, 1, 2]

    def test_example_b(self, example_b):
        irrB = build_irr_B(example_b)
        assert len(irrB) == 9
        assert sorted(c.degree for c in irrB) == [1] * 6 + [2] * 3

    def test_example_c(self, example_c):
        irrB = build_irr_B(example_c)
        assert sorted(c.degree for c in irrB) == [1, 1, 1, 3, 3, 3, 3, 3]
        assert sum(c.degree ** 2 for c in irrB) == 48

    def test_trivial_action_block(self):
        from blockext.groups import BlockContext, validate_block_spec
        G = validate_block_spec(3, [1], [((1, 0), [[1]])])
        ctx = BlockContext(G, phi_exponent=1)
        irrB = build_irr_B(ctx)
        assert len(irrB) == 3 and all(c.degree == 1 for c in irrB)


class TestInduction:
    def test_regular_character(self, example_a):
        FG = full_group(example_a.G)
        triv, embed = FG.subgroup([0])
        cf = ClassFunction(triv, [zeta(1)])
        reg = induce(FG, embed, cf)
        assert reg.values[0].as_int() == FG.n
        assert all(v.is_zero() for v in reg.values[1:])

    def test_induced_block_char_irreducible(self, example_a):
        irrB = build_irr_B(example_a)
        big = next(c for c in irrB if c.degree == 2)
        ind = induced_block_char(example_a.G, big)
        assert ind.inner_product(ind) == 1

    def test_frobenius_reciprocity(self, example_a):
        G = example_a.G
        FG = full_group(G)
        irrB = build_irr_B(example_a)
        big = next(c for c in irrB if c.degree == 2)
        H, embed, cf = block_char_on_subgroup(G, big)
        for other in irrB:
            eta = induced_block_char(G, other)
            lhs = induce(FG, embed, cf).inner_product(eta)
            rhs = cf.inner_product(restrict(FG, eta, H, embed))
            assert lhs == rhs


class TestMackey:
    def test_h_equals_g(self, example_a):
        FG = full_group(example_a.G)
        embed = list(range(FG.n))
        chi = induced_block_char(example_a.G, build_irr_B(example_a)[0])
        pieces = mackey_restrict_induced(FG, FG, embed, FG, embed, chi)
        assert len(pieces) == 1 and pieces[0][1].values == chi.values

    def test_example_a_d_z_pieces(self, example_a):
        G = example_a.G
        FG = full_group(G)
        zset = set(G.Z)
        idx = [i for i, (d, e) in enumerate(FG.perms) if e in zset]
        H, embed = FG.subgroup(idx)
        # chi = (lambda, phi) on D x Z, lambda faithful on D = C_3
        vals = []
        for cls in H.classes:
            d, e = H.perms[cls[0]]
            vals.append(zeta(3, d[0]) * zeta(2, 0 if e == 0 else 1))
        chi = ClassFunction(H, vals)
        pieces = mackey_restrict_induced(FG, H, embed, H, embed, chi)
        assert len(pieces) == 2
        carried = set()
        for _, piece in pieces:
            assert piece.degree() == 1
            # read off which power of lambda carries the piece
            x = next(i for i, (d, e) in enumerate(H.perms)
                     if d == (1,) and e == 0)
            carried.add(piece((x)))
        assert carried == {zeta(3), zeta(3) ** 2}

    def test_trivial_k(self, example_a):
        FG = full_group(example_a.G)
        zset = set(example_a.G.Z)
        idx = [i for i, (d, e) in enumerate(FG.perms) if e in zset]
        H, embedH = FG.subgroup(idx)
        K, embedK = FG.subgroup([0])
        pieces = mackey_restrict_induced(
            FG, H, embedH, K, embedK, ClassFunction(K, [zeta(1)]))
        assert len(pieces) == FG.n // H.n
        for _, piece in pieces:
            assert piece.values[0].as_int() == H.n


class TestBrauer:
    def test_example_a_reductions(self, example_a):
        irrB = build_irr_B(example_a)
        ibr = brauer_chars(example_a)
        assert len(ibr) == 2
        linear = [c for c in irrB if c.degree == 1]
        for c in linear:
            red = reduce_to_brauer(example_a, c)
            assert sum(red.values()) == 1
        big = next(c for c in irrB if c.degree == 2)
        assert reduce_to_brauer(example_a, big) == {0: 1, 1: 1}

    def test_example_a_decomposition_matrix(self, example_a):
        irrB = build_irr_B(example_a)
        dec = decomposition_matrix(example_a, irrB)
        rows = sorted(dec)
        assert rows == [[0, 1], [1, 0], [1, 1]]

    def test_example_a_lifts(self, example_a):
        irrB = build_irr_B(example_a)
        for j in range(2):
            lifts = lifts_of(example_a, j, irrB)
            assert len(lifts) == 1 and lifts[0].degree == 1

    def test_example_b_lifts(self, example_b):
        irrB = build_irr_B(example_b)
        for j in range(len(brauer_chars(example_b))):
            lifts = lifts_of(example_b, j, irrB)
            assert len(lifts) == 3
            for c in lifts:
                # the carrying lambda is trivial on D_1
                assert c.lam.is_trivial_on(example_b.G.d1_elements)

    def test_example_c_reductions(self, example_c):
        irrB = build_irr_B(example_c)
        ibr = brauer_chars(example_c)
        assert len(ibr) == 3
        for c in irrB:
            if c.degree == 1:
                red = reduce_to_brauer(example_c, c)
                assert len(red) == 1 and set(red.values()) == {1}

    def test_every_brauer_char_has_a_lift(self, example_c):
        irrB = build_irr_B(example_c)
        for j in range(len(brauer_chars(example_c))):
            assert lifts_of(example_c, j, irrB)

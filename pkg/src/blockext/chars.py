"""Exact character theory for the blocks: tables, induction, Brauer side.

Character tables of the p'-groups are computed by the Dixon-Schneider
method: the common eigenvectors of the class matrices over a finite field
F_ell (ell = 1 mod exp(E), ell > 2 sqrt|E|) are the central characters, the
degrees come out of the orthogonality sum, and the actual cyclotomic values
are recovered by discrete-log lifting of root-of-unity multiplicities.  All
returned values are exact CycloNumbers and every table is verified against
both orthogonality relations before use.

Irr(B) is parametrized by pairs (lambda, chi) with lambda an orbit
representative on Irr(D) and chi in Irr(E_lambda | phi); the Brauer side is
Irr(E | phi) and decomposition numbers are inner products of E-inductions.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import sympy

from .cyclotomic import CycloNumber, zeta
from .errors import (
    BlockExtError,
    OrthogonalityFailure,
    SizeGuardExceeded,
)
from .groups import BlockContext, FiniteGroup, LinearChar, SemidirectGroup

_FULL_GROUP_BOUND = 1024
_ZERO = CycloNumber.from_rational(0)
_ONE = CycloNumber.from_rational(1)


class ClassFunction:
    """A class function: one CycloNumber per conjugacy class of its group."""

    def __init__(self, group: FiniteGroup, values):
        self.group = group
        self.values = tuple(values)
        assert len(self.values) == len(group.classes)

    def __call__(self, element: int) -> CycloNumber:
        return self.values[self.group.class_of[element]]

    def degree(self) -> int:
        return self.values[0].as_int()

    def conj_values(self) -> tuple:
        """Values at inverse classes (complex conjugate for characters)."""
        G = self.group
        return tuple(self.values[G.class_of[G.inverse[cls[0]]]]
                     for cls in G.classes)

    def inner_product(self, other: "ClassFunction") -> Fraction:
        if self.group is not other.group:
            raise BlockExtError("inner product across different groups")
        G = self.group
        conj = other.conj_values()
        acc = _ZERO
        for k, cls in enumerate(G.classes):
            acc = acc + self.values[k] * conj[k] * len(cls)
        acc = acc * Fraction(1, G.n)
        if not acc.is_rational():
            raise BlockExtError("inner product is not rational")
        return acc.as_fraction()

    def mul_pointwise(self, other: "ClassFunction") -> "ClassFunction":
        assert self.group is other.group
        return ClassFunction(self.group,
                             [a * b for a, b in zip(self.values, other.values)])

    def sort_key(self):
        return (self.degree(), tuple(v.sort_key() for v in self.values))

    def __eq__(self, other):
        return (isinstance(other, ClassFunction)
                and self.group is other.group and self.values == other.values)

    def __hash__(self):
        return hash((id(self.group), self.values))

    def __repr__(self):
        return f"ClassFunction{[str(v) for v in self.values]}"


# ---------------------------------------------------------------------------
# Dixon-Schneider character tables
# ---------------------------------------------------------------------------

def _dixon_prime(E: FiniteGroup, bound: int = 100000) -> int:
    m = E.exponent
    start = 2 * isqrt(E.n - 1) + 3 if isqrt(E.n) ** 2 != E.n else 2 * isqrt(E.n) + 1
    # smallest ell = 1 (mod m) that is prime and exceeds 2 sqrt|E|
    ell = m + 1
    while ell < start:
        ell += m
    while ell < bound:
        if sympy.isprime(ell):
            return ell
        ell += m
    raise BlockExtError(f"no Dixon prime below {bound} for exponent {m}")


def _class_matrices(E: FiniteGroup) -> list[list[list[int]]]:
    """A_i with (A_i)[j][k] = #{x in C_i : x^{-1} z_k in C_j}."""
    cls = E.classes
    co = E.class_of
    k = len(cls)
    mats = [[[0] * k for _ in range(k)] for _ in range(k)]
    for kk in range(k):
        zk = cls[kk][0]
        for i in range(k):
            Ai = mats[i]
            for x in cls[i]:
                j = co[E.table[E.inverse[x]][zk]]
                Ai[j][kk] += 1
    return mats


def _rref(M: list[list[int]], ell: int):
    """Row-reduce a copy of M over F_ell; returns (rows, pivot columns)."""
    A = [row[:] for row in M]
    nr, nc = len(A), len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if A[i][c] % ell), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, ell)
        A[r] = [(v * inv) % ell for v in A[r]]
        for i in range(nr):
            if i != r and A[i][c] % ell:
                f = A[i][c]
                A[i] = [(a - f * b) % ell for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return A[:r], pivots


def _kernel(M: list[list[int]], ell: int) -> list[list[int]]:
    nc = len(M[0])
    rows, pivots = _rref(M, ell)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * nc
        v[fc] = 1
        for r, pc in zip(rows, pivots):
            v[pc] = (-r[fc]) % ell
        basis.append(v)
    return basis


def _matvec(M, v, ell):
    return [sum(a * b for a, b in zip(row, v)) % ell for row in M]


def _restriction(A, basis, ell):
    """B with A . basis = basis . B, solved by elimination."""
    dim = len(basis)
    k = len(basis[0])
    # augmented system: columns are basis vectors, then the images
    images = [_matvec(A, v, ell) for v in basis]
    aug = [[basis[j][i] for j in range(dim)] + [img[i] for img in images]
           for i in range(k)]
    rows, pivots = _rref(aug, ell)
    assert pivots[:dim] == list(range(dim)), "basis not independent"
    B = [[0] * dim for _ in range(dim)]
    for r, pc in zip(rows, pivots):
        if pc < dim:
            for j in range(dim):
                B[pc][j] = r[dim + j]
    return B


def _split_eigenspaces(spaces, A, ell):
    out = []
    for basis in spaces:
        if len(basis) == 1:
            out.append(basis)
            continue
        B = _restriction(A, basis, ell)
        dim = len(basis)
        found = 0
        for lam in range(ell):
            M = [[(B[i][j] - (lam if i == j else 0)) % ell
                  for j in range(dim)] for i in range(dim)]
            ker = _kernel(M, ell)
            if not ker:
                continue
            sub = [[sum(w[j] * basis[j][i] for j in range(dim)) % ell
                    for i in range(len(basis[0]))] for w in ker]
            out.append(sub)
            found += len(ker)
            if found == dim:
                break
        assert found == dim, "class matrix not diagonalizable mod ell"
    return out


def _verify_orthogonality(E: FiniteGroup, chars: list[ClassFunction]):
    k = len(E.classes)
    for i, a in enumerate(chars):
        for j in range(i, len(chars)):
            ip = a.inner_product(chars[j])
            if ip != (1 if i == j else 0):
                raise OrthogonalityFailure(
                    f"first orthogonality fails at ({i},{j}): {ip}")
    for kk in range(k):
        for ll in range(k):
            acc = _ZERO
            for ch in chars:
                acc = acc + ch.values[kk] * ch.conj_values()[ll]
            want = (CycloNumber.from_rational(
                Fraction(E.n, len(E.classes[kk]))) if kk == ll else _ZERO)
            if acc != want:
                raise OrthogonalityFailure(
                    f"second orthogonality fails at column pair ({kk},{ll})")


def char_table(E: FiniteGroup) -> tuple[ClassFunction, ...]:
    """All irreducible characters, verified and deterministically sorted."""
    cached = getattr(E, "_char_table", None)
    if cached is not None:
        return cached
    cls = E.classes
    k = len(cls)
    ell = _dixon_prime(E)
    mats = _class_matrices(E)
    spaces = [[[1 if i == j else 0 for i in range(k)] for j in range(k)]]
    for A in mats[1:]:
        if all(len(s) == 1 for s in spaces):
            break
        spaces = _split_eigenspaces(spaces, A, ell)
    assert all(len(s) == 1 for s in spaces), "class matrices failed to separate"

    m = E.exponent
    g_ell = sympy.primitive_root(ell)
    z_m = pow(g_ell, (ell - 1) // m, ell)
    inv_classes = [E.class_of[E.inverse[c[0]]] for c in cls]
    chars = []
    for (w,) in spaces:
        # normalize the central character so omega(identity) = 1
        w0inv = pow(w[0], -1, ell)
        omega = [(v * w0inv) % ell for v in w]
        s = sum(omega[i] * omega[inv_classes[i]] * pow(len(cls[i]), -1, ell)
                for i in range(k)) % ell
        d_sq = (E.n * pow(s, -1, ell)) % ell
        deg = next((r for r in range(1, ell) if (r * r) % ell == d_sq
                    and (ell - r) >= r), None)
        assert deg is not None, "degree square has no small root mod ell"
        # chi(g_k) = deg * omega_k / |C_k| in F_ell
        chi_mod = [(deg * omega[i] * pow(len(cls[i]), -1, ell)) % ell
                   for i in range(k)]
        values = []
        for i in range(k):
            g = cls[i][0]
            d = E.order_of[g]
            zd = pow(z_m, m // d, ell)
            dinv = pow(d, -1, ell)
            acc = _ZERO
            for s_exp in range(d):
                mu = sum(chi_mod[E.class_of[E.power(g, j)]]
                         * pow(zd, (-s_exp * j) % d if d > 1 else 0, ell)
                         for j in range(d)) * dinv % ell
                if mu:
                    assert mu <= deg, "lifted multiplicity out of range"
                    acc = acc + zeta(d, s_exp) * mu
            values.append(acc)
        chars.append(ClassFunction(E, values))
    _verify_orthogonality(E, chars)
    chars.sort(key=ClassFunction.sort_key)
    table = tuple(chars)
    E._char_table = table
    return table


def irr_over_phi(F: FiniteGroup, z_local: int, zorder: int,
                 phi_exponent: int) -> list[ClassFunction]:
    """{chi in Irr(F) : chi restricted to Z is chi(1) . phi}.

    Z = <z_local> must be central in F; phi sends z_local to
    zeta_zorder^phi_exponent.  The central-character test on the generator
    decides membership.
    """
    if any(F.table[z_local][x] != F.table[x][z_local] for x in range(F.n)):
        raise BlockExtError("Z is not central in F")
    assert F.order_of[z_local] == zorder
    phi_val = zeta(zorder, phi_exponent % zorder) if zorder > 1 else _ONE
    out = []
    for ch in char_table(F):
        if ch(z_local) == phi_val * ch.degree():
            out.append(ch)
    return out


# ---------------------------------------------------------------------------
# induction, restriction, Mackey
# ---------------------------------------------------------------------------

def induce(G: FiniteGroup, embed: list[int], cf: ClassFunction) -> ClassFunction:
    """Induced class function along the subgroup embedding embed: H -> G."""
    H = cf.group
    assert len(embed) == H.n
    pos = {g: i for i, g in enumerate(embed)}
    values = []
    for cls in G.classes:
        r = cls[0]
        acc = _ZERO
        for x in range(G.n):
            y = G.table[G.table[x][r]][G.inverse[x]]
            i = pos.get(y)
            if i is not None:
                acc = acc + cf.values[H.class_of[i]]
        values.append(acc * Fraction(1, H.n))
    return ClassFunction(G, values)


def restrict(G: FiniteGroup, cf: ClassFunction, H: FiniteGroup,
             embed: list[int]) -> ClassFunction:
    assert cf.group is G and len(embed) == H.n
    return ClassFunction(
        H, [cf.values[G.class_of[embed[cls[0]]]] for cls in H.classes])


def mackey_restrict_induced(G: FiniteGroup, H: FiniteGroup, embedH: list[int],
                            K: FiniteGroup, embedK: list[int],
                            cf: ClassFunction) -> list[tuple[int, ClassFunction]]:
    """Double-coset pieces of (cf induced from K to G) restricted to H.

    Returns [(g, piece)] with piece = ((g.cf) restricted to H meet gKg^-1)
    induced to H; the sum of pieces is checked against the direct
    restriction before returning.
    """
    assert cf.group is K
    posH = {g: i for i, g in enumerate(embedH)}
    posK = {g: i for i, g in enumerate(embedK)}
    pieces = []
    for g in G.double_cosets(embedH, embedK):
        ginv = G.inverse[g]
        inter = [h for h in embedH
                 if G.table[G.table[ginv][h]][g] in posK]
        L_H = sorted(posH[x] for x in inter)
        L, embL = H.subgroup(L_H)
        vals = []
        for cls in L.classes:
            x = embedH[embL[cls[0]]]
            kk = posK[G.table[G.table[ginv][x]][g]]
            vals.append(cf.values[K.class_of[kk]])
        pieces.append((g, induce(H, embL, ClassFunction(L, vals))))
    direct = restrict(G, induce(G, embedK, cf), H, embedH)
    total = [ _ZERO for _ in H.classes ]
    for _, piece in pieces:
        total = [a + b for a, b in zip(total, piece.values)]
    if tuple(total) != direct.values:
        raise BlockExtError("Mackey pieces do not sum to the restriction")
    return pieces


# ---------------------------------------------------------------------------
# the ordinary and Brauer characters of B
# ---------------------------------------------------------------------------

def full_group(G: SemidirectGroup) -> FiniteGroup:
    """G = D x| E as an explicit FiniteGroup with labels (d, e)."""
    cached = getattr(G, "_full_group", None)
    if cached is not None:
        return cached
    n = G.D.order * G.E.n
    if n > _FULL_GROUP_BOUND:
        raise SizeGuardExceeded(
            f"|G| = {n} exceeds the explicit-group bound {_FULL_GROUP_BOUND}")
    labels = [(d, e) for d in G.D.elements() for e in range(G.E.n)]
    index = {lab: i for i, lab in enumerate(labels)}
    table = []
    for (d1, e1) in labels:
        row = []
        for (d2, e2) in labels:
            row.append(index[(G.D.add(d1, G.action.apply(e1, d2)),
                              G.E.table[e1][e2])])
        table.append(row)
    gens = [index[lab] for lab in labels[1:]]
    FG = FiniteGroup(labels, table, gens)
    FG._semidirect = G
    G._full_group = FG
    return FG


class BlockCharacter:
    """(lambda, chi) with lambda an orbit representative, chi over phi."""

    def __init__(self, lam: LinearChar, chi: ClassFunction,
                 stab: FiniteGroup, stab_embed: list[int], e_order: int):
        self.lam = lam
        self.chi = chi
        self.stab = stab
        self.stab_embed = stab_embed
        self.degree = chi.degree() * (e_order // stab.n)

    def key(self):
        return (self.lam.vec, self.chi.sort_key())

    def __repr__(self):
        return f"BlockCharacter(lam={self.lam.vec}, degree={self.degree})"


def block_char_on_subgroup(G: SemidirectGroup, c: BlockCharacter
                           ) -> tuple[FiniteGroup, list[int], ClassFunction]:
    """(lambda, chi) as a class function on D x| E_lambda inside full G."""
    FG = full_group(G)
    stab_set = set(c.stab_embed)
    idx = [i for i, (d, e) in enumerate(FG.perms) if e in stab_set]
    H, embed = FG.subgroup(idx)
    pos_stab = {e: i for i, e in enumerate(c.stab_embed)}
    vals = []
    for cls in H.classes:
        d, e = H.perms[cls[0]]
        vals.append(c.lam.value(d) * c.chi.values[c.stab.class_of[pos_stab[e]]])
    return H, embed, ClassFunction(H, vals)


def induced_block_char(G: SemidirectGroup, c: BlockCharacter) -> ClassFunction:
    H, embed, cf = block_char_on_subgroup(G, c)
    return induce(full_group(G), embed, cf)


def build_irr_B(ctx: BlockContext) -> list[BlockCharacter]:
    """Irr(B) as BlockCharacters; degree sum and distinctness verified."""
    cached = ctx.options.get("_irr_B")
    if cached is not None:
        return cached
    G = ctx.G
    zorder = len(G.Z)
    out = []
    for orbit in G.char_orbits():
        stab, embed = G.E.subgroup(orbit["stabilizer"])
        pos = {e: i for i, e in enumerate(embed)}
        z_local = pos[G.z_gen]
        for chi in irr_over_phi(stab, z_local, zorder, ctx.phi_exponent):
            out.append(BlockCharacter(orbit["rep"], chi, stab, embed, G.E.n))
    if sum(c.degree ** 2 for c in out) != G.order // zorder:
        raise BlockExtError("degree sum check failed for Irr(B)")
    induced = [induced_block_char(G, c) for c in out]
    for i in range(len(induced)):
        for j in range(i + 1, len(induced)):
            if induced[i].values == induced[j].values:
                raise BlockExtError("induced characters are not distinct")
    ctx.options["_irr_B"] = out
    return out


def brauer_chars(ctx: BlockContext) -> list[ClassFunction]:
    """IBr(B) identified with Irr(E | phi)."""
    cached = ctx.options.get("_ibr")
    if cached is None:
        G = ctx.G
        cached = irr_over_phi(G.E, G.z_gen, len(G.Z), ctx.phi_exponent)
        ctx.options["_ibr"] = cached
    return cached


def reduce_to_brauer(ctx: BlockContext, c: BlockCharacter
                     ) -> dict[int, int]:
    """chi induced from E_lambda to E, expanded in Irr(E | phi).

    Returns {index into brauer_chars(ctx): multiplicity}.
    """
    ind = induce(ctx.G.E, c.stab_embed, c.chi)
    out = {}
    for i, psi in enumerate(brauer_chars(ctx)):
        mult = ind.inner_product(psi)
        assert mult.denominator == 1
        if mult:
            out[i] = int(mult)
    assert sum(m * brauer_chars(ctx)[i].degree() for i, m in out.items()) \
        == c.chi.degree() * (ctx.G.E.n // c.stab.n)
    return out


def lifts_of(ctx: BlockContext, psi_index: int,
             irrB: list[BlockCharacter]) -> list[BlockCharacter]:
    """Members of Irr(B) whose Brauer reduction is exactly one copy of psi."""
    return [c for c in irrB
            if reduce_to_brauer(ctx, c) == {psi_index: 1}]


def decomposition_matrix(ctx: BlockContext,
                         irrB: list[BlockCharacter] | None = None
                         ) -> list[list[int]]:
    irrB = build_irr_B(ctx) if irrB is None else irrB
    ncols = len(brauer_chars(ctx))
    rows = []
    for c in irrB:
        red = reduce_to_brauer(ctx, c)
        rows.append([red.get(j, 0) for j in range(ncols)])
    return rows

"""Linear-source module representations over a chain ring.

Every module handled here restricts to D as a direct sum of rank-1
characters, so a ModuleRep keeps the D-action as a list of LinearChars
(one per basis vector) and explicit matrices only for the p'-part.  V_chi
for linear chi is a rank-1 line; for chi(1) > 1 it is split out of the
regular module by the central idempotent e_chi refined with a cyclic
eigen-idempotent.  Induction to G is the usual block construction along
coset representatives.
"""

from __future__ import annotations

from .chars import BlockCharacter, ClassFunction
from .chainring import ChainRing
from .errors import BlockExtError, IdempotentNotSplit
from .groups import BlockContext, FiniteGroup, LinearChar, SemidirectGroup


def _mat_mul(ring, A, B):
    n, m, k = len(A), len(B[0]), len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ring.zero
            for l in range(k):
                a = A[i][l]
                if a != ring.zero and B[l][j] != ring.zero:
                    acc = ring.add(acc, ring.mul(a, B[l][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _transpose(A):
    return tuple(tuple(row[j] for row in A) for j in range(len(A[0])))


class ModuleRep:
    """A G = D x| F module: diagonal D-characters plus F-matrices."""

    def __init__(self, ring: ChainRing, F: FiniteGroup, embed: list[int],
                 dchars: list[LinearChar], emats: list, provenance: str,
                 builder=None):
        self.ring = ring
        self.F = F
        self.embed = embed          # F's element indices inside the parent E
        self.dchars = list(dchars)
        self.emats = list(emats)    # one rank x rank matrix per F element
        self.rank = len(dchars)
        self.provenance = provenance
        # builder(ring2) reconstructs the same module over another precision,
        # which the oracle needs for its N versus N+2 stability check
        self.builder = builder
        assert len(emats) == F.n

    def verify(self, G: SemidirectGroup):
        """Cayley relations and the semidirect compatibility, exactly."""
        R = self.ring
        for a in range(self.F.n):
            for b in range(self.F.n):
                if _mat_mul(R, self.emats[a], self.emats[b]) != \
                        self.emats[self.F.table[a][b]]:
                    raise BlockExtError("module matrices violate the Cayley table")
        # f . d = (A(f) d) . f  on a D-eigenbasis: rho(f) diag(lam_k(d))
        # must equal diag(lam_k(A(f) d)) rho(f)
        gens = [tuple(1 if i == j else 0 for i in range(G.D.t))
                for j in range(G.D.t)]
        for fi, fe in enumerate(self.embed):
            M = self.emats[fi]
            for d in gens:
                ad = G.action.apply(fe, d)
                for i in range(self.rank):
                    zi = R.power(R.zeta_elt(G.D.exponent),
                                 self.dchars[i].value_exponent(ad))
                    for j in range(self.rank):
                        zj = R.power(R.zeta_elt(G.D.exponent),
                                     self.dchars[j].value_exponent(d))
                        if R.mul(zi, M[i][j]) != R.mul(M[i][j], zj):
                            raise BlockExtError(
                                "module violates the semidirect relation")
        return True

    def dual(self) -> "ModuleRep":
        """Contragredient: inverse-transpose matrices, inverted characters."""
        emats = [_transpose(self.emats[self.F.inverse[f]])
                 for f in range(self.F.n)]
        return ModuleRep(self.ring, self.F, self.embed,
                         [lam.inverse() for lam in self.dchars], emats,
                         f"dual({self.provenance})")

    def tensor(self, other: "ModuleRep") -> "ModuleRep":
        assert self.F is other.F and self.ring is other.ring
        R = self.ring
        dchars = [a.mul(b) for a in self.dchars for b in other.dchars]
        emats = []
        for f in range(self.F.n):
            A, B = self.emats[f], other.emats[f]
            n, m = self.rank, other.rank
            M = [[R.mul(A[i][k], B[j][l]) for k in range(n) for l in range(m)]
                 for i in range(n) for j in range(m)]
            emats.append(tuple(tuple(row) for row in M))
        return ModuleRep(R, self.F, self.embed, dchars, emats,
                         f"({self.provenance})x({other.provenance})")

    def restrict_to(self, sub: FiniteGroup, sub_embed_in_F: list[int],
                    parent_embed: list[int]) -> "ModuleRep":
        """Restriction along a subgroup of F given by F-indices."""
        emats = [self.emats[i] for i in sub_embed_in_F]
        return ModuleRep(self.ring, sub, parent_embed, self.dchars, emats,
                         f"res({self.provenance})")


def _embed_char_values(ring, F, chi: ClassFunction):
    return [ring.embed_cyclo(chi.values[F.class_of[g]]) for g in range(F.n)]


def _unit_span_basis(ring, vectors):
    """Indices of a free basis of the span, found by unit-pivot echelon."""
    work = [list(v) for v in vectors]
    chosen, pivots = [], []
    for idx, vec in enumerate(work):
        v = vec[:]
        for (prow, pcol) in zip(chosen, pivots):
            f = v[pcol]
            if f != ring.zero:
                red = work[prow]
                v = [ring.sub(a, ring.mul(f, b)) for a, b in zip(v, red)]
        piv = next((j for j, a in enumerate(v) if a != ring.zero
                    and ring.val(a) == 0), None)
        if piv is None:
            continue
        inv = ring.inv(v[piv])
        work[idx] = [ring.mul(inv, a) for a in v]
        for (prow, pcol) in zip(chosen, pivots):
            f = work[prow][piv]
            if f != ring.zero:
                work[prow] = [ring.sub(a, ring.mul(f, b))
                              for a, b in zip(work[prow], work[idx])]
        chosen.append(idx)
        pivots.append(piv)
    return chosen, pivots


def _solve_in_basis(ring, basis, target):
    """Coordinates of target in the given free basis (unit pivots assumed)."""
    n = len(basis)
    # reduced[i] = sum_j trans[i][j] basis[j], kept in echelon form
    reduced, trans, pivots = [], [], []
    for i, b in enumerate(basis):
        v = list(b)
        c = [ring.one if j == i else ring.zero for j in range(n)]
        for r, t, p in zip(reduced, trans, pivots):
            f = v[p]
            if f != ring.zero:
                v = [ring.sub(a, ring.mul(f, x)) for a, x in zip(v, r)]
                c = [ring.sub(a, ring.mul(f, x)) for a, x in zip(c, t)]
        piv = next(j for j, a in enumerate(v)
                   if a != ring.zero and ring.val(a) == 0)
        inv = ring.inv(v[piv])
        v = [ring.mul(inv, a) for a in v]
        c = [ring.mul(inv, a) for a in c]
        for k in range(len(reduced)):
            f = reduced[k][piv]
            if f != ring.zero:
                reduced[k] = [ring.sub(a, ring.mul(f, x))
                              for a, x in zip(reduced[k], v)]
                trans[k] = [ring.sub(a, ring.mul(f, x))
                            for a, x in zip(trans[k], c)]
        reduced.append(v)
        trans.append(c)
        pivots.append(piv)
    t = list(target)
    coords = [ring.zero] * n
    for r, tr, p in zip(reduced, trans, pivots):
        f = t[p]
        if f != ring.zero:
            t = [ring.sub(a, ring.mul(f, x)) for a, x in zip(t, r)]
            coords = [ring.add(a, ring.mul(f, x)) for a, x in zip(coords, tr)]
    if any(a != ring.zero for a in t):
        raise IdempotentNotSplit("vector does not lie in the split summand")
    return coords


def _vchi_matrices(ring, F: FiniteGroup, chi: ClassFunction):
    """Matrices of V_chi over the chain ring; regular-module idempotent."""
    deg = chi.degree()
    if deg == 1:
        vals = _embed_char_values(ring, F, chi)
        return [((v,),) for v in vals]
    n = F.n
    inv_n = ring.inv(ring.from_int(n))
    chi_vals = _embed_char_values(ring, F, chi)
    # e_chi = (deg/|F|) sum chi(g^-1) g on the regular module
    def idem_cols(weights):
        cols = [[ring.zero] * n for _ in range(n)]
        for g in range(n):
            w = weights[g]
            if w == ring.zero:
                continue
            for x in range(n):
                y = F.table[g][x]
                cols[x][y] = ring.add(cols[x][y], w)
        return cols
    w_chi = [ring.mul(ring.mul(ring.from_int(deg), inv_n),
                      chi_vals[F.inverse[g]]) for g in range(n)]
    e_chi = idem_cols(w_chi)
    # refine with a linear eigen-idempotent of a maximal cyclic subgroup
    c = max(range(n), key=lambda g: F.order_of[g])
    corder = F.order_of[c]
    powers = [0]
    while len(powers) < corder:
        powers.append(F.table[powers[-1]][c])
    zc = ring.zeta_elt(corder)
    inv_c = ring.inv(ring.from_int(corder))
    def translate(g, v):
        tv = [ring.zero] * n
        for x in range(n):
            if v[x] != ring.zero:
                tv[F.table[g][x]] = v[x]
        return tuple(tv)

    for s in range(corder):
        w_eta = [ring.zero] * n
        for k, gk in enumerate(powers):
            w_eta[gk] = ring.mul(inv_c, ring.power(zc, (-s * k) % corder))
        e_eta = idem_cols(w_eta)
        for x0 in range(n):
            v = tuple(sum_entries(ring, e_chi, e_eta, x0, y) for y in range(n))
            if all(a == ring.zero for a in v):
                continue
            translates = [translate(g, v) for g in range(n)]
            basis_idx, _ = _unit_span_basis(ring, translates)
            if len(basis_idx) != deg:
                continue
            basis = [translates[i] for i in basis_idx]
            emats = []
            for g in range(n):
                cols = [_solve_in_basis(ring, basis, translate(g, b))
                        for b in basis]
                emats.append(tuple(tuple(cols[j][i] for j in range(deg))
                                   for i in range(deg)))
            for g in range(n):
                tr = ring.zero
                for i in range(deg):
                    tr = ring.add(tr, emats[g][i][i])
                if tr != chi_vals[g]:
                    raise IdempotentNotSplit(
                        "split summand has the wrong character")
            return emats
    raise IdempotentNotSplit(
        "no free splitting of the chi-isotypic ideal was found")


def sum_entries(ring, A_cols, B_cols, x, y):
    """(A.B) entry (y, x) for column-form operators on the regular module."""
    acc = ring.zero
    for z in range(len(A_cols)):
        a = B_cols[x][z]
        if a != ring.zero and A_cols[z][y] != ring.zero:
            acc = ring.add(acc, ring.mul(A_cols[z][y], a))
    return acc


def build_module_rep(ctx: BlockContext, c: BlockCharacter,
                     ring: ChainRing) -> ModuleRep:
    """The G-module of the block character, induced from D x| E_lambda."""
    G = ctx.G
    E = G.E
    stab_set = set(c.stab_embed)
    # deterministic left coset reps of E_lambda in E: least index first
    reps, covered = [], set()
    for g in range(E.n):
        if g in covered:
            continue
        reps.append(g)
        covered.update(E.table[g][h] for h in c.stab_embed)
    k = len(reps)
    pos_stab = {e: i for i, e in enumerate(c.stab_embed)}
    wmats = _vchi_matrices(ring, c.stab, c.chi)
    deg = c.chi.degree()
    rank = k * deg
    dchars = []
    for t in reps:
        conj = G.action.on_char(t, c.lam)
        dchars.extend([conj] * deg)
    zero_block = tuple(tuple(ring.zero for _ in range(deg)) for _ in range(deg))
    emats = []
    for e in range(E.n):
        # e . t_i = t_{sigma(i)} h with h in E_lambda
        M = [[ring.zero] * rank for _ in range(rank)]
        for i, t in enumerate(reps):
            et = E.table[e][t]
            j = next(a for a, tr in enumerate(reps)
                     if E.table[E.inverse[tr]][et] in stab_set)
            h = E.table[E.inverse[reps[j]]][et]
            W = wmats[pos_stab[h]]
            for a in range(deg):
                for b in range(deg):
                    M[j * deg + a][i * deg + b] = W[a][b]
        emats.append(tuple(tuple(row) for row in M))
    rep = ModuleRep(ring, E, list(range(E.n)), dchars, emats,
                    f"induced(lam={c.lam.vec})",
                    builder=lambda R2: build_module_rep(ctx, c, R2))
    rep.verify(G)
    return rep

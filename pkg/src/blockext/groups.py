"""Groups G = D x| E: construction, validation, orbits, and subgroup data.

D is an abelian p-group given by invariant factor exponents, E a p'-group
given by permutation generators, and the action is specified per generator
by an integer matrix on exponent vectors and extended along the Cayley
table.  Everything is enumerated explicitly; the scale is desk-sized by
design and guarded by an order bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm

import sympy

from .cyclotomic import CycloNumber, zeta
from .errors import OrderBoundExceeded, SpecValidationError


# ---------------------------------------------------------------------------
# the defect group D
# ---------------------------------------------------------------------------

class AbelianPGroup:
    """C_{p^{n_1}} x ... x C_{p^{n_t}} with elements as exponent tuples."""

    def __init__(self, p: int, orders: list[int]):
        if not sympy.isprime(p):
            raise SpecValidationError("p-not-prime", f"{p} is not prime")
        if not orders or any(n < 1 for n in orders):
            raise SpecValidationError(
                "d-not-p-power", "D needs positive invariant exponents")
        self.p = p
        self.orders = list(orders)
        self.t = len(orders)
        self.qs = [p**n for n in orders]
        self.exponent = p ** max(orders)
        self.order = 1
        for q in self.qs:
            self.order *= q
        self.identity = (0,) * self.t
        # Assumption (ii) for p = 2: no C_2 direct factor
        self.assumption_ok = p != 2 or all(n > 1 for n in orders)

    def elements(self) -> list[tuple]:
        out = [()]
        for q in self.qs:
            out = [x + (i,) for x in out for i in range(q)]
        return out

    def add(self, x, y) -> tuple:
        return tuple((a + b) % q for a, b, q in zip(x, y, self.qs))

    def neg(self, x) -> tuple:
        return tuple((-a) % q for a, q in zip(x, self.qs))

    def order_of(self, x) -> int:
        return lcm(*(q // gcd(a, q) for a, q in zip(x, self.qs))) if any(x) else 1

    def apply_matrix(self, M, x) -> tuple:
        return tuple(sum(M[i][j] * x[j] for j in range(self.t)) % self.qs[i]
                     for i in range(self.t))

    def __repr__(self):
        parts = " x ".join(f"C_{q}" for q in self.qs)
        return f"AbelianPGroup({parts})"


def abelian_invariants(p: int, elements: list[tuple], ambient: AbelianPGroup) -> list[int]:
    """Invariant factor exponents of a subgroup given by its element list.

    Recovered from order statistics: log_p #{x : p^k x = 0} determines the
    partition of the abelian p-group.
    """
    if len(elements) == 1:
        return []
    counts = {}
    for x in elements:
        o = ambient.order_of(x)
        k = 0
        while p**k < o:
            k += 1
        counts[k] = counts.get(k, 0) + 1
    maxk = max(counts)
    # m_k = log_p of the p^k-torsion subgroup order
    ms = []
    for k in range(maxk + 1):
        tot = sum(v for kk, v in counts.items() if kk <= k)
        m = 0
        while p**m < tot:
            m += 1
        assert p**m == tot, "subgroup order statistics are not a p-group's"
        ms.append(m)
    invs = []
    for k in range(1, maxk + 1):
        mult = (ms[k] - ms[k - 1]) - (ms[k + 1] - ms[k] if k < maxk else 0)
        invs.extend([k] * mult)
    invs.sort()
    return invs


# ---------------------------------------------------------------------------
# linear characters of D
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearChar:
    """lambda(x) = prod zeta_{p^{n_i}}^{a_i x_i}, stored by exponent vector."""

    group: AbelianPGroup = field(compare=False)
    vec: tuple

    def value_exponent(self, x) -> int:
        """Exponent k with lambda(x) = zeta_{exp(D)}^k."""
        D = self.group
        qm = D.exponent
        return sum(a * xi * (qm // q)
                   for a, xi, q in zip(self.vec, x, D.qs)) % qm

    def value(self, x) -> CycloNumber:
        return zeta(self.group.exponent) ** self.value_exponent(x)

    def mul(self, other: "LinearChar") -> "LinearChar":
        D = self.group
        return LinearChar(D, tuple((a + b) % q for a, b, q in
                                   zip(self.vec, other.vec, D.qs)))

    def inverse(self) -> "LinearChar":
        D = self.group
        return LinearChar(D, tuple((-a) % q for a, q in zip(self.vec, D.qs)))

    def order(self) -> int:
        return lcm(*(q // gcd(a, q) for a, q in zip(self.vec, self.group.qs))) \
            if any(self.vec) else 1

    def is_trivial(self) -> bool:
        return not any(self.vec)

    def is_trivial_on(self, elements) -> bool:
        return all(self.value_exponent(x) == 0 for x in elements)

    def restrict_eq(self, other: "LinearChar", elements) -> bool:
        return all(self.value_exponent(x) == other.value_exponent(x)
                   for x in elements)

    def __repr__(self):
        return f"LinearChar{self.vec}"


# ---------------------------------------------------------------------------
# the p'-group E
# ---------------------------------------------------------------------------

class FiniteGroup:
    """Explicit finite group: element list, Cayley table, classes."""

    def __init__(self, perms: list[tuple], table: list[list[int]],
                 generators: list[int]):
        self.perms = perms
        self.n = len(perms)
        self.table = table
        self.generators = generators
        self.inverse = [0] * self.n
        for i in range(self.n):
            for j in range(self.n):
                if table[i][j] == 0:
                    self.inverse[i] = j
                    break
        self.order_of = [self._elt_order(i) for i in range(self.n)]
        self.exponent = lcm(*self.order_of) if self.n > 1 else 1
        self._classes = None

    def _elt_order(self, i) -> int:
        o, x = 1, i
        while x != 0:
            x = self.table[x][i]
            o += 1
        return o

    def power(self, i: int, k: int) -> int:
        k %= self.order_of[i]
        out = 0
        for _ in range(k):
            out = self.table[out][i]
        return out

    @property
    def classes(self) -> list[list[int]]:
        if self._classes is None:
            seen = [False] * self.n
            classes = []
            for i in range(self.n):
                if seen[i]:
                    continue
                orbit = {i}
                queue = [i]
                while queue:
                    x = queue.pop()
                    for g in range(self.n):
                        y = self.table[self.table[g][x]][self.inverse[g]]
                        if y not in orbit:
                            orbit.add(y)
                            queue.append(y)
                cls = sorted(orbit)
                for x in cls:
                    seen[x] = True
                classes.append(cls)
            classes.sort(key=lambda c: c[0])
            self._classes = classes
        return self._classes

    @property
    def class_of(self) -> list[int]:
        co = [0] * self.n
        for k, cls in enumerate(self.classes):
            for x in cls:
                co[x] = k
        return co

    def is_abelian(self) -> bool:
        return all(self.table[i][j] == self.table[j][i]
                   for i in range(self.n) for j in range(i))

    def subgroup(self, indices: list[int]) -> tuple["FiniteGroup", list[int]]:
        """Subgroup on the given closed element set; returns (group, embed)."""
        embed = sorted(set(indices))
        pos = {g: i for i, g in enumerate(embed)}
        assert 0 in pos, "subgroup must contain the identity"
        table = [[pos[self.table[a][b]] for b in embed] for a in embed]
        gens = [pos[g] for g in embed if g != 0]
        sub = FiniteGroup([self.perms[g] for g in embed], table, gens)
        return sub, embed

    def closure(self, seed: list[int]) -> list[int]:
        out = {0}
        queue = list(seed)
        out.update(seed)
        while queue:
            x = queue.pop()
            for g in list(out):
                for y in (self.table[x][g], self.table[g][x]):
                    if y not in out:
                        out.add(y)
                        queue.append(y)
        return sorted(out)

    def double_cosets(self, H: list[int], K: list[int]) -> list[int]:
        """Representatives of H\\G/K, least element index per coset."""
        for S in (H, K):
            sset = set(S)
            if 0 not in sset or any(self.table[a][b] not in sset
                                    for a in S for b in S):
                raise SpecValidationError(
                    "bad-spec-file", "double coset factor is not a subgroup")
        covered = [False] * self.n
        reps = []
        for g in range(self.n):
            if covered[g]:
                continue
            reps.append(g)
            for h in H:
                hg = self.table[h][g]
                for k in K:
                    covered[self.table[hg][k]] = True
        return reps

    def __repr__(self):
        return f"FiniteGroup(order={self.n})"


def _compose(a: tuple, b: tuple) -> tuple:
    # (a*b)(i) = a[b[i]]: b acts first
    return tuple(a[j] for j in b)


def build_group(generators: list[tuple], order_bound: int = 512) -> FiniteGroup:
    """BFS closure of permutation generators, deterministic element order."""
    if generators:
        npts = len(generators[0])
        if any(len(g) != npts or sorted(g) != list(range(npts))
               for g in generators):
            raise SpecValidationError(
                "action-shape", "generators must be permutations of one point set")
    else:
        npts = 1
    ident = tuple(range(npts))
    elems = [ident]
    index = {ident: 0}
    queue = [0]
    while queue:
        i = queue.pop(0)
        for g in generators:
            y = _compose(elems[i], g)
            if y not in index:
                if len(elems) >= order_bound:
                    raise OrderBoundExceeded(
                        f"group closure exceeded the order bound {order_bound}")
                index[y] = len(elems)
                elems.append(y)
                queue.append(index[y])
    table = [[index[_compose(a, b)] for b in elems] for a in elems]
    gen_idx = [index[g] for g in generators]
    return FiniteGroup(elems, table, gen_idx)


# ---------------------------------------------------------------------------
# the action of E on D and the semidirect product data
# ---------------------------------------------------------------------------

class ActionMap:
    """Matrices M[e] for every e in E with x -> M x on exponent vectors."""

    def __init__(self, D: AbelianPGroup, E: FiniteGroup,
                 gen_matrices: list[list[list[int]]]):
        self.D, self.E = D, E
        t, qs = D.t, D.qs
        canon = []
        for M in gen_matrices:
            if len(M) != t or any(len(row) != t for row in M):
                raise SpecValidationError(
                    "action-shape", f"action matrix must be {t}x{t}")
            canon.append(self._canon(M))
        for M in canon:
            self._check_divisibility(M)
        # extend along BFS words and verify the homomorphism property
        mats: list = [None] * E.n
        mats[0] = self._canon([[1 if i == j else 0 for j in range(t)]
                               for i in range(t)])
        queue = [0]
        while queue:
            i = queue.pop(0)
            for g, Mg in zip(E.generators, canon):
                j = E.table[i][g]
                if mats[j] is None:
                    mats[j] = self._mat_mul(mats[i], Mg)
                    queue.append(j)
        assert all(M is not None for M in mats)
        self.mats = mats
        for i in range(E.n):
            for j in range(E.n):
                if self._mat_mul(mats[i], mats[j]) != mats[E.table[i][j]]:
                    raise SpecValidationError(
                        "action-not-homomorphism",
                        "generator matrices do not extend to a homomorphism")
        # invertibility: e of finite order, so M[e] composed with itself
        # closes; still check bijectivity on D explicitly for gen matrices
        elems = D.elements()
        for M in canon:
            if len({D.apply_matrix(M, x) for x in elems}) != D.order:
                raise SpecValidationError(
                    "action-not-invertible", "action matrix is not bijective on D")

    def _canon(self, M):
        return tuple(tuple(M[i][j] % self.D.qs[i] for j in range(self.D.t))
                     for i in range(self.D.t))

    def _check_divisibility(self, M):
        p, orders = self.D.p, self.D.orders
        for i in range(self.D.t):
            for j in range(self.D.t):
                need = max(0, orders[i] - orders[j])
                if M[i][j] % p**need:
                    raise SpecValidationError(
                        "action-divisibility",
                        f"entry ({i},{j}) must be divisible by p^{need}")

    def _mat_mul(self, A, B):
        t = self.D.t
        return self._canon([[sum(A[i][k] * B[k][j] for k in range(t))
                             for j in range(t)] for i in range(t)])

    def apply(self, e: int, x) -> tuple:
        return self.D.apply_matrix(self.mats[e], x)

    def on_char(self, e: int, lam: LinearChar) -> LinearChar:
        """(e . lambda)(x) = lambda(e^{-1} x)."""
        D = self.D
        Minv = self.mats[self.E.inverse[e]]
        qm = D.exponent
        cs = []
        for j in range(D.t):
            c = sum(lam.vec[i] * Minv[i][j] * (qm // D.qs[i])
                    for i in range(D.t)) % qm
            step = qm // D.qs[j]
            assert c % step == 0
            cs.append((c // step) % D.qs[j])
        return LinearChar(D, tuple(cs))


@dataclass
class SemidirectGroup:
    """G = D x| E with the derived block-theoretic subgroup data."""

    D: AbelianPGroup
    E: FiniteGroup
    action: ActionMap
    Z: list[int]                    # element indices of C_E(D)
    z_gen: int                      # designated generator of Z
    d1_elements: list[tuple]        # [D, E]
    d2_elements: list[tuple]        # C_D(E)
    d1_invariants: list[int]
    d2_invariants: list[int]

    @property
    def order(self) -> int:
        return self.D.order * self.E.n

    def linear_chars(self) -> list[LinearChar]:
        out = [()]
        for q in self.D.qs:
            out = [v + (i,) for v in out for i in range(q)]
        return [LinearChar(self.D, v) for v in out]

    def char_orbits(self) -> list[dict]:
        """E-orbits on Irr(D): rep (lex-least), orbit, stabilizer indices."""
        chars = self.linear_chars()
        index = {lam.vec: i for i, lam in enumerate(chars)}
        seen = [False] * len(chars)
        orbits = []
        for i, lam in enumerate(chars):
            if seen[i]:
                continue
            orbit = {lam.vec}
            queue = [lam]
            while queue:
                mu = queue.pop()
                for e in self.E.generators:
                    nu = self.action.on_char(e, mu)
                    if nu.vec not in orbit:
                        orbit.add(nu.vec)
                        queue.append(nu)
            rep_vec = min(orbit)
            rep = chars[index[rep_vec]]
            stab = [e for e in range(self.E.n)
                    if self.action.on_char(e, rep).vec == rep_vec]
            for v in orbit:
                seen[index[v]] = True
            orbits.append({"rep": rep, "orbit": sorted(orbit),
                           "stabilizer": stab})
        return orbits

    def double_cosets(self, H: list[int], K: list[int]) -> list[int]:
        return self.E.double_cosets(H, K)


def validate_block_spec(p: int, orders: list[int],
                        generators: list[tuple[tuple, list[list[int]]]],
                        *, order_bound: int = 512) -> SemidirectGroup:
    """Build and validate G = D x| E from raw spec data.

    generators is a list of (permutation, action matrix) pairs.  Returns the
    SemidirectGroup; raises SpecValidationError with a distinct code for each
    violated hypothesis.  The p = 2 small-factor assumption is recorded on D
    rather than raised here; analysis-level entry points refuse it.
    """
    D = AbelianPGroup(p, orders)
    E = build_group([g for g, _ in generators], order_bound)
    if E.n % p == 0:
        raise SpecValidationError("p-divides-E", f"|E| = {E.n} is divisible by p")
    action = ActionMap(D, E, [M for _, M in generators])

    ident = tuple(tuple(1 if i == j else 0 for j in range(D.t))
                  for i in range(D.t))
    Z = [e for e in range(E.n) if action.mats[e] == ident]
    zset = set(Z)
    if any(E.table[z][e] != E.table[e][z] for z in Z for e in range(E.n)):
        raise SpecValidationError("Z-not-cyclic", "C_E(D) is not central in E")
    zorder = len(Z)
    cyclic_gens = [z for z in Z if E.order_of[z] == zorder]
    if not cyclic_gens:
        raise SpecValidationError("Z-not-cyclic", "C_E(D) is not cyclic")
    z_gen = min(cyclic_gens) if zorder > 1 else 0

    elems = D.elements()
    d2 = [x for x in elems
          if all(action.apply(e, x) == x for e in E.generators)]
    inv = pow(E.n, -1, D.exponent)
    d1 = []
    for x in elems:
        acc = D.identity
        for e in range(E.n):
            acc = D.add(acc, action.apply(e, x))
        avg = tuple((inv * a) % q for a, q in zip(acc, D.qs))
        if avg == D.identity:
            d1.append(x)
    if len(d1) * len(d2) != D.order or \
            set(d1) & set(d2) != {D.identity}:
        raise SpecValidationError(
            "action-not-homomorphism",
            "D does not split as [D,E] x C_D(E); invalid action data")
    return SemidirectGroup(
        D=D, E=E, action=action, Z=Z, z_gen=z_gen,
        d1_elements=d1, d2_elements=d2,
        d1_invariants=abelian_invariants(p, d1, D),
        d2_invariants=abelian_invariants(p, d2, D))


@dataclass
class BlockContext:
    """A validated block B = O(D x| E) e_phi plus its working options."""

    G: SemidirectGroup
    phi_exponent: int
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        zorder = len(self.G.Z)
        if zorder > 1 and gcd(self.phi_exponent, zorder) != 1:
            raise SpecValidationError(
                "phi-not-faithful",
                f"exponent {self.phi_exponent} is not faithful on Z of order {zorder}")

    @property
    def z_order(self) -> int:
        return len(self.G.Z)

    def phi_value_exponent(self, z: int) -> int:
        """phi(z) = zeta_{|Z|}^k: returns k for a Z element index."""
        E, zorder = self.G.E, len(self.G.Z)
        if zorder == 1 or z == 0:
            return 0
        x = self.G.z_gen
        acc, j = x, 1
        while acc != z:
            acc = E.table[acc][x]
            j += 1
            assert j <= zorder
        return (self.phi_exponent * j) % zorder

"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Values are stored on the power basis 1, zeta, ..., zeta^(phi(m)-1) with
Fraction coefficients, reduced modulo the m-th cyclotomic polynomial.  This is
enough for character tables and for the small valuation computations done at
the O-module level; no floating point is involved anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import sympy


@lru_cache(maxsize=None)
def cyclotomic_coeffs(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, constant term first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(m, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def _power_rows(m: int) -> tuple[tuple[int, ...], ...]:
    """Row j expresses zeta_m^j on the power basis, for every j in [0, m)."""
    coeffs = cyclotomic_coeffs(m)
    d = len(coeffs) - 1  # phi(m)
    rows: list[tuple[int, ...]] = []
    for j in range(d):
        rows.append(tuple(1 if i == j else 0 for i in range(d)))
    # zeta^d = -(c_0 + c_1 zeta + ... + c_{d-1} zeta^{d-1}), then shift up
    for j in range(d, m):
        prev = rows[j - 1]
        shifted = [0] + list(prev[:-1])
        top = prev[-1]
        if top:
            for i in range(d):
                shifted[i] -= top * coeffs[i]
        rows.append(tuple(shifted))
    return tuple(rows)


def _phi(m: int) -> int:
    return len(cyclotomic_coeffs(m)) - 1 if m > 1 else 1


class CycloNumber:
    """An element of Q(zeta_m), exact."""

    __slots__ = ("m", "coeffs", "_min")

    def __init__(self, m: int, coeffs):
        d = _phi(m)
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > d:
            raise ValueError("coefficient vector longer than phi(m)")
        cs += [Fraction(0)] * (d - len(cs))
        self.m = m
        self.coeffs = tuple(cs)
        self._min = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(q) -> "CycloNumber":
        return CycloNumber(1, [Fraction(q)])

    @staticmethod
    def from_root_powers(m: int, weights: dict[int, Fraction]) -> "CycloNumber":
        """Sum of weights[k] * zeta_m^k with arbitrary exponents k."""
        d = _phi(m)
        rows = _power_rows(m)
        acc = [Fraction(0)] * d
        for k, w in weights.items():
            row = rows[k % m]
            for i in range(d):
                if row[i]:
                    acc[i] += Fraction(w) * row[i]
        return CycloNumber(m, acc)

    # -- basic ring structure -----------------------------------------

    def _with(self, coeffs) -> "CycloNumber":
        return CycloNumber(self.m, coeffs)

    def __add__(self, other) -> "CycloNumber":
        a, b = _common(self, _coerce(other))
        return a._with([x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "CycloNumber":
        return self._with([-x for x in self.coeffs])

    def __sub__(self, other) -> "CycloNumber":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "CycloNumber":
        return _coerce(other) - self

    def __mul__(self, other) -> "CycloNumber":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return self._with([x * q for x in self.coeffs])
        a, b = _common(self, _coerce(other))
        d = len(a.coeffs)
        conv = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        conv[i + j] += x * y
        rows = _power_rows(a.m)
        acc = list(conv[:d])
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                row = rows[k % a.m]  # zeta^m = 1
                for i in range(d):
                    if row[i]:
                        acc[i] += c * row[i]
        return a._with(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CycloNumber":
        if n < 0:
            raise ValueError("negative powers not supported")
        out = CycloNumber.from_rational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    # -- field embeddings ---------------------------------------------

    def embed(self, M: int) -> "CycloNumber":
        """The same value viewed in Q(zeta_M); requires m | M."""
        if M % self.m:
            raise ValueError(f"{self.m} does not divide {M}")
        if M == self.m:
            return self
        step = M // self.m
        weights = {i * step: c for i, c in enumerate(self.coeffs) if c}
        return CycloNumber.from_root_powers(M, weights)

    def try_descend(self, d: int) -> "CycloNumber | None":
        """The same value in Q(zeta_d) if it lies there, else None; d | m."""
        if self.m % d:
            raise ValueError(f"{d} does not divide {self.m}")
        if d == self.m:
            return self
        basis = [zeta(d, i).embed(self.m).coeffs for i in range(_phi(d))]
        sol = _solve_rational(basis, self.coeffs)
        if sol is None:
            return None
        return CycloNumber(d, sol)

    def minimal(self) -> "CycloNumber":
        """Rewrite over the smallest conductor dividing m."""
        if self._min is not None:
            return self._min
        best = self
        for d in sorted(_divisors(self.m)):
            if d == self.m:
                break
            down = self.try_descend(d)
            if down is not None:
                best = down
                break
        if best is not self:
            best = best.minimal()
        self._min = best
        return best

    # -- Galois action ------------------------------------------------

    def galois(self, j: int) -> "CycloNumber":
        """Apply zeta_m -> zeta_m^j; j must be invertible mod m."""
        from math import gcd

        if gcd(j, self.m) != 1:
            raise ValueError("galois exponent must be coprime to the conductor")
        weights = {(i * j) % self.m: c for i, c in enumerate(self.coeffs) if c}
        return CycloNumber.from_root_powers(self.m, weights)

    def conj(self) -> "CycloNumber":
        """Complex conjugation, zeta -> zeta^(-1)."""
        if self.m <= 2:
            return self
        return self.galois(self.m - 1)

    # -- rationality --------------------------------------------------

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def as_int(self) -> int:
        q = self.as_fraction()
        if q.denominator != 1:
            raise ValueError(f"{self} is not an integer")
        return q.numerator

    # -- comparisons and formatting -----------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.from_rational(other)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        a, b = _common(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        m = self.minimal()
        return hash((m.m, m.coeffs))

    def sort_key(self):
        m = self.minimal()
        return (m.m, tuple((c.numerator, c.denominator) for c in m.coeffs))

    def __repr__(self) -> str:
        if self.is_rational():
            return str(self.coeffs[0])
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                z = f"z{self.m}" + (f"^{i}" if i > 1 else "")
                if c == 1:
                    parts.append(z)
                elif c == -1:
                    parts.append(f"-{z}")
                else:
                    parts.append(f"{c}*{z}")
        return " + ".join(parts).replace("+ -", "- ")


def zeta(m: int, k: int = 1) -> CycloNumber:
    """The root of unity zeta_m^k."""
    return CycloNumber.from_root_powers(m, {k % m: Fraction(1)})


def _coerce(x) -> CycloNumber:
    if isinstance(x, CycloNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return CycloNumber.from_rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to CycloNumber")


def _common(a: CycloNumber, b: CycloNumber) -> tuple[CycloNumber, CycloNumber]:
    from math import gcd

    if a.m == b.m:
        return a, b
    M = a.m * b.m // gcd(a.m, b.m)
    return a.embed(M), b.embed(M)


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _solve_rational(basis, target):
    """Solve sum c_i * basis[i] = target over Q, or None if inconsistent."""
    rows = len(basis)
    cols = len(target)
    # Gaussian elimination on the transposed system [basis^T | target]
    aug = [[Fraction(basis[r][c]) for r in range(rows)] + [Fraction(target[c])]
           for c in range(cols)]
    pivots = []
    row = 0
    for col in range(rows):
        pr = next((r for r in range(row, cols) if aug[r][col] != 0), None)
        if pr is None:
            continue
        aug[row], aug[pr] = aug[pr], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for r in range(cols):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    sol = [Fraction(0)] * rows
    for r, col in enumerate(pivots):
        sol[col] = aug[r][-1]
    for r in range(row, cols):
        if aug[r][-1] != 0:
            return None
    return sol

"""Integral monodromy: unipotency, logarithms, invariants and component groups.

The component group of the Neron fiber over a curve is the torsion subgroup
of ``Coker(T - id)``.  :func:`component_group` computes it three ways that
are related by the snake lemma for ``0 -> Z -> Q -> Q/Z -> 0`` and insists
that they agree:

1. torsion of ``Coker(T_Z - id)`` from the Smith diagonal;
2. ``(Im(T_Q - id) ∩ Z^n) / Im(T_Z - id)`` from saturation;
3. ``Ker(T_{Q/Z} - id) / Im Ker(T_Q - id)`` by counting solutions of
   ``(T - id) y ≡ 0 (mod q)`` for prime powers ``q``.

Route 3 never touches a Smith form, so it doubles as a brute-force check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import FormulaMismatch, NonCommuting, NotQuasiUnipotent, NotSquare, NotUnipotent
from .linalg import (
    FiniteAbelianGroup,
    IntMatrix,
    LatticeSubgroup,
    RatMatrix,
    as_int_matrix,
    cokernel_structure,
    image_lattice,
    kernel_lattice,
    lattice_from_vectors,
    matvec,
    _rref,
    quotient_structure,
    rank_q,
    saturate,
    smith_normal_form,
)


class NonUnipotentWarning(UserWarning):
    """Component group requested for a monodromy that is not unipotent."""


def _square(T) -> IntMatrix:
    T = as_int_matrix(T)
    if not T.is_square:
        raise NotSquare(f"monodromy must be square, got shape {T.shape}")
    return T


def is_unipotent(T) -> bool:
    """True iff ``(T - id)^n == 0``."""
    T = _square(T)
    n = T.rows
    return ((T - IntMatrix.identity(n)) ** n).is_zero()


def _lcm_of_cyclotomic_orders(n: int) -> int:
    # orders k of roots of unity with phi(k) <= n satisfy k <= 2 n^2 (+ small slack)
    out = 1
    for k in range(1, 2 * n * n + 7):
        phi = sum(1 for j in range(1, k + 1) if math.gcd(j, k) == 1)
        if phi <= n:
            out = out * k // math.gcd(out, k)
    return out


# lcm of the orders of all roots of unity of degree <= n, for n = 0..8
QUASI_UNIPOTENT_BOUND = {0: 1, 1: 2, 2: 12, 3: 12, 4: 120, 5: 120, 6: 2520, 7: 2520, 8: 5040}


@lru_cache(maxsize=None)
def quasi_unipotent_bound(n: int) -> int:
    if n in QUASI_UNIPOTENT_BOUND:
        return QUASI_UNIPOTENT_BOUND[n]
    return _lcm_of_cyclotomic_orders(n)


def _divisors(m: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(m) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))


def quasi_unipotent_reduce(T) -> tuple[int, IntMatrix]:
    """Smallest ``m >= 1`` with ``T^m`` unipotent, together with ``T^m``.

    Raises :class:`NotQuasiUnipotent` if no such ``m`` exists (an eigenvalue
    is not a root of unity, or ``T`` is not invertible over Z).
    """
    T = _square(T)
    n = T.rows
    bound = quasi_unipotent_bound(n)
    if abs(T.det()) != 1 or not is_unipotent(T ** bound):
        raise NotQuasiUnipotent("monodromy has an eigenvalue that is not a root of unity")
    for m in _divisors(bound):
        Tm = T ** m
        if is_unipotent(Tm):
            return m, Tm
    raise AssertionError("unreachable: T^bound is unipotent")


def log_unipotent(T) -> RatMatrix:
    """``N = log T = sum_{k>=1} (-1)^{k+1} (T - id)^k / k`` (a finite sum)."""
    T = _square(T)
    if not is_unipotent(T):
        raise NotUnipotent("log_unipotent needs a unipotent matrix")
    n = T.rows
    M = (T - IntMatrix.identity(n)).to_rational()
    N = RatMatrix.zeros(n, n)
    P = RatMatrix.identity(n)
    for k in range(1, n + 1):
        P = P @ M
        if P.is_zero():
            break
        N = N + P.scale(Fraction((-1) ** (k + 1), k))
    return N


def exp_nilpotent(N: RatMatrix) -> RatMatrix:
    """Exact ``exp(N)`` for nilpotent ``N``."""
    n = N.rows
    out = RatMatrix.identity(n)
    P = RatMatrix.identity(n)
    for k in range(1, n + 1):
        P = (P @ N).scale(Fraction(1, k))
        if P.is_zero():
            break
        out = out + P
    return out


def is_nilpotent(N) -> bool:
    return (N ** N.rows).is_zero()


@dataclass(frozen=True)
class MonodromyOperator:
    """Integral monodromy ``T`` with its unipotent power and logarithm.

    ``m`` is the order of the semisimple part (``T^m`` unipotent) and
    ``N = log T^m``.  For unipotent ``T``, ``m == 1`` and ``N = log T``.
    """

    T: IntMatrix
    m: int
    Tm: IntMatrix = field(repr=False)
    N: RatMatrix

    @classmethod
    def from_matrix(cls, T) -> "MonodromyOperator":
        T = _square(T)
        m, Tm = quasi_unipotent_reduce(T)
        return cls(T=T, m=m, Tm=Tm, N=log_unipotent(Tm))

    @property
    def rank(self) -> int:
        return self.T.rows

    @property
    def unipotent(self) -> bool:
        return self.m == 1


def as_monodromy(T) -> MonodromyOperator:
    if isinstance(T, MonodromyOperator):
        return T
    return MonodromyOperator.from_matrix(T)


def invariant_lattice(T) -> LatticeSubgroup:
    """Saturated integral kernel of ``T - id``."""
    T = _square(T)
    return kernel_lattice(T - IntMatrix.identity(T.rows))


# ---------------------------------------------------------------------------
# Component group, three ways
# ---------------------------------------------------------------------------


def _torsion_from_cokernel(M: IntMatrix) -> FiniteAbelianGroup:
    return cokernel_structure(M).torsion_subgroup()


def _torsion_from_saturation(M: IntMatrix) -> FiniteAbelianGroup:
    L = image_lattice(M)
    return quotient_structure(saturate(L), L)


def _integer_row_echelon(M: IntMatrix) -> list[list[int]]:
    """Row echelon form over Z by unimodular row operations (zero rows dropped)."""
    rows = [list(r) for r in M.to_rows() if any(r)]
    out = []
    for c in range(M.cols):
        active = [r for r in rows if r[c] != 0]
        rest = [r for r in rows if r[c] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            p = active[0]
            reduced = [p]
            for r in active[1:]:
                q = r[c] // p[c]
                r = [a - q * b for a, b in zip(r, p)]
                (reduced if r[c] != 0 else rest).append(r)
            active = reduced
        if active:
            out.append(active[0])
        rows = [r for r in rest if any(r)]
    return out


def _solutions_mod(echelon: list[list[int]], n: int, q: int) -> list[tuple[int, ...]]:
    """All ``y in (Z/q)^n`` with ``H y ≡ 0 (mod q)`` for a full-column-rank echelon ``H``.

    Variables are fixed from the last pivot upwards; each pivot equation is a
    linear congruence with ``gcd(h, q)`` solutions or none.
    """
    pivot_row = {}
    for i, r in enumerate(echelon):
        pivot_row[next(j for j, x in enumerate(r) if x)] = i
    if len(pivot_row) != n:
        raise ValueError("echelon form must have a pivot in every column")
    rows = [[x % q for x in r] for r in echelon]
    acc = [0] * len(rows)
    y = [0] * n
    out = []

    def shift(col: int, value: int, sign: int):
        if value:
            for i, r in enumerate(rows):
                if r[col]:
                    acc[i] = (acc[i] + sign * r[col] * value) % q

    def rec(col: int):
        if col < 0:
            out.append(tuple(y))
            return
        i = pivot_row[col]
        h, s = rows[i][col], acc[i]
        g = math.gcd(h, q)
        if s % g:
            return
        qq = q // g
        y0 = ((-s // g) * pow(h // g, -1, qq)) % qq if qq > 1 else 0
        for t in range(g):
            v = y0 + t * qq
            y[col] = v
            shift(col, v, 1)
            rec(col - 1)
            shift(col, v, -1)
        y[col] = 0

    if q == 1:
        return [tuple([0] * n)]
    rec(n - 1)
    return out


def _prime_factors(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def _torsion_from_qz_enumeration(M: IntMatrix, exponent: int, extra_primes=(2, 3)) -> FiniteAbelianGroup:
    """Torsion of ``Coker M`` as ``Ker(M_{Q/Z}) / Im Ker(M_Q)``.

    Only exact RREF and integer echelon forms are used, so this is independent
    of the Smith-form routes.  Every class has a representative supported on
    the pivot columns of the RREF.  On those columns ``M`` is injective, so
    ``S = {x in (Q/Z)^piv : M x ≡ 0}`` is finite and is listed outright at a
    modulus ``q`` that kills it.  The image of ``Ker M_Q`` meets ``S`` in the
    subgroup ``R`` spanned by the pivot parts of the RREF kernel vectors, and
    the answer is ``S / R``.  The p-primary parts come from the counts
    ``#{s : p^j s in R}`` for ``j`` one past the expected exponent.
    """
    n = M.cols
    rref, pivots = _rref(M.to_rational().to_rows()) if M.rows and n else ([], [])
    free = [j for j in range(n) if j not in pivots]
    kernel_parts = [[-rref[i][f] for i in range(len(pivots))] for f in free]
    e_r = math.lcm(1, *(x.denominator for v in kernel_parts for x in v))
    # S is an extension of the answer by R, so exp(S) divides exponent * e_r
    q = exponent * e_r
    m = len(pivots)
    H = _integer_row_echelon(M.select_columns(pivots)) if m else []

    def listing(mod):
        return _solutions_mod(H, m, mod) if m else [()]

    S = listing(q)
    checks = set(_prime_factors(q)) | set(extra_primes)
    for p in checks:
        if len(listing(q * p)) != len(S):
            raise FormulaMismatch(f"Q/Z kernel has elements of order beyond {q} at prime {p}")

    gens = [tuple(int(x * q) % q for x in v) for v in kernel_parts]
    R = {tuple([0] * m)}
    frontier = list(R)
    while frontier:
        nxt = []
        for r in frontier:
            for g in gens:
                s = tuple((a + b) % q for a, b in zip(r, g))
                if s not in R:
                    R.add(s)
                    nxt.append(s)
        frontier = nxt
    if len(S) % len(R):
        raise FormulaMismatch("kernel image is not a subgroup of the Q/Z kernel")

    primes = _prime_factors(exponent)
    for p in extra_primes:
        primes.setdefault(p, 0)
    orders = []
    for p, v in sorted(primes.items()):
        sizes = [1]
        for j in range(1, v + 2):
            pj = p ** j
            hits = sum(1 for s in S if tuple(pj * x % q for x in s) in R)
            sizes.append(hits // len(R))
        at_least = []
        for j in range(1, v + 2):
            ratio, rem = divmod(sizes[j], sizes[j - 1])
            if rem:
                raise FormulaMismatch("p-torsion counts are not a chain of divisors")
            e = 0
            while ratio > 1:
                ratio //= p
                e += 1
            at_least.append(e)
        if at_least[-1]:
            raise FormulaMismatch(f"{p}-primary part exceeds the expected exponent {exponent}")
        at_least.append(0)
        for j in range(1, v + 1):
            orders += [p ** j] * (at_least[j - 1] - at_least[j])
    return FiniteAbelianGroup.from_cyclic_orders(orders)


@dataclass(frozen=True)
class ComponentGroupFormulas:
    cokernel: FiniteAbelianGroup
    saturation: FiniteAbelianGroup
    enumeration: FiniteAbelianGroup

    @property
    def agree(self) -> bool:
        return self.cokernel == self.saturation == self.enumeration


def component_group_formulas(T) -> ComponentGroupFormulas:
    """Evaluate the three descriptions of ``Coker(T_Z - id)_tor`` separately."""
    T = _square(T)
    M = T - IntMatrix.identity(T.rows)
    g1 = _torsion_from_cokernel(M)
    g2 = _torsion_from_saturation(M)
    exponent = math.lcm(g1.exponent, g2.exponent)
    g3 = _torsion_from_qz_enumeration(M, exponent)
    return ComponentGroupFormulas(g1, g2, g3)


def component_group(T) -> FiniteAbelianGroup:
    """Component group ``G_0 = Coker(T_Z - id)_tor`` (free part dropped).

    Accepts any square integral ``T``; a :class:`NonUnipotentWarning` is
    issued when ``T`` is not unipotent.

    >>> component_group(IntMatrix.from_rows([[1, 5], [0, 1]]))
    FiniteAbelianGroup(free_rank=0, torsion=(5,))
    """
    T = _square(T)
    if not is_unipotent(T):
        warnings.warn("component group of a non-unipotent monodromy", NonUnipotentWarning, stacklevel=2)
    f = component_group_formulas(T)
    if not f.agree:
        raise FormulaMismatch(
            f"component group formulas disagree: {f.cokernel}, {f.saturation}, {f.enumeration}"
        )
    return f.cokernel


# ---------------------------------------------------------------------------
# Link cohomology of a bidisk
# ---------------------------------------------------------------------------


Cocycle = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class LinkCohomology:
    """Cohomology of the Koszul complex ``Z^n -d0-> Z^n ⊕ Z^n -d1-> Z^n``.

    ``d0(mu) = ((T1 - id) mu, (T2 - id) mu)`` and
    ``d1(l1, l2) = (T2 - id) l1 - (T1 - id) l2``.  Classes in ``h1`` are
    written as torsion coordinates (reduced mod each divisor) followed by free
    coordinates, matching the order of ``h1.torsion`` then ``h1.free_rank``.
    """

    h0: LatticeSubgroup
    h1: FiniteAbelianGroup
    h1_basis: tuple[Cocycle, ...]
    T1: IntMatrix = field(repr=False)
    T2: IntMatrix = field(repr=False)
    _cocycles: LatticeSubgroup = field(repr=False)
    _U: IntMatrix = field(repr=False)
    _torsion_idx: tuple[int, ...] = field(repr=False)
    _free_idx: tuple[int, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.T1.rows

    def is_cocycle(self, cocycle) -> bool:
        l1, l2 = (list(x) for x in cocycle)
        n = self.n
        M1 = self.T1 - IntMatrix.identity(n)
        M2 = self.T2 - IntMatrix.identity(n)
        return all(a - b == 0 for a, b in zip(matvec(M2, l1), matvec(M1, l2)))

    def class_of(self, cocycle) -> tuple[int, ...]:
        l1, l2 = cocycle
        z = list(l1) + list(l2)
        c = self._cocycles.coordinates(z)
        if c is None:
            raise ValueError("not a cocycle: d1(l1, l2) != 0")
        u = matvec(self._U, c)
        torsion = tuple(u[i] % d for i, d in zip(self._torsion_idx, self.h1.torsion))
        free = tuple(u[i] for i in self._free_idx)
        return torsion + free

    def coboundary(self, mu: Sequence[int]) -> Cocycle:
        n = self.n
        M1 = self.T1 - IntMatrix.identity(n)
        M2 = self.T2 - IntMatrix.identity(n)
        return tuple(matvec(M1, mu)), tuple(matvec(M2, mu))


def koszul_differentials(T1: IntMatrix, T2: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    n = T1.rows
    M1 = T1 - IntMatrix.identity(n)
    M2 = T2 - IntMatrix.identity(n)
    return M1.vstack(M2), M2.hstack(-M1)


def link_cohomology_bidisk(T1, T2) -> LinkCohomology:
    """H^0 and H^1 of the link of the origin for commuting monodromies ``T1, T2``."""
    T1, T2 = _square(T1), _square(T2)
    if T1.shape != T2.shape:
        raise ValueError("monodromies must have the same size")
    if T1 @ T2 != T2 @ T1:
        raise NonCommuting("bidisk monodromies must commute")
    n = T1.rows
    d0, d1 = koszul_differentials(T1, T2)
    h0 = kernel_lattice(d0)
    K = kernel_lattice(d1)
    k = K.rank
    coords = [K.coordinates(c) for c in d0.columns()]
    if k == 0:
        return LinkCohomology(h0, FiniteAbelianGroup(0), (), T1, T2, K, IntMatrix.zeros(0, 0), (), ())
    C = IntMatrix.from_columns(coords, rows=k) if n else IntMatrix.zeros(k, 0)
    snf = smith_normal_form(C)
    diag = snf.diagonal + [0] * (k - len(snf.diagonal))
    torsion_idx = tuple(i for i in range(k) if diag[i] > 1)
    free_idx = tuple(i for i in range(k) if diag[i] == 0)
    h1 = FiniteAbelianGroup(len(free_idx), tuple(diag[i] for i in torsion_idx))
    basis = []
    for i in torsion_idx + free_idx:
        v = matvec(K.basis, snf.U_inv.column(i))
        basis.append((tuple(v[:n]), tuple(v[n:])))
    return LinkCohomology(h0, h1, tuple(basis), T1, T2, K, snf.U, torsion_idx, free_idx)


@dataclass(frozen=True)
class AdmissibleClasses:
    """Subgroup of ``h1`` spanned by classes of cocycles with entries in ``Im(T_Q - id) ∩ Z^n``."""

    group: FiniteAbelianGroup
    generators: tuple[Cocycle, ...]
    generator_classes: tuple[tuple[int, ...], ...]


def admissible_class_subgroup(lc: LinkCohomology, T1=None, T2=None) -> AdmissibleClasses:
    T1 = lc.T1 if T1 is None else _square(T1)
    T2 = lc.T2 if T2 is None else _square(T2)
    n = lc.n
    S1 = saturate(image_lattice(T1 - IntMatrix.identity(n)))
    S2 = saturate(image_lattice(T2 - IntMatrix.identity(n)))
    block = [list(c) + [0] * n for c in S1.columns()] + [[0] * n + list(c) for c in S2.columns()]
    if not block:
        return AdmissibleClasses(FiniteAbelianGroup(0), (), ())
    B = IntMatrix.from_columns(block, rows=2 * n)
    _, d1 = koszul_differentials(T1, T2)
    inner = kernel_lattice(d1 @ B)
    gens = [matvec(B, c) for c in inner.columns()]
    if not gens:
        return AdmissibleClasses(FiniteAbelianGroup(0), (), ())
    classes = [lc.class_of((g[:n], g[n:])) for g in gens]

    # relations: c with sum c_j [g_j] = 0 in h1 = Z^{t+f} / (d_i e_i)
    t = len(lc.h1.torsion)
    width = t + lc.h1.free_rank
    G = IntMatrix.from_columns(classes, rows=width)
    R = IntMatrix.from_columns(
        [[d if i == j else 0 for i in range(width)] for j, d in enumerate(lc.h1.torsion)], rows=width
    )
    rel_full = kernel_lattice(G.hstack(-R) if t else G)
    rel = lattice_from_vectors([c[:len(gens)] for c in rel_full.columns()], len(gens))
    if rel.rank == 0:
        group = FiniteAbelianGroup(len(gens))
        combos = [[1 if i == j else 0 for i in range(len(gens))] for j in range(len(gens))]
    else:
        snf = smith_normal_form(rel.basis)
        diag = snf.diagonal + [0] * (len(gens) - len(snf.diagonal))
        group = cokernel_structure(rel.basis)
        keep = [i for i in range(len(gens)) if diag[i] > 1] + [i for i in range(len(gens)) if diag[i] == 0]
        combos = [snf.U_inv.column(i) for i in keep]
    out_gens = []
    out_classes = []
    for combo in combos:
        v = [sum(c * g[i] for c, g in zip(combo, gens)) for i in range(2 * n)]
        cocycle = (tuple(v[:n]), tuple(v[n:]))
        out_gens.append(cocycle)
        out_classes.append(lc.class_of(cocycle))
    return AdmissibleClasses(group, tuple(out_gens), tuple(out_classes))

"""Per-field analytic quantities: zeta residues, zeta at 2, the constant C.

Every operation returns a value together with a finite, rigorously
accumulated error bound; no bare floats leave this module.  Euler products
are driven by polynomial factorization over prime fields (squarefree
decomposition plus distinct-degree factorization, which is all that is
needed since only factor degrees and multiplicities matter).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from sympy import Poly, Symbol, isprime, primerange

from .nfdata import FieldRecord, Snapshot, query

__all__ = [
    "KAPPA",
    "PolyModP",
    "LocalFactorData",
    "ZetaValue",
    "PartialConstant",
    "QFIELD",
    "MinimalField",
    "factor_mod_p",
    "local_factor_data",
    "zeta_K_at_2",
    "zeta_residue",
    "partial_constant",
]

# 2-torsion class group bound exponent; used only to annotate reports.
KAPPA = 0.2784


@dataclass(frozen=True)
class PolyModP:
    """A monic polynomial with coefficients reduced mod p (ascending order)."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1] != 1:
            raise ValueError("polynomial must be monic mod p")


@dataclass(frozen=True)
class LocalFactorData:
    """Residue degrees of the primes above p, with trust bookkeeping."""

    p: int
    residue_degrees: tuple[int, ...]
    ramified: bool
    trusted: bool


@dataclass(frozen=True)
class ZetaValue:
    value: float
    error_bound: float

    def __post_init__(self):
        if not (math.isfinite(self.error_bound) and self.error_bound >= 0):
            raise ValueError("error bound must be finite and nonnegative")
        if not (self.value > 0):
            raise ValueError("zeta values here are positive")

    def contains(self, x: float) -> bool:
        return abs(x - self.value) <= self.error_bound


@dataclass(frozen=True)
class PartialConstant:
    """Partial sum C(Z) of the leading-constant series over quartic fields."""

    Z: int
    value: float
    error_bound: float
    terms: int
    prime_bound: int
    term_list: tuple[tuple[str, float, float], ...] = field(default=())


@dataclass(frozen=True)
class MinimalField:
    """Bare-bones stand-in for a FieldRecord in analytic test scaffolding.

    A length-2 coefficient list denotes the rationals themselves (degree-1
    convention, not an arithmetic field of the catalog).
    """

    label: str
    coeffs: tuple[int, ...]
    disc: int
    r1: int = 0
    r2: int = 0
    h: Optional[int] = None
    reg: Optional[str] = None
    w: Optional[int] = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def reg_float(self) -> float:
        if self.reg is None:
            raise ValueError(f"{self.label}: no regulator present")
        return float(self.reg)


QFIELD = MinimalField(label="Q", coeffs=(0, 1), disc=1, r1=1, r2=0, h=1,
                      reg="1.00000000000000", w=2)


# ---------------------------------------------------------------------------
# Polynomial arithmetic over F_p (dense, ascending coefficients)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymulmod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _polyrem(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    inv = pow(lead, -1, p)
    while len(a) - 1 >= db and a:
        c = (a[-1] * inv) % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def _polygcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _polyrem(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _polydiv(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    db, inv = len(b) - 1, pow(b[-1], -1, p)
    while len(a) - 1 >= db and a:
        c = (a[-1] * inv) % p
        shift = len(a) - 1 - db
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    if a:
        raise ArithmeticError("non-exact polynomial division")
    return _trim(q)


def _polypow_x(e: int, modulus: Sequence[int], p: int) -> list[int]:
    """x^e mod modulus over F_p, by repeated squaring."""
    result = [1]
    base = _polyrem([0, 1], modulus, p)
    while e:
        if e & 1:
            result = _polyrem(_polymulmod(result, base, p), modulus, p)
        base = _polyrem(_polymulmod(base, base, p), modulus, p)
        e >>= 1
    return result


def _derivative(a: Sequence[int], p: int) -> list[int]:
    return _trim([(i * a[i]) % p for i in range(1, len(a))])


def _pth_root(a: Sequence[int], p: int) -> list[int]:
    """p-th root of a polynomial in F_p[x^p] (coefficientwise, Frobenius fixes F_p)."""
    return _trim([a[i] for i in range(0, len(a), p)])


def _squarefree_parts(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Squarefree decomposition over F_p: list of (monic squarefree part, multiplicity)."""
    out: list[tuple[list[int], int]] = []
    df = _derivative(f, p)
    if not df:
        for g, m in _squarefree_parts(_pth_root(f, p), p):
            out.append((g, m * p))
        return out
    c = _polygcd(f, df, p)
    w = _polydiv(f, c, p)
    i = 1
    while len(w) > 1:
        y = _polygcd(w, c, p)
        z = _polydiv(w, y, p)
        if len(z) > 1:
            out.append((z, i))
        w, c = y, _polydiv(c, y, p)
        i += 1
    if len(c) > 1:
        for g, m in _squarefree_parts(_pth_root(c, p), p):
            out.append((g, m * p))
    return out


def factor_mod_p(coeffs: Sequence[int], p: int) -> tuple[tuple[int, int], ...]:
    """Degrees-with-multiplicities of the irreducible factors of a monic poly mod p.

    Squarefree decomposition followed by distinct-degree factorization; the
    reassembled product is checked against the input before returning.  One
    output entry per irreducible factor, as a sorted (degree, multiplicity)
    multiset.
    """
    if p >= 2 ** 61 or not isprime(p):
        raise ValueError(f"{p} is not a prime below 2^61")
    if len(coeffs) - 1 > 8:
        raise ValueError("degree capped at 8")
    if coeffs[-1] % p != 1 % p:
        raise ValueError("polynomial must be monic")
    f = _trim([c % p for c in coeffs])
    if len(f) == 1:
        return ()
    out: list[tuple[int, int]] = []
    pieces: list[tuple[list[int], int]] = []
    for g, mult in _squarefree_parts(f, p):
        # Distinct-degree factorization of the squarefree g.
        rest = list(g)
        d = 1
        h = [0, 1]
        while len(rest) - 1 >= 2 * d:
            h = _polypow_x(p, rest, p) if d == 1 else _polypow_x_cont(h, p, rest)
            sub = list(h) + [0] * max(0, 2 - len(h))
            sub[1] = (sub[1] - 1) % p  # h(x) - x
            gd = _polygcd(_trim(sub), rest, p)
            if len(gd) > 1:
                count, r = divmod(len(gd) - 1, d)
                assert r == 0
                out.extend([(d, mult)] * count)
                pieces.append((gd, mult))
                rest = _polydiv(rest, gd, p)
                h = _polyrem(h, rest, p)
            d += 1
        if len(rest) > 1:
            out.append((len(rest) - 1, mult))
            pieces.append((rest, mult))
    # Re-multiplication check: the product of all pieces with multiplicity
    # must reproduce the input mod p.
    check = [1]
    for g, mult in pieces:
        for _ in range(mult):
            check = _polymulmod(check, g, p)
    if check != f:
        raise AssertionError("re-multiplication check failed in factor_mod_p")
    return tuple(sorted(out))


def _polypow_x_cont(h: list[int], p: int, modulus: list[int]) -> list[int]:
    """h(x)^p mod modulus: continue the Frobenius iteration for DDF."""
    result = [1]
    base = list(h)
    e = p
    while e:
        if e & 1:
            result = _polyrem(_polymulmod(result, base, p), modulus, p)
        base = _polyrem(_polymulmod(base, base, p), modulus, p)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# Euler products and residues


def _poly_disc(coeffs: Sequence[int]) -> int:
    if len(coeffs) == 2:
        return 1
    x = Symbol("x")
    return int(Poly(list(reversed(coeffs)), x).discriminant())


def local_factor_data(record, p: int) -> LocalFactorData:
    """Residue degrees above p, trusted iff p cannot divide the ring index.

    Trust rule: p is trusted iff p does not divide disc(poly)/disc(field);
    for trusted p the factorization of the polynomial mod p gives the exact
    splitting (one prime per irreducible factor, residue degree = factor
    degree) including the ramified case.
    """
    disc_poly = _poly_disc(record.coeffs)
    q, r = divmod(disc_poly, record.disc)
    trusted = (r == 0) and (q % p != 0)
    pattern = factor_mod_p(record.coeffs, p)
    ramified = any(mult > 1 for _, mult in pattern)
    return LocalFactorData(
        p=p,
        residue_degrees=tuple(sorted(d for d, _ in pattern)),
        ramified=ramified,
        trusted=trusted,
    )


def zeta_K_at_2(record, prime_bound: int = 10 ** 5) -> ZetaValue:
    """Dedekind zeta at s = 2 by a truncated Euler product with rigorous bounds.

    Local factors at trusted primes come from factoring the defining
    polynomial mod p; untrusted primes contribute a bracket between 1 and
    (1 - p^-2)^(-degree).  The truncation tail is bounded via
    sum_{p > P} p^-2 <= 1/(P - 1).
    """
    P = int(prime_bound)
    if P < 100:
        raise ValueError("prime bound must be at least 100")
    degree = len(record.coeffs) - 1
    lower = upper = 1.0
    for p in primerange(2, P + 1):
        data = local_factor_data(record, p)
        if data.trusted:
            factor = 1.0
            for f in data.residue_degrees:
                factor /= 1.0 - p ** (-2.0 * f)
            lower *= factor
            upper *= factor
        else:
            upper *= (1.0 - p ** -2.0) ** (-degree)
    # Multiplicative tail bound over the omitted primes.
    tail = math.exp(degree * (1.0 / (P - 1)) / (1.0 - P ** -2.0))
    upper *= tail
    value = 0.5 * (lower + upper)
    err = 0.5 * (upper - lower)
    # One ulp of slack per multiplication keeps the bound honestly directed.
    err += 8e-16 * value * (P / math.log(max(P, 3)))
    return ZetaValue(value=value, error_bound=err)


_REG_REL_ERR = 1e-11  # regulators carry >= 12 significant digits


def zeta_residue(record) -> ZetaValue:
    """Residue at s = 1 of zeta_K via the class number formula."""
    missing = [
        name
        for name in ("h", "reg", "w")
        if getattr(record, name, None) is None
    ]
    if missing:
        raise ValueError(f"{record.label}: missing invariants {missing}")
    value = (
        2.0 ** record.r1
        * (2.0 * math.pi) ** record.r2
        * record.h
        * record.reg_float
        / (record.w * math.sqrt(abs(record.disc)))
    )
    return ZetaValue(value=value, error_bound=value * _REG_REL_ERR)


def partial_constant(
    snapshot: Snapshot,
    Z: int,
    prime_bound: int = 10 ** 5,
    emit_terms: bool = False,
) -> PartialConstant:
    """Partial sum C(Z) over the quartic S4 fields with |disc| <= Z."""
    value = 0.0
    err = 0.0
    term_list: list[tuple[str, float, float]] = []
    fields = query(snapshot, degree=4, galois_filter=["4T5"], max_abs_disc=Z)
    for rec in fields:  # already sorted by (|disc|, label)
        try:
            resid = zeta_residue(rec)
            z2 = zeta_K_at_2(rec, prime_bound)
        except (ValueError, ArithmeticError) as exc:
            raise ValueError(f"constant evaluation failed at {rec.label}: {exc}") from exc
        denom = 2.0 ** rec.r2 * float(rec.disc) ** 2
        t_lo = (resid.value - resid.error_bound) / ((z2.value + z2.error_bound) * denom)
        t_up = (resid.value + resid.error_bound) / ((z2.value - z2.error_bound) * denom)
        t_mid = 0.5 * (t_lo + t_up)
        t_err = 0.5 * (t_up - t_lo)
        value += t_mid
        err += t_err
        if emit_terms:
            term_list.append((rec.label, t_mid, t_err))
    return PartialConstant(
        Z=Z,
        value=value,
        error_bound=err,
        terms=len(fields),
        prime_bound=prime_bound,
        term_list=tuple(term_list),
    )

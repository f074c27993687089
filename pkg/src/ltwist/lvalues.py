"""Exact special values of Dirichlet-type L series via Bernoulli polynomials,
and the explicit class number formula for imaginary quadratic fields."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from ltwist.characters import PeriodicFn
from ltwist.exactnum import Scalar, q_add, q_is_zero, q_mul, rat

MAX_BERNOULLI_DEGREE = 64


@dataclass(frozen=True)
class BernPoly:
    """Bernoulli polynomial with exact coefficients, ascending in x."""

    degree: int
    coeffs: tuple

    def __call__(self, x):
        acc = rat(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "BernPoly":
        if self.degree == 0:
            return BernPoly(0, (rat(0),))
        d = tuple(i * c for i, c in enumerate(self.coeffs))[1:]
        return BernPoly(self.degree - 1, d)


def bernoulli_poly(n: int) -> BernPoly:
    """The n-th Bernoulli polynomial.

    Built from the defining recursion B_n' = n B_{n-1} with the constant
    fixed by the vanishing of the degree-n polynomial's average over [0, 1]
    (for n >= 1).  B_0 = 1, B_1 = x - 1/2, B_2 = x^2 - x + 1/6.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n > MAX_BERNOULLI_DEGREE:
        raise ValueError(f"degree capped at {MAX_BERNOULLI_DEGREE}")
    return _bernoulli_cached(n)


_BERN_CACHE: dict[int, BernPoly] = {}


def _bernoulli_cached(n: int) -> BernPoly:
    if n in _BERN_CACHE:
        return _BERN_CACHE[n]
    if n == 0:
        poly = BernPoly(0, (rat(1),))
    else:
        prev = _bernoulli_cached(n - 1)
        # integrate n * B_{n-1}
        body = [rat(0)] + [rat(n) * c / (i + 1) for i, c in enumerate(prev.coeffs)]
        # constant term from sum-normalization: integral over [0,1] vanishes
        const = -sum((c / (i + 1) for i, c in enumerate(body)), rat(0))
        body[0] = const
        poly = BernPoly(n, tuple(body))
    _BERN_CACHE[n] = poly
    return poly


def bernoulli_number(n: int):
    return bernoulli_poly(n)(rat(0))


def _l_domain_ok(chi: PeriodicFn) -> bool:
    return chi.mean_zero or chi.is_dirichlet_character or chi.is_offzero_indicator


def l_special(n: int, chi: PeriodicFn) -> Scalar:
    """Exact L(1-n, chi) = -sum_{a=1..N} chi(a) N^{n-1} B_n(a/N) / n.

    Accepts mean-zero periodic functions, Dirichlet characters mod N, and
    the indicator of nonzero residues.  For n > 2 with a non-character
    input the value is still computed but flagged with a warning, since the
    engine's validity argument only covers characters there.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not _l_domain_ok(chi):
        raise ValueError(
            "l_special needs a mean-zero function, a Dirichlet character, "
            "or the nonzero-residue indicator"
        )
    if n > 2 and not chi.is_dirichlet_character:
        warnings.warn(
            "L(1-n, chi) for n > 2 on a non-character input is computed "
            "formally; the engine's validity argument does not cover it",
            stacklevel=2,
        )
    N = chi.period
    B = bernoulli_poly(n)
    scale = rat(N) ** (n - 1) / rat(n)
    total: Scalar = rat(0)
    for a in range(1, N + 1):
        v = chi(a)
        if q_is_zero(v):
            continue
        total = q_add(total, q_mul(v, B(rat(a, N)) * scale))
    return q_mul(-1, total)


def l_zero(chi: PeriodicFn) -> Scalar:
    """L(0, chi) from its explicit closed form
    sum_k -(k/N) chi(k) + (1/2) sum_k chi(k); equals l_special(1, chi)."""
    if not _l_domain_ok(chi):
        raise ValueError("closed form needs a mean-zero function or character")
    N = chi.period
    total: Scalar = rat(0)
    for k in range(1, N + 1):
        v = chi(k)
        if q_is_zero(v):
            continue
        total = q_add(total, q_mul(v, rat(1, 2) - rat(k, N)))
    return total


def l_minus_one(chi: PeriodicFn) -> Scalar:
    """L(-1, chi) from its explicit closed form
    sum_k -(k^2/2N) chi(k) + (1/2) sum_k k chi(k) - (N/12) sum_k chi(k)."""
    if not _l_domain_ok(chi):
        raise ValueError("closed form needs a mean-zero function or character")
    N = chi.period
    total: Scalar = rat(0)
    for k in range(1, N + 1):
        v = chi(k)
        if q_is_zero(v):
            continue
        w = -rat(k * k, 2 * N) + rat(k, 2) - rat(N, 12)
        total = q_add(total, q_mul(v, w))
    return total


def legendre_symbol(k: int, q: int) -> int:
    """(k/q) for odd prime q, via Euler's criterion."""
    r = pow(k % q, (q - 1) // 2, q)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def class_number_imag_quadratic(q: int) -> int:
    """h(Q(sqrt(-q))) = -(1/q) sum_{k=1}^{q-1} k (k/q), for prime q = 3 mod 4, q > 3.

    The result is checked to be a positive integer before returning.
    """
    if not (_is_prime(q) and q % 4 == 3 and q > 3):
        raise ValueError("out of scope modulus")
    s = sum(k * legendre_symbol(k, q) for k in range(1, q))
    h = rat(-s, q)
    if h.denominator != 1 or h <= 0:
        raise ArithmeticError(f"class number sum gave a non positive integer: {h}")
    return int(h)

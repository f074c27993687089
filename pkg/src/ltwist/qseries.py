"""Truncated series with exact coefficients and exponents on a lattice
(1/D) * Z, plus the product/theta identity checks built on them.

Everything here is exact except modular_s_check, which evaluates the
character series numerically at sample points on the imaginary axis and
tests span-invariance under tau -> -1/tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from ltwist.exactnum import (
    CycloNum,
    Scalar,
    q_add,
    q_eq,
    q_is_zero,
    q_mul,
    rat,
    scalar_str,
    zeta,
)

RatLike = Union[int, "Rat"]


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class PuiseuxSeries:
    """Truncated series sum c_e q^e with exponents e in (1/denom) * Z.

    `order` is the truncation bound: coefficients are exact for every
    exponent strictly below it.  Arithmetic tracks the tightest valid bound.
    """

    __slots__ = ("denom", "coeffs", "order")

    def __init__(self, denom: int, coeffs: dict, order, normalize: bool = True):
        if denom < 1:
            raise ValueError("lattice denominator must be positive")
        if normalize:
            coeffs = {k: v for k, v in coeffs.items() if not q_is_zero(v)}
        self.denom = denom
        self.coeffs = coeffs
        self.order = rat(order)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(order, denom: int = 1) -> "PuiseuxSeries":
        return PuiseuxSeries(denom, {}, order)

    @staticmethod
    def monomial(exponent, coeff=1, order=None, denom: Optional[int] = None) -> "PuiseuxSeries":
        e = rat(exponent)
        d = denom if denom is not None else int(e.denominator)
        if (e * d).denominator != 1:
            d = _lcm(d, int(e.denominator))
        key = int(e * d)
        if order is None:
            raise ValueError("monomial needs an explicit order")
        return PuiseuxSeries(d, {key: coeff}, order)

    @staticmethod
    def one(order) -> "PuiseuxSeries":
        return PuiseuxSeries(1, {0: 1}, order)

    # -- structure ------------------------------------------------------

    @property
    def offset(self):
        """Smallest exponent with a nonzero coefficient (valuation)."""
        if not self.coeffs:
            return None
        return rat(min(self.coeffs), self.denom)

    def rescale(self, denom: int) -> "PuiseuxSeries":
        if denom == self.denom:
            return self
        if denom % self.denom:
            raise ValueError("can only refine the lattice")
        f = denom // self.denom
        return PuiseuxSeries(
            denom, {k * f: v for k, v in self.coeffs.items()}, self.order,
            normalize=False,
        )

    def _aligned(self, other: "PuiseuxSeries"):
        d = _lcm(self.denom, other.denom)
        return self.rescale(d), other.rescale(d)

    def coefficient(self, exponent) -> Scalar:
        e = rat(exponent)
        if e >= self.order:
            raise ValueError(f"exponent {e} is at or beyond the truncation order")
        key = e * self.denom
        if key.denominator != 1:
            return rat(0)
        return self.coeffs.get(int(key), rat(0))

    def truncate(self, order) -> "PuiseuxSeries":
        order = rat(order)
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        kept = {k: v for k, v in self.coeffs.items() if rat(k, self.denom) < order}
        return PuiseuxSeries(self.denom, kept, order, normalize=False)

    def terms(self) -> list[tuple]:
        return [(rat(k, self.denom), v) for k, v in sorted(self.coeffs.items())]

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries(1, {0: other}, self.order)
        a, b = self._aligned(other)
        order = min(a.order, b.order)
        out = dict(a.coeffs)
        for k, v in b.coeffs.items():
            out[k] = q_add(out[k], v) if k in out else v
        out = {k: v for k, v in out.items() if rat(k, a.denom) < order}
        return PuiseuxSeries(a.denom, out, order)

    def __neg__(self):
        return PuiseuxSeries(
            self.denom, {k: q_mul(-1, v) for k, v in self.coeffs.items()},
            self.order, normalize=False,
        )

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries(1, {0: other}, self.order)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return PuiseuxSeries(
                self.denom,
                {k: q_mul(v, other) for k, v in self.coeffs.items()},
                self.order,
            )
        a, b = self._aligned(other)
        # order of the product: each factor's truncation error enters shifted
        # by the other's valuation
        va, vb = a.offset, b.offset
        if va is None and vb is None:
            return PuiseuxSeries.zero(a.order + b.order, a.denom)
        if va is None:
            return PuiseuxSeries.zero(a.order + vb, a.denom)
        if vb is None:
            return PuiseuxSeries.zero(b.order + va, a.denom)
        order = min(a.order + vb, b.order + va)
        out: dict = {}
        bound_key = order * a.denom
        for k1, v1 in a.coeffs.items():
            for k2, v2 in b.coeffs.items():
                k = k1 + k2
                if k >= bound_key:
                    continue
                t = q_mul(v1, v2)
                out[k] = q_add(out[k], t) if k in out else t
        return PuiseuxSeries(a.denom, out, order)

    __rmul__ = __mul__

    def inverse(self) -> "PuiseuxSeries":
        """Multiplicative inverse of a series with nonzero leading term."""
        if not self.coeffs:
            raise ZeroDivisionError("cannot invert the zero series")
        d = self.denom
        keys = sorted(self.coeffs)
        v = keys[0]
        lead = self.coeffs[v]
        rel = {k - v: self.coeffs[k] for k in keys}
        length = int(self.order * d) - v  # relative keys known for t < length
        if length < 1:
            raise ZeroDivisionError("series order too small to determine the inverse")
        inv_lead = rat(1) / lead if not isinstance(lead, CycloNum) else lead.inverse()
        g: dict = {0: inv_lead}
        nonzero = sorted(rel)[1:]
        for t in range(1, length):
            acc = None
            for k in nonzero:
                if k > t:
                    break
                gt = g.get(t - k)
                if gt is None:
                    continue
                term = q_mul(rel[k], gt)
                acc = term if acc is None else q_add(acc, term)
            if acc is not None and not q_is_zero(acc):
                g[t] = q_mul(q_mul(-1, inv_lead), acc)
        out = {t - v: c for t, c in g.items()}
        # keys run from -v to length - v - 1, all exact: order (length - v)/d
        return PuiseuxSeries(d, out, rat(length - v, d))

    def __truediv__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        return self.first_difference(other) is None

    __hash__ = None

    def first_difference(self, other: "PuiseuxSeries"):
        """Smallest exponent below both orders where coefficients differ."""
        a, b = self._aligned(other)
        bound = min(a.order, b.order) * a.denom
        keys = sorted(set(a.coeffs) | set(b.coeffs))
        for k in keys:
            if k >= bound:
                break
            if not q_eq(a.coeffs.get(k, 0), b.coeffs.get(k, 0)):
                return rat(k, a.denom)
        return None

    def __repr__(self):
        parts = [
            f"{scalar_str(v)}*q^({rat(k, self.denom)})"
            for k, v in sorted(self.coeffs.items())[:8]
        ]
        more = " + ..." if len(self.coeffs) > 8 else ""
        return f"PuiseuxSeries({' + '.join(parts)}{more}; order<{self.order})"

    # -- numerics ----------------------------------------------------------

    def evaluate(self, q, precision_bits: int = 128):
        """Numeric value at real 0 < q < 1 via mpmath at the given precision."""
        import mpmath

        with mpmath.workprec(precision_bits + 16):
            qm = mpmath.mpf(q) if not hasattr(q, "_mpf_") else q
            w = mpmath.power(qm, mpmath.mpf(1) / self.denom)
            acc = mpmath.mpf(0)
            last = 0
            wpow = mpmath.mpf(1)
            for k in sorted(self.coeffs):
                wpow = wpow * mpmath.power(w, k - last)
                last = k
                c = self.coeffs[k]
                if isinstance(c, CycloNum):
                    from ltwist.exactnum import cyclo_embed

                    acc += cyclo_embed(c, precision_bits + 16) * wpow
                else:
                    c = rat(c)
                    acc += mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator) * wpow
            return +acc


# ---------------------------------------------------------------------------
# arithmetic-progression exponent sets and products


@dataclass(frozen=True)
class APSet:
    """Positive integers in given residue classes mod `modulus`."""

    modulus: int
    residues: frozenset

    def __contains__(self, n: int) -> bool:
        return n >= 1 and n % self.modulus in self.residues

    def up_to(self, bound: int) -> Iterable[int]:
        return (n for n in range(1, bound) if n % self.modulus in self.residues)


def ap_set(modulus: int = 1, residues=None, excluded=None) -> APSet:
    if residues is not None and excluded is not None:
        raise ValueError("give residues or excluded, not both")
    if residues is None:
        excluded = {r % modulus for r in (excluded or ())}
        residues = set(range(modulus)) - excluded
    return APSet(modulus, frozenset(r % modulus for r in residues))


def product_expand(exponents: APSet, sign: int, order: int) -> PuiseuxSeries:
    """prod_{e in set} (1 - q^e)^sign, truncated below `order`.

    Integer-exponent lattice; coefficients are exact integers.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    order = int(order)
    arr = [0] * max(order, 1)
    if order > 0:
        arr[0] = 1
    for e in exponents.up_to(order):
        if e < 1:
            raise ValueError("exponent set must have positive minimal element")
        if sign == 1:
            for n in range(order - 1, e - 1, -1):
                if arr[n - e]:
                    arr[n] -= arr[n - e]
        else:
            for n in range(e, order):
                if arr[n - e]:
                    arr[n] += arr[n - e]
    return PuiseuxSeries(1, {n: c for n, c in enumerate(arr) if c}, order)


def euler_product(order: int) -> PuiseuxSeries:
    return product_expand(ap_set(1), 1, order)


def pentagonal_sum(order: int) -> PuiseuxSeries:
    coeffs: dict = {}
    n = 0
    while True:
        hit = False
        for m in (n, -n) if n else (0,):
            e = m * (3 * m + 1) // 2
            if e < order:
                coeffs[e] = coeffs.get(e, 0) + (-1) ** (m % 2)
                hit = True
        if not hit and n > 0:
            break
        n += 1
    return PuiseuxSeries(1, coeffs, order)


def euler_check(order: int) -> bool:
    """prod (1-x^n) equals the alternating pentagonal-number sum below order."""
    return euler_product(order) == pentagonal_sum(order)


def eta_series(order) -> PuiseuxSeries:
    """x^(1/24) * prod (1 - x^n), truncated below `order`."""
    order = rat(order)
    body = euler_product(int(order) + 1)
    return PuiseuxSeries.monomial(rat(1, 24), 1, order=order + rat(1, 24)) * body


# ---------------------------------------------------------------------------
# two-variable series for the triple product


class BiSeries:
    """Series in x (truncated below x_order) and z (Laurent, |deg| <= z_bound)."""

    def __init__(self, coeffs: dict, x_order: int, z_bound: int):
        self.coeffs = {k: v for k, v in coeffs.items() if v}
        self.x_order = x_order
        self.z_bound = z_bound

    def mul_factor(self, x_exp: int, z_exp: int, scalar: int) -> "BiSeries":
        """Multiply by (1 + scalar * x^x_exp * z^z_exp) in place-ish."""
        out = dict(self.coeffs)
        for (a, b), v in self.coeffs.items():
            a2, b2 = a + x_exp, b + z_exp
            if a2 >= self.x_order or abs(b2) > self.z_bound:
                continue
            key = (a2, b2)
            out[key] = out.get(key, 0) + scalar * v
        return BiSeries(out, self.x_order, self.z_bound)

    def restrict(self, z_range: int) -> "BiSeries":
        return BiSeries(
            {k: v for k, v in self.coeffs.items() if abs(k[1]) <= z_range},
            self.x_order,
            z_range,
        )

    def __eq__(self, other) -> bool:
        if self.x_order != other.x_order or self.z_bound != other.z_bound:
            return False
        return self.coeffs == other.coeffs

    __hash__ = None


def jacobi_check(order_x: int, z_range: int) -> bool:
    """Triple product prod (1-x^{2n})(1+x^{2n-1}z)(1+x^{2n-1}/z) versus
    sum_n x^{n^2} z^n, compared below order_x and for |z-degree| <= z_range.

    Intermediate z-degrees are kept up to a buffer B with B^2 >= order_x;
    terms beyond it already exceed the x-order and cannot flow back.
    """
    if z_range < 0:
        raise ValueError("z_range must be symmetric and nonnegative")
    buffer = max(z_range, math.isqrt(order_x) + 1)
    prod = BiSeries({(0, 0): 1}, order_x, buffer)
    n = 1
    while 2 * n - 1 < order_x:
        if 2 * n < order_x:
            # (1 - x^{2n}): multiply by 1 + (-1) x^{2n} z^0
            prod = prod.mul_factor(2 * n, 0, -1)
        prod = prod.mul_factor(2 * n - 1, 1, 1)
        prod = prod.mul_factor(2 * n - 1, -1, 1)
        n += 1
    lhs = prod.restrict(z_range)
    rhs: dict = {}
    for m in range(-z_range, z_range + 1):
        if m * m < order_x:
            rhs[(m * m, m)] = 1
    return lhs == BiSeries(rhs, order_x, z_range)


# ---------------------------------------------------------------------------
# specializations and theta functions with characteristics


def specialize_314(k: int, j: int, order: int) -> tuple[PuiseuxSeries, PuiseuxSeries]:
    """Product prod (1-x^{Nn})(1-x^{Nn-j})(1-x^{Nn-(N-j)}) with N = 2k+1,
    against the alternating sum with exponents N n(n+1)/2 - j n.

    These are the specializations x -> x^{N/2}, z -> -x^{(N-2j)/2} of the
    triple product; both sides live on the integer lattice.
    """
    if not 1 <= j <= k:
        raise ValueError("need 1 <= j <= k")
    N = 2 * k + 1
    lhs = product_expand(ap_set(N, residues={0, (-j) % N, j % N}), 1, order)
    coeffs: dict = {}
    n = 0
    while True:
        added = False
        for m in (n, -n) if n else (0,):
            e = N * m * (m + 1) // 2 - j * m
            if 0 <= e < order:
                coeffs[e] = coeffs.get(e, 0) + (-1) ** (m % 2)
                added = True
        if not added and n > 0:
            break
        n += 1
    return lhs, PuiseuxSeries(1, coeffs, order)


def reduced_theta(eps, M: int, order) -> tuple[PuiseuxSeries, CycloNum]:
    """Lattice sum sum_n (-1)^n q^{(M/2)(n+eps/2)^2} and its constant phase.

    The phase e^{i pi eps/2} of the characteristic-[eps, 1] theta series at
    z = 0 and lattice scale M is returned separately as an exact root of
    unity; the series itself has rational coefficients.
    """
    eps = rat(eps)
    if not (0 < eps < 2):
        raise ValueError("characteristic eps must lie in (0, 2)")
    order = rat(order)
    p, q = int(eps.numerator), int(eps.denominator)
    denom = 8 * M * q * q
    coeffs: dict = {}
    bound = order
    n = 0
    while True:
        added = False
        for m in (n, -n) if n else (0,):
            e_num = M * M * (2 * m * q + p) ** 2  # exponent * denom
            if rat(e_num, denom) < bound:
                sgn = (-1) ** (m % 2)
                coeffs[e_num] = coeffs.get(e_num, 0) + sgn
                added = True
        if not added and n > 0:
            break
        n += 1
    phase = zeta(4 * q) ** p
    return PuiseuxSeries(denom, coeffs, order), phase


def eta_theta_check(order: int) -> bool:
    """The eta series equals the phase-stripped reduced theta of
    characteristic 1/3 at lattice scale 3, with the two constant phases
    cancelling exactly."""
    theta, phase = reduced_theta(rat(1, 3), 3, rat(order))
    phase_check = zeta(12).inverse() * phase  # e^{-pi i/6} * e^{pi i/6}
    return phase_check == 1 and eta_series(rat(order)) == theta


def verify_316(k: int, j: int, order: int) -> bool:
    """Exact identity between the restricted product
    prod_{s != 0, +-j mod N} 1/(1 - x^{N n - s}) and the theta quotient with
    monomial prefactor x^{1/24 - (N-2j)^2/(8N)}, phases cancelling exactly."""
    if not 1 <= j <= k:
        raise ValueError("need 1 <= j <= k")
    N = 2 * k + 1
    p = N - 2 * j  # = 2(k - j) + 1
    lhs = product_expand(ap_set(N, excluded={0, j, N - j}), -1, order)
    margin = rat(order) + 2
    theta_num, phase_num = reduced_theta(rat(p, N), N, margin)
    theta_den, phase_den = reduced_theta(rat(1, 3), 3, margin)
    shift = rat(1, 24) - rat(p * p, 8 * N)
    quotient = theta_num / theta_den
    rhs = PuiseuxSeries.monomial(shift, 1, order=rat(order) - min(shift, 0) + 1) * quotient
    # explicit constant: e^{pi i/6 - pi i p/(2N)}; total phase must be 1
    phase_const = zeta(12) * zeta(4 * N) ** (-p)
    total_phase = phase_const * phase_num * phase_den.inverse()
    if total_phase != 1:
        return False
    bound = min(rat(order), lhs.order, rhs.order)
    return lhs.truncate(bound) == rhs.truncate(bound)


def minimal_char(k: int, i: int, order: int) -> PuiseuxSeries:
    """Character series q^{h - c/24} prod_{n != 0, +-i mod 2k+1} 1/(1 - q^n)
    for the weight-(1,i) member of the central-charge family c = 1 -
    6(2k-1)^2/(4k+2); prefactor exponent computed exactly."""
    if k < 2 or not 1 <= i <= k:
        raise ValueError("need k >= 2 and 1 <= i <= k")
    N = 2 * k + 1
    c = central_charge(k)
    h = highest_weight(k, i)
    shift = h - c / 24
    body = product_expand(ap_set(N, excluded={0, i, N - i}), -1, order)
    return PuiseuxSeries.monomial(shift, 1, order=rat(order) + shift) * body


def central_charge(k: int):
    return rat(1) - rat(6 * (2 * k - 1) ** 2, 4 * k + 2)


def highest_weight(k: int, i: int):
    return rat((2 * (k - i) + 1) ** 2 - (2 * k - 1) ** 2, 8 * (2 * k + 1))


# ---------------------------------------------------------------------------
# numeric modular check


def modular_s_check(
    k: int,
    tau_samples=None,
    order: int = 400,
    precision_bits: int = 256,
):
    """Numeric span-invariance of the k character series under tau -> -1/tau.

    Evaluates the characters at >= k+1 points on the imaginary axis, solves
    the k x k change of basis on the first k, and returns the maximum
    residual on the held-out points.  Raises on an ill-conditioned solve and
    when the series tails are not below 2^(-precision/2).

    Invariance under tau -> tau + 2k+1 needs no numeric check: every
    exponent lies in h - c/24 + Z and (2k+1)(h - c/24) differs from an
    integer by a common constant across the family, so the span is fixed by
    that shift term by term.
    """
    import mpmath

    if tau_samples is None:
        tau_samples = [0.8 + 0.6 * a / k for a in range(k + 1)]
    ts = [float(getattr(t, "imag", t) or t) for t in tau_samples]
    ts = [abs(t) for t in ts]
    if len(ts) < k + 1:
        raise ValueError("need at least k+1 sample points")
    chars = [minimal_char(k, i, order) for i in range(1, k + 1)]
    with mpmath.workprec(precision_bits + 32):
        two_pi = 2 * mpmath.pi

        def q_at(t):
            return mpmath.e ** (-two_pi * t)

        def q_at_inv(t):
            # reciprocal taken at working precision, not in float arithmetic
            return mpmath.e ** (-two_pi / mpmath.mpf(t))

        # tail bound: compare evaluations at consecutive truncation orders
        t_min = min(min(ts), min(1 / t for t in ts))
        tail = mpmath.mpf(0)
        for ch in chars:
            full = ch.evaluate(q_at(t_min), precision_bits)
            less = ch.truncate(ch.order - 1).evaluate(q_at(t_min), precision_bits)
            tail = max(tail, abs(full - less))
        if tail > mpmath.mpf(2) ** (-(precision_bits // 2)):
            raise ValueError(
                f"order {order} leaves a series tail {mpmath.nstr(tail, 5)}; increase it"
            )

        vals = mpmath.matrix(k, k)
        for a in range(k):
            for i in range(k):
                vals[a, i] = chars[i].evaluate(q_at(ts[a]), precision_bits)
        transformed = mpmath.matrix(k, k)
        for a in range(k):
            for i in range(k):
                transformed[a, i] = chars[i].evaluate(q_at_inv(ts[a]), precision_bits)
        norm = mpmath.mnorm(vals, 1)
        try:
            inv = vals**-1
        except ZeroDivisionError as exc:
            raise ArithmeticError("ill-conditioned sample matrix") from exc
        cond = norm * mpmath.mnorm(inv, 1)
        if cond > mpmath.mpf(2) ** (precision_bits // 2):
            raise ArithmeticError(f"ill-conditioned solve, condition ~ {mpmath.nstr(cond, 5)}")
        # S[i, j]: ch_i(-1/tau) = sum_j S[i, j] ch_j(tau), solved on the first k points
        S = mpmath.matrix(k, k)
        for i in range(k):
            rhs = mpmath.matrix([transformed[a, i] for a in range(k)])
            col = mpmath.lu_solve(vals, rhs)
            for jj in range(k):
                S[i, jj] = col[jj]
        residual = mpmath.mpf(0)
        for t in ts[k:]:
            v = [chars[i].evaluate(q_at(t), precision_bits) for i in range(k)]
            w = [chars[i].evaluate(q_at_inv(t), precision_bits) for i in range(k)]
            for i in range(k):
                pred = mpmath.fsum(S[i, jj] * v[jj] for jj in range(k))
                residual = max(residual, abs(pred - w[i]))
        return float(residual), S

"""Complex q-special functions.

Building blocks used by every other module: finite and infinite q-Pochhammer
symbols (including multi-base products such as (z; p^2, q^4)_oo), the q-theta
function Theta_q(z) = (z, q/z, q; q)_oo, the q-exponential and its entire
inverse, basic hypergeometric series r_phi_s with a recurrence-based
continuation for 2phi1, and the specific scalar prefactors of the 6-vertex,
8-vertex and face-model R-matrices.

All evaluation is double-precision complex.  Infinite products stop when the
factor stays within ``tail_tolerance`` of 1 for three consecutive indices
(shells, in the multi-base case); series stop when the term stays below
``tail_tolerance`` relative to the partial sum for three consecutive terms.
Every converged value is returned as a :class:`QValue` carrying a crude tail
estimate.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, DivergentBase, PoleHit, ZeroArgument

_STREAK = 3  # consecutive quiet factors/terms required before stopping


@dataclass(frozen=True)
class TruncationPolicy:
    """Cutoff controls for q-series and q-products.

    max_terms is the target working length, hard_cap the absolute safety
    limit.  Evaluation raises CapExceeded when hard_cap is reached before the
    tail tolerance is met.
    """

    max_terms: int = 512
    tail_tolerance: float = 1e-15
    hard_cap: int = 20000

    def __post_init__(self):
        if self.max_terms <= 0 or self.hard_cap <= 0:
            raise ValueError("max_terms and hard_cap must be positive")
        if self.max_terms > self.hard_cap:
            raise ValueError("max_terms must not exceed hard_cap")
        if self.tail_tolerance < 0:
            raise ValueError("tail_tolerance must be nonnegative")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class QValue:
    """A converged value together with a truncation-error estimate."""

    value: complex
    tail_bound: float

    def __complex__(self) -> complex:
        return complex(self.value)


def qnum(n: int, q: complex) -> complex:
    """q-integer [n]_q = (q^n - q^-n)/(q - q^-1)."""
    if q == 1:
        return complex(n)
    return (q**n - q ** (-n)) / (q - 1.0 / q)


def frac_pow(x: complex, num: int, den: int) -> complex:
    """Principal-branch fractional power x^(num/den), argument in (-pi, pi].

    Downstream identities mix p^(1/2), p^(1/8), w^(1/4), ...; computing all
    of them through this single principal log keeps the branch choices
    consistent within a parameter set.
    """
    if x == 0:
        if num > 0:
            return 0.0
        raise ZeroArgument("zero base with nonpositive fractional power")
    return cmath.exp(cmath.log(x) * num / den)


def qpoch_finite(a: complex, q: complex, k: int) -> complex:
    """Finite q-Pochhammer (a;q)_k = prod_{l=0}^{k-1} (1 - a q^l)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = 1.0 + 0.0j
    f = complex(a)
    for _ in range(k):
        out *= 1.0 - f
        f *= q
    return out


def qpoch_inf(z_list, base_list, policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """Infinite multi-base product (z_1,..,z_p; q_1,..,q_n)_oo.

    prod_k prod_{l_1..l_n >= 0} (1 - z_k q_1^l_1 ... q_n^l_n), all |q_i| < 1.
    Multi-index lattices are enumerated by diagonal shells l_1+...+l_n = s;
    the product stops after three consecutive quiet shells.
    """
    zs = [complex(z) for z in np.atleast_1d(z_list)]
    bases = [complex(b) for b in np.atleast_1d(base_list)]
    if not bases:
        raise ValueError("need at least one base")
    for b in bases:
        if abs(b) >= 1.0:
            raise DivergentBase(f"|base| >= 1: {b!r}")

    value = 1.0 + 0.0j
    streak = 0
    dev_hist = []
    shell = 0
    factors_seen = 0
    while True:
        shell_dev = 0.0
        for expos in _shell_indices(len(bases), shell):
            mono = 1.0 + 0.0j
            for b, e in zip(bases, expos):
                mono *= b**e
            for z in zs:
                f = 1.0 - z * mono
                if f == 0:
                    return QValue(0.0 + 0.0j, 0.0)
                value *= f
                shell_dev = max(shell_dev, abs(z * mono))
                factors_seen += 1
        dev_hist.append(shell_dev)
        streak = streak + 1 if shell_dev < policy.tail_tolerance else 0
        if streak >= _STREAK:
            break
        shell += 1
        if factors_seen > policy.hard_cap:
            raise CapExceeded(
                f"q-product did not converge within {policy.hard_cap} factors"
            )
    tail = abs(value) * (sum(dev_hist[-_STREAK:]) + policy.tail_tolerance)
    return QValue(value, tail)


def _shell_indices(n: int, s: int):
    """All n-tuples of nonnegative integers summing to s."""
    if n == 1:
        yield (s,)
        return
    for first in range(s + 1):
        for rest in _shell_indices(n - 1, s - first):
            yield (first,) + rest


def theta_q(z: complex, q: complex, policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """q-theta function Theta_q(z) = (z, q/z, q; q)_oo."""
    if z == 0:
        raise ZeroArgument("Theta_q requires z != 0")
    if not 0 < abs(q) < 1:
        raise DivergentBase("Theta_q requires 0 < |q| < 1")
    return qpoch_inf([z, q / z, q], [q], policy)


def exp_q(z: complex, q: complex, policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """q-exponential exp_q(z) = 1 / ((1-q^2) z; q^2)_oo (meromorphic in z)."""
    den = qpoch_inf([(1.0 - q * q) * z], [q * q], policy)
    if abs(den.value) < 1e-300:
        raise PoleHit("exp_q pole: denominator product vanished")
    v = 1.0 / den.value
    return QValue(v, abs(v) * den.tail_bound / max(abs(den.value), 1e-300))


def exp_q_inv(z: complex, q: complex, policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """Entire inverse of the q-exponential: ((1-q^2) z; q^2)_oo."""
    return qpoch_inf([(1.0 - q * q) * z], [q * q], policy)


def exp_q_series(z: complex, q: complex, policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """exp_q by its defining series sum_n z^n/(n)_q! with (n)_q = q^(n-1)[n]_q.

    Independent cross-check of the product form.
    """
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    streak = 0
    n = 0
    while True:
        n += 1
        nq = q ** (n - 1) * qnum(n, q)
        if nq == 0:
            raise PoleHit("(n)_q vanished in exp_q series")
        term *= z / nq
        total += term
        quiet = abs(term) < policy.tail_tolerance * max(abs(total), 1.0)
        streak = streak + 1 if quiet else 0
        if streak >= _STREAK:
            break
        if n > policy.hard_cap:
            raise CapExceeded("exp_q series did not converge")
    return QValue(total, abs(term) * _STREAK + policy.tail_tolerance * abs(total))


def exp_q_matrix(mat: np.ndarray, q: complex, policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Matrix q-exponential exp_q(A) = sum_n A^n/(n)_q!.

    Terminates exactly on nilpotent arguments (the only use downstream).
    """
    a = np.asarray(mat, dtype=complex)
    total = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    n = 0
    while True:
        n += 1
        nq = q ** (n - 1) * qnum(n, q)
        term = term @ a / nq
        norm = np.linalg.norm(term)
        if norm == 0.0:
            break
        total += term
        if norm < policy.tail_tolerance * max(np.linalg.norm(total), 1.0):
            break
        if n > policy.hard_cap:
            raise CapExceeded("matrix q-exponential did not converge")
    return total


def basic_hypergeometric(a_list, b_list, q: complex, z: complex,
                         policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """Basic hypergeometric series r_phi_s(a_1..a_r; b_1..b_s; q; z).

    sum_k  [(a_1;q)_k ... (a_r;q)_k] / [(q;q)_k (b_1;q)_k ... (b_s;q)_k]
           * [(-1)^k q^(k(k-1)/2)]^(1+s-r) * z^k.
    """
    a_list = [complex(a) for a in np.atleast_1d(a_list)] if np.size(a_list) else []
    b_list = [complex(b) for b in np.atleast_1d(b_list)] if np.size(b_list) else []
    for b in b_list:
        _check_not_neg_q_power(b, q)
    d = 1 + len(b_list) - len(a_list)
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    streak = 0
    k = 0
    qk = 1.0 + 0.0j  # q^k
    while True:
        # ratio term_{k+1}/term_k
        num = 1.0 + 0.0j
        for a in a_list:
            num *= 1.0 - a * qk
        den = 1.0 - q * qk
        for b in b_list:
            den *= 1.0 - b * qk
        if den == 0:
            raise PoleHit("vanishing Pochhammer denominator in r_phi_s")
        sign = (-1.0) ** d * qk**d  # ratio of the [(-1)^k q^(k choose 2)]^d factor
        term = term * num / den * sign * z
        total += term
        k += 1
        qk *= q
        quiet = abs(term) < policy.tail_tolerance * max(abs(total), 1.0)
        streak = streak + 1 if quiet else 0
        if streak >= _STREAK:
            break
        if k > policy.hard_cap:
            raise CapExceeded("r_phi_s did not converge (argument outside the "
                              "convergence domain?)")
    return QValue(total, abs(term) * _STREAK + policy.tail_tolerance * abs(total))


def _check_not_neg_q_power(b: complex, q: complex, tol: float = 1e-12) -> None:
    """Reject lower parameters of the form q^-m, m >= 0 (series poles)."""
    scale = 1.0 + 0.0j
    for _ in range(256):
        if abs(b * scale - 1.0) < tol:
            raise PoleHit(f"lower parameter {b!r} is a nonpositive q-power")
        scale *= q
        if abs(scale) < tol / max(abs(b), 1e-30):
            break


def phi21(a: complex, b: complex, c: complex, q: complex, z: complex,
          policy: TruncationPolicy = DEFAULT_POLICY, _depth: int = 0) -> complex:
    """2phi1(a,b;c;q;z), continued outside |z|<1 via its q-difference equation.

    For |z| beyond the series domain the three-term relation
        (1-z) f(z) + [(a+b)z - c/q - 1] f(qz) + (c/q - ab z) f(q^2 z) = 0
    is used downward: f(qz), f(q^2 z) have smaller arguments, so a few steps
    reach the convergent region.
    """
    if abs(z) < 0.9:
        return basic_hypergeometric([a, b], [c], q, z, policy).value
    if _depth > 512:
        raise CapExceeded("2phi1 continuation recursion too deep")
    if abs(1.0 - z) < 1e-13:
        raise PoleHit("2phi1 continuation hit z = 1")
    f1 = phi21(a, b, c, q, q * z, policy, _depth + 1)
    f2 = phi21(a, b, c, q, q * q * z, policy, _depth + 1)
    return -(((a + b) * z - c / q - 1.0) * f1 + (c / q - a * b * z) * f2) / (1.0 - z)


def connection_formula_residual(a: complex, b: complex, c: complex, q: complex,
                                z: complex,
                                policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Relative defect of the 2phi1 connection formula at one parameter point.

    Left side: 2phi1(a,b;c;q;z).  Right side: the two-term theta-weighted
    combination of 2phi1's in q c/(a b z).  Both sides are evaluated by
    independent series summation (with recurrence continuation where the
    plain series diverges); the residual is |L-R|/max(|L|,|R|,1).
    """
    if abs(a - b) < 1e-9:
        raise PoleHit("connection formula degenerates at a = b")
    theta_den = theta_q(q / z, q, policy).value
    if abs(theta_den) < 1e-12:
        raise PoleHit("z lies on the zero set of Theta_q(q/z)")

    def _half(u: complex, v: complex) -> complex:
        pref_num = qpoch_inf([v, c / u], [q], policy).value
        pref_den = qpoch_inf([c, v / u], [q], policy).value
        if abs(pref_den) < 1e-12:
            raise PoleHit("degenerate coefficient in connection formula")
        th = theta_q(q / (u * z), q, policy).value
        tail = phi21(u, q * u / c, q * u / v, q, q * c / (u * v * z), policy)
        return pref_num / pref_den * th / theta_den * tail

    lhs = phi21(a, b, c, q, z, policy)
    rhs = _half(a, b) + _half(b, a)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)


def scalar_f6v(u: complex, q: complex, policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """6-vertex scalar f(u) = (u, q^4 u; q^4)_oo / (q^2 u; q^4)_oo^2."""
    num = qpoch_inf([u, q**4 * u], [q**4], policy)
    den = qpoch_inf([q * q * u], [q**4], policy)
    if abs(den.value) < 1e-300:
        raise PoleHit("f(u) pole")
    v = num.value / den.value**2
    return QValue(v, abs(v) * (num.tail_bound / max(abs(num.value), 1e-300)
                               + 2 * den.tail_bound / max(abs(den.value), 1e-300)))


def scalar_f6v_expsum(u: complex, q: complex,
                      policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """f(u) by its other face: exp[ sum_n (q^n-q^-n)/(q^n+q^-n) u^n/n ]."""
    total = 0.0 + 0.0j
    streak = 0
    n = 0
    un = 1.0 + 0.0j
    while True:
        n += 1
        un *= u
        qn = q**n
        term = (qn - 1.0 / qn) / (qn + 1.0 / qn) * un / n
        total += term
        quiet = abs(term) < policy.tail_tolerance * max(abs(total), 1.0)
        streak = streak + 1 if quiet else 0
        if streak >= _STREAK:
            break
        if n > policy.hard_cap:
            raise CapExceeded("f(u) exp-sum did not converge (need |u| < 1)")
    v = cmath.exp(total)
    return QValue(v, abs(v) * (abs(term) * _STREAK + policy.tail_tolerance))


def scalar_rho8v(z: complex, p: complex, q: complex,
                 policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """8-vertex scalar rho(z;p), a ratio of two-base infinite products.

    (z, q^4 z, p^2 q^2/z, p^2 q^2/z; p^2, q^4)_oo
      / (q^2 z, q^2 z, p^2/z, p^2 q^4/z; p^2, q^4)_oo.
    """
    zi = 1.0 / z
    num = qpoch_inf([z, q**4 * z, p * p * q * q * zi, p * p * q * q * zi],
                    [p * p, q**4], policy)
    den = qpoch_inf([q * q * z, q * q * z, p * p * zi, p * p * q**4 * zi],
                    [p * p, q**4], policy)
    if abs(den.value) < 1e-300:
        raise PoleHit("rho(z;p) pole")
    v = num.value / den.value
    return QValue(v, abs(v) * (num.tail_bound / max(abs(num.value), 1e-300)
                               + den.tail_bound / max(abs(den.value), 1e-300)))


def scalar_phi_twist(z: complex, p: complex, q: complex,
                     policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """Twist scalar phi(z;p) = (p^2 z, q^4 p^2 z; q^4, p^2)_oo / (q^2 p^2 z; q^4, p^2)_oo^2."""
    num = qpoch_inf([p * p * z, q**4 * p * p * z], [q**4, p * p], policy)
    den = qpoch_inf([q * q * p * p * z], [q**4, p * p], policy)
    if abs(den.value) < 1e-300:
        raise PoleHit("phi(z;p) pole")
    v = num.value / den.value**2
    return QValue(v, abs(v) * (num.tail_bound / max(abs(num.value), 1e-300)
                               + 2 * den.tail_bound / max(abs(den.value), 1e-300)))


def scalar_fq_hexagon(z: complex, q: complex, r: int,
                      policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """Gauge scalar f_q(z) for rank r, via its resummed product form.

    f_q(z) = (s q^(2(r+1)) z; Q)_oo / (s q^(2r) z; Q)_oo,
    with Q = q^(2(r+1)) and s = (-1)^(r+1).  Equals the exponential sum
    exp[ sum_k (-1)^(k(r+1)) q^(kr) [k]_q z^k / (k [k(r+1)]_q) ] where that
    series converges; the product form is entire in z.
    """
    big_q = q ** (2 * (r + 1))
    s = (-1.0) ** (r + 1)
    num = qpoch_inf([s * big_q * z], [big_q], policy)
    den = qpoch_inf([s * q ** (2 * r) * z], [big_q], policy)
    if abs(den.value) < 1e-300:
        raise PoleHit("f_q(z) pole")
    v = num.value / den.value
    return QValue(v, abs(v) * (num.tail_bound / max(abs(num.value), 1e-300)
                               + den.tail_bound / max(abs(den.value), 1e-300)))


def scalar_fq_hexagon_expsum(z: complex, q: complex, r: int,
                             policy: TruncationPolicy = DEFAULT_POLICY) -> QValue:
    """f_q(z) by direct summation of its exponential series (cross-check)."""
    total = 0.0 + 0.0j
    streak = 0
    k = 0
    zk = 1.0 + 0.0j
    while True:
        k += 1
        zk *= z
        term = ((-1.0) ** (k * (r + 1)) * q ** (k * r) * qnum(k, q)
                / (k * qnum(k * (r + 1), q)) * zk)
        total += term
        quiet = abs(term) < policy.tail_tolerance * max(abs(total), 1.0)
        streak = streak + 1 if quiet else 0
        if streak >= _STREAK:
            break
        if k > policy.hard_cap:
            raise CapExceeded("f_q exp-sum did not converge")
    v = cmath.exp(total)
    return QValue(v, abs(v) * (abs(term) * _STREAK + policy.tail_tolerance))

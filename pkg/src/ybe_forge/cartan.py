"""Exact finite matrix data of the twisted translation datum for A_r^(1).

All matrices act on C^(r+2) with basis ordered (0, 1, ..., r, d); entries are
exact ``Fraction``s held in numpy object arrays, so every algebraic identity
below is checked with zero tolerance.  Y is the basic rotation e_j -> e_{j-1
mod r+1} on the first r+1 coordinates; from it are built the extended Cartan
matrix, the rotation matrix of the diagram automorphism, the projector onto
the root-lattice part, and the two quasi-inverses that solve the gauge
constraint for the Cartan twist coefficients.

The q-dependent coefficients c_ij^(n) that weight the imaginary-root part of
the universal R-matrix live here too (both closed forms).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import NotCoprime
from .qspecial import qnum

F0 = Fraction(0)
F1 = Fraction(1)


def fr_zeros(n: int, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    out = np.empty((n, m), dtype=object)
    out[:] = F0
    return out


def fr_eye(n: int) -> np.ndarray:
    out = fr_zeros(n)
    for i in range(n):
        out[i, i] = F1
    return out


def to_float(mat: np.ndarray) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in mat], dtype=float)


@dataclass(frozen=True)
class CartanData:
    """All rotation/projector/twist matrices for rank r and rotation step rot."""

    r: int
    rot: int
    cal_a: np.ndarray        # extended Cartan matrix with the two d-corners
    abar: np.ndarray         # affine Cartan matrix, zero d row/column
    y: np.ndarray            # basic rotation on the first r+1 coordinates
    theta_plus: np.ndarray   # matrix of the diagram rotation on the zeta basis
    v: np.ndarray            # d-row of theta_plus, as an (r+2)-vector
    t: np.ndarray            # quasi-inverse of abar
    pi: np.ndarray           # orthogonal projector, kernel span(w, kappa_d)
    omega_rot: np.ndarray    # quasi-inverse of (1 - Y^rot)
    pi_rot: np.ndarray       # projector commuting with theta_plus
    s1: np.ndarray           # chosen twist coefficient matrix
    s0: np.ndarray           # its preimage under the rotation


def _mod(k: int, m: int) -> int:
    return k % m


def build_cartan_data(r: int, rot: int = 1) -> CartanData:
    """Construct all matrices for rank r >= 1 and rotation step rot.

    Requires gcd(rot, r+1) = 1, else the rotation has invariant sub-diagrams
    and no vertex-type datum exists.
    """
    if r < 1:
        raise ValueError("rank must be >= 1")
    if not 1 <= rot <= r:
        raise NotCoprime(f"rotation step {rot} outside [1, {r}]")
    if gcd(rot, r + 1) != 1:
        raise NotCoprime(f"gcd({rot}, {r + 1}) != 1")

    n = r + 2
    d = r + 1  # index of the grading coordinate

    y = fr_zeros(n)
    for j in range(r + 1):
        y[_mod(j - 1, r + 1), j] = F1

    p_top = fr_zeros(n)
    for i in range(r + 1):
        p_top[i, i] = F1

    abar = 2 * p_top - y - y.T

    cal_a = abar.copy()
    cal_a[d, 0] += F1
    cal_a[0, d] += F1

    y_rot = fr_eye(n)
    for _ in range(rot):
        y_rot = y_rot @ y

    # v_j = (j(r+1-j) - |j-rot|(r+1-|j-rot|)) / (2(r+1)),  |.| = mod r+1
    v = np.empty(n, dtype=object)
    v[:] = F0
    for j in range(r + 1):
        jm = _mod(j - rot, r + 1)
        v[j] = Fraction(j * (r + 1 - j) - jm * (r + 1 - jm), 2 * (r + 1))

    theta_plus = y_rot.copy()
    theta_plus[d, d] += F1
    for j in range(n):
        theta_plus[d, j] += v[j]

    t = fr_zeros(n)
    y_pow = fr_eye(n)
    for l in range(1, r + 1):
        y_pow = y_pow @ y
        t = t + Fraction(-l * (r + 1 - l), 2 * (r + 1)) * y_pow

    w = np.empty(n, dtype=object)
    w[:] = F0
    for i in range(r + 1):
        w[i] = F1
    pi = p_top - Fraction(1, r + 1) * np.outer(w, w)

    omega_rot = fr_zeros(n)
    y_rot_pow = fr_eye(n)
    for l in range(1, r + 1):
        y_rot_pow = y_rot_pow @ y_rot
        omega_rot = omega_rot + Fraction(-l, r + 1) * y_rot_pow

    pi_rot = pi - np.outer(_unit(n, d), v) @ omega_rot

    kappad = _unit(n, d)

    # Solve the twist-coefficient constraint (1 - theta_plus) S0 = cal_a + Phi
    # through the quasi-inverse, then fix the kernel directions
    # {w.tw, kd.tw, w.kd, kd.kd} so that cal_a + S1 + tS1 = 0 holds exactly,
    # with the antisymmetric split pinned by the explicit rot = 1 form.
    phi = Fraction(-1, r + 1) * (np.outer(kappad, w) + np.outer(w, kappad))
    omega_full = omega_rot - np.outer(kappad, v) @ (omega_rot @ omega_rot)
    s0 = omega_full @ (cal_a + phi)
    s1 = theta_plus @ s0
    resid = cal_a + s1 + s1.T
    if any(resid[i, j] != resid[0, 0] for i in range(r + 1) for j in range(r + 1)) \
            or any(resid[d, j] != resid[d, 0] or resid[j, d] != resid[d, 0]
                   for j in range(r + 1)):
        raise AssertionError("twist-coefficient residue left the gauge kernel")
    split = Fraction(r - 1, 2 * (r + 1))
    corr = (Fraction(-1, 2) * resid[0, 0] * np.outer(w, w)
            - (resid[d, 0] + split) * np.outer(kappad, w)
            + split * np.outer(w, kappad)
            + Fraction(-1, 2) * resid[d, d] * np.outer(kappad, kappad))
    s0 = s0 + corr  # the kernel directions are theta_plus-invariant
    s1 = s1 + corr

    return CartanData(r=r, rot=rot, cal_a=cal_a, abar=abar, y=y,
                      theta_plus=theta_plus, v=v, t=t, pi=pi,
                      omega_rot=omega_rot, pi_rot=pi_rot, s1=s1, s0=s0)


def _unit(n: int, i: int) -> np.ndarray:
    out = np.empty(n, dtype=object)
    out[:] = F0
    out[i] = F1
    return out


def expression_s1_rot1(r: int) -> np.ndarray:
    """The rot = 1 twist coefficient matrix written out entry by entry.

    - sum_i zeta^i x (zeta^i - zeta^(i+1))
    + sum_i (i/(r+1)) (zeta^i x c - c x zeta^(i+1))
    - (1/(2(r+1))) (varpi x c + c x varpi),
    in the (0..r, d) matrix basis with c the d-coordinate and
    varpi = sum of the first r+1 coordinates.
    """
    n = r + 2
    d = r + 1
    s = fr_zeros(n)
    for i in range(r + 1):
        ip = _mod(i + 1, r + 1)
        s[i, i] -= F1
        s[i, ip] += F1
        s[i, d] += Fraction(i, r + 1)
        s[d, ip] -= Fraction(i, r + 1)
    for i in range(r + 1):
        s[i, d] -= Fraction(1, 2 * (r + 1))
        s[d, i] -= Fraction(1, 2 * (r + 1))
    return s


def chi_rot(u: int, r: int, rot: int = 1) -> int:
    """Indicator -( 2|u a'| - |(u+1) a'| - |(u-1) a'| )/(r+1) in {-1, 0, 1}.

    a' is the inverse of rot modulo r+1 and |.| the residue in {0..r}.
    Periodic in u with period r+1.
    """
    if gcd(rot, r + 1) != 1:
        raise NotCoprime(f"gcd({rot}, {r + 1}) != 1")
    rot_inv = pow(rot, -1, r + 1)
    val = Fraction(-(2 * _mod(u * rot_inv, r + 1)
                     - _mod((u + 1) * rot_inv, r + 1)
                     - _mod((u - 1) * rot_inv, r + 1)), r + 1)
    if val.denominator != 1 or val not in (-1, 0, 1):
        raise AssertionError(f"chi({u}) = {val} outside {{-1,0,1}}")
    return int(val)


def rotation_char_matrix(r: int, rot: int = 1) -> np.ndarray:
    """sum_u chi(u) Y^(u+rot), the rotation part of the twist coefficients."""
    data = build_cartan_data(r, rot)
    n = r + 2
    out = fr_zeros(n)
    for u in range(r + 1):
        c = chi_rot(u, r, rot)
        if c == 0:
            continue
        y_pow = fr_eye(n)
        for _ in range(u + rot):  # literal power: Y^(r+1) is not the identity
            y_pow = y_pow @ data.y
        out = out + c * y_pow
    return out


def atilde(r: int, q: complex) -> np.ndarray:
    """Tridiagonal r x r matrix with q + 1/q on the diagonal and -1 beside it."""
    m = np.zeros((r, r), dtype=complex)
    for i in range(r):
        m[i, i] = q + 1.0 / q
        if i + 1 < r:
            m[i, i + 1] = -1.0
            m[i + 1, i] = -1.0
    return m


def atilde_inv(r: int, q: complex) -> np.ndarray:
    """Closed-form inverse: entries [min(i,j)]_q [r+1-max(i,j)]_q / [r+1]_q."""
    m = np.zeros((r, r), dtype=complex)
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            m[i - 1, j - 1] = (qnum(min(i, j), q) * qnum(r + 1 - max(i, j), q)
                               / qnum(r + 1, q))
    return m


def c_coeff(i: int, j: int, n: int, r: int, q: complex) -> complex:
    """Imaginary-root pairing coefficient c_ij^(n), 1 <= i,j <= r, n >= 1.

    Inverse of the matrix ([n (alpha_i, alpha_j)]_q / n)_{ij}; the closed form
    is n [min(i,j)]_{q^n} [r+1-max(i,j)]_{q^n} / ([n]_q [r+1]_{q^n}).
    """
    if not (1 <= i <= r and 1 <= j <= r):
        raise ValueError(f"need 1 <= i,j <= r, got ({i},{j}) at r={r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    qn = q**n
    return (n * qnum(min(i, j), qn) * qnum(r + 1 - max(i, j), qn)
            / (qnum(n, q) * qnum(r + 1, qn)))


def c_coeff_alt(i: int, j: int, n: int, r: int, q: complex) -> complex:
    """Same coefficient via the all-base-q form.

    (n/[n]_q^2) [n min(i,j)]_q [n(r+1-max(i,j))]_q / [n(r+1)]_q.
    """
    if not (1 <= i <= r and 1 <= j <= r):
        raise ValueError(f"need 1 <= i,j <= r, got ({i},{j}) at r={r}")
    return (n / qnum(n, q) ** 2 * qnum(n * min(i, j), q)
            * qnum(n * (r + 1 - max(i, j)), q) / qnum(n * (r + 1), q))


def pairing_matrix(n: int, r: int, q: complex) -> np.ndarray:
    """The matrix ([n (alpha_i, alpha_j)]_q / n)_{i,j=1..r} that c_ij^(n) inverts."""
    m = np.zeros((r, r), dtype=complex)
    for i in range(r):
        for j in range(r):
            aij = 2 if i == j else (-1 if abs(i - j) == 1 else 0)
            m[i, j] = qnum(n * aij, q) / n if aij else 0.0
    return m

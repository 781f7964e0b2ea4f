"""Trigonometric, elliptic and face-type R-matrices on C^2 x C^2.

The three solutions and the twist connecting them, all at the level of
4 x 4 matrices with their full scalar prefactors:

* the trigonometric six-vertex matrix, both in closed form and as the
  truncated ordered product over root contributions (Cartan factor times
  nilpotent real-root factors times the diagonal imaginary-root exponential);
* the elliptic eight-vertex matrix with theta-quotient entries;
* the face (height-model) matrix with its extra dynamical parameter w;
* the dynamical twist, as a closed hypergeometric form and as the truncated
  conjugation-dilation product, and the reconstruction of the face matrix by
  twist conjugation;
* face Boltzmann weights and the residuals of the quantum (dynamical)
  Yang-Baxter identities, including the star-triangle form written purely in
  terms of weights.

Conventions: spectral arguments are attached to legs (z1, z2, ...); ratio
arguments are z = z1/z2.  Dynamical shifts w -> w q^(+/-1) are realized as
block sums over leg eigenprojectors (see tensor.shift_leg).
"""

from __future__ import annotations

import numpy as np

from .errors import InadmissibleHeights, PoleHit
from .qspecial import (DEFAULT_POLICY, TruncationPolicy, frac_pow, phi21,
                       qnum, qpoch_inf, scalar_f6v, scalar_phi_twist,
                       scalar_rho8v, theta_q)
from .tensor import (DynamicalOperator, embed, eye, kron, rel_residual,
                     shift_leg, swap_legs, unit_matrix)

_POLE_EPS = 1e-12


def r6v(z1: complex, z2: complex, q: complex,
        policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Six-vertex R-matrix with scalar q^(1/2) f(z1/z2)."""
    den = q * z2 - z1 / q
    if abs(den) < _POLE_EPS * max(abs(z1), abs(z2)):
        raise PoleHit("six-vertex pole: q z2 - z1/q = 0")
    b = (z2 - z1) / den
    c2 = (q - 1.0 / q) * z2 / den
    c1 = (q - 1.0 / q) * z1 / den
    inner = np.array([[1, 0, 0, 0],
                      [0, b, c2, 0],
                      [0, c1, b, 0],
                      [0, 0, 0, 1]], dtype=complex)
    scale = frac_pow(q, 1, 2) * scalar_f6v(z1 / z2, q, policy).value
    return scale * inner


def r6v_cartan_factor(q: complex) -> np.ndarray:
    """Evaluated Cartan factor: diag(q^(1/2), q^(-1/2), q^(-1/2), q^(1/2))."""
    s = frac_pow(q, 1, 2)
    return np.diag([s, 1 / s, 1 / s, s]).astype(complex)


def r6v_universal_truncated(z1: complex, z2: complex, q: complex, n_max: int) -> np.ndarray:
    """Six-vertex matrix from the ordered root-factor product, cut at level n_max.

    Real-root factors are 1 + (q - 1/q) u^n E12xE21 (raising family) and
    1 + (q - 1/q) u^(n+1) E21xE12 (lowering family) with u = z1/z2; the
    imaginary part is a diagonal exponential.  Converges to r6v for
    |u| < |q|^2 as n_max grows.
    """
    u = z1 / z2
    lam = q - 1.0 / q
    e_up = kron(unit_matrix(2, 1, 2), unit_matrix(2, 2, 1))
    e_dn = kron(unit_matrix(2, 2, 1), unit_matrix(2, 1, 2))
    up = eye(4)
    dn = eye(4)
    for n in range(n_max + 1):
        up = up @ (eye(4) + lam * u**n * e_up)
        dn = dn @ (eye(4) + lam * u ** (n + 1) * e_dn)
    expo = np.zeros(4, dtype=complex)
    for n in range(1, n_max + 1):
        coeff = lam * (n / qnum(2 * n, q)) * (qnum(n, q) / n) ** 2 * u**n
        # diag of (E11 - q^-2n E22) x (E11 - q^2n E22), basis e1e1,e1e2,e2e1,e2e2
        diag = np.array([1, -q ** (2 * n), -q ** (-2 * n), 1], dtype=complex)
        expo += coeff * diag
    imag = np.diag(np.exp(expo)).astype(complex)
    return r6v_cartan_factor(q) @ up @ imag @ dn


def r8v(z1: complex, z2: complex, p: complex, q: complex,
        policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Eight-vertex R-matrix with scalar q^(1/2) rho(z;p), z = z1/z2."""
    z = z1 / z2
    p4 = p**4

    def th(x: complex) -> complex:
        return theta_q(x, p4, policy).value

    th_p2 = th(p * p)
    th_bzden = th(z / (q * q))
    th_azden = th(p * p * z / (q * q))
    for name, val in (("Theta(p^2)", th_p2), ("Theta(z/q^2)", th_bzden),
                      ("Theta(p^2 z/q^2)", th_azden)):
        if abs(val) < _POLE_EPS:
            raise PoleHit(f"eight-vertex pole: {name} = 0")
    a = th(p * p * z) * th(p * p * q * q) / (th_p2 * th_azden)
    b = th(z) * th(p * p * q * q) / (q * th_p2 * th_bzden)
    c = th(p * p * z) * th(1.0 / (q * q)) / (th_p2 * th_bzden)
    d = p * th(z) * th(q * q) / (q * th_p2 * th_azden)
    mat = np.array([[a, 0, 0, d / z1],
                    [0, b, c, 0],
                    [0, z * c, b, 0],
                    [z2 * d, 0, 0, a]], dtype=complex)
    return frac_pow(q, 1, 2) * scalar_rho8v(z, p, q, policy).value * mat


def irf_entry_b(z: complex, p: complex, w: complex, q: complex,
                policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Face-matrix entry b(z;p,w) (the height-preserving off-corner weight)."""
    p2 = p * p
    wi2 = 1.0 / (w * w)
    den_poch = qpoch_inf([p2 * wi2], [p2], policy).value
    th_den = theta_q(z / (q * q), p2, policy).value
    if abs(den_poch) < _POLE_EPS or abs(th_den) < _POLE_EPS:
        raise PoleHit("face-matrix pole in b(z;p,w)")
    num_poch = (qpoch_inf([q * q * p2 * wi2], [p2], policy).value
                * qpoch_inf([p2 * wi2 / (q * q)], [p2], policy).value)
    return (num_poch / den_poch**2 * theta_q(z, p2, policy).value / th_den / q)


def irf_entry_c(z: complex, p: complex, w: complex, q: complex,
                policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Face-matrix entry c(z;p,w) (the height-hopping weight)."""
    p2 = p * p
    th_w = theta_q(w * w, p2, policy).value
    th_den = theta_q(z / (q * q), p2, policy).value
    if abs(th_w) < _POLE_EPS or abs(th_den) < _POLE_EPS:
        raise PoleHit("face-matrix pole in c(z;p,w)")
    return (theta_q(1.0 / (q * q), p2, policy).value
            * theta_q(w * w * z, p2, policy).value / (th_w * th_den))


def r_irf(z: complex, p: complex, w: complex, q: complex,
          policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Face (height-model) R-matrix with scalar q^(1/2) rho(z;p).

    Depends on the spectral ratio z and the dynamical parameter w; commutes
    with h x 1 + 1 x h.
    """
    b1 = irf_entry_b(z, p, w, q, policy)
    c1 = irf_entry_c(z, p, w, q, policy)
    b2 = irf_entry_b(z, p, p / w, q, policy)
    c2 = irf_entry_c(z, p, p / w, q, policy)
    mat = np.array([[1, 0, 0, 0],
                    [0, b1, c1, 0],
                    [0, z * c2, b2, 0],
                    [0, 0, 0, 1]], dtype=complex)
    return frac_pow(q, 1, 2) * scalar_rho8v(z, p, q, policy).value * mat


def irf_operator(z: complex, p: complex, q: complex,
                 policy: TruncationPolicy = DEFAULT_POLICY) -> DynamicalOperator:
    """The face matrix at fixed spectral ratio as a function of w."""
    return DynamicalOperator(lambda w: r_irf(z, p, w, q, policy), (1.0, -1.0))


def rhat6v(z1: complex, z2: complex, q: complex,
           policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Six-vertex matrix with the Cartan factor stripped off."""
    return np.linalg.inv(r6v_cartan_factor(q)) @ r6v(z1, z2, q, policy)


def f_twist_closed(z: complex, p: complex, w: complex, q: complex,
                   policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Dynamical twist in closed form (spectral ratio z).

    Block diagonal with unit corners; the middle block repeats the
    companion-entry pattern of the face matrix, with the lower row carrying
    the spectral factor z and the argument w -> p/w:

        [[ X11(z;p,w),      X12(z;p,w)   ],
         [ z X12(z;p,p/w),  X11(z;p,p/w) ]].
    """
    x11 = _twist_x11(z, p, w, q, policy)
    x12 = _twist_x12(z, p, w, q, policy)
    x11p = _twist_x11(z, p, p / w, q, policy)
    x12p = _twist_x12(z, p, p / w, q, policy)
    phi = scalar_phi_twist(z, p, q, policy).value
    return phi * np.array([[1, 0, 0, 0],
                           [0, x11, x12, 0],
                           [0, z * x12p, x11p, 0],
                           [0, 0, 0, 1]], dtype=complex)


def twist_block_det(z: complex, p: complex, q: complex,
                    policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Telescoped determinant of the stripped twist middle block.

    X11(w) X11(p/w) - z X12(w) X12(p/w)
        = (q^2 p^2 z; p^2)_oo / (q^-2 p^2 z; p^2)_oo,
    independent of w.
    """
    return (qpoch_inf([q * q * p * p * z], [p * p], policy).value
            / qpoch_inf([p * p * z / (q * q)], [p * p], policy).value)


def _twist_x11(z, p, w, q, policy) -> complex:
    return phi21(q * q, q * q * p * p / (w * w), p * p / (w * w), p * p,
                 p * p * z / (q * q), policy)


def _twist_x12(z, p, w, q, policy) -> complex:
    den = 1.0 - 1.0 / (w * w)
    if abs(den) < _POLE_EPS:
        raise PoleHit("twist pole at w^2 = 1")
    return (-(q - 1.0 / q) / den
            * phi21(q * q * p * p, q * q * w * w, p * p * w * w, p * p,
                    p * p * z / (q * q), policy))


def f_twist_product(z1: complex, z2: complex, p: complex, w: complex, q: complex,
                    n_factors: int,
                    policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Twist as the truncated conjugation-dilation product.

    k-th factor: the stripped six-vertex matrix at spectral ratio p^(2k) z,
    conjugated on leg 2 by diag(w, 1/w)^(-k).  The dilation direction (ratio
    scaled by p^(+2k), leg-2 conjugator with negative power) is the one that
    reproduces the closed form; the suite pins it.
    """
    out = eye(4)
    for k in range(1, n_factors + 1):
        conj = kron(eye(2), np.diag([w ** (-k), w**k]).astype(complex))
        conj_inv = kron(eye(2), np.diag([w**k, w ** (-k)]).astype(complex))
        factor = conj @ rhat6v(p ** (2 * k) * z1, z2, q, policy) @ conj_inv
        out = out @ factor
    return out


def r_irf_from_twist(z1: complex, z2: complex, p: complex, w: complex, q: complex,
                     n_factors: int = 8, via: str = "closed",
                     policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Face matrix rebuilt by twist conjugation of the six-vertex matrix.

    The swapped-leg twist is realized by flipping both legs and exchanging
    the spectral roles.  via='closed' uses the closed twist (exact up to
    series tolerance); via='product' uses the n_factors-term product, whose
    tail is geometric with ratio max(|p|^2, |w|^2).
    """
    p_swap = swap_legs(2)
    if via == "closed":
        f12 = f_twist_closed(z1 / z2, p, w, q, policy)
        f21 = p_swap @ f_twist_closed(z2 / z1, p, w, q, policy) @ p_swap
    elif via == "product":
        f12 = f_twist_product(z1, z2, p, w, q, n_factors, policy)
        f21 = p_swap @ f_twist_product(z2, z1, p, w, q, n_factors, policy) @ p_swap
    else:
        raise ValueError("via must be 'closed' or 'product'")
    return np.linalg.inv(f21) @ r6v(z1, z2, q, policy) @ f12


# ---------------------------------------------------------------------------
# identity residuals
# ---------------------------------------------------------------------------

def qybe_residual(rfun, z1: complex, z2: complex, z3: complex) -> float:
    """||R12 R13 R23 - R23 R13 R12|| / max norm, rfun(zi, zj) -> 4x4 matrix."""
    r12 = embed(rfun(z1, z2), (1, 2), 3, 2)
    r13 = embed(rfun(z1, z3), (1, 3), 3, 2)
    r23 = embed(rfun(z2, z3), (2, 3), 3, 2)
    return rel_residual(r12 @ r13 @ r23, r23 @ r13 @ r12)


def qdybe_residual(z1: complex, z2: complex, z3: complex, p: complex, w: complex,
                   q: complex, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Dynamical Yang-Baxter residual for the face matrix.

    R12(w) R13(w q^h2) R23(w) = R23(w q^h1) R13(w) R12(w q^h3), with the
    shifted factors realized as eigenprojector block sums.
    """
    op12 = irf_operator(z1 / z2, p, q, policy)
    op13 = irf_operator(z1 / z3, p, q, policy)
    op23 = irf_operator(z2 / z3, p, q, policy)
    r12 = embed(op12(w), (1, 2), 3, 2)
    r23 = embed(op23(w), (2, 3), 3, 2)
    r13 = embed(op13(w), (1, 3), 3, 2)
    r13_s2 = shift_leg(op13, 2, (1, 3), 3, w, q)
    r23_s1 = shift_leg(op23, 1, (2, 3), 3, w, q)
    r12_s3 = shift_leg(op12, 3, (1, 2), 3, w, q)
    return rel_residual(r12 @ r13_s2 @ r23, r23_s1 @ r13 @ r12_s3)


# ---------------------------------------------------------------------------
# face Boltzmann weights
# ---------------------------------------------------------------------------

def boltzmann_weight(l: int, lp: int, mp: int, m: int, z: complex, p: complex,
                     w0: complex, q: complex,
                     policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Face weight W for the height quadruple (l, l', m', m) in cyclic order.

    Corners run l -> l' -> m' -> m around the face, each step of size one.
    The weight is the face-matrix element at dynamical parameter w0 q^l; the
    corner pair (l, m') is diagonal, as is (l', m).
    """
    steps = (lp - l, mp - lp, m - mp, l - m)
    if any(abs(s) != 1 for s in steps):
        raise InadmissibleHeights(f"height steps must be +-1, got {steps}")
    eps1p = lp - l
    eps2p = mp - lp
    eps2 = m - l
    eps1 = mp - m
    i1 = (3 - eps1) // 2
    i2 = (3 - eps2) // 2
    j1 = (3 - eps1p) // 2
    j2 = (3 - eps2p) // 2
    mat = r_irf(z, p, w0 * q**l, q, policy)
    return complex(mat[(i1 - 1) * 2 + (i2 - 1), (j1 - 1) * 2 + (j2 - 1)])


def _weight_of_element(cache: dict, zkey, s: int, i1: int, i2: int, j1: int, j2: int,
                       z: complex, p: complex, w0: complex, q: complex,
                       policy: TruncationPolicy) -> complex:
    """Matrix element as a face weight at base height s, zero if not conserving."""
    if (3 - 2 * i1) + (3 - 2 * i2) != (3 - 2 * j1) + (3 - 2 * j2):
        return 0.0
    key = (zkey, s)
    if key not in cache:
        cache[key] = r_irf(z, p, w0 * q**s, q, policy)
    return complex(cache[key][(i1 - 1) * 2 + (i2 - 1), (j1 - 1) * 2 + (j2 - 1)])


def star_triangle_residual(z1: complex, z2: complex, z3: complex, p: complex,
                           w0: complex, q: complex, base_height: int = 0,
                           policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Dynamical Yang-Baxter residual written entirely in face weights.

    Both sides of the identity are assembled component by component as sums
    over intermediate height configurations of triple products of weights,
    with the middle factor's base height shifted by the spin of the
    untouched leg.  Equals the matrix residual up to roundoff.
    """
    s0 = base_height
    cache: dict = {}

    def w12(s, i1, i2, j1, j2):
        return _weight_of_element(cache, "12", s, i1, i2, j1, j2, z1 / z2, p, w0, q, policy)

    def w13(s, i1, i2, j1, j2):
        return _weight_of_element(cache, "13", s, i1, i2, j1, j2, z1 / z3, p, w0, q, policy)

    def w23(s, i1, i2, j1, j2):
        return _weight_of_element(cache, "23", s, i1, i2, j1, j2, z2 / z3, p, w0, q, policy)

    worst = 0.0
    scale = 0.0
    pair = (1, 2)
    for i1 in pair:
        for i2 in pair:
            for i3 in pair:
                for j1 in pair:
                    for j2 in pair:
                        for j3 in pair:
                            lhs = 0.0 + 0.0j
                            for a1 in pair:
                                for a2 in pair:
                                    for b3 in pair:
                                        lhs += (w12(s0, i1, i2, a1, a2)
                                                * w13(s0 + 3 - 2 * a2, a1, i3, j1, b3)
                                                * w23(s0, a2, b3, j2, j3))
                            rhs = 0.0 + 0.0j
                            for a2 in pair:
                                for a3 in pair:
                                    for b1 in pair:
                                        rhs += (w23(s0 + 3 - 2 * i1, i2, i3, a2, a3)
                                                * w13(s0, i1, a3, b1, j3)
                                                * w12(s0 + 3 - 2 * j3, b1, a2, j1, j2))
                            worst = max(worst, abs(lhs - rhs))
                            scale = max(scale, abs(lhs), abs(rhs))
    return worst / max(scale, 1.0)

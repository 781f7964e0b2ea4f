"""Evaluation representation of the derived quantum affine algebra of type A.

The fundamental (r+1)-dimensional representation extended by a spectral
parameter z: the affine generators e_0, f_0 act through the corner matrices
z E_{r+1,1}, z^-1 E_{1,r+1} and the centre acts by zero.  The module tabulates
the images of the root-vector (PBW) basis, both for the rank-1 normal order
and for the general-rank one, the diagonal images of the fundamental
coweights, and the companion matrix omega_z that implements the diagram
rotation at the matrix level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadIndex, BadLabel
from .qspecial import qnum
from .tensor import unit_matrix

# label kinds for the PBW families
ALPHA = "alpha"                      # alpha_{i,j} = alpha_i + ... + alpha_{j-1}
DELTA_MINUS_ALPHA = "delta_minus_alpha"
ALPHA_SHIFT = "alpha_shift"          # alpha_i + n delta
ALPHA0_SHIFT = "alpha0_shift"        # alpha_0 + n delta (rank 1 table)
IMAG = "imag"                        # (n delta, i)
IMAG_PRIME = "imag_prime"            # primed imaginary vectors


@dataclass(frozen=True)
class PbwLabel:
    """A root-vector label: family kind plus the indices it needs."""

    kind: str
    i: int = 1
    j: int = 0
    n: int = 0

    def validate(self, r: int) -> None:
        if self.kind in (ALPHA, DELTA_MINUS_ALPHA):
            if not (1 <= self.i < self.j <= r + 1):
                raise BadLabel(f"need 1 <= i < j <= r+1: {self}")
        elif self.kind == ALPHA_SHIFT:
            if not (1 <= self.i <= r) or self.n < 0:
                raise BadLabel(f"need 1 <= i <= r and n >= 0: {self}")
        elif self.kind == ALPHA0_SHIFT:
            if r != 1 or self.n < 0:
                raise BadLabel("alpha_0 + n delta images are tabulated at rank 1 only")
        elif self.kind in (IMAG, IMAG_PRIME):
            if not (1 <= self.i <= r) or self.n < 1:
                raise BadLabel(f"need 1 <= i <= r and n >= 1: {self}")
        else:
            raise BadLabel(f"unknown label kind {self.kind!r}")


def ev_generator(r: int, z: complex, which: tuple[str, int]) -> np.ndarray:
    """Image of a Chevalley generator: which = ('e'|'f'|'h', i), 0 <= i <= r."""
    kind, i = which
    if not 0 <= i <= r:
        raise BadIndex(f"generator index {i} outside 0..{r}")
    if z == 0:
        raise ValueError("z must be nonzero")
    n = r + 1
    if kind == "e":
        return unit_matrix(n, i, i + 1) if i >= 1 else z * unit_matrix(n, n, 1)
    if kind == "f":
        return unit_matrix(n, i + 1, i) if i >= 1 else unit_matrix(n, 1, n) / z
    if kind == "h":
        if i >= 1:
            return unit_matrix(n, i, i) - unit_matrix(n, i + 1, i + 1)
        return -(unit_matrix(n, 1, 1) - unit_matrix(n, n, n))  # centre acts by 0
    raise BadIndex(f"unknown generator kind {kind!r}")


def ev_pbw(r: int, z: complex, q: complex, label: PbwLabel, sign: str = "+") -> np.ndarray:
    """Image of a PBW root vector (sign '+' for e, '-' for f).

    The f-images follow from the e-images by the algebra anti-involution,
    which at the matrix level is transposition combined with q -> 1/q and
    z -> 1/z.
    """
    label.validate(r)
    if sign not in "+-":
        raise BadLabel(f"sign must be '+' or '-', got {sign!r}")
    n = r + 1
    i, j, m = label.i, label.j, label.n
    if label.kind == ALPHA:
        if sign == "+":
            return (-1.0 / q) ** (j - i - 1) * unit_matrix(n, i, j)
        return (-q) ** (j - i - 1) * unit_matrix(n, j, i)
    if label.kind == DELTA_MINUS_ALPHA:
        if sign == "+":
            return z * (-1.0 / q) ** (i - 1) * unit_matrix(n, j, i)
        return (-q) ** (i - 1) / z * unit_matrix(n, i, j)
    if label.kind == ALPHA_SHIFT:
        if sign == "+":
            return (-1.0) ** (m * i) * z**m * q ** (-i * m) * unit_matrix(n, i, i + 1)
        return (-1.0) ** (m * i) * z ** (-m) * q ** (i * m) * unit_matrix(n, i + 1, i)
    if label.kind == ALPHA0_SHIFT:
        if sign == "+":
            return z * (-z / q) ** m * unit_matrix(2, 2, 1)
        return (-q / z) ** m / z * unit_matrix(2, 1, 2)
    if label.kind == IMAG:
        amp = (-1.0) ** (m - 1) * qnum(m, q) / m
        if sign == "+":
            return (amp * z**m * q ** ((1 - i) * m)
                    * (unit_matrix(n, i, i) - q ** (-2 * m) * unit_matrix(n, i + 1, i + 1)))
        return (amp * z ** (-m) * q ** (-(1 - i) * m)
                * (unit_matrix(n, i, i) - q ** (2 * m) * unit_matrix(n, i + 1, i + 1)))
    if label.kind == IMAG_PRIME:
        if sign == "+":
            return ((-1.0) ** (m - 1) * z**m * q ** (1 - i * m)
                    * (unit_matrix(n, i, i) - q ** (-2) * unit_matrix(n, i + 1, i + 1)))
        return ((-1.0) ** (m - 1) * z ** (-m) * q ** (i * m - 1)
                * (unit_matrix(n, i, i) - q**2 * unit_matrix(n, i + 1, i + 1)))
    raise BadLabel(f"unknown label kind {label.kind!r}")


def ev_cartan_zeta(r: int, z: complex, i: int) -> np.ndarray:
    """Image of the i-th fundamental coweight: -(i/(r+1)) 1 + sum_{j<=i} E_jj."""
    if not 1 <= i <= r:
        raise BadIndex(f"need 1 <= i <= r, got {i}")
    n = r + 1
    out = -(i / (r + 1)) * np.eye(n, dtype=complex)
    for j in range(1, i + 1):
        out += unit_matrix(n, j, j)
    return out


def omega_z(r: int, z: complex) -> np.ndarray:
    """Companion matrix: ones on the superdiagonal, z in the lower-left corner.

    Satisfies omega_z^(r+1) = z * identity and implements the diagram rotation
    on all evaluated generators.
    """
    if z == 0:
        raise ValueError("z must be nonzero")
    n = r + 1
    out = np.zeros((n, n), dtype=complex)
    for i in range(1, n):
        out[i - 1, i] = 1.0
    out[n - 1, 0] = z
    return out


def _mod(k: int, m: int) -> int:
    return k % m


def sigma_intertwining_residual(r: int, z: complex, q: complex, rot: int = 1) -> float:
    """Defect of ev_z(sigma^+/-(u)) = Ad_{omega_z}^(+/-1)(ev_z(u)) over generators.

    sigma^+ rotates raising generators e_i -> e_{i-rot mod r+1} (h likewise),
    sigma^- rotates lowering generators the other way; both are checked on
    e_i, f_i and q^(h_i) for all i.
    """
    om = omega_z(r, z)
    om_inv = np.linalg.inv(om)
    worst = 0.0
    for i in range(r + 1):
        ip = _mod(i - rot, r + 1)
        im = _mod(i + rot, r + 1)
        # sigma^+ on the positive Borel side
        lhs = ev_generator(r, z, ("e", ip))
        rhs = om @ ev_generator(r, z, ("e", i)) @ om_inv
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
        lhs = _qpow_h(r, z, q, ip)
        rhs = om @ _qpow_h(r, z, q, i) @ om_inv
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
        # sigma^- on the negative Borel side
        lhs = ev_generator(r, z, ("f", im))
        rhs = om_inv @ ev_generator(r, z, ("f", i)) @ om
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
        lhs = _qpow_h(r, z, q, im)
        rhs = om_inv @ _qpow_h(r, z, q, i) @ om
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def _qpow_h(r: int, z: complex, q: complex, i: int) -> np.ndarray:
    h = ev_generator(r, z, ("h", i))
    return np.diag(q ** np.diag(h).real.astype(int)).astype(complex)


def qbinom(n: int, k: int, q: complex) -> complex:
    """Gaussian binomial [n choose k]_q."""
    num = 1.0 + 0.0j
    den = 1.0 + 0.0j
    for m in range(1, n + 1):
        num *= qnum(m, q)
    for m in range(1, k + 1):
        den *= qnum(m, q)
    for m in range(1, n - k + 1):
        den *= qnum(m, q)
    return num / den


def defining_relations_residual(r: int, z: complex, q: complex) -> float:
    """Worst defect over the algebra relations in the evaluated matrices.

    Checks [e_i, f_j] = delta_ij (q^h_i - q^-h_i)/(q - 1/q), the q-Serre
    relations for every pair i != j, and the weight relations
    q^h e_i q^-h = q^(alpha_i(h)) e_i.
    """
    worst = 0.0
    es = [ev_generator(r, z, ("e", i)) for i in range(r + 1)]
    fs = [ev_generator(r, z, ("f", i)) for i in range(r + 1)]
    aij = _affine_cartan(r)
    for i in range(r + 1):
        for j in range(r + 1):
            comm = es[i] @ fs[j] - fs[j] @ es[i]
            if i == j:
                qp = _qpow_h(r, z, q, i)
                target = (qp - np.linalg.inv(qp)) / (q - 1.0 / q)
            else:
                target = np.zeros_like(comm)
            scale = max(np.linalg.norm(es[i]) * np.linalg.norm(fs[j]), 1.0)
            worst = max(worst, float(np.linalg.norm(comm - target) / scale))
            if i != j:
                nser = 1 - aij[i][j]
                acc_e = np.zeros_like(comm)
                acc_f = np.zeros_like(comm)
                scale_e = scale_f = 1.0
                for k in range(nser + 1):
                    coef = (-1.0) ** k * qbinom(nser, k, q)
                    term_e = coef * np.linalg.matrix_power(es[i], nser - k) @ es[j] \
                        @ np.linalg.matrix_power(es[i], k)
                    term_f = coef * np.linalg.matrix_power(fs[i], nser - k) @ fs[j] \
                        @ np.linalg.matrix_power(fs[i], k)
                    acc_e += term_e
                    acc_f += term_f
                    scale_e = max(scale_e, float(np.linalg.norm(term_e)))
                    scale_f = max(scale_f, float(np.linalg.norm(term_f)))
                worst = max(worst, float(np.linalg.norm(acc_e)) / scale_e)
                worst = max(worst, float(np.linalg.norm(acc_f)) / scale_f)
    for i in range(r + 1):
        qp = _qpow_h(r, z, q, i)
        for j in range(r + 1):
            lhs = qp @ es[j] @ np.linalg.inv(qp)
            scale = max(float(np.linalg.norm(lhs)), 1.0)
            worst = max(worst, float(np.linalg.norm(lhs - q ** aij[i][j] * es[j])) / scale)
    return worst


def _affine_cartan(r: int):
    """Affine A_r Cartan matrix entries a_ij, indices 0..r."""
    if r == 1:
        return [[2, -2], [-2, 2]]
    a = [[0] * (r + 1) for _ in range(r + 1)]
    for i in range(r + 1):
        for j in range(r + 1):
            if i == j:
                a[i][j] = 2
            elif _mod(i - j, r + 1) in (1, r):
                a[i][j] = -1
    return a


def imag_log_transform_residual(r1_z: complex, q: complex, orders: int = 4) -> float:
    """Rank-1 check that the two imaginary families match the log transform.

    (q - 1/q) sum_n ev(e_{n delta}) x^n must equal the series logarithm of
    1 + (q - 1/q) sum_n ev(e'_{n delta}) x^n through the requested order;
    everything is diagonal so the comparison is entrywise on power-series
    coefficients.
    """
    lam = q - 1.0 / q
    prim = [lam * np.diag(ev_pbw(1, r1_z, q, PbwLabel(IMAG_PRIME, i=1, n=n))) for n in range(1, orders + 1)]
    unprim = [lam * np.diag(ev_pbw(1, r1_z, q, PbwLabel(IMAG, i=1, n=n))) for n in range(1, orders + 1)]
    worst = 0.0
    for entry in range(2):
        a = [p[entry] for p in prim]           # series A(x) = sum a_n x^n
        target = [u[entry] for u in unprim]    # log(1+A) coefficients wanted
        log_coeffs, scales = _log_series(a, orders)
        for n in range(orders):
            scale = max(abs(target[n]), scales[n], 1.0)
            worst = max(worst, abs(log_coeffs[n] - target[n]) / scale)
    return worst


def _log_series(a: list[complex], orders: int):
    """Coefficients of log(1 + sum_n a_n x^n) through x^orders (a has no x^0).

    Also returns, per order, the largest contribution magnitude (the natural
    scale for a relative comparison of the heavily cancelling sum).
    """
    out = [0.0 + 0.0j] * orders
    scales = [0.0] * orders
    power = list(a)  # current A^k
    sign = 1.0
    for k in range(1, orders + 1):
        if k > 1:
            new = [0.0 + 0.0j] * orders
            for u in range(orders):
                for v in range(orders):
                    if u + v + 2 <= orders:
                        new[u + v + 1] += power[u] * a[v]
            power = new
        for n in range(orders):
            out[n] += sign * power[n] / k
            scales[n] = max(scales[n], abs(power[n]) / k)
        sign = -sign
    return out, scales

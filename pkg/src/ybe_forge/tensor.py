"""Dense complex matrix algebra on tensor powers of a single leg space.

Everything here is plain numpy on small matrices (leg dimension r+1 <= 7,
at most three legs), so no sparsity or cleverness: Kronecker products,
embedding of two-leg operators into n-leg spaces at arbitrary leg pairs,
dynamical-shift block operators realizing arguments like R(w q^(h_k)), and
the Frobenius relative residual used by every identity suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BadLegs


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def unit_matrix(n: int, i: int, j: int) -> np.ndarray:
    """Elementary matrix E_{i,j} (1-based indices) of size n."""
    m = np.zeros((n, n), dtype=complex)
    m[i - 1, j - 1] = 1.0
    return m


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*mats: np.ndarray) -> np.ndarray:
    out = np.array([[1.0 + 0.0j]])
    for m in mats:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def leg_permutation(perm: Sequence[int], dim: int) -> np.ndarray:
    """Matrix sending e_{i_1} x .. x e_{i_n} to the legs reordered by perm.

    perm[k] = position (1-based) that input leg k+1 is sent to.
    """
    n = len(perm)
    size = dim**n
    out = np.zeros((size, size), dtype=complex)
    for col in range(size):
        digits = _digits(col, dim, n)
        new = [0] * n
        for k in range(n):
            new[perm[k] - 1] = digits[k]
        row = _undigits(new, dim)
        out[row, col] = 1.0
    return out


def _digits(x: int, base: int, n: int):
    out = []
    for _ in range(n):
        out.append(x % base)
        x //= base
    return out[::-1]


def _undigits(ds, base: int) -> int:
    x = 0
    for d in ds:
        x = x * base + d
    return x


def swap_legs(dim: int) -> np.ndarray:
    """The flip P on V x V: P(u x v) = v x u."""
    return leg_permutation([2, 1], dim)


def embed(op: np.ndarray, legs: tuple[int, int], n: int, dim: int | None = None) -> np.ndarray:
    """Embed a two-leg operator at legs (i, j) of an n-leg space.

    Identity on all other legs; non-adjacent pairs are handled by
    permutation conjugation.
    """
    i, j = legs
    if not (1 <= i < j <= n):
        raise BadLegs(f"need 1 <= i < j <= n, got {legs} with n={n}")
    op = np.asarray(op, dtype=complex)
    if dim is None:
        dim = round(op.shape[0] ** 0.5)
    if op.shape != (dim * dim, dim * dim):
        raise BadLegs(f"operator shape {op.shape} is not two legs of dimension {dim}")
    # place at legs (1,2), then permute leg 1 -> i, leg 2 -> j
    big = op
    for _ in range(n - 2):
        big = np.kron(big, eye(dim))
    if (i, j) == (1, 2):
        return big
    perm = [0] * n
    perm[0] = i
    perm[1] = j
    rest = [k for k in range(1, n + 1) if k not in (i, j)]
    for slot, leg in zip(range(2, n), rest):
        perm[slot] = leg
    p = leg_permutation(perm, dim)
    return p @ big @ p.conj().T


@dataclass
class DynamicalOperator:
    """A two-leg operator depending on the dynamical parameter w.

    ``weights`` lists the h-eigenvalue of each basis vector of one leg
    ((+1, -1) for the two-dimensional leg), which is what turns a symbolic
    shift w -> w q^h into a block sum over eigenprojectors.
    """

    fn: Callable[[complex], np.ndarray]
    weights: tuple[float, ...]

    def __call__(self, w: complex) -> np.ndarray:
        return np.asarray(self.fn(w), dtype=complex)


def shift_leg(op: DynamicalOperator, shifted_by: int, placement: tuple[int, int],
              n: int, w: complex, q: complex) -> np.ndarray:
    """Realize op(w q^(h_k)) acting on legs ``placement`` of an n-leg space.

    Sum over the h-eigenbasis of leg k: op(w q^eps) on the placement legs,
    tensored with the projector onto the eps-eigenvector of leg k.
    """
    i, j = placement
    k = shifted_by
    if k in (i, j) or not (1 <= k <= n) or not (1 <= i < j <= n):
        raise BadLegs(f"bad legs: placement={placement}, shifted_by={k}, n={n}")
    dim = len(op.weights)
    total = np.zeros((dim**n,) * 2, dtype=complex)
    for idx, eps in enumerate(op.weights):
        block = embed(op(w * q**eps), (i, j), n, dim)
        proj = np.zeros((dim, dim), dtype=complex)
        proj[idx, idx] = 1.0
        proj_full = kron_all(*[proj if leg == k else eye(dim) for leg in range(1, n + 1)])
        total += proj_full @ block
    return total


def rel_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius residual ||A - B|| / max(||A||, ||B||, 1)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    diff = np.linalg.norm(a - b)
    return float(diff / max(np.linalg.norm(a), np.linalg.norm(b), 1.0))

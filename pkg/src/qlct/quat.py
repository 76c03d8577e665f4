"""Hamilton quaternion arrays.

Quaternions are float64 arrays whose last axis has length 4, ordered
(w, x, y, z) for q = w + x*i + y*j + z*k with ij = -ji = k, jk = -kj = i,
ki = -ik = j and i^2 = j^2 = k^2 = -1. All operations broadcast over
leading axes, so a single quaternion is shape (4,) and a sampled 2D field
is (n1, n2, 4).

The symplectic split writes q = qa + qb*j with qa = w + x*i and
qb = y + z*i held as ordinary complex numbers in the i-plane. It is a pure
reinterpretation of the same four doubles, used by the fast transform
paths; `to_complex_pair` / `from_complex_pair` round-trip bit-identically.
"""

from __future__ import annotations

import numpy as np

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])


def quaternion(w=0.0, x=0.0, y=0.0, z=0.0) -> np.ndarray:
    """Build a quaternion array from components (broadcast together)."""
    return np.stack(np.broadcast_arrays(
        np.asarray(w, dtype=float), np.asarray(x, dtype=float),
        np.asarray(y, dtype=float), np.asarray(z, dtype=float)), axis=-1)


def qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product p*q (non-commutative), broadcasting over leading axes."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pw, px, py, pz = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    qw, qx, qy, qz = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack([
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    ], axis=-1)


def qconj(q: np.ndarray) -> np.ndarray:
    """Conjugate: sign of the pure part flipped."""
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qabs(q: np.ndarray) -> np.ndarray:
    """Modulus |q| = sqrt(w^2 + x^2 + y^2 + z^2)."""
    q = np.asarray(q, dtype=float)
    return np.sqrt(np.sum(q * q, axis=-1))


def qabs_sq(q: np.ndarray) -> np.ndarray:
    """Squared modulus, cheaper than qabs when the root is not needed."""
    q = np.asarray(q, dtype=float)
    return np.sum(q * q, axis=-1)


def qexp_axis(axis: str, theta) -> np.ndarray:
    """Unit quaternion cos(theta) + axis*sin(theta) for axis 'i' or 'j'.

    Evaluates the kernel phase factors e^{i theta} and e^{j theta}.
    """
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    zero = np.zeros_like(c)
    if axis == "i":
        return np.stack([c, s, zero, zero], axis=-1)
    if axis == "j":
        return np.stack([c, zero, s, zero], axis=-1)
    raise ValueError(f"axis must be 'i' or 'j', got {axis!r}")


def to_complex_pair(q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split q = qa + qb*j into i-plane complex arrays (qa, qb)."""
    q = np.asarray(q, dtype=float)
    qa = q[..., 0] + 1j * q[..., 1]
    qb = q[..., 2] + 1j * q[..., 3]
    return qa, qb


def from_complex_pair(qa: np.ndarray, qb: np.ndarray) -> np.ndarray:
    """Inverse of to_complex_pair; exact on the four underlying doubles."""
    qa = np.asarray(qa, dtype=complex)
    qb = np.asarray(qb, dtype=complex)
    return np.stack([qa.real, qa.imag, qb.real, qb.imag], axis=-1)

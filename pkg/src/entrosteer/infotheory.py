"""Entropy functionals on distributions and states. All logarithms are base 2."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ZERO_CUTOFF = 1e-15   # probabilities at or below this count as exact zeros
NEG_TOL = 1e-12
SUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ProbVector:
    """Probability vector: entries in [0, 1], total 1 within 1e-10."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.array(self.probs, dtype=float).ravel()
        if p.size == 0:
            raise ValueError("empty probability vector")
        if p.min() < -NEG_TOL or p.max() > 1.0 + SUM_TOL:
            raise ValueError("probabilities must lie in [0, 1]")
        p = np.where(p < 0.0, 0.0, p)
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)


def _probs_1d(p) -> np.ndarray:
    arr = np.asarray(getattr(p, "probs", p), dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("empty probability vector")
    if arr.min() < -NEG_TOL:
        raise ValueError(f"negative probability {arr.min():.3e}")
    if abs(arr.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"probabilities sum to {arr.sum()!r}, not 1")
    return np.where(arr < 0.0, 0.0, arr)


def _probs_2d(joint) -> np.ndarray:
    arr = np.asarray(getattr(joint, "probs", joint), dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"joint distribution must be a matrix, got ndim {arr.ndim}")
    if arr.min() < -NEG_TOL:
        raise ValueError(f"negative probability {arr.min():.3e}")
    if abs(arr.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"probabilities sum to {arr.sum()!r}, not 1")
    return np.where(arr < 0.0, 0.0, arr)


def _entropy_raw(p: np.ndarray) -> float:
    # 0*log(0) = 0 by continuity
    q = p[p > ZERO_CUTOFF]
    return float(-(q * np.log2(q)).sum()) if q.size else 0.0


def shannon_entropy(p) -> float:
    """-sum p_i log2 p_i in bits; accepts a ProbVector or array-like."""
    return _entropy_raw(_probs_1d(p))


def conditional_entropy(joint, direction: str = "B|A") -> float:
    """H(B|A) = H(A,B) - H(A) (direction "B|A"), or the mirror "A|B".

    Rows of the joint index party A, columns party B.
    """
    p = _probs_2d(joint)
    if direction == "B|A":
        marg = p.sum(axis=1)
    elif direction == "A|B":
        marg = p.sum(axis=0)
    else:
        raise ValueError(f"direction must be 'B|A' or 'A|B', got {direction!r}")
    return max(0.0, _entropy_raw(p.ravel()) - _entropy_raw(marg))


def mutual_information(joint) -> float:
    """I(A:B) = H(A) + H(B) - H(A,B) >= 0, symmetric in the parties."""
    p = _probs_2d(joint)
    h_a = _entropy_raw(p.sum(axis=1))
    h_b = _entropy_raw(p.sum(axis=0))
    return max(0.0, h_a + h_b - _entropy_raw(p.ravel()))


def modular_sum_entropy(joint, sign: str) -> float:
    """Entropy of (a + b) mod N for sign "plus", (a - b) mod N for "minus".

    Outcomes are residues 0..N-1; the modular group structure keeps the
    entropy of a sum at or above both conditional entropies, which is what the
    sum/difference witnesses rely on.
    """
    p = _probs_2d(joint)
    n_a, n_b = p.shape
    if n_a != n_b:
        raise ValueError(f"modular sums need a square joint, got shape {p.shape}")
    if sign not in ("plus", "minus"):
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    a = np.arange(n_a)[:, None]
    b = np.arange(n_a)[None, :]
    idx = (a + b) % n_a if sign == "plus" else (a - b) % n_a
    dist = np.zeros(n_a)
    np.add.at(dist, idx, p)
    return _entropy_raw(dist)


def von_neumann_entropy(m) -> float:
    """Spectral entropy -sum lambda_i log2 lambda_i of a density matrix.

    Accepts a DensityMatrix or a raw Hermitian unit-trace PSD array; the
    spectrum is clamped to [0, 1] before the logarithms.
    """
    mat = np.asarray(getattr(m, "mat", m), dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    if np.max(np.abs(mat - mat.conj().T)) > 1e-10:
        raise ValueError("matrix is not Hermitian within 1e-10")
    ev = np.linalg.eigvalsh(mat)
    if ev.min() < -1e-10:
        raise ValueError("matrix has an eigenvalue below -1e-10")
    if abs(ev.sum() - 1.0) > 1e-10:
        raise ValueError(f"trace {ev.sum()!r} differs from 1")
    return _entropy_raw(np.clip(ev, 0.0, 1.0))


def concurrence(rho) -> float:
    """Two-qubit concurrence from the spin-flipped spectrum.

    C = max(0, l1 - l2 - l3 - l4) where l_i are the decreasingly sorted square
    roots of the eigenvalues of rho (sy (x) sy) rho* (sy (x) sy).
    """
    if getattr(rho, "dims", None) != (2, 2):
        raise ValueError("concurrence is defined here for two-qubit states only")
    m = rho.mat
    sy = np.array([[0.0, -1j], [1j, 0.0]])
    flip = np.kron(sy, sy)
    tilde = flip @ m.conj() @ flip
    ev = np.linalg.eigvals(m @ tilde).real
    lam = np.sort(np.sqrt(np.clip(ev, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def entanglement_of_formation(rho) -> float:
    """Two-qubit entanglement of formation in bits, via the concurrence.

    E = h((1 + sqrt(1 - C^2))/2) with h the binary entropy; ranges over [0, 1].
    """
    c = concurrence(rho)
    x = 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c)))
    return _entropy_raw(np.array([x, 1.0 - x]))

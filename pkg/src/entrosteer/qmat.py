"""Dense complex linear algebra for small bipartite quantum systems.

States live on a tensor product H_A (x) H_B with subsystem dimensions
``(d_A, d_B)``; joint indices are row-major, so the product basis vector
|i>_A (x) |j>_B sits at position ``i * d_B + j``. All randomness flows through
an explicit ``numpy.random.Generator`` -- there is no hidden global state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Structural invariants (Hermiticity, trace, eigenvalue floor) are checked to
# 1e-10; derived spectral comparisons get the looser 1e-8. Both sit well above
# double-precision noise for the dimensions this package targets (<= 32).
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_TOL = 1e-10
SPECTRAL_TOL = 1e-8


def _as_complex_matrix(mat, name: str = "matrix") -> np.ndarray:
    m = np.array(mat, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated bipartite density matrix.

    Parameters
    ----------
    dims : tuple of int
        Subsystem dimensions ``(d_A, d_B)``, each >= 1.
    mat : array_like
        Complex matrix of shape ``(d_A*d_B, d_A*d_B)``. Must be Hermitian and
        unit-trace within 1e-10 with eigenvalues >= -1e-10.

    Notes
    -----
    The stored array is copied and marked read-only, so instances are safe to
    share across threads.
    """

    dims: tuple[int, int]
    mat: np.ndarray

    def __post_init__(self) -> None:
        d_a, d_b = (int(d) for d in self.dims)
        if d_a < 1 or d_b < 1:
            raise ValueError(f"subsystem dimensions must be >= 1, got {self.dims}")
        m = _as_complex_matrix(self.mat, "density matrix")
        n = d_a * d_b
        if m.shape != (n, n):
            raise ValueError(
                f"dims {self.dims} require a {n}x{n} matrix, got shape {m.shape}"
            )
        if np.max(np.abs(m - m.conj().T)) > HERM_TOL:
            raise ValueError("density matrix is not Hermitian within 1e-10")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} differs from 1 beyond 1e-10")
        if np.linalg.eigvalsh(m).min() < -EIG_TOL:
            raise ValueError("density matrix has an eigenvalue below -1e-10")
        m.setflags(write=False)
        object.__setattr__(self, "dims", (d_a, d_b))
        object.__setattr__(self, "mat", m)

    @property
    def total_dim(self) -> int:
        return self.dims[0] * self.dims[1]


@dataclass(frozen=True, eq=False)
class PureState:
    """A bipartite pure state vector, unit-normalized within 1e-10."""

    dims: tuple[int, int]
    vec: np.ndarray

    def __post_init__(self) -> None:
        d_a, d_b = (int(d) for d in self.dims)
        if d_a < 1 or d_b < 1:
            raise ValueError(f"subsystem dimensions must be >= 1, got {self.dims}")
        v = np.array(self.vec, dtype=complex).ravel()
        if v.size != d_a * d_b:
            raise ValueError(
                f"dims {self.dims} require a vector of length {d_a * d_b}, got {v.size}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("state vector contains non-finite entries")
        if abs(np.linalg.norm(v) - 1.0) > 1e-10:
            raise ValueError("state vector is not unit-normalized within 1e-10")
        v.setflags(write=False)
        object.__setattr__(self, "dims", (d_a, d_b))
        object.__setattr__(self, "vec", v)

    def to_density(self) -> DensityMatrix:
        """Return the rank-1 projector |psi><psi| as a DensityMatrix."""
        return DensityMatrix(self.dims, np.outer(self.vec, self.vec.conj()))


def partial_trace(rho: DensityMatrix, keep: str) -> np.ndarray:
    """Trace out one subsystem of a bipartite density matrix.

    Parameters
    ----------
    rho : DensityMatrix
    keep : {"A", "B"}
        The subsystem whose reduced matrix is returned.

    Returns
    -------
    numpy.ndarray
        Hermitian, unit-trace ``d_keep x d_keep`` matrix.
    """
    d_a, d_b = rho.dims
    r = rho.mat.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("ijil->jl", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(rho: DensityMatrix, party: str = "B") -> np.ndarray:
    """Transpose one party's indices; eigenvalue negativity flags entanglement.

    For two qubits a nonnegative spectrum of the partial transpose certifies
    separability, which makes this the standard independent check on sampled
    separable states.
    """
    d_a, d_b = rho.dims
    r = rho.mat.reshape(d_a, d_b, d_a, d_b)
    if party == "B":
        out = r.transpose(0, 3, 2, 1)
    elif party == "A":
        out = r.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")
    return out.reshape(rho.total_dim, rho.total_dim)


def singlet_state() -> PureState:
    """The two-qubit singlet (|01> - |10>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0 / np.sqrt(2.0)
    v[2] = -1.0 / np.sqrt(2.0)
    return PureState((2, 2), v)


def werner_state(p: float) -> DensityMatrix:
    """Mixture of the singlet projector (weight p) with the maximally mixed state.

    Parameters
    ----------
    p : float in [0, 1]

    Returns
    -------
    DensityMatrix
        ``p |s><s| + (1 - p) I/4`` with |s> the singlet.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {p}")
    proj = singlet_state().to_density().mat
    return DensityMatrix((2, 2), p * proj + (1.0 - p) * np.eye(4) / 4.0)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a Haar-distributed ``d x d`` unitary.

    QR decomposition of a complex Ginibre matrix, with the R-diagonal phases
    folded back into Q; without that phase correction the distribution is not
    rotation-invariant.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    mag = np.abs(diag)
    # Zero diagonal entries have probability zero; fall back to phase 1.
    phase = np.where(mag > 0, diag, 1.0) / np.where(mag > 0, mag, 1.0)
    return q * phase


def random_pure_state(d_a: int, d_b: int, rng: np.random.Generator) -> PureState:
    """Haar-uniform pure state on C^{d_a} (x) C^{d_b}.

    A vector of i.i.d. standard complex Gaussians, normalized, is
    rotation-invariant and therefore uniform on the unit sphere.
    """
    if d_a < 1 or d_b < 1:
        raise ValueError(f"subsystem dimensions must be >= 1, got ({d_a}, {d_b})")
    n = d_a * d_b
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState((d_a, d_b), v / np.linalg.norm(v))


def random_mixed_state(
    d_a: int, d_b: int, rank: int, rng: np.random.Generator
) -> DensityMatrix:
    """Mixed state from the rank-constrained Hilbert-Schmidt-induced measure.

    Parameters
    ----------
    d_a, d_b : int
        Subsystem dimensions.
    rank : int
        Number of Ginibre columns, ``1 <= rank <= d_a*d_b``. Full rank gives
        the flat Hilbert-Schmidt measure; rank 1 gives random pure projectors.
    rng : numpy.random.Generator

    Returns
    -------
    DensityMatrix
        ``G G^dagger / Tr(G G^dagger)`` for a ``(d_a*d_b) x rank`` complex
        standard-Gaussian matrix G.
    """
    if d_a < 1 or d_b < 1:
        raise ValueError(f"subsystem dimensions must be >= 1, got ({d_a}, {d_b})")
    n = d_a * d_b
    if not 1 <= rank <= n:
        raise ValueError(f"rank must lie in [1, {n}], got {rank}")
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    w = g @ g.conj().T
    return DensityMatrix((d_a, d_b), w / np.trace(w).real)

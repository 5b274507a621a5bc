"""Exact linear-algebra substrate for zero-mean Gaussian laws.

Covariance assembly, log-determinants via triangular factorization,
differential entropy, block mutual information and eigenspectra. These
are the closed-form oracles everything else is checked against.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefinite, UnknownBlock

LOG_2PI_E = float(np.log(2.0 * np.pi * np.e))

_SYMMETRY_RTOL = 1e-12
_PSD_RTOL = 1e-10


@dataclass(frozen=True)
class CovarianceMatrix:
    """Dense symmetric positive semi-definite covariance.

    The stored matrix is the symmetrized input; construction validates
    symmetry to 1e-12 relative and PSD-ness to a -1e-10 * trace floor
    (sample covariances of rank < dim are routine and must pass).
    """

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"covariance must be square, got shape {a.shape}")
        scale = float(np.max(np.abs(a))) if a.size else 0.0
        asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
        if asym > _SYMMETRY_RTOL * max(scale, 1.0):
            raise ValueError(
                f"covariance not symmetric: max asymmetry {asym:.3e} "
                f"exceeds tolerance for scale {scale:.3e}"
            )
        sym = 0.5 * (a + a.T)
        trace = float(np.trace(sym))
        min_eig = float(np.linalg.eigvalsh(sym)[0]) if a.size else 0.0
        if min_eig < -_PSD_RTOL * max(trace, 0.0):
            raise ValueError(
                f"covariance not PSD: min eigenvalue {min_eig:.3e} below "
                f"-1e-10 * trace ({trace:.3e})"
            )
        object.__setattr__(self, "entries", sym)

    @property
    def dim(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class Spectrum:
    """Descending, non-negative eigenvalues plus the matrix trace."""

    eigenvalues: np.ndarray
    trace: float

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=np.float64)
        if ev.ndim != 1:
            raise ValueError("eigenvalues must be a 1-d array")
        if np.any(np.diff(ev) > 0):
            raise ValueError("eigenvalues must be sorted descending")
        if np.any(ev < 0):
            raise ValueError("eigenvalues must be non-negative after clamping")
        total = float(ev.sum())
        if abs(total - self.trace) > 1e-8 * max(abs(self.trace), 1.0):
            raise ValueError(
                f"eigenvalue sum {total:.12e} inconsistent with trace {self.trace:.12e}"
            )
        object.__setattr__(self, "eigenvalues", ev)


@dataclass(frozen=True)
class JointGaussian:
    """Zero-mean joint Gaussian over named variable blocks."""

    blocks: tuple
    cov: CovarianceMatrix

    def __post_init__(self):
        blocks = tuple((str(name), int(dim)) for name, dim in self.blocks)
        names = [name for name, _ in blocks]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate block names in {names}")
        total = sum(dim for _, dim in blocks)
        if total != self.cov.dim:
            raise ValueError(
                f"block dims sum to {total} but covariance has dim {self.cov.dim}"
            )
        object.__setattr__(self, "blocks", blocks)

    def block_names(self):
        return tuple(name for name, _ in self.blocks)

    def _indices(self, names):
        """Concatenated coordinate indices for a set of block names, in block order."""
        names = set(names)
        known = set(self.block_names())
        missing = names - known
        if missing:
            raise UnknownBlock(
                f"unknown block(s) {sorted(missing)}; available: {sorted(known)}"
            )
        idx = []
        offset = 0
        for name, dim in self.blocks:
            if name in names:
                idx.extend(range(offset, offset + dim))
            offset += dim
        return np.asarray(idx, dtype=np.intp)

    def marginal(self, names):
        """Marginal covariance of the named blocks."""
        idx = self._indices(names)
        return CovarianceMatrix(self.cov.entries[np.ix_(idx, idx)])


def log_det(cov):
    """Natural-log determinant via Cholesky factorization.

    Raises NotPositiveDefinite when the factorization fails, which signals
    a degenerate configuration (for example a zero noise scale).
    """
    try:
        chol = np.linalg.cholesky(cov.entries)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(
            f"Cholesky factorization failed for dim-{cov.dim} covariance: {exc}"
        ) from exc
    return float(2.0 * np.sum(np.log(np.diag(chol))))


def gaussian_entropy(cov):
    """Differential entropy 0.5 * (d * ln(2*pi*e) + ln det cov), in nats."""
    return 0.5 * (cov.dim * LOG_2PI_E + log_det(cov))


def gaussian_mi(joint, block_a, block_b):
    """Exact mutual information between two disjoint groups of blocks, in nats.

    Computed as 0.5 * (ln det S_A + ln det S_B - ln det S_AB); tiny negative
    rounding is clamped to zero on return.
    """
    names_a, names_b = set(block_a), set(block_b)
    if not names_a or not names_b:
        raise ValueError("block sets must be non-empty")
    if names_a & names_b:
        raise ValueError(f"block sets overlap: {sorted(names_a & names_b)}")
    ld_a = log_det(joint.marginal(names_a))
    ld_b = log_det(joint.marginal(names_b))
    ld_ab = log_det(joint.marginal(names_a | names_b))
    value = 0.5 * (ld_a + ld_b - ld_ab)
    return max(value, 0.0)


def eigen_spectrum(cov):
    """Eigenvalues sorted descending with numerical negatives clamped to zero."""
    ev = np.linalg.eigvalsh(cov.entries)[::-1].copy()
    ev[ev < 0.0] = 0.0
    return Spectrum(eigenvalues=ev, trace=float(ev.sum()))


def sample_spectrum(rows):
    """Spectrum of the mean-centered sample covariance of an (n, d) matrix.

    Uses the SVD route, so rank <= n-1 feature matrices with d >> n never
    materialize a d x d covariance. Eigenvalues are padded with zeros to
    length d.
    """
    rows = np.asarray(rows, dtype=np.float64)
    n, d = rows.shape
    centered = rows - rows.mean(axis=0, keepdims=True)
    sv = np.linalg.svd(centered, compute_uv=False)
    ev = np.zeros(d, dtype=np.float64)
    ev[: sv.shape[0]] = (sv * sv) / (n - 1)
    ev = np.sort(ev)[::-1]
    return Spectrum(eigenvalues=ev, trace=float(ev.sum()))

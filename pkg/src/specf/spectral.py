"""Spectral machinery: symmetric eigendecomposition, graph Fourier transform,
cut-off estimation and low-pass filter design.

Conventions
-----------
Eigenvalues are sorted ascending. Each eigenvector is sign-normalised so its
first component with magnitude above ``SIGN_TOL`` is positive; this makes the
basis reproducible across solvers, although every downstream quantity used by
the detector is sign-invariant anyway.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg as sla

from .errors import ConvergenceError, InputError
from .graph import check_symmetric

SIGN_TOL = 1e-10
REFINE_STEPS = 2


class SpectralWarning(UserWarning):
    """Degenerate input handled by a fallback (flat spectrum, reduced degree)."""


@dataclass(frozen=True)
class Spectrum:
    """Eigenpairs of a symmetric matrix.

    ``eigenvectors[:, l]`` pairs with ``eigenvalues[l]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        u = np.asarray(self.eigenvectors, dtype=float)
        if lam.ndim != 1 or u.shape != (lam.size, lam.size):
            raise InputError("eigenvalues/eigenvectors shapes do not match")
        lam.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "eigenvectors", u)

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        """``U diag(lambda) U^T``."""
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.T


def _normalize_signs(u: np.ndarray) -> np.ndarray:
    u = u.copy()
    for col in range(u.shape[1]):
        nz = np.flatnonzero(np.abs(u[:, col]) > SIGN_TOL)
        if nz.size and u[nz[0], col] < 0:
            u[:, col] = -u[:, col]
    return u


def jacobi_eigh(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi eigenvalue iteration for a real symmetric matrix.

    Dependency-free route used for cross-checking the LAPACK path and for
    ``eig_sym(..., method="jacobi")``. Suitable for small matrices only; every
    rotation is O(n) numpy work but the loop over pivots is Python.

    Returns
    -------
    eigenvalues, eigenvectors : ndarray
        Unsorted; columns of ``eigenvectors`` pair with ``eigenvalues``.

    Raises
    ------
    ConvergenceError
        When the off-diagonal mass is still above ``tol * ||a||_F`` after
        ``max_sweeps`` sweeps.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    thresh = tol * max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.max(np.abs(a - np.diag(np.diag(a))), initial=0.0)
        if off <= thresh:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= thresh * 1e-3:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    off = float(np.max(np.abs(a - np.diag(np.diag(a))), initial=0.0))
    raise ConvergenceError(
        f"Jacobi iteration did not converge in {max_sweeps} sweeps (max off-diagonal {off:.3e})",
        residual=off,
    )


def eig_sym(m: np.ndarray, method: str = "lapack") -> Spectrum:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending.

    Parameters
    ----------
    m : ndarray
        Symmetric matrix (typically a graph Laplacian).
    method : {"lapack", "jacobi"}
        ``"lapack"`` uses the divide-and-conquer symmetric driver from numpy;
        ``"jacobi"`` uses :func:`jacobi_eigh`.
    """
    m = check_symmetric(m)
    if method == "lapack":
        try:
            lam, u = np.linalg.eigh(m)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"symmetric eigensolver failed: {exc}") from exc
    elif method == "jacobi":
        lam, u = jacobi_eigh(m)
    else:
        raise ValueError(f"unknown eigensolver method {method!r}")
    order = np.argsort(lam, kind="stable")
    return Spectrum(lam[order], _normalize_signs(u[:, order]))


def _check_len(s, spec: Spectrum, what="signal"):
    s = np.asarray(s, dtype=float)
    if s.shape != (spec.n,):
        raise InputError(f"{what} has shape {s.shape}, expected ({spec.n},)")
    return s


def gft(s, spec: Spectrum) -> np.ndarray:
    """Graph Fourier transform ``U^T s``."""
    return spec.eigenvectors.T @ _check_len(s, spec)


def igft(shat, spec: Spectrum) -> np.ndarray:
    """Inverse graph Fourier transform ``U shat``."""
    return spec.eigenvectors @ _check_len(shat, spec, "spectrum")


def estimate_k_eigengap(spec: Spectrum, max_k: Optional[int] = None) -> int:
    """Number of clusters suggested by the largest gap in the low spectrum.

    Returns the ``j`` in ``1..max_k`` maximising ``lambda_j - lambda_{j-1}``,
    smallest ``j`` on ties. ``max_k`` defaults to ``n // 2``. A flat spectrum
    yields 1 and emits a :class:`SpectralWarning`.
    """
    n = spec.n
    if n < 2:
        raise InputError("eigengap estimation needs at least two eigenvalues")
    if max_k is None:
        max_k = n // 2
    if not 1 <= max_k < n:
        raise InputError(f"max_k must lie in [1, {n - 1}], got {max_k}")
    gaps = np.diff(spec.eigenvalues[: max_k + 1])
    scale = max(1.0, float(np.max(np.abs(spec.eigenvalues))))
    if np.all(np.abs(np.diff(spec.eigenvalues)) <= 1e-12 * scale):
        warnings.warn("flat spectrum: eigengap undefined, using k = 1", SpectralWarning, stacklevel=2)
        return 1
    return int(np.argmax(gaps)) + 1


@dataclass(frozen=True)
class FilterResponse:
    """Per-eigenvalue frequency response of a spectral filter.

    Attributes
    ----------
    alphas : ndarray
        Target response per eigenvalue index.
    kind : {"ideal", "polynomial"}
    response : ndarray
        Response actually applied. Equal to ``alphas`` for ideal filters; the
        fitted polynomial evaluated at each eigenvalue otherwise.
    coefficients : ndarray or None
        Polynomial coefficients ``h_0..h_d`` in the *normalised* variable
        ``lambda / scale``.
    scale : float
        Eigenvalue normalisation used for the fit (``lambda_max``, or 1).
    degree : int or None
        Effective polynomial degree after any rank-deficiency reduction.
    """

    alphas: np.ndarray
    kind: str = "ideal"
    response: np.ndarray = field(default=None)
    coefficients: Optional[np.ndarray] = None
    scale: float = 1.0
    degree: Optional[int] = None

    def __post_init__(self):
        alphas = np.asarray(self.alphas, dtype=float)
        response = alphas if self.response is None else np.asarray(self.response, dtype=float)
        if self.kind == "ideal" and not np.all(np.isin(alphas, (0.0, 1.0))):
            raise InputError("ideal filter alphas must be 0 or 1")
        if self.kind not in ("ideal", "polynomial"):
            raise InputError(f"unknown filter kind {self.kind!r}")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "response", response)

    @property
    def n(self) -> int:
        return self.alphas.size


def ideal_lowpass(spec: Spectrum, k: int) -> FilterResponse:
    """Ideal low-pass response keeping the ``k`` lowest frequencies.

    The cut-off is ``lambda_k``: index ``l`` passes iff ``lambda_l < lambda_k``.
    Eigenvalues tied with ``lambda_k`` (within ``1e-9 * max(1, lambda_max)``)
    are attenuated, so fewer than ``k`` components may pass when the spectrum
    is degenerate at the cut. ``k == n`` is accepted and gives the all-pass
    filter.
    """
    n = spec.n
    if not 1 <= k <= n:
        raise InputError(f"cut-off index k must lie in [1, {n}], got {k}")
    if k == n:
        return FilterResponse(np.ones(n))
    lam = spec.eigenvalues
    tol = 1e-9 * max(1.0, float(np.max(np.abs(lam))))
    alphas = (np.arange(n) < k) & (lam < lam[k] - tol)
    return FilterResponse(alphas.astype(float))


def fit_polynomial_filter(spec: Spectrum, alphas, degree: int) -> FilterResponse:
    """Least-squares polynomial approximation of a target response.

    Fits ``h`` minimising ``sum_l (sum_q h_q x_l^q - alphas_l)^2`` with
    ``x_l = lambda_l / lambda_max``. The normal equations are solved by
    Cholesky; if they are not numerically positive definite the fit falls
    back to an orthogonal least-squares solve. The degree is reduced (with a
    :class:`SpectralWarning`) when there are fewer distinct eigenvalues than
    coefficients.
    """
    alphas = _check_len(alphas, spec, "alphas")
    if degree < 0:
        raise InputError(f"polynomial degree must be >= 0, got {degree}")
    n = spec.n
    if n < degree + 1:
        raise InputError(f"need at least degree + 1 = {degree + 1} eigenvalues, have {n}")
    lam = spec.eigenvalues
    lam_max = float(np.max(np.abs(lam)))
    scale = lam_max if lam_max > 0 else 1.0
    x = lam / scale

    distinct = 1 + int(np.count_nonzero(np.diff(np.sort(x)) > 1e-9))
    eff = min(degree, distinct - 1)
    if eff < degree:
        warnings.warn(
            f"only {distinct} distinct eigenvalues; polynomial degree reduced from {degree} to {eff}",
            SpectralWarning,
            stacklevel=2,
        )

    vander = np.vander(x, eff + 1, increasing=True)
    gram = vander.T @ vander
    rhs = vander.T @ alphas
    try:
        cho = sla.cho_factor(gram)
        h = sla.cho_solve(cho, rhs)
        if np.linalg.cond(gram) > 1e12:
            raise np.linalg.LinAlgError("ill-conditioned normal equations")
        # iterative refinement recovers accuracy lost by squaring the condition number
        for _ in range(REFINE_STEPS):
            h = h + sla.cho_solve(cho, vander.T @ (alphas - vander @ h))
    except (np.linalg.LinAlgError, sla.LinAlgError):
        h = np.linalg.lstsq(vander, alphas, rcond=None)[0]
    return FilterResponse(
        alphas,
        kind="polynomial",
        response=vander @ h,
        coefficients=h,
        scale=scale,
        degree=eff,
    )


def apply_filter(shat, fr: FilterResponse) -> np.ndarray:
    """Componentwise product of a spectrum with the filter's realised response."""
    shat = np.asarray(shat, dtype=float)
    if shat.shape != fr.response.shape:
        raise InputError(f"spectrum has shape {shat.shape}, filter has {fr.response.shape}")
    return shat * fr.response

"""Square roots and eigen-decompositions in a weighted inner product.

A matrix M that is self-adjoint for the inner product induced by a
positive-definite gram matrix G satisfies (G M)^H = G M. Factoring
G = L L^H turns M into the ordinary Hermitian matrix L^{-1} (G M) L^{-H}
in orthonormal coordinates. Spectral calculus runs there: a standard
eigh is backward stable in the scale of M itself, so nothing inherits
the (often enormous) condition number of G. The alternative route via
the generalized eigenproblem loses the exact algebraic identities that
the dissipation module relies on.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla


class NotSelfAdjointError(ValueError):
    """G M is not Hermitian within tolerance."""


class NotPSDError(ValueError):
    """An eigenvalue is negative beyond the clamping tolerance."""


def _check_hermitian(product: np.ndarray, herm_tol: float) -> np.ndarray:
    skew = product - product.conj().T
    scale = max(float(np.linalg.norm(product, "fro")), 1e-300)
    if float(np.linalg.norm(skew, "fro")) > herm_tol * scale:
        raise NotSelfAdjointError(
            "matrix is not self-adjoint in the given inner product "
            f"(relative asymmetry {np.linalg.norm(skew, 'fro') / scale:.3e})"
        )
    return 0.5 * (product + product.conj().T)


def gram_sqrt_factors(product: np.ndarray, gram: np.ndarray,
                      tol: float | None = None, herm_tol: float = 1e-8):
    """Square-root factors of the G-self-adjoint M with product = G M.

    Returns (l, eigvals, s_hat) where gram = l l^H, eigvals are the
    (clamped) eigenvalues of M, and s_hat is the Hermitian square root of
    l^{-1} product l^{-H}; the assembled root is l^{-H} s_hat l^H. Keeping
    the factors lets callers evaluate ||M^{1/2} x||_G^2 = ||s_hat l^H x||^2
    without round-trip losses.

    Eigenvalues in [-tol, 0) are clamped to zero, below -tol raises
    NotPSDError; tol defaults to 1e-10 times the largest magnitude.
    """
    product = _check_hermitian(np.asarray(product), herm_tol)
    l = np.linalg.cholesky(gram)
    half = sla.solve_triangular(l, product, lower=True)
    hat = sla.solve_triangular(l, half.conj().T, lower=True).conj().T
    hat = 0.5 * (hat + hat.conj().T)
    eigvals, vecs = np.linalg.eigh(hat)
    scale = float(np.max(np.abs(eigvals))) if eigvals.size else 0.0
    if tol is None:
        tol = 1e-10 * max(scale, 1.0)
    lo = float(eigvals.min()) if eigvals.size else 0.0
    if lo < -tol:
        raise NotPSDError(
            f"matrix is not positive semidefinite: eigenvalue {lo:.6e} "
            f"below -{tol:.1e}"
        )
    clamped = np.clip(eigvals, 0.0, None)
    s_hat = (vecs * np.sqrt(clamped)) @ vecs.conj().T
    return l, clamped, s_hat


def assemble_from_factors(l: np.ndarray, s_hat: np.ndarray) -> np.ndarray:
    """Map the orthonormal-coordinate matrix back: l^{-H} s_hat l^H."""
    return sla.solve_triangular(l.conj().T, s_hat @ l.conj().T, lower=False)


def gram_eigh(matrix: np.ndarray, gram: np.ndarray, herm_tol: float = 1e-8):
    """Eigenpairs of a G-self-adjoint matrix.

    Returns (eigvals, vecs) with vecs G-orthonormal (vecs^H G vecs = I).
    Raises NotSelfAdjointError if G @ matrix is not Hermitian relative to
    its norm.
    """
    gm = _check_hermitian(gram @ matrix, herm_tol)
    eigvals, vecs = sla.eigh(gm, gram)
    return eigvals, vecs


def psd_sqrt(matrix: np.ndarray, gram: np.ndarray | None = None,
             tol: float | None = None) -> np.ndarray:
    """Principal square root of a PSD matrix, self-adjoint w.r.t. gram.

    Parameters
    ----------
    matrix : np.ndarray
        Square matrix, self-adjoint and positive semidefinite in the inner
        product induced by ``gram`` (identity if omitted).
    gram : np.ndarray, optional
        Positive-definite gram matrix.
    tol : float, optional
        Eigenvalues in [-tol, 0) are clamped to zero; below -tol raises
        NotPSDError. Defaults to 1e-10 times the largest eigenvalue
        magnitude.

    Returns
    -------
    np.ndarray
        S with S @ S = matrix and S self-adjoint w.r.t. gram.
    """
    matrix = np.asarray(matrix)
    if gram is None:
        gram = np.eye(matrix.shape[0])
    l, _, s_hat = gram_sqrt_factors(gram @ matrix, gram, tol=tol)
    root = assemble_from_factors(l, s_hat)
    if not np.iscomplexobj(matrix) and not np.iscomplexobj(gram):
        root = root.real
    return root

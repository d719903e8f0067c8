"""Cyclic Jacobi eigenvalue iteration for real symmetric matrices."""
from __future__ import annotations

import math

import numpy as np


class ConvergenceError(RuntimeError):
    pass


def off_norm(a: np.ndarray) -> float:
    """Frobenius norm of the off-diagonal part."""
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigenvalues(a, tol: float = 1e-10, max_sweeps: int = 100, history=None) -> np.ndarray:
    """Eigenvalues of the symmetric matrix ``a`` by cyclic Jacobi sweeps.

    Each sweep annihilates every off-diagonal pair ``(k, l)``, ``k < l``, in
    row order.  Stops once the off-diagonal Frobenius norm is ``<= tol``.
    If ``history`` is a list, the norm before each sweep and after the last
    one is appended to it.

    Raises ConvergenceError after ``max_sweeps`` sweeps.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, float(np.abs(a).max(initial=0)))):
        raise ValueError("matrix must be symmetric")
    for sweep in range(max_sweeps + 1):
        off = off_norm(a)
        if history is not None:
            history.append(off)
        if off <= tol:
            return np.diag(a).copy()
        if sweep == max_sweeps:
            break
        for k in range(n - 1):
            for l in range(k + 1, n):
                akl = a[k, l]
                if akl == 0.0:
                    continue
                diff = a[l, l] - a[k, k]
                if abs(akl) < abs(diff) * 1e-36:
                    t = akl / diff
                else:
                    theta = diff / (2.0 * akl)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ak = a[:, k].copy()
                al = a[:, l]
                a[:, k] = c * ak - s * al
                a[:, l] = s * ak + c * al
                rk = a[k, :].copy()
                rl = a[l, :]
                a[k, :] = c * rk - s * rl
                a[l, :] = s * rk + c * rl
                a[k, l] = a[l, k] = 0.0
    raise ConvergenceError(f"Jacobi did not reach off-norm {tol} within {max_sweeps} sweeps")

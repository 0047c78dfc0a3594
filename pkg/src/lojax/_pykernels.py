"""Pure numpy implementation of the numeric kernels.

Same signatures and semantics as the compiled ``_kernels`` extension; this
module is used when the extension is not built or ``LOJAX_PURE=1`` is set.
Work is vectorized across points instead of looping per point.
"""

from __future__ import annotations

import numpy as np

NAME = "python"

_MAX_HALVINGS = 11
_BLOWUP = 1e8


def _powers(Z: np.ndarray, maxdeg: int) -> np.ndarray:
    # (n, N, maxdeg+1) table of z_v^k by repeated multiplication
    N, n = Z.shape
    pw = np.empty((n, N, maxdeg + 1), dtype=np.complex128)
    pw[:, :, 0] = 1.0
    for k in range(1, maxdeg + 1):
        pw[:, :, k] = pw[:, :, k - 1] * Z.T
    return pw


def eval_map(exps, coeffs, offsets, maxdeg, Z):
    """Evaluate every polynomial of a packed map at each row of ``Z``."""
    Z = np.ascontiguousarray(Z, dtype=np.complex128)
    N, n = Z.shape
    pw = _powers(Z, maxdeg)
    mon = np.ones((N, exps.shape[0]), dtype=np.complex128)
    for v in range(n):
        col = exps[:, v]
        if col.any():
            mon *= pw[v][:, col]
    terms = mon * coeffs[None, :]
    npolys = len(offsets) - 1
    out = np.empty((N, npolys), dtype=np.complex128)
    for p in range(npolys):
        out[:, p] = terms[:, offsets[p]:offsets[p + 1]].sum(axis=1)
    return out


def _solve(J, F):
    """Batched solve; rows with a singular or non-finite system come back NaN."""
    m = F.shape[1]
    out = np.full_like(F, np.nan)
    try:
        out[:] = np.linalg.solve(J, F[..., None])[..., 0]
    except np.linalg.LinAlgError:
        for k in range(F.shape[0]):
            try:
                out[k] = np.linalg.solve(J[k], F[k])
            except np.linalg.LinAlgError:
                pass
    bad = ~np.isfinite(out).all(axis=1)
    if m == 1:
        bad |= np.abs(J[:, 0, 0]) < 1e-300
    out[bad] = np.nan
    return out


def newton_batch(gexps, gcoeffs, goffs, jexps, jcoeffs, joffs, maxdeg, W, Z0, tol, maxit):
    """Damped Newton for g(z) = w from each start.

    Returns (Z, ok, resid): final iterates, a success mask (residual <= tol
    within ``maxit`` steps) and final residual norms.
    """
    W = np.ascontiguousarray(W, dtype=np.complex128)
    Z = np.array(Z0, dtype=np.complex128, copy=True)
    N, m = Z.shape
    ok = np.zeros(N, dtype=bool)
    dead = np.zeros(N, dtype=bool)

    def residual(Zs, Ws):
        F = eval_map(gexps, gcoeffs, goffs, maxdeg, Zs) - Ws
        return F, np.sqrt((F.real ** 2 + F.imag ** 2).sum(axis=1))

    def step(Zs, Fs):
        J = eval_map(jexps, jcoeffs, joffs, maxdeg, Zs).reshape(-1, m, m)
        return _solve(J, Fs)

    F, r = residual(Z, W)
    resid = r.copy()
    for it in range(maxit + 1):
        live = ~ok & ~dead
        conv = live & (resid <= tol)
        if conv.any():
            idx = np.flatnonzero(conv)
            d = step(Z[idx], F[idx])
            fine = np.isfinite(d).all(axis=1)
            cand = Z[idx] - np.where(fine[:, None], d, 0)
            Ft, rt = residual(cand, W[idx])
            better = fine & (rt <= resid[idx])
            sel = idx[better]
            Z[sel] = cand[better]
            F[sel] = Ft[better]
            resid[sel] = rt[better]
            ok[idx] = True
        live = ~ok & ~dead
        if it == maxit or not live.any():
            break
        idx = np.flatnonzero(live)
        d = step(Z[idx], F[idx])
        singular = ~np.isfinite(d).all(axis=1)
        dead[idx[singular]] = True
        idx, d = idx[~singular], d[~singular]
        lam = 1.0
        pending = np.ones(len(idx), dtype=bool)
        for _ in range(_MAX_HALVINGS):
            if not pending.any():
                break
            sub = np.flatnonzero(pending)
            cand = Z[idx[sub]] - lam * d[sub]
            Ft, rt = residual(cand, W[idx[sub]])
            good = rt < resid[idx[sub]]
            tgt = idx[sub[good]]
            Z[tgt] = cand[good]
            F[tgt] = Ft[good]
            resid[tgt] = rt[good]
            pending[sub[good]] = False
            lam *= 0.5
        dead[idx[pending]] = True
        blown = (np.abs(Z) > _BLOWUP).any(axis=1)
        dead |= blown & ~ok
    return Z, ok, resid

"""NumPy implementations of the hot grid kernels.

These are the fallback twins of the compiled ``fastkern`` extension; both
backends must produce the same values (cross-checked in the test suite).

Conventions shared by both backends:

* ``fg_grid`` evaluates the helper-assisted rate pair (f, g) of the
  state-dependent MAC over an (alpha, beta) grid.  With
  ``p0p = p0 - beta^2*q``, ``A = p0p + (1+beta)^2*q + p + 1`` and
  ``B = q*(alpha-1-beta)^2 + 1``:

      f = (1/2) log2(p0p * A / (p0p*B + alpha^2*q))
      g = (1/2) log2(1 + p*(p0p + alpha^2*q) / (p0p*B + alpha^2*q))

  At the power boundary ``p0p == 0`` the formulas have removable or genuine
  singularities: for ``alpha == 0`` both collapse to the direct-cancellation
  value (1/2)log2(A/B); for ``alpha != 0`` the binning cost diverges, so
  f = -inf while g = (1/2)log2(1+p).  Negative ``p0p`` marks an illegal beta
  and yields -inf for both.
* ``c_margin_grid`` evaluates the full-cancellation margin
  ``p0p^2 - alpha^2*q*(p + 1 - p0p)`` with ``p0p = p0 - (alpha-1)^2*q``.
* ``helper_rate_grid`` evaluates the helper-limited outer-bound term as a
  function of the helper/state correlation, in bits.
"""

from __future__ import annotations

import numpy as np

P0P_FLOOR = 1e-300


def fg_grid(
    p0: float, q: float, p: float, alphas: np.ndarray, betas: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """f and g values on the alpha x beta grid, shape (len(alphas), len(betas))."""
    al = np.asarray(alphas, dtype=float)[:, None]
    be = np.asarray(betas, dtype=float)[None, :]
    p0p = p0 - be * be * q
    a_term = p0p + (1.0 + be) ** 2 * q + p + 1.0
    b_term = q * (al - 1.0 - be) ** 2 + 1.0
    den = p0p * b_term + al * al * q

    with np.errstate(divide="ignore", invalid="ignore"):
        f = 0.5 * np.log2(p0p * a_term / den)
        g = 0.5 * np.log2(1.0 + p * (p0p + al * al * q) / den)
        limit_fg = 0.5 * np.log2(np.broadcast_to(a_term / b_term, f.shape))

    degenerate = np.broadcast_to(np.abs(p0p) <= P0P_FLOOR, f.shape)
    alpha_zero = np.broadcast_to(al == 0.0, f.shape)
    f = np.where(degenerate & alpha_zero, limit_fg, f)
    g = np.where(degenerate & alpha_zero, limit_fg, g)
    f = np.where(degenerate & ~alpha_zero, -np.inf, f)
    g = np.where(degenerate & ~alpha_zero, 0.5 * np.log2(1.0 + p), g)

    illegal = np.broadcast_to(p0p < -P0P_FLOOR, f.shape)
    f = np.where(illegal, -np.inf, f)
    g = np.where(illegal, -np.inf, g)
    return f, g


def c_margin_grid(p0: float, q: float, p: float, alphas: np.ndarray) -> np.ndarray:
    """Full-cancellation margin over an alpha grid (nonnegative means satisfied)."""
    al = np.asarray(alphas, dtype=float)
    p0p = p0 - (al - 1.0) ** 2 * q
    return p0p * p0p - al * al * q * (p + 1.0 - p0p)


def helper_rate_grid(p0: float, q: float, p: float, rhos: np.ndarray) -> np.ndarray:
    """Helper-limited outer-bound term over a correlation grid, in bits."""
    r = np.asarray(rhos, dtype=float)
    den = q + 2.0 * r * np.sqrt(p0 * q) + p0 + 1.0
    return 0.5 * np.log2(1.0 + p / den) + 0.5 * np.log2(1.0 + p0 - r * r * p0)

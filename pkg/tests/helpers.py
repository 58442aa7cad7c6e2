"""Closed-form oracles shared by the test modules."""

import numpy as np


def dispersion_multiset(n: int, h: float, m: float, wilson_r: float) -> np.ndarray:
    """All 2n eigenvalues of the free periodic operator, sorted ascending.

    Plane waves exp(i k x) with k h = 2 pi j / n diagonalize the stencil:
    the central difference contributes sin(kh)/h, the Wilson term shifts the
    mass to m_eff = m + (2 r / h) sin^2(kh/2), and the 2x2 symbol has
    eigenvalues +-sqrt(m_eff^2 + (sin(kh)/h)^2).
    """
    kh = 2.0 * np.pi * np.arange(n) / n
    m_eff = m + (2.0 * wilson_r / h) * np.sin(0.5 * kh) ** 2
    e = np.sqrt(m_eff ** 2 + (np.sin(kh) / h) ** 2)
    return np.sort(np.concatenate([e, -e]))


def lowest_by_abs(values: np.ndarray, count: int) -> np.ndarray:
    """The count entries that a (|E|, E)-ordered solver keeps."""
    order = np.lexsort((values, np.abs(values)))
    return values[order][:count]


def symbol_eigenvector(kh: float, h: float, m: float, wilson_r: float,
                       branch: int) -> tuple[float, np.ndarray]:
    """Energy and spinor amplitude of one plane-wave mode.

    The 2x2 symbol in the (phi_plus, phi_minus) basis is
    [[s, c], [c, -s]] with s = sin(kh)/h and c = m_eff; branch +1/-1 picks
    the positive/negative energy eigenvector.
    """
    s = np.sin(kh) / h
    c = m + (2.0 * wilson_r / h) * np.sin(0.5 * kh) ** 2
    e = branch * np.hypot(s, c)
    # eigenvector of [[s, c], [c, -s]] for eigenvalue e
    if abs(c) > 1e-300:
        vec = np.array([c, e - s], dtype=complex)
    else:
        vec = np.array([1.0, 0.0], dtype=complex) if branch > 0 else \
            np.array([0.0, 1.0], dtype=complex)
    return float(e), vec / np.linalg.norm(vec)

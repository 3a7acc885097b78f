"""Independent reference implementations used only by the tests."""

import math

import numpy as np

from lambdatrap.trapping import trap_residual


def eq3_matrix_oracle(s, f, p):
    """Complex equations of motion re-read from a full 3x3 table of <J_nm>.

    Returns (dJ11, dJ22, dJ33, dJ13, dJ23, dJ12). Deliberately shares no code
    with lambdatrap.dynamics.
    """
    M = np.zeros((3, 3), dtype=complex)
    M[0, 0], M[1, 1], M[2, 2] = s.J11, s.J22, s.J33
    M[0, 2], M[1, 2], M[0, 1] = s.J13, s.J23, s.J12
    M[2, 0], M[2, 1], M[1, 0] = np.conj(s.J13), np.conj(s.J23), np.conj(s.J12)
    a1 = f.a1x - 1j * f.a1y
    a2 = f.a2x - 1j * f.a2y
    I = 1j

    def J(n, m):
        return M[n - 1, m - 1]

    D13 = J(1, 1) - J(3, 3)
    D23 = J(2, 2) - J(3, 3)
    dJ33 = (-I * p.g1 * (a1 * J(3, 1) - np.conj(a1) * J(1, 3))
            - I * p.g2 * (a2 * J(3, 2) - np.conj(a2) * J(2, 3))
            - (p.Gamma13 + p.Gamma23) * J(3, 3))
    dJ22 = I * p.g2 * (a2 * J(3, 2) - np.conj(a2) * J(2, 3)) + p.Gamma23 * J(3, 3)
    dJ11 = I * p.g1 * (a1 * J(3, 1) - np.conj(a1) * J(1, 3)) + p.Gamma13 * J(3, 3)
    dJ13 = I * p.delta1 * J(1, 3) - I * p.g1 * a1 * D13 - I * p.g2 * a2 * J(1, 2) - p.gamma13 * J(1, 3)
    dJ23 = (I * (p.delta1 + p.omega21) * J(2, 3) - I * p.g1 * a1 * J(2, 1)
            - I * p.g2 * a2 * D23 - p.gamma23 * J(2, 3))
    dJ12 = (I * p.delta2 * J(1, 2) + I * p.g1 * a1 * J(3, 2)
            - I * p.g2 * np.conj(a2) * J(1, 3) - p.gamma12 * J(1, 2))
    return dJ11, dJ22, dJ33, dJ13, dJ23, dJ12


def bracketed_window_phases(g1, g2, Delta, n_roots, grid=1e-4 * 2 * math.pi, tol=1e-14):
    """Positive roots of the trapping residual in Delta*t by scan + bisection.

    Scans |Delta| t on a uniform grid starting one cell above zero, brackets
    every sign change and bisects it down to ``tol``.
    """
    omega = abs(Delta)

    def R(phase):
        return trap_residual(g1, g2, Delta, phase / omega)

    roots = []
    k = 1
    prev_x, prev_r = grid, R(grid)
    while len(roots) < n_roots:
        k += 1
        x = k * grid
        r = R(x)
        if r == 0.0:
            roots.append(x)
        elif prev_r != 0.0 and (r > 0) != (prev_r > 0):
            lo, hi, rlo = prev_x, x, prev_r
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                rm = R(mid)
                if (rm > 0) == (rlo > 0):
                    lo, rlo = mid, rm
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
        prev_x, prev_r = x, r
    return roots

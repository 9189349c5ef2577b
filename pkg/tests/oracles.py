"""Independent brute-force oracles used to pin expected values.

Everything here is deliberately written from scratch against the closed-form
relations, without importing the package under test, so the tests compare two
unrelated routes to the same numbers.
"""

import math


def bisect_axial_length(contracted, r0, theta, tol=1e-13, max_iter=300):
    """Axial length X of a twisted string with packing-dependent radius.

    Solves the scalar residual

        g(X) = X^2 - Lc^2 + theta^2 * r0^2 * Lc / X = 0

    by plain bisection.  The physical root is the larger of the two positive
    roots, bracketed between the stationary point of g and Lc.  Returns None
    when no root exists (the twist has left the model's domain).
    """
    if theta == 0.0:
        return contracted
    a = theta * theta * r0 * r0 * contracted

    def g(x):
        return x * x - contracted * contracted + a / x

    lo = (0.5 * a) ** (1.0 / 3.0)  # argmin of g on (0, inf)
    if g(lo) > 0.0:
        return None  # residual never crosses zero: overtwisted
    hi = contracted
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def oracle_contracted_length(unloaded, stiffness, axial_force, twist_moment,
                             r0, winch_radius, phi):
    """Loaded, winch-adjusted reference length of the string."""
    if stiffness is None:
        return unloaded - winch_radius * phi
    tension = math.hypot(twist_moment / r0, axial_force)
    return unloaded + tension / stiffness - winch_radius * phi

def oracle_total_contraction(unloaded, stiffness, axial_force, twist_moment,
                             r0, winch_radius, theta, phi):
    """Total displacement: twist shortening plus winch take-up.

    Returns None when the twist angle is outside the solvable domain.
    """
    lc = oracle_contracted_length(unloaded, stiffness, axial_force,
                                  twist_moment, r0, winch_radius, phi)
    if lc <= 0.0:
        return None
    x = bisect_axial_length(lc, r0, theta)
    if x is None:
        return None
    return lc - x + winch_radius * phi


def oracle_axial_length_slope(contracted, r0, theta):
    """dX/dtheta along the solved branch, by implicit differentiation.

    From X^3 - Lc^2 X + theta^2 r0^2 Lc = 0:
        dX/dtheta = -2 theta r0^2 Lc / (3 X^2 - Lc^2)
    """
    x = bisect_axial_length(contracted, r0, theta)
    if x is None:
        return None
    return -2.0 * theta * r0 * r0 * contracted / (3.0 * x * x - contracted * contracted)


def oracle_radius_slope(contracted, r0, theta):
    """d r_var / dtheta via the chain rule on r = r0 * sqrt(Lc / X)."""
    x = bisect_axial_length(contracted, r0, theta)
    if x is None:
        return None
    dxdtheta = oracle_axial_length_slope(contracted, r0, theta)
    return -0.5 * r0 * math.sqrt(contracted) * x ** (-1.5) * dxdtheta


def oracle_fold_twist(contracted, r0):
    """Largest twist angle for which the implicit relation still has a root."""
    return math.sqrt(2.0 / (3.0 * math.sqrt(3.0))) * contracted / r0

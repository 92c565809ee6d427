import warnings

from scipy import integrate

from .errors import ConvergenceError


def quad_checked(func, a, b, epsabs, epsrel=0.0, limit=200, points=None, what="integral"):
    """Adaptive Gauss-Kronrod quadrature that raises when the error target is missed.

    Returns ``(value, error_estimate)``.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(func, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit,
                             points=points, full_output=1)
    value, err = out[0], out[1]
    target = max(epsabs, epsrel * abs(value))
    if not err <= target:
        raise ConvergenceError(f"{what} on [{a}, {b}] did not converge", err, target)
    return value, err

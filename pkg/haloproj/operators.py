"""
Quasi-nonexpansive operators and the smooth convex functions behind
subgradient projectors.

An operator T is quasi nonexpansive when |Tx - y| <= |x - y| for every x and
every fixed point y of T.  The driver only ever evaluates T, so an operator
is anything with ``evaluate(x) -> Vector`` and ``describe() -> str``.
Instances document what is known about their fixed-point sets through
``fixed_points``, which the test suite and ``verify_trace`` use to check the
quasi-nonexpansive inequalities.
"""
import numpy as np

from .constants import CHECK_SLACK, ELL2_BOX, STATIONARY_TOL, UNIT_NORMAL_TOL
from .error import (
    DimensionMismatch,
    DomainOverflow,
    InvalidParameter,
    StationaryPoint,
)
from .geometry import Vector, inner, norm


class Operator(object):
    """
    Interface for a map T: R^d -> R^d.

    Attributes
    ----------
    dim : int or None
        Dimension the operator acts on, or None if any dimension is accepted.
    fixed_points : list[Vector] or None
        Known fixed points.  An empty list means Fix T is known to be empty;
        None means nothing is claimed.
    quasi_nonexpansive : bool
        Whether the operator is claimed to be quasi nonexpansive.  Only
        claimed operators have their fixed points checked against the cuts
        by ``verify_trace``.
    """
    dim = None
    fixed_points = None
    quasi_nonexpansive = True

    def evaluate(self, x):
        raise NotImplementedError("evaluate")

    def describe(self):
        raise NotImplementedError("describe")

    def __call__(self, x):
        return self.evaluate(x)

    def check_dim(self, x):
        if self.dim is not None and x.dim != self.dim:
            raise DimensionMismatch(
                "%s acts on R^%d, got a point of dimension %d"
                % (self.describe(), self.dim, x.dim)
            )

    def known_fixed_points(self, dim):
        """
        Known fixed points in R^dim, or None if unknown.
        """
        return self.fixed_points

    def __repr__(self):
        return "<%s>" % self.describe()


class IdentityOperator(Operator):

    def evaluate(self, x):
        return x

    def describe(self):
        return "identity"

    def known_fixed_points(self, dim):
        # Every point is fixed; the origin is a representative.
        return [Vector.zeros(dim)]


class ContractionOperator(Operator):
    """
    T = alpha * Id with 0 <= alpha < 1; Fix T = {0}.
    """

    def __init__(self, alpha):
        alpha = float(alpha)
        if not 0.0 <= alpha < 1.0:
            raise InvalidParameter(
                "alpha must lie in [0, 1), got %r" % alpha
            )
        self.alpha = alpha

    def evaluate(self, x):
        return x * self.alpha

    def describe(self):
        return "contraction(alpha=%r)" % self.alpha

    def known_fixed_points(self, dim):
        return [Vector.zeros(dim)]


class TranslationOperator(Operator):
    """
    T x = x + alpha * direction with |direction| = 1; Fix T is empty.
    """

    def __init__(self, alpha, direction):
        alpha = float(alpha)
        if not alpha > 0.0:
            raise InvalidParameter("alpha must be positive, got %r" % alpha)
        if not isinstance(direction, Vector):
            direction = Vector(direction)
        if abs(norm(direction) - 1.0) > UNIT_NORMAL_TOL:
            raise InvalidParameter(
                "direction must have unit length, got |direction| = %r"
                % norm(direction)
            )
        self.alpha = alpha
        self.direction = direction

    @property
    def dim(self):
        return self.direction.dim

    def evaluate(self, x):
        self.check_dim(x)
        return x + self.direction * self.alpha

    def describe(self):
        return "translation(alpha=%r, direction=%s)" % (
            self.alpha, list(self.direction),
        )

    def known_fixed_points(self, dim):
        return []


def canonical_sigma(t):
    """
    The sign function sigma(t) = +1 for t < 1/2 and -1 otherwise, which has
    sigma(0) = 1 and sigma(1/2) = -1.
    """
    return 1.0 if t < 0.5 else -1.0


class SignOperator(Operator):
    """
    T x = x + sigma(x) on the real line, with sigma valued in {-1, +1}.

    Fix T is empty, and the range of Id - T lies in {-1, +1}, so T is
    trivially quasi nonexpansive and fixed-point closed.
    """
    dim = 1

    def __init__(self, sigma=canonical_sigma):
        self.sigma = sigma

    def evaluate(self, x):
        self.check_dim(x)
        s = self.sigma(x[0])
        if s not in (-1, 1):
            raise InvalidParameter(
                "sigma must take values in {-1, +1}, got %r at %r"
                % (s, x[0])
            )
        return Vector([x[0] + s])

    def describe(self):
        if self.sigma is canonical_sigma:
            return "sign(canonical)"
        return "sign(%s)" % getattr(self.sigma, '__name__', 'sigma')

    def known_fixed_points(self, dim):
        return []


class SmoothConvexFunction(object):
    """
    Interface for a convex, differentiable f >= 0 on R^dim.

    Methods
    -------
    value : callable[Vector -> float]
    gradient : callable[Vector -> Vector]
    """
    dim = None

    def value(self, x):
        raise NotImplementedError("value")

    def gradient(self, x):
        raise NotImplementedError("gradient")

    def describe(self):
        return type(self).__name__


class Ell2Example(SmoothConvexFunction):
    """
    f(x) = sum_{n=1..d} n * x_n^(2n), with gradient (2 n^2 x_n^(2n-1))_n.

    f is non-negative and vanishes only at the origin.  Inputs are restricted
    to the box [-10, 10]^d, and an overflowing power is reported rather than
    returned as infinity.
    """

    def __init__(self, dim):
        if dim < 1:
            raise InvalidParameter("dimension must be >= 1, got %r" % dim)
        self.dim = int(dim)
        self._n = np.arange(1, self.dim + 1, dtype=float)

    def _coords(self, x):
        if x.dim != self.dim:
            raise DimensionMismatch(
                "ell2_example(%d) evaluated at a point of dimension %d"
                % (self.dim, x.dim)
            )
        coords = x.coords
        if np.any(np.abs(coords) > ELL2_BOX):
            raise DomainOverflow(
                "ell2_example inputs must lie in [-%g, %g]^d, got max |x_n| "
                "= %r" % (ELL2_BOX, ELL2_BOX, float(np.abs(coords).max()))
            )
        return coords

    def _powers(self, coords, exponents):
        with np.errstate(over='raise', under='ignore'):
            try:
                return np.power(coords, exponents)
            except FloatingPointError:
                raise DomainOverflow(
                    "Overflow evaluating x_n^(2n) in dimension %d at "
                    "max |x_n| = %r"
                    % (self.dim, float(np.abs(coords).max()))
                )

    def value(self, x):
        coords = self._coords(x)
        return float(np.sum(self._n * self._powers(coords, 2 * self._n)))

    def gradient(self, x):
        coords = self._coords(x)
        return Vector(
            2.0 * self._n ** 2 * self._powers(coords, 2 * self._n - 1)
        )

    def describe(self):
        return "ell2_example(d=%d)" % self.dim


class SubgradientProjector(Operator):
    """
    Subgradient projector onto the level set {f <= 0}.

        T x = x                               if f(x) <= 0
        T x = x - f(x) / |g(x)|^2 * g(x)       otherwise

    T is quasi firmly nonexpansive with Fix T = {f <= 0}.

    Parameters
    ----------
    function : SmoothConvexFunction
    zeros : list[Vector], optional
        Known points of {f <= 0}, reported as fixed points.
    """

    def __init__(self, function, zeros=None):
        self.function = function
        self._zeros = zeros

    @property
    def dim(self):
        return self.function.dim

    @property
    def fixed_points(self):
        return self._zeros

    def evaluate(self, x):
        fx = self.function.value(x)
        if fx <= 0.0:
            return x
        g = self.function.gradient(x)
        g_norm = norm(g)
        if g_norm <= STATIONARY_TOL * fx:
            raise StationaryPoint(
                "stationary point with positive value: f(x) = %r, "
                "|g(x)| = %r" % (fx, g_norm)
            )
        # (f / |g|) * (g / |g|) avoids underflow in |g|^2.
        return x - g * (fx / g_norm / g_norm)

    def step_length(self, x):
        """
        |x - Tx| = f(x) / |g(x)| where f(x) > 0, else 0.
        """
        fx = self.function.value(x)
        if fx <= 0.0:
            return 0.0
        return fx / norm(self.function.gradient(x))

    def describe(self):
        return "subgradient_projector(%s)" % self.function.describe()


def identity_operator():
    return IdentityOperator()


def contraction_operator(alpha):
    return ContractionOperator(alpha)


def translation_operator(alpha, direction):
    return TranslationOperator(alpha, direction)


def sign_operator(sigma=canonical_sigma):
    return SignOperator(sigma)


def ell2_example(d):
    return Ell2Example(d)


def subgradient_projector(f):
    """
    Subgradient projector of ``f``.  For ell2_example the only zero of f is
    the origin, which is recorded as the fixed-point set.
    """
    zeros = None
    if isinstance(f, Ell2Example):
        zeros = [Vector.zeros(f.dim)]
    return SubgradientProjector(f, zeros=zeros)


def residual(T, x):
    """
    |x - Tx|.
    """
    return norm(x - T(x))


def check_quasi_nonexpansive(T, x, y, slack=CHECK_SLACK):
    """
    Whether |Tx - y| <= |x - y| (+ slack) for a fixed point y of T.
    """
    return norm(T(x) - y) <= norm(x - y) + slack


def check_quasi_firm(T, x, y, slack=CHECK_SLACK):
    """
    Whether |Tx - y|^2 + |x - Tx|^2 <= |x - y|^2 (+ slack) for a fixed point
    y of T.
    """
    tx = T(x)
    lhs = inner(tx - y, tx - y) + inner(x - tx, x - tx)
    return lhs <= inner(x - y, x - y) + slack


def demiclosedness_trace(d):
    """
    Evaluate the subgradient projector of ell2_example(d) along
    x_n = e_1 + e_n for 2 <= n <= d.

    The residual |x_n - T x_n| = (1 + n) / sqrt(4 + 4 n^4) vanishes as n
    grows while |x_n| = sqrt(2) stays put, so a vanishing residual does not
    force x_n towards Fix T = {0}.

    Returns
    -------
    rows : list[dict]
        One dict per n with keys 'n', 'value', 'gradient_norm', 'residual'
        and 'norm'.
    """
    f = ell2_example(d)
    T = subgradient_projector(f)
    rows = []
    for n in range(2, d + 1):
        x = Vector.unit(d, 0) + Vector.unit(d, n - 1)
        rows.append({
            'n': n,
            'value': f.value(x),
            'gradient_norm': norm(f.gradient(x)),
            'residual': residual(T, x),
            'norm': norm(x),
        })
    return rows

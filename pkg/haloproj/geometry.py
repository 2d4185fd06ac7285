"""
Points, halfspaces and the bisector halfspace H(x, y).

H(x, y) is the set of points at least as close to y as to x:

    H(x, y) = {z : |y - z| <= |x - z|}
            = {z : 2<z, x - y> <= |x|^2 - |y|^2}

which is the whole space when x == y and a halfspace otherwise.
"""
import numpy as np

from .constants import (
    EPS_DEGENERATE,
    EPS_FEAS,
    UNIT_NORMAL_TOL,
)
from .error import DimensionMismatch, NonFiniteValue, NotUnitNormal


class Vector(object):
    """
    An immutable point of R^d.

    Parameters
    ----------
    coords : array-like
        Finite real coordinates.  A scalar is read as a 1-d point.

    Notes
    -----
    ``np.asarray(v)`` returns a read-only view of the coordinates, so Vectors
    can be passed straight to numpy routines.
    """
    __slots__ = ('_coords',)

    def __init__(self, coords):
        arr = np.array(coords, dtype=float)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if arr.ndim != 1 or arr.size == 0:
            raise DimensionMismatch(
                "Expected a non-empty flat list of coordinates, got shape %s"
                % (arr.shape,)
            )
        if not np.all(np.isfinite(arr)):
            raise NonFiniteValue("Non-finite coordinate in %r" % (arr,))
        arr.setflags(write=False)
        self._coords = arr

    @classmethod
    def zeros(cls, dim):
        return cls(np.zeros(dim))

    @classmethod
    def unit(cls, dim, i):
        """
        The i-th standard unit vector of R^dim (0-based).
        """
        e = np.zeros(dim)
        e[i] = 1.0
        return cls(e)

    @property
    def coords(self):
        return self._coords

    @property
    def dim(self):
        return self._coords.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._coords
        return self._coords.astype(dtype)

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self._coords.tolist())

    def __getitem__(self, i):
        return float(self._coords[i])

    def __add__(self, other):
        _check_dims(self, other)
        return Vector(self._coords + other._coords)

    def __sub__(self, other):
        _check_dims(self, other)
        return Vector(self._coords - other._coords)

    def __mul__(self, scalar):
        return Vector(self._coords * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Vector(self._coords / float(scalar))

    def __neg__(self):
        return Vector(-self._coords)

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return np.array_equal(self._coords, other._coords)

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash(self._coords.tobytes())

    def __repr__(self):
        return "Vector(%s)" % (self._coords.tolist(),)


def _check_dims(u, v):
    if u.dim != v.dim:
        raise DimensionMismatch(
            "Dimension mismatch: %d != %d" % (u.dim, v.dim)
        )


def inner(u, v):
    """
    Euclidean inner product of two Vectors of equal dimension.
    """
    _check_dims(u, v)
    return float(np.dot(u.coords, v.coords))


def norm(u):
    """
    Euclidean norm of a Vector.
    """
    return float(np.linalg.norm(u.coords))


class HalfSpace(object):
    """
    The set {z : <normal, z> <= offset}, or the whole space.

    Parameters
    ----------
    normal : Vector
        Unit normal.  Ignored (and stored as zero) for the whole space.
    offset : float
        Right-hand side of the inequality.
    whole_space : bool, optional
        If True, the halfspace is all of R^d and contains every point.

    See Also
    --------
    HalfSpace.from_raw : build from an unnormalized (a, b) pair.
    halfspace_from_pair : the bisector halfspace H(x, y).
    """
    __slots__ = ('normal', 'offset', 'whole_space')

    def __init__(self, normal, offset, whole_space=False):
        offset = float(offset)
        if not np.isfinite(offset):
            raise NonFiniteValue("Non-finite halfspace offset %r" % offset)
        if whole_space:
            normal = Vector.zeros(normal.dim)
            offset = 0.0
        elif abs(norm(normal) - 1.0) > UNIT_NORMAL_TOL:
            raise NotUnitNormal(
                "Halfspace normals must have unit length, got |a| = %r"
                % norm(normal)
            )
        self.normal = normal
        self.offset = offset
        self.whole_space = bool(whole_space)

    @classmethod
    def whole(cls, dim):
        return cls(Vector.zeros(dim), 0.0, whole_space=True)

    @classmethod
    def from_raw(cls, a, b):
        """
        Normalize the inequality <a, z> <= b to unit-normal form.

        A zero ``a`` is rejected, since {z : 0 <= b} is either empty or the
        whole space and neither is a halfspace.
        """
        a = a if isinstance(a, Vector) else Vector(a)
        scale = norm(a)
        if scale == 0.0:
            raise NotUnitNormal("Cannot normalize a zero normal.")
        return cls(a / scale, float(b) / scale)

    @property
    def dim(self):
        return self.normal.dim

    def slack(self, z):
        """
        offset - <normal, z>; non-negative exactly on the halfspace.
        """
        if self.whole_space:
            _check_dims(self.normal, z)
            return np.inf
        return self.offset - inner(self.normal, z)

    def contains(self, z, eps=EPS_FEAS):
        return self.slack(z) >= -eps

    def __contains__(self, z):
        return self.contains(z)

    def __repr__(self):
        if self.whole_space:
            return "HalfSpace.whole(%d)" % self.dim
        return "HalfSpace(%r, %r)" % (self.normal, self.offset)


def halfspace_from_pair(x, y):
    """
    Build the bisector halfspace H(x, y) = {z : |y - z| <= |x - z|}.

    Returns the whole space when |x - y| <= EPS_DEGENERATE * max(1, |x|);
    otherwise the normalized form of 2<z, x - y> <= |x|^2 - |y|^2.
    """
    _check_dims(x, y)
    diff = x.coords - y.coords
    if np.linalg.norm(diff) <= EPS_DEGENERATE * max(1.0, norm(x)):
        return HalfSpace.whole(x.dim)
    # |x|^2 - |y|^2 == <x - y, x + y>, without the cancellation.
    a = 2.0 * diff
    b = float(np.dot(diff, x.coords + y.coords))
    return HalfSpace.from_raw(a, b)


def project_onto_halfspace(h, z):
    """
    Closed-form projection of z onto a single halfspace.
    """
    excess = -h.slack(z)
    if excess <= 0.0:
        return z
    return z - h.normal * excess

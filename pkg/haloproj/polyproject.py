"""
Projection of a fixed anchor onto a growing intersection of halfspaces.

The subproblem is the least-distance program

    minimize    |x0 - z|^2
    subject to  <a_i, z> <= b_i    for every stored constraint i

solved with a dual active-set method specialized to the identity Hessian.
Each solve leaves its working set behind as a warm start for the next one,
which is the usage pattern of the outer-approximation driver: one constraint
is appended, and the same anchor is projected again.  Multipliers are
recomputed from the working set on every start.
"""
from collections import namedtuple
from itertools import combinations

import numpy as np

from .constants import (
    BRUTE_FORCE_MAX_CONSTRAINTS,
    DEPENDENCE_TOL,
    EPS_DUAL,
    EPS_FEAS,
    QP_ITER_FACTOR,
    RANK_RTOL,
)
from .error import (
    ConstraintBudgetExceeded,
    DimensionMismatch,
    QPBreakdown,
)
from .geometry import Vector

POINT = 'point'
INFEASIBLE = 'infeasible'

# Certificate residual bounds accepted by verify_certificate.
CERTIFICATE_NORMAL_TOL = 1e-8
CERTIFICATE_OFFSET_TOL = 1e-10

WarmState = namedtuple('WarmState', ['anchor', 'active'])


class ProjectionOutcome(object):
    """
    Result of projecting an anchor onto a Polyhedron.

    Attributes
    ----------
    kind : {'point', 'infeasible'}
    point : Vector or None
        The projection, when ``kind == 'point'``.
    certificate : list[(int, float)] or None
        Farkas witness, when ``kind == 'infeasible'``: non-negative
        multipliers, summing to one, whose combination of constraint normals
        vanishes while the same combination of offsets is negative.
    working_set_changes : int
        Number of working-set additions and removals performed.
    """
    __slots__ = ('kind', 'point', 'certificate', 'working_set_changes')

    def __init__(self, kind, point=None, certificate=None,
                 working_set_changes=0):
        self.kind = kind
        self.point = point
        self.certificate = certificate
        self.working_set_changes = working_set_changes

    @classmethod
    def feasible(cls, point, working_set_changes=0):
        return cls(POINT, point=point, working_set_changes=working_set_changes)

    @classmethod
    def infeasible(cls, certificate, working_set_changes=0):
        return cls(
            INFEASIBLE,
            certificate=certificate,
            working_set_changes=working_set_changes,
        )

    @property
    def is_point(self):
        return self.kind == POINT

    def __repr__(self):
        if self.is_point:
            return "ProjectionOutcome(point=%r)" % (self.point,)
        return "ProjectionOutcome(infeasible, certificate=%r)" % (
            self.certificate,
        )


class Polyhedron(object):
    """
    An append-only list of unit-normal halfspaces in R^dim.

    Whole-space halfspaces are never stored.  The polyhedron also owns the
    warm-start state of its projection solver, so a Polyhedron must not be
    shared between concurrent projections.

    Parameters
    ----------
    dim : int
        Ambient dimension.
    eps_feas : float, optional
        Primal feasibility tolerance.
    eps_dual : float, optional
        Multiplier sign tolerance.
    """

    def __init__(self, dim, eps_feas=EPS_FEAS, eps_dual=EPS_DUAL):
        if dim < 1:
            raise DimensionMismatch("Polyhedron dimension must be >= 1.")
        self.dim = dim
        self.eps_feas = eps_feas
        self.eps_dual = eps_dual
        self.constraints = []
        self.warm_state = None
        self._normals = np.empty((8, dim))
        self._offsets = np.empty(8)

    def __len__(self):
        return len(self.constraints)

    @property
    def normals(self):
        return self._normals[:len(self.constraints)]

    @property
    def offsets(self):
        return self._offsets[:len(self.constraints)]

    def add_constraint(self, h):
        """
        Append a halfspace.  The whole space leaves the polyhedron unchanged.

        Returns the polyhedron itself.
        """
        if h.dim != self.dim:
            raise DimensionMismatch(
                "Constraint of dimension %d added to a polyhedron in R^%d"
                % (h.dim, self.dim)
            )
        if h.whole_space:
            return self

        k = len(self.constraints)
        if k == self._offsets.shape[0]:
            self._normals = np.concatenate(
                [self._normals, np.empty_like(self._normals)]
            )
            self._offsets = np.concatenate(
                [self._offsets, np.empty_like(self._offsets)]
            )
        self._normals[k] = h.normal.coords
        self._offsets[k] = h.offset
        self.constraints.append(h)
        return self

    def contains(self, z, eps=None):
        eps = self.eps_feas if eps is None else eps
        if not self.constraints:
            return True
        return bool(np.all(self.normals.dot(np.asarray(z)) - self.offsets
                           <= eps))

    def project(self, x0, warm_start=True):
        """
        Project ``x0`` onto the polyhedron.

        Parameters
        ----------
        x0 : Vector
            The anchor.
        warm_start : bool, optional
            Start from the working set left by the previous solve for the same
            anchor.  The result does not depend on this flag beyond rounding.

        Returns
        -------
        outcome : ProjectionOutcome

        Raises
        ------
        QPBreakdown
            If more than 50 * (constraints + dimension) working-set changes
            are needed.
        """
        if x0.dim != self.dim:
            raise DimensionMismatch(
                "Anchor of dimension %d projected onto a polyhedron in R^%d"
                % (x0.dim, self.dim)
            )
        if not self.constraints:
            return ProjectionOutcome.feasible(x0)

        anchor = x0.coords
        active = []
        state = self.warm_state
        if (warm_start and state is not None and
                np.array_equal(state.anchor, anchor) and
                all(i < len(self) for i in state.active)):
            active = list(state.active)

        solver = _DualActiveSet(
            self.normals,
            self.offsets,
            anchor,
            eps_feas=self.eps_feas,
            eps_dual=self.eps_dual,
            max_changes=QP_ITER_FACTOR * (len(self) + self.dim),
        )
        outcome = solver.solve(active)
        if outcome.is_point:
            self.warm_state = WarmState(
                anchor=anchor, active=tuple(solver.active),
            )
        else:
            self.warm_state = None
        return outcome


class _WorkingSetFactorization(object):
    """
    SVD of the working-set normals, truncated at RANK_RTOL.
    """
    __slots__ = ('_range', '_left', '_sigma', '_null')

    def __init__(self, normals, dim):
        if normals.shape[0] == 0:
            self._range = np.empty((0, dim))
            self._left = np.empty((0, 0))
            self._sigma = np.empty(0)
            self._null = np.eye(dim)
            return
        U, S, Vt = np.linalg.svd(normals, full_matrices=True)
        rank = int(np.sum(S > RANK_RTOL * S[0]))
        self._left = U[:, :rank]
        self._sigma = S[:rank]
        self._range = Vt[:rank]
        self._null = Vt[rank:]

    def solve(self, offsets, anchor):
        """
        Nearest point to ``anchor`` on {z : A z = offsets}, and multipliers.

        The point is assembled as A^+ offsets + N N^T anchor, so a point much
        smaller than the anchor keeps its relative accuracy.
        """
        z = self._null.T.dot(self._null.dot(anchor))
        if self._sigma.size:
            z = z + self._range.T.dot(
                self._left.T.dot(offsets) / self._sigma
            )
        return z, self.coefficients(anchor - z)

    def coefficients(self, v):
        """
        Minimum-norm c with A^T c equal to the row-space component of v.
        """
        if not self._sigma.size:
            return np.zeros(self._left.shape[0])
        return self._left.dot(self._range.dot(v) / self._sigma)

    def null_component(self, v):
        return self._null.T.dot(self._null.dot(v))


class _DualActiveSet(object):
    """
    Goldfarb-Idnani iteration for min |z - x0|^2 s.t. A z <= b.

    The iterate is always optimal for the working set taken as equalities and
    dual feasible; violated constraints are added one at a time, the most
    violated first (lowest index on ties), with partial steps dropping any
    working constraint whose multiplier reaches zero.
    """

    def __init__(self, normals, offsets, anchor, eps_feas, eps_dual,
                 max_changes):
        self.A = normals
        self.b = offsets
        self.x0 = anchor
        self.dim = anchor.shape[0]
        self.eps_feas = eps_feas
        self.eps_dual = eps_dual
        self.max_changes = max_changes
        self.changes = 0
        self.active = []
        self.multipliers = np.empty(0)
        self.z = anchor.copy()
        self._fact = None

    def _count_change(self):
        self.changes += 1
        if self.changes > self.max_changes:
            raise QPBreakdown(
                "Active-set solver exceeded %d working-set changes "
                "(%d constraints in R^%d)."
                % (self.max_changes, self.A.shape[0], self.dim)
            )

    def _refactor(self):
        self._fact = _WorkingSetFactorization(self.A[self.active], self.dim)

    def _resolve(self):
        """
        Recompute the iterate from the working set, dropping any constraint
        whose multiplier has gone negative.
        """
        while True:
            self._refactor()
            self.z, self.multipliers = self._fact.solve(
                self.b[self.active], self.x0,
            )
            if not self.active:
                return
            worst = int(np.argmin(self.multipliers))
            if self.multipliers[worst] >= -self.eps_dual:
                return
            del self.active[worst]
            self._count_change()

    def solve(self, active):
        self.active = list(active)
        self._resolve()
        while True:
            violation = self.A.dot(self.z) - self.b
            p = int(np.argmax(violation))
            if violation[p] <= self.eps_feas:
                return ProjectionOutcome.feasible(
                    Vector(self.z), working_set_changes=self.changes,
                )
            certificate = self._add(p)
            if certificate is not None:
                return ProjectionOutcome.infeasible(
                    certificate, working_set_changes=self.changes,
                )

    def _add(self, p):
        """
        Bring constraint p into the working set.

        Returns a Farkas certificate if p cannot be satisfied together with
        the current working set, else None.
        """
        a_p = self.A[p]
        lam_p = 0.0
        while True:
            coef = self._fact.coefficients(a_p)
            step_dir = self._fact.null_component(a_p)
            step_norm = np.linalg.norm(step_dir)

            # Largest step before a working multiplier reaches zero.
            partial, drop = np.inf, None
            blocking = np.flatnonzero(coef > self.eps_dual)
            if blocking.size:
                ratios = self.multipliers[blocking] / coef[blocking]
                k = int(np.argmin(ratios))
                partial, drop = max(ratios[k], 0.0), int(blocking[k])

            # Step that makes constraint p active.
            full = np.inf
            if step_norm > DEPENDENCE_TOL:
                full = (a_p.dot(self.z) - self.b[p]) / step_norm ** 2

            if full == np.inf and partial == np.inf:
                return self._certificate(p, coef)

            t = min(full, partial)
            self.z = self.z - t * step_dir
            self.multipliers = self.multipliers - t * coef
            lam_p += t

            if full <= partial:
                self.active.append(p)
                self._count_change()
                self._resolve()
                return None

            del self.active[drop]
            self.multipliers = np.delete(self.multipliers, drop)
            self._count_change()
            self._refactor()

    def _certificate(self, p, coef):
        weights = {p: 1.0}
        for i, c in zip(self.active, coef):
            if c < 0.0:
                weights[i] = -c
        total = sum(weights.values())
        return sorted((i, w / total) for i, w in weights.items())


def certificate_residuals(polyhedron, certificate):
    """
    Norm of the combined normal and value of the combined offset.
    """
    combined_normal = np.zeros(polyhedron.dim)
    combined_offset = 0.0
    for i, y in certificate:
        combined_normal += y * polyhedron.normals[i]
        combined_offset += y * polyhedron.offsets[i]
    return float(np.linalg.norm(combined_normal)), float(combined_offset)


def verify_certificate(polyhedron, certificate,
                       normal_tol=CERTIFICATE_NORMAL_TOL,
                       offset_tol=CERTIFICATE_OFFSET_TOL):
    """
    Check that ``certificate`` proves ``polyhedron`` empty.
    """
    if not certificate:
        return False
    if any(y < 0.0 or not 0 <= i < len(polyhedron) for i, y in certificate):
        return False
    normal_norm, offset = certificate_residuals(polyhedron, certificate)
    return normal_norm <= normal_tol and offset <= -offset_tol


# ==============================
# Brute-force enumeration oracle
# ==============================

ORACLE_TOL = 1e-9


def _affine_projection(normals, offsets, anchor):
    """
    Project onto {z : normals z = offsets} through the normal equations.

    Returns (point, multipliers), or (None, None) if the system has no
    solution.
    """
    gram = normals.dot(normals.T)
    rhs = normals.dot(anchor) - offsets
    lam = np.linalg.lstsq(gram, rhs, rcond=RANK_RTOL)[0]
    z = anchor - normals.T.dot(lam)
    if np.linalg.norm(normals.dot(z) - offsets) > ORACLE_TOL:
        return None, None
    return z, lam


def _farkas_search(normals, offsets):
    """
    Look for y >= 0, sum(y) = 1, with y^T A = 0 and y^T b < 0 on subsets of
    at most dim + 1 constraints.
    """
    k, dim = normals.shape
    for size in range(1, min(k, dim + 1) + 1):
        for subset in combinations(range(k), size):
            idx = list(subset)
            system = np.vstack([normals[idx].T, np.ones((1, size))])
            rhs = np.zeros(dim + 1)
            rhs[-1] = 1.0
            y = np.linalg.lstsq(system, rhs, rcond=RANK_RTOL)[0]
            if np.linalg.norm(system.dot(y) - rhs) > ORACLE_TOL:
                continue
            if y.min() < -ORACLE_TOL or offsets[idx].dot(y) >= -ORACLE_TOL:
                continue
            y = np.clip(y, 0.0, None)
            y /= y.sum()
            return [(i, float(w)) for i, w in zip(idx, y) if w > 0.0]
    return []


def brute_force_project(polyhedron, x0):
    """
    Project by enumerating candidate active sets.

    Every subset of at most ``dim`` constraints is taken as an equality
    system; candidates that are primal feasible with non-negative multipliers
    are kept and the one nearest ``x0`` wins.  When no candidate survives the
    polyhedron is empty and a Farkas certificate is searched for on subsets
    of at most ``dim + 1`` constraints.

    Raises
    ------
    ConstraintBudgetExceeded
        For polyhedra with more than 20 constraints.
    """
    k = len(polyhedron)
    if k > BRUTE_FORCE_MAX_CONSTRAINTS:
        raise ConstraintBudgetExceeded(
            "Brute-force projection supports at most %d constraints, got %d."
            % (BRUTE_FORCE_MAX_CONSTRAINTS, k)
        )
    if x0.dim != polyhedron.dim:
        raise DimensionMismatch(
            "Anchor of dimension %d projected onto a polyhedron in R^%d"
            % (x0.dim, polyhedron.dim)
        )
    if k == 0:
        return ProjectionOutcome.feasible(x0)

    A, b, anchor = polyhedron.normals, polyhedron.offsets, x0.coords
    best, best_dist = None, np.inf
    for size in range(0, min(k, polyhedron.dim) + 1):
        for subset in combinations(range(k), size):
            idx = list(subset)
            if idx:
                z, lam = _affine_projection(A[idx], b[idx], anchor)
                if z is None or lam.min() < -ORACLE_TOL:
                    continue
            else:
                z = anchor
            if np.any(A.dot(z) - b > ORACLE_TOL):
                continue
            dist = np.linalg.norm(anchor - z)
            if dist < best_dist:
                best, best_dist = z, dist

    if best is None:
        return ProjectionOutcome.infeasible(_farkas_search(A, b))
    return ProjectionOutcome.feasible(Vector(best))

"""
Outer-approximation iteration for the nearest fixed point of an operator.

Starting from C_0 = R^d, each step evaluates y_n = T x_n, cuts the current
polyhedron with the bisector halfspace H(x_n, y_n) and projects the anchor
x_0 onto the result:

    C_{n+1} = C_n  intersected with  H(x_n, y_n)
    x_{n+1} = P_{C_{n+1}} x_0

For a quasi-nonexpansive, fixed-point-closed T exactly one of three things
happens: x_n converges to the projection of x_0 onto Fix T, |x_n| grows
without bound, or some C_n is empty.  A finite run reports these as
Converged, Diverging and Infeasible; FixedPointHit marks an anchor that is
already fixed, and MaxIterReached an undecided run.
"""
from collections import namedtuple
from enum import Enum

import numpy as np
from traitlets import Float, Instance, Integer, TraitError, validate
from traitlets.config import LoggingConfigurable

from .constants import (
    DEFAULT_DIVERGENCE_RADIUS,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL_RESIDUAL,
    EPS_DUAL,
    EPS_FEAS,
    TOL_OVER_EPS_FEAS,
    TRACE_VECTOR_BUDGET,
)
from .error import DimensionMismatch, ResolutionLimit
from .geometry import Vector, halfspace_from_pair, norm
from .operators import Operator
from .polyproject import Polyhedron, verify_certificate


class RunStatus(Enum):
    CONVERGED = 'Converged'
    FIXED_POINT_HIT = 'FixedPointHit'
    DIVERGING = 'Diverging'
    INFEASIBLE = 'Infeasible'
    MAX_ITER_REACHED = 'MaxIterReached'

    def __str__(self):
        return self.value


class RunConfig(LoggingConfigurable):
    """
    Inputs and stopping thresholds for a single run.
    """
    x0 = Instance(
        Vector,
        allow_none=True,
        help="Anchor point whose nearest fixed point is sought.",
    )

    operator = Instance(
        Operator,
        allow_none=True,
        help="Operator T whose fixed-point set is approximated.",
    )

    max_iter = Integer(
        default_value=DEFAULT_MAX_ITER,
        config=True,
        help="Maximum number of cuts before reporting MaxIterReached.",
    )

    tol_residual = Float(
        default_value=DEFAULT_TOL_RESIDUAL,
        config=True,
        help="Stop once |x_n - T x_n| is at most this.",
    )

    divergence_radius = Float(
        default_value=DEFAULT_DIVERGENCE_RADIUS,
        config=True,
        help="Report Diverging once |x_n| exceeds this.",
    )

    eps_feas = Float(
        default_value=EPS_FEAS,
        config=True,
        help="Primal feasibility tolerance of the projection subproblem.",
    )

    eps_dual = Float(
        default_value=EPS_DUAL,
        config=True,
        help="Multiplier sign tolerance of the projection subproblem.",
    )

    trace_vector_budget = Integer(
        default_value=TRACE_VECTOR_BUDGET,
        config=True,
        help=(
            "Keep every x_n and y_n in the trace while dim * max_iter is "
            "at most this many scalars; otherwise keep only the last ones."
        ),
    )

    @validate('max_iter')
    def _validate_max_iter(self, proposal):
        if proposal['value'] < 1:
            raise TraitError(
                "max_iter must be >= 1, got %r" % proposal['value']
            )
        return proposal['value']

    @validate('tol_residual', 'divergence_radius', 'eps_feas', 'eps_dual')
    def _validate_positive(self, proposal):
        value = proposal['value']
        if not (value > 0.0 and np.isfinite(value)):
            raise TraitError(
                "%s must be positive and finite, got %r"
                % (proposal['trait'].name, value)
            )
        return value

    @property
    def dim(self):
        return self.x0.dim

    def check(self):
        """
        Raise if the anchor or operator is missing, they disagree on
        dimension, or tol_residual is too small for eps_feas to resolve.
        """
        if self.x0 is None:
            raise TraitError("RunConfig.x0 is required.")
        if self.operator is None:
            raise TraitError("RunConfig.operator is required.")
        op_dim = self.operator.dim
        if op_dim is not None and op_dim != self.x0.dim:
            raise DimensionMismatch(
                "Operator %s acts on R^%d but x0 has dimension %d"
                % (self.operator.describe(), op_dim, self.x0.dim)
            )
        if not self.tol_residual > TOL_OVER_EPS_FEAS * self.eps_feas:
            raise TraitError(
                "tol_residual (%r) must exceed %g * eps_feas (%r)."
                % (self.tol_residual, TOL_OVER_EPS_FEAS, self.eps_feas)
            )


class TraceEntry(object):
    """
    One recorded iterate.

    ``x_n`` and ``y_n`` are None when the trace keeps scalars only.
    """
    __slots__ = (
        'n',
        'x_n',
        'y_n',
        'dist_to_x0',
        'residual',
        'num_constraints',
        'qp_working_set_changes',
    )

    def __init__(self, n, x_n, y_n, dist_to_x0, residual, num_constraints,
                 qp_working_set_changes):
        self.n = n
        self.x_n = x_n
        self.y_n = y_n
        self.dist_to_x0 = dist_to_x0
        self.residual = residual
        self.num_constraints = num_constraints
        self.qp_working_set_changes = qp_working_set_changes

    def __repr__(self):
        return (
            "TraceEntry(n=%d, residual=%r, dist_to_x0=%r, "
            "num_constraints=%d)"
            % (self.n, self.residual, self.dist_to_x0, self.num_constraints)
        )


class RunResult(object):
    """
    Terminal status, final point and trace of a run.

    Attributes
    ----------
    status : RunStatus
    final_point : Vector or None
        None for Infeasible runs.
    trace : list[TraceEntry]
    infeasibility_certificate : list[(int, float)] or None
    infeasible_at : int or None
        Index n of the first empty C_n.
    polyhedron : Polyhedron or None
        The accumulated cuts; None for the baseline iteration.
    """

    def __init__(self, status, final_point, trace,
                 infeasibility_certificate=None, infeasible_at=None,
                 polyhedron=None):
        self.status = status
        self.final_point = final_point
        self.trace = trace
        self.infeasibility_certificate = infeasibility_certificate
        self.infeasible_at = infeasible_at
        self.polyhedron = polyhedron

    @property
    def iterations(self):
        return len(self.trace)

    @property
    def beta(self):
        """
        sup_n |x_0 - x_n| over the recorded trace.
        """
        return self.trace[-1].dist_to_x0

    @property
    def residual(self):
        return self.trace[-1].residual

    def certificate_verifies(self):
        if self.infeasibility_certificate is None or self.polyhedron is None:
            return False
        return verify_certificate(
            self.polyhedron, self.infeasibility_certificate,
        )

    def __repr__(self):
        return "RunResult(status=%s, iterations=%d, final_point=%r)" % (
            self.status, self.iterations, self.final_point,
        )


class _TraceRecorder(object):
    """
    Accumulates trace entries, dropping old vectors when over budget.
    """

    def __init__(self, keep_vectors):
        self.keep_vectors = keep_vectors
        self.entries = []

    def record(self, n, x0, x, y, num_constraints, changes):
        if not self.keep_vectors and self.entries:
            self.entries[-1].x_n = self.entries[-1].y_n = None
        entry = TraceEntry(
            n=n,
            x_n=x,
            y_n=y,
            dist_to_x0=norm(x0 - x),
            residual=norm(x - y),
            num_constraints=num_constraints,
            qp_working_set_changes=changes,
        )
        self.entries.append(entry)
        return entry


def _operator_image(operator, x):
    return operator(x)


def _outer_approximation(cfg, pick_y):
    """
    Run the cutting iteration with y_n = pick_y(T, x_n).
    """
    cfg.check()
    log = cfg.log
    x0, T = cfg.x0, cfg.operator
    poly = Polyhedron(cfg.dim, eps_feas=cfg.eps_feas, eps_dual=cfg.eps_dual)
    recorder = _TraceRecorder(
        keep_vectors=cfg.dim * cfg.max_iter <= cfg.trace_vector_budget,
    )
    log.info(
        "Outer approximation for %s from x0 in R^%d (max_iter=%d).",
        T.describe(), cfg.dim, cfg.max_iter,
    )

    def finish(status, final_point, **kwargs):
        log.info(
            "Finished with status %s after %d iterate(s).",
            status, len(recorder.entries),
        )
        return RunResult(
            status, final_point, recorder.entries, polyhedron=poly, **kwargs
        )

    x, changes, n = x0, 0, 0
    while True:
        y = pick_y(T, x)
        entry = recorder.record(n, x0, x, y, len(poly), changes)
        log.debug(
            "n=%d residual=%.3e dist_to_x0=%.6e constraints=%d",
            n, entry.residual, entry.dist_to_x0, len(poly),
        )

        cut = halfspace_from_pair(x, y)
        if entry.residual <= cfg.tol_residual:
            if n == 0 and cut.whole_space:
                return finish(RunStatus.FIXED_POINT_HIT, x)
            return finish(RunStatus.CONVERGED, x)
        if n > 0 and norm(x) > cfg.divergence_radius:
            return finish(RunStatus.DIVERGING, x)
        if n >= cfg.max_iter:
            return finish(RunStatus.MAX_ITER_REACHED, x)
        if cut.whole_space:
            raise ResolutionLimit(
                "|x_%d - T x_%d| = %.3e exceeds tol_residual but the cut "
                "collapses at |x_%d| = %.3e."
                % (n, n, entry.residual, n, norm(x))
            )

        poly.add_constraint(cut)
        outcome = poly.project(x0)
        if not outcome.is_point:
            log.info("C_%d is empty; the iteration is not well defined.",
                     n + 1)
            return finish(
                RunStatus.INFEASIBLE,
                None,
                infeasibility_certificate=outcome.certificate,
                infeasible_at=n + 1,
            )
        x, changes, n = outcome.point, outcome.working_set_changes, n + 1


def run(cfg):
    """
    Run the outer-approximation iteration with y_n = T x_n.

    Parameters
    ----------
    cfg : RunConfig

    Returns
    -------
    result : RunResult

    Raises
    ------
    QPBreakdown
        If a projection subproblem fails to terminate.
    ResolutionLimit
        If x_n and T x_n are too close to separate at the scale of x_n while
        the residual is still above tol_residual.
    """
    return _outer_approximation(cfg, _operator_image)


def halpern_baseline(cfg):
    """
    Anchored averaging x_{n+1} = x_0 / (n + 2) + (1 - 1 / (n + 2)) T x_n.

    Stops on ``cfg.tol_residual`` or ``cfg.max_iter``.  Intended for
    nonexpansive operators with a fixed point; the result has the same shape
    as ``run`` with no constraints.
    """
    cfg.check()
    log = cfg.log
    x0, T = cfg.x0, cfg.operator
    recorder = _TraceRecorder(
        keep_vectors=cfg.dim * cfg.max_iter <= cfg.trace_vector_budget,
    )
    log.info("Halpern baseline for %s.", T.describe())

    x, n = x0, 0
    while True:
        y = T(x)
        entry = recorder.record(n, x0, x, y, 0, 0)
        if entry.residual <= cfg.tol_residual:
            status = (
                RunStatus.FIXED_POINT_HIT if n == 0 else RunStatus.CONVERGED
            )
            break
        if n >= cfg.max_iter:
            status = RunStatus.MAX_ITER_REACHED
            break
        w = 1.0 / (n + 2)
        x = x0 * w + y * (1.0 - w)
        n += 1

    log.info("Halpern baseline finished with status %s after %d iterate(s).",
             status, len(recorder.entries))
    return RunResult(status, x, recorder.entries)


# ==================
# Trace verification
# ==================

Violation = namedtuple('Violation', ['check', 'm', 'n', 'excess'])

MONOTONE_DISTANCE = 'monotone_distance'
VARIATIONAL = 'variational_inequality'
CUT_DISTANCE = 'cut_distance'
CUT_MEMBERSHIP = 'cut_membership'
FIXED_POINT_CONTAINMENT = 'fixed_point_containment'


def _cut_arrays(xs, ys):
    """
    Unit normals and offsets of H(x_m, y_m); the whole space gets a zero
    normal and an infinite offset.
    """
    dim = xs.shape[1]
    normals = np.zeros((len(xs), dim))
    offsets = np.full(len(xs), np.inf)
    for m, (x, y) in enumerate(zip(xs, ys)):
        h = halfspace_from_pair(Vector(x), Vector(y))
        if not h.whole_space:
            normals[m] = h.normal.coords
            offsets[m] = h.offset
    return normals, offsets


def verify_trace(result, cfg):
    """
    Check the inequalities every exact trajectory satisfies.

    For recorded m < n:

    - |x_0 - x_n| is nondecreasing (within eps_feas);
    - <x_n - x_m, x_0 - x_m> <= eps_feas * (1 + |x_n - x_m| |x_0 - x_m|);
    - |y_m - x_n| <= |x_m - x_n| + eps_feas;
    - x_n lies in H(x_m, y_m) within eps_feas;

    and, when the operator claims to be quasi nonexpansive, every known
    fixed point lies in every cut.

    Returns
    -------
    violations : list[Violation]
        Empty when every check passes.
    """
    eps = cfg.eps_feas
    trace = result.trace
    violations = []

    best, best_m = -np.inf, None
    for entry in trace:
        if entry.dist_to_x0 < best - eps:
            violations.append(Violation(
                MONOTONE_DISTANCE, best_m, entry.n,
                best - entry.dist_to_x0,
            ))
        if entry.dist_to_x0 > best:
            best, best_m = entry.dist_to_x0, entry.n

    with_vectors = [e for e in trace if e.x_n is not None]
    if not with_vectors:
        return violations
    ns = [e.n for e in with_vectors]
    xs = np.array([e.x_n.coords for e in with_vectors])
    ys = np.array([e.y_n.coords for e in with_vectors])
    x0 = cfg.x0.coords
    normals, offsets = _cut_arrays(xs, ys)

    for j in range(1, len(with_vectors)):
        xn = xs[j]
        xm, ym = xs[:j], ys[:j]
        to_n = xn - xm
        to_anchor = x0 - xm
        dist_mn = np.linalg.norm(to_n, axis=1)

        inner_products = np.einsum('ij,ij->i', to_n, to_anchor)
        bounds = eps * (1.0 + dist_mn * np.linalg.norm(to_anchor, axis=1))
        for m in np.flatnonzero(inner_products > bounds):
            violations.append(Violation(
                VARIATIONAL, ns[m], ns[j], inner_products[m] - bounds[m],
            ))

        excess = np.linalg.norm(ym - xn, axis=1) - dist_mn - eps
        for m in np.flatnonzero(excess > 0.0):
            violations.append(Violation(CUT_DISTANCE, ns[m], ns[j], excess[m]))

        excess = normals[:j].dot(xn) - offsets[:j] - eps
        for m in np.flatnonzero(excess > 0.0):
            violations.append(
                Violation(CUT_MEMBERSHIP, ns[m], ns[j], excess[m])
            )

    if not cfg.operator.quasi_nonexpansive:
        return violations
    fixed_points = cfg.operator.known_fixed_points(cfg.dim) or []
    if result.status is RunStatus.INFEASIBLE:
        cut_count = len(with_vectors)
    else:
        cut_count = len(with_vectors) - 1
    for c in fixed_points:
        excess = normals[:cut_count].dot(c.coords) - offsets[:cut_count] - eps
        for m in np.flatnonzero(excess > 0.0):
            violations.append(Violation(
                FIXED_POINT_CONTAINMENT, ns[m], None, excess[m],
            ))
    return violations

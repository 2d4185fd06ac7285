"""
Seeded random projection instances and the brute-force comparison harness.
"""
import numpy as np

from .error import ConstraintBudgetExceeded
from .geometry import HalfSpace, Vector
from .polyproject import Polyhedron, brute_force_project

ORACLE_MAX_CONSTRAINTS = 12

# Agreement bound on the projected points.
POINT_TOL = 1e-7

SWEEP_DIMENSIONS = (2, 3, 5)
SWEEP_MAX_CONSTRAINTS = 10


class RandomInstance(object):
    """
    Parameters of a reproducible random polyhedron and anchor.

    Parameters
    ----------
    seed : int
    dimension : int
    num_constraints : int
    offset_range : (float, float), optional
        Offsets are drawn uniformly from this interval.
    anchor_range : (float, float), optional
        Anchor coordinates are drawn uniformly from this interval.
    """
    __slots__ = (
        'seed', 'dimension', 'num_constraints', 'offset_range', 'anchor_range',
    )

    def __init__(self, seed, dimension, num_constraints,
                 offset_range=(-2.0, 2.0), anchor_range=(-3.0, 3.0)):
        self.seed = seed
        self.dimension = dimension
        self.num_constraints = num_constraints
        self.offset_range = offset_range
        self.anchor_range = anchor_range

    @classmethod
    def for_sweep(cls, seed):
        """
        The pinned sweep instance for ``seed``: dimensions cycle through
        2, 3, 5 and constraint counts through 0..10.
        """
        return cls(
            seed=seed,
            dimension=SWEEP_DIMENSIONS[seed % len(SWEEP_DIMENSIONS)],
            num_constraints=seed % (SWEEP_MAX_CONSTRAINTS + 1),
        )

    def __repr__(self):
        return "RandomInstance(seed=%d, dimension=%d, num_constraints=%d)" % (
            self.seed, self.dimension, self.num_constraints,
        )


def random_polyhedron_instance(inst):
    """
    Build the polyhedron and anchor described by ``inst``.

    Normals are standard Gaussian draws scaled to unit length; everything is
    a function of ``inst.seed``.

    Returns
    -------
    (polyhedron, x0) : (Polyhedron, Vector)
    """
    if inst.num_constraints > ORACLE_MAX_CONSTRAINTS:
        raise ConstraintBudgetExceeded(
            "Random instances are limited to %d constraints, got %d."
            % (ORACLE_MAX_CONSTRAINTS, inst.num_constraints)
        )
    rng = np.random.RandomState(inst.seed)
    d, k = inst.dimension, inst.num_constraints
    poly = Polyhedron(d)
    for _ in range(k):
        a = rng.standard_normal(d)
        while np.linalg.norm(a) < 1e-6:
            a = rng.standard_normal(d)
        b = rng.uniform(*inst.offset_range)
        poly.add_constraint(HalfSpace.from_raw(a, b * np.linalg.norm(a)))
    x0 = Vector(rng.uniform(inst.anchor_range[0], inst.anchor_range[1], d))
    return poly, x0


class OracleReport(object):
    """
    Outcome of comparing ``Polyhedron.project`` with the brute-force oracle.
    """
    __slots__ = ('instance', 'fast', 'oracle', 'distance')

    def __init__(self, instance, fast, oracle):
        self.instance = instance
        self.fast = fast
        self.oracle = oracle
        if fast.is_point and oracle.is_point:
            self.distance = float(
                np.linalg.norm(fast.point.coords - oracle.point.coords)
            )
        else:
            self.distance = None

    @property
    def kind_match(self):
        return self.fast.kind == self.oracle.kind

    @property
    def agrees(self):
        if not self.kind_match:
            return False
        return self.distance is None or self.distance <= POINT_TOL

    def describe(self):
        return "%r: project=%s oracle=%s distance=%s" % (
            self.instance, self.fast.kind, self.oracle.kind, self.distance,
        )


def oracle_compare(inst):
    """
    Project the instance's anchor with both solvers and compare.
    """
    poly, x0 = random_polyhedron_instance(inst)
    fast = poly.project(x0)
    oracle = brute_force_project(poly, x0)
    return OracleReport(inst, fast, oracle)


def oracle_sweep(seeds, logger=None):
    """
    Compare the solvers on ``RandomInstance.for_sweep(s)`` for each seed.

    Returns
    -------
    disagreements : list[OracleReport]
    """
    disagreements = []
    for seed in seeds:
        report = oracle_compare(RandomInstance.for_sweep(seed))
        if not report.agrees:
            if logger is not None:
                logger.warning("Oracle disagreement: %s", report.describe())
            disagreements.append(report)
    if logger is not None:
        logger.info(
            "Oracle sweep finished: %d instance(s), %d disagreement(s).",
            len(seeds), len(disagreements),
        )
    return disagreements

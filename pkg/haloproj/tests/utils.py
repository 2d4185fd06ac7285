"""
Utilities for testing.
"""
from contextlib import contextmanager
import os
import shutil
import tempfile
from textwrap import dedent

import numpy as np

from ..driver import RunConfig
from ..geometry import Vector


def make_config(operator, x0, **kwargs):
    if not isinstance(x0, Vector):
        x0 = Vector(x0)
    return RunConfig(x0=x0, operator=operator, **kwargs)


def seeded_points(seed, count, dim, low=-1.0, high=1.0):
    """
    ``count`` reproducible uniform points in [low, high]^dim.
    """
    rng = np.random.RandomState(seed)
    return [Vector(rng.uniform(low, high, dim)) for _ in range(count)]


def trace_coords(result):
    """
    The recorded iterates as a (len(trace), dim) array.
    """
    return np.array([e.x_n.coords for e in result.trace])


@contextmanager
def temporary_directory():
    path = tempfile.mkdtemp(prefix='haloproj-test-')
    try:
        yield path
    finally:
        shutil.rmtree(path, ignore_errors=True)


def write_document(directory, name, text):
    path = os.path.join(directory, name)
    with open(path, 'w') as f:
        f.write(text)
    return path


C05_DOCUMENT = dedent("""\
    [problem]
    name = c05
    dimension = 1
    x0 = 1

    [operator]
    kind = contraction
    alpha = 0.5
""")

TRANSLATION_DOCUMENT = dedent("""\
    [problem]
    name = translation
    dimension = 1
    x0 = 0
    divergence_radius = 50

    [operator]
    kind = translation
    alpha = 1
    direction = 1
""")

SIGN_DOCUMENT = dedent("""\
    [problem]
    name = sign
    dimension = 1
    x0 = 0

    [operator]
    kind = sign_paper_instance
""")

ELL2_DOCUMENT = dedent("""\
    [problem]
    name = ell2
    dimension = 5
    x0 = 1, 1, 1, 1, 1

    [operator]
    kind = subgradient_ell2
""")

ELL2_ANCHORS = [
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 1.0, 1.0, 1.0],
    [0.5, -0.5, 0.5, -0.5, 0.5],
]

"""The bundled toy market: four shops rated by five shoppers.

``TRUSTSPECTRA_FIXTURES`` points at an alternative fixture directory.
"""
import os
from pathlib import Path

import numpy as np

ENV_VAR = "TRUSTSPECTRA_FIXTURES"
TABLE1 = "table1.csv"

# complete block used by the worked example
BLOCK_OBJECTS = ("i", "j", "k")
BLOCK_SUBJECTS = ("a", "b", "c", "d")

# the printed scores are 2-decimal roundings of a rank-2 matrix; the third
# singular value (~0.0078) is rounding noise and falls below this cut
WORKED_EXAMPLE_TOL = 0.05

# two-decimal reference factors, column signs as given
REFERENCE_LAMBDAS = np.array([3.0, 1.0])
REFERENCE_U = np.array([[.5, 0], [.5, .5], [.5, .3], [.5, -.8]])
REFERENCE_V = np.array([[.83, -.4], [.55, .6], [0, .7]])
REFERENCE_F1 = np.array([[.41] * 4, [.27] * 4, [0.0] * 4])
REFERENCE_F2 = np.array([[0, -.2, -.12, .32], [0, .3, .18, -.48], [0, .35, .21, -.56]])

# trustor communities whose similarity the raw trust map decreases
COUNTEREXAMPLE_PAIR = (np.array([0, .5, .3, -.8]), np.array([.25, .5, .4, -.15]))


def fixtures_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    return Path(override) if override else Path(__file__).parent


def fixture_path(name: str = TABLE1) -> Path:
    return fixtures_dir() / name


def load_table1():
    from ..model import ingest_scores

    return ingest_scores(fixture_path(TABLE1))


def worked_example_block():
    from ..model import extract_block

    return extract_block(load_table1(), BLOCK_OBJECTS, BLOCK_SUBJECTS)

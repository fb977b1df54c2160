import json

import pytest

from hilferbvp import Bounds, Grid, ProblemSpec
from hilferbvp import exprlang
from hilferbvp.cli import EXAMPLE_PROBLEM


# frozen reference values (50-digit arithmetic, independent of the package)
ORACLE = {
    "gamma_2_3": 1.3541179394264004,
    "gamma_m1_3": -4.0623538182792013,
    "powrule_05_07": 1.4137437626714575,
    "bconst": 0.29539524464865933,
    "G": 0.19099480907988168,
    "Omega": 1.5091746085519346,
    "r": 1.8654696230508507,
    "W": 0.14411904000849433,
    "K_con": 0.05289277345760215,
    "Lambda": 2.6012998847845686,
    "epsilon": 3.0393243995174114,
    "ell": 1.7161016196925708,
    "ratio_bound": 0.16411904000849433,
    "manu_A": -0.3971554188515897,
    "manu_Creg": 1.2640682292077316,
}

EXAMPLE_F = "t^(-1/6) + (1/16)*t^(5/6)*sin(z)"
EXAMPLE_ETA = "t^(-1/6) + (1/16)*t^(5/6)"


def example_problem(with_bounds: bool = True) -> ProblemSpec:
    bounds = Bounds(N_bound=1.0, zeta=0.0625, L=0.0625,
                    eta=exprlang.parse(EXAMPLE_ETA)) if with_bounds else None
    return ProblemSpec(alpha=0.5, beta=1.0 / 3.0, a=0.0, b=1.0,
                       c=0.25, d=0.75, e=0.4,
                       f=exprlang.parse(EXAMPLE_F), bounds=bounds)


@pytest.fixture(scope="session")
def p_ex() -> ProblemSpec:
    return example_problem()


@pytest.fixture(scope="session")
def grid2048() -> Grid:
    return Grid(0.0, 1.0, 2048, 2.0)


@pytest.fixture(scope="session")
def grid512() -> Grid:
    return Grid(0.0, 1.0, 512, 2.0)


@pytest.fixture(scope="session")
def example_file(tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("problems") / "example.json"
    path.write_text(json.dumps(EXAMPLE_PROBLEM))
    return str(path)

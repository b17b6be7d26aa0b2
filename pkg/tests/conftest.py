import numpy as np
import pytest

from qsmc import (ContinuousPlant, DisturbanceSignal, Segment, build_surface,
                  discretize, load_aircraft_scenario, make_gains)
from qsmc.plant import ConstForm, CosForm, SinForm, ZeroForm

# shipped benchmark plant: lateral aircraft dynamics, 4 states, 2 inputs,
# 3 measured outputs
A_BENCH = np.array([
    [-3.79, 0.04, -52.0, 0.0],
    [-0.14, -0.36, 4.24, 0.0],
    [0.06, -1.0, -0.27, 0.05],
    [1.0, 0.06, 0.0, 0.0],
])
B_BENCH = np.array([
    [25.0, 9.83],
    [1.42, -4.2],
    [0.01, 0.05],
    [0.0, 0.0],
])
C_BENCH = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])
H_BENCH = np.array([
    [0.035306, 0.082634, 0.076550],
    [0.011937, -0.210157, 0.008324],
])
X0_BENCH = np.array([-1.0, 1.0, 1.0, -2.0])

# same plant with an output-surface choice that destabilizes the reduced
# dynamics (one unstable invariant direction); used for divergence tests
H_UNSTABLE = np.array([
    [0.125, 0.397, 0.276],
    [-0.275, -0.2, 0.374],
])

T_BENCH = 0.01
ALPHA_BENCH = 0.97
BETA_BENCH = 3.0


@pytest.fixture(scope="session")
def bench_plant():
    return ContinuousPlant(A_BENCH, B_BENCH, C_BENCH)


@pytest.fixture(scope="session")
def bench_disc(bench_plant):
    return discretize(bench_plant, T_BENCH)


@pytest.fixture(scope="session")
def bench_design(bench_plant, bench_disc):
    return build_surface(bench_plant, bench_disc, H_BENCH)


@pytest.fixture(scope="session")
def bench_gains(bench_design):
    return make_gains(bench_design, alpha=ALPHA_BENCH, beta=BETA_BENCH)


@pytest.fixture(scope="session")
def bench_signal():
    t_mid = 5.0 * np.pi
    return DisturbanceSignal([
        Segment(0.0, 10.0, (ZeroForm(), ZeroForm())),
        Segment(10.0, t_mid, (ConstForm(2.0), ConstForm(-0.5))),
        Segment(t_mid, np.inf,
                (SinForm(offset=1.0, amp=1.0, omega=0.5), CosForm(0.5, 1.0))),
    ])


@pytest.fixture(scope="session")
def bench_scenario():
    return load_aircraft_scenario().scenario


@pytest.fixture(scope="session")
def double_integrator():
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    B = np.array([[0.0], [1.0]])
    C = np.eye(2)
    return ContinuousPlant(A, B, C)

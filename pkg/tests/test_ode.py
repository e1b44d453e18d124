import numpy as np
import pytest

from agingmetric.ode import Event, dopri45


def test_exponential_decay_accuracy():
    sol = dopri45(lambda t, y: -y, (0.0, 5.0), [1.0], rtol=1e-11, atol=1e-13)
    assert sol.status == "horizon"
    assert sol.y[-1, 0] == pytest.approx(np.exp(-5.0), rel=1e-9)


def test_dense_output_matches_solution():
    sol = dopri45(lambda t, y: np.array([y[1], -y[0]]), (0.0, 6.0), [0.0, 1.0], rtol=1e-10, atol=1e-12)
    ts = np.linspace(0.0, 6.0, 97)
    np.testing.assert_allclose(sol(ts)[:, 0], np.sin(ts), atol=1e-8)


def test_terminal_event_located():
    ev = Event("hit", lambda t, y: y[0] - 0.5, terminal=True, direction=-1)
    sol = dopri45(lambda t, y: -y, (0.0, 10.0), [1.0], events=[ev], rtol=1e-10, atol=1e-12, event_time_tol=1e-13)
    assert sol.status == "event"
    assert sol.terminal_event.name == "hit"
    assert sol.t[-1] == pytest.approx(np.log(2.0), abs=1e-10)


def test_direction_filter_and_recording_events():
    rising = Event("up", lambda t, y: y[0], terminal=False, direction=+1)
    falling = Event("down", lambda t, y: y[0], terminal=False, direction=-1)
    sol = dopri45(lambda t, y: np.array([y[1], -y[0]]), (0.0, 10.0), [0.0, 1.0], events=[rising, falling])
    ups = [e.t for e in sol.events if e.name == "up"]
    downs = [e.t for e in sol.events if e.name == "down"]
    np.testing.assert_allclose(ups, [2 * np.pi], atol=1e-7)
    np.testing.assert_allclose(downs, [np.pi, 3 * np.pi], atol=1e-7)


def test_error_control_converges():
    for tol in (1e-4, 1e-7, 1e-10):
        sol = dopri45(lambda t, y: np.cos(t) * y, (0.0, 4.0), [1.0], rtol=tol, atol=tol)
        assert abs(sol.y[-1, 0] - np.exp(np.sin(4.0))) <= 10 * tol


def test_steps_land_on_requested_times():
    stops = np.linspace(0.0, 3.0, 31)
    sol = dopri45(lambda t, y: -y, (0.0, 3.0), [1.0], t_stops=stops[1:-1])
    assert set(stops[1:-1]).issubset(set(sol.t))
    free = dopri45(lambda t, y: -y, (0.0, 3.0), [1.0])
    assert sol.naccept > free.naccept

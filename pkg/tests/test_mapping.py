import numpy as np
import pytest

from tfc_solve import DomainMap


def test_endpoint_examples():
    dm = DomainMap(1.0, 4.0)
    assert dm.to_x(1.0) == -1.0
    assert dm.to_x(4.0) == 1.0
    assert dm.to_x(2.5) == 0.0


def test_to_t_examples():
    assert DomainMap(0.0, 1.0).to_t(-1.0) == 0.0
    assert DomainMap(1.0, 4.0).to_t(0.0) == 2.5


def test_round_trip():
    dm = DomainMap(-2.3, 7.9)
    rng = np.random.default_rng(1)
    t = rng.uniform(-2.3, 7.9, 100)
    back = dm.to_t(dm.to_x(t))
    assert np.max(np.abs(back - t) / np.maximum(np.abs(t), 1e-300)) <= 1e-14


def test_derivative_constraint_scaling():
    dm = DomainMap(1.0, 4.0)
    assert dm.scale_derivative_constraint(1, 0.0) == 0.0
    assert DomainMap(0.0, 2.0).scale_derivative_constraint(1, 2.0) == 2.0
    assert dm.scale_derivative_constraint(2, 1.0) == pytest.approx(2.25)
    assert dm.scale_derivative_constraint(0, 5.0) == 5.0
    with pytest.raises(ValueError):
        dm.scale_derivative_constraint(3, 1.0)


def test_chain_rule_identity():
    # dy/dt computed by finite differences in t matches (2/dt) dy/dx on
    # the matched grid.
    dm = DomainMap(0.5, 3.5)
    x = np.linspace(-0.99, 0.99, 101)
    t = dm.to_t(x)
    h = 1e-6

    def y(t):
        return np.sin(1.3 * t) + t**3 / 7.0

    dydt = (y(t + h) - y(t - h)) / (2 * h)
    hx = 1e-6
    dydx = (y(dm.to_t(x + hx)) - y(dm.to_t(x - hx))) / (2 * hx)
    assert np.max(np.abs(dydt - dm.dydx_to_dydt(dydx))) <= 1e-8 * np.max(np.abs(dydt))


def test_nodes_ordering_and_endpoints():
    dm = DomainMap(0.0, 1.0)
    for kind in ("uniform", "lobatto"):
        x = dm.nodes(17, kind)
        assert x[0] == -1.0
        assert x[-1] == pytest.approx(1.0, abs=1e-15)
        assert np.all(np.diff(x) > 0)


def test_rejects_degenerate_interval():
    with pytest.raises(ValueError):
        DomainMap(1.0, 1.0)
    with pytest.raises(ValueError):
        DomainMap(2.0, 1.0)

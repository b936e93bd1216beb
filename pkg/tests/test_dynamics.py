"""Integration engines: grids, invariants, cross-engine agreement."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from nmq import bath, dynamics, hilbert, model
from nmq.control import NO_CONTROL
from nmq.dynamics import IntegratorConfig
from nmq.errors import ConfigInvalid, DimMismatch, PositivityViolation, TraceDrift


def test_resolve_steps():
    assert dynamics.resolve_steps(10.0, 1e-3) == (10000, pytest.approx(1e-3))
    n, dt = dynamics.resolve_steps(1.0, 0.3)
    assert n == 3
    assert dt == pytest.approx(1.0 / 3.0)


def test_integrator_config_validation():
    with pytest.raises(ConfigInvalid):
        IntegratorConfig(dt=0.0)
    with pytest.raises(ConfigInvalid):
        IntegratorConfig(dt=-1e-3)
    with pytest.raises(ConfigInvalid):
        IntegratorConfig(record_every=0)
    with pytest.raises(ConfigInvalid):
        IntegratorConfig(method="euler")


def test_zero_coupling_matches_closed_engine():
    chain = model.ChainSpec(4, 2.0)
    spec = bath.BathSpec.uniform(4, 0.0, 1.0, 10.0)
    cfg = IntegratorConfig(dt=1e-3)
    traj = dynamics.evolve(None, chain, spec, cfg=cfg, keep_trajectory=False)
    rho = traj[-1].rho

    closed = dynamics.closed_evolve(None, chain, cfg=cfg)
    sector1 = hilbert.HilbertSpec.sector(4, (1,))
    space = dynamics.simulation_space("sigma_minus", 4)
    psi = hilbert.embed_state(closed[-1][1], sector1, space)
    assert np.max(np.abs(rho - np.outer(psi, psi.conj()))) < 1e-10


@pytest.mark.parametrize("channel", ["sigma_minus", "sigma_z"])
def test_sector_matches_full_space(channel):
    chain = model.ChainSpec(3, 2.0)
    spec = bath.BathSpec.uniform(3, 0.01, 0.5, 50.0, channel=channel)
    cfg = IntegratorConfig(dt=1e-3)
    sector = dynamics.evolve(None, chain, spec, cfg=cfg, keep_trajectory=False)[-1].rho
    full = dynamics.evolve(None, chain, spec, cfg=cfg, mode="full",
                           keep_trajectory=False)[-1].rho
    sub = dynamics.simulation_space(channel, 3)
    sup = hilbert.HilbertSpec.full(3)
    assert np.max(np.abs(hilbert.embed_operator(sector, sub, sup) - full)) < 1e-12


def test_trajectory_thinning():
    chain = model.ChainSpec(3, 1.0)
    spec = bath.BathSpec.uniform(3, 0.01, 1.0, 1.0)
    cfg = IntegratorConfig(dt=0.01, record_every=5)
    traj = dynamics.evolve(None, chain, spec, cfg=cfg)
    assert len(traj) == 21
    assert traj[0].t == 0.0
    assert traj[-1].t == pytest.approx(1.0)
    assert traj[1].t == pytest.approx(0.05)


def test_endpoint_only():
    chain = model.ChainSpec(3, 1.0)
    spec = bath.BathSpec.uniform(3, 0.01, 1.0, 1.0)
    cfg = IntegratorConfig(dt=0.01, record_every=10**9)
    traj = dynamics.evolve(None, chain, spec, cfg=cfg, keep_trajectory=False)
    assert len(traj) == 1
    assert traj[0].t == pytest.approx(1.0)


def test_observer_rhs_is_tracefree_and_hermitian():
    chain = model.ChainSpec(3, 0.5)
    spec = bath.BathSpec.uniform(3, 0.05, 2.0, 10.0)
    worst_tr, worst_herm = 0.0, 0.0

    def watch(state, drho):
        nonlocal worst_tr, worst_herm
        worst_tr = max(worst_tr, abs(np.trace(drho)))
        worst_herm = max(worst_herm, np.max(np.abs(drho - drho.conj().T)))

    dynamics.evolve(None, chain, spec, cfg=IntegratorConfig(dt=0.01),
                    observer=watch, keep_trajectory=False)
    assert worst_tr < 1e-12
    assert worst_herm < 1e-12


@pytest.mark.parametrize("engine", ["nonmarkov", "lindblad"])
def test_unstable_step_raises_trace_drift(engine):
    chain = model.ChainSpec(3, 1.0)
    spec = bath.BathSpec.uniform(3, 1.0, 5.0, 1e4)
    cfg = IntegratorConfig(dt=0.1)
    with pytest.raises(TraceDrift):
        if engine == "nonmarkov":
            dynamics.evolve(None, chain, spec, cfg=cfg)
        else:
            dynamics.lindblad_evolve(None, chain, spec, cfg=cfg)


def test_lindblad_flags_negative_initial_state():
    chain = model.ChainSpec(3, 1.0)
    spec = bath.BathSpec.uniform(3, 0.01, 1.0, 1.0)
    rho0 = np.diag([0.5, 0.5 + 1e-4, -1e-4, 0.0]).astype(complex)
    with pytest.raises(PositivityViolation):
        dynamics.lindblad_evolve(rho0, chain, spec, cfg=IntegratorConfig(dt=0.01))


def test_initial_state_validation():
    chain = model.ChainSpec(3, 1.0)
    spec = bath.BathSpec.uniform(3, 0.01, 1.0, 1.0)
    with pytest.raises(ConfigInvalid):
        dynamics.evolve(np.array([1.0, 1.0, 0.0, 0.0]), chain, spec)
    with pytest.raises(DimMismatch):
        dynamics.evolve(np.array([1.0, 0.0]), chain, spec)
    with pytest.raises(ConfigInvalid):
        dynamics.evolve(np.eye(4, dtype=complex), chain, spec)
    with pytest.raises(ConfigInvalid):
        dynamics.evolve(None, model.ChainSpec(4, 1.0), spec)  # n_sites clash


def test_nonmarkov_engine_matches_reference_integrator():
    chain = model.ChainSpec(3, 1.0)
    spec = bath.BathSpec.uniform(3, 0.05, 2.0, 10.0)
    space = dynamics.simulation_space(spec.channel, 3)
    ls = dynamics.coupling_operators(spec.channel, space)
    d = space.dim

    def rhs(t, y):
        blocks = y.reshape(7, d, d)
        state = dynamics.NonMarkovianState(
            t=t, rho=blocks[0], oz=blocks[1:4], ow=blocks[4:])
        h = model.hamiltonian(chain, t, space)
        drho, doz, dow = dynamics.master_rhs(state, h, ls, spec)
        return np.concatenate([drho.ravel(), doz.ravel(), dow.ravel()])

    psi0 = model.initial_state(chain, space)
    y0 = np.zeros((7, d, d), dtype=complex)
    y0[0] = np.outer(psi0, psi0.conj())
    sol = solve_ivp(rhs, (0.0, 1.0), y0.ravel(), rtol=1e-10, atol=1e-12)
    ref = sol.y[:d * d, -1].reshape(d, d)

    got = dynamics.evolve(None, chain, spec, cfg=IntegratorConfig(dt=1e-3),
                          keep_trajectory=False)[-1].rho
    assert np.max(np.abs(got - ref)) < 1e-8


def test_lindblad_engine_matches_reference_integrator():
    chain = model.ChainSpec(3, 1.0)
    spec = bath.BathSpec.uniform(3, 0.05, 2.0, 10.0)
    space = dynamics.simulation_space(spec.channel, 3)
    ls = dynamics.coupling_operators(spec.channel, space)
    d = space.dim

    def rhs(t, y):
        h = model.hamiltonian(chain, t, space)
        return bath.lindblad_rhs(y.reshape(d, d), h, ls, spec).ravel()

    psi0 = model.initial_state(chain, space)
    y0 = np.outer(psi0, psi0.conj())
    sol = solve_ivp(rhs, (0.0, 1.0), y0.ravel(), rtol=1e-10, atol=1e-12)
    ref = sol.y[:, -1].reshape(d, d)

    got = dynamics.lindblad_evolve(None, chain, spec,
                                   cfg=IntegratorConfig(dt=1e-3))[-1][1]
    assert np.max(np.abs(got - ref)) < 1e-8


def test_closed_evolve_with_control_stays_normalized():
    from nmq.control import design_pulse

    chain = model.ChainSpec(5, 2.0)
    ctrl = design_pulse(0, 1, 0.5)
    # the pulse amplifies ||H|| ~15x, so the step must shrink for RK4 to
    # hold the norm inside the engine's drift allowance
    traj = dynamics.closed_evolve(None, chain, ctrl=ctrl,
                                  cfg=IntegratorConfig(dt=2e-4))
    psi = traj[-1][1]
    assert abs(np.linalg.norm(psi) - 1.0) < 1e-9
    assert traj[-1][0] == pytest.approx(2.0)

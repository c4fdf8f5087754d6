"""
First-order Lax-Friedrichs updates on intervals and polygons, including the local
minimum entropy principle under the CFL bound.
"""
import numpy as np
import pytest

from app.errors import DomainError
from app.physics.invariant_region import entropy_from_prim, membership
from app.physics.sampling import random_states
from app.physics.state_eos import prim_to_cons
from app.solver.first_order import lf_update_1d, lf_update_polygon, polygon_cfl

SQUARE_NORMALS = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])


def test_equal_states_are_unchanged(eos, rng):
    U, _ = random_states(rng, 50, 1, eos)
    assert np.array_equal(lf_update_1d(U, U, U, 0.7, 1.0, eos), U)


def test_negative_lam_is_rejected(eos):
    U = prim_to_cons(np.array([1.0, 0.0, 1.0]), eos)
    with pytest.raises(DomainError):
        lf_update_1d(U, U, U, -0.1, 1.0, eos)


def test_polygon_cfl():
    assert polygon_cfl([1.0, 1.0, 1.0, 1.0], 1.0, 0.5, 1.0) == 1.0
    assert polygon_cfl([1.0, 1.0, 1.0, 1.0], 1.0, 0.5, 2.0) == 2.0


def test_polygon_update_of_constant_state(eos):
    U = prim_to_cons(np.array([0.5, 0.3, -0.6, 2.0]), eos)
    out = lf_update_polygon(U, np.tile(U, (4, 1)), [1.0] * 4, SQUARE_NORMALS, 1.0, 0.4, 1.0, eos)
    assert np.max(np.abs(out - U)) < 1e-13 * np.abs(U).max()


def test_polygon_area_must_be_positive(eos):
    U = prim_to_cons(np.array([1.0, 0.0, 0.0, 1.0]), eos)
    with pytest.raises(DomainError):
        lf_update_polygon(U, np.tile(U, (4, 1)), [1.0] * 4, SQUARE_NORMALS, 0.0, 0.1, 1.0, eos)


def test_local_minimum_entropy_on_intervals(eos, rng):
    Ul, Vl = random_states(rng, 2000, 1, eos, rho_range=(0.1, 10.0), p_range=(0.1, 10.0), vmax=0.9)
    Uc, Vc = random_states(rng, 2000, 1, eos, rho_range=(0.1, 10.0), p_range=(0.1, 10.0), vmax=0.9)
    Ur, Vr = random_states(rng, 2000, 1, eos, rho_range=(0.1, 10.0), p_range=(0.1, 10.0), vmax=0.9)
    sigma = np.minimum.reduce([entropy_from_prim(V, eos) for V in (Vl, Vc, Vr)])
    out = lf_update_1d(Ul, Uc, Ur, 0.9, 1.0, eos)
    assert np.all(membership(out, sigma, eos, slack=1e-10 * np.maximum(1.0, np.abs(sigma))))


def test_local_minimum_entropy_on_a_hexagon(eos, rng):
    angles = np.pi / 3.0 * np.arange(6) + np.pi / 6.0
    normals = np.column_stack([np.cos(angles), np.sin(angles)])
    lengths = np.ones(6)
    area = 1.5 * np.sqrt(3.0)
    dt = 0.95 * 2.0 * area / lengths.sum()
    assert polygon_cfl(lengths, area, dt, 1.0) <= 1.0
    for _ in range(200):
        UK, VK = random_states(rng, 1, 2, eos, rho_range=(0.1, 10.0), p_range=(0.1, 10.0), vmax=0.9)
        Ue, Ve = random_states(rng, 6, 2, eos, rho_range=(0.1, 10.0), p_range=(0.1, 10.0), vmax=0.9)
        sigma = min(entropy_from_prim(VK, eos).min(), entropy_from_prim(Ve, eos).min())
        out = lf_update_polygon(UK[0], Ue, lengths, normals, area, dt, 1.0, eos)
        assert membership(out, sigma, eos, slack=1e-10 * max(1.0, abs(sigma)))

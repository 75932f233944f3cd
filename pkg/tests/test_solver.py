import csv
import io
import json
from fractions import Fraction

import numpy as np
import pytest

from exactflow.errors import ParameterError, PositivityError, SetupError, StepError
from exactflow.fields import CompressibleIsothermal, CompressiblePoly, IncompressibleA
from exactflow.solver import (GasLaw, GridSpec, advance, error_norms, exact_conserved,
                              init_from_exact, max_stable_dt, observed_order, run_convergence,
                              simulate, write_structured_points)

ROTATING = CompressiblePoly(gamma=2, K=1, C=1, c0=0, c1=Fraction(1, 2), c2=20)
UNIFORM = CompressiblePoly(gamma=2, K=1, C=0, c0=Fraction(3, 10), c1=0, c2=10)


def test_grid_geometry():
    g = GridSpec((4, 8, 5), (0, -1, 0), (1, 1, 5))
    assert g.dx == (0.25, 0.25, 1.0)
    c = g.centers()
    assert c.shape == (6, 10, 7, 3)
    assert c[1, 1, 1].tolist() == [0.125, -0.875, 0.5]
    assert g.refined().is_refinement_of(g)
    with pytest.raises(ParameterError):
        GridSpec((3, 4, 4))
    with pytest.raises(ParameterError):
        GridSpec((4, 4, 4), (0, 0, 0), (1, 0, 1))


def test_init_density_at_origin_cell():
    # odd n puts a cell center on the origin, where rho = phi / 2 = 5
    U = init_from_exact(CompressiblePoly(gamma=2, K=1, C=1, c2=10), GridSpec.cube(5), 0.0)
    assert U.shape == (5, 5, 5, 4)
    assert U[2, 2, 2].tolist() == [5.0, 0.0, 0.0, 0.0]


def test_init_uniform_state():
    U = init_from_exact(UNIFORM, GridSpec.cube(6), 0.0)
    np.testing.assert_array_equal(U[..., 0], 5.0)
    np.testing.assert_array_equal(U[..., 1:], 1.5)


def test_init_vacuum_names_cell():
    # phi = q - 1/10 is negative near the diagonal, where q vanishes
    fam = CompressiblePoly(gamma=2, K=1, C=1, c2=Fraction(-1, 10))
    with pytest.raises(SetupError, match=r"cell \("):
        init_from_exact(fam, GridSpec.cube(8), 0.0)


def test_solver_needs_gamma_law():
    with pytest.raises(ParameterError):
        init_from_exact(IncompressibleA(), GridSpec.cube(4), 0.0)


def test_freestream_preserved_bitwise():
    g = GridSpec.cube(6)
    U0 = init_from_exact(UNIFORM, g, 0.0)
    dt = max_stable_dt(U0, g, GasLaw.of(UNIFORM), 0.9)
    U = U0
    for k in range(120):
        U = advance(U, g, UNIFORM, k * dt, dt)
    np.testing.assert_array_equal(U, U0)


def test_uniform_convergence_errors_vanish():
    tab = run_convergence(UNIFORM, [GridSpec.cube(n) for n in (4, 8)], 0.05, 0.5)
    assert all(r.combined("Linf") <= 1e-13 for r in tab.rows)


def test_zero_duration_run_is_exact():
    tab = run_convergence(ROTATING, [GridSpec.cube(8)], 0.0)
    assert tab.rows[0].steps == 0
    assert all(v == 0.0 for n in ("L1", "L2", "Linf") for v in tab.rows[0].errors[n].values())


def test_cfl_violation():
    g = GridSpec.cube(8)
    U = init_from_exact(ROTATING, g, 0.0)
    bound = max_stable_dt(U, g, GasLaw.of(ROTATING), 0.5)
    advance(U, g, ROTATING, 0.0, bound, cfl=0.5)
    with pytest.raises(StepError):
        advance(U, g, ROTATING, 0.0, 1.01 * bound, cfl=0.5)
    with pytest.raises(StepError):
        advance(U, g, ROTATING, 0.0, 0.0)


def test_cfl_bound_implies_per_axis_bound():
    g = GridSpec((8, 8, 8), (-1, -1, -1), (1, 2, 3))
    U = init_from_exact(ROTATING, g, 0.0)
    law = GasLaw.of(ROTATING)
    dt = max_stable_dt(U, g, law, 0.45)
    rho = U[..., 0]
    speed = np.linalg.norm(U[..., 1:] / rho[..., None], axis=-1) + law.sound_speed(rho)
    assert dt <= 0.45 * min(g.dx) / speed.max()


def test_positivity_breach():
    g = GridSpec.cube(6)
    U = init_from_exact(UNIFORM, g, 0.0)
    U[3, 3, 3] = [1e-9, 0.0, 0.0, 0.0]
    with pytest.raises(PositivityError):
        advance(U, g, UNIFORM, 0.0, 1e-9)
    with pytest.raises(PositivityError):
        advance(init_from_exact(UNIFORM, g, 0.0), g, CompressiblePoly(C=0, c2=-1), 0.0, 1e-3)


def test_conservation_audit():
    g = GridSpec.cube(10)
    U = init_from_exact(ROTATING, g, 0.0)
    dt = max_stable_dt(U, g, GasLaw.of(ROTATING), 0.45)
    t = 0.0
    for _ in range(5):
        new, inflow = advance(U, g, ROTATING, t, dt, return_boundary_flux=True)
        change = (new.sum(axis=(0, 1, 2)) - U.sum(axis=(0, 1, 2))) * g.cell_volume
        total = U[..., 0].sum() * g.cell_volume
        assert abs(change[0] - inflow[0]) <= 1e-12 * total
        np.testing.assert_allclose(change, inflow, rtol=0, atol=1e-12 * total)
        U, t = new, t + dt


def test_single_step_error_shrinks_with_h():
    errs = []
    for n in (8, 16, 32):
        g = GridSpec.cube(n)
        U = init_from_exact(ROTATING, g, 0.0)
        dt = 1e-3
        new = advance(U, g, ROTATING, 0.0, dt)
        errs.append(np.abs(new - exact_conserved(ROTATING, g, dt, ghosts=False)).max())
    assert errs[0] > errs[1] > errs[2]


def test_short_convergence_run_is_first_order():
    tab = run_convergence(ROTATING, [GridSpec.cube(n) for n in (16, 8)], 0.05)
    assert [r.grid.shape[0] for r in tab.rows] == [8, 16]
    assert tab.strictly_decreasing("L1")
    assert 0.5 < tab.orders("L1")[0] < 1.5


def test_isothermal_family_runs():
    fam = CompressibleIsothermal(K=1, C=Fraction(1, 2), c0=0, c1=Fraction(1, 4), c2=1)
    state, steps = simulate(fam, GridSpec.cube(6), 0.0, 0.02, 0.45)
    assert steps > 0 and np.all(np.isfinite(state))


def test_error_norm_definitions():
    exact = np.zeros((4, 4, 4, 4))
    numeric = exact.copy()
    numeric[0, 0, 0, 1] = 2.0
    numeric[1, 0, 0, 1] = -1.0
    e = error_norms(numeric, exact, 0.5)
    assert e["L1"]["mx"] == 1.5 and e["L2"]["mx"] == pytest.approx(np.sqrt(2.5))
    assert e["Linf"]["mx"] == 2.0 and e["L1"]["rho"] == 0.0
    assert observed_order(4.0, 1.0) == 2.0 and observed_order(0.0, 1.0) is None


def test_incompatible_rows_have_no_order():
    tab = run_convergence(UNIFORM, [GridSpec.cube(4), GridSpec.cube(6)], 0.0)
    assert tab.orders() == [None]


def test_table_serialisation_is_deterministic():
    grids = [GridSpec.cube(n) for n in (4, 8)]
    a = run_convergence(ROTATING, grids, 0.02)
    b = run_convergence(ROTATING, grids, 0.02)
    assert a.to_csv() == b.to_csv()
    assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())
    rows = list(csv.DictReader(io.StringIO(a.to_csv())))
    assert [r["nx"] for r in rows] == ["4", "8"] and rows[0]["order_L1"] == ""
    assert "wall_time" in a.to_csv(include_timing=True)


def test_bad_convergence_arguments():
    with pytest.raises(ParameterError):
        run_convergence(ROTATING, [GridSpec.cube(4)], 0.1, cfl=1.5)
    with pytest.raises(ParameterError):
        run_convergence(ROTATING, [], 0.1)
    with pytest.raises(ParameterError):
        run_convergence(ROTATING, [GridSpec.cube(4)], -1.0)


def test_structured_points_file(tmp_path):
    g = GridSpec((4, 5, 6), (0, 0, 0), (1, 1, 1))
    field = np.arange(120, dtype=float).reshape(4, 5, 6)
    path = write_structured_points(tmp_path / "f.vtk", g, {"rho": field})
    lines = path.read_text().splitlines()
    assert lines[3] == "DATASET STRUCTURED_POINTS"
    assert lines[4] == "DIMENSIONS 4 5 6"
    assert lines[6] == "SPACING 0.25 0.2 0.16666666666666666"
    assert lines[7] == "POINT_DATA 120"
    values = [float(v) for v in lines[10:]]
    # x runs fastest
    assert values[:2] == [field[0, 0, 0], field[1, 0, 0]]
    assert values[4] == field[0, 1, 0]
    with pytest.raises(ValueError):
        write_structured_points(tmp_path / "g.vtk", g, {"bad": np.zeros(3)})

# tests/test_core/test_solver.py

"""
Tests para SDA, SDA-Primal y el bucle de resolución
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from core.errors import ContractViolation, InconsistentSystemError
from core.linalg import b_norm
from core.rates import rate_report, rk_rate, theoretical_bounds
from core.solver import (
    Solver,
    dual_step,
    dual_value,
    duality_gap,
    primal_from_dual,
    primal_step,
    primal_value,
    reference_solution,
    solve,
)
from models.problem import ProjectionProblem
from models.reports import SolveOptions, SolverState
from models.sketch import SamplerKind, SamplerSpec, SketchMatrix
from samplers import CoordinateSampler


def closed_form_solution(problem):
    """x* = c + B^{-1}A^T (A B^{-1} A^T)^† (b − Ac)"""
    y = np.linalg.pinv(problem.gram) @ problem.shifted_rhs
    return problem.c + problem.binv_at @ y


@pytest.mark.unit
class TestSteps:
    """Suite de tests para dual_step y primal_step"""

    def test_dual_step_coordinate(self, identity_problem):
        """Test: A = I, S = e_2 fija la coordenada 2"""
        state = SolverState(x=np.zeros(4), y=np.zeros(4))
        new = dual_step(state, SketchMatrix.coordinate(4, 2), identity_problem)
        assert_allclose(new.x, [0.0, 0.0, 3.0, 0.0])
        assert_allclose(new.y, [0.0, 0.0, 3.0, 0.0])
        assert new.k == 1
        assert_allclose(new.last_lambda, [3.0])

    def test_dual_step_keeps_primal_dual_link(self, random_problem):
        """Test: x^k = c + B^{-1}A^T y^k tras varios pasos"""
        problem = random_problem(5, 4, seed=3, general_B=True, with_c=True)
        rng = np.random.default_rng(1)
        state = SolverState(x=problem.c.copy(), y=np.zeros(5))
        for _ in range(20):
            S = SketchMatrix.from_dense(rng.standard_normal((5, 2)))
            state = dual_step(state, S, problem)
        assert_allclose(state.x, primal_from_dual(state.y, problem), atol=1e-9)
        assert state.k == 20

    def test_dual_step_increases_dual(self, random_problem):
        """Test: D(y^{k+1}) ≥ D(y^k)"""
        problem = random_problem(6, 4, rank=3, seed=4, with_c=True)
        state = SolverState(x=problem.c.copy(), y=np.zeros(6))
        for i in range(12):
            new = dual_step(state, SketchMatrix.coordinate(6, i % 6), problem)
            assert dual_value(new.y, problem) >= dual_value(state.y, problem) - 1e-10
            state = new

    def test_primal_step_satisfies_sketched_system(self, random_problem):
        """Test: S^T A x' = S^T b"""
        problem = random_problem(5, 7, seed=5, general_B=True)
        S = SketchMatrix.block(5, [0, 3])
        x = primal_step(np.ones(7), S, problem)
        assert_allclose(S.t_dot(problem.A) @ x, S.t_dot(problem.b), atol=1e-9)

    def test_primal_step_is_b_projection(self):
        """Test: A = [1 0], b = 1, x = (0, 5) → (1, 5)"""
        problem = ProjectionProblem.create(np.array([[1.0, 0.0]]), b=[1.0])
        x = primal_step([0.0, 5.0], SketchMatrix.coordinate(1, 0), problem)
        assert_allclose(x, [1.0, 5.0])

    def test_zero_row_step_is_noop(self):
        """Test: S^T A = 0 → λ = 0"""
        problem = ProjectionProblem.create(np.array([[1.0, 1.0], [0.0, 0.0]]), b=[2.0, 0.0])
        state = SolverState(x=np.zeros(2), y=np.zeros(2))
        new = dual_step(state, SketchMatrix.coordinate(2, 1), problem)
        assert_allclose(new.x, np.zeros(2))
        assert_allclose(new.y, np.zeros(2))

    def test_dual_step_needs_dual(self, identity_problem):
        with pytest.raises(ContractViolation, match="dual iterate"):
            dual_step(SolverState(x=np.zeros(4)), SketchMatrix.coordinate(4, 0), identity_problem)

    def test_dual_step_wrong_sketch_rows(self, identity_problem):
        state = SolverState(x=np.zeros(4), y=np.zeros(4))
        with pytest.raises(ContractViolation):
            dual_step(state, SketchMatrix.coordinate(3, 0), identity_problem)

    def test_self_dual_iterates_coincide(self, random_spd):
        """Test: B = A SPD y c = 0 → x^k = y^k"""
        A = random_spd(5, seed=21)
        problem = ProjectionProblem.create(A, b=A @ np.arange(1.0, 6.0), B=A)
        rng = np.random.default_rng(3)
        state = SolverState(x=np.zeros(5), y=np.zeros(5))
        for _ in range(30):
            state = dual_step(state, SketchMatrix.coordinate(5, int(rng.integers(5))), problem)
            assert_allclose(state.x, state.y, rtol=1e-10, atol=1e-10)


@pytest.mark.unit
class TestObjectives:
    """Suite de tests para objetivos, gap y solución de referencia"""

    def test_dual_value_at_zero(self, random_problem):
        problem = random_problem(3, 4, seed=6)
        assert dual_value(np.zeros(3), problem) == 0.0

    def test_gap_equals_primal_minus_dual(self, random_problem):
        """Test: P(x(y)) − D(y) = gap(y)"""
        problem = random_problem(4, 5, seed=7, general_B=True, with_c=True)
        y = np.array([0.5, -1.0, 2.0, 0.25])
        x = primal_from_dual(y, problem)
        expected = primal_value(x, problem) - dual_value(y, problem)
        assert duality_gap(y, problem) == pytest.approx(expected, rel=1e-10)

    def test_dual_suboptimality_is_half_primal_distance(self, random_problem, rng):
        """Test: D(y*) − D(y) = ½‖x(y*) − x(y)‖²_B"""
        problem = random_problem(5, 7, rank=3, seed=17, general_B=True, with_c=True)
        reference = reference_solution(problem, problem.c)
        for _ in range(10):
            y = rng.standard_normal(5)
            suboptimality = dual_value(reference.y_star, problem) - dual_value(y, problem)
            distance = b_norm(reference.x_star - primal_from_dual(y, problem), problem.B)
            assert suboptimality == pytest.approx(0.5 * distance ** 2, rel=1e-10, abs=1e-12)

    def test_reference_solution(self, random_problem):
        """Test: x* coincide con la fórmula cerrada y P(x*) = D(y*)"""
        problem = random_problem(4, 6, seed=8, general_B=True, with_c=True)
        reference = reference_solution(problem, problem.c)
        assert_allclose(reference.x_star, closed_form_solution(problem), atol=1e-9)
        assert_allclose(problem.A @ reference.x_star, problem.b, atol=1e-8)
        assert reference.opt == pytest.approx(dual_value(reference.y_star, problem), rel=1e-9)
        assert reference.u0 == pytest.approx(reference.opt, rel=1e-9)

    def test_reference_solution_inconsistent(self):
        problem = ProjectionProblem.create(np.array([[1.0], [1.0]]), b=[1.0, 2.0])
        with pytest.raises(InconsistentSystemError):
            reference_solution(problem, np.zeros(1))


@pytest.mark.unit
class TestSolver:
    """Suite de tests para Solver y solve"""

    def test_rank_one_converges_in_one_step(self, rank_one_problem):
        """Test: A de rango 1 con Kaczmarz → x^1 = x*"""
        report = solve(rank_one_problem, SamplerSpec.row_norm(rank_one_problem.A))
        assert report.converged is True
        assert report.iterations == 1
        assert_allclose(report.state.x, closed_form_solution(rank_one_problem), atol=1e-10)

    def test_identity_system(self, identity_problem):
        report = solve(identity_problem, SamplerSpec.uniform_coordinate(4),
                       SolveOptions(max_iters=500, seed=3))
        assert report.converged is True
        assert_allclose(report.state.x, [1.0, 2.0, 3.0, 4.0], atol=1e-8)
        assert report.trace[-1].residual <= 1e-8 * np.linalg.norm(identity_problem.b)

    def test_trace_records_euclidean_error(self, random_problem):
        """Test: con B general la traza guarda ‖x^k − x*‖²₂ además de la norma B"""
        problem = random_problem(4, 6, seed=18, general_B=True, with_c=True)
        report = solve(problem, SamplerSpec.row_norm(problem.A), SolveOptions(max_iters=5))
        first = report.trace[0]
        diff = problem.c - report.reference.x_star
        assert first.euclidean_error_sq == pytest.approx(diff @ diff, rel=1e-12)
        assert first.error_sq == pytest.approx(problem.B.quad(diff), rel=1e-12)
        assert first.euclidean_error_sq != pytest.approx(first.error_sq, rel=1e-3)

    def test_general_B_and_c_with_gaussian(self, random_problem):
        """Test: B y c generales, sketches gaussianos de 2 columnas"""
        problem = random_problem(4, 6, seed=9, general_B=True, with_c=True)
        spec = SamplerSpec(kind=SamplerKind.GAUSSIAN, m=4, q=2)
        report = solve(problem, spec, SolveOptions(max_iters=20000, seed=1))
        assert report.converged is True
        assert_allclose(report.state.x, closed_form_solution(problem), atol=1e-6)
        assert abs(report.trace[-1].gap) <= 1e-8 * (1.0 + abs(report.reference.opt))

    def test_rank_deficient_with_blocks(self, random_problem):
        """Test: A 6x6 de rango 3 con bloques de tamaño 2"""
        problem = random_problem(6, 6, rank=3, seed=10)
        spec = SamplerSpec(kind=SamplerKind.BLOCK, m=6, block_size=2)
        report = solve(problem, spec, SolveOptions(max_iters=20000, seed=2))
        assert report.converged is True
        assert_allclose(report.state.x, closed_form_solution(problem), atol=1e-6)

    def test_count_sketch(self, random_problem):
        problem = random_problem(5, 3, seed=11)
        spec = SamplerSpec(kind=SamplerKind.COUNT_SKETCH, m=5, q=2)
        report = solve(problem, spec, SolveOptions(max_iters=20000, seed=4))
        assert report.converged is True

    def test_trace_is_non_increasing_for_dual_values(self, random_problem):
        """Test: D(y^k) no decrece a lo largo de la traza"""
        problem = random_problem(5, 4, seed=12, with_c=True)
        report = solve(problem, SamplerSpec.row_norm(problem.A), SolveOptions(max_iters=200))
        values = [row.dual_value for row in report.trace]
        assert all(b >= a - 1e-10 for a, b in zip(values, values[1:]))

    def test_deterministic_given_seed(self, random_problem):
        problem = random_problem(6, 4, seed=13)
        spec = SamplerSpec.row_norm(problem.A)
        first = solve(problem, spec, SolveOptions(max_iters=300, seed=42))
        second = solve(problem, spec, SolveOptions(max_iters=300, seed=42))
        assert [row.error_sq for row in first.trace] == [row.error_sq for row in second.trace]
        assert_allclose(first.state.x, second.state.x, rtol=0, atol=0)

    def test_record_every(self, random_problem):
        """Test: filas en k = 0, 10, 20, ... (más la de convergencia)"""
        problem = random_problem(8, 8, seed=14)
        options = SolveOptions(max_iters=50, record_every=10, tol_residual=1e-300)
        report = solve(problem, SamplerSpec.uniform_coordinate(8), options)
        assert [row.k for row in report.trace] == [0, 10, 20, 30, 40, 50]
        assert report.converged is False
        assert report.iterations == 50

    def test_dual_and_primal_runs_coincide(self, random_problem):
        """Test: arranque primal en x0 = c + B^{-1}A^T y0 repite la secuencia dual"""
        problem = random_problem(5, 6, seed=15, general_B=True, with_c=True)
        spec = SamplerSpec.row_norm(problem.A)
        options = SolveOptions(max_iters=40, tol_residual=1e-300)
        y0 = np.array([0.1, -0.2, 0.3, 0.0, 1.0])

        dual = solve(problem, spec, options, y0=y0)
        primal = solve(problem, spec, options, x0=primal_from_dual(y0, problem))

        assert_allclose(dual.state.x, primal.state.x, rtol=1e-12, atol=1e-12)
        assert_allclose([row.error_sq for row in dual.trace],
                        [row.error_sq for row in primal.trace], rtol=1e-9, atol=1e-20)
        assert_allclose(primal.shift, np.zeros(6), atol=1e-9)

    def test_primal_start_converges_to_shifted_solution(self):
        """Test: A = [1 0], b = 1, x0 = (0, 5) → x* + t = (1, 5)"""
        problem = ProjectionProblem.create(np.array([[1.0, 0.0]]), b=[1.0])
        report = solve(problem, SamplerSpec.uniform_coordinate(1), x0=[0.0, 5.0])
        assert report.converged is True
        assert_allclose(report.shift, [0.0, 5.0], atol=1e-12)
        assert_allclose(report.state.x, [1.0, 5.0], atol=1e-12)
        assert report.state.has_dual is False
        assert report.trace[0].dual_value is None

    def test_singular_H_runs_with_flag(self, caplog):
        """Test: la coordenada 1 nunca se muestrea"""
        problem = ProjectionProblem.create(np.eye(2), b=[1.0, 1.0])
        sampler = CoordinateSampler([1.0, 0.0])
        report = Solver(problem, sampler, SolveOptions(max_iters=5)).run()
        assert report.singular_h is True
        assert report.converged is False
        assert "H es singular" in caplog.text

    def test_singular_h_unknown_for_gaussian(self, identity_problem):
        spec = SamplerSpec(kind=SamplerKind.GAUSSIAN, m=4, q=1)
        report = solve(identity_problem, spec, SolveOptions(max_iters=3))
        assert report.singular_h is None

    def test_inconsistent_system(self):
        problem = ProjectionProblem.create(np.array([[1.0], [1.0]]), b=[1.0, 2.0])
        with pytest.raises(InconsistentSystemError):
            solve(problem, SamplerSpec.uniform_coordinate(2))

    def test_both_starting_points(self, identity_problem):
        with pytest.raises(ContractViolation, match="either y0 or x0"):
            solve(identity_problem, SamplerSpec.uniform_coordinate(4),
                  y0=np.zeros(4), x0=np.zeros(4))

    def test_sampler_dimension_mismatch(self, identity_problem):
        with pytest.raises(ContractViolation):
            Solver(identity_problem, SamplerSpec.uniform_coordinate(3))

    def test_invalid_options(self, identity_problem):
        with pytest.raises(ContractViolation):
            Solver(identity_problem, SamplerSpec.uniform_coordinate(4), SolveOptions(max_iters=0))


@pytest.mark.slow
class TestExpectedDecay:
    """Suite de tests estadísticos para E‖x^k − x*‖²_B ≤ ρ^k ‖x^0 − x*‖²_B"""

    def test_identity_coordinates(self, identity_problem):
        """Test: A = I_4, coordenadas uniformes, ρ = 3/4, k = 5"""
        spec = SamplerSpec.uniform_coordinate(4)
        k = 5
        finals = []
        initial = None
        for seed in range(400):
            report = solve(identity_problem, spec, SolveOptions(max_iters=k, seed=seed))
            initial = report.initial_error_sq
            finals.append(report.trace[-1].error_sq)
        assert np.mean(finals) <= 1.25 * 0.75 ** k * initial

    def test_random_problem_row_norm(self, random_problem):
        """Test: Kaczmarz por normas de filas en un sistema de rango deficiente"""
        problem = random_problem(10, 8, rank=5, seed=16)
        spec = SamplerSpec.row_norm(problem.A)
        rho = rk_rate(problem.A)
        k = 20
        finals = []
        initial = None
        for seed in range(300):
            options = SolveOptions(max_iters=k, seed=seed, tol_residual=1e-300)
            report = solve(problem, spec, options)
            initial = report.initial_error_sq
            finals.append(report.trace[-1].error_sq)
        assert np.mean(finals) <= 1.25 * rho ** k * initial

    def test_suboptimality_and_gap_bounds(self, random_problem):
        """Test: error, suboptimalidad dual y primal y gap medios bajo sus cotas con ρ, U₀ y OPT"""
        problem = random_problem(4, 3, seed=19, general_B=True, with_c=True)
        spec = SamplerSpec.row_norm(problem.A)
        rho = rate_report(problem, spec).rho
        checkpoints = (10, 25, 50)
        samples = {k: [] for k in checkpoints}
        reference = None

        for seed in range(200):
            options = SolveOptions(max_iters=50, seed=seed, tol_residual=1e-300, gap_check_period=1)
            report = solve(problem, spec, options)
            reference = report.reference
            rows = {row.k: row for row in report.trace}
            for k in checkpoints:
                row = rows[k]
                dual_gap = reference.opt - row.dual_value
                samples[k].append((row.error_sq, dual_gap, row.gap - dual_gap, row.gap))

        for k in checkpoints:
            bounds = theoretical_bounds(rho, k, reference.u0, reference.opt, 2.0 * reference.u0)
            error, dual_gap, primal_gap, gap = np.mean(samples[k], axis=0)
            assert error <= 1.2 * bounds['error']
            assert dual_gap <= 1.2 * bounds['dual_suboptimality']
            assert primal_gap <= 1.2 * bounds['primal_suboptimality']
            assert gap <= 1.2 * bounds['gap']

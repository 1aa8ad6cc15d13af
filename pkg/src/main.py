"""
Punto de entrada principal de SDAKit
"""

import sys
import os
import argparse
from dataclasses import replace
import json
from pathlib import Path
from typing import List, Optional

import numpy as np

# Agregar el directorio src al path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.benchmark import (
    SOLUTION_STREAM,
    VALUES_STREAM,
    generate_rank_deficient,
    method_spec,
    run_benchmark,
)
from core.config import Config
from core.errors import (
    AnalysisUnavailableError,
    ContractViolation,
    InconsistentSystemError,
    NumericalError,
)
from core.gossip import activation_probabilities, gossip_rate, run_gossip, to_problem
from core.logger import configure_from_yaml
from core.rates import iterations_for, rate_report
from core.solver import solve
from models.bench import METHODS, parse_method
from models.network import GossipNetwork
from models.problem import ProjectionProblem, SpdMatrix
from models.sketch import SamplerSpec
from samplers import make_stream
from utils.file_utils import (
    read_edge_list,
    read_matrix,
    read_vector,
    write_csv,
    write_matrix,
    write_vector,
)
from utils.formatters import (
    format_iterations,
    format_rate,
    format_scientific,
    format_verdict,
)
from utils.validators import validate_output_path, validate_seed


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

EPSILONS = (1e-2, 1e-4, 1e-8)
DEFAULT_CONFIG = 'config/sda.ini'


class ArgumentParser(argparse.ArgumentParser):
    """argparse con código de salida 1 para errores de uso"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    """
    Construye el parser de línea de comandos
    """
    parser = ArgumentParser(
        description='SDAKit - Stochastic dual ascent / sketch-and-project',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Ejemplos de uso:
  python src/main.py gen --n 300 --rank 40 --output data/A.mtx --rhs-output data/b.txt
  python src/main.py solve --matrix data/A.mtx --rhs data/b.txt --method kaczmarz
  python src/main.py analyze --matrix data/A.mtx --method "block(2)" --json
  python src/main.py bench --n 300 --method kaczmarz --trials 10 --output results/bench.csv
  python src/main.py gossip --complete 10 --model 1 --rounds 500
        """
    )

    # Opciones comunes a todos los subcomandos
    common = ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, default=None,
                        help=f'Ruta al archivo de configuración (default: {DEFAULT_CONFIG} si existe)')
    common.add_argument('--seed', type=int, default=None, help='Semilla base')
    common.add_argument('--log-level', type=str, default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Nivel de logging')

    # Opciones del sistema lineal
    system = ArgumentParser(add_help=False)
    system.add_argument('--matrix', type=str, help='Matriz A (Matrix Market)')
    system.add_argument('--b-matrix-file', type=str, help='Matriz SPD B (Matrix Market); default I')
    system.add_argument('--c-file', type=str, help='Vector c; default 0')
    system.add_argument('--method', type=str, default=None,
                        help=f"Método: {', '.join(METHODS)}; block/count-sketch/count-min/gaussian llevan tamaño, ej. 'block(2)'")
    system.add_argument('--probabilities', type=str, default=None, choices=['uniform', 'row-norm'],
                        help='Regla de probabilidades')

    # Opciones de red
    network = ArgumentParser(add_help=False)
    network.add_argument('--graph', type=str, help='Lista de aristas ("n m" y luego "i j", desde 1)')
    network.add_argument('--complete', type=int, metavar='N', help='Grafo completo de N nodos')
    network.add_argument('--path', type=int, metavar='N', help='Camino de N nodos')
    network.add_argument('--star', type=int, metavar='N', help='Estrella de N nodos')
    network.add_argument('--random', type=float, nargs=2, metavar=('N', 'P'),
                         help='Grafo G(N, P) conexo')
    network.add_argument('--values', type=str, help='Valores privados c (uno por línea)')
    network.add_argument('--spanning-tree', action='store_true',
                         help='Usar un árbol generador de la red')

    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    # solve
    p_solve = subparsers.add_parser('solve', parents=[common, system],
                                    help='Resolver un problema de proyección')
    p_solve.add_argument('--rhs', type=str, help='Vector b; default 0')
    p_solve.add_argument('--x0-file', type=str, help='Punto inicial primal (SDA-Primal)')
    p_solve.add_argument('--y0-file', type=str, help='Punto inicial dual (default 0)')
    p_solve.add_argument('--max-iters', type=int, help='Máximo de iteraciones')
    p_solve.add_argument('--tol-residual', type=float, help='Tolerancia del residuo')
    p_solve.add_argument('--tol-gap', type=float, help='Tolerancia del gap de dualidad')
    p_solve.add_argument('--record-every', type=int, default=None, help='Cada cuántas iteraciones registrar')
    p_solve.add_argument('--output', type=str, help='Archivo para la solución x')
    p_solve.add_argument('--trace-output', type=str, help='CSV con la traza de métricas')

    # bench
    p_bench = subparsers.add_parser('bench', parents=[common, system],
                                    help='Benchmark de convergencia a CSV')
    p_bench.add_argument('--n', type=int, help='Dimensión de la matriz generada')
    p_bench.add_argument('--rank', type=int, help='Rango de la matriz generada (default: todos los de la config)')
    p_bench.add_argument('--trials', type=int, help='Número de pruebas')
    p_bench.add_argument('--iterations', type=int, help='Iteraciones por prueba')
    p_bench.add_argument('--record-every', type=int, help='Cada cuántas iteraciones registrar')
    p_bench.add_argument('--workers', type=int, help='Pruebas en paralelo')
    p_bench.add_argument('--target-error', type=float, help='Error relativo objetivo')
    p_bench.add_argument('--output', type=str, help='CSV de salida')
    p_bench.add_argument('--graph', type=str, help='Lista de aristas (métodos gossip)')
    p_bench.add_argument('--values', type=str, help='Valores privados (métodos gossip)')

    # analyze
    p_analyze = subparsers.add_parser('analyze', parents=[common, system, network],
                                      help='Tasa ρ, cota inferior y test de H')
    p_analyze.add_argument('--model', type=int, choices=[1, 2], help='Modelo de gossip')
    p_analyze.add_argument('--json', action='store_true', help='Salida JSON')

    # gossip
    p_gossip = subparsers.add_parser('gossip', parents=[common, network],
                                     help='Simular gossip aleatorizado')
    p_gossip.add_argument('--model', type=int, choices=[1, 2], help='Modelo 1 (aristas) o 2 (nodos)')
    p_gossip.add_argument('--rounds', type=int, help='Rondas')
    p_gossip.add_argument('--record-every', type=int, help='Cada cuántas rondas registrar')
    p_gossip.add_argument('--probabilities', type=str, default='uniform', choices=['uniform', 'row-norm'])
    p_gossip.add_argument('--output', type=str, help='CSV con la traza (ronda, desvío, suma)')

    # gen
    p_gen = subparsers.add_parser('gen', parents=[common], help='Generar una matriz de rango deficiente')
    p_gen.add_argument('--n', type=int, required=True, help='Dimensión')
    p_gen.add_argument('--rank', type=int, required=True, help='Rango')
    p_gen.add_argument('--output', type=str, required=True, help='Archivo .mtx de salida')
    p_gen.add_argument('--coordinate', action='store_true', help='Formato coordinate en vez de array')
    p_gen.add_argument('--rhs-output', type=str, help='Escribir b = A·x_true')
    p_gen.add_argument('--solution-output', type=str, help='Escribir x_true')

    return parser


def print_banner():
    """Imprime el banner"""
    banner = """
    ╔═══════════════════════════════════════════════════════════╗
    ║                                                           ║
    ║         SDAKit v1.0.0                                     ║
    ║         Stochastic dual ascent / sketch-and-project       ║
    ║                                                           ║
    ╚═══════════════════════════════════════════════════════════╝
    """
    print(banner)


def load_config(path: Optional[str]) -> Config:
    """Config explícita, o config/sda.ini si existe, o sólo valores por defecto"""
    if path:
        return Config(path)
    if Path(DEFAULT_CONFIG).exists():
        return Config(DEFAULT_CONFIG)
    return Config(None)


def require_writable(*paths: Optional[str]):
    for path in paths:
        if path and not validate_output_path(path):
            raise ContractViolation(f"output path is not writable: {path}")


# ═══════════════════════════════════════════════════════════
# CARGA DE PROBLEMAS Y REDES
# ═══════════════════════════════════════════════════════════

def load_problem(args, rhs: Optional[str] = None) -> ProjectionProblem:
    """Problema (A, b, B, c) a partir de archivos"""
    if not args.matrix:
        raise ContractViolation("--matrix is required")
    A = read_matrix(args.matrix)
    b = read_vector(rhs) if rhs else None
    B = SpdMatrix(read_matrix(args.b_matrix_file)) if args.b_matrix_file else None
    c = read_vector(args.c_file) if args.c_file else None
    return ProjectionProblem.create(A, b=b, B=B, c=c)


def _network_sources(args) -> list:
    return [args.graph, args.complete, args.path, args.star, args.random]


def _has_network(args) -> bool:
    return any(source is not None for source in _network_sources(args))


def load_network(args, seed: int) -> GossipNetwork:
    """Red a partir de una lista de aristas o de una familia con nombre"""
    sources = _network_sources(args)
    if sum(source is not None for source in sources) != 1:
        raise ContractViolation("give exactly one of --graph, --complete, --path, --star, --random")

    if args.graph:
        n, edges = read_edge_list(args.graph)
        network = GossipNetwork(n=n, edges=edges)
    elif args.complete is not None:
        network = GossipNetwork.complete(args.complete)
    elif args.path is not None:
        network = GossipNetwork.path(args.path)
    elif args.star is not None:
        network = GossipNetwork.star(args.star)
    else:
        n, p = args.random
        network = GossipNetwork.random_connected(int(n), p, seed=seed)

    if args.spanning_tree:
        network = network.spanning_tree()

    values = (read_vector(args.values) if args.values
              else make_stream(seed, VALUES_STREAM).random(network.n))
    return network.with_values(values)


# ═══════════════════════════════════════════════════════════
# SUBCOMANDOS
# ═══════════════════════════════════════════════════════════

def command_solve(args, config: Config, seed: int) -> int:
    """
    Subcomando: resolver
    """
    print("\n🧮 MODO: RESOLVER\n")
    require_writable(args.output, args.trace_output)

    problem = load_problem(args, rhs=args.rhs)
    problem.validate(config.getfloat('linalg', 'consistency_tol'))

    method = args.method or config.get('bench', 'method')
    if parse_method(method)[0].startswith('gossip'):
        raise ContractViolation("gossip methods run with the 'gossip' subcommand")
    probabilities = args.probabilities or config.get('bench', 'probabilities')
    spec = method_spec(method, problem.A, probabilities)

    options = config.solve_options()
    options.seed = seed
    if args.max_iters is not None:
        options.max_iters = args.max_iters
    if args.tol_residual is not None:
        options.tol_residual = args.tol_residual
    if args.tol_gap is not None:
        options.tol_gap = args.tol_gap
    if args.record_every is not None:
        options.record_every = args.record_every

    x0 = read_vector(args.x0_file) if args.x0_file else None
    y0 = read_vector(args.y0_file) if args.y0_file else None
    report = solve(problem, spec, options, y0=y0, x0=x0)

    last = report.trace[-1]
    print("=" * 70)
    print("📊 RESULTADO")
    print("=" * 70)
    print(f"   • Problema: A {problem.m}x{problem.n}, método {method} ({probabilities})")
    print(f"   • Convergió: {format_verdict(report.converged)}")
    print(f"   • Iteraciones: {report.iterations:,}")
    print(f"   • Residuo ‖Ax − b‖: {format_scientific(last.residual)}")
    print(f"   • Gap de dualidad: {format_scientific(last.gap)}")
    print(f"   • Error relativo: {format_scientific(float(report.relative_errors()[-1]))}")
    print(f"   • OPT: {format_scientific(report.reference.opt)}")
    if report.singular_h:
        print("\n⚠️  H es singular: no hay garantía de convergencia para esta distribución")

    if args.output:
        path = write_vector(args.output, report.state.x)
        print(f"\n💾 Solución guardada en: {path}")
    if args.trace_output:
        path = write_csv(
            args.trace_output,
            ['k', 'error_sq', 'residual', 'dual_value', 'gap'],
            ([row.k, row.error_sq, row.residual, row.dual_value, row.gap] for row in report.trace)
        )
        print(f"💾 Traza guardada en: {path}")

    return EXIT_OK


def command_bench(args, config: Config, seed: int) -> int:
    """
    Subcomando: benchmark
    """
    print("\n📈 MODO: BENCHMARK\n")
    base = config.bench_defaults()
    base.seed = seed
    overrides = {
        'matrix_file': args.matrix,
        'b_matrix_file': args.b_matrix_file,
        'c_file': args.c_file,
        'graph_file': args.graph,
        'values_file': args.values,
        'method': args.method,
        'probabilities': args.probabilities,
        'n': args.n,
        'trials': args.trials,
        'iterations': args.iterations,
        'record_every': args.record_every,
        'workers': args.workers,
        'target_error': args.target_error,
        'output': args.output
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(base, key, value)

    gossip = base.method_name.startswith('gossip')
    if args.rank is not None:
        ranks = [args.rank]
    elif base.matrix_file or gossip:
        ranks = [base.rank]
    else:
        ranks = [r for r in config.ranks() if r <= base.n] or [base.n]

    for rank in ranks:
        bench = replace(base, rank=rank,
                        output=_rank_output(base.output, rank) if len(ranks) > 1 else base.output)
        require_writable(bench.output)
        result = run_benchmark(bench)

        reached = [k for k in result.iterations_to_target.values() if k is not None]
        print("=" * 70)
        label = 'red' if gossip else ('archivo' if bench.matrix_file else f"n={bench.n}, rank={rank}")
        print(f"📊 {bench.method} ({label})")
        print("=" * 70)
        print(f"   • rank(A): {result.rank_A}")
        print(f"   • ρ: {format_rate(result.rho) if result.rho is not None else 'no disponible'}")
        print(f"   • Pruebas que alcanzaron {bench.target_error:g}: {len(reached)}/{bench.trials}")
        if reached:
            print(f"   • Iteraciones (mediana): {int(np.median(reached)):,}")
        print(f"   • CSV: {result.output}")
        print(f"   • Resumen: {result.summary_output}\n")

    return EXIT_OK


def _rank_output(output: str, rank: int) -> str:
    path = Path(output)
    return str(path.with_name(f"{path.stem}_r{rank}{path.suffix}"))


def command_analyze(args, config: Config, seed: int) -> int:
    """
    Subcomando: análisis de tasa
    """
    method = args.method
    if method is None and _has_network(args):
        method = f"gossip-model{args.model or config.getint('gossip', 'model')}"
    method = method or config.get('bench', 'method')
    name = parse_method(method)[0]
    probabilities = args.probabilities or config.get('bench', 'probabilities')

    if name.startswith('gossip'):
        model = args.model or (1 if name == 'gossip-model1' else 2)
        network = load_network(args, seed)
        problem = to_problem(network, model)
        spec = SamplerSpec.coordinate(activation_probabilities(network, model, probabilities))
    else:
        problem = load_problem(args)
        spec = method_spec(method, problem.A, probabilities)

    if not spec.is_finite:
        raise AnalysisUnavailableError(spec.kind.value)
    report = rate_report(problem, spec)
    estimates = {eps: iterations_for(report.rho, eps) for eps in EPSILONS}

    if args.json:
        payload = report.to_dict()
        payload['method'] = method
        payload['warning'] = None if report.h_nonsingular else 'singular H: no convergence guarantee'
        payload['iterations'] = {f"{eps:g}": k for eps, k in estimates.items()}
        print(json.dumps(payload, indent=2, ensure_ascii=False))
        return EXIT_OK

    print("\n🔍 MODO: ANÁLISIS DE TASA\n")
    print("=" * 70)
    print(f"📊 {method} ({probabilities}) sobre A {problem.m}x{problem.n}")
    print("=" * 70)
    print(f"   • H no singular: {format_verdict(report.h_nonsingular)} (rango {report.h_rank}/{problem.m})")
    flag = '' if report.h_nonsingular else '  ⚠️  sin garantía (H singular)'
    print(f"   • ρ: {format_rate(report.rho)}{flag}")
    print(f"   • Cota inferior: {format_rate(report.lower_bound)}")
    print(f"   • rank(A): {report.rank_A}")
    print(f"   • E[rank(SᵀA)]: {report.expected_sketch_rank:g}")
    print("   • Iteraciones estimadas k(ε):")
    for eps, k in estimates.items():
        print(f"     - ε = {eps:g}: {format_iterations(k)}")
    return EXIT_OK


def command_gossip(args, config: Config, seed: int) -> int:
    """
    Subcomando: simulación de gossip
    """
    print("\n🔗 MODO: GOSSIP\n")
    require_writable(args.output)

    network = load_network(args, seed)
    model = args.model or config.getint('gossip', 'model')
    rounds = args.rounds if args.rounds is not None else config.getint('gossip', 'rounds')
    record_every = args.record_every or config.getint('gossip', 'record_every')

    report = run_gossip(network, model, rounds, seed=seed,
                        record_every=record_every, probabilities=args.probabilities)
    target = network.mean

    print("=" * 70)
    print(f"📊 Modelo {model}: {network.n} nodos, {network.m} aristas, {rounds:,} rondas")
    print("=" * 70)
    print(f"   • Promedio exacto c̄: {target:.12g}")
    print(f"   • Desvío máximo final: {format_scientific(report.max_deviation(target))}")
    print(f"   • Tasa teórica ρ: {format_rate(gossip_rate(network, model, args.probabilities))}")
    print(f"   • Gap de dualidad final: {format_scientific(report.gap)}")
    print(f"   • Valores finales: {np.array2string(report.final_values, precision=6)}")

    if args.output:
        path = write_csv(
            args.output,
            ['round', 'max_deviation', 'sum'],
            ([k, float(np.max(np.abs(values - target))), float(values.sum())]
             for k, values in zip(report.trace_rounds, report.trace_values))
        )
        print(f"\n💾 Traza guardada en: {path}")
    return EXIT_OK


def command_gen(args, config: Config, seed: int) -> int:
    """
    Subcomando: generar matriz de rango deficiente
    """
    print("\n🎲 MODO: GENERAR\n")
    require_writable(args.output, args.rhs_output, args.solution_output)

    A = generate_rank_deficient(args.n, args.rank, seed)
    path = write_matrix(args.output, A, coordinate=args.coordinate)
    print(f"💾 Matriz {args.n}x{args.n} de rango {args.rank} guardada en: {path}")

    if args.rhs_output or args.solution_output:
        x_true = make_stream(seed, SOLUTION_STREAM).standard_normal(args.n)
        if args.rhs_output:
            print(f"💾 b = A·x_true guardado en: {write_vector(args.rhs_output, A @ x_true)}")
        if args.solution_output:
            print(f"💾 x_true guardado en: {write_vector(args.solution_output, x_true)}")
    return EXIT_OK


COMMANDS = {
    'solve': command_solve,
    'bench': command_bench,
    'analyze': command_analyze,
    'gossip': command_gossip,
    'gen': command_gen,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Función principal

    Returns:
        int: 0 éxito, 1 error de uso, 2 fallo numérico o de consistencia
    """
    args = build_parser().parse_args(argv)

    try:
        config = load_config(args.config)
        if not config.validate():
            raise ContractViolation("invalid configuration")

        level = args.log_level or config.get('logging', 'level')
        configure_from_yaml(config.get('logging', 'yaml'), level, config.get('logging', 'file'))

        seed = args.seed if args.seed is not None else config.getint('solver', 'seed')
        if not validate_seed(seed):
            raise ContractViolation(f"seed must be a non-negative integer, got {seed}")

        if not (args.command == 'analyze' and args.json):
            print_banner()
        return COMMANDS[args.command](args, config, seed)

    except KeyboardInterrupt:
        print("\n\n⚠️  Interrupción de usuario detectada")
        return EXIT_USAGE

    except (NumericalError, InconsistentSystemError) as e:
        print(f"\n❌ ERROR NUMÉRICO: {e}", file=sys.stderr)
        return EXIT_NUMERICAL

    except (ContractViolation, AnalysisUnavailableError, FileNotFoundError, OSError, ValueError) as e:
        print(f"\n❌ ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())

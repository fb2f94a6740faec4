# main.py
import argparse
import json
import sys

from src.domain.benchmark import PruningBenchmark
from src.domain.errors import QlpError
from src.domain.qualification_domain import format_value, parse_domain_flag
from src.domain.resolution import Outcome, SldEngine, Verdict, check_answer
from src.domain.semantics import AnnotatedAtom, least_model, qhl_search, render_proof_tree
from src.domain.settings import EngineSettings
from src.domain.syntax import parse_annotated_atom, parse_answer, parse_goal, parse_program, to_text
from src.domain.translation import (DIALECTS, emit_goal_text, emit_text, params_for, translate_goal,
                                    translate_program)

EXIT_OK = 0
EXIT_NO_ANSWER = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="main.py", description="Motor de programação lógica qualificada SLD(D).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", type=parse_domain_flag, default=None,
                        help="b, u, w ou prod:<d1>,<d2> (padrão: engine.domain ou u)")
    common.add_argument("--config", default=None, help="arquivo .properties (padrão: config/engine.properties)")

    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="enumera as respostas computadas de um objetivo")
    solve.add_argument("program")
    solve.add_argument("goal")
    solve.add_argument("--select", choices=("leftmost", "rightmost"), default=None)
    solve.add_argument("--max-depth", type=int, default=None)
    solve.add_argument("--max-answers", type=int, default=None)
    solve.add_argument("--max-steps", type=int, default=None)
    solve.add_argument("--no-pruning", action="store_true", help="desliga a poda por habilitação")
    solve.add_argument("--trace", action="store_true")
    solve.add_argument("--json", action="store_true")

    model = sub.add_parser("model", parents=[common], help="aproxima o modelo mínimo por iteração de T_P")
    model.add_argument("program")
    model.add_argument("--depth", type=int, default=None)
    model.add_argument("--iters", type=int, default=None)

    translate = sub.add_parser("translate", parents=[common], help="traduz o programa para cláusulas com restrições")
    translate.add_argument("program")
    translate.add_argument("--dialect", choices=DIALECTS, default=None)
    translate.add_argument("--goal", default=None, help="também traduz este objetivo")

    check = sub.add_parser("check", parents=[common], help="verifica se uma resposta é solução do objetivo")
    check.add_argument("program")
    check.add_argument("goal")
    check.add_argument("answer")
    check.add_argument("--oracle-depth", type=int, default=None)

    prove = sub.add_parser("prove", parents=[common], help="procura uma árvore de prova para atom # valor")
    prove.add_argument("program")
    prove.add_argument("atom")
    prove.add_argument("--depth", type=int, default=None)

    bench = sub.add_parser("bench", help="executa o benchmark de poda")
    bench.add_argument("properties", nargs="?", default="config/benchmark.properties")
    return parser


def load_program(path: str, settings: EngineSettings):
    with open(path, encoding="utf-8") as f:
        return parse_program(f.read(), settings.domain)


def answer_record(desc, sigma, mu, status: str, steps: int) -> dict:
    return {
        "status": status,
        "bindings": {var.name: to_text(term) for var, term in sigma.items()},
        "qualifications": {w: format_value(desc, value) for w, value in mu.items()},
        "steps": steps,
    }


def status_text(outcome: Outcome) -> str:
    return Outcome.TRUNCATED.value if outcome is Outcome.ANSWER_LIMIT else outcome.value


def cmd_solve(args, settings: EngineSettings, out) -> int:
    settings = settings.with_overrides(select=args.select, max_depth=args.max_depth, max_answers=args.max_answers,
                                       max_steps=args.max_steps, pruning=False if args.no_pruning else None)
    program = load_program(args.program, settings)
    goal = parse_goal(args.goal, settings.domain)
    trace_stream = out if args.trace and not args.json else None
    with SldEngine(program, settings.search_config(trace=args.trace), trace_stream,
                   settings.effective_log_dir, settings.log_verbose) as engine:
        stream = engine.run(goal)
        count = 0
        for answer in stream:
            count += 1
            if args.json:
                out.write(json.dumps(answer_record(settings.domain, answer.sigma, answer.mu, "answer",
                                                   answer.steps)) + "\n")
            else:
                out.write(answer.to_text() + "\n")
    if args.json:
        if args.trace:
            for line in stream.trace_lines:
                out.write(json.dumps({"trace": line}) + "\n")
        out.write(json.dumps(answer_record(settings.domain, {}, {}, status_text(stream.outcome),
                                           stream.steps)) + "\n")
    else:
        out.write(f"status: {status_text(stream.outcome)}, steps: {stream.steps}\n")
    return EXIT_OK if count else EXIT_NO_ANSWER


def cmd_model(args, settings: EngineSettings, out) -> int:
    settings = settings.with_overrides(model_depth=args.depth, model_iters=args.iters)
    program = load_program(args.program, settings)
    frag = least_model(program, settings.model_depth, settings.model_iters)
    if not frag.fixpoint:
        sys.stderr.write(f"Aviso: ponto fixo não atingido em {settings.model_iters} iterações\n")
    out.write(frag.dump())
    return EXIT_OK


def cmd_translate(args, settings: EngineSettings, out) -> int:
    settings = settings.with_overrides(dialect=args.dialect)
    program = load_program(args.program, settings)
    tprogram = translate_program(program, params_for(settings.dialect))
    text = emit_text(tprogram, settings.dialect)
    if args.goal is not None:
        goal = parse_goal(args.goal, settings.domain)
        text += emit_goal_text(translate_goal(goal, settings.domain), settings.domain, settings.dialect)
    out.write(text)
    return EXIT_OK


def cmd_check(args, settings: EngineSettings, out) -> int:
    settings = settings.with_overrides(oracle_depth=args.oracle_depth)
    program = load_program(args.program, settings)
    goal = parse_goal(args.goal, settings.domain)
    answer = parse_answer(args.answer, settings.domain)
    verdict = check_answer(program, goal, answer, settings.oracle_depth)
    out.write(verdict.value + "\n")
    return {Verdict.VALID: EXIT_OK, Verdict.INVALID: EXIT_NO_ANSWER, Verdict.UNKNOWN: EXIT_UNKNOWN}[verdict]


def cmd_prove(args, settings: EngineSettings, out) -> int:
    depth = args.depth if args.depth is not None else settings.oracle_depth
    program = load_program(args.program, settings)
    atom, value = parse_annotated_atom(args.atom, settings.domain)
    search = qhl_search(program, AnnotatedAtom(atom, value), depth)
    if search.tree is None:
        out.write(f"no proof within depth {depth}\n")
        return EXIT_NO_ANSWER
    out.write(render_proof_tree(search.tree))
    return EXIT_OK


def cmd_bench(args, out) -> int:
    cycles = PruningBenchmark(args.properties).run()
    out.write("threshold\tpruned_steps\tunpruned_steps\tunpruned_status\tanswers\tmean_ms\n")
    for cycle in cycles:
        out.write(f"{cycle.threshold}\t{cycle.pruned_steps}\t{cycle.unpruned_steps}\t"
                  f"{status_text(cycle.unpruned_outcome)}\t{cycle.answers}\t{cycle.mean_ms:.2f}\n")
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "model": cmd_model,
    "translate": cmd_translate,
    "check": cmd_check,
    "prove": cmd_prove,
}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bench":
            return cmd_bench(args, out)
        settings = EngineSettings.from_properties(args.config).with_overrides(domain=args.domain)
        return COMMANDS[args.command](args, settings, out)
    except FileNotFoundError as e:
        sys.stderr.write(f"Erro: Arquivo não encontrado: {e.filename or e}\n")
    except KeyError as e:
        sys.stderr.write(f"Erro: Propriedade ausente no arquivo de configuração: {e}\n")
    except (QlpError, ValueError) as e:
        sys.stderr.write(f"Erro: {e}\n")
    except Exception as e:
        sys.stderr.write(f"Ocorreu um erro inesperado: {e}\n")
        import traceback
        traceback.print_exc()
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

import os
import time
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from src.domain.abstract_engine import AbstractEngine
from src.domain.qualification_domain import format_value, parse_domain_flag, parse_value
from src.domain.resolution import Outcome, SearchConfig, solve
from src.domain.syntax import parse_goal, parse_program
from src.domain.utils import (calculate_mean, calculate_std_dev, parse_fraction_list, parse_optional_int,
                              read_properties_file)


@dataclass(frozen=True)
class BenchmarkCycle:
    threshold: object
    pruned_steps: int
    unpruned_steps: int
    unpruned_outcome: Outcome
    answers: int
    mean_ms: float
    std_ms: float


class PruningBenchmark(AbstractEngine):
    """
    Mede o efeito da poda por habilitação: para cada limiar configurado, resolve
    o mesmo objetivo com poda e sem poda (filtrando as respostas no final, com
    orçamento de passos) e registra passos e tempos.
    """

    def __init__(self, properties_path: str):
        props = read_properties_file(properties_path)
        super().__init__("PruningBenchmark", props.get("log.dir", "logs"),
                         props.get("log.verbose", "false").lower() == 'true')

        self.domain = parse_domain_flag(props.get("bench.domain", "u"))
        self.program_path = props["bench.program"]
        self.goal_template = props["bench.goal"]
        self.thresholds = parse_fraction_list(props["bench.thresholds"])
        self.repetitions = int(props.get("bench.repetitions", "5"))
        self.unpruned_step_budget = parse_optional_int(props.get("bench.unprunedStepBudget", "5000"))
        self.select = props.get("bench.select", "leftmost")
        self.plot_path = props.get("bench.plotPath", os.path.join("logs", "pruning_steps.png"))

        with open(self.program_path, encoding="utf-8") as f:
            self.program = parse_program(f.read(), self.domain)

        self.cycles: list[BenchmarkCycle] = []
        self.print_engine_parameters()

    def engine_parameters(self) -> dict:
        return {
            "Programa": self.program_path,
            "Domínio": self.domain,
            "Objetivo": self.goal_template,
            "Limiares": [self.threshold_text(t) for t in self.thresholds],
            "Repetições": self.repetitions,
            "Orçamento sem Poda": self.unpruned_step_budget,
            "Seleção": self.select,
            "Gráfico": self.plot_path,
        }

    def run(self) -> list[BenchmarkCycle]:
        self.log("Iniciando o benchmark de poda...")
        try:
            for threshold in self.thresholds:
                self.cycles.append(self.run_cycle(threshold))
            self.display_final_results()
        finally:
            self.stop_engine()
        return self.cycles

    def threshold_text(self, threshold) -> str:
        return format_value(self.domain, parse_value(self.domain, str(threshold)))

    def run_cycle(self, threshold) -> BenchmarkCycle:
        goal_text = self.goal_template.format(threshold=self.threshold_text(threshold))
        goal = parse_goal(goal_text, self.domain)
        self.log(f"Ciclo com limiar {threshold}: {goal_text}")

        timings = []
        pruned = None
        for _ in range(self.repetitions):
            start = time.perf_counter()
            pruned = solve(self.program, goal, SearchConfig(selection=self.select))
            answers = len(pruned.collect())
            timings.append((time.perf_counter() - start) * 1000.0)

        unpruned = solve(self.program, goal, SearchConfig(selection=self.select, pruning=False,
                                                          max_steps=self.unpruned_step_budget))
        unpruned.collect()

        mean_ms = calculate_mean(timings)
        cycle = BenchmarkCycle(threshold, pruned.steps, unpruned.steps, unpruned.outcome, answers,
                               mean_ms, calculate_std_dev(timings, mean_ms))
        self.log(f"Ciclo concluído. Passos com poda: {cycle.pruned_steps}, sem poda: {cycle.unpruned_steps} "
                 f"({cycle.unpruned_outcome.value}), respostas: {cycle.answers}, "
                 f"tempo médio: {cycle.mean_ms:.2f}ms (SD {cycle.std_ms:.2f}ms)")
        return cycle

    def display_final_results(self):
        self.log("======================================")
        self.log("Resultados Finais do Benchmark:")
        for i, cycle in enumerate(self.cycles):
            self.log(f"Ciclo {i + 1} (Limiar: {cycle.threshold}):")
            self.log(f"  Passos com poda: {cycle.pruned_steps}, sem poda: {cycle.unpruned_steps} "
                     f"({cycle.unpruned_outcome.value})")
            self.log(f"  Tempo médio: {cycle.mean_ms:.2f}ms, SD: {cycle.std_ms:.2f}ms")
        self.log("======================================")

        if not self.cycles:
            return
        thresholds = [float(c.threshold) for c in self.cycles]
        plt.figure(figsize=(10, 6))
        plt.plot(thresholds, [max(c.pruned_steps, 1) for c in self.cycles], marker='o', label='com poda')
        plt.plot(thresholds, [max(c.unpruned_steps, 1) for c in self.cycles], marker='s', label='sem poda')
        plt.yscale('log')
        plt.title("Passos de Resolução por Limiar")
        plt.xlabel("Limiar do Objetivo")
        plt.ylabel("Passos (escala log)")
        plt.legend(title="Busca")
        plt.grid(True, linestyle='--', alpha=0.7)
        plt.tight_layout()

        plot_dir = os.path.dirname(self.plot_path)
        if plot_dir:
            os.makedirs(plot_dir, exist_ok=True)
        plt.savefig(self.plot_path)
        plt.close()
        self.log(f"Gráfico salvo em {self.plot_path}")

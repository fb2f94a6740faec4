"""
Resolução SLD qualificada: estados de objetivo, o passo de resolução com
teste de habilitação, a busca em profundidade com retrocesso e as respostas
computadas.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Sequence, TextIO

from src.domain.abstract_engine import AbstractEngine
from src.domain.constraints import (ConstraintStore, check_solution, enabled, expand_threshold,
                                    initial_store, is_admissible, omega, resolve_constraints)
from src.domain.qualification_domain import CERT, DomainDescriptor, descriptor_of, lattice_ops
from src.domain.semantics import AnnotatedAtom, qhl_search
from src.domain.syntax import Atom, Clause, InitialGoal, Program, Var, atom_vars, to_text
from src.domain.unification import EMPTY, FreshNames, Substitution, apply, compose, match, mgu, rename_clause

STEP_LOG_INTERVAL = 10000


class Outcome(Enum):
    EXHAUSTED = "exhausted"
    TRUNCATED = "truncated"
    ANSWER_LIMIT = "answer_limit"


class Verdict(Enum):
    VALID = "valid"
    INVALID = "invalid"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class GoalAtom:
    atom: Atom
    qvar: str

    def __str__(self):
        return f"{to_text(self.atom)}#{self.qvar}"


@dataclass(frozen=True)
class GoalState:
    atoms: tuple
    sigma: Substitution
    store: ConstraintStore
    depth: int = field(default=0, compare=False)

    @property
    def is_solved(self) -> bool:
        return not self.atoms

    def is_well_formed(self) -> bool:
        """
            σ idempotente sem variáveis dos átomos no domínio, Δ admissível e
            exatamente um limiar por variável de qualificação dos átomos (e
            nenhum outro).
        """
        if not self.sigma.is_idempotent():
            return False
        atom_variables = set(atom_vars(item.atom for item in self.atoms))
        if any(var in atom_variables for var in self.sigma):
            return False
        if not is_admissible(self.store):
            return False
        qvars = [item.qvar for item in self.atoms]
        thresholds = [c.w for c in self.store.thresholds()]
        return len(set(qvars)) == len(qvars) and sorted(qvars) == sorted(thresholds)

    def __str__(self):
        atoms = ", ".join(str(item) for item in self.atoms)
        return f"{atoms} | {{{to_text(self.sigma)}}} | {', '.join(self.store.render())}"


@dataclass(frozen=True)
class ComputedAnswer:
    sigma: Substitution
    mu: dict
    steps: int = field(default=0, compare=False)

    def to_text(self) -> str:
        bindings = to_text(self.sigma) if self.sigma else "true"
        return f"{{{bindings}}} | {{{to_text(self.mu)}}}"


Selection = Callable[[GoalState], int]


@dataclass(frozen=True)
class SearchConfig:
    selection: str | Selection = "leftmost"
    max_depth: int | None = 10000
    max_steps: int | None = None
    max_answers: int | None = None
    trace: bool = False
    pruning: bool = True

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth deve ser >= 0")
        if isinstance(self.selection, str) and self.selection not in ("leftmost", "rightmost"):
            raise ValueError(f"estratégia de seleção desconhecida: {self.selection}")

    def select(self, state: GoalState) -> int:
        if self.selection == "leftmost":
            return 0
        if self.selection == "rightmost":
            return len(state.atoms) - 1
        index = self.selection(state)
        if not 0 <= index < len(state.atoms):
            raise ValueError(f"regra de seleção devolveu índice inválido: {index}")
        return index


def initial_state(goal: InitialGoal, desc: DomainDescriptor | None = None) -> GoalState:
    """
        Estado inicial: átomos do objetivo, σ = ε e Δ = {⊤ ∘ Wi ⊒ βi}.

        Raises:
            ValueError: Variáveis de qualificação repetidas ou limiar ⊥.
    """
    if desc is None:
        desc = descriptor_of(goal.items[0].threshold) if goal.items else CERT
    qvars = goal.qvars
    if len(set(qvars)) != len(qvars):
        raise ValueError(f"variáveis de qualificação repetidas no objetivo: {qvars}")
    ops = lattice_ops(desc)
    for item in goal.items:
        ops._require(item.threshold)
        if ops.is_bot(item.threshold):
            raise ValueError(f"limiar ⊥ para {item.qvar}")
    atoms = tuple(GoalAtom(item.atom, item.qvar) for item in goal.items)
    return GoalState(atoms, EMPTY, initial_store(desc, [(item.qvar, item.threshold) for item in goal.items]))


@dataclass(frozen=True)
class _StepResult:
    state: GoalState | None = None
    mgu: Substitution | None = None
    pruned: bool = False


def _step(state: GoalState, index: int, clause: Clause, fresh: FreshNames, pruning: bool = True,
          keep_vars: Sequence[Var] | None = None) -> _StepResult:
    selected = state.atoms[index]
    store = state.store
    threshold = store.threshold_for(selected.qvar)
    if pruning and not enabled(store.domain, clause.attenuation, threshold.alpha, threshold.beta):
        return _StepResult(pruned=True)
    renamed = rename_clause(clause, fresh)
    theta = mgu(selected.atom, renamed.head)
    if theta is None:
        return _StepResult()
    new_qvars = fresh.qvars(len(renamed.body))
    body = tuple(GoalAtom(apply(theta, atom), w) for atom, w in zip(renamed.body, new_qvars))
    rest = [GoalAtom(apply(theta, item.atom), item.qvar) for item in state.atoms]
    atoms = tuple(rest[:index]) + body + tuple(rest[index + 1:])
    sigma = compose(state.sigma, theta)
    if keep_vars is not None:
        sigma = sigma.restrict(keep_vars)
    if pruning:
        store = resolve_constraints(store, selected.qvar, threshold.alpha, threshold.beta,
                                    clause.attenuation, new_qvars)
    else:
        store = expand_threshold(store, selected.qvar, clause.attenuation, new_qvars)
    return _StepResult(GoalState(atoms, sigma, store, state.depth + 1), theta)


def resolution_step(state: GoalState, index: int, clause: Clause, fresh: FreshNames) -> GoalState | None:
    """
        Um passo de resolução com a cláusula dada sobre o átomo na posição
        `index`. A cláusula é renomeada com nomes de `fresh`.

        Returns:
            GoalState | None: None se d ∘ α ⋣ β ou se não houver unificador.
    """
    if state.is_solved or not 0 <= index < len(state.atoms):
        raise ValueError(f"índice de átomo inválido: {index}")
    return _step(state, index, clause, fresh).state


class SolutionStream:
    """
    Sequência preguiçosa de respostas computadas. Ao final da iteração,
    `outcome` indica se a busca foi esgotada, truncada ou parou no limite de
    respostas.
    """

    def __init__(self):
        self.outcome: Outcome | None = None
        self.steps = 0
        self.pruned = 0
        self.max_depth_reached = 0
        self.depth_cut = False
        self.answers = 0
        self.trace_lines: list[str] = []
        self._iterator: Iterator[ComputedAnswer] = iter(())

    def __iter__(self):
        return self

    def __next__(self) -> ComputedAnswer:
        return next(self._iterator)

    def collect(self) -> list[ComputedAnswer]:
        return list(self)


@dataclass
class _Frame:
    state: GoalState
    index: int
    clauses: tuple
    next: int = 0


class SldEngine(AbstractEngine):
    """
    Motor de resolução SLD qualificada: busca em profundidade, cláusulas na
    ordem do programa, retrocesso cronológico.
    """

    def __init__(self, program: Program, config: SearchConfig | None = None, trace_stream: TextIO | None = None,
                 log_dir: str | None = None, verbose: bool = False):
        super().__init__("SldEngine", log_dir, verbose)
        self.program = program
        self.config = config or SearchConfig()
        self.trace_stream = trace_stream

    def engine_parameters(self) -> dict:
        return {
            "Domínio": self.program.domain,
            "Cláusulas": len(self.program.clauses),
            "Seleção": self.config.selection if isinstance(self.config.selection, str) else "personalizada",
            "Profundidade Máxima": self.config.max_depth,
            "Passos Máximos": self.config.max_steps,
            "Respostas Máximas": self.config.max_answers,
            "Poda por Habilitação": self.config.pruning,
        }

    def run(self, goal: InitialGoal) -> SolutionStream:
        self.print_engine_parameters()
        self.log(f"Resolvendo objetivo: {to_text(goal)}")
        stream = SolutionStream()
        stream._iterator = self._search(stream, goal)
        return stream

    def _trace(self, stream: SolutionStream, line: str):
        stream.trace_lines.append(line)
        if self.trace_stream is not None:
            self.trace_stream.write(line + "\n")

    def _finish(self, stream: SolutionStream, outcome: Outcome):
        stream.outcome = outcome
        self.log(f"Busca encerrada: {outcome.value}, passos: {stream.steps}, podas: {stream.pruned}, "
                 f"respostas: {stream.answers}")

    def _answer(self, state: GoalState, goal_vars: list[Var], goal: InitialGoal, steps: int) -> ComputedAnswer | None:
        mu = omega(state.store)
        mu = {w: mu[w] for w in goal.qvars}
        if not self.config.pruning:
            thresholds = initial_store(self.program.domain, [(i.qvar, i.threshold) for i in goal.items])
            if not check_solution(thresholds, mu):
                return None
        return ComputedAnswer(state.sigma.restrict(goal_vars), mu, steps)

    def _search(self, stream: SolutionStream, goal: InitialGoal) -> Iterator[ComputedAnswer]:
        config = self.config
        goal_vars = atom_vars(goal.atoms)
        fresh = FreshNames({v.name for v in goal_vars}, goal.qvars)
        stack: list[_Frame] = []

        def enter(state: GoalState) -> ComputedAnswer | None:
            stream.max_depth_reached = max(stream.max_depth_reached, state.depth)
            if state.is_solved:
                return self._answer(state, goal_vars, goal, stream.steps)
            if config.max_depth is not None and state.depth >= config.max_depth:
                stream.depth_cut = True
                return None
            index = config.select(state)
            stack.append(_Frame(state, index, self.program.clauses_for(state.atoms[index].atom.predicate)))
            return None

        if config.max_answers == 0:
            self._finish(stream, Outcome.ANSWER_LIMIT)
            return
        answer = enter(initial_state(goal, self.program.domain))
        if answer is not None:
            stream.answers += 1
            yield answer
            if config.max_answers is not None and stream.answers >= config.max_answers:
                self._finish(stream, Outcome.ANSWER_LIMIT)
                return

        while stack:
            frame = stack[-1]
            if frame.next >= len(frame.clauses):
                stack.pop()
                continue
            clause = frame.clauses[frame.next]
            frame.next += 1
            result = _step(frame.state, frame.index, clause, fresh, config.pruning, goal_vars)
            if result.pruned:
                stream.pruned += 1
                continue
            if result.state is None:
                continue
            if config.max_steps is not None and stream.steps >= config.max_steps:
                self._finish(stream, Outcome.TRUNCATED)
                return
            stream.steps += 1
            if stream.steps % STEP_LOG_INTERVAL == 0:
                self.log(f"{stream.steps} passos, profundidade atual {result.state.depth}")
            if config.trace:
                selected = frame.state.atoms[frame.index]
                shown = result.mgu.restrict(atom_vars(item.atom for item in frame.state.atoms))
                self._trace(stream, f"{stream.steps}. {selected} :: {clause.label} {{{to_text(shown)}}} "
                                    f"=> {result.state}")
            answer = enter(result.state)
            if answer is not None:
                stream.answers += 1
                yield answer
                if config.max_answers is not None and stream.answers >= config.max_answers:
                    self._finish(stream, Outcome.ANSWER_LIMIT)
                    return
        self._finish(stream, Outcome.TRUNCATED if stream.depth_cut else Outcome.EXHAUSTED)


def solve(program: Program, goal: InitialGoal, config: SearchConfig | None = None,
          trace_stream: TextIO | None = None) -> SolutionStream:
    """
        Enumera as respostas computadas de `goal` em `program`.

        Returns:
            SolutionStream: Iterador de ComputedAnswer com estatísticas da busca.
    """
    return SldEngine(program, config, trace_stream).run(goal)


def check_answer(program: Program, goal: InitialGoal, answer, oracle_depth: int = 6, pruning: bool = True) -> Verdict:
    """
        Verifica se (θ, ρ) é solução do objetivo: ρ satisfaz os limiares
        iniciais e cada Aθ#Wρ é derivável por QHL dentro do limite de altura.
        Com `pruning` falso as provas são procuradas sem o teste de habilitação.

        Returns:
            Verdict: UNKNOWN quando alguma prova não foi encontrada mas a
                busca atingiu o limite de altura.
    """
    theta, rho = (answer.sigma, answer.mu) if isinstance(answer, ComputedAnswer) else answer
    ops = lattice_ops(program.domain)
    if any(w not in rho or not ops.contains(rho[w]) or ops.is_bot(rho[w]) for w in goal.qvars):
        return Verdict.INVALID
    thresholds = initial_store(program.domain, [(item.qvar, item.threshold) for item in goal.items])
    if not check_solution(thresholds, rho):
        return Verdict.INVALID
    verdict = Verdict.VALID
    for item in goal.items:
        search = qhl_search(program, AnnotatedAtom(apply(theta, item.atom), rho[item.qvar]), oracle_depth, pruning)
        if search.tree is None:
            if not search.depth_cut:
                return Verdict.INVALID
            verdict = Verdict.UNKNOWN
    return verdict


def subsumes(general, specific, varset: Sequence[Var], warset: Sequence[str]) -> bool:
    """
        (σ, μ) subsume (θ, ρ) sse existe η com σ(x)η = θ(x) para x em
        `varset` e μ(W) ⊒ ρ(W) para W em `warset`.
    """
    sigma, mu = (general.sigma, general.mu) if isinstance(general, ComputedAnswer) else general
    theta, rho = (specific.sigma, specific.mu) if isinstance(specific, ComputedAnswer) else specific
    if match((sigma.get(x, x), theta.get(x, x)) for x in varset) is None:
        return False
    for w in warset:
        if w not in mu or w not in rho:
            return False
        ops = lattice_ops(descriptor_of(mu[w]))
        if not ops.geq(mu[w], rho[w]):
            return False
    return True

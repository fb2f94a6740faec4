"""
Tradução de programas qualificados para cláusulas com restrições.

Cada predicado ganha três argumentos extras (Alpha, W, Beta) e cada cláusula
A <-d- q1, ..., qk vira:

    p(t, Alpha, W, Beta) :- d∘Alpha ⊒ Beta,
                            W1 ⊐ ⊥, W1 ⊑ ⊤, q1(s1, d∘Alpha, W1, Beta),
                            ...
                            W = d ∘ ⊓{W1, ..., Wk}

No dialeto `generic` as relações `>=`, `>` e `<=` seguem a ordem do domínio
(a mesma convenção dos objetivos). O dialeto `toy_like` imita a sintaxe de um
sistema CFLP sobre reais e só aceita os domínios b, u e w.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from src.domain.abstract_engine import AbstractEngine
from src.domain.constraints import enabled
from src.domain.errors import TranslationError
from src.domain.qualification_domain import DomainDescriptor, DomainKind, QualValue, lattice_ops
from src.domain.resolution import ComputedAnswer, Outcome, SearchConfig, SolutionStream
from src.domain.syntax import Atom, Clause, InitialGoal, Program, Var, atom_vars, to_text
from src.domain.unification import FreshNames, Substitution, apply, compose, mgu, rename_clause

GENERIC_PARAMS = ("Alpha", "W", "Beta")
TOY_PARAMS = ("F", "W", "M")
DIALECTS = ("generic", "toy_like")
ABOVE_BOTTOM = "above_bottom"
BELOW_TOP = "below_top"


@dataclass(frozen=True)
class EnablementLiteral:
    d: QualValue


@dataclass(frozen=True)
class RangeLiteral:
    w: str
    bound: str


@dataclass(frozen=True)
class CallLiteral:
    """Chamada q(s, d∘Alpha, Wi, Beta); `alpha_d` é o fator d da expressão d∘Alpha."""
    atom: Atom
    alpha_d: QualValue
    w: str


@dataclass(frozen=True)
class DefiningLiteral:
    d: QualValue
    deps: tuple = ()


@dataclass(frozen=True)
class ConstrainedClause:
    head: Atom
    params: tuple
    body: tuple
    label: str = field(default="", compare=False)

    @property
    def calls(self) -> list[CallLiteral]:
        return [lit for lit in self.body if isinstance(lit, CallLiteral)]


@dataclass(frozen=True)
class TranslatedProgram:
    domain: DomainDescriptor
    clauses: tuple
    constructors: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class GoalCall:
    atom: Atom
    alpha: QualValue
    w: str
    beta: QualValue


def _fresh_name(base: str, used: set) -> str:
    name = base
    while name in used:
        name += "_"
    used.add(name)
    return name


def translate_program(program: Program, params: Sequence[str] = GENERIC_PARAMS) -> TranslatedProgram:
    """
        Traduz cada cláusula independentemente, acrescentando os parâmetros
        (Alpha, W, Beta) com nomes que não colidem com as variáveis da cláusula.
    """
    translated = []
    for clause in program.clauses:
        used = {v.name for v in atom_vars((clause.head, *clause.body))}
        alpha, w, beta = (_fresh_name(name, used) for name in params)
        body: list = [EnablementLiteral(clause.attenuation)]
        deps = []
        for position, atom in enumerate(clause.body, start=1):
            wi = _fresh_name(f"W{position}", used)
            deps.append(wi)
            body.append(RangeLiteral(wi, ABOVE_BOTTOM))
            body.append(RangeLiteral(wi, BELOW_TOP))
            body.append(CallLiteral(atom, clause.attenuation, wi))
        body.append(DefiningLiteral(clause.attenuation, tuple(deps)))
        translated.append(ConstrainedClause(clause.head, (alpha, w, beta), tuple(body), clause.label))
    return TranslatedProgram(program.domain, tuple(translated), program.constructors())


def translate_goal(goal: InitialGoal, desc: DomainDescriptor) -> tuple:
    """Uma chamada q(t, ⊤, Wi, βi) por item do objetivo."""
    top = lattice_ops(desc).top
    return tuple(GoalCall(item.atom, top, item.qvar, item.threshold) for item in goal.items)


# ---------------------------------------------------------------------------
# Emissão de texto
# ---------------------------------------------------------------------------

def _args_text(atom: Atom, extra: Sequence[str], sep: str) -> str:
    args = [to_text(arg) for arg in atom.args] + list(extra)
    return f"{atom.predicate}({sep.join(args)})"


class _GenericWriter:
    sep = ", "

    def __init__(self, desc: DomainDescriptor):
        self.ops = lattice_ops(desc)

    def value(self, value) -> str:
        return self.ops.format_value(value)

    def alpha_expr(self, d, alpha: str) -> str:
        return f"{self.value(d)} {self.ops.op_symbol} {alpha}"

    def enablement(self, d, alpha: str, beta: str) -> str:
        return f"{self.alpha_expr(d, alpha)} >= {beta}"

    def range(self, lit: RangeLiteral) -> str:
        if lit.bound == ABOVE_BOTTOM:
            return f"{lit.w} > {self.value(self.ops.bot)}"
        return f"{lit.w} <= {self.value(self.ops.top)}"

    def defining(self, w: str, lit: DefiningLiteral) -> str:
        return f"{w} = {self.value(lit.d)} {self.ops.op_symbol} glb[{','.join(lit.deps)}]"

    def prelude(self, program: TranslatedProgram) -> list[str]:
        return [f"% domain: {program.domain}"]

    def clause_end(self) -> str:
        return "."


class _ToyWriter(_GenericWriter):
    sep = ","

    def __init__(self, desc: DomainDescriptor):
        if desc.kind is DomainKind.PRODUCT:
            raise TranslationError(f"o dialeto toy_like não expressa o domínio produto '{desc}'")
        super().__init__(desc)
        self.weight = desc.kind is DomainKind.WEIGHT

    def alpha_expr(self, d, alpha: str) -> str:
        return f"{alpha}{'+' if self.weight else '*'}{self.value(d)}"

    def enablement(self, d, alpha: str, beta: str) -> str:
        return f"{self.alpha_expr(d, alpha)}{'<=' if self.weight else '>='}{beta}"

    def range(self, lit: RangeLiteral) -> str:
        if self.weight:
            return f"{lit.w}<inf" if lit.bound == ABOVE_BOTTOM else f"{lit.w}>=0"
        return f"{lit.w}>0" if lit.bound == ABOVE_BOTTOM else f"{lit.w}<={self.value(self.ops.top)}"

    def defining(self, w: str, lit: DefiningLiteral) -> str:
        if self.weight:
            return f"{w} == {self.value(lit.d)} + max1 [{','.join(lit.deps)}]"
        return f"{w} == {self.value(lit.d)} * min1 [{','.join(lit.deps)}]"

    def prelude(self, program: TranslatedProgram) -> list[str]:
        if self.weight:
            lines = ["max1 [] = 0",
                     "max1 [X|Xs] = max2 X (max1 Xs)",
                     "max2 W1 W2 = if W1 >= W2 then W1 else W2"]
        else:
            lines = ["min1 [] = 1",
                     "min1 [X|Xs] = min2 X (min1 Xs)",
                     "min2 W1 W2 = if W1 <= W2 then W1 else W2"]
        ctors = program.constructors
        if ctors:
            constants = [name for name, arity in ctors.items() if arity == 0]
            compound = [" ".join([name] + ["term"] * arity) for name, arity in ctors.items() if arity > 0]
            alternatives = constants + compound
            lines.append(f"data term = {' | '.join(alternatives)}")
        return lines

    def clause_end(self) -> str:
        return ""


def _writer(desc: DomainDescriptor, dialect: str) -> _GenericWriter:
    if dialect == "generic":
        return _GenericWriter(desc)
    if dialect == "toy_like":
        return _ToyWriter(desc)
    raise ValueError(f"dialeto desconhecido: {dialect}")


def params_for(dialect: str) -> tuple:
    return TOY_PARAMS if dialect == "toy_like" else GENERIC_PARAMS


def emit_text(tprogram: TranslatedProgram, dialect: str = "generic") -> str:
    """
        Texto do programa traduzido no dialeto pedido.

        Raises:
            TranslationError: Se o dialeto não expressar o domínio.
    """
    writer = _writer(tprogram.domain, dialect)
    lines = writer.prelude(tprogram)
    for clause in tprogram.clauses:
        alpha, w, beta = clause.params
        parts = []
        for lit in clause.body:
            if isinstance(lit, EnablementLiteral):
                parts.append(writer.enablement(lit.d, alpha, beta))
            elif isinstance(lit, RangeLiteral):
                parts.append(writer.range(lit))
            elif isinstance(lit, CallLiteral):
                parts.append(_args_text(lit.atom, [writer.alpha_expr(lit.alpha_d, alpha), lit.w, beta], writer.sep))
            else:
                parts.append(writer.defining(w, lit))
        head = _args_text(clause.head, list(clause.params), writer.sep)
        lines.append(f"{head} :- {', '.join(parts)}{writer.clause_end()}")
    return "".join(line + "\n" for line in lines)


def emit_goal_text(tgoal: Sequence[GoalCall], desc: DomainDescriptor, dialect: str = "generic") -> str:
    writer = _writer(desc, dialect)
    calls = ", ".join(_args_text(call.atom, [writer.value(call.alpha), call.w, writer.value(call.beta)], writer.sep)
                      for call in tgoal)
    if dialect == "generic":
        return f"?- {calls}.\n"
    return f"{calls}\n"


# ---------------------------------------------------------------------------
# Interpretador das cláusulas traduzidas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Call:
    atom: Atom
    alpha: QualValue
    w: str
    beta: QualValue


@dataclass(frozen=True)
class _Define:
    w: str
    d: QualValue
    deps: tuple


@dataclass(frozen=True)
class _Range:
    w: str
    bound: str


@dataclass(frozen=True)
class _State:
    literals: tuple
    sigma: Substitution
    qenv: dict
    deferred: tuple
    depth: int


@dataclass
class _Frame:
    state: _State
    clauses: tuple
    next: int = 0


class TranslatedEngine(AbstractEngine):
    """
    Execução da esquerda para a direita de um programa traduzido. Alpha e Beta
    chegam sempre fechados às chamadas; o W do chamado é o Wi do chamador;
    as restrições de faixa são verificadas ao final de cada derivação.
    """

    def __init__(self, tprogram: TranslatedProgram, config: SearchConfig | None = None,
                 log_dir: str | None = None, verbose: bool = False):
        super().__init__("TranslatedEngine", log_dir, verbose)
        self.tprogram = tprogram
        self.config = config or SearchConfig()
        self.ops = lattice_ops(tprogram.domain)
        self._by_predicate: dict[str, list[ConstrainedClause]] = {}
        for clause in tprogram.clauses:
            self._by_predicate.setdefault(clause.head.predicate, []).append(clause)

    def engine_parameters(self) -> dict:
        return {
            "Domínio": self.tprogram.domain,
            "Cláusulas Traduzidas": len(self.tprogram.clauses),
            "Profundidade Máxima": self.config.max_depth,
            "Passos Máximos": self.config.max_steps,
            "Respostas Máximas": self.config.max_answers,
        }

    def run(self, tgoal: Sequence[GoalCall]) -> SolutionStream:
        self.print_engine_parameters()
        stream = SolutionStream()
        stream._iterator = self._search(stream, tuple(tgoal))
        return stream

    def _reduce(self, state: _State, clause: ConstrainedClause, fresh: FreshNames, stream: SolutionStream,
                keep_vars: Sequence[Var]):
        call = state.literals[0]
        if not enabled(self.tprogram.domain, clause.body[0].d, call.alpha, call.beta):
            stream.pruned += 1
            return None
        renamed = rename_clause(_as_clause(clause), fresh)
        theta = mgu(call.atom, renamed.head)
        if theta is None:
            return None
        body_atoms = iter(renamed.body)
        local = {name: fresh.qvar() for name in (lit.w for lit in clause.calls)}
        local[clause.params[1]] = call.w
        expanded = []
        for lit in clause.body[1:]:
            if isinstance(lit, RangeLiteral):
                expanded.append(_Range(local[lit.w], lit.bound))
            elif isinstance(lit, CallLiteral):
                atom = apply(theta, next(body_atoms))
                expanded.append(_Call(atom, self.ops.attenuate(lit.alpha_d, call.alpha), local[lit.w], call.beta))
            else:
                expanded.append(_Define(call.w, lit.d, tuple(local[dep] for dep in lit.deps)))
        rest = tuple(_Call(apply(theta, c.atom), c.alpha, c.w, c.beta) if isinstance(c, _Call) else c
                     for c in state.literals[1:])
        sigma = compose(state.sigma, theta).restrict(keep_vars)
        return _State(tuple(expanded) + rest, sigma, state.qenv, state.deferred, state.depth + 1)

    def _advance(self, state: _State) -> _State:
        """Avalia as definições e adia as faixas até chegar a uma chamada (ou ao fim)."""
        literals, qenv, deferred = state.literals, state.qenv, state.deferred
        while literals and not isinstance(literals[0], _Call):
            lit = literals[0]
            if isinstance(lit, _Define):
                qenv = {**qenv, lit.w: self.ops.attenuate(lit.d, self.ops.big_glb(qenv[dep] for dep in lit.deps))}
            else:
                deferred = deferred + (lit,)
            literals = literals[1:]
        return _State(literals, state.sigma, qenv, deferred, state.depth)

    def _ranges_hold(self, state: _State) -> bool:
        for lit in state.deferred:
            value = state.qenv.get(lit.w)
            if value is None:
                return False
            if lit.bound == ABOVE_BOTTOM and self.ops.is_bot(value):
                return False
            if lit.bound == BELOW_TOP and not self.ops.leq(value, self.ops.top):
                return False
        return True

    def _search(self, stream: SolutionStream, tgoal: tuple) -> Iterator[ComputedAnswer]:
        config = self.config
        goal_atoms = [call.atom for call in tgoal]
        goal_vars = atom_vars(goal_atoms)
        qvars = [call.w for call in tgoal]
        fresh = FreshNames({v.name for v in goal_vars}, qvars)
        stack: list[_Frame] = []

        def enter(state: _State) -> ComputedAnswer | None:
            state = self._advance(state)
            stream.max_depth_reached = max(stream.max_depth_reached, state.depth)
            if not state.literals:
                if not self._ranges_hold(state):
                    return None
                return ComputedAnswer(state.sigma.restrict(goal_vars), {w: state.qenv[w] for w in qvars},
                                      stream.steps)
            if config.max_depth is not None and state.depth >= config.max_depth:
                stream.depth_cut = True
                return None
            stack.append(_Frame(state, tuple(self._by_predicate.get(state.literals[0].atom.predicate, ()))))
            return None

        def limit_reached() -> bool:
            return config.max_answers is not None and stream.answers >= config.max_answers

        if limit_reached():
            self._finish(stream, Outcome.ANSWER_LIMIT)
            return
        start = _State(tuple(_Call(c.atom, c.alpha, c.w, c.beta) for c in tgoal), Substitution(), {}, (), 0)
        answer = enter(start)
        if answer is not None:
            stream.answers += 1
            yield answer
            if limit_reached():
                self._finish(stream, Outcome.ANSWER_LIMIT)
                return
        while stack:
            frame = stack[-1]
            if frame.next >= len(frame.clauses):
                stack.pop()
                continue
            clause = frame.clauses[frame.next]
            frame.next += 1
            child = self._reduce(frame.state, clause, fresh, stream, goal_vars)
            if child is None:
                continue
            if config.max_steps is not None and stream.steps >= config.max_steps:
                self._finish(stream, Outcome.TRUNCATED)
                return
            stream.steps += 1
            answer = enter(child)
            if answer is not None:
                stream.answers += 1
                yield answer
                if limit_reached():
                    self._finish(stream, Outcome.ANSWER_LIMIT)
                    return
        self._finish(stream, Outcome.TRUNCATED if stream.depth_cut else Outcome.EXHAUSTED)

    def _finish(self, stream: SolutionStream, outcome: Outcome):
        stream.outcome = outcome
        self.log(f"Execução traduzida encerrada: {outcome.value}, passos: {stream.steps}, respostas: {stream.answers}")


def _as_clause(clause: ConstrainedClause) -> Clause:
    return Clause(clause.head, clause.body[0].d, tuple(lit.atom for lit in clause.calls), clause.label)


def run_translated(tprogram: TranslatedProgram, tgoal: Sequence[GoalCall],
                   config: SearchConfig | None = None) -> SolutionStream:
    """
        Resolve o objetivo traduzido sobre o programa traduzido.

        Returns:
            SolutionStream: Respostas (θ, μ) comparáveis às de `solve`.
    """
    return TranslatedEngine(tprogram, config).run(tgoal)

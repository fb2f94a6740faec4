"""
Armazém de restrições de qualificação Δ.

Dois tipos de restrição:
    limiar        α ∘ W ⊒ β
    definição     W = d ∘ ⊓{W1, ..., Wk}

O armazém é uma tupla imutável e ordenada; cada passo de resolução produz um
novo armazém, de modo que ramos diferentes da busca podem compartilhá-lo.
"""
from __future__ import annotations

from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Mapping, Sequence, Union

from src.domain.qualification_domain import DomainDescriptor, QualValue, lattice_ops

QualSubstitution = dict


@dataclass(frozen=True)
class ThresholdConstraint:
    alpha: QualValue
    w: str
    beta: QualValue


@dataclass(frozen=True)
class DefiningConstraint:
    w: str
    d: QualValue
    deps: tuple = ()


Constraint = Union[ThresholdConstraint, DefiningConstraint]


@dataclass(frozen=True)
class ConstraintStore:
    domain: DomainDescriptor
    constraints: tuple = ()

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self):
        return len(self.constraints)

    def thresholds(self) -> list[ThresholdConstraint]:
        return [c for c in self.constraints if isinstance(c, ThresholdConstraint)]

    def definitions(self) -> list[DefiningConstraint]:
        return [c for c in self.constraints if isinstance(c, DefiningConstraint)]

    def threshold_for(self, w: str) -> ThresholdConstraint | None:
        for c in self.constraints:
            if isinstance(c, ThresholdConstraint) and c.w == w:
                return c
        return None

    def war(self) -> list[str]:
        """Todas as variáveis de qualificação do armazém, na ordem da primeira ocorrência."""
        seen = {}
        for c in self.constraints:
            seen.setdefault(c.w, None)
            if isinstance(c, DefiningConstraint):
                for dep in c.deps:
                    seen.setdefault(dep, None)
        return list(seen)

    def dom(self) -> set[str]:
        return {c.w for c in self.constraints if isinstance(c, DefiningConstraint)}

    @property
    def is_solved(self) -> bool:
        return not any(isinstance(c, ThresholdConstraint) for c in self.constraints)

    def render(self) -> list[str]:
        return [render_constraint(c, self.domain) for c in self.constraints]


def initial_store(desc: DomainDescriptor, thresholds: Sequence[tuple[str, QualValue]]) -> ConstraintStore:
    """Armazém inicial: ⊤ ∘ Wi ⊒ βi para cada item do objetivo."""
    top = lattice_ops(desc).top
    return ConstraintStore(desc, tuple(ThresholdConstraint(top, w, beta) for w, beta in thresholds))


def enabled(desc: DomainDescriptor, d: QualValue, alpha: QualValue, beta: QualValue) -> bool:
    """
        Teste de habilitação de um passo: d ∘ α ⊒ β.

        Returns:
            bool: False quando a cláusula não pode contribuir para o limiar.
    """
    ops = lattice_ops(desc)
    return ops.geq(ops.attenuate(d, alpha), beta)


def resolve_constraints(store: ConstraintStore, w: str, alpha: QualValue, beta: QualValue,
                        d: QualValue, fresh: Sequence[str]) -> ConstraintStore:
    """
        Substitui o limiar de `w` pela definição W = d ∘ ⊓{fresh} (mantendo
        a posição) e acrescenta um limiar (d ∘ α) ∘ Wi ⊒ β para cada Wi novo.
    """
    assert store.threshold_for(w) == ThresholdConstraint(alpha, w, beta), f"sem limiar ({alpha}, {w}, {beta})"
    assert enabled(store.domain, d, alpha, beta), "passo não habilitado"
    used = set(store.war())
    assert not any(wi in used for wi in fresh), "variáveis de qualificação já usadas"
    return expand_threshold(store, w, d, fresh)


def expand_threshold(store: ConstraintStore, w: str, d: QualValue, fresh: Sequence[str]) -> ConstraintStore:
    """Mesma transformação de resolve_constraints, sem o teste de habilitação (busca sem poda)."""
    threshold = store.threshold_for(w)
    new_alpha = lattice_ops(store.domain).attenuate(d, threshold.alpha)
    constraints = [DefiningConstraint(w, d, tuple(fresh)) if c is threshold else c for c in store.constraints]
    constraints.extend(ThresholdConstraint(new_alpha, wi, threshold.beta) for wi in fresh)
    return ConstraintStore(store.domain, tuple(constraints))


def _dependency_graph(store: ConstraintStore) -> dict[str, tuple]:
    return {c.w: c.deps for c in store.definitions()}


def omega(store: ConstraintStore) -> QualSubstitution:
    """
        Calcula ω_Δ de um armazém resolvido, de baixo para cima na ordem
        topológica das definições.

        Raises:
            ValueError: Se o armazém ainda tiver limiares, dependências sem
                definição ou ciclos.
    """
    if not store.is_solved:
        raise ValueError("ω_Δ só é definida para armazéns sem restrições de limiar")
    ops = lattice_ops(store.domain)
    graph = _dependency_graph(store)
    undefined = {dep for deps in graph.values() for dep in deps} - graph.keys()
    if undefined:
        raise ValueError(f"variáveis sem definição: {sorted(undefined)}")
    definitions = {c.w: c for c in store.definitions()}
    values: dict[str, QualValue] = {}
    try:
        order = list(TopologicalSorter(graph).static_order())
    except CycleError as e:
        raise ValueError(f"dependências cíclicas: {e.args[1]}") from e
    for w in order:
        c = definitions[w]
        values[w] = ops.attenuate(c.d, ops.big_glb(values[dep] for dep in c.deps))
    return {w: values[w] for w in store.war() if w in values}


def check_solution(store: ConstraintStore, rho: Mapping[str, QualValue]) -> bool:
    """
        Verifica se ρ satisfaz todas as restrições do armazém.

        Returns:
            bool: False se alguma variável de war(Δ) não tiver valor.
    """
    ops = lattice_ops(store.domain)
    if any(w not in rho for w in store.war()):
        return False
    for c in store.constraints:
        if isinstance(c, ThresholdConstraint):
            if not ops.geq(ops.attenuate(c.alpha, rho[c.w]), c.beta):
                return False
        elif rho[c.w] != ops.attenuate(c.d, ops.big_glb(rho[dep] for dep in c.deps)):
            return False
    return True


def is_admissible(store: ConstraintStore) -> bool:
    """
        Admissibilidade de armazéns na forma produzida por objetivos: uma e só
        uma restrição por variável, dependências acíclicas, α ⊒ β em cada
        limiar e nenhum valor ⊥.
    """
    ops = lattice_ops(store.domain)
    counts: dict[str, int] = {w: 0 for w in store.war()}
    for c in store.constraints:
        counts[c.w] += 1
        if isinstance(c, ThresholdConstraint):
            if ops.is_bot(c.alpha) or ops.is_bot(c.beta) or not ops.geq(c.alpha, c.beta):
                return False
        elif ops.is_bot(c.d) or c.w in c.deps:
            return False
    if any(count != 1 for count in counts.values()):
        return False
    try:
        TopologicalSorter(_dependency_graph(store)).prepare()
    except CycleError:
        return False
    return True


def render_constraint(c: Constraint, desc: DomainDescriptor) -> str:
    """`W >= b`, `a * W >= b`, `W = d` ou `W = d * glb{W1,W2}` (símbolo conforme o domínio)."""
    ops = lattice_ops(desc)
    if isinstance(c, ThresholdConstraint):
        beta = ops.format_value(c.beta)
        if ops.is_top(c.alpha):
            return f"{c.w} >= {beta}"
        return f"{ops.format_value(c.alpha)} {ops.op_symbol} {c.w} >= {beta}"
    if not c.deps:
        return f"{c.w} = {ops.format_value(c.d)}"
    return f"{c.w} = {ops.format_value(c.d)} {ops.op_symbol} glb{{{','.join(c.deps)}}}"

"""
Semântica declarativa usada como oráculo: operador T_P sobre um fragmento
fechado da base de Herbrand, modelo mínimo, verificação de modelos e busca
de árvores de prova pela regra de Modus Ponens qualificado.

O fragmento guarda, para cada átomo fechado, a anticadeia dos valores máximos
deriváveis (ápices); A#d pertence à interpretação sse d ⊑ algum ápice.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from src.domain.qualification_domain import DomainDescriptor, QualValue, descriptor_of, lattice_ops
from src.domain.syntax import App, Atom, Clause, Program, Var, term_depth, term_vars, to_text
from src.domain.unification import FreshNames, Substitution, apply, match, mgu, rename_clause

RIGID_PREFIX = "?"


@dataclass(frozen=True)
class AnnotatedAtom:
    atom: Atom
    value: QualValue

    def __post_init__(self):
        if lattice_ops(descriptor_of(self.value)).is_bot(self.value):
            raise ValueError(f"anotação ⊥ não é permitida: {to_text(self.atom)}")

    def __str__(self):
        return f"{to_text(self.atom)}#{to_text(self.value)}"


@dataclass(frozen=True)
class ProofTree:
    root: AnnotatedAtom
    clause: Clause
    substitution: Substitution
    children: tuple = ()

    @property
    def height(self) -> int:
        return 1 + max((child.height for child in self.children), default=0)


@dataclass(frozen=True)
class ProofSearch:
    """Resultado de uma busca limitada: a árvore (ou None) e se algum ramo atingiu o limite."""
    tree: ProofTree | None
    depth_cut: bool


def _normalize(ops, values: Iterable[QualValue]) -> tuple:
    """Anticadeia dos elementos maximais, em ordem textual estável."""
    distinct = list(dict.fromkeys(values))
    maximal = [v for v in distinct if not any(u != v and ops.leq(v, u) for u in distinct)]
    return tuple(sorted(maximal, key=ops.format_value))


@dataclass(frozen=True)
class InterpretationFragment:
    """
    Interpretação de Herbrand restrita aos termos fechados de profundidade até
    `universe_bound`.
    """
    domain: DomainDescriptor
    apexes: dict = field(default_factory=dict)
    universe_bound: int = 2
    fixpoint: bool = False
    iterations: int = 0
    universe: tuple = ()

    def apex(self, atom: Atom) -> tuple:
        return self.apexes.get(atom, ())

    def holds(self, atom: Atom, value: QualValue) -> bool:
        """
            Pertinência de A#d. Átomos abertos valem sse todas as suas instâncias
            fechadas dentro do universo valem.
        """
        ops = lattice_ops(self.domain)
        variables = list(dict.fromkeys(v for arg in atom.args for v in term_vars(arg)))
        if not variables:
            return any(ops.leq(value, e) for e in self.apex(atom))
        for terms in itertools.product(self.universe, repeat=len(variables)):
            instance = apply(dict(zip(variables, terms)), atom)
            if not any(ops.leq(value, e) for e in self.apex(instance)):
                return False
        return True

    def items(self) -> Iterator[tuple[Atom, QualValue]]:
        for atom, values in self.apexes.items():
            for value in values:
                yield atom, value

    def without(self, atom: Atom) -> InterpretationFragment:
        apexes = {a: v for a, v in self.apexes.items() if a != atom}
        return InterpretationFragment(self.domain, apexes, self.universe_bound, False, self.iterations, self.universe)

    def dump(self) -> str:
        """Uma linha `atom # valor` por ápice, em ordem."""
        ops = lattice_ops(self.domain)
        lines = sorted(f"{to_text(atom)} # {ops.format_value(value)}" for atom, value in self.items())
        return "".join(line + "\n" for line in lines)


def ground_universe(program: Program, bound: int) -> tuple:
    """
        Termos fechados de profundidade até `bound` sobre os construtores do
        programa. Sem constantes no programa, injeta uma constante nova.

        Returns:
            tuple[App, ...]: Termos por profundidade crescente.
    """
    ctors = program.constructors()
    constants = sorted(name for name, arity in ctors.items() if arity == 0)
    if not constants:
        name = next(f"c{i}" for i in itertools.count() if f"c{i}" not in ctors)
        constants = [name]
    functors = sorted((name, arity) for name, arity in ctors.items() if arity > 0)
    universe = [App(c) for c in constants]
    previous = list(universe)
    for _ in range(bound):
        new_terms = []
        for name, arity in functors:
            for args in itertools.product(universe, repeat=arity):
                if any(arg in previous for arg in args):
                    new_terms.append(App(name, args))
        universe.extend(new_terms)
        previous = new_terms
    return tuple(universe)


def _index(frag: InterpretationFragment) -> dict[str, list[tuple[Atom, tuple]]]:
    index: dict[str, list] = {}
    for atom, values in frag.apexes.items():
        index.setdefault(atom.predicate, []).append((atom, values))
    return index


def _join(body: Sequence[Atom], index: dict, bindings: dict) -> Iterator[tuple[dict, list]]:
    if not body:
        yield bindings, []
        return
    pattern = apply(bindings, body[0])
    for fact, values in index.get(pattern.predicate, ()):
        eta = match(zip(pattern.args, fact.args))
        if eta is None:
            continue
        extended = {**bindings, **eta}
        for rest_bindings, rest_values in _join(body[1:], index, extended):
            for value in values:
                yield rest_bindings, [value, *rest_values]


def tp_step(program: Program, frag: InterpretationFragment) -> InterpretationFragment:
    """
        Uma aplicação do operador T_P: para cada cláusula e cada instância
        fechada cujo corpo pertence ao fragmento, insere a cabeça com o valor
        d ∘ ⊓{ápices do corpo}. Variáveis que só ocorrem na cabeça percorrem o
        universo; cabeças fora do universo são descartadas.
    """
    ops = lattice_ops(program.domain)
    universe = frag.universe or ground_universe(program, frag.universe_bound)
    index = _index(frag)
    derived: dict[Atom, list] = {}
    for clause in program.clauses:
        for bindings, values in _join(clause.body, index, {}):
            head = apply(bindings, clause.head)
            value = ops.attenuate(clause.attenuation, ops.big_glb(values))
            if ops.is_bot(value):
                continue
            free = list(dict.fromkeys(v for arg in head.args for v in term_vars(arg)))
            for terms in itertools.product(universe, repeat=len(free)):
                instance = apply(dict(zip(free, terms)), head) if free else head
                if all(term_depth(arg) <= frag.universe_bound for arg in instance.args):
                    derived.setdefault(instance, []).append(value)
    apexes = {atom: _normalize(ops, values) for atom, values in derived.items()}
    return InterpretationFragment(program.domain, apexes, frag.universe_bound, False, frag.iterations + 1, universe)


def empty_fragment(program: Program, universe_bound: int) -> InterpretationFragment:
    return InterpretationFragment(program.domain, {}, universe_bound, False, 0,
                                  ground_universe(program, universe_bound))


def least_model(program: Program, universe_bound: int = 2, max_iters: int = 10) -> InterpretationFragment:
    """
        Itera T_P a partir do fragmento vazio até o ponto fixo ou `max_iters`.

        Returns:
            InterpretationFragment: `fixpoint` indica se o ponto fixo foi atingido.
    """
    current = empty_fragment(program, universe_bound)
    for _ in range(max_iters):
        following = tp_step(program, current)
        if following.apexes == current.apexes:
            break
        current = following
    fixpoint = tp_step(program, current).apexes == current.apexes
    return InterpretationFragment(program.domain, current.apexes, universe_bound, fixpoint,
                                  current.iterations, current.universe)


def is_model(program: Program, frag: InterpretationFragment, sample: int | None = None, seed: int = 0) -> bool:
    """
        I ⊨ P sse T_P(I) ⊆ I. Com `sample`, verifica apenas uma amostra
        aleatória (semente fixa) dos átomos derivados.
    """
    derived = list(tp_step(program, frag).items())
    if sample is not None and sample < len(derived):
        derived = random.Random(seed).sample(derived, sample)
    return all(frag.holds(atom, value) for atom, value in derived)


def qmp_check(clause: Clause, theta: Substitution, premises: Sequence[AnnotatedAtom],
              conclusion: AnnotatedAtom) -> bool:
    """Uma inferência QMP: cabeça e corpo instanciados por θ e d' ⊑ d ∘ ⊓{d1, ..., dk}."""
    ops = lattice_ops(descriptor_of(clause.attenuation))
    if apply(theta, clause.head) != conclusion.atom:
        return False
    if len(premises) != len(clause.body):
        return False
    if any(apply(theta, body) != premise.atom for body, premise in zip(clause.body, premises)):
        return False
    bound = ops.attenuate(clause.attenuation, ops.big_glb(p.value for p in premises))
    return ops.leq(conclusion.value, bound)


class _ProofSearcher:
    """
    Busca de provas QHL com limites (α, β) herdados como na resolução: uma
    cláusula só é tentada se d ∘ α ⊒ β, e os filhos herdam α' = d ∘ α.
    Com `pruning` falso todas as árvores até o limite de altura são geradas.
    """

    def __init__(self, program: Program, depth_bound: int, pruning: bool = True):
        self.program = program
        self.ops = lattice_ops(program.domain)
        self.depth_bound = depth_bound
        self.pruning = pruning
        self.fresh = FreshNames()
        self.depth_cut = False

    def prove(self, atom: Atom, alpha, beta, height: int, sigma: dict) -> Iterator[tuple[ProofTree, dict]]:
        if height <= 0:
            self.depth_cut = True
            return
        atom = apply(sigma, atom)
        for clause in self.program.clauses_for(atom.predicate):
            if self.pruning and not self.ops.geq(self.ops.attenuate(clause.attenuation, alpha), beta):
                continue
            renamed = rename_clause(clause, self.fresh)
            theta = mgu(atom, renamed.head)
            if theta is None:
                continue
            extended = _compose_dict(sigma, theta)
            new_alpha = self.ops.attenuate(clause.attenuation, alpha)
            for children, final in self.prove_all(list(renamed.body), new_alpha, beta, height - 1, extended):
                value = self.ops.attenuate(clause.attenuation, self.ops.big_glb(c.root.value for c in children))
                node = ProofTree(AnnotatedAtom(apply(final, atom), value), clause,
                                 Substitution((original, apply(final, v)) for original, v
                                              in zip(_clause_vars(clause), _clause_vars(renamed))),
                                 tuple(children))
                yield node, final

    def prove_all(self, atoms: list[Atom], alpha, beta, height: int, sigma: dict) -> Iterator[tuple[list, dict]]:
        if not atoms:
            yield [], sigma
            return
        for tree, extended in self.prove(atoms[0], alpha, beta, height, sigma):
            for rest, final in self.prove_all(atoms[1:], alpha, beta, height, extended):
                yield [tree, *rest], final


def _compose_dict(sigma: dict, theta: Substitution) -> dict:
    result = {var: apply(theta, term) for var, term in sigma.items()}
    for var, term in theta.items():
        result.setdefault(var, term)
    return result


def _clause_vars(clause: Clause) -> list[Var]:
    return list(dict.fromkeys(v for atom in (clause.head, *clause.body) for arg in atom.args for v in term_vars(arg)))


def freeze(atom: Atom) -> Atom:
    """Troca variáveis por constantes rígidas `?X`, para provar o átomo aberto."""
    return apply({v: App(RIGID_PREFIX + v.name) for arg in atom.args for v in term_vars(arg)}, atom)


def _thaw(node):
    if isinstance(node, App):
        if not node.args and node.functor.startswith(RIGID_PREFIX):
            return Var(node.functor[len(RIGID_PREFIX):])
        return App(node.functor, tuple(_thaw(arg) for arg in node.args))
    if isinstance(node, Atom):
        return Atom(node.predicate, tuple(_thaw(arg) for arg in node.args))
    return node


def _thaw_tree(tree: ProofTree, final: dict) -> ProofTree:
    """Aplica as ligações finais da prova a todos os nós e desfaz o congelamento."""
    return ProofTree(AnnotatedAtom(_thaw(apply(final, tree.root.atom)), tree.root.value), tree.clause,
                     Substitution((var, _thaw(apply(final, term))) for var, term in tree.substitution.items()),
                     tuple(_thaw_tree(child, final) for child in tree.children))


def qhl_search(program: Program, target: AnnotatedAtom, depth_bound: int, pruning: bool = True) -> ProofSearch:
    """
        Procura uma árvore de prova de altura até `depth_bound` para `target`.
        A raiz leva o valor pedido; os demais nós levam o valor calculado.
        Só é devolvida uma árvore aprovada por `check_proof_tree`; com
        `pruning` falso a busca não usa o teste de habilitação.
    """
    if depth_bound < 1:
        raise ValueError("depth_bound deve ser >= 1")
    ops = lattice_ops(program.domain)
    ops._require(target.value)
    searcher = _ProofSearcher(program, depth_bound, pruning)
    frozen = freeze(target.atom)
    for tree, final in searcher.prove(frozen, ops.top, target.value, depth_bound, {}):
        root = _thaw_tree(ProofTree(AnnotatedAtom(frozen, target.value), tree.clause, tree.substitution,
                                    tree.children), final)
        if check_proof_tree(root):
            return ProofSearch(root, searcher.depth_cut)
    return ProofSearch(None, searcher.depth_cut)


def qhl_prove(program: Program, target: AnnotatedAtom, depth_bound: int) -> ProofTree | None:
    """
        P ⊢ A#d com árvore de altura até `depth_bound`.

        Returns:
            ProofTree | None: None quando não há prova dentro do limite.
    """
    return qhl_search(program, target, depth_bound).tree


def check_proof_tree(tree: ProofTree) -> bool:
    """Verifica cada inferência QMP da árvore."""
    premises = [child.root for child in tree.children]
    if not qmp_check(tree.clause, tree.substitution, premises, tree.root):
        return False
    return all(check_proof_tree(child) for child in tree.children)


def render_proof_tree(tree: ProofTree, indent: str = "  ") -> str:
    lines = []

    def visit(node: ProofTree, level: int):
        lines.append(f"{indent * level}{node.root}  [{node.clause.label}]")
        for child in node.children:
            visit(child, level + 1)

    visit(tree, 0)
    return "".join(line + "\n" for line in lines)

"""
Substituições idempotentes, unificador mais geral com occurs check,
casamento unidirecional e renomeação de cláusulas com variáveis novas.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Mapping
from typing import Iterable

from src.domain.syntax import App, Atom, Clause, GoalItem, Term, Var, term_vars, to_text


class Substitution(Mapping):
    """Mapeamento imutável Var -> Term. Ligações triviais X -> X são descartadas."""

    __slots__ = ("_bindings",)

    def __init__(self, bindings: Mapping | Iterable = ()):
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        self._bindings = {var: term for var, term in items if var != term}

    def __getitem__(self, var: Var) -> Term:
        return self._bindings[var]

    def __iter__(self):
        return iter(self._bindings)

    def __len__(self):
        return len(self._bindings)

    def __repr__(self):
        return "{" + ", ".join(f"{var.name} -> {to_text(term)}" for var, term in self._bindings.items()) + "}"

    def restrict(self, variables: Iterable[Var]) -> Substitution:
        """σ restrita ao conjunto dado, na ordem do conjunto; variáveis livres ficam de fora."""
        return Substitution((var, self._bindings[var]) for var in variables if var in self._bindings)

    def is_idempotent(self) -> bool:
        domain = set(self._bindings)
        return not any(var in domain for term in self._bindings.values() for var in term_vars(term))


EMPTY = Substitution()


def apply(s: Mapping, node):
    """Aplicação homomórfica a termos, átomos, itens de objetivo, cláusulas e sequências."""
    if not s:
        return node
    if isinstance(node, Var):
        return s.get(node, node)
    if isinstance(node, App):
        if not node.args:
            return node
        return App(node.functor, tuple(apply(s, arg) for arg in node.args))
    if isinstance(node, Atom):
        return Atom(node.predicate, tuple(apply(s, arg) for arg in node.args))
    if isinstance(node, GoalItem):
        return GoalItem(apply(s, node.atom), node.qvar, node.threshold)
    if isinstance(node, Clause):
        return Clause(apply(s, node.head), node.attenuation, tuple(apply(s, atom) for atom in node.body), node.label)
    if isinstance(node, tuple):
        return tuple(apply(s, item) for item in node)
    if isinstance(node, list):
        return [apply(s, item) for item in node]
    raise TypeError(f"não é possível aplicar substituição a {node!r}")


def compose(s1: Mapping, s2: Mapping) -> Substitution:
    """apply(compose(s1, s2), t) == apply(s2, apply(s1, t))."""
    bindings = {var: apply(s2, term) for var, term in s1.items()}
    for var, term in s2.items():
        if var not in bindings:
            bindings[var] = term
    return Substitution(bindings)


def occurs(var: Var, term: Term) -> bool:
    if isinstance(term, Var):
        return term == var
    return any(occurs(var, arg) for arg in term.args)


def unify_terms(pairs: Iterable[tuple[Term, Term]]) -> Substitution | None:
    """
        Unificação de Martelli-Montanari sobre uma lista de equações, da
        esquerda para a direita. Em equações variável-variável liga-se a
        variável do lado direito.

        Returns:
            Substitution | None: Unificador mais geral idempotente, ou None.
    """
    bindings: dict[Var, Term] = {}
    pending = deque(pairs)
    while pending:
        left, right = pending.popleft()
        left = apply(bindings, left)
        right = apply(bindings, right)
        if left == right:
            continue
        if isinstance(right, Var):
            var, term = right, left
        elif isinstance(left, Var):
            var, term = left, right
        elif left.functor != right.functor or len(left.args) != len(right.args):
            return None
        else:
            pending.extend(zip(left.args, right.args))
            continue
        if occurs(var, term):
            return None
        step = {var: term}
        bindings = {v: apply(step, t) for v, t in bindings.items()}
        bindings[var] = term
    return Substitution(bindings)


def mgu(a: Atom, b: Atom) -> Substitution | None:
    """
        Unificador mais geral de dois átomos, com occurs check.

        Returns:
            Substitution | None: None quando os átomos não unificam.
    """
    if a.predicate != b.predicate or len(a.args) != len(b.args):
        return None
    return unify_terms(zip(a.args, b.args))


def match(pairs: Iterable[tuple[Term, Term]]) -> Substitution | None:
    """
        Casamento unidirecional: procura η com apply(η, padrão) == alvo para
        cada par (padrão, alvo). Variáveis dos alvos são tratadas como rígidas.
    """
    bindings: dict[Var, Term] = {}
    pending = deque(pairs)
    while pending:
        pattern, target = pending.popleft()
        if isinstance(pattern, Var):
            bound = bindings.get(pattern)
            if bound is None:
                bindings[pattern] = target
            elif bound != target:
                return None
        elif isinstance(target, App) and pattern.functor == target.functor and len(pattern.args) == len(target.args):
            pending.extend(zip(pattern.args, target.args))
        else:
            return None
    return Substitution(bindings)


class FreshNames:
    """
    Fonte de nomes novos de uma consulta: variáveis de termo `_Gn` e variáveis
    de qualificação `Wn`, em contadores monótonos que pulam nomes reservados.
    """

    def __init__(self, reserved_vars: Iterable[str] = (), reserved_qvars: Iterable[str] = ()):
        self._reserved_vars = set(reserved_vars)
        self._reserved_qvars = set(reserved_qvars)
        self._var_counter = 0
        self._qvar_counter = 0

    def term_var(self) -> Var:
        while True:
            self._var_counter += 1
            name = f"_G{self._var_counter}"
            if name not in self._reserved_vars:
                return Var(name)

    def qvar(self) -> str:
        while True:
            self._qvar_counter += 1
            name = f"W{self._qvar_counter}"
            if name not in self._reserved_qvars:
                return name

    def qvars(self, count: int) -> list[str]:
        return [self.qvar() for _ in range(count)]


def rename_clause(clause: Clause, fresh: FreshNames) -> Clause:
    """Variante da cláusula sem variáveis em comum com nada já gerado por `fresh`."""
    renaming: dict[Var, Var] = {}
    for atom in (clause.head, *clause.body):
        for arg in atom.args:
            for var in term_vars(arg):
                if var not in renaming:
                    renaming[var] = fresh.term_var()
    if not renaming:
        return clause
    return apply(renaming, clause)

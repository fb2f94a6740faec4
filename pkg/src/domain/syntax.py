"""
Sintaxe abstrata de programas qualificados e o parser/impressor do formato
textual.

Formato (uma cláusula por linha, `%` inicia comentário):

    eats(adam,X) <-0.80-
    human(father(X)) <-0.90- human(X)

Objetivos:

    eats(father(X),Y)#W1, human(father(X))#W2 | W1>=0.4, W2>=0.6
"""
from __future__ import annotations

import re
from collections import namedtuple
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Union

from src.domain.errors import InvalidQualificationError, QlpSyntaxError
from src.domain.qualification_domain import (CERT, DomainDescriptor, DomainKind, PairVal, QualValue, descriptor_of,
                                             lattice_ops, value_text)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    functor: str
    args: tuple = ()


Term = Union[Var, App]


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple = ()


@dataclass(frozen=True)
class Clause:
    head: Atom
    attenuation: QualValue
    body: tuple = ()
    label: str = field(default="", compare=False)

    @property
    def is_fact(self) -> bool:
        return not self.body


@dataclass(frozen=True)
class Program:
    """
    Sequência de cláusulas sobre um domínio. A ordem das cláusulas é a ordem de
    busca; cada cláusula recebe o rótulo `pred.i` (i a partir de 1 dentro do
    seu predicado).
    """
    domain: DomainDescriptor
    clauses: tuple = ()
    _by_predicate: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        ops = lattice_ops(self.domain)
        counters: dict[str, int] = {}
        labelled = []
        index: dict[str, list[Clause]] = {}
        for clause in self.clauses:
            ops._require(clause.attenuation)
            if ops.is_bot(clause.attenuation):
                raise ValueError(f"atenuação ⊥ não é permitida: {to_text(clause)}")
            pred = clause.head.predicate
            counters[pred] = counters.get(pred, 0) + 1
            clause = replace(clause, label=f"{pred}.{counters[pred]}")
            labelled.append(clause)
            index.setdefault(pred, []).append(clause)
        object.__setattr__(self, "clauses", tuple(labelled))
        object.__setattr__(self, "_by_predicate", {k: tuple(v) for k, v in index.items()})

    def clauses_for(self, predicate: str) -> tuple:
        return self._by_predicate.get(predicate, ())

    def predicates(self) -> dict[str, int]:
        arities = {}
        for clause in self.clauses:
            for atom in (clause.head, *clause.body):
                arities.setdefault(atom.predicate, len(atom.args))
        return arities

    def constructors(self) -> dict[str, int]:
        """Construtores (constantes incluídas, aridade 0) que ocorrem no programa."""
        arities: dict[str, int] = {}
        for clause in self.clauses:
            for atom in (clause.head, *clause.body):
                for term in atom.args:
                    _collect_constructors(term, arities)
        return arities

    def constants(self) -> list[str]:
        return sorted(name for name, arity in self.constructors().items() if arity == 0)


def _collect_constructors(term: Term, arities: dict[str, int]):
    if isinstance(term, App):
        arities.setdefault(term.functor, len(term.args))
        for arg in term.args:
            _collect_constructors(arg, arities)


@dataclass(frozen=True)
class GoalItem:
    atom: Atom
    qvar: str
    threshold: QualValue


@dataclass(frozen=True)
class InitialGoal:
    items: tuple = ()

    @property
    def atoms(self) -> tuple:
        return tuple(item.atom for item in self.items)

    @property
    def qvars(self) -> tuple:
        return tuple(item.qvar for item in self.items)


def term_vars(term: Term) -> Iterator[Var]:
    if isinstance(term, Var):
        yield term
    else:
        for arg in term.args:
            yield from term_vars(arg)


def atom_vars(atoms: Iterable[Atom]) -> list[Var]:
    """Variáveis na ordem da primeira ocorrência, sem repetição."""
    seen = {}
    for atom in atoms:
        for arg in atom.args:
            for var in term_vars(arg):
                seen.setdefault(var, None)
    return list(seen)


def is_ground(term: Term | Atom) -> bool:
    args = term.args if isinstance(term, (App, Atom)) else None
    if args is None:
        return False
    return all(is_ground(arg) for arg in args)


def term_depth(term: Term) -> int:
    if isinstance(term, Var) or not term.args:
        return 0
    return 1 + max(term_depth(arg) for arg in term.args)


# ---------------------------------------------------------------------------
# Impressão
# ---------------------------------------------------------------------------

def to_text(node) -> str:
    """
        Texto canônico de qualquer nó: termos, átomos, cláusulas, programas,
        objetivos, valores e mapeamentos de respostas (`X = adam, W1 = 0.64`).
        parse(to_text(x)) reconstrói x.
    """
    if isinstance(node, Var):
        return node.name
    if isinstance(node, (App, Atom)):
        name = node.functor if isinstance(node, App) else node.predicate
        if not node.args:
            return name
        return f"{name}({','.join(to_text(arg) for arg in node.args)})"
    if isinstance(node, Clause):
        text = f"{to_text(node.head)} <-{value_text(node.attenuation)}-"
        if node.body:
            text += " " + ", ".join(to_text(atom) for atom in node.body)
        return text
    if isinstance(node, Program):
        return "".join(to_text(clause) + "\n" for clause in node.clauses)
    if isinstance(node, GoalItem):
        return f"{to_text(node.atom)}#{node.qvar}"
    if isinstance(node, InitialGoal):
        text = ", ".join(to_text(item) for item in node.items)
        bounds = [f"{item.qvar} >= {value_text(item.threshold)}" for item in node.items
                  if not lattice_ops(descriptor_of(item.threshold)).is_top(item.threshold)]
        if bounds:
            text += " | " + ", ".join(bounds)
        return text
    if isinstance(node, Mapping):
        return ", ".join(f"{_key_text(key)} = {to_text(value)}" for key, value in node.items())
    return value_text(node)


def _key_text(key) -> str:
    return key.name if isinstance(key, Var) else str(key)


# ---------------------------------------------------------------------------
# Análise léxica e sintática
# ---------------------------------------------------------------------------

Token = namedtuple("Token", ("kind", "text", "line", "column"))

TOKEN_IDENT = "IDENT"
TOKEN_VAR = "VAR"
TOKEN_NUMBER = "NUMBER"
TOKEN_ARROW = "<-"
TOKEN_DASH = "-"
TOKEN_LPAREN = "("
TOKEN_RPAREN = ")"
TOKEN_COMMA = ","
TOKEN_HASH = "#"
TOKEN_BAR = "|"
TOKEN_GEQ = ">="
TOKEN_LEQ = "<="
TOKEN_EQ = "="
TOKEN_LBRACE = "{"
TOKEN_RBRACE = "}"
TOKEN_NEWLINE = "NEWLINE"
TOKEN_EOF = "EOF"

_TOKEN_SPEC = re.compile(r"""
    (?P<NUMBER>\d+/\d+|\d+(?:\.\d+)?)
  | (?P<IDENT>[a-z][A-Za-z0-9_]*)
  | (?P<VAR>[A-Z_][A-Za-z0-9_]*)
  | (?P<OP><-|<=|>=|[-(),#|={}])
  | (?P<NEWLINE>\n)
  | (?P<SKIP>[ \t\r]+|%[^\n]*)
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_SPEC.match(text, pos)
        column = pos - line_start + 1
        if not match:
            raise QlpSyntaxError(f"caractere inesperado '{text[pos]}'", line, column)
        kind = match.lastgroup
        value = match.group(kind)
        if kind == "NEWLINE":
            tokens.append(Token(TOKEN_NEWLINE, value, line, column))
            line += 1
            line_start = match.end()
        elif kind == "OP":
            tokens.append(Token(value, value, line, column))
        elif kind != "SKIP":
            tokens.append(Token(kind, value, line, column))
        pos = match.end()
    tokens.append(Token(TOKEN_EOF, "", line, pos - line_start + 1))
    return tokens


class _Parser:
    """Parser descendente recursivo sobre a lista de tokens."""

    def __init__(self, text: str, desc: DomainDescriptor, skip_newlines: bool = True):
        self.desc = desc
        self.ops = lattice_ops(desc)
        self.tokens = [t for t in tokenize(text) if not (skip_newlines and t.kind == TOKEN_NEWLINE)]
        self.pos = 0
        self.token = self.tokens[0]
        self.functor_arity: dict[str, int] = {}
        self.predicate_arity: dict[str, int] = {}

    def _next_token(self) -> Token:
        if self.pos < len(self.tokens) - 1:
            self.pos += 1
        self.token = self.tokens[self.pos]
        return self.token

    def _check_token(self, tok: Token, kind: str):
        if tok.kind != kind:
            found = tok.text or "fim da entrada"
            self._raise_exception(f"esperava '{kind}', encontrou '{found}'", tok)

    def _expect(self, kind: str) -> Token:
        tok = self.token
        self._check_token(tok, kind)
        self._next_token()
        return tok

    def _raise_exception(self, message: str, tok: Token | None = None, error=QlpSyntaxError):
        tok = tok or self.token
        raise error(message, tok.line, tok.column)

    def _at(self, kind: str) -> bool:
        return self.token.kind == kind

    def read_term(self) -> Term:
        tok = self.token
        if tok.kind == TOKEN_VAR:
            self._next_token()
            return Var(tok.text)
        if tok.kind != TOKEN_IDENT:
            self._raise_exception(f"esperava um termo, encontrou '{tok.text or 'fim da entrada'}'")
        self._next_token()
        args = self._read_arguments()
        self._check_arity(self.functor_arity, tok, len(args), "construtor")
        return App(tok.text, args)

    def read_atom(self) -> Atom:
        tok = self._expect(TOKEN_IDENT)
        args = self._read_arguments()
        self._check_arity(self.predicate_arity, tok, len(args), "predicado")
        return Atom(tok.text, args)

    def _read_arguments(self) -> tuple:
        if not self._at(TOKEN_LPAREN):
            return ()
        self._next_token()
        args = [self.read_term()]
        while self._at(TOKEN_COMMA):
            self._next_token()
            args.append(self.read_term())
        self._expect(TOKEN_RPAREN)
        return tuple(args)

    def _check_arity(self, table: dict, tok: Token, arity: int, what: str):
        known = table.setdefault(tok.text, arity)
        if known != arity:
            self._raise_exception(f"{what} '{tok.text}' usado com aridade {arity} e {known}", tok)

    def read_value(self, desc: DomainDescriptor | None = None) -> QualValue:
        desc = desc or self.desc
        tok = self.token
        if desc.kind is DomainKind.PRODUCT:
            self._expect(TOKEN_LPAREN)
            left = self.read_value(desc.left)
            self._expect(TOKEN_COMMA)
            right = self.read_value(desc.right)
            self._expect(TOKEN_RPAREN)
            return PairVal(left, right)
        if tok.kind not in (TOKEN_NUMBER, TOKEN_IDENT):
            self._raise_exception(f"esperava um literal de qualificação, encontrou '{tok.text or 'fim da entrada'}'",
                                  error=InvalidQualificationError)
        try:
            value = lattice_ops(desc).scalar_from_text(tok.text)
        except ValueError as e:
            self._raise_exception(str(e), tok, InvalidQualificationError)
        self._next_token()
        return value

    def read_nonbottom_value(self, what: str) -> QualValue:
        tok = self.token
        value = self.read_value()
        if self.ops.is_bot(value):
            self._raise_exception(f"{what} não pode ser ⊥ ({value_text(value)})", tok, InvalidQualificationError)
        return value

    def read_clause(self) -> Clause:
        head = self.read_atom()
        self._expect(TOKEN_ARROW)
        attenuation = self.read_nonbottom_value("atenuação")
        self._expect(TOKEN_DASH)
        body = []
        if self._at(TOKEN_IDENT):
            body.append(self.read_atom())
            while self._at(TOKEN_COMMA):
                self._next_token()
                body.append(self.read_atom())
        return Clause(head, attenuation, tuple(body))

    def read_program(self) -> Program:
        clauses = []
        while not self._at(TOKEN_EOF):
            if self._at(TOKEN_NEWLINE):
                self._next_token()
                continue
            clauses.append(self.read_clause())
            if not self._at(TOKEN_EOF):
                self._check_token(self.token, TOKEN_NEWLINE)
        return Program(self.desc, tuple(clauses))

    def read_goal(self) -> InitialGoal:
        entries: list[tuple[Atom, Token]] = []
        if not self._at(TOKEN_EOF) and not self._at(TOKEN_BAR):
            entries.append(self._read_goal_item())
            while self._at(TOKEN_COMMA):
                self._next_token()
                entries.append(self._read_goal_item())
        seen: dict[str, Token] = {}
        for _, qtok in entries:
            if qtok.text in seen:
                self._raise_exception(f"variável de qualificação repetida: {qtok.text}", qtok)
            seen[qtok.text] = qtok
        thresholds: dict[str, QualValue] = {}
        if self._at(TOKEN_BAR):
            self._next_token()
            self._read_bound(seen, thresholds)
            while self._at(TOKEN_COMMA):
                self._next_token()
                self._read_bound(seen, thresholds)
        self._check_token(self.token, TOKEN_EOF)
        items = tuple(GoalItem(atom, qtok.text, thresholds.get(qtok.text, self.ops.top)) for atom, qtok in entries)
        return InitialGoal(items)

    def _read_goal_item(self) -> tuple[Atom, Token]:
        atom = self.read_atom()
        self._expect(TOKEN_HASH)
        return atom, self._expect(TOKEN_VAR)

    def _read_bound(self, known: dict, thresholds: dict):
        qtok = self._expect(TOKEN_VAR)
        if qtok.text not in known:
            self._raise_exception(f"limite para variável de qualificação desconhecida: {qtok.text}", qtok)
        if qtok.text in thresholds:
            self._raise_exception(f"mais de um limite para {qtok.text}", qtok)
        op = self.token
        if op.kind == TOKEN_LEQ:
            if self.desc.kind is not DomainKind.WEIGHT:
                self._raise_exception("'<=' só é aceito no domínio w")
        elif op.kind != TOKEN_GEQ:
            self._raise_exception(f"esperava '>=' ou '<=', encontrou '{op.text or 'fim da entrada'}'")
        self._next_token()
        thresholds[qtok.text] = self.read_nonbottom_value(f"limite de {qtok.text}")

    def read_answer(self) -> tuple[dict, dict]:
        bindings: dict[Var, Term] = {}
        qualifications: dict[str, QualValue] = {}
        if not self._at(TOKEN_BAR) and not self._at(TOKEN_EOF):
            self._read_braced(lambda: self._read_binding(bindings))
        if self._at(TOKEN_BAR):
            self._next_token()
            self._read_braced(lambda: self._read_qualification(qualifications))
        self._check_token(self.token, TOKEN_EOF)
        return bindings, qualifications

    def _read_braced(self, read_one):
        braced = self._at(TOKEN_LBRACE)
        if braced:
            self._next_token()
        if self._at(TOKEN_IDENT) and self.token.text == "true":
            self._next_token()
        elif not (braced and self._at(TOKEN_RBRACE)):
            read_one()
            while self._at(TOKEN_COMMA):
                self._next_token()
                read_one()
        if braced:
            self._expect(TOKEN_RBRACE)

    def _read_binding(self, bindings: dict):
        var = self._expect(TOKEN_VAR)
        self._expect(TOKEN_EQ)
        bindings[Var(var.text)] = self.read_term()

    def _read_qualification(self, qualifications: dict):
        qvar = self._expect(TOKEN_VAR)
        self._expect(TOKEN_EQ)
        qualifications[qvar.text] = self.read_nonbottom_value(f"valor de {qvar.text}")


def parse_program(text: str, desc: DomainDescriptor) -> Program:
    """
        Lê um programa, uma cláusula por linha.

        Raises:
            QlpSyntaxError: Erro de sintaxe ou aridade inconsistente (com linha e coluna).
            InvalidQualificationError: Atenuação fora do domínio ou igual a ⊥.
    """
    return _Parser(text, desc, skip_newlines=False).read_program()


def parse_goal(text: str, desc: DomainDescriptor) -> InitialGoal:
    """
        Lê um objetivo inicial `A1#W1, ..., An#Wn | W1 >= b1, ...`. Átomos sem
        limite explícito recebem ⊤. No domínio w, `W <= b` é sinônimo de `W >= b`.
    """
    return _Parser(text, desc).read_goal()


def parse_atom(text: str) -> Atom:
    parser = _Parser(text, CERT)
    atom = parser.read_atom()
    parser._check_token(parser.token, TOKEN_EOF)
    return atom


def parse_annotated_atom(text: str, desc: DomainDescriptor) -> tuple[Atom, QualValue]:
    """Lê `atom # valor`, ex.: `cruel(mother(eve)) # 0.15`."""
    parser = _Parser(text, desc)
    atom = parser.read_atom()
    parser._expect(TOKEN_HASH)
    value = parser.read_nonbottom_value("anotação")
    parser._check_token(parser.token, TOKEN_EOF)
    return atom, value


def parse_answer(text: str, desc: DomainDescriptor) -> tuple[dict, dict]:
    """
        Lê uma resposta `X = adam, Y = apple | W1 = 0.5, W2 = 0.75`. Chaves
        opcionais e `true` (substituição vazia) também são aceitos, de modo
        que a saída do comando solve possa ser relida.

        Returns:
            tuple[dict, dict]: Ligações de variáveis e de variáveis de qualificação.
    """
    return _Parser(text, desc).read_answer()

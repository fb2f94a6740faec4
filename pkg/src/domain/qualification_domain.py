"""
Domínios de qualificação: reticulados com extremos ⊥ e ⊤ equipados com uma
operação de atenuação ∘.

Instâncias prontas:
    B  (BOOL)    valores {0,1}, ∘ = conjunção lógica
    U  (CERT)    racionais em [0,1], ∘ = produto
    W  (WEIGHT)  racionais >= 0 ou inf, ordem INVERTIDA, ∘ = soma
    produtos     pares componente a componente, aninhamento arbitrário

Todos os valores usam racionais exatos (fractions.Fraction): comparações e
avaliações nunca dependem de tolerância numérica.
"""
from __future__ import annotations

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

from src.domain.errors import DomainMismatchError


class DomainKind(Enum):
    BOOL = "b"
    CERT = "u"
    WEIGHT = "w"
    PRODUCT = "prod"


@dataclass(frozen=True)
class DomainDescriptor:
    kind: DomainKind
    left: DomainDescriptor | None = None
    right: DomainDescriptor | None = None

    def __post_init__(self):
        is_product = self.kind is DomainKind.PRODUCT
        if is_product != (self.left is not None and self.right is not None):
            raise ValueError("apenas descritores produto possuem componentes (e ambos são obrigatórios)")

    def __str__(self):
        if self.kind is DomainKind.PRODUCT:
            return f"prod:{self.left},{self.right}"
        return self.kind.value


BOOL = DomainDescriptor(DomainKind.BOOL)
CERT = DomainDescriptor(DomainKind.CERT)
WEIGHT = DomainDescriptor(DomainKind.WEIGHT)


def product(left: DomainDescriptor, right: DomainDescriptor) -> DomainDescriptor:
    return DomainDescriptor(DomainKind.PRODUCT, left, right)


def parse_domain_flag(text: str) -> DomainDescriptor:
    """
        Converte a opção de linha de comando em descritor: `b`, `u`, `w` ou
        `prod:<d1>,<d2>` (recursivo, ex.: `prod:prod:u,w,b`).

        Raises:
            ValueError: Se o texto não descrever um domínio.
    """
    desc, pos = _parse_flag_at(text.strip().lower(), 0)
    if pos != len(text.strip()):
        raise ValueError(f"domínio inválido: '{text}'")
    return desc


def _parse_flag_at(text: str, pos: int) -> tuple[DomainDescriptor, int]:
    if text.startswith("prod:", pos):
        left, pos = _parse_flag_at(text, pos + len("prod:"))
        if pos >= len(text) or text[pos] != ",":
            raise ValueError(f"domínio inválido: '{text}' (esperava ',' na posição {pos})")
        right, pos = _parse_flag_at(text, pos + 1)
        return product(left, right), pos
    for desc in (BOOL, CERT, WEIGHT):
        if text.startswith(desc.kind.value, pos):
            return desc, pos + 1
    raise ValueError(f"domínio inválido: '{text}'")


class Infinity(Enum):
    """Símbolo distinto para o elemento ⊥ de W (não é um float)."""
    INF = "inf"

    def __str__(self):
        return "inf"


INF = Infinity.INF


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class BoolVal:
    b: int

    def __post_init__(self):
        if self.b not in (0, 1):
            raise ValueError(f"valor booleano fora de {{0,1}}: {self.b}")


@dataclass(frozen=True)
class CertVal:
    q: Fraction

    def __post_init__(self):
        q = _as_fraction(self.q)
        if not 0 <= q <= 1:
            raise ValueError(f"certeza fora de [0,1]: {q}")
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class WeightVal:
    w: Fraction | Infinity

    def __post_init__(self):
        if self.w is INF:
            return
        w = _as_fraction(self.w)
        if w < 0:
            raise ValueError(f"peso negativo: {w}")
        object.__setattr__(self, "w", w)

    @property
    def is_infinite(self) -> bool:
        return self.w is INF


@dataclass(frozen=True)
class PairVal:
    l: QualValue
    r: QualValue


QualValue = Union[BoolVal, CertVal, WeightVal, PairVal]


_DECIMAL = re.compile(r"^\d+(\.\d+)?$")
_RATIO = re.compile(r"^\d+/\d+$")


def _number_from_text(text: str) -> Fraction:
    if _DECIMAL.match(text) or _RATIO.match(text):
        return Fraction(text)
    raise ValueError(f"literal numérico inválido: '{text}'")


def _format_fraction(value: Fraction, min_decimals: int) -> str:
    """Decimal exato quando o denominador só tem fatores 2 e 5; senão `n/m`."""
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    places = max(twos, fives, min_decimals)
    scaled = value.numerator * 10 ** places // value.denominator
    if places == 0:
        return str(scaled)
    digits = str(scaled).rjust(places + 1, "0")
    integral, decimals = digits[:-places], digits[-places:]
    decimals = decimals.rstrip("0").ljust(min_decimals, "0")
    return f"{integral}.{decimals}" if decimals else integral


class QualificationDomain(ABC):
    """
    Pacote de operações de um domínio de qualificação: extremos, ordem ⊑,
    glb (⊓), lub (⊔) e atenuação (∘). Os métodos públicos rejeitam valores
    de outro descritor com DomainMismatchError.
    """

    def __init__(self, descriptor: DomainDescriptor):
        self.descriptor = descriptor

    @property
    @abstractmethod
    def bot(self) -> QualValue: ...

    @property
    @abstractmethod
    def top(self) -> QualValue: ...

    @property
    @abstractmethod
    def op_symbol(self) -> str: ...

    @abstractmethod
    def contains(self, value) -> bool: ...

    @abstractmethod
    def _leq(self, a, b) -> bool: ...

    @abstractmethod
    def _glb(self, a, b) -> QualValue: ...

    @abstractmethod
    def _lub(self, a, b) -> QualValue: ...

    @abstractmethod
    def _attenuate(self, d, e) -> QualValue: ...

    @abstractmethod
    def scalar_from_text(self, text: str) -> QualValue: ...

    @abstractmethod
    def format_value(self, value: QualValue) -> str: ...

    @abstractmethod
    def sample_values(self) -> list[QualValue]: ...

    def _require(self, *values):
        for value in values:
            if not self.contains(value):
                raise DomainMismatchError(f"valor {value!r} não pertence ao domínio '{self.descriptor}'")

    def leq(self, a: QualValue, b: QualValue) -> bool:
        self._require(a, b)
        return self._leq(a, b)

    def geq(self, a: QualValue, b: QualValue) -> bool:
        return self.leq(b, a)

    def glb(self, a: QualValue, b: QualValue) -> QualValue:
        self._require(a, b)
        return self._glb(a, b)

    def lub(self, a: QualValue, b: QualValue) -> QualValue:
        self._require(a, b)
        return self._lub(a, b)

    def attenuate(self, d: QualValue, e: QualValue) -> QualValue:
        self._require(d, e)
        return self._attenuate(d, e)

    def big_glb(self, values: Iterable[QualValue]) -> QualValue:
        result = self.top
        for value in values:
            result = self.glb(result, value)
        return result

    def is_bot(self, value: QualValue) -> bool:
        return value == self.bot

    def is_top(self, value: QualValue) -> bool:
        return value == self.top

    def is_extreme(self, value: QualValue) -> bool:
        return value == self.bot or value == self.top


class BoolDomain(QualificationDomain):
    bot = BoolVal(0)
    top = BoolVal(1)
    op_symbol = "&"

    def contains(self, value) -> bool:
        return isinstance(value, BoolVal)

    def _leq(self, a, b):
        return a.b <= b.b

    def _glb(self, a, b):
        return a if a.b <= b.b else b

    def _lub(self, a, b):
        return b if a.b <= b.b else a

    def _attenuate(self, d, e):
        return BoolVal(d.b & e.b)

    def scalar_from_text(self, text):
        if text not in ("0", "1"):
            raise ValueError(f"literal booleano deve ser 0 ou 1: '{text}'")
        return BoolVal(int(text))

    def format_value(self, value):
        return str(value.b)

    def sample_values(self):
        return [BoolVal(0), BoolVal(1)]


class CertDomain(QualificationDomain):
    bot = CertVal(Fraction(0))
    top = CertVal(Fraction(1))
    op_symbol = "*"

    def contains(self, value) -> bool:
        return isinstance(value, CertVal)

    def _leq(self, a, b):
        return a.q <= b.q

    def _glb(self, a, b):
        return a if a.q <= b.q else b

    def _lub(self, a, b):
        return b if a.q <= b.q else a

    def _attenuate(self, d, e):
        return CertVal(d.q * e.q)

    def scalar_from_text(self, text):
        q = _number_from_text(text)
        if q > 1:
            raise ValueError(f"certeza fora de [0,1]: '{text}'")
        return CertVal(q)

    def format_value(self, value):
        return _format_fraction(value.q, 1)

    def sample_values(self):
        return [CertVal(Fraction(n, 8)) for n in (0, 1, 2, 3, 4, 6, 7, 8)]


class WeightDomain(QualificationDomain):
    """W: a ordem ⊑ é a inversa da numérica; ⊥ = inf, ⊤ = 0, glb = máximo."""
    bot = WeightVal(INF)
    top = WeightVal(Fraction(0))
    op_symbol = "+"

    def contains(self, value) -> bool:
        return isinstance(value, WeightVal)

    def _leq(self, a, b):
        if a.w is INF:
            return True
        if b.w is INF:
            return False
        return b.w <= a.w

    def _glb(self, a, b):
        return a if self._leq(a, b) else b

    def _lub(self, a, b):
        return b if self._leq(a, b) else a

    def _attenuate(self, d, e):
        if d.w is INF or e.w is INF:
            return self.bot
        return WeightVal(d.w + e.w)

    def scalar_from_text(self, text):
        if text == "inf":
            return self.bot
        return WeightVal(_number_from_text(text))

    def format_value(self, value):
        if value.w is INF:
            return "inf"
        return _format_fraction(value.w, 0)

    def sample_values(self):
        return [WeightVal(INF)] + [WeightVal(Fraction(n)) for n in ("0", "1/2", "1", "2", "3", "5", "10")]


class ProductDomain(QualificationDomain):
    """Produto cartesiano D1 × D2: todas as operações componente a componente."""

    def __init__(self, descriptor: DomainDescriptor):
        super().__init__(descriptor)
        self.left = lattice_ops(descriptor.left)
        self.right = lattice_ops(descriptor.right)
        self._bot = PairVal(self.left.bot, self.right.bot)
        self._top = PairVal(self.left.top, self.right.top)

    @property
    def bot(self):
        return self._bot

    @property
    def top(self):
        return self._top

    @property
    def op_symbol(self):
        return f"({self.left.op_symbol},{self.right.op_symbol})"

    def contains(self, value) -> bool:
        return isinstance(value, PairVal) and self.left.contains(value.l) and self.right.contains(value.r)

    def _leq(self, a, b):
        return self.left._leq(a.l, b.l) and self.right._leq(a.r, b.r)

    def _glb(self, a, b):
        return PairVal(self.left._glb(a.l, b.l), self.right._glb(a.r, b.r))

    def _lub(self, a, b):
        return PairVal(self.left._lub(a.l, b.l), self.right._lub(a.r, b.r))

    def _attenuate(self, d, e):
        return PairVal(self.left._attenuate(d.l, e.l), self.right._attenuate(d.r, e.r))

    def scalar_from_text(self, text):
        return parse_value(self.descriptor, text)

    def format_value(self, value):
        return f"({self.left.format_value(value.l)},{self.right.format_value(value.r)})"

    def sample_values(self):
        return [PairVal(l, r) for l in self.left.sample_values() for r in self.right.sample_values()]


@lru_cache(maxsize=None)
def lattice_ops(desc: DomainDescriptor) -> QualificationDomain:
    """
        Devolve o pacote de operações (bot, top, leq, glb, lub, attenuate)
        do descritor. Instâncias são imutáveis e compartilhadas.
    """
    if desc.kind is DomainKind.BOOL:
        return BoolDomain(desc)
    if desc.kind is DomainKind.CERT:
        return CertDomain(desc)
    if desc.kind is DomainKind.WEIGHT:
        return WeightDomain(desc)
    return ProductDomain(desc)


def attenuate(desc: DomainDescriptor, d: QualValue, e: QualValue) -> QualValue:
    return lattice_ops(desc).attenuate(d, e)


def big_glb(desc: DomainDescriptor, values: Sequence[QualValue]) -> QualValue:
    """⊓ de uma sequência finita; a sequência vazia resulta em ⊤."""
    return lattice_ops(desc).big_glb(values)


def format_value(desc: DomainDescriptor, value: QualValue) -> str:
    return lattice_ops(desc).format_value(value)


def descriptor_of(value: QualValue) -> DomainDescriptor:
    """Descritor determinado pela forma do próprio valor."""
    if isinstance(value, BoolVal):
        return BOOL
    if isinstance(value, CertVal):
        return CERT
    if isinstance(value, WeightVal):
        return WEIGHT
    if isinstance(value, PairVal):
        return product(descriptor_of(value.l), descriptor_of(value.r))
    raise DomainMismatchError(f"não é um valor de qualificação: {value!r}")


def value_text(value: QualValue) -> str:
    return format_value(descriptor_of(value), value)


_LITERAL_TOKEN = re.compile(r"\s*(\(|\)|,|[0-9./]+|inf)")


def parse_value(desc: DomainDescriptor, text: str) -> QualValue:
    """
        Lê um literal de qualificação isolado (`0.8`, `inf`, `(0.8,2)`, ...).

        Raises:
            ValueError: Se o texto não for um literal válido do domínio.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = _LITERAL_TOKEN.match(text, pos)
        if not match:
            raise ValueError(f"literal inválido: '{text}'")
        tokens.append(match.group(1))
        pos = match.end()
    value, used = _value_from_tokens(desc, tokens, 0)
    if used != len(tokens):
        raise ValueError(f"literal inválido: '{text}'")
    return value


def _value_from_tokens(desc, tokens, pos):
    if pos >= len(tokens):
        raise ValueError("literal incompleto")
    if desc.kind is DomainKind.PRODUCT:
        if tokens[pos] != "(":
            raise ValueError(f"literal de produto deve começar com '(': '{''.join(tokens)}'")
        left, pos = _value_from_tokens(desc.left, tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos] != ",":
            raise ValueError("esperava ',' no literal de produto")
        right, pos = _value_from_tokens(desc.right, tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos] != ")":
            raise ValueError("esperava ')' no literal de produto")
        return PairVal(left, right), pos + 1
    return lattice_ops(desc).scalar_from_text(tokens[pos]), pos + 1


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    operands: tuple
    detail: str = ""


class _OperationTable:
    """Tabelas memorizadas das operações sobre valores internados em inteiros."""

    def __init__(self, ops: QualificationDomain, attenuation: Callable):
        self.ops = ops
        self.attenuation = attenuation
        self.values: list[QualValue] = []
        self.ids: dict[QualValue, int] = {}
        self._att: dict[tuple[int, int], int] = {}
        self._glb: dict[tuple[int, int], int] = {}
        self._lub: dict[tuple[int, int], int] = {}
        self._leq: dict[tuple[int, int], bool] = {}

    def intern(self, value: QualValue) -> int:
        idx = self.ids.get(value)
        if idx is None:
            idx = len(self.values)
            self.values.append(value)
            self.ids[value] = idx
        return idx

    def att(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._att:
            self._att[key] = self.intern(self.attenuation(self.values[i], self.values[j]))
        return self._att[key]

    def glb(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._glb:
            self._glb[key] = self.intern(self.ops.glb(self.values[i], self.values[j]))
        return self._glb[key]

    def lub(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._lub:
            self._lub[key] = self.intern(self.ops.lub(self.values[i], self.values[j]))
        return self._lub[key]

    def leq(self, i: int, j: int) -> bool:
        key = (i, j)
        if key not in self._leq:
            self._leq[key] = self.ops.leq(self.values[i], self.values[j])
        return self._leq[key]


def _decreases(desc: DomainDescriptor, d, e, result) -> bool:
    # Produtos: cada componente decresce estritamente quando os dois operandos
    # do componente não são extremos; nos demais casos basta result ⊑ e.
    ops = lattice_ops(desc)
    if desc.kind is DomainKind.PRODUCT:
        return (_decreases(desc.left, d.l, e.l, result.l)
                and _decreases(desc.right, d.r, e.r, result.r))
    if not ops.contains(result) or not ops.leq(result, e):
        return False
    if ops.is_extreme(d) or ops.is_extreme(e):
        return True
    return result != e


def check_axioms(desc: DomainDescriptor,
                 samples: Iterable[QualValue] | None = None,
                 attenuation: Callable[[QualValue, QualValue], QualValue] | None = None,
                 max_violations: int = 50) -> list[AxiomViolation]:
    """
        Verifica exaustivamente, sobre todas as tuplas de amostras, as leis de
        reticulado e os axiomas da atenuação (associatividade, comutatividade,
        monotonia, d∘⊤ = d, d∘⊥ = ⊥, decréscimo estrito e distributividade
        sobre ⊓). `attenuation` permite injetar uma operação alternativa.

        Returns:
            list[AxiomViolation]: Vazia quando tudo vale.
    """
    ops = lattice_ops(desc)
    attenuation = attenuation or ops.attenuate
    table = _OperationTable(ops, attenuation)
    samples = list(samples) if samples is not None else ops.sample_values()
    for value in (ops.bot, ops.top, *samples):
        ops._require(value)
    ids = sorted({table.intern(value) for value in (ops.bot, ops.top, *samples)})
    bot, top = table.ids[ops.bot], table.ids[ops.top]
    violations: list[AxiomViolation] = []

    def report(axiom, *operand_ids, detail=""):
        violations.append(AxiomViolation(axiom, tuple(table.values[i] for i in operand_ids), detail))
        return len(violations) >= max_violations

    for i in ids:
        if not table.leq(i, i) and report("ordem reflexiva", i):
            return violations
        if not (table.leq(bot, i) and table.leq(i, top)) and report("extremos", i):
            return violations
        if table.glb(i, i) != i and report("glb idempotente", i):
            return violations
        if table.att(i, top) != i and report("2b: d∘⊤ = d", i):
            return violations
        if table.att(i, bot) != bot and report("2c: d∘⊥ = ⊥", i):
            return violations

    for i in ids:
        for j in ids:
            if table.att(i, j) != table.att(j, i) and report("2a: ∘ comutativa", i, j):
                return violations
            if table.glb(i, j) != table.glb(j, i) and report("glb comutativo", i, j):
                return violations
            if table.lub(i, j) != table.lub(j, i) and report("lub comutativo", i, j):
                return violations
            if i != j and table.leq(i, j) and table.leq(j, i) and report("ordem antissimétrica", i, j):
                return violations
            if table.glb(i, table.lub(i, j)) != i and report("absorção glb/lub", i, j):
                return violations
            if table.lub(i, table.glb(i, j)) != i and report("absorção lub/glb", i, j):
                return violations
            consistent = table.leq(i, j) == (table.glb(i, j) == i) == (table.lub(i, j) == j)
            if not consistent and report("glb/lub coerentes com ⊑", i, j):
                return violations
            if i in (bot, top) or j in (bot, top):
                continue
            result = table.values[table.att(i, j)]
            if not _decreases(desc, table.values[i], table.values[j], result) \
                    and report("2d: d∘e ⊏ e", i, j, detail=f"resultado {result!r}"):
                return violations

    for i in ids:
        for j in ids:
            ij = table.att(i, j)
            glb_ij = table.glb(i, j)
            lub_ij = table.lub(i, j)
            i_leq_j = table.leq(i, j)
            for k in ids:
                if table.att(ij, k) != table.att(i, table.att(j, k)) and report("2a: ∘ associativa", i, j, k):
                    return violations
                if i_leq_j and not table.leq(table.att(i, k), table.att(j, k)) \
                        and report("2a: ∘ monótona", i, j, k):
                    return violations
                if table.att(k, glb_ij) != table.glb(table.att(k, i), table.att(k, j)) \
                        and report("2e: distributividade sobre ⊓", k, i, j):
                    return violations
                if table.glb(glb_ij, k) != table.glb(i, table.glb(j, k)) and report("glb associativo", i, j, k):
                    return violations
                if table.lub(lub_ij, k) != table.lub(i, table.lub(j, k)) and report("lub associativo", i, j, k):
                    return violations
                if i_leq_j and table.leq(j, k) and not table.leq(i, k) and report("ordem transitiva", i, j, k):
                    return violations
    return violations

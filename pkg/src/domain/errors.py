class QlpError(Exception):
    """Erro base do motor QLP."""


class QlpSyntaxError(QlpError):
    """
    Erro de sintaxe em programas, objetivos, respostas ou literais de qualificação.
    Guarda a linha e a coluna (a partir de 1) onde o problema foi detectado.
    """

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"linha {line}, coluna {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class InvalidQualificationError(QlpSyntaxError):
    """Literal fora do domínio de qualificação, ou igual a ⊥ onde ⊥ é proibido."""


class DomainMismatchError(QlpError, ValueError):
    """Valores de descritores de domínio diferentes foram misturados."""


class TranslationError(QlpError):
    """O dialeto de saída não consegue expressar o domínio pedido."""

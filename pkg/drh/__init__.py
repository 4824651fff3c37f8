"""drh: hierarquias DR e tau-simétricas em aritmética exata."""


class DRHError(Exception):
    """Erro base de todas as falhas do pacote."""


class ExprSyntaxError(DRHError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (posição {pos})")
        self.pos = pos


class UndeclaredSymbol(DRHError):
    pass


class CapOverflow(DRHError):
    pass


class GradingError(DRHError):
    pass


class NotExact(DRHError):
    """Expressão que não é derivada total; `witness` guarda uma derivada
    variacional não nula."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class RecursionObstruction(DRHError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class AnsatzInfeasible(DRHError):
    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class MiuraInversionError(DRHError):
    pass


class SingularMetric(DRHError):
    pass


class ManifestError(DRHError):
    pass


class MissingDataError(DRHError):
    pass


class UnknownCohFT(DRHError):
    pass

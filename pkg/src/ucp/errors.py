class UcpError(Exception):
    """Base error carrying a human readable detail and the CLI exit code."""

    exit_code = 1

    def __init__(self, detail):
        super().__init__(detail)
        self.detail = detail


class InvalidSpecError(UcpError, ValueError):
    exit_code = 2


class OracleInfeasibleError(UcpError):
    exit_code = 3


class AnalysisError(UcpError):
    pass


class NumericalError(UcpError, ArithmeticError):
    pass

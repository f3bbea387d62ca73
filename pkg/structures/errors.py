class BlockToeplitzError(Exception):
    """Base de todos los errores de la librería"""


class ShapeMismatchError(BlockToeplitzError, ValueError):
    pass


class NonFiniteError(BlockToeplitzError, ValueError):
    pass


class NotToeplitzError(BlockToeplitzError):
    """Un operando denso no es block Toeplitz"""


class NotDiagonalError(BlockToeplitzError, ValueError):
    """Un símbolo tiene entradas fuera de la diagonal"""


class MatrixFileError(BlockToeplitzError, ValueError):
    def __init__(self, message: str, position: str = None):
        self.position = position
        super().__init__(f"{position}: {message}" if position else message)


class SizeLimitError(BlockToeplitzError):
    pass

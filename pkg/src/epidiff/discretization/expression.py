"""Arithmetic expressions over x, y and t used for coefficient and initial data.

The grammar is small: numeric literals, the variables ``x``,
``y``, ``t``, the constant ``pi``, the binary operators ``+ - * /``, unary
signs, parentheses and the functions ``sin``, ``cos`` and ``exp``. Text is
parsed with :mod:`ast` and anything outside that grammar is rejected, so no
user code is ever executed.
"""

import ast
import math
from collections.abc import Callable

import numpy as np

from epidiff.errors import ConfigurationError
from epidiff.types import FloatArray

VARIABLES = frozenset({"x", "y", "t"})
CONSTANTS = {"pi": math.pi}
FUNCTIONS: dict[str, Callable[[FloatArray], FloatArray]] = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
}
_BINARY: dict[type[ast.operator], Callable[[FloatArray, FloatArray], FloatArray]] = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
}


class ExpressionError(ConfigurationError):
    """The expression text is not part of the coefficient grammar."""


def _validate(node: ast.AST, source: str) -> set[str]:
    """Walk the tree, reject foreign nodes and collect the variables used."""
    match node:
        case ast.Expression(body=body):
            return _validate(body, source)
        case ast.Constant(value=value) if isinstance(value, int | float) and not isinstance(value, bool):
            return set()
        case ast.Name(id=name) if name in VARIABLES:
            return {name}
        case ast.Name(id=name) if name in CONSTANTS:
            return set()
        case ast.BinOp(left=left, op=op, right=right) if type(op) in _BINARY:
            return _validate(left, source) | _validate(right, source)
        case ast.UnaryOp(op=ast.USub() | ast.UAdd(), operand=operand):
            return _validate(operand, source)
        case ast.Call(func=ast.Name(id=name), args=[arg], keywords=[]) if name in FUNCTIONS:
            return _validate(arg, source)
        case _:
            msg = f"unsupported construct {ast.dump(node)[:40]!r} in expression {source!r}"
            raise ExpressionError(msg)


class Expression:
    """A parsed, validated expression that evaluates on numpy arrays."""

    def __init__(self, source: str) -> None:
        try:
            tree = ast.parse(source.strip(), mode="eval")
        except SyntaxError as exc:
            msg = f"malformed expression {source!r}: {exc.msg}"
            raise ExpressionError(msg) from exc
        self.source = source
        self.variables = frozenset(_validate(tree, source))
        self._tree = tree

    def __repr__(self) -> str:
        return f"Expression({self.source!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Expression) and other.source == self.source

    def __hash__(self) -> int:
        return hash(self.source)

    @property
    def depends_on_space(self) -> bool:
        return bool(self.variables & {"x", "y"})

    @property
    def depends_on_time(self) -> bool:
        return "t" in self.variables

    def __call__(self, x: FloatArray, y: FloatArray, t: float) -> FloatArray:
        """Evaluate on cell-centre coordinates, broadcasting to ``x.shape``."""
        env = {"x": x, "y": y, "t": np.float64(t)}
        with np.errstate(all="ignore"):
            value = self._eval(self._tree.body, env)
        return np.broadcast_to(np.asarray(value, dtype=np.float64), x.shape).copy()

    def _eval(self, node: ast.expr, env: dict[str, FloatArray]) -> FloatArray:
        match node:
            case ast.Constant(value=value):
                return np.float64(value)
            case ast.Name(id=name) if name in CONSTANTS:
                return np.float64(CONSTANTS[name])
            case ast.Name(id=name):
                return env[name]
            case ast.BinOp(left=left, op=op, right=right):
                return _BINARY[type(op)](self._eval(left, env), self._eval(right, env))
            case ast.UnaryOp(op=ast.USub(), operand=operand):
                return np.negative(self._eval(operand, env))
            case ast.UnaryOp(operand=operand):
                return self._eval(operand, env)
            case ast.Call(func=ast.Name(id=name), args=[arg]):
                return FUNCTIONS[name](self._eval(arg, env))
            case _:
                msg = f"cannot evaluate {ast.dump(node)[:40]!r}"
                raise ExpressionError(msg)

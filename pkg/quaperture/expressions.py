"""
This module defines the class ExpressionScalar to represent mathematical expressions given as strings in run
configurations and scene parametrizations, as well as corresponding exception classes.
"""
from typing import Any, Dict, Union, Sequence, Callable, Optional
from numbers import Number

import sympy
import numpy

__all__ = ["ExpressionScalar", "sympify", "evaluate_expression", "ExpressionVariableMissingException",
           "NonNumericEvaluation"]


Sympifyable = Union[str, Number, sympy.Expr]

#: names usable in configuration expressions besides the numbers and operators sympy knows
_NAMESPACE = {'pi': sympy.pi, 'e': sympy.E, 'sqrt': sympy.sqrt, 'sin': sympy.sin, 'cos': sympy.cos,
              'tan': sympy.tan, 'exp': sympy.exp, 'log': sympy.log, 'sinc': lambda x: sympy.sin(x) / x}


def sympify(expr: Sympifyable) -> sympy.Expr:
    if isinstance(expr, sympy.Expr):
        return expr
    if isinstance(expr, (bool, numpy.bool_)):
        raise TypeError('Booleans are no expressions', expr)
    if isinstance(expr, (int, numpy.integer)):
        return sympy.Integer(int(expr))
    if isinstance(expr, (float, numpy.floating)):
        return sympy.Float(float(expr))
    try:
        return sympy.sympify(expr, locals=dict(_NAMESPACE))
    except (sympy.SympifyError, SyntaxError, TypeError) as error:
        raise ValueError('Not a valid expression', expr) from error


def get_variables(expression: sympy.Expr) -> Sequence[str]:
    return tuple(sorted(str(symbol) for symbol in expression.free_symbols))


class ExpressionScalar:
    """A scalar mathematical expression instantiated from a string, number or sympy expression.

    Evaluation is numpy vectorized through :func:`sympy.lambdify`. Derivatives are symbolic.
    """

    def __init__(self, ex: Union['ExpressionScalar', Sympifyable]) -> None:
        if isinstance(ex, ExpressionScalar):
            ex = ex.original_expression
        if isinstance(ex, sympy.Expr):
            self._original_expression = str(ex)
        else:
            self._original_expression = ex
        self._sympified_expression = sympify(ex)
        self._variables = get_variables(self._sympified_expression)
        self._expression_lambda = None  # type: Optional[Callable]

    @property
    def original_expression(self) -> Union[str, Number]:
        return self._original_expression

    @property
    def variables(self) -> Sequence[str]:
        """All free variables in the expression, sorted by name."""
        return self._variables

    def _parse_evaluate_numeric_arguments(self, eval_args: Dict[str, Any]) -> Dict[str, Any]:
        try:
            return {v: eval_args[v] for v in self.variables}
        except KeyError as key_error:
            raise ExpressionVariableMissingException(key_error.args[0], self) from key_error

    def evaluate_numeric(self, **kwargs) -> Union[float, complex, numpy.ndarray]:
        parsed_kwargs = self._parse_evaluate_numeric_arguments(kwargs)
        if self._expression_lambda is None:
            self._expression_lambda = sympy.lambdify(self.variables, self._sympified_expression, 'numpy')
        result = self._expression_lambda(**parsed_kwargs)

        if isinstance(result, numpy.ndarray):
            if result.dtype == numpy.dtype('O'):
                raise NonNumericEvaluation(self, result, kwargs)
            return result
        if isinstance(result, (int, float, complex, numpy.number)):
            return result
        raise NonNumericEvaluation(self, result, kwargs)

    def __float__(self) -> float:
        if self.variables:
            raise ExpressionVariableMissingException(self.variables[0], self)
        return float(self.evaluate_numeric())

    def derivative(self, variable: str) -> 'ExpressionScalar':
        return ExpressionScalar(sympy.diff(self._sympified_expression, sympy.Symbol(variable)))

    def evaluate_symbolic(self, substitutions: Dict[str, Sympifyable]) -> 'ExpressionScalar':
        return ExpressionScalar(self._sympified_expression.subs({sympy.Symbol(k): sympify(v)
                                                                 for k, v in substitutions.items()}))

    def is_constant(self) -> bool:
        return not self._variables

    def __str__(self) -> str:
        return str(self._sympified_expression)

    def __repr__(self) -> str:
        return 'ExpressionScalar({})'.format(repr(self._original_expression))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ExpressionScalar):
            try:
                other = ExpressionScalar(other)
            except (TypeError, ValueError):
                return False
        return self._sympified_expression == other._sympified_expression

    def __hash__(self) -> int:
        return hash(self._sympified_expression)

    def __getstate__(self) -> Dict[str, Any]:
        # lambdified functions do not pickle
        return {'expression': self._original_expression}

    def __setstate__(self, state: Dict[str, Any]) -> None:
        self.__init__(state['expression'])

    def get_serialization_data(self) -> Union[str, float, int]:
        if isinstance(self._original_expression, (int, float)):
            return self._original_expression
        return str(self._original_expression)


def evaluate_expression(value: Union[str, Number], name: str='value') -> float:
    """Evaluate a constant configuration expression like "2*pi" to a float."""
    expression = ExpressionScalar(value)
    if expression.variables:
        raise ValueError('Expression for {} must be constant'.format(name), value, expression.variables)
    result = complex(expression.evaluate_numeric())
    if result.imag != 0:
        raise ValueError('Expression for {} must be real'.format(name), value)
    return result.real


class ExpressionVariableMissingException(Exception):
    """An exception indicating that a variable value was not provided during expression evaluation.

    See also:
         quaperture.expressions.ExpressionScalar
    """

    def __init__(self, variable: str, expression: ExpressionScalar) -> None:
        super().__init__()
        self.variable = variable
        self.expression = expression

    def __str__(self) -> str:
        return "Could not evaluate <{}>: A value for variable <{}> is missing!".format(
            str(self.expression), self.variable)


class NonNumericEvaluation(Exception):
    """An exception that is raised if the result of evaluate_numeric is not a number."""

    def __init__(self, expression: ExpressionScalar, non_numeric_result: Any, call_arguments: Dict):
        super().__init__()
        self.expression = expression
        self.non_numeric_result = non_numeric_result
        self.call_arguments = call_arguments

    def __str__(self) -> str:
        if isinstance(self.non_numeric_result, numpy.ndarray):
            dtype = self.non_numeric_result.dtype
        else:
            dtype = type(self.non_numeric_result)
        return "The result of evaluate_numeric is of type {} which is not a number".format(dtype)

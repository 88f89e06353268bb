import operator

from functools import reduce
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Union, cast

from lark import Lark, Token, Transformer

from wn_align.elicitation import Relation
from wn_align.matcher import ClassifiedTriplet, StatusKind
from wn_align.utils import remove_string_delimiters


Predicate = Callable[[ClassifiedTriplet], bool]


class SemanticError(Exception):
    """
    Exception raised for semantic errors in filter expressions.

    Attributes:
        msg: The error message describing the semantic issue.
        expr: The filter expression where the error occurred.
        pos: The position of the error in the expression (zero-based index).
        context: A snippet of the expression showing the error in context.
    """

    def __init__(self, msg: str, expr: str, column: Optional[int] = None) -> None:
        super().__init__()
        self.msg = msg
        self.expr = expr
        self.pos = column - 1 if column is not None else -1
        self.context = self.get_context(80)

    def get_context(self, span: int) -> str:
        """
        Generate a context string highlighting the error position in the expression.

        Args:
            span: The number of characters to show before and after the error.

        Returns:
            A formatted string showing the error context.
        """
        start = max(self.pos - span, 0)
        end = self.pos + span
        before = self.expr[start : self.pos].rsplit("\n", 1)[-1]
        after = self.expr[self.pos : end].split("\n", 1)[0]
        return f"\n\t{before}{after}\n\t" + len(before.expandtabs()) * " " + "^\n\n"

    def __str__(self) -> str:
        return "Invalid filter expression.\n" + self.context + self.msg


class TripletFilter:
    """
    A predicate over classified triplets, composable with &, | and unary -.

    Attributes:
        predicate: The wrapped test.
        description: Readable form of the expression.
    """

    def __init__(self, predicate: Predicate, description: str) -> None:
        self.predicate = predicate
        self.description = description

    def __call__(self, c: ClassifiedTriplet) -> bool:
        return self.predicate(c)

    def __and__(self, other: "TripletFilter") -> "TripletFilter":
        return TripletFilter(
            lambda c: self(c) and other(c), f"({self.description} and {other.description})"
        )

    def __or__(self, other: "TripletFilter") -> "TripletFilter":
        return TripletFilter(
            lambda c: self(c) or other(c), f"({self.description} or {other.description})"
        )

    def __neg__(self) -> "TripletFilter":
        return TripletFilter(lambda c: not self(c), f"not {self.description}")

    def __repr__(self) -> str:
        return f"TripletFilter({self.description})"

    def apply(self, classified: Iterable[ClassifiedTriplet]) -> List[ClassifiedTriplet]:
        """Keep the triplets satisfying the filter, in input order."""
        return [c for c in classified if self(c)]


class Field(NamedTuple):
    kind: str
    getter: Callable[[ClassifiedTriplet], Any]


FIELDS: Dict[str, Field] = {
    "target": Field("string", lambda c: c.triplet.target),
    "relatum": Field("string", lambda c: c.triplet.relatum),
    "relation": Field("relation", lambda c: c.triplet.relation),
    "documented": Field("relation", lambda c: c.status.documented),
    "status": Field("status", lambda c: c.status.kind),
    "count": Field("number", lambda c: c.triplet.count),
    "distance": Field("number", lambda c: c.distance),
    "is_hapax": Field("boolean", lambda c: c.triplet.is_hapax),
    "is_self_pair": Field("boolean", lambda c: c.is_self_pair),
    "is_excluded": Field("boolean", lambda c: c.status.is_excluded),
}

_COMPARISONS: Dict[str, Callable[[Any, Any], bool]] = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "contains": operator.contains,
    "startswith": lambda a, b: a.startswith(b),
    "endswith": lambda a, b: a.endswith(b),
}

_OPERATORS_BY_KIND = {
    "string": {"=", "!=", "contains", "startswith", "endswith"},
    "number": {"=", "!=", "<", "<=", ">", ">="},
    "relation": {"=", "!="},
    "status": {"=", "!="},
}


class FilterParser:
    """
    A parser turning filter expressions into triplet filters.

    Expressions compare a field with a value (`relation = HYP`, `count > 1`,
    `target startswith ab`) or test a boolean field (`is_hapax`), combined with `and`, `or`,
    `not` and parentheses.
    """

    _grammar_file = Path(__file__).parent / "filter_grammar.lark"
    _parser: Optional[Lark] = None

    @classmethod
    def get_parser(cls) -> Lark:
        """
        Generate the Lark parser of the filter grammar, built once per process.

        Returns:
            A Lark parser instance.
        """
        if cls._parser is None:
            with cls._grammar_file.open() as file:
                cls._parser = Lark(file.read(), start="start", parser="lalr")
        return cls._parser

    def parse(self, expression: str) -> TripletFilter:
        """
        Parse a filter expression.

        Args:
            expression: The filter expression as a string.

        Returns:
            The corresponding filter.
        """
        tree = self.get_parser().parse(expression)
        return cast(TripletFilter, FilterTransformer(expr=expression).transform(tree))


class FilterTransformer(Transformer):
    """
    A transformer converting parsed filter expressions into TripletFilter objects.

    Attributes:
        expr: The original filter expression.
    """

    def __init__(self, expr: str) -> None:
        super().__init__(visit_tokens=True)
        self._expr = expr

    def expr(self, args: List[Union[TripletFilter, Token]]) -> TripletFilter:
        return reduce(operator.or_, [item for item in args if not isinstance(item, Token)])

    def term(self, args: List[Union[TripletFilter, Token]]) -> TripletFilter:
        return reduce(operator.and_, [item for item in args if not isinstance(item, Token)])

    def factor(self, args: List[Union[TripletFilter, Token]]) -> TripletFilter:
        if len(args) == 1:
            return cast(TripletFilter, args[0])
        elif len(args) == 2:
            return -cast(TripletFilter, args[1])
        msg = f"Unexpected token sequence: {args}."
        raise ValueError(msg)

    def identifier(self, args: List[Token]) -> Token:
        """
        Resolve a field name.

        Raises:
            SemanticError: If no field has this name.
        """
        name = args[0].value
        if name not in FIELDS:
            msg = f"Triplet filters don't have a field '{name}', use one of {', '.join(FIELDS)}."
            raise SemanticError(msg=msg, expr=self._expr, column=args[0].column)
        return args[0].update(value=(name, FIELDS[name]))

    def test(self, args: List[Token]) -> TripletFilter:
        name, field = args[0].value
        if field.kind != "boolean":
            msg = f"Triplet filter's '{name}' field is not a boolean field."
            raise SemanticError(msg=msg, expr=self._expr, column=args[0].column)
        return TripletFilter(lambda c: bool(field.getter(c)), name)

    def comparison(self, args: List[Token]) -> TripletFilter:
        """
        Build the filter of a `field operator value` comparison.

        Raises:
            SemanticError: If the operator does not apply to the field or the value has the
                wrong type.
        """
        name, field = args[0].value
        op_name: str = args[1].value
        raw: str = args[2].value
        if op_name not in _OPERATORS_BY_KIND.get(field.kind, set()):
            msg = f"Operator '{op_name}' is not supported by the {field.kind} field '{name}'."
            raise SemanticError(msg=msg, expr=self._expr, column=args[1].column)
        value = self._convert(field.kind, raw, args[2])
        compare = _COMPARISONS[op_name]

        def predicate(c: ClassifiedTriplet) -> bool:
            actual = field.getter(c)
            if actual is None:
                return op_name == "!="
            return bool(compare(actual, value))

        return TripletFilter(predicate, f"{name} {op_name} {raw}")

    def _convert(self, kind: str, raw: str, tok: Token) -> Any:
        try:
            if kind == "number":
                return int(raw)
            if kind == "relation":
                return Relation.parse(raw)
            if kind == "status":
                return StatusKind(raw.lower())
        except ValueError:
            msg = f"Expected a {kind} value, got '{raw}'."
            raise SemanticError(msg=msg, expr=self._expr, column=tok.column)
        return raw.lower()

    def STRING(self, tok: Token) -> Token:
        return tok.update(value=remove_string_delimiters(tok.value))

import rich_click as click

from typing import Union

from lark.exceptions import UnexpectedInput, VisitError

from wn_align.core.configuration import ScorerSpec
from wn_align.core.filters import FilterParser, TripletFilter


class ScorerParam(click.ParamType):
    """
    A custom Click parameter type that parses a gloss scorer, 'baseline' or 'external:PATH'.

    Attributes:
        name: The name of the parameter type, used by Click.
    """

    name = "scorer"

    def convert(
        self, value: str, param: Union[click.Parameter, None], ctx: Union[click.Context, None]
    ) -> ScorerSpec:
        """
        Converts the input value into a scorer setting.

        Args:
            value: The input value to be converted.
            param: The parameter object passed by Click.
            ctx: The context in which the parameter is being used.

        Returns:
            The scorer setting.

        Raises:
            click.BadParameter: If the input is neither 'baseline' nor 'external:PATH'.
        """
        try:
            return ScorerSpec.parse(value)
        except ValueError as error:
            self.fail(str(error), param, ctx)


class FilterParam(click.ParamType):
    """
    A custom Click parameter type that parses a string expression into a triplet filter.

    Attributes:
        name: The name of the parameter type, used by Click.
    """

    name = "filter"

    def __init__(self) -> None:
        super().__init__()
        self.parser = FilterParser()

    def convert(
        self, value: str, param: Union[click.Parameter, None], ctx: Union[click.Context, None]
    ) -> TripletFilter:
        """
        Converts the input value into a triplet filter.

        Args:
            value: The input value to be converted.
            param: The parameter object passed by Click.
            ctx: The context in which the parameter is being used.

        Returns:
            A filter object.

        Raises:
            click.BadParameter: If the input contains a syntax or semantic error.
        """
        try:
            return self.parser.parse(value)
        except UnexpectedInput as error:
            self.fail(f"Filter syntax error: {error.get_context(value, span=40)}.", param, ctx)
        except VisitError as error:
            self.fail(str(error.orig_exc), param, ctx)

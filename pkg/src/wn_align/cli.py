import rich_click as click

from wn_align import commands, __version__


@click.group(name="wn-align", context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(version=__version__, prog_name="wn-align")
def cli() -> None:
    """
    wn-align compares human-elicited semantic relations with the ones WordNet documents.
    """
    pass


cli.add_command(commands.parse_check)
cli.add_command(commands.generate_tasks_command)
cli.add_command(commands.classify)
cli.add_command(commands.analyze)
cli.add_command(commands.gloss)
cli.add_command(commands.report)

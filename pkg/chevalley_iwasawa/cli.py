import logging
import sys
from pathlib import Path

import click

from chevalley_iwasawa import config
from chevalley_iwasawa.errors import IwasawaError, PrecisionError, PrimeMismatchError
from chevalley_iwasawa.iwasawa import TruncatedIwasawaAlgebra, serialize_series
from chevalley_iwasawa.matrix_io import read_matrix
from chevalley_iwasawa.presenter import emit_presentation, render_json, render_plain, run_decompose
from chevalley_iwasawa.root_system import parse_cartan_type
from chevalley_iwasawa.verification import run_verify

logger = logging.getLogger(__name__)

EXIT_FAILED_CHECK = 1
EXIT_INPUT_ERROR = 2

type_option = click.option("--type", "cartan_type", required=True, help="Cartan type, e.g. A2 or G2")
prime_option = click.option("--prime", type=int, default=None, help="Odd prime p")


def _mark(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


def _fail(error: Exception):
    click.echo(f"error: {error}", err=True)
    sys.exit(EXIT_INPUT_ERROR)


@click.group()
@click.option("--log-level", default=None, help="Logging level (default from IWASAWA_LOG_LEVEL)")
def cli(log_level):
    """Presentations of the Iwasawa algebra of a Chevalley group's first congruence kernel."""
    try:
        settings = config.get_settings(log_level=log_level)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--log-level")
    logging.basicConfig(level=settings.log_level, format="%(levelname)s %(name)s: %(message)s")


@cli.command()
@type_option
@prime_option
@click.option("--precision", type=int, default=None, help="Coefficient precision m")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the document to FILE")
@click.option("--plain", is_flag=True, help="Human-readable rendering instead of JSON")
def present(cartan_type, prime, precision, out, plain):
    """Emit the generators and relations."""
    try:
        settings = config.get_settings(prime=prime, precision=precision)
        doc = emit_presentation(parse_cartan_type(cartan_type), settings.prime, settings.precision)
    except (IwasawaError, ValueError) as e:
        _fail(e)
    text = render_plain(doc) if plain else render_json(doc)
    if out:
        Path(out).write_text(text)
        counts = ", ".join(f"{family}: {k}" for family, k in doc.counts().items())
        click.echo(f"wrote {out}: {doc.metadata.generator_count} generators; {counts}")
    else:
        click.echo(text, nl=False)


@cli.command()
@type_option
@prime_option
@click.option("--degree", type=int, default=None, help="Degree bound N")
@click.option("--precision", type=int, default=None, help="Coefficient precision m")
@click.option("--seed", type=int, default=None, help="Seed of the randomized suites")
@click.option("--samples", type=int, default=20, show_default=True, help="Samples per randomized suite")
def verify(cartan_type, prime, degree, precision, seed, samples):
    """Check every relation instance and the property suites."""
    try:
        settings = config.get_settings(prime=prime, degree=degree, precision=precision, seed=seed)
        report = run_verify(
            parse_cartan_type(cartan_type),
            settings.prime,
            settings.degree,
            settings.precision,
            settings.seed,
            samples=samples,
        )
    except (IwasawaError, ValueError) as e:
        _fail(e)
    click.echo(
        f"{report.cartan_type} p={report.prime} N={report.degree} m={report.precision} "
        f"M={report.group_precision} seed={report.seed}"
    )
    for result in report.results:
        line = f"[{_mark(result.passed)}] {result.name}"
        if result.seconds is not None:
            line += f" ({result.seconds:.3f}s)"
        click.echo(line)
        if result.detail:
            click.echo(f"       {result.detail}")
    click.echo(f"{len(report.results) - len(report.failures)}/{len(report.results)} checks passed")
    if not report.passed:
        sys.exit(EXIT_FAILED_CHECK)


@cli.command()
@type_option
@prime_option
@click.option("--group-precision", type=int, default=None, help="Precision M of the matrix entries")
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True, dir_okay=False))
def decompose(cartan_type, prime, group_precision, matrix_path):
    """Triangular parameters and ordered-basis coordinates of a matrix in G(1)."""
    try:
        settings = config.get_settings(prime=prime)
        report = run_decompose(matrix_path, parse_cartan_type(cartan_type), settings.prime, group_precision)
    except (IwasawaError, ValueError) as e:
        _fail(e)
    click.echo(f"{report.cartan_type} p={report.prime} M={report.group_precision}")
    click.echo(f"omega = {report.omega}")
    click.echo(f"min valuation of parameters = {report.parameter_valuation}")
    click.echo(f"{'generator':<16} {'parameter':<24} coordinate")
    for record in report.parameters:
        click.echo(f"{record.generator:<16} {record.parameter:<24} {record.coordinate}")


@cli.command()
@type_option
@prime_option
@click.option("--degree", type=int, default=None, help="Degree bound N")
@click.option("--precision", type=int, default=None, help="Coefficient precision m")
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True, dir_okay=False))
def series(cartan_type, prime, degree, precision, matrix_path):
    """Print the truncated Dirac series of a matrix in G(1)."""
    try:
        settings = config.get_settings(prime=prime, degree=degree, precision=precision)
        algebra = TruncatedIwasawaAlgebra.build(
            parse_cartan_type(cartan_type), settings.prime, settings.degree, settings.precision
        )
        g = read_matrix(matrix_path)
        if g.p != settings.prime:
            raise PrimeMismatchError(f"matrix file is over p={g.p}, --prime is {settings.prime}")
        if g.precision < algebra.model.precision:
            raise PrecisionError(
                f"matrix precision {g.precision} below the group precision {algebra.model.precision} "
                f"needed for N={settings.degree}, m={settings.precision}",
                required=algebra.model.precision,
            )
        text = serialize_series(algebra.dirac(g.truncate(algebra.model.precision)))
    except (IwasawaError, ValueError) as e:
        _fail(e)
    click.echo(text, nl=False)

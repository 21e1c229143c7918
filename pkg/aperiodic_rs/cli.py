import click
import json
import logging
import sys
from typing import Optional

import numpy as np

from . import __version__
from .alphabet import Letter, factor_map
from .config import get_settings, load_settings, set_settings
from .errors import (
    AperiodicError,
    LevelCapError,
    NonPrimitiveError,
    NotSelfExtendingError,
    OutputError,
    RangeError,
    SignProgramError,
    SpecParseError,
    WordParseError,
)
from .io import (
    atomic_write_text,
    coefficients_csv,
    coefficients_json,
    read_coefficients,
    render_word,
    word_tokens,
    write_plot_data,
    write_report,
)
from .models import CliConfig, OutputFormat, Suite
from .recurrence import ConstructionSpec, SignProgram, coefficients
from .spectral import UnitCircleGrid, spectral_report
from .substitution import (
    construction_word,
    eigenvalues,
    fixed_point_prefix,
    legal_words,
    parse_rule,
    rule_power,
    substitution_matrix,
)

logger = logging.getLogger("aperiodic_rs")

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

USAGE_ERRORS = (SpecParseError, WordParseError, LevelCapError, RangeError, SignProgramError,
                NotSelfExtendingError, NonPrimitiveError)


def parse_spec(text: str, level: int = 0, explicit: bool = False) -> ConstructionSpec:
    """Parse `rs`, `signs:<+->...` or `fourier:<n>` into a ConstructionSpec.

    Args:
        text: The construction string.
        level: The level k.
        explicit: Treat a sign word as a finite, non-repeating program.

    Returns:
        The construction.

    Raises:
        SpecParseError: with the 1-based character position of the problem.
    """
    text = text.strip()
    if text == "rs":
        return ConstructionSpec.binary(SignProgram.periodic("+"), level)
    if text.startswith("signs:"):
        word = text[len("signs:"):]
        if not word:
            raise SpecParseError("empty sign word", len(text) + 1)
        for offset, ch in enumerate(word):
            if ch not in "+-":
                raise SpecParseError(f"expected '+' or '-', got {ch!r}", len("signs:") + offset + 1)
        program = SignProgram.explicit([1 if ch == "+" else -1 for ch in word]) if explicit \
            else SignProgram.periodic(word)
        return ConstructionSpec.binary(program, level)
    if text.startswith("fourier:"):
        digits = text[len("fourier:"):]
        if not digits.isdigit():
            raise SpecParseError(f"expected an integer order, got {digits!r}", len("fourier:") + 1)
        n = int(digits)
        if n < 2:
            raise SpecParseError(f"Fourier order must be at least 2, got {n}", len("fourier:") + 1)
        return ConstructionSpec.fourier(n, level)
    raise SpecParseError(f"unknown construction {text!r} (expected rs, signs:... or fourier:n)", 1)


def _fail_usage(error: Exception) -> None:
    raise click.UsageError(str(error))


def _emit(text: str, out: Optional[str]) -> None:
    """Write text to out atomically, or to stdout."""
    if out:
        atomic_write_text(out, text)
    else:
        click.echo(text, nl=False)


def _summary(message: str, out: Optional[str]) -> None:
    # stdout carries data when no output file is given
    if out:
        click.echo(message)
    else:
        logger.info(message)


@click.group()
@click.version_option(__version__, prog_name="aperiodic-rs")
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False),
              help="YAML or JSON settings file")
@click.option("--max-level", type=int, default=None, help="Level cap: allow up to 2**K coefficients")
@click.option("--workers", type=int, default=None, help="Worker threads")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
@click.option("-q", "--quiet", is_flag=True, help="Warnings and errors only")
@click.pass_context
def cli(ctx, config_file, max_level, workers, verbose, quiet):
    """Rudin-Shapiro style sequences: generation, substitutions, spectra, verification."""
    overrides = {"workers": workers}
    if max_level is not None:
        overrides["max_level_terms"] = 2 ** max_level
    try:
        settings = load_settings(config_file, **overrides)
    except (ValueError, OSError) as e:
        raise click.UsageError(f"invalid configuration: {e}")
    level = "DEBUG" if verbose else "WARNING" if quiet else settings.log_level
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT, stream=sys.stderr)
    set_settings(settings)
    ctx.obj = settings


@cli.command()
@click.option("--construction", required=True, help="rs | signs:+-... | fourier:n")
@click.option("--k", "level", type=int, required=True, help="Level k (n**k coefficients)")
@click.option("--component", type=int, default=1, show_default=True, help="Component j of the state")
@click.option("--format", "output_format", type=click.Choice([f.value for f in OutputFormat]),
              default=OutputFormat.CSV.value, show_default=True)
@click.option("--explicit", is_flag=True, help="Use the sign word once instead of repeating it")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (stdout if omitted)")
def gen(construction, level, component, output_format, explicit, out):
    """Generate the coefficients of a construction at level k."""
    config = CliConfig(subcommand="gen", construction=construction, level=level,
                       out=out, output_format=output_format)
    try:
        if level < 0:
            raise RangeError(f"level must be non-negative, got {level}")
        spec = parse_spec(config.construction, config.level, explicit)
        eps = coefficients(spec, component)
        if config.output_format == OutputFormat.CSV:
            text = coefficients_csv(eps)
        elif config.output_format == OutputFormat.JSON:
            text = coefficients_json(eps, spec.text())
        else:
            text = word_tokens(construction_word(spec, component))
        _emit(text, config.out)
    except USAGE_ERRORS as e:
        _fail_usage(e)
    except OutputError as e:
        logger.error(str(e))
        sys.exit(1)
    _summary(f"gen {spec.echo()}: {len(eps)} coefficients of component {component}", config.out)


@cli.command()
@click.option("--rule", "rule_text", required=True, help="s_plus | s_minus | signs:+-... | fourier:n")
@click.option("--show", type=click.Choice(["rule", "matrix", "eigenvalues", "fixedpoint", "legal"]),
              default="rule", show_default=True)
@click.option("--length", type=int, default=16, show_default=True, help="Fixed-point prefix length")
@click.option("--form", type=click.Choice(["tokens", "pretty", "json", "csv"]), default="tokens",
              show_default=True, help="Rendering of fixed points and legal words")
@click.option("--power", type=int, default=1, show_default=True, help="Use the m-fold composition")
@click.option("--ell", type=int, default=4, show_default=True, help="Legal word length")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def subst(rule_text, show, length, form, power, ell, out):
    """Inspect a substitution rule."""
    try:
        rule = rule_power(parse_rule(rule_text), power)
        if show == "rule":
            text = "\n".join(rule.describe()) + "\n"
        elif show == "matrix":
            text = substitution_matrix(rule).to_csv()
        elif show == "eigenvalues":
            values = eigenvalues(substitution_matrix(rule))
            text = json.dumps([{"re": z.real, "im": z.imag} for z in values]) + "\n"
        elif show == "fixedpoint":
            word = fixed_point_prefix(rule, Letter(base=0, bars=0, order=rule.order), length)
            text = coefficients_csv(factor_map(word)) if form == "csv" else render_word(word, form) + "\n"
        else:
            words = sorted(legal_words(rule, ell))
            text = "".join(render_word(w, "tokens" if form == "csv" else form) + "\n" for w in words)
        _emit(text, out)
    except USAGE_ERRORS as e:
        _fail_usage(e)
    except OutputError as e:
        logger.error(str(e))
        sys.exit(1)
    _summary(f"subst {rule.name}: {show}", out)


@cli.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Coefficient file (CSV or JSON) written by gen")
@click.option("--order", type=int, default=None, help="Root-of-unity order of --input values")
@click.option("--construction", default=None, help="rs | signs:+-... | fourier:n")
@click.option("--k", "level", type=int, default=None, help="Level of --construction")
@click.option("--N", "N", type=int, default=None, help="Number of terms (default: all)")
@click.option("--grid", "grid_size", type=int, default=None, help="Grid size M")
@click.option("--max-lag", type=int, default=None, help="Largest autocorrelation lag")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Report JSON path")
@click.option("--emit-plot-data", "plot_dir", type=click.Path(file_okay=False), default=None,
              help="Directory for periodogram.dat, autocorr.dat and supnorm.dat")
@click.pass_obj
def spectrum(settings, input_path, order, construction, level, N, grid_size, max_lag, out, plot_dir):
    """Spectral report of a coefficient sequence."""
    if (input_path is None) == (construction is None):
        raise click.UsageError("give exactly one of --input and --construction")
    settings = settings or get_settings()
    config = CliConfig(subcommand="spectrum", construction=construction, level=level,
                       grid_size=settings.grid_size if grid_size is None else grid_size,
                       max_lag=settings.max_lag if max_lag is None else max_lag,
                       out=out, plot_dir=plot_dir)
    spec = None
    try:
        if construction is not None:
            if config.level is None:
                raise click.UsageError("--construction needs --k")
            spec = parse_spec(construction, config.level)
            eps = coefficients(spec)
        else:
            eps = read_coefficients(input_path, order)
        if N is None:
            N = len(eps)
        if not 1 <= N <= len(eps):
            raise RangeError(f"--N {N} outside 1..{len(eps)}")
        grid = UnitCircleGrid(size=config.grid_size)
        report = spectral_report(eps, N, grid, config.max_lag, spec)
        report.metadata.version = __version__
        if config.out:
            write_report(config.out, report)
        else:
            click.echo(report.model_dump_json(indent=2, by_alias=True))
        if config.plot_dir:
            ratios = [(int(m), r) for m, r in report.root_n_profile]
            write_plot_data(config.plot_dir, np.array(report.periodogram),
                            np.array(report.autocorrelation_re) + 1j * np.array(report.autocorrelation_im),
                            ratios)
    except USAGE_ERRORS as e:
        _fail_usage(e)
    except ValueError as e:
        _fail_usage(e)
    except OutputError as e:
        logger.error(str(e))
        sys.exit(1)
    failed = [v.name for v in report.bound_verdicts if not v.passed]
    _summary(
        f"spectrum N={N} M={grid.size}: sup|S_N|={report.sup_abs:.6g}, "
        f"C_max={report.root_n_constant:.6g}, bounds {'ok' if not failed else 'violated: ' + ','.join(failed)}",
        config.out,
    )


@cli.command()
@click.option("--suite", type=click.Choice([s.value for s in Suite]), default=Suite.DEFAULT.value,
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Report JSON path")
@click.pass_obj
def verify(settings, suite, out):
    """Run the verification suite; exit status 0 iff every check passes."""
    from .verify import run_suite

    report = run_suite(Suite(suite), settings or get_settings())
    if out:
        try:
            write_report(out, report)
        except OutputError as e:
            logger.error(str(e))
            sys.exit(1)
    passed = len(report.checks) - len(report.failures())
    click.echo(f"verify {suite}: {passed}/{len(report.checks)} checks passed ({report.overall.value})")
    for entry in report.failures():
        logger.error(f"{entry.name}: {entry.status.value} (measured {entry.measured}, expected {entry.expected})")
    if not report.passed:
        sys.exit(1)


def main():
    """Main entry point for the CLI."""
    try:
        cli()
    except AperiodicError as e:
        logger.error(str(e))
        sys.exit(1)


if __name__ == "__main__":
    main()

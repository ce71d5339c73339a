import os
from typing import Optional

import click
import rollbar

from automata import AutomatonError
from automata.omega import BuchiAutomaton, Dfa, Nfa
from generators.pomset_diagrams import PomsetDiagram
from interfaces import FormatError, format_word, parse_lasso, parse_word
from interfaces.alphabets import read_alphabet
from interfaces.asynchronous import read_async_automaton, write_async_automaton
from interfaces.automata import read_automaton, write_automaton
from interfaces.monitors import read_monitor, write_monitor
from interfaces.reports import (
    brute_force_text,
    mon_report_text,
    reduction_text,
    run_report_text,
)
from monitoring import MonitoringError
from monitoring.closure import classify_locally_safety, failing_prime_prefix, in_closure
from monitoring.gamma import (
    is_gamma_infinite_lasso,
    lasso_in_gamma_language,
    muller_to_buchi,
)
from monitoring.monitorability import (
    brute_force_local_monitorable,
    decide_family_local_monitorable,
    decide_local_monitorable,
    decide_word_monitorable,
    gadget_from_nfa,
    reduce_disconnected,
)
from monitoring.runtime import ScriptedSchedule, random_schedule, simulate
from monitoring.synthesis import synthesize_monitor
from traces import TraceError, trace_of_word

ROLLBAR_ACCESS_TOKEN = os.environ.get("ROLLBAR_ACCESS_TOKEN")
ROLLBAR_ENVIRONMENT = os.environ.get("ROLLBAR_ENVIRONMENT", "development")

DOMAIN_ERRORS = (TraceError, AutomatonError, MonitoringError, FormatError)

EXIT_MONITORABLE = 0
EXIT_NOT_MONITORABLE = 1
EXIT_ERROR = 2


class ReportingGroup(click.Group):
    """Domain errors become a red message and exit code 2; anything else is
    sent to rollbar (when configured) and re-raised."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except DOMAIN_ERRORS as error:
            click.echo(click.style(str(error), fg="red"), err=True)
            ctx.exit(EXIT_ERROR)
        except Exception:
            if ROLLBAR_ACCESS_TOKEN:
                rollbar.report_exc_info()
            raise


def _gamma(values: tuple[str, ...]) -> list[str]:
    return [p for value in values for p in value.replace(",", " ").split()]


def _verdict_exit(ctx: click.Context, verdict: bool) -> None:
    ctx.exit(EXIT_MONITORABLE if verdict else EXIT_NOT_MONITORABLE)


def _emit(text: str, out: Optional[str] = None) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    with open(out, "w", encoding="utf-8") as handle:
        handle.write(text)
    click.echo(click.style("Wrote {}".format(out), fg="green"), err=True)


@click.group(cls=ReportingGroup)
def cli():
    if ROLLBAR_ACCESS_TOKEN:
        rollbar.init(ROLLBAR_ACCESS_TOKEN, ROLLBAR_ENVIRONMENT)


@cli.command()
@click.option("--lang", "lang_path", required=True, type=click.Path(exists=True))
@click.option("--alph", "alph_path", required=True, type=click.Path(exists=True))
@click.option("--word", default="", help="Letters, e.g. 'cbad' or 'c b a d'.")
def closure(lang_path, alph_path, word):
    """Membership of the trace of WORD in the prime closure of L."""
    alphabet = read_alphabet(alph_path)
    automaton = read_automaton(lang_path, BuchiAutomaton, letters=alphabet.letters)
    trace = trace_of_word(alphabet, parse_word(word))

    member = in_closure(automaton, trace)
    failing = failing_prime_prefix(automaton, trace)
    click.echo(
        "member={} failing_prime={}".format(
            str(member).lower(),
            format_word(failing.normal_form) if failing is not None else "none",
        )
    )


@cli.command("check-local-mon")
@click.option("--lang", "lang_path", required=True, type=click.Path(exists=True))
@click.option("--alph", "alph_path", required=True, type=click.Path(exists=True))
@click.option(
    "--brute",
    nargs=3,
    type=int,
    default=None,
    help="Cross-check with the bounded search: K1 K2 DEPTH.",
)
@click.option("--no-validate", is_flag=True, help="Skip the trace-closedness check.")
@click.option(
    "--reduce", "reduce", is_flag=True, help="Report the two-component reduction."
)
@click.pass_context
def check_local_mon(ctx, lang_path, alph_path, brute, no_validate, reduce):
    alphabet = read_alphabet(alph_path)
    automaton = read_automaton(lang_path, BuchiAutomaton, letters=alphabet.letters)

    report = decide_local_monitorable(automaton, alphabet, validate=not no_validate)
    click.echo(mon_report_text(report), nl=False)

    if brute:
        k1, k2, depth = brute
        click.echo(
            brute_force_text(
                brute_force_local_monitorable(automaton, alphabet, k1, k2, depth)
            ),
            nl=False,
        )
    if reduce:
        click.echo(reduction_text(reduce_disconnected(automaton, alphabet)), nl=False)

    _verdict_exit(ctx, report.verdict)


@cli.command("family-mon")
@click.option(
    "--lang", "lang_paths", required=True, multiple=True, type=click.Path(exists=True)
)
@click.option("--alph", "alph_path", required=True, type=click.Path(exists=True))
@click.pass_context
def family_mon(ctx, lang_paths, alph_path):
    """Local monitorability of a family of languages over a connected alphabet."""
    alphabet = read_alphabet(alph_path)
    family = [
        read_automaton(path, BuchiAutomaton, letters=alphabet.letters)
        for path in lang_paths
    ]
    report = decide_family_local_monitorable(family, alphabet)
    click.echo(mon_report_text(report), nl=False)
    _verdict_exit(ctx, report.verdict)


@cli.command("word-mon")
@click.option("--buchi", "buchi_path", required=True, type=click.Path(exists=True))
@click.pass_context
def word_mon(ctx, buchi_path):
    report = decide_word_monitorable(read_automaton(buchi_path, BuchiAutomaton))
    click.echo(mon_report_text(report), nl=False)
    _verdict_exit(ctx, report.verdict)


@cli.command()
@click.option("--nfa", "nfa_path", required=True, type=click.Path(exists=True))
@click.option("-o", "--out", required=True, type=click.Path())
@click.option("--separator", default="b", show_default=True)
def gadget(nfa_path, out, separator):
    """Büchi automaton that is monitorable iff the NFA is universal."""
    automaton = gadget_from_nfa(read_automaton(nfa_path, Nfa), separator=separator)
    write_automaton(automaton, out)
    click.echo(click.style("Wrote {}".format(out), fg="green"))


@cli.command()
@click.option("--lang", "lang_path", required=True, type=click.Path(exists=True))
@click.option("--colang", "colang_path", type=click.Path(exists=True))
@click.option("--complement", is_flag=True, help="Compute the complement of L.")
@click.option("--alph", "alph_path", required=True, type=click.Path(exists=True))
@click.option("-o", "--out", required=True, type=click.Path())
@click.option("--no-validate", is_flag=True)
def synthesize(lang_path, colang_path, complement, alph_path, out, no_validate):
    if bool(colang_path) == complement:
        raise click.UsageError("Give exactly one of --colang and --complement")

    alphabet = read_alphabet(alph_path)
    automaton = read_automaton(lang_path, BuchiAutomaton, letters=alphabet.letters)
    coautomaton = None
    if colang_path:
        coautomaton = read_automaton(
            colang_path, BuchiAutomaton, letters=alphabet.letters
        )

    monitor = synthesize_monitor(
        automaton, coautomaton, alphabet, validate=not no_validate
    )
    table = monitor.materialize()
    write_monitor(table, out)
    click.echo(
        click.style("Wrote {} ({} states)".format(out, len(table)), fg="green")
    )


@cli.command("simulate")
@click.option("--system", "system_path", required=True, type=click.Path(exists=True))
@click.option("--alph", "alph_path", required=True, type=click.Path(exists=True))
@click.option("--monitor", "monitor_path", type=click.Path(exists=True))
@click.option("--script", default=None)
@click.option("--random", "use_random", is_flag=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--steps", default=100, show_default=True, type=int)
@click.option("--out", type=click.Path())
def simulate_command(
    system_path, alph_path, monitor_path, script, use_random, seed, steps, out
):
    if (script is None) == (not use_random):
        raise click.UsageError("Give exactly one of --script and --random")

    alphabet = read_alphabet(alph_path)
    system, _ = read_async_automaton(system_path, alphabet)
    monitor = read_monitor(monitor_path) if monitor_path else None

    if use_random:
        schedule = random_schedule(seed, steps)
    else:
        schedule = ScriptedSchedule(parse_word(script))

    report = simulate(system, monitor, schedule, seed, steps)
    if report.deadlocked:
        click.echo(
            click.style(
                "Run deadlocked after {} events".format(len(report.events)),
                fg="yellow",
            ),
            err=True,
        )
    _emit(run_report_text(report, system), out)


@cli.command()
@click.option("--dfa", "dfa_path", required=True, type=click.Path(exists=True))
@click.option("--omega", "omega_path", type=click.Path(exists=True))
@click.option("--alph", "alph_path", required=True, type=click.Path(exists=True))
@click.pass_context
def classify(ctx, dfa_path, omega_path, alph_path):
    """Is the finite-word language of the DFA a locally safety language?"""
    alphabet = read_alphabet(alph_path)
    dfa = read_automaton(dfa_path, Dfa, letters=alphabet.letters)
    omega = (
        read_automaton(omega_path, BuchiAutomaton, letters=alphabet.letters)
        if omega_path
        else None
    )

    report = classify_locally_safety(dfa, omega, alphabet)
    violation = "none"
    if report.violation is not None:
        u, a, b = report.violation
        violation = "{}|{}|{}".format(format_word(u), a, b)
    click.echo(
        "prefix_closed={} forward_diamond={} omega_safety={} locally_safety={} "
        "violation={}".format(
            str(report.prefix_closed).lower(),
            str(report.forward_diamond).lower(),
            "none" if report.omega_safety is None else str(report.omega_safety).lower(),
            str(report.locally_safety).lower(),
            violation,
        )
    )
    _verdict_exit(ctx, report.locally_safety)


@cli.command("draw-trace")
@click.option("--alph", "alph_path", required=True, type=click.Path(exists=True))
@click.option("--word", required=True)
def draw_trace(alph_path, word):
    alphabet = read_alphabet(alph_path)
    diagram = PomsetDiagram(trace_of_word(alphabet, parse_word(word)))
    path = diagram.generate()
    click.echo(click.style("Generated {}".format(path), fg="green"))


@cli.group()
def gamma():
    """Traces where the processes of a set act infinitely often."""


@gamma.command("check")
@click.option("--alph", "alph_path", required=True, type=click.Path(exists=True))
@click.option(
    "--gamma", "gamma_values", required=True, multiple=True, help="e.g. 'q r'."
)
@click.option("--lasso", required=True, help="u|v")
@click.option("--aa", "aa_path", type=click.Path(exists=True))
def gamma_check(alph_path, gamma_values, lasso, aa_path):
    alphabet = read_alphabet(alph_path)
    u, v = parse_lasso(lasso)
    processes = _gamma(gamma_values)

    line = "gamma_infinite={}".format(
        str(is_gamma_infinite_lasso(alphabet, processes, u, v)).lower()
    )
    if aa_path:
        automaton, condition = read_async_automaton(aa_path, alphabet)
        if condition is None:
            raise FormatError("Automaton has no acceptance block", aa_path)
        line += " accepted={}".format(
            str(lasso_in_gamma_language(automaton, condition, u, v)).lower()
        )
    click.echo(line)


@gamma.command("convert")
@click.option("--aa", "aa_path", required=True, type=click.Path(exists=True))
@click.option("--alph", "alph_path", type=click.Path(exists=True))
@click.option("--bound", default=64, show_default=True, type=int)
@click.option("-o", "--out", required=True, type=click.Path())
@click.option("--single-tuple", is_flag=True)
@click.option("--strict", is_flag=True, help="Refuse instead of warning.")
def gamma_convert(aa_path, alph_path, bound, out, single_tuple, strict):
    """Rewrite a Muller acceptance block as a Büchi one."""
    alphabet = read_alphabet(alph_path) if alph_path else None
    automaton, condition = read_async_automaton(aa_path, alphabet)
    if condition is None:
        raise FormatError("Automaton has no acceptance block", aa_path)

    conversion = muller_to_buchi(
        automaton, condition, bound, single_tuple=single_tuple, strict=strict
    )
    for target in conversion.dropped:
        click.echo(
            click.style(
                "Dropped target without witness: {}".format(
                    " ".join(
                        "{}:{{{}}}".format(p, ",".join(sorted(s))) for p, s in target
                    )
                ),
                fg="yellow",
            ),
            err=True,
        )
    write_async_automaton(conversion.automaton, out, conversion.condition)
    click.echo(click.style("Wrote {}".format(out), fg="green"))


if __name__ == "__main__":
    cli()

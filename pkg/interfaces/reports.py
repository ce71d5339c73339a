import os

from jinja2 import Environment, FileSystemLoader

from interfaces import format_word

TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "templates")

environment = Environment(
    loader=FileSystemLoader(TEMPLATE_DIR),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)
environment.filters["word"] = format_word


def render(template: str, **context) -> str:
    return environment.get_template(template).render(**context)


def mon_report_text(report) -> str:
    return render(
        "mon_report.j2",
        verdict=str(report.verdict).lower(),
        witness=report.witness,
        good_letters=",".join(sorted(report.good_letters)),
    )


def brute_force_text(report) -> str:
    return render(
        "brute_force.j2", outcome=report.outcome.value, witness=report.witness
    )


def reduction_text(report) -> str:
    return render(
        "reduction.j2",
        case=report.case.value,
        components=[",".join(sorted(c)) for c in report.components],
        claim=report.claim,
        witnesses=report.witnesses,
    )


def run_report_text(report, system) -> str:
    events = [
        {
            "index": event.index,
            "letter": event.letter,
            "procs": ",".join(event.participants),
            "vclock": " ".join("{}={}".format(p, c) for p, c in event.vclock),
            "verdict": event.verdict.value,
        }
        for event in report.events
    ]
    decided = dict(report.decided_at)
    processes = [
        {
            "name": process,
            "verdict": verdict.name,
            "at": " at={}".format(decided[process]) if process in decided else "",
        }
        for process, verdict in report.verdicts
    ]
    return render(
        "run_report.j2",
        seed=report.seed,
        schedule=report.schedule,
        events=events,
        final_state=system.describe_state(report.final_state),
        deadlocked=report.deadlocked,
        processes=processes,
    )

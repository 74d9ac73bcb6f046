"""Bundled example programs, used by the stats command and the test suite."""

from __future__ import annotations

from importlib import resources

FIXTURE_NAMES = (
    "split",
    "append",
    "nrev",
    "quicksort",
    "member",
    "reverse",
    "length",
)


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError("no bundled fixture named %r" % name)
    return (
        resources.files(__package__).joinpath(name + ".pl").read_text("utf-8")
    )


def load_fixture(name: str):
    from ..syntax import parse_program

    return parse_program(fixture_text(name), name=name)

"""Parse-failure taxonomy: one fixture per category plus rule unit tests."""

from pathlib import Path

import pytest

from ranatomy.syntax import classify_parse_failure, parse

FAILURE_FIXTURES = Path(__file__).parent / "fixtures" / "failures"


def classify(source):
    outcome = parse(source)
    assert outcome.ok is None, "fixture unexpectedly parsed"
    return classify_parse_failure(source, outcome.failure)


@pytest.mark.parametrize(
    "fixture,category",
    [
        ("doc_command.R", "DocumentationCommand"),
        ("encoding_confusable.R", "EncodingError"),
        ("not_r_code.R", "NotRCode"),
        ("syntax_error.R", "RawSyntaxError"),
    ],
)
def test_fixture_taxonomy(fixture, category):
    data = (FAILURE_FIXTURES / fixture).read_bytes()
    assert classify(data).category == category


@pytest.mark.parametrize("marker", ["\\dontrun", "\\donttest", "\\dontshow"])
def test_documentation_markers_win(marker):
    source = marker + "{\nplot(x\n}\n"
    assert classify(source).category == "DocumentationCommand"


def test_documentation_marker_after_error_does_not_count():
    # Marker appears only beyond the error span, so it cannot explain it.
    source = "x <- * 2\n# \\dontrun later\n"
    record = classify(source)
    assert record.line == 1
    assert record.category != "DocumentationCommand"


@pytest.mark.parametrize(
    "bad",
    ["y ＝ 2", "s <- “quoted”", "x − 1", "a <- 1"],
)
def test_confusable_characters_mark_encoding(bad):
    assert classify("ok <- 1\n" + bad + "\n").category == "EncodingError"


def test_invalid_utf8_bytes_mark_encoding():
    source = b"x <- 1\ny <- \xff\xfe\n"
    assert classify(source).category == "EncodingError"


def test_foreign_code_detected():
    source = (
        "import os\n"
        "class Thing:\n"
        "    pass\n"
        "thing = Thing()\n"
        "print thing ??\n"
    )
    assert classify(source).category == "NotRCode"


def test_mostly_r_file_is_plain_syntax_error():
    source = (
        "x <- 1\n"
        "y <- f(x)\n"
        "z <- x + y\n"
        "if (z > 1) print(z)\n"
        "w <- ((\n"
    )
    assert classify(source).category == "RawSyntaxError"


def test_threshold_is_strictly_under_twenty_percent():
    # The string-literal body lines parse in context but look nothing like R,
    # so they count against the plausibility ratio without moving the error.
    # One plausible line out of five sits exactly at 20%: not foreign.
    at_boundary = 'x <- 1\ns = "\ndruid shard\nqof qwerty\n"\n* boom\n'
    assert classify(at_boundary).category == "RawSyntaxError"
    # One out of six falls under the threshold: foreign.
    below = 'x <- 1\ns = "\ndruid shard\nqof qwerty\nzzz materia\n"\n* boom\n'
    assert classify(below).category == "NotRCode"


def test_classification_keeps_location_and_message():
    record = classify("f <- function(x) {\n  x + * 2\n}\n")
    assert record.line == 2
    assert record.message
    assert record.span[0] <= record.span[1]

from dataclasses import dataclass
from pathlib import Path

import pytest

from infodemic.core import load_gazetteer_entries, load_source_lists, load_vaccine_records
from infodemic.credibility import SourceClassifier, load_redirect_map
from infodemic.geolocate import build_gazetteer
from infodemic.ingest import load_keywords
from infodemic.pipeline import Inputs, ingest_posts, run_pipeline

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


@dataclass
class Corpus:
    posts: list
    classified: list
    low: object
    high: object
    redirects: dict
    gazetteer: object
    doses: list


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_report():
    return run_pipeline(Inputs.from_fixture_dir(FIXTURES))


@pytest.fixture(scope="session")
def corpus() -> Corpus:
    inputs = Inputs.from_fixture_dir(FIXTURES)
    posts, _ = ingest_posts(inputs, load_keywords(inputs.keywords))
    low, high = load_source_lists(inputs.low, inputs.high)
    redirects = load_redirect_map(inputs.redirects)
    classified = SourceClassifier(low, high, redirects).classify_posts(posts)
    return Corpus(
        posts=posts,
        classified=classified,
        low=low,
        high=high,
        redirects=redirects,
        gazetteer=build_gazetteer(load_gazetteer_entries(inputs.gazetteer)),
        doses=load_vaccine_records(inputs.doses),
    )


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)

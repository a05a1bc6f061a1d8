from pathlib import Path

import pytest

from pcv.domain import load_domain
from pcv.spl import parse_spl
from pcv.wpdl import parse_workflow

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


@pytest.fixture(scope="session")
def private():
    return parse_spl((CORPUS / "private.spl").read_text())


@pytest.fixture(scope="session")
def budget_wf():
    return parse_workflow((CORPUS / "budget.wf").read_text())


@pytest.fixture(scope="session")
def budget_domain():
    return load_domain(CORPUS / "budget.dom")


@pytest.fixture(scope="session")
def goal_prog():
    from pcv.goals import goal_program

    return goal_program()

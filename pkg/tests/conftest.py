import pytest

from fedcard.fixtures import (
    fig_example_store,
    toy1_store,
    toy2_triples,
    toy_stores,
)
from fedcard.ntriples import iri
from fedcard.query import TriplePattern, Var
from fedcard.store import build_store
from fedcard.summaries import build_all

TOY = "http://example.org/toy/"


def toy_iri(name: str):
    return iri(TOY + name)


def tp(s, p, o, ordinal=0) -> TriplePattern:
    """Shorthand: strings starting with '?' become variables, else toy IRIs."""

    def slot(v):
        return Var(v[1:]) if isinstance(v, str) and v.startswith("?") else toy_iri(v)

    return TriplePattern(slot(s), slot(p), slot(o), ordinal=ordinal)


@pytest.fixture(scope="session")
def toy1():
    return toy1_store()


@pytest.fixture(scope="session")
def toy1_summaries(toy1):
    return build_all([toy1])


@pytest.fixture(scope="session")
def toy_ab():
    """toy1 as source A plus a single-triple source B sharing predicate q."""
    return toy_stores()


@pytest.fixture(scope="session")
def toy_ab_summaries(toy_ab):
    return build_all(toy_ab)


@pytest.fixture(scope="session")
def toy2():
    return build_store("A", toy2_triples())


@pytest.fixture(scope="session")
def toy2_summaries(toy2):
    return build_all([toy2])


@pytest.fixture(scope="session")
def fig_store():
    return fig_example_store()


@pytest.fixture(scope="session")
def fig_summaries(fig_store):
    return build_all([fig_store])

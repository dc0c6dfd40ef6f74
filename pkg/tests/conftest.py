import pytest

from classical_w.lie_core import build_spec

SUITE = [("A", 1), ("A", 2), ("A", 3), ("B", 1), ("B", 2), ("C", 1), ("C", 2), ("D", 2), ("D", 3), ("G2", 2)]


def suite_ids():
    return [kind if kind == "G2" else f"{kind}{n}" for kind, n in SUITE]


@pytest.fixture
def gl2():
    return build_spec("A", 2)


@pytest.fixture
def g2():
    return build_spec("G2")


@pytest.fixture(params=SUITE, ids=suite_ids())
def suite_spec(request):
    kind, n = request.param
    return build_spec(kind, n)

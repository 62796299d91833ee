import pytest

from wrpcodes.field import make_field
from wrpcodes.plateaued import classify, eval_descriptor
from wrpcodes.search import SearchSpec, search


class Pair:
    def __init__(self, spec, f_desc, g_desc):
        self.spec = spec
        self.f = eval_descriptor(spec, f_desc)
        self.g = eval_descriptor(spec, g_desc)
        self.pf = classify(self.f)
        self.pg = classify(self.g)


@pytest.fixture(scope="session")
def F25():
    return make_field(5, 2)


@pytest.fixture(scope="session")
def F125():
    return make_field(5, 3, theta=10)


@pytest.fixture(scope="session")
def small_pair(F25):
    """F_25: Tr(x^2) with Tr(theta y^2 - theta y^6)."""
    return Pair(F25, [("t^0", 2)], [("t^1", 2), ("-t^1", 6)])


@pytest.fixture(scope="session")
def cubic_pair(F125):
    """F_125 (theta = 2x): Tr(x^6 + x^2) with Tr(theta y^6 + theta^3 y^2)."""
    return Pair(F125, [(1, 6), (1, 2)], [("t^1", 6), ("t^3", 2)])


@pytest.fixture(scope="session")
def quartic_pair():
    F = make_field(5, 4)
    return Pair(F, [(1, 6)], [(1, 26), (-1, 2)])


@pytest.fixture(scope="session")
def quad_hits_m2(F25):
    return search(SearchSpec(F25, [(2, "all"), (6, "all")], target="WRP")).hits


@pytest.fixture(scope="session")
def index4_hits_m2(F25):
    return search(SearchSpec(F25, [(4, "all"), (8, "all"), (12, "prime")], target="WRP",
                             constraints={"l": 4})).hits


@pytest.fixture(scope="session")
def quad_hits_m3():
    return search(SearchSpec(make_field(5, 3), [(2, "all"), (6, "all")], target="WRP")).hits

import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

import oracle  # noqa: E402
from frobkit.modules import FiniteModule  # noqa: E402
from frobkit.rings import make_quotient_ring, make_ring_map  # noqa: E402

SUITE_BUDGET_SECONDS = 300
_criteria: dict = {}
_started = time.perf_counter()


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None or (report.when != "call" and report.passed):
        return
    _criteria[marker] = _criteria.get(marker, True) and report.passed


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    elapsed = time.perf_counter() - _started
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if _criteria[n] else 'FAIL'}")
    within = elapsed <= SUITE_BUDGET_SECONDS
    terminalreporter.write_line(f"suite runtime {elapsed:.1f} s "
                                f"(budget {SUITE_BUDGET_SECONDS} s): {'PASS' if within else 'FAIL'}")


def pytest_sessionfinish(session, exitstatus):
    if _criteria and time.perf_counter() - _started > SUITE_BUDGET_SECONDS and exitstatus == 0:
        session.exitstatus = 1


# Artinian rings checked against the oracle: (label, p, variables, ideal generators).
ARTINIAN_CORPUS = [
    ("hypersurface x2", 2, ["x"], ["x^2"]),
    ("hypersurface x2 char 3", 3, ["x"], ["x^2"]),
    ("hypersurface x3", 2, ["x"], ["x^3"]),
    ("golod m2", 2, ["x", "y"], ["x^2", "x*y", "y^2"]),
    ("golod m2 char 3", 3, ["x", "y"], ["x^2", "x*y", "y^2"]),
    ("ci x2 y2", 2, ["x", "y"], ["x^2", "y^2"]),
    ("ci x2 y3", 3, ["x", "y"], ["x^2", "y^3"]),
    ("weighted ci", 2, ["x:1", "y:2"], ["x^4", "y^2"]),
    ("gorenstein codim 3", 2, ["a", "b", "c"], ["a*b", "a*c", "b*c", "a^2+b^2", "b^2+c^2"]),
    ("artinian 3 vars", 2, ["x", "y", "z"], ["x^2", "y^2", "z^2", "x*y*z"]),
    ("monomial mixed", 3, ["x", "y"], ["x^3", "x*y^2", "y^3"]),
]


def build_ring(p, variables, gens):
    return make_quotient_ring(p, variables, gens)


def oracle_ring(p, variables, gens):
    """The same ring for the oracle, built from the raw generators."""
    R = build_ring(p, variables, [])
    return oracle.OracleRing(p, R.weights, [R.P(g).as_dict() for g in gens])


@pytest.fixture(params=ARTINIAN_CORPUS, ids=[c[0] for c in ARTINIAN_CORPUS])
def corpus_ring(request):
    _, p, variables, gens = request.param
    return build_ring(p, variables, gens), oracle_ring(p, variables, gens)


@pytest.fixture
def golod():
    return make_quotient_ring(2, ["x", "y"], ["x^2", "x*y", "y^2"])


@pytest.fixture
def hypersurface():
    return make_quotient_ring(2, ["x"], ["x^2"])


def canonical_maps():
    """The inclusion, the squaring map u -> v^2, and a map with the Golod fiber."""
    R1 = make_quotient_ring(2, ["u"])
    S1 = make_quotient_ring(2, ["u", "v"])
    R2 = make_quotient_ring(2, ["u:2"])
    S2 = make_quotient_ring(2, ["v:1"])
    R3 = make_quotient_ring(2, ["u"])
    S3 = make_quotient_ring(2, ["u", "a", "b"], ["a^2", "a*b", "b^2"])
    return [make_ring_map(R1, S1, ["u"]), make_ring_map(R2, S2, ["v^2"]),
            make_ring_map(R3, S3, ["u"])]


def gorenstein_map():
    R = make_quotient_ring(2, ["u"])
    S = make_quotient_ring(2, ["u", "a", "b", "c"],
                           ["a*b", "a*c", "b*c", "a^2+b^2", "b^2+c^2"])
    return make_ring_map(R, S, ["u"])


def residue(ring):
    return FiniteModule.residue_field(ring)

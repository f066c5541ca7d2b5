import time

import pytest

from ruvoa import cwlattice


@pytest.fixture(scope="session")
def lattice():
    t = time.time()
    L = cwlattice.build_lattice(check=False)
    L.build_seconds = time.time() - t
    return L


@pytest.fixture(scope="session")
def minimal_vectors(lattice, tmp_path_factory):
    """Full enumeration of the norm-4 vectors, once per session.  A worker
    count from RUVOA_WORKERS is honoured."""
    ckpt = tmp_path_factory.mktemp("enum") / "ckpt.json"
    t = time.time()
    V = cwlattice.enumerate_minimal(lattice, workers=cwlattice.default_workers(), checkpoint=str(ckpt))
    minimal_vectors.seconds = time.time() - t
    minimal_vectors.checkpoint = str(ckpt)
    return V


@pytest.fixture(scope="session")
def delta(minimal_vectors):
    return cwlattice.build_delta(minimal_vectors)


ACCEPTANCE = []


def record(name, ok, detail=""):
    """One PASS/FAIL line per acceptance criterion, repeated in the summary."""
    line = "%s: %s%s" % ("PASS" if ok else "FAIL", name, "  (%s)" % detail if detail else "")
    print(line)
    ACCEPTANCE.append(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


def pytest_collection_modifyitems(items):
    # anything touching the full lattice is slow
    heavy = {"lattice", "minimal_vectors", "delta"}
    for item in items:
        if heavy & set(getattr(item, "fixturenames", ())):
            item.add_marker(pytest.mark.slow)

from fractions import Fraction

import pytest

import nbg_toolkit.closed_forms as cf
import nbg_toolkit.worked_examples as we
from nbg_toolkit.kernel_structure import Digraph


@pytest.fixture(scope="session")
def dilemma():
    return we.dilemmaGame()


@pytest.fixture(scope="session")
def path6Quarter():
    return cf.makeFamily(cf.PATH, Fraction(1, 4), 1, n=6)


@pytest.fixture(scope="session")
def anarchy2():
    return we.anarchyGame(2)


@pytest.fixture(scope="session")
def braessHalf():
    return we.braessGame(Fraction(1, 2))


@pytest.fixture(scope="session")
def triangle():
    return we.directedTriangle()


@pytest.fixture(scope="session")
def singleArc():
    return Digraph(2, frozenset({(1, 2)}))


# Keep generated games out of the real user data directory
@pytest.fixture
def dataDir(tmp_path, monkeypatch):
    import nbg_toolkit.cli as cli
    import nbg_toolkit.storage as storage

    gamesDir = tmp_path / "games"
    monkeypatch.setattr(storage, "G_GAMES_DIR", gamesDir)
    monkeypatch.setattr(cli, "G_GAMES_DIR", gamesDir)
    return gamesDir

import pytest

from dominance_lab import builtin_game


@pytest.fixture(scope="session")
def g1():
    """2x1 game: row A beats row B against the lone column X."""
    return builtin_game("section3")


@pytest.fixture(scope="session")
def g2():
    """4x3 game whose pure and mixed weak eliminations end in different places."""
    return builtin_game("example41")

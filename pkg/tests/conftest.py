import random
import sys
from fractions import Fraction

import pytest

from mppa.ncalg import NCElement, Presentation
from mppa.quiver import TEST_QUIVERS


def random_word(pres: Presentation, rng: random.Random, max_len: int = 5, degree0: bool = True):
    """A composable word built left to right; each new letter ends where the previous one starts."""
    symbols = [g for g, info in pres.generators.items() if not degree0 or info.degree == 0]
    w = [rng.choice(symbols)]
    for _ in range(rng.randrange(max_len)):
        here = pres.symbol(w[-1])[0]
        nxt = [g for g in symbols if pres.symbol(g)[1] == here]
        if not nxt:
            break
        w.append(rng.choice(nxt))
    return tuple(w)


def random_element(pres: Presentation, rng: random.Random, terms: int = 4, max_len: int = 5) -> NCElement:
    """A raw (unreduced) combination of random words, possibly spread over several blocks."""
    raw = {}
    for _ in range(rng.randrange(1, terms + 1)):
        w = random_word(pres, rng, max_len)
        raw[w] = raw.get(w, 0) + Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return NCElement.from_terms(pres, raw, reduce=False)


def random_block_element(pres: Presentation, rng: random.Random, block, terms: int = 3, max_len: int = 5):
    """A combination of words inside one (target, source) block; falls back to the idempotent."""
    raw = {}
    for _ in range(40 * terms):
        w = random_word(pres, rng, max_len)
        if pres.block(w) == block:
            raw[w] = raw.get(w, 0) + rng.randint(-3, 3)
            if len(raw) == terms:
                break
    if block[0] == block[1]:
        raw[(f"id({block[0]})",)] = rng.randint(-2, 2)
    return NCElement.from_terms(pres, raw)


@pytest.fixture(params=sorted(TEST_QUIVERS))
def test_quiver(request):
    return TEST_QUIVERS[request.param]()


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for _, line in results.values():
            terminalreporter.write_line(line)

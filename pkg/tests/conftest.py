from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from prodmeasure.factor_space import EMPTY, FactorSpace, atom_set, interval_set

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

UNIT_F = FactorSpace.unit()
LINE_F = FactorSpace.line()
DISC_F = FactorSpace.discrete({"a": Fraction(1, 2), "b": Fraction(1, 3), "c": Fraction(1, 6), "d": 2})


@st.composite
def grid_sets(draw, lo=0, hi=1, denom=8):
    """Finite unions of [a, b) with endpoints on the grid lo + k/denom."""
    steps = (hi - lo) * denom
    pts = sorted(draw(st.sets(st.integers(0, steps), max_size=6)))
    if len(pts) % 2:
        pts = pts[:-1]
    if not pts:
        return EMPTY
    pairs = [(lo + Fraction(pts[i], denom), lo + Fraction(pts[i + 1], denom)) for i in range(0, len(pts), 2)]
    return interval_set(*pairs)


atom_sets = st.sets(st.sampled_from("abcd")).map(atom_set)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)

import pytest

from substitution_spectra import bundled


@pytest.fixture(scope="session")
def rsl():
    return bundled("rsl")


@pytest.fixture(scope="session")
def rs():
    return bundled("rs")


def word(letters):
    return "".join(letters)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)

import pytest

from crwrouter.model import SystemConfig


def make(**kw):
    base = dict(xi_a=1.0, xi_b=1.0, omega_a=8.0, omega_b=8.0, omega_e=8.0, omega_s=8.0, rabi=1.0, g_a=0.5, g_b=0.5)
    base.update(kw)
    return SystemConfig.from_flat(base)


# reference parameter sets, energies in units of xi_a
OVERLAP = make()
SEPARATED = make(omega_b=2.0)
PARTIAL = make(omega_b=6.0)
WEAK_DRIVE = make(rabi=0.2)
LOWER_B = make(omega_b=2.0, rabi=0.5)
LOWER_B_DETUNED = make(omega_b=2.0, omega_s=9.0, g_b=0.8, rabi=0.5)


@pytest.fixture
def overlap():
    return OVERLAP


@pytest.fixture
def separated():
    return SEPARATED

# waveguide b below waveguide a, omega_e fixed at 8
REFLECTION_SETS = [
    make(omega_b=2.0, rabi=0.0, omega_s=8.0, g_a=0.2, g_b=0.4),
    make(omega_b=2.0, rabi=0.0, omega_s=8.0, g_a=0.5, g_b=0.5),
    make(omega_b=2.0, rabi=0.0, omega_s=9.0, g_a=0.5, g_b=0.8),
    make(omega_b=2.0, rabi=0.1, omega_s=8.0, g_a=0.2, g_b=0.4),
    make(omega_b=2.0, rabi=0.5, omega_s=8.0, g_a=0.5, g_b=0.5),
    make(omega_b=2.0, rabi=0.1, omega_s=9.0, g_a=0.5, g_b=0.8),
]


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("]")[1].split(".")[0])):
            terminalreporter.write_line(line)

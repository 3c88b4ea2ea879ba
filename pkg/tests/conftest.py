import pytest

from aahsense.lab import SweepConfig, evaluate_sweep

ACCEPTANCE_SEED = 20240611
SINGLE_SIZES = (21, 34, 55, 89, 144, 233)
HALF_SIZES = (21, 55, 89, 233)

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def report():
    """Collect one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def emit(criterion: str, ok: bool, detail: str) -> None:
        _acceptance_lines.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")

    def note(criterion: str, detail: str) -> None:
        _acceptance_lines.append(f"[INFO] {criterion}: {detail}")

    emit.note = note
    return emit


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def single_config(V: float, **kw) -> SweepConfig:
    return SweepConfig(
        sizes=kw.pop("sizes", SINGLE_SIZES), V=V, h_grid=(1e-9,), probe_kind="single",
        observables=("qfi", "ofi_cdw", "ofi_h2"), phase_samples=kw.pop("phase_samples", 200),
        seed=ACCEPTANCE_SEED, **kw,
    )


@pytest.fixture(scope="session")
def aah_config():
    return single_config(2.0)


@pytest.fixture(scope="session")
def aah_sweep(aah_config):
    return evaluate_sweep(aah_config, workers=1)


@pytest.fixture(scope="session")
def stark_sweep():
    return evaluate_sweep(single_config(0.0), workers=1)


@pytest.fixture(scope="session")
def half_sweep():
    config = SweepConfig(
        sizes=HALF_SIZES, V=2.0, h_grid=(1e-9,), probe_kind="half_filled",
        observables=("qfi", "ofi_h2"), seed=ACCEPTANCE_SEED,
    )
    return evaluate_sweep(config, workers=1)

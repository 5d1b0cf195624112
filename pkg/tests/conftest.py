import pytest

from stratcx import catalog

ACCEPTANCE_LINES: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"acceptance criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


SIMPLICIAL = [
    catalog.point_complex,
    catalog.edge_complex,
    catalog.triangle_complex,
    catalog.filled_triangle,
    catalog.bigon,
    catalog.tetrahedron_boundary,
    lambda: catalog.simplex(3),
]


@pytest.fixture(params=SIMPLICIAL, ids=lambda f: f().name)
def simplicial(request):
    return request.param()

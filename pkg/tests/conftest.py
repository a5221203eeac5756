import numpy as np
import pytest

from intrinsic_metrics.geometry import ConvexPolygon, Rectangle

ACCEPTANCE: dict[int, tuple[str, bool | None, str]] = {}


def random_convex_polygon(rng: np.random.Generator, n: int) -> ConvexPolygon:
    """Points on an ellipse at well-separated random angles, then a random similarity."""
    while True:
        theta = np.sort(rng.uniform(0, 2 * np.pi, n))
        gaps = np.diff(np.append(theta, theta[0] + 2 * np.pi))
        if gaps.min() > 0.15 and gaps.max() < np.pi - 0.1:
            break
    a, b = rng.uniform(0.7, 2.0, 2)
    z = a * np.cos(theta) + 1j * b * np.sin(theta)
    z = z * np.exp(1j * rng.uniform(0, 2 * np.pi)) + complex(*rng.uniform(-1, 1, 2))
    return ConvexPolygon(tuple(z))


def random_interior(rng: np.random.Generator, P, n: int, margin: float = 1e-6) -> np.ndarray:
    """Interior points, uniform by rejection from the bounding box."""
    poly = P.polygon if isinstance(P, Rectangle) else P
    v = np.array(poly.vertices)
    out = np.empty(0, dtype=complex)
    while out.size < n:
        z = rng.uniform(v.real.min(), v.real.max(), 4 * n) + 1j * rng.uniform(v.imag.min(), v.imag.max(), 4 * n)
        ok = np.min(poly.signed_distances(z), axis=-1) > margin
        out = np.concatenate([out, z[ok]])
    return out[:n]


@pytest.fixture
def rng():
    return np.random.default_rng(20240614)


@pytest.fixture
def record_criterion():
    def record(number: int, title: str, passed: bool, detail: str = ""):
        ACCEPTANCE[number] = (title, bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {status}  {title}  {detail}".rstrip())

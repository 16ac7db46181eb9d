import numpy as np
import pytest

from robin_spectra.fem import assemble_1d, decay_graded_nodes, graded_nodes


@pytest.mark.parametrize("grading", [0.0, 0.5, 2.0])
def test_graded_nodes_cover_interval(grading):
    x = graded_nodes(3.0, 40, grading)
    assert x[0] == 0.0 and x[-1] == pytest.approx(3.0)
    assert np.all(np.diff(x) > 0)


def test_decay_grading_clusters_at_the_wall():
    x = decay_graded_nodes(2.0, 64, rate=10.0)
    h = np.diff(x)
    assert x[0] == 0.0 and x[-1] == pytest.approx(2.0)
    assert h[0] < h[-1]
    two = decay_graded_nodes(2.0, 64, rate=10.0, two_sided=True)
    assert np.allclose(two, 2.0 - two[::-1], atol=1e-12)


def test_mass_and_stiffness_basics():
    x = np.linspace(0.0, 2.0, 17)
    pencil, free = assemble_1d(x)
    ones = np.ones(pencil.A.shape[0])
    assert ones @ (pencil.B @ ones) == pytest.approx(2.0)
    assert np.allclose(pencil.A @ ones, 0.0, atol=1e-12)
    assert abs(pencil.A - pencil.A.T).max() == 0 and abs(pencil.B - pencil.B.T).max() == 0

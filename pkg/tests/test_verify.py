import pytest

from bpfusion.levels import level_params
from bpfusion.verify import SUITES


@pytest.mark.parametrize("u,v", [(4, 3), (3, 4)])
@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes(u, v, name):
    ok, detail = SUITES[name](level_params(u, v), None)
    assert ok, f"{name} at ({u},{v}): {detail}"

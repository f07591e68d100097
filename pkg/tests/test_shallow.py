import pytest

from conftest import abs_net, identity_1d
from oracles import sign_cells
from reluregions.gadgets import build_arrangement_network, build_T_eps
from reluregions.model import Network
from reluregions.shallow import (
    DepthError,
    EffectiveArrangement,
    class_cancels,
    count_arrangement_cells,
    effective_arrangement,
    group_hyperplanes,
    is_affine_shallow,
    shallow_census,
)


def shallow(rows, biases, out):
    n = len(rows[0])
    return Network.from_lists(n, [(rows, biases), ([out], [0])])


def test_group_hyperplanes():
    classes, deg = group_hyperplanes(abs_net())
    assert len(classes) == 1 and not deg
    assert [(m.neuron, m.scale, m.out_weight) for m in classes[0].members] == [(0, 1, 1), (1, -1, 1)]
    classes, _ = group_hyperplanes(shallow([[1], [2]], [0, 0], [1, 1]))
    assert [m.scale for m in classes[0].members] == [1, 2]
    classes, _ = group_hyperplanes(shallow([[1], [1]], [0, 1], [1, 1]))
    assert len(classes) == 2
    _, deg = group_hyperplanes(shallow([[0], [1]], [2, 0], [1, 1]))
    assert deg == [0]


def test_class_cancels():
    same = shallow([[1], [1]], [0, 0], [1, -1])
    assert class_cancels(group_hyperplanes(same)[0][0])
    assert class_cancels(group_hyperplanes(identity_1d())[0][0])
    assert not class_cancels(group_hyperplanes(abs_net())[0][0])


def test_is_affine_shallow():
    assert is_affine_shallow(shallow([[1], [1]], [0, 0], [1, -1]))
    assert not is_affine_shallow(abs_net())
    assert not is_affine_shallow(shallow([[1], [-2]], [0, 0], [1, "1/2"]))


def test_effective_arrangement():
    arr = effective_arrangement(abs_net())
    assert len(arr) == 1
    net = shallow([[1, 0], [0, 1], [1, 0], [1, 0]], [0, 0, 0, 0], [1, 1, 1, -2])
    arr = effective_arrangement(net)
    assert len(arr) == 1 and arr.hyperplanes[0][0] == (0, 1)
    assert len(effective_arrangement(identity_1d())) == 0


def test_count_cells():
    lines = EffectiveArrangement(2, (((1, 0), -1), ((0, 1), -1), ((1, 1), 0)))
    assert count_arrangement_cells(lines) == 7
    assert count_arrangement_cells(EffectiveArrangement(1, (((1,), 0),) * 3)) == 2
    assert count_arrangement_cells(EffectiveArrangement(3)) == 1


def test_shallow_census_abs():
    r = shallow_census(abs_net())
    assert [r[d] for d in (1, 2, 3, 4, 6)] == [3, 2, 2, 2, 2]
    assert r[5] is None


def test_shallow_census_arrangement():
    normals = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
    net = build_arrangement_network(normals, (1, 2, 4))
    r = shallow_census(net)
    cells = sign_cells(normals)
    assert [r[d] for d in (1, 2, 3, 4, 6)] == [cells] * 5


def test_shallow_census_affine():
    r = shallow_census(identity_1d())
    # two proper activation regions, one affine piece
    assert [r[d] for d in (2, 3, 4, 6)] == [2, 1, 1, 1]


def test_depth_error():
    with pytest.raises(DepthError):
        shallow_census(build_T_eps(1))

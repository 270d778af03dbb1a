import pytest

from src.application.services.parallel import ordered_map

# -------------
# ordered_map
# -------------


def test_ordered_map_in_process_accepts_closures():
    offset = 10
    assert ordered_map(lambda x: x + offset, [3, 1, 2]) == [13, 11, 12]


@pytest.mark.parametrize("workers", [2, 3])
def test_ordered_map_keeps_input_order_across_processes(workers):
    items = [-5, 4, -3, 2, -1, 0]
    assert ordered_map(abs, items, workers) == [5, 4, 3, 2, 1, 0]


def test_ordered_map_of_nothing():
    assert ordered_map(abs, [], 4) == []

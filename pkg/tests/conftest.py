import pytest

from bracketforge.construct import parse_family
from bracketforge.linkcore import LinkDiagram

SMALL = [
    "hopf", "trefoil", "twobridge:4", "twobridge:2,2", "twobridge:3,2", "twobridge:2,1,2",
    "pretzel:2,2,2", "pretzel:3,1,2", "whitehead", "asi:+c1", "montesinos:1;1",
    "montesinos:2;1/1",
]


@pytest.fixture(params=SMALL)
def small_cfg(request):
    return parse_family(request.param)


def negative(cfg):
    return LinkDiagram.all_negative(cfg.universe)

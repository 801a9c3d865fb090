from __future__ import annotations

from importlib.resources import files

import pytest

from bcaret.pds import parse_pds

T1_TEXT = files("bcaret.corpus").joinpath("t1.pds").read_text(encoding="utf-8")


def corpus(name: str) -> str:
    return files("bcaret.corpus").joinpath(name).read_text(encoding="utf-8")


@pytest.fixture
def t1():
    return parse_pds(T1_TEXT, "t1.pds")


@pytest.fixture
def t2():
    return parse_pds("controls p ; alphabet a b ; rule p a -call-> p a b ;")

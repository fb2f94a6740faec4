import os

import pytest
from hypothesis import HealthCheck, settings

from src.domain.qualification_domain import BOOL, CERT, WEIGHT
from src.domain.syntax import parse_program

ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..", ".."))
PROGRAMS_DIR = os.path.join(ROOT_DIR, "programs")

settings.register_profile("qlp", max_examples=200, deadline=None, derandomize=True, database=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.differing_executors])
settings.load_profile("qlp")


def program_path(name: str) -> str:
    return os.path.join(PROGRAMS_DIR, name)


def load_program(name: str, desc):
    with open(program_path(name), encoding="utf-8") as f:
        return parse_program(f.read(), desc)


@pytest.fixture(scope="session")
def p_u():
    return load_program("pu.qlp", CERT)


@pytest.fixture(scope="session")
def p_w():
    return load_program("pw.qlp", WEIGHT)


@pytest.fixture(scope="session")
def p_b():
    return load_program("pb.qlp", BOOL)


@pytest.fixture(scope="session")
def programs_dir():
    return PROGRAMS_DIR

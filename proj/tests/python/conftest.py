import os

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--cli",
        action="store",
        default=None,
        help="path to the lrr experiment CLI binary",
    )


@pytest.fixture(scope="session")
def cli_path(request):
    path = request.config.getoption("--cli") or os.environ.get("LRR_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("lrr CLI binary not available (pass --cli or set LRR_CLI)")
    return path

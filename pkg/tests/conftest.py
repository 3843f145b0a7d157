import logging

import pytest


@pytest.fixture(autouse=True)
def _quiet_inference(caplog):
    caplog.set_level(logging.ERROR, logger="subdivrules")

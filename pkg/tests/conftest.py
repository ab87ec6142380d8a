import pytest

import factories


@pytest.fixture
def sound_doc():
    return factories.sound_case_document()

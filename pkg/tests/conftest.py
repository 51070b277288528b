import pytest

from omegatruth import kernel as K
from omegatruth import theorems as TH


@pytest.fixture(scope="session")
def mcgee():
    return TH.mcgee_original(K.GAMMA)


@pytest.fixture(scope="session")
def mcgee_loeb():
    return TH.mcgee_via_loeb(K.GAMMA)

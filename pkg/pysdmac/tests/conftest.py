import os

import pytest

from pysdmac.api.document import ChannelDocument


@pytest.fixture(scope="session")
def base_data_dir():
    """
    同梱のサンプル通信路文書があるディレクトリを返します。
    """
    path = os.path.abspath(os.path.join(
        os.path.dirname(__file__), '..', '..', 'base_data'))
    if not os.path.isdir(path):
        pytest.skip("Skip (base_data not found)")

    return path


@pytest.fixture(scope="session")
def identity_path(base_data_dir):
    return os.path.join(base_data_dir, 'identity-mac.json')


@pytest.fixture(scope="session")
def state_path(base_data_dir):
    return os.path.join(base_data_dir, 'state-mac.json')


@pytest.fixture(scope="session")
def state_doc(state_path):
    return ChannelDocument.load(state_path)

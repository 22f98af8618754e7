import pytest

from ozmac.core import Signedness
from ozmac.oztd import from_values, save_tensor


@pytest.fixture
def write_oztd(tmp_path):
    """Write values to an .oztd file under tmp_path and return its path."""

    def _write(name, values, dtype_bits=8, signedness=Signedness.TWOS_COMPLEMENT, dims=None):
        path = tmp_path / name
        save_tensor(path, from_values(values, dims or (len(values),), dtype_bits, signedness))
        return path

    return _write

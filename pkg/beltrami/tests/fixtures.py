from typing import Generator

import pytest
from pyfakefs.fake_filesystem_unittest import FakeFilesystem, Patcher


@pytest.fixture
def fs() -> Generator[FakeFilesystem, None, None]:
    """
    A FakeFileSystem that leaves numpy and scipy modules alone, since they
    load compiled extensions from the real file system.
    """
    with Patcher(
        additional_skip_names=["numpy", "scipy", "sympy"]
    ) as patcher:
        yield patcher.fs

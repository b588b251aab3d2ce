import pytest

from drgf import oracle


@pytest.fixture(scope="session")
def catalog_graphs():
    """All seven witness graphs, built once per session."""
    return {name: oracle.build(name) for name, _arr in oracle.CATALOG}

"""
pytest 配置和共享 fixtures

此文件包含 pytest 的全局配置和所有测试共享的 fixture。
"""

import sys
import tempfile
from pathlib import Path
from typing import Generator

import pytest

# 添加项目根目录到 Python 路径
root_path = Path(__file__).parent.parent
if str(root_path) not in sys.path:
    sys.path.insert(0, str(root_path))


@pytest.fixture
def temp_directory() -> Generator[Path, None, None]:
    """
    提供临时目录的 fixture

    自动创建和清理临时目录，确保测试隔离性。

    Yields:
        Path: 临时目录路径对象
    """
    temp_dir = Path(tempfile.mkdtemp())
    try:
        yield temp_dir
    finally:
        # 清理临时目录
        import shutil

        if temp_dir.exists():
            shutil.rmtree(temp_dir)


@pytest.fixture
def natural_units():
    """自然单位制 (ħ = c = m = 1)"""
    from src.eup_coulomb.models import UnitSystem

    return UnitSystem.natural()


@pytest.fixture
def physical_units():
    """物理单位制 (eV, 米)"""
    from src.eup_coulomb.models import UnitSystem

    return UnitSystem.physical()


@pytest.fixture
def make_kg(natural_units):
    """
    构造 Klein-Gordon 输入的工厂 fixture

    Example:
        def test_level(make_kg):
            inputs = make_kg(N=2, l=1, Z=1, eta=1e-4, space="ads")
    """
    from src.eup_coulomb.kg import KGSpectrumInputs
    from src.eup_coulomb.models import KGState, SpaceKind, make_deformation_from_eta

    def _make(N=1, l=0, Z=1, eta=0.0, space="ds", units=None):
        units = units or natural_units
        deformation = make_deformation_from_eta(SpaceKind.from_string(space), eta, units)
        return KGSpectrumInputs(KGState(N, l), Z, deformation, units)

    return _make


@pytest.fixture
def make_dirac(natural_units):
    """构造 Dirac 输入的工厂 fixture，态由 κ 给出"""
    from src.eup_coulomb.dirac import DiracSpectrumInputs
    from src.eup_coulomb.models import DiracState, SpaceKind, make_deformation_from_eta

    def _make(N=1, kappa=-1, Z=1, eta=0.0, space="ds", units=None):
        units = units or natural_units
        deformation = make_deformation_from_eta(SpaceKind.from_string(space), eta, units)
        return DiracSpectrumInputs(DiracState.from_kappa(N, kappa), Z, deformation, units)

    return _make


# Flask API 测试 fixtures
@pytest.fixture
def app():
    """Create Flask app for testing."""
    from src.flask_app.app import create_app

    app = create_app('testing')
    yield app


@pytest.fixture
def client(app):
    """Create test client."""
    return app.test_client()

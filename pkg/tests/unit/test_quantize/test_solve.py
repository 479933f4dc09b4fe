"""
测试量子化条件的数值求根

求根结果与闭式能级互相校验，并检查无根、分支选择与前置条件。
"""

import cmath

import numpy as np
import pytest

from src.eup_coulomb.dirac import energy_dirac
from src.eup_coulomb.exceptions import InvalidParameterError, NoRootError
from src.eup_coulomb.kg import energy_kg
from src.eup_coulomb.models import ExponentBranch, SpaceKind, Validity, sommerfeld_mu
from src.eup_coulomb.quantize import (
    EquationKind,
    QuantizationProblem,
    admissible_interval,
    closed_form_one_minus_sq,
    ds_radicands,
    ds_upper_limit,
    residual,
    select_branch,
    solve,
    stable_sqrt_real,
)

MU = sommerfeld_mu()
GRID_Z = [1, 5, 20]
GRID_ETA = [1e-8, 1e-4, 1e-2]


def kg_cases():
    for Z in GRID_Z:
        for eta in GRID_ETA:
            for space in ("ds", "ads"):
                for N in range(1, 5):
                    for l in range(N):
                        yield N, l, Z, eta, space


def dirac_cases():
    for Z in GRID_Z:
        for eta in GRID_ETA:
            for space in ("ds", "ads"):
                for N in range(1, 4):
                    for jh in range(1, N + 1):
                        yield N, -jh, Z, eta, space


class TestProblem:
    """QuantizationProblem 测试类"""

    def test_zero_eta_rejected(self, make_kg):
        """测试 η=0 时报错"""
        with pytest.raises(InvalidParameterError):
            QuantizationProblem.from_kg(make_kg(N=2, l=0, Z=1))

    def test_kg_pair(self, make_kg):
        """测试 KG 的 (p0, d)"""
        inputs = make_kg(N=3, l=1, Z=5, eta=1e-3)
        problem = QuantizationProblem.from_kg(inputs)
        assert problem.kind is EquationKind.KG
        assert problem.p0 == pytest.approx(inputs.delta_sq + 0.75, rel=1e-15)
        assert problem.d == pytest.approx(inputs.delta_sq ** 0.5, rel=1e-15)
        assert problem.K == pytest.approx(1 + problem.d + 0.5, rel=1e-15)

    def test_dirac_pair(self, make_dirac):
        """测试 Dirac 的 (p0, d)，基态 B = 0"""
        problem = QuantizationProblem.from_dirac(make_dirac(N=1, kappa=-1, Z=10, eta=1e-3))
        gamma = (1 - (10 * MU) ** 2) ** 0.5
        assert problem.p0 == pytest.approx(gamma ** 2, rel=1e-15)
        assert problem.d == pytest.approx(gamma - 0.5, rel=1e-15)
        assert problem.bracket == pytest.approx(0.0, abs=1e-15)

    def test_to_dict(self, make_kg):
        """测试序列化"""
        data = QuantizationProblem.from_kg(make_kg(N=2, l=1, eta=1e-4, space="ads")).to_dict()
        assert data["kind"] == "kg"
        assert data["space"] == "ads"
        assert data["n"] == 0


class TestResidual:
    """残差测试"""

    @pytest.mark.parametrize("space", ["ds", "ads"])
    @pytest.mark.parametrize("eta", [1e-4, 1e-2])
    def test_vanishes_at_closed_form(self, make_kg, space, eta):
        """测试闭式能级处残差 ≤ 1e-10"""
        for N in range(1, 4):
            for l in range(N):
                inputs = make_kg(N=N, l=l, Z=5, eta=eta, space=space)
                x = energy_kg(inputs).value
                problem = QuantizationProblem.from_kg(inputs)
                assert abs(residual(problem, x)) <= 1e-10

    def test_stable_sqrt_real(self):
        """测试 Re √z 与 cmath 一致"""
        for z in (complex(-4.0, 3.0), complex(2.0, -1e-3), complex(-1e6, 1.0), 5.0 + 0j):
            assert stable_sqrt_real(z) == pytest.approx(cmath.sqrt(z).real, rel=1e-12)

    def test_branch_selection(self, make_kg):
        """测试 β > K² 时取正则分支，否则取非正则分支"""
        strong = QuantizationProblem.from_kg(make_kg(N=1, l=0, Z=1, eta=1e-8))
        weak = QuantizationProblem.from_kg(make_kg(N=1, l=0, Z=1, eta=1e-2))
        ads = QuantizationProblem.from_kg(make_kg(N=1, l=0, Z=1, eta=1e-2, space="ads"))
        assert select_branch(strong) is ExponentBranch.REGULAR
        assert select_branch(weak) is ExponentBranch.IRREGULAR
        assert select_branch(ads) is ExponentBranch.REGULAR


class TestSolve:
    """solve 测试类"""

    @pytest.mark.parametrize("N,l,Z,eta,space", list(kg_cases()))
    def test_kg_matches_closed_form(self, make_kg, N, l, Z, eta, space):
        """测试 KG 求根与闭式相对误差 ≤ 1e-9"""
        inputs = make_kg(N=N, l=l, Z=Z, eta=eta, space=space)
        closed = energy_kg(inputs)
        assert closed.validity is Validity.OK
        root = solve(QuantizationProblem.from_kg(inputs))
        assert root.value == pytest.approx(closed.value, rel=1e-9)
        assert root.branch is SpaceKind.from_string(space)

    @pytest.mark.parametrize("N,kappa,Z,eta,space", list(dirac_cases()))
    def test_dirac_matches_closed_form(self, make_dirac, N, kappa, Z, eta, space):
        """测试 Dirac 求根与闭式相对误差 ≤ 1e-9"""
        inputs = make_dirac(N=N, kappa=kappa, Z=Z, eta=eta, space=space)
        closed = energy_dirac(inputs)
        root = solve(QuantizationProblem.from_dirac(inputs))
        assert root.value == pytest.approx(closed.value, rel=1e-9)

    @pytest.mark.parametrize("space", ["ds", "ads"])
    def test_dirac_ground_state(self, make_dirac, space):
        """测试 Dirac 1s 在两种形变下均为 √(1 - (10μ)²)"""
        inputs = make_dirac(N=1, kappa=-1, Z=10, eta=1e-3, space=space)
        root = solve(QuantizationProblem.from_dirac(inputs))
        assert root.value == pytest.approx((1 - (10 * MU) ** 2) ** 0.5, rel=1e-9)

    def test_no_root_beyond_max_n(self, make_kg):
        """测试 dS 根号内为负时无根"""
        inputs = make_kg(N=5, l=0, Z=1, eta=0.5)
        assert energy_kg(inputs).validity is Validity.UNPHYSICAL_RADICAND
        with pytest.raises(NoRootError):
            solve(QuantizationProblem.from_kg(inputs))

    def test_deterministic(self, make_dirac):
        """测试重复求解结果逐位相同"""
        problem = QuantizationProblem.from_dirac(
            make_dirac(N=3, kappa=2, Z=20, eta=1e-4, space="ads")
        )
        assert solve(problem).value == solve(problem).value

    def test_exponent_recorded(self, make_kg):
        """测试结果带有指数分支"""
        root = solve(QuantizationProblem.from_kg(make_kg(N=2, l=1, Z=1, eta=1e-8)))
        assert root.exponent is ExponentBranch.REGULAR

    def test_small_eta_upper_edge(self, make_kg):
        """测试 η=1e-8 时区间端点的 R₋ 舍入误差不被判为越界"""
        inputs = make_kg(N=2, l=1, Z=1, eta=1e-8)
        problem = QuantizationProblem.from_kg(inputs)
        _, r_minus = ds_radicands(problem, ds_upper_limit(problem))
        assert 0.0 <= r_minus <= 1e-5
        assert solve(problem).value == pytest.approx(energy_kg(inputs).value, rel=1e-9)


class TestSignChange:
    """残差在可容许区间上只变号一次"""

    @pytest.mark.parametrize(
        "kind,N,state,Z,eta,space",
        [
            ("kg", 2, 1, 1, 1e-8, "ds"),
            ("kg", 1, 0, 1, 1e-2, "ds"),
            ("kg", 3, 0, 5, 1e-2, "ads"),
            ("dirac", 2, -1, 20, 1e-4, "ads"),
            ("dirac", 3, -2, 5, 1e-4, "ds"),
        ],
    )
    def test_single_sign_change(self, make_kg, make_dirac, kind, N, state, Z, eta, space):
        """测试 10⁴ 个采样点上残差恰好变号一次"""
        if kind == "kg":
            problem = QuantizationProblem.from_kg(make_kg(N=N, l=state, Z=Z, eta=eta, space=space))
        else:
            problem = QuantizationProblem.from_dirac(
                make_dirac(N=N, kappa=state, Z=Z, eta=eta, space=space)
            )
        branch = select_branch(problem)
        lo, hi = admissible_interval(problem)
        values = np.array([residual(problem, x, branch) for x in np.linspace(lo, hi, 10001)])
        signs = np.sign(values[values != 0.0])
        assert np.count_nonzero(np.diff(signs)) == 1


class TestClosedFormOneMinusSq:
    """closed_form_one_minus_sq 测试类"""

    @pytest.mark.parametrize("space", ["ds", "ads"])
    def test_matches_level(self, make_kg, space):
        """测试与闭式能级算出的 1 - x² 一致"""
        inputs = make_kg(N=3, l=1, Z=5, eta=1e-2, space=space)
        x = energy_kg(inputs).value
        problem = QuantizationProblem.from_kg(inputs)
        assert closed_form_one_minus_sq(problem) == pytest.approx(1.0 - x * x, rel=1e-10)

    def test_small_eta_keeps_digits(self, make_kg):
        """测试 η 很小时 (1 - x²)/η 仍保留有效数字"""
        problem = QuantizationProblem.from_kg(make_kg(N=2, l=1, Z=1, eta=1e-12))
        K_sq, z_sq = problem.K ** 2, problem.z_mu ** 2
        flat = z_sq / (K_sq + z_sq)
        shift = (closed_form_one_minus_sq(problem) - flat) / problem.eta
        assert shift == pytest.approx(problem.bracket * K_sq / (K_sq + z_sq), rel=1e-3)

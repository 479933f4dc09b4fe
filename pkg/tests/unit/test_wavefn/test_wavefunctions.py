"""
测试径向波函数

坐标变换、超几何多项式、指数截断条件、归一化、节点数与 Dirac 分量。
Z=1 时束缚态尺度约 137 个 Compton 长度，dS 下取 η=1e-8 以保证可归一化。
"""

import math

import numpy as np
import pytest

from src.eup_coulomb.dirac import energy_dirac
from src.eup_coulomb.exceptions import (
    DomainError,
    InvalidParameterError,
    NonIntegrableError,
    SingularMixingError,
)
from src.eup_coulomb.kg import energy_kg
from src.eup_coulomb.models import ExponentBranch, SpaceKind
from src.eup_coulomb.wavefn import (
    compact_coordinate,
    coulomb_potential,
    count_nodes,
    dirac_coupled_residual,
    dirac_exponents,
    dirac_solution,
    hyp_coefficients,
    hyp_polynomial,
    kg_exponents,
    kg_inner_product,
    kg_solution,
    mix,
    mixing_x,
    node_count,
    norm_integral,
    normalize,
    normalized,
    overlap,
    patch_weight,
    radial_dirac,
    radial_kg,
    sample_profile,
    unmix,
    x_of_r,
    y_of_r,
)

ETA = 1e-8


class TestCoordinates:
    """坐标变换测试"""

    def test_de_sitter_value(self):
        """测试 dS 下 r = 1/√λ 时 ϰ = √2"""
        lam = 4.0
        assert x_of_r(0.5, lam, SpaceKind.DE_SITTER) == pytest.approx(2 ** 0.5, rel=1e-15)
        assert y_of_r(0.5, lam, SpaceKind.DE_SITTER) == pytest.approx(
            (1 - 2 ** 0.5) / 2, rel=1e-15
        )

    def test_anti_de_sitter_imaginary(self):
        """测试 AdS 下 ϰ 为纯虚数"""
        value = x_of_r(0.5, 1.0, SpaceKind.ANTI_DE_SITTER)
        assert value.real == 0.0
        assert value.imag == pytest.approx(-(0.75 ** 0.5) / 0.5, rel=1e-15)

    def test_anti_de_sitter_edge(self):
        """测试 AdS 超出 1/√λ 报错"""
        with pytest.raises(DomainError):
            x_of_r(1.0, 1.0, SpaceKind.ANTI_DE_SITTER)
        with pytest.raises(DomainError):
            compact_coordinate(np.array([0.5, 2.0]), 1.0, SpaceKind.ANTI_DE_SITTER)

    def test_invalid_radius(self):
        """测试 r ≤ 0 与 λ ≤ 0 报错"""
        with pytest.raises(DomainError):
            x_of_r(0.0, 1.0, SpaceKind.DE_SITTER)
        with pytest.raises(DomainError):
            x_of_r(1.0, 0.0, SpaceKind.DE_SITTER)

    def test_compact_coordinate(self):
        """测试 √η·r = sinh w (dS) / sin w (AdS)"""
        r = np.array([10.0, 100.0, 1000.0])
        w_ds = compact_coordinate(r, 1e-6, SpaceKind.DE_SITTER)
        w_ads = compact_coordinate(r, 1e-7, SpaceKind.ANTI_DE_SITTER)
        np.testing.assert_allclose(np.sinh(w_ds), 1e-3 * r, rtol=1e-14)
        np.testing.assert_allclose(np.sin(w_ads), 1e-7 ** 0.5 * r, rtol=1e-14)


class TestHypergeometric:
    """超几何多项式测试"""

    def test_degree_zero(self):
        """测试 n=0 时恒为 1"""
        assert hyp_polynomial(0, 2.3, 1.7, -0.4) == 1.0

    def test_origin(self):
        """测试 y=0 时为 1"""
        assert hyp_polynomial(4, 2.3, 1.7, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_linear(self):
        """测试 n=1 时为 1 - (B/C) y"""
        B, C, y = 2.5, 3.5, -0.3
        assert hyp_polynomial(1, B, C, y) == pytest.approx(1 - B / C * y, rel=1e-14)

    def test_complex_parameters(self):
        """测试复参数的系数"""
        coeffs = hyp_coefficients(1, 1 + 1j, 2.0)
        assert coeffs[1] == pytest.approx(-(1 + 1j) / 2.0, rel=1e-14)

    def test_bad_lower_parameter(self):
        """测试 C 为非正整数时报错"""
        with pytest.raises(InvalidParameterError):
            hyp_coefficients(2, 1.0, -1.0)
        with pytest.raises(InvalidParameterError):
            hyp_coefficients(-1, 1.0, 1.0)


class TestKleinGordonSolution:
    """Klein-Gordon 径向解测试"""

    @pytest.mark.parametrize("space", ["ds", "ads"])
    @pytest.mark.parametrize("N,l", [(1, 0), (2, 0), (3, 0), (3, 1), (4, 1)])
    def test_termination(self, make_kg, space, N, l):
        """测试 a + b + d = -n"""
        sol = kg_solution(make_kg(N=N, l=l, Z=1, eta=ETA, space=space))
        total = complex(sol.a + sol.b) + sol.d
        assert total.real == pytest.approx(-(N - l - 1), abs=1e-10)
        assert abs(total.imag) < 1e-10

    def test_exponent_functions(self, make_kg, make_dirac):
        """测试 kg_exponents / dirac_exponents 在闭式能级处满足截断条件"""
        kg = make_kg(N=3, l=0, Z=1, eta=ETA)
        a, b = kg_exponents(kg.delta_sq, kg.z_mu, ETA, energy_kg(kg).value)
        assert a + b + kg.delta_sq ** 0.5 == pytest.approx(-2.0, abs=1e-8)

        dirac = make_dirac(N=2, kappa=-1, Z=1, eta=ETA, space="ads")
        x = energy_dirac(dirac).value
        a, b = dirac_exponents(dirac.gamma, dirac.z_mu, ETA, x, SpaceKind.ANTI_DE_SITTER)
        assert b == a.conjugate()
        assert (a + b).real + dirac.gamma - 0.5 == pytest.approx(-1.0, abs=1e-8)

    @pytest.mark.parametrize("N,l", [(1, 0), (2, 0), (3, 0), (3, 1), (5, 2), (6, 0)])
    def test_node_count(self, make_kg, N, l):
        """测试节点数等于 n"""
        sol = kg_solution(make_kg(N=N, l=l, Z=1, eta=ETA))
        assert sol.exponent is ExponentBranch.REGULAR
        assert node_count(sol) == N - l - 1

    @pytest.mark.parametrize("space", ["ds", "ads"])
    def test_normalization(self, make_kg, space):
        """测试归一化后积分为 1"""
        sol = normalized(kg_solution(make_kg(N=2, l=0, Z=1, eta=ETA, space=space)))
        assert norm_integral(sol) == pytest.approx(1.0, abs=1e-8)

    def test_orthogonality(self, make_kg):
        """测试形变测度下同 l 不同 N 的重叠 < 1e-3"""
        one = kg_solution(make_kg(N=1, l=0, Z=1, eta=ETA))
        two = kg_solution(make_kg(N=2, l=0, Z=1, eta=ETA))
        assert abs(overlap(one, two)) < 1e-3
        assert overlap(one, one) == pytest.approx(1.0, abs=1e-8)

    def test_orthogonality_continued_domain(self, make_kg):
        """测试 AdS 在 (0, π) 上的重叠 < 1e-3"""
        one = kg_solution(make_kg(N=1, l=0, Z=1, eta=1e-4, space="ads"))
        two = kg_solution(make_kg(N=2, l=0, Z=1, eta=1e-4, space="ads"))
        assert abs(overlap(one, two)) < 1e-3

    @pytest.mark.parametrize(
        "space,eta,first,second",
        [
            ("ds", ETA, (1, 0), (2, 0)),
            ("ds", ETA, (1, 0), (3, 0)),
            ("ds", ETA, (2, 1), (3, 1)),
            ("ads", 1e-4, (1, 0), (2, 0)),
            ("ads", 1e-4, (2, 0), (4, 0)),
            ("ads", 1e-4, (2, 1), (3, 1)),
        ],
    )
    def test_kg_inner_product(self, make_kg, space, eta, first, second):
        """测试能量加权内积下不同能级正交 (≤ 1e-6)，自身内积为 1"""
        one = kg_solution(make_kg(N=first[0], l=first[1], Z=1, eta=eta, space=space))
        two = kg_solution(make_kg(N=second[0], l=second[1], Z=1, eta=eta, space=space))
        assert abs(kg_inner_product(one, two)) <= 1e-6
        assert kg_inner_product(two, two) == pytest.approx(1.0, abs=1e-9)

    def test_kg_inner_product_needs_partial_wave(self, make_kg):
        """测试不同 l 的内积报错"""
        one = kg_solution(make_kg(N=2, l=0, Z=1, eta=ETA))
        two = kg_solution(make_kg(N=2, l=1, Z=1, eta=ETA))
        with pytest.raises(InvalidParameterError):
            kg_inner_product(one, two)

    def test_coulomb_potential(self, make_kg):
        """测试紧致坐标上的势能等于 -Zμ√(1 + sλr²)/r"""
        sol = kg_solution(make_kg(N=1, l=0, Z=1, eta=1e-4, space="ads"))
        r = 50.0
        w = compact_coordinate(r, 1e-4, SpaceKind.ANTI_DE_SITTER)
        expected = -sol.z_mu * (1.0 - 1e-4 * r * r) ** 0.5 / r
        assert float(coulomb_potential(sol, w)) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize(
        "eta,N,l",
        [(1e-4, 2, 0), (1e-4, 3, 0), (1e-4, 4, 0), (1e-4, 5, 2), (1e-4, 6, 0), (1e-6, 6, 0)],
    )
    def test_node_count_anti_de_sitter(self, make_kg, eta, N, l):
        """测试 AdS 在延拓区间 (0, π) 上节点数等于 n"""
        sol = kg_solution(make_kg(N=N, l=l, Z=1, eta=eta, space="ads"))
        assert node_count(sol) == N - l - 1

    def test_patch_weight(self, make_kg):
        """测试物理区域 r < 1/√λ 内的概率份额"""
        wide = normalized(kg_solution(make_kg(N=1, l=0, Z=1, eta=1e-4, space="ads")))
        narrow = normalized(kg_solution(make_kg(N=1, l=0, Z=1, eta=ETA, space="ads")))
        de_sitter = normalized(kg_solution(make_kg(N=1, l=0, Z=1, eta=ETA)))
        assert 0.5 < patch_weight(wide) < 1.0
        assert patch_weight(narrow) == 1.0
        assert patch_weight(de_sitter) == 1.0

    def test_profile_anti_de_sitter(self, make_kg):
        """测试 AdS 剖面止于物理区域边界，累计归一化等于区域份额"""
        sol = normalized(kg_solution(make_kg(N=2, l=0, Z=1, eta=1e-4, space="ads")))
        profile = sample_profile(sol, samples=40)
        assert np.all(np.diff(profile["r"]) > 0)
        assert profile["r"][-1] == pytest.approx(100.0, rel=1e-9)
        assert profile["cumulative"][-1] == pytest.approx(patch_weight(sol), rel=1e-6)

    @pytest.mark.parametrize("N,l", [(1, 0), (2, 1)])
    def test_flat_limit(self, make_kg, N, l):
        """测试 λ→0 时归一化波函数趋于平直 Coulomb 解 (1e-6)"""
        inputs = make_kg(N=N, l=l, Z=10, eta=1e-12)
        sol = normalized(kg_solution(inputs))
        delta = inputs.delta_sq ** 0.5
        K = delta + 0.5
        decay = inputs.z_mu / (K * K + inputs.z_mu ** 2) ** 0.5
        log_c = 0.5 * ((2 * delta + 2) * math.log(2 * decay) - math.lgamma(2 * delta + 2))
        r = np.array([0.5, 1.0, 2.0, 4.0]) / decay
        flat = np.exp(log_c + (delta - 0.5) * np.log(r) - decay * r)
        np.testing.assert_allclose(radial_kg(sol, r), flat, rtol=1e-6)

    def test_overlap_needs_same_deformation(self, make_kg):
        """测试不同形变的重叠报错"""
        one = kg_solution(make_kg(N=1, l=0, Z=1, eta=ETA))
        two = kg_solution(make_kg(N=1, l=0, Z=1, eta=2 * ETA))
        with pytest.raises(InvalidParameterError):
            overlap(one, two)

    def test_irregular_branch(self, make_kg):
        """测试 β ≤ K² 时不可归一化"""
        sol = kg_solution(make_kg(N=1, l=0, Z=1, eta=1e-2))
        assert sol.exponent is ExponentBranch.IRREGULAR
        assert not sol.is_normalizable
        with pytest.raises(NonIntegrableError):
            normalize(sol)

    def test_radial_samples(self, make_kg):
        """测试 2p 的 ψ(r) 采样有限且无节点"""
        sol = normalized(kg_solution(make_kg(N=2, l=1, Z=1, eta=ETA)))
        values = radial_kg(sol, np.array([10.0, 100.0, 500.0]))
        assert values.shape == (3,)
        assert np.all(np.isfinite(values))
        assert count_nodes(values) == 0

    def test_profile(self, make_kg):
        """测试采样剖面的字段与累计归一化"""
        sol = normalized(kg_solution(make_kg(N=1, l=0, Z=1, eta=ETA)))
        profile = sample_profile(sol, samples=50)
        assert set(profile) == {"r", "y", "value", "weight", "cumulative"}
        assert len(profile["r"]) == 50
        assert np.all(np.diff(profile["r"]) > 0)
        assert np.all(np.diff(profile["cumulative"]) >= 0)
        assert profile["cumulative"][-1] == pytest.approx(1.0, rel=1e-6)
        assert np.all(profile["y"] < 0)

    def test_to_dict(self, make_kg):
        """测试序列化"""
        data = kg_solution(make_kg(N=2, l=0, Z=1, eta=ETA, space="ads")).to_dict()
        assert data["kind"] == "kg"
        assert data["n"] == 1
        assert isinstance(data["a"], list)


class TestCountNodes:
    """count_nodes 测试"""

    def test_sign_changes(self):
        """测试符号变化计数"""
        assert count_nodes([1.0, 2.0, -1.0, -3.0, 0.5]) == 2

    def test_floor(self):
        """测试忽略低于阈值的样本"""
        assert count_nodes([1.0, -1e-12, 1e-13, 2.0]) == 0


class TestMixing:
    """Dirac 混合矩阵测试"""

    @pytest.mark.parametrize("kappa", [-3, -1, 1, 2])
    def test_invariant(self, kappa):
        """测试 X² + 2κX/Zμ + 1 = 0"""
        z_mu = 0.3
        X = mixing_x(kappa, z_mu)
        value = X * X + 2 * kappa * X / z_mu + 1
        assert abs(value) <= 1e-12 * max(1.0, X * X)

    def test_round_trip(self):
        """测试 mix / unmix 互逆"""
        f1 = np.array([0.1, -0.4, 2.0])
        f2 = np.array([1.5, 0.2, -0.7])
        g1, g2 = mix(f1, f2, 0.3)
        back1, back2 = unmix(g1, g2, 0.3)
        np.testing.assert_allclose(back1, f1, rtol=1e-14)
        np.testing.assert_allclose(back2, f2, rtol=1e-14)

    def test_singular(self):
        """测试 X² = 1 时报错"""
        with pytest.raises(SingularMixingError):
            unmix(1.0, 2.0, 1.0)

    def test_zero_coupling(self):
        """测试 Zμ = 0 时报错"""
        with pytest.raises(DomainError):
            mixing_x(-1, 0.0)


class TestDiracSolution:
    """Dirac 径向解测试"""

    def test_termination(self, make_dirac):
        """测试 a + b + γ - 1/2 = -n"""
        sol = dirac_solution(make_dirac(N=2, kappa=-1, Z=1, eta=ETA))
        assert sol.a + sol.b + sol.d == pytest.approx(-1.0, abs=1e-10)
        assert node_count(sol) == 1

    @pytest.mark.parametrize(
        "space,eta,w",
        [
            ("ds", ETA, [0.005, 0.01, 0.02, 0.05]),
            ("ads", 1e-4, [0.3, 0.6, 0.9, 1.2]),
        ],
    )
    def test_coupled_residual(self, make_dirac, space, eta, w):
        """测试 f1、f2 满足一阶耦合方程"""
        sol = dirac_solution(make_dirac(N=1, kappa=-1, Z=1, eta=eta, space=space))
        assert dirac_coupled_residual(sol, np.array(w)) < 1e-8

    @pytest.mark.parametrize(
        "N,kappa,nodes",
        [(1, -1, 0), (2, -1, 1), (2, 1, 1), (3, -1, 2), (3, -2, 1), (3, 2, 1), (4, -1, 3)],
    )
    def test_node_count(self, make_dirac, N, kappa, nodes):
        """测试 g2 节点数等于径向量子数 N - |κ|"""
        sol = dirac_solution(make_dirac(N=N, kappa=kappa, Z=1, eta=ETA))
        assert node_count(sol) == nodes

    def test_normalization(self, make_dirac):
        """测试 f1² + f2² 归一化"""
        sol = normalized(dirac_solution(make_dirac(N=1, kappa=-1, Z=1, eta=ETA)))
        assert norm_integral(sol) == pytest.approx(1.0, abs=1e-8)

    def test_radial_pair(self, make_dirac):
        """测试 radial_dirac 返回两个分量"""
        sol = normalized(dirac_solution(make_dirac(N=1, kappa=-1, Z=1, eta=ETA)))
        pair = radial_dirac(sol, np.array([50.0, 150.0]))
        assert pair.f1.shape == pair.f2.shape == (2,)
        assert pair.mixing_X == pytest.approx(mixing_x(-1, sol.z_mu), rel=1e-15)
        assert pair.to_dict()["label"] == "1s_{1/2}"

    def test_radial_kg_rejects_dirac(self, make_dirac):
        """测试 radial_kg 拒绝 Dirac 解"""
        sol = dirac_solution(make_dirac(N=1, kappa=-1, Z=1, eta=ETA))
        with pytest.raises(InvalidParameterError):
            radial_kg(sol, np.array([1.0]))

"""不等式与恒等式验证套件

每项检查由名称注册，随机输入全部由 numpy 的 default_rng 按 (seed, 序号) 生成，
相同种子的两次运行输出逐字节相同。
"""

import json
import logging
import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..core.config import tolerances
from ..core.profiles import TOY_PROFILE
from ..models import (
    Box,
    CheckOutcome,
    ComplexField,
    CubeMethod,
    GridSet,
    HuntOutcome,
    IncrementKind,
    LineSet,
    VerifyLine,
)
from . import fourier
from .corners import (
    behrend_construct,
    corner_existence_check,
    count_corners,
    count_corners_pointwise,
    decompose,
    embed_corner_free,
    three_ap_free,
    trilinear_bound_check,
    verify_witness,
)
from .driver import corner_hunt, replay_trace
from .energy import energy_increment_run, saturation_bound_check, uniform_rectangle_locate
from .graphview import (
    density_split_counts,
    gram_spectrum,
    level_set_partition,
    quadratic_form_check,
    rayleigh_lower_bound,
    spectral_uniformity_check,
)
from .increment import find_density_increment
from .partition import ap_partition, check_ap_partition, check_square_family, right_square_partition
from .uniformity import (
    alpha_uniformity_1d,
    alpha_uniformity_2d,
    box_fourth_power_dual,
    box_inner_product,
    box_norm,
    count_cubes,
    cube_bounds_report,
    fourier_bounds,
    progression_discrepancy,
    spectral_criterion_2d,
)
from .zn_core import (
    GENERIC_SCALE,
    STANDARD_SCALE,
    balanced_box_function,
    balanced_function,
    marginal_profile,
    marginal_uniformity_check,
)

logger = logging.getLogger(__name__)

CheckFn = Callable[[np.random.Generator, int], List[CheckOutcome]]


class CheckSpec(BaseModel):
    """注册的一项检查"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    module: str
    trials: int
    quick_trials: int
    run: CheckFn


CHECK_REGISTRY: Dict[str, CheckSpec] = {}


def register(name: str, module: str, trials: int, quick_trials: int) -> Callable[[CheckFn], CheckFn]:
    def decorator(fn: CheckFn) -> CheckFn:
        if name in CHECK_REGISTRY:
            raise ValueError(f"检查 '{name}' 重复注册")
        CHECK_REGISTRY[name] = CheckSpec(name=name, module=module, trials=trials, quick_trials=quick_trials, run=fn)
        return fn

    return decorator


def _outcome(name: str, held: bool, margin: float, hypothesis: bool = True, detail: str = "") -> CheckOutcome:
    return CheckOutcome(
        name=name,
        hypothesis_satisfied=hypothesis,
        conclusion_held=bool(held) if hypothesis else None,
        margin=float(margin),
        detail=detail,
    )


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------- 随机输入

def _random_line(rng: np.random.Generator, n: int, keep: float = 0.7) -> LineSet:
    mask = rng.random(n) < keep
    if not mask.any():
        mask[rng.integers(n)] = True
    return LineSet.from_mask(mask)


def _random_box(rng: np.random.Generator, n: int) -> Box:
    return Box(e1=_random_line(rng, n), e2=_random_line(rng, n))


def _random_set(rng: np.random.Generator, n: int, p: float, box: Optional[Box] = None) -> GridSet:
    mask = rng.random((n, n)) < p
    if box is not None:
        mask &= box.indicator()
    return GridSet(n, mask)


def _random_field(rng: np.random.Generator, n: int, arity: int) -> np.ndarray:
    shape = (n,) * arity
    radius = np.sqrt(rng.random(shape))
    phase = np.exp(2j * np.pi * rng.random(shape))
    return radius * phase


def _planted_set(rng: np.random.Generator, n: int) -> GridSet:
    """随机背景上植入一个更稠密的子块"""
    mask = rng.random((n, n)) < rng.uniform(0.1, 0.4)
    side = int(rng.integers(max(2, n // 4), max(3, n // 2)))
    k0, m0 = rng.integers(0, n - side + 1, size=2)
    mask[k0 : k0 + side, m0 : m0 + side] |= rng.random((side, side)) < 0.9
    return GridSet(n, mask)


def _block_set(rng: np.random.Generator, n: int) -> GridSet:
    """四个象限各取不同密度"""
    mask = np.zeros((n, n), dtype=bool)
    h = n // 2
    for qx in range(2):
        for qy in range(2):
            p = rng.uniform(0.05, 0.95)
            mask[qx * h : (qx + 1) * h, qy * h : (qy + 1) * h] = rng.random((h, h)) < p
    mask[0, 0] = True
    return GridSet(n, mask)


def _graded_blocks(rng: np.random.Generator, n: int) -> GridSet:
    """象限密度自上而下递减，与 1、1/2、1/4、0 相近"""
    mask = np.zeros((n, n), dtype=bool)
    h = n // 2
    levels = np.array([0.98, 0.55, 0.25, 0.02]) + rng.uniform(-0.02, 0.02, size=4)
    for i, (qx, qy) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        mask[qx * h : (qx + 1) * h, qy * h : (qy + 1) * h] = rng.random((h, h)) < levels[i]
    mask[0, 0] = True
    return GridSet(n, mask)


def _greedy_ap_free(rng: np.random.Generator, k: int) -> List[int]:
    chosen: List[int] = []
    for x in rng.permutation(k).tolist():
        if three_ap_free(chosen + [x]):
            chosen.append(x)
    return sorted(chosen)


# ---------------------------------------------------------------- zn_core

@register("marginal-sums", "zn_core", 200, 20)
def _marginal_sums(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([6, 8, 12]))
        box = _random_box(rng, n)
        A = _random_set(rng, n, rng.random(), box)
        p = marginal_profile(A, box)
        by_rows = p.size_e1 * sum(p.row_density.values(), Fraction(0))
        by_cols = p.size_e2 * sum(p.col_density.values(), Fraction(0))
        held = by_rows == len(A) == by_cols
        out.append(_outcome("marginal-sums", held, 0.0 if held else -1.0))
    return out


@register("balanced-row-sums", "zn_core", 200, 20)
def _balanced_row_sums(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([6, 8, 12]))
        box = _random_box(rng, n)
        A = _random_set(rng, n, rng.random(), box)
        values = balanced_box_function(A, box).values.real
        sums = np.abs(values[box.e1.index()].sum(axis=0))
        worst = float(sums.max())
        out.append(_outcome("balanced-row-sums", worst <= tolerances.roundtrip * n, tolerances.roundtrip * n - worst))
    return out


@register("marginal-monotone", "zn_core", 200, 20)
def _marginal_monotone(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([6, 8, 12]))
        box = _random_box(rng, n)
        profile = marginal_profile(_random_set(rng, n, rng.random(), box), box)
        low, high = sorted(Fraction(int(x), 1000) for x in rng.integers(1, 1000, size=2))
        scale = STANDARD_SCALE if rng.random() < 0.5 else GENERIC_SCALE
        hyp = marginal_uniformity_check(profile, low, scale).holds
        held = marginal_uniformity_check(profile, high, scale).holds if hyp else False
        out.append(_outcome("marginal-monotone", held, float(high - low), hypothesis=hyp))
    return out


# ---------------------------------------------------------------- fourier

def _fourier_sizes(rng) -> Tuple[int, int]:
    return int(rng.choice([8, 12, 16, 64])), int(rng.choice([1, 2]))


@register("parseval", "fourier", 200, 20)
def _parseval(rng, trials):
    out = []
    for _ in range(trials):
        n, arity = _fourier_sizes(rng)
        f = ComplexField.of(_random_field(rng, n, arity))
        lhs = n ** arity * float(np.sum(np.abs(f.values) ** 2))
        rhs = float(np.sum(np.abs(fourier.dft(f).coefficients) ** 2))
        err = _relative(lhs, rhs)
        out.append(_outcome("parseval", err <= tolerances.parseval, tolerances.parseval - err))
    return out


@register("plancherel", "fourier", 200, 20)
def _plancherel(rng, trials):
    out = []
    for _ in range(trials):
        n, arity = _fourier_sizes(rng)
        f = ComplexField.of(_random_field(rng, n, arity))
        g = ComplexField.of(_random_field(rng, n, arity))
        lhs = n ** arity * complex(np.vdot(g.values, f.values))
        rhs = complex(np.vdot(fourier.dft(g).coefficients, fourier.dft(f).coefficients))
        err = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
        out.append(_outcome("plancherel", err <= tolerances.parseval, tolerances.parseval - err))
    return out


@register("correlation-identity", "fourier", 200, 20)
def _correlation_identity(rng, trials):
    out = []
    for _ in range(trials):
        n, arity = _fourier_sizes(rng)
        if arity == 2 and n > 16:
            n = 16
        f = ComplexField.of(_random_field(rng, n, arity))
        g = ComplexField.of(_random_field(rng, n, arity))
        corr = fourier.cross_correlation(f, g, method=fourier.DIRECT)
        lhs = n ** arity * float(np.sum(np.abs(corr.values) ** 2))
        rhs = float(np.sum(np.abs(fourier.dft(f).coefficients) ** 2 * np.abs(fourier.dft(g).coefficients) ** 2))
        err = _relative(lhs, rhs)
        out.append(_outcome("correlation-identity", err <= tolerances.parseval, tolerances.parseval - err))
    return out


@register("dft-roundtrip", "fourier", 200, 20)
def _roundtrip(rng, trials):
    out = []
    for _ in range(trials):
        n, arity = _fourier_sizes(rng)
        f = ComplexField.of(_random_field(rng, n, arity))
        back = fourier.inverse_dft(fourier.dft(f)).values
        err = float(np.max(np.abs(back - f.values))) / max(1.0, float(np.max(np.abs(f.values))))
        out.append(_outcome("dft-roundtrip", err <= tolerances.roundtrip, tolerances.roundtrip - err))
    return out


# ---------------------------------------------------------------- uniformity

def _line_field(rng) -> ComplexField:
    return ComplexField.of(_random_field(rng, int(rng.choice([8, 12, 16, 64])), 1))


@register("fourth-moment", "uniformity", 200, 20)
def _fourth_moment(rng, trials):
    out = []
    for _ in range(trials):
        f = _line_field(rng)
        n = f.modulus
        report = alpha_uniformity_1d(f)
        fourth, _, _ = fourier_bounds(f)
        bound = report.minimal_alpha * float(n) ** 4
        held = report.method_agreement and fourth <= bound * (1 + tolerances.parseval)
        out.append(_outcome("fourth-moment", held, bound - fourth))
    return out


@register("max-coefficient", "uniformity", 200, 20)
def _max_coefficient(rng, trials):
    out = []
    for _ in range(trials):
        f = _line_field(rng)
        n = f.modulus
        _, peak, alpha = fourier_bounds(f)
        bound = alpha ** 0.25 * n
        out.append(_outcome("max-coefficient", peak <= bound * (1 + tolerances.parseval), bound - peak))
    return out


@register("uniformity-converse", "uniformity", 200, 20)
def _uniformity_converse(rng, trials):
    out = []
    for _ in range(trials):
        f = _line_field(rng)
        n = f.modulus
        _, peak, alpha = fourier_bounds(f)
        a = peak / n
        bound = a * a
        out.append(_outcome("uniformity-converse", alpha <= bound * (1 + tolerances.parseval), bound - alpha))
    return out


@register("correlation-deviation", "uniformity", 200, 20)
def _correlation_deviation(rng, trials):
    out = []
    for _ in range(trials):
        f = _line_field(rng)
        n = f.modulus
        g = ComplexField.of(_random_field(rng, n, 1))
        alpha = alpha_uniformity_1d(f).minimal_alpha
        corr = fourier.cross_correlation(f, g, method=fourier.DIRECT)
        lhs = abs(
            float(np.sum(np.abs(corr.values) ** 2))
            - abs(complex(f.values.sum())) ** 2 * abs(complex(g.values.sum())) ** 2 / n
        )
        rhs = math.sqrt(alpha) * n * n * float(np.sum(np.abs(g.values) ** 2))
        out.append(_outcome("correlation-deviation", lhs <= rhs * (1 + tolerances.parseval), rhs - lhs))
    return out


@register("gowers-cauchy-schwarz", "uniformity", 200, 20)
def _gowers_cauchy_schwarz(rng, trials):
    out = []
    for _ in range(trials):
        fs = [_random_field(rng, 8, 2) for _ in range(4)]
        lhs = abs(box_inner_product(*fs))
        rhs = math.prod(max(box_fourth_power_dual(f), 0.0) ** 0.25 for f in fs)
        out.append(_outcome("gowers-cauchy-schwarz", lhs <= rhs * (1 + tolerances.parseval), rhs - lhs))
    return out


def _box_field(rng, n: int, box: Box) -> ComplexField:
    return ComplexField.of(_random_field(rng, n, 2) * box.indicator())


@register("box-norm-duality", "uniformity", 200, 20)
def _box_duality(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([4, 8, 12, 16]))
        box = _random_box(rng, n)
        value = box_norm(_box_field(rng, n, box), box)
        err = _relative(value.fourth_power, value.dual_formula_fourth_power)
        out.append(_outcome("box-norm-duality", err <= tolerances.duality, tolerances.duality - err))
    return out


@register("box-triangle", "uniformity", 500, 30)
def _box_triangle(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([4, 6, 8]))
        box = _random_box(rng, n)
        f, g = _box_field(rng, n, box), _box_field(rng, n, box)
        total = box_norm(ComplexField.of(f.values + g.values), box).value
        bound = box_norm(f, box).value + box_norm(g, box).value
        out.append(_outcome("box-triangle", total <= bound + tolerances.triangle, bound - total))
    return out


@register("cube-lower-bound", "uniformity", 500, 30)
def _cube_lower(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([6, 8, 12]))
        A = _random_set(rng, n, rng.random())
        cubes = count_cubes(A).count
        lower = A.density ** 4 * n ** 4
        out.append(_outcome("cube-lower-bound", cubes >= lower, float(cubes - lower)))
    return out


@register("cube-methods-agree", "uniformity", 100, 10)
def _cube_methods(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([6, 8, 12]))
        A = _random_set(rng, n, rng.random())
        brute = count_cubes(A, CubeMethod.BRUTE).count
        spectral = count_cubes(A, CubeMethod.SPECTRAL).count
        out.append(_outcome("cube-methods-agree", brute == spectral, -abs(brute - spectral)))
    return out


@register("cube-upper-bound", "uniformity", 500, 30)
def _cube_upper(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([6, 8, 12]))
        report = cube_bounds_report(_random_set(rng, n, rng.random()))
        margin = (report.upper - report.cubes) if report.upper is not None else 0.0
        out.append(
            _outcome("cube-upper-bound", bool(report.upper_holds), margin, hypothesis=report.upper_applicable)
        )
    return out


@register("row-deviation-box-norm", "uniformity", 200, 20)
def _row_deviation_norm(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([6, 8, 12]))
        box = _random_box(rng, n)
        A = _random_set(rng, n, rng.random(), box)
        p = marginal_profile(A, box)
        rows = np.zeros(n)
        for m, d in p.row_density.items():
            rows[m] = float(d - p.delta)
        values = rows[np.newaxis, :] * box.indicator()
        fourth = box_fourth_power_dual(values)
        exact = float(p.size_e1 ** 2 * p.row_deviation ** 2)
        err = _relative(fourth, exact)
        out.append(_outcome("row-deviation-box-norm", err <= tolerances.duality, tolerances.duality - err))
    return out


@register("progression-discrepancy", "uniformity", 50, 5)
def _discrepancy(rng, trials):
    out = []
    n = 16
    boxes = 100 if trials >= 50 else 10
    for _ in range(trials):
        A = _random_set(rng, n, rng.random())
        alpha = alpha_uniformity_2d(balanced_function(A)).minimal_alpha
        for _ in range(boxes):
            s1, s2 = rng.integers(0, n, size=2)
            l1, l2 = rng.integers(1, n + 1, size=2)
            P = Box(e1=LineSet.interval(n, int(s1), int(l1)), e2=LineSet.interval(n, int(s2), int(l2)))
            report = progression_discrepancy(A, P, alpha)
            out.append(_outcome("progression-discrepancy", report.holds, report.bound - report.discrepancy))
    return out


# ---------------------------------------------------------------- corners

@register("corner-count-enumerations", "corners", 100, 10)
def _corner_enumerations(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.integers(2, 25))
        A = _random_set(rng, n, rng.random())
        by_d = count_corners(A).count
        by_point = count_corners_pointwise(A)
        out.append(_outcome("corner-count-enumerations", by_d == by_point, -abs(by_d - by_point)))
    return out


@register("embed-corner-free", "corners", 100, 10)
def _embed_corner_free(rng, trials):
    out = []
    for _ in range(trials):
        k = int(rng.integers(1, 61 if trials >= 100 else 21))
        values = _greedy_ap_free(rng, k)
        hyp = three_ap_free(values)
        A = embed_corner_free(LineSet(modulus=k, members=values), 3 * k)
        count = count_corners(A).count if hyp else 0
        out.append(_outcome("embed-corner-free", count == 0, -count, hypothesis=hyp))
    return out


@register("behrend-embedding", "corners", 2, 1)
def _behrend_embedding(rng, trials):
    out = []
    for k in (20, 100)[:trials]:
        result = behrend_construct(k)
        hyp = three_ap_free(result.values)
        count = count_corners(embed_corner_free(result.members, 3 * k)).count if hyp else 0
        out.append(_outcome("behrend-embedding", count == 0, -count, hypothesis=hyp, detail=f"K={k}"))
    return out


@register("behrend-three-ap-free", "corners", 100, 10)
def _behrend_ap_free(rng, trials):
    out = []
    for _ in range(trials):
        result = behrend_construct(int(rng.integers(1, 400)))
        out.append(_outcome("behrend-three-ap-free", three_ap_free(result.values), 0.0))
    return out


@register("trilinear-box-bound", "corners", 100, 10)
def _trilinear_bound(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([6, 8]))
        h, g = (ComplexField.of(_random_field(rng, n, 2)) for _ in range(2))
        f = balanced_function(_random_set(rng, n, rng.random()))
        out.append(trilinear_bound_check(h, g, f))
    return out


@register("trilinear-decomposition", "corners", 100, 10)
def _trilinear_decomposition(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([6, 8, 12]))
        box = _random_box(rng, n)
        A = _random_set(rng, n, rng.uniform(0.2, 0.9), box)
        Q1 = GridSet(n, A.indicator() & (rng.random((n, n)) < 0.7))
        Q2 = GridSet(n, A.indicator() & (rng.random((n, n)) < 0.7))
        report = decompose(Q1, Q2, A, box)
        err = abs(report.residual) / max(1.0, abs(report.total))
        out.append(_outcome("trilinear-decomposition", err <= tolerances.decomposition, tolerances.decomposition - err))
    return out


@register("corner-existence", "corners", 100, 10)
def _corner_existence(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([6, 8, 10]))
        A = _random_set(rng, n, rng.uniform(0.05, 0.4))
        Q1 = GridSet(n, A.indicator() & (rng.random((n, n)) < 0.8))
        Q2 = GridSet(n, A.indicator() & (rng.random((n, n)) < 0.8))
        out.append(corner_existence_check(Q1, Q2, A))
    return out


# ---------------------------------------------------------------- graphview

@register("quadratic-form-bound", "graphview", 200, 20)
def _quadratic_form(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.integers(1, 17))
        c = rng.normal(size=(n, n))
        a = rng.normal(size=n)
        out.append(quadratic_form_check(c, a))
    return out


def _square_box(rng, n: int) -> Box:
    side = int(rng.integers(max(1, n // 2), n + 1))
    e1 = np.sort(rng.choice(n, size=side, replace=False))
    e2 = np.sort(rng.choice(n, size=side, replace=False))
    return Box(e1=LineSet(modulus=n, members=e1.tolist()), e2=LineSet(modulus=n, members=e2.tolist()))


def _spectral_sample(rng):
    n = int(rng.choice([8, 16, 32]))
    box = Box.full(n) if rng.random() < 0.5 else _square_box(rng, n)
    A = _random_set(rng, n, rng.random(), box)
    return A, box, gram_spectrum(A, box)


@register("spectral-trace", "graphview", 200, 20)
def _spectral_trace(rng, trials):
    out = []
    for _ in range(trials):
        _, _, rep = _spectral_sample(rng)
        err = _relative(rep.trace, rep.expected_trace)
        out.append(_outcome("spectral-trace", err <= tolerances.trace, tolerances.trace - err))
    return out


@register("spectral-trace-squares", "graphview", 200, 20)
def _spectral_trace_squares(rng, trials):
    out = []
    for _ in range(trials):
        _, _, rep = _spectral_sample(rng)
        err = _relative(rep.trace_squares, rep.expected_trace_squares)
        out.append(_outcome("spectral-trace-squares", err <= tolerances.trace, tolerances.trace - err))
    return out


@register("mu1-lower-bound", "graphview", 200, 20)
def _mu1_lower(rng, trials):
    out = []
    for _ in range(trials):
        A, box, rep = _spectral_sample(rng)
        n2 = float(rep.n) ** 2
        lower = float(rep.delta) ** 2 * n2
        rayleigh = rayleigh_lower_bound(A, box)
        mu1 = rep.mu[0]
        slack = tolerances.slack * n2
        held = mu1 >= lower - slack and mu1 >= rayleigh - slack
        out.append(_outcome("mu1-lower-bound", held, mu1 - max(lower, rayleigh)))
    return out


@register("eigenvector-orthogonality", "graphview", 100, 10)
def _orthogonality(rng, trials):
    out = []
    for _ in range(trials):
        _, _, rep = _spectral_sample(rng)
        gram = rep.vectors.T @ rep.vectors
        worst = float(np.max(np.abs(gram - rep.n * np.eye(rep.n))))
        bound = tolerances.orthogonality * rep.n
        out.append(_outcome("eigenvector-orthogonality", worst <= bound, bound - worst))
    return out


@register("spectral-uniformity", "graphview", 100, 10)
def _spectral_uniformity(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([8, 12, 16]))
        A = _random_set(rng, n, rng.uniform(0.1, 0.9))
        report = spectral_uniformity_check(A, None, alpha=float(rng.uniform(0.0, 0.5)), epsilon=float(rng.uniform(0.0, 0.5)))
        out.extend(report.checks)
    return out


@register("level-set-partition", "graphview", 100, 10)
def _level_sets(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.integers(1, 65))
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        v *= math.sqrt(n) / max(float(np.linalg.norm(v)), 1e-12)
        alpha = min(0.25, 1.0 / max(float(np.abs(v).max()), 1e-12))
        xi = float(rng.uniform(0.05, 0.45))
        part = level_set_partition(v, alpha, xi)
        seen = sorted(i for cls in part.classes for i in cls)
        covered = seen == list(range(n))
        centers = [complex(x, y) for x, y in part.centers]
        worst = max(
            (abs(v[i] - c) for cls, c in zip(part.classes, centers) for i in cls), default=0.0
        )
        inside = all(abs(c) <= 1 / alpha + tolerances.level_set for c in centers)
        held = covered and worst <= xi + tolerances.level_set and inside and part.within_count_bound
        out.append(_outcome("level-set-partition", held, xi - worst))
    return out


@register("density-split", "graphview", 200, 20)
def _density_split(rng, trials):
    out = []
    for _ in range(trials):
        sizes = rng.integers(1, 20, size=int(rng.integers(1, 12))).tolist()
        hits = [int(rng.integers(0, s + 1)) for s in sizes]
        eta = Fraction(int(rng.integers(1, 100)), 100)
        split = density_split_counts(hits, sizes, eta)
        out.append(_outcome("density-split", split.inequality_holds, float(split.lhs - split.rhs)))
    return out


@register("increment-soundness", "graphview", 100, 8)
def _increment_soundness(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([16, 24]))
        A = _planted_set(rng, n)
        box = Box.full(n)
        if rng.random() < 0.3:
            box = Box(e1=LineSet.full(n), e2=LineSet.interval(n, 0, n // 2 + int(rng.integers(1, n // 2))))
            A = A.restrict(box)
        if not len(A):
            continue
        result = find_density_increment(A, box, alpha=float(rng.uniform(0.05, 0.5)), profile=TOY_PROFILE)
        if result.kind == IncrementKind.UNIFORM:
            out.append(_outcome("increment-soundness", True, 0.0, detail="uniform"))
            continue
        chi = A.indicator()
        count = int(chi[np.ix_(result.g1.index(), result.g2.index())].sum())
        exact = result.new_density * len(result.g1) * len(result.g2) == count
        held = exact and result.new_density > result.delta
        out.append(_outcome("increment-soundness", held, float(result.new_density - result.delta), detail=result.route))
    return out


# ---------------------------------------------------------------- partition

@register("ap-partition", "partition", 50, 10)
def _ap_partition(rng, trials):
    out = []
    top = 10 ** 4 if trials >= 50 else 2000
    for _ in range(trials):
        n = int(rng.integers(1, top + 1))
        r1, r2 = (int(x) for x in rng.integers(-n, n + 1, size=2))
        if r1 == 0 and r2 == 0:
            r1 = 1
        s = int(rng.integers(1, n + 1))
        problems = check_ap_partition(ap_partition(n, r1, r2, s, seed=int(rng.integers(2 ** 31))))
        out.append(_outcome("ap-partition", not problems, -len(problems), detail="; ".join(problems)))
    return out


@register("right-square-partition", "partition", 50, 6)
def _right_squares(rng, trials):
    out = []
    for _ in range(trials):
        n = int(rng.choice([12, 16, 24]))
        A = _random_set(rng, n, rng.uniform(0.2, 0.8)) if rng.random() < 0.5 else _block_set(rng, n)
        r, value, _ = spectral_criterion_2d(balanced_function(A), 0.0)
        hyp = value > 1e-9 * n * n
        if not hyp:
            out.append(_outcome("right-square-partition", True, 0.0, hypothesis=False))
            continue
        report = right_square_partition(A, r)
        problems = check_square_family(report.family)
        out.append(_outcome("right-square-partition", not problems, -len(problems), detail="; ".join(problems)))
    return out


def _energy_runs(rng, trials):
    law = TOY_PROFILE.power_law
    runs = []
    for i in range(trials):
        W = _random_set(rng, 32, 0.5) if i % 4 == 3 else _graded_blocks(rng, 32)
        epsilon = min(W.density, Fraction(1, 64))
        runs.append((W, energy_increment_run(W, epsilon, law, TOY_PROFILE, max_iters=5)))
    return runs


@register("energy-decomposition", "partition", 20, 3)
def _energy_decomposition(rng, trials):
    out = []
    for _, run in _energy_runs(rng, trials):
        for state in run.trace:
            d = state.decomposition
            hyp = d is not None
            out.append(_outcome("energy-decomposition", bool(d and d.holds), 0.0, hypothesis=hyp))
    return out


@register("energy-monotone", "partition", 20, 3)
def _energy_monotone(rng, trials):
    out = []
    for W, run in _energy_runs(rng, trials):
        previous = Fraction(len(W) ** 2, W.modulus ** 2)
        for state in run.trace:
            hyp = state.refined_cells > 0
            out.append(_outcome("energy-monotone", state.energy > previous, float(state.energy - previous), hypothesis=hyp))
            previous = state.energy
    return out


@register("energy-bound", "partition", 20, 3)
def _energy_bound(rng, trials):
    out = []
    for W, run in _energy_runs(rng, trials):
        cap = W.modulus ** 2
        for state in run.trace:
            out.append(_outcome("energy-bound", state.energy <= cap, float(cap - state.energy)))
    return out


@register("energy-accounting", "partition", 20, 3)
def _energy_accounting(rng, trials):
    out = []
    for W, run in _energy_runs(rng, trials):
        for state in run.trace:
            gap = len(W) - state.cover_mass - state.bad_mass
            out.append(_outcome("energy-accounting", gap == 0, -abs(gap)))
        chi = W.indicator()
        final = sum(int(c.local(chi).sum()) for c in run.squares) + len(run.bad)
        out.append(_outcome("energy-accounting", final == len(W), -abs(final - len(W)), detail="final"))
    return out


@register("holder-step", "partition", 20, 3)
def _holder(rng, trials):
    return [state.holder for _, run in _energy_runs(rng, trials) for state in run.trace if state.holder]


@register("spectral-criterion", "partition", 20, 3)
def _criterion(rng, trials):
    out = []
    for _, run in _energy_runs(rng, trials):
        for state in run.trace:
            hyp = state.nonuniform_cells > 0
            held = state.criterion_hits == state.nonuniform_cells
            out.append(_outcome("spectral-criterion", held, state.criterion_hits - state.nonuniform_cells, hypothesis=hyp))
    return out


@register("saturation-bound", "partition", 500, 30)
def _saturation(rng, trials):
    out = []
    for _ in range(trials):
        side = int(rng.choice([8, 12]))
        n = side + int(rng.integers(0, 5))
        e1 = np.sort(rng.choice(n, size=side, replace=False)).tolist()
        e2 = np.sort(rng.choice(n, size=side, replace=False)).tolist()
        box = Box(e1=LineSet(modulus=n, members=e1), e2=LineSet(modulus=n, members=e2))
        report = saturation_bound_check(_random_set(rng, n, rng.random(), box), box)
        out.append(_outcome("saturation-bound", report.holds, report.rhs - report.lhs))
    return out


@register("uniform-rectangle", "partition", 10, 3)
def _uniform_rectangle(rng, trials):
    out = []
    law = TOY_PROFILE.power_law
    for _ in range(trials):
        n = 24
        W1, W2 = _random_line(rng, n, 0.8), _random_line(rng, n, 0.8)
        box = Box(e1=W1, e2=W2)
        A = _random_set(rng, n, rng.uniform(0.2, 0.6), box)
        if not len(A):
            continue
        loc = uniform_rectangle_locate(W1, W2, A, Fraction(1, 8), law, TOY_PROFILE, max_iters=4)
        hyp = loc.found and loc.bad_mass == 0
        out.append(_outcome("uniform-rectangle", bool(loc.density is not None and loc.density >= loc.delta),
                            float((loc.density or 0) - loc.delta), hypothesis=hyp))
    return out


# ---------------------------------------------------------------- driver

@register("hunt-witness", "driver", 50, 4)
def _hunt_witness(rng, trials):
    out = []
    n = 48 if trials >= 50 else 24
    for _ in range(trials):
        A = _random_set(rng, n, rng.uniform(0.3, 0.5))
        result = corner_hunt(A, TOY_PROFILE, max_steps=64)
        found = result.outcome == HuntOutcome.CORNER and result.witness is not None
        held = found and verify_witness(A, result.witness)
        out.append(_outcome("hunt-witness", held, 0.0 if held else -1.0))
    return out


def _hunts(rng, trials):
    hunts = []
    for i in range(trials):
        if i % 2 == 0:
            k = int(rng.choice([8, 12, 20]))
            A = embed_corner_free(behrend_construct(k).members, 3 * k)
        else:
            A = _planted_set(rng, 24)
        hunts.append((A, corner_hunt(A, TOY_PROFILE, max_steps=16)))
    return hunts


@register("hunt-monotone", "driver", 10, 2)
def _hunt_monotone(rng, trials):
    out = []
    for A, result in _hunts(rng, trials):
        density = A.density
        sizes = [A.modulus, A.modulus]
        for record in result.trace:
            grew = record.density > density if record.branch.value.endswith("increment") else record.density >= density
            shrank = all(new <= old for new, old in zip(record.box_sizes, sizes))
            out.append(_outcome("hunt-monotone", grew and shrank, float(record.density - density)))
            density, sizes = record.density, record.box_sizes
    return out


@register("hunt-replay", "driver", 10, 2)
def _hunt_replay(rng, trials):
    out = []
    for A, result in _hunts(rng, trials):
        for step, same in replay_trace(A, result.trace):
            out.append(_outcome("hunt-replay", same, 0.0 if same else -1.0, detail=f"step {step}"))
    return out


@register("hunt-corner-free-input", "driver", 4, 1)
def _hunt_corner_free(rng, trials):
    out = []
    for k in (20, 12, 8, 16)[:trials]:
        A = embed_corner_free(behrend_construct(k).members, 3 * k)
        result = corner_hunt(A, TOY_PROFILE, max_steps=64)
        held = result.outcome != HuntOutcome.CORNER
        out.append(_outcome("hunt-corner-free-input", held, 0.0 if held else -1.0, detail=result.outcome.value))
    return out


# ---------------------------------------------------------------- 运行

def summarize(spec: CheckSpec, outcomes: List[CheckOutcome]) -> VerifyLine:
    satisfied = [o for o in outcomes if o.hypothesis_satisfied]
    return VerifyLine(
        check=spec.name,
        module=spec.module,
        trials=len(outcomes),
        hypothesis_satisfied=len(satisfied),
        conclusion_held=sum(1 for o in satisfied if o.conclusion_held),
        worst_margin=min((o.margin for o in satisfied), default=None),
        failures=sum(1 for o in outcomes if o.failed),
    )


def run_check(name: str, seed: int, quick: bool = False) -> VerifyLine:
    """
    运行单项检查

    Raises:
        KeyError: 未注册的检查名
    """
    spec = CHECK_REGISTRY[name]
    index = list(CHECK_REGISTRY).index(name)
    rng = np.random.default_rng([seed, index])
    outcomes = spec.run(rng, spec.quick_trials if quick else spec.trials)
    line = summarize(spec, outcomes)
    mark = "✓" if line.passed else "✗"
    logger.info(f"{mark} {name}: {line.conclusion_held}/{line.hypothesis_satisfied} (试验 {line.trials})")
    return line


def run_verify(seed: int, quick: bool = False, only: Optional[List[str]] = None) -> List[VerifyLine]:
    """按注册顺序运行检查，only 给出时只运行其中的检查"""
    names = list(CHECK_REGISTRY) if not only else [n for n in CHECK_REGISTRY if n in set(only)]
    return [run_check(name, seed, quick) for name in names]


def format_line(line: VerifyLine) -> str:
    return json.dumps(line.model_dump(by_alias=True), sort_keys=True, ensure_ascii=False)


def invariant_manifest() -> Dict[str, List[str]]:
    """模块名 → 该模块的检查名，按注册顺序"""
    manifest: Dict[str, List[str]] = {}
    for spec in CHECK_REGISTRY.values():
        manifest.setdefault(spec.module, []).append(spec.name)
    return manifest

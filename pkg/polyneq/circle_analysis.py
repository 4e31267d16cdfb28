"""
원 위 최대/최소 추정
- max_{|z|=r} |Q(z)|: 등간격 격자 -> 국소 최대 후보 -> 각도 방향 1차원 정밀화 -> 격자 배가 수렴 확인
- 점별 최소: |num|/|den| 비율, Dubinin 실수부
- 추정은 수렴 확인용이며 구간 연산 인증은 하지 않는다
"""

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import minimize_scalar

from polyneq.errors import ContractViolation, NoAdmissibleSamplesError
from polyneq.models import CheckReport, InequalityId, MaxModEstimate, PolarPoint, Polynomial, RootForm
from polyneq.operators import polar_derivative
from polyneq.poly_core import PREDICATE_TOL, derivative

logger = logging.getLogger(__name__)

GRID_FLOOR = 1024
GRID_PER_DEGREE = 128
POINTWISE_GRID_FLOOR = 4096
POINTWISE_GRID_PER_DEGREE = 256
CONVERGENCE_REL = 1e-12
MAX_DOUBLINGS = 3
ANGULAR_XATOL = 1e-14
FLOOR_FRAC = 1e-6
REFINE_CANDIDATES = 8

TWO_PI = 2.0 * math.pi


def _values(coeffs: np.ndarray, r: float, thetas: np.ndarray) -> np.ndarray:
    return npoly.polyval(r * np.exp(1j * thetas), coeffs)


def _refine(objective: Callable[[float], float], center: float, half_width: float) -> Tuple[float, float]:
    """[center - h, center + h] 에서 objective 최소화 (bounded Brent, 황금분할 기반)"""
    result = minimize_scalar(
        objective,
        bounds=(center - half_width, center + half_width),
        method="bounded",
        options={"xatol": ANGULAR_XATOL},
    )
    return float(result.x), float(result.fun)


# ============================================================================
# 최대 모듈러스
# ============================================================================

def _max_on_grid(coeffs: np.ndarray, r: float, size: int, candidates: int) -> Tuple[float, float]:
    thetas = TWO_PI * np.arange(size) / size
    moduli = np.abs(_values(coeffs, r, thetas))

    # 원형 격자의 국소 최대 (평탄한 구간 포함)
    peaks = np.flatnonzero((moduli >= np.roll(moduli, 1)) & (moduli >= np.roll(moduli, -1)))
    peaks = peaks[np.argsort(moduli[peaks])[::-1][:candidates]]

    best_index = int(np.argmax(moduli))
    best_value, best_theta = float(moduli[best_index]), float(thetas[best_index])
    step = TWO_PI / size

    def neg_square(theta: float) -> float:
        # |q|^2 는 theta 의 매끄러운 삼각다항식
        return -float(abs(npoly.polyval(r * np.exp(1j * theta), coeffs)) ** 2)

    for index in peaks:
        theta, fun = _refine(neg_square, float(thetas[index]), step)
        value = math.sqrt(max(-fun, 0.0))
        if value > best_value:
            best_value, best_theta = value, theta
    return best_value, best_theta % TWO_PI


def max_modulus(
    q: Polynomial,
    r: float,
    convergence_rel: float = CONVERGENCE_REL,
    max_doublings: int = MAX_DOUBLINGS,
) -> MaxModEstimate:
    """max_{|z|=r} |q(z)| 추정"""
    if not r > 0:
        raise ContractViolation(f"circle radius must be positive, got {r}")

    coeffs = q.array
    n = max(q.degree, 1)
    size = max(GRID_FLOOR, GRID_PER_DEGREE * n)
    candidates = 2 * n + 4

    best_value, best_theta = _max_on_grid(coeffs, r, size, candidates)
    rel_gap = math.inf
    for _ in range(max_doublings):
        size *= 2
        value, theta = _max_on_grid(coeffs, r, size, candidates)
        rel_gap = abs(value - best_value) / max(value, best_value, 1e-300)
        if value > best_value:
            best_value, best_theta = value, theta
        if rel_gap < convergence_rel:
            return MaxModEstimate(value=best_value, theta=best_theta, grid=size, refined=True, rel_gap=rel_gap)

    logger.warning("max_modulus: no convergence after %d doublings (rel_gap=%.3e)", max_doublings, rel_gap)
    return MaxModEstimate(
        value=best_value,
        theta=best_theta,
        grid=size,
        refined=False,
        rel_gap=rel_gap if math.isfinite(rel_gap) else 0.0,
    )


# ============================================================================
# 점별 최소
# ============================================================================

def _locate_min(
    objective: Callable[[np.ndarray], np.ndarray],
    magnitude: Callable[[np.ndarray], np.ndarray],
    size: int,
    floor_frac: float,
) -> Tuple[float, float]:
    """허용 샘플(|magnitude| >= floor_frac * max) 위에서 objective 의 최소와 그 각도"""
    thetas = TWO_PI * np.arange(size) / size
    weights = magnitude(thetas)
    peak = float(np.max(weights))
    if peak == 0:
        raise ContractViolation("denominator vanishes identically on the circle")
    floor = floor_frac * peak
    admissible = weights >= floor
    if not admissible.any():
        raise NoAdmissibleSamplesError("no admissible samples on the circle")

    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(admissible, objective(thetas), np.inf)
    order = np.argsort(values)[:REFINE_CANDIDATES]
    order = order[np.isfinite(values[order])]
    best_value, best_theta = float(values[order[0]]), float(thetas[order[0]])

    def scalar(theta: float) -> float:
        point = np.array([theta])
        with np.errstate(divide="ignore", invalid="ignore"):
            value = float(objective(point)[0])
        return value if math.isfinite(value) else 1e300

    step = TWO_PI / size
    for index in order:
        theta, fun = _refine(scalar, float(thetas[index]), step)
        if fun < best_value and magnitude(np.array([theta]))[0] >= floor:
            best_value, best_theta = fun, theta
    return best_value, best_theta % TWO_PI


def locate_ratio_min(num: Polynomial, den: Polynomial, r: float, floor_frac: float = FLOOR_FRAC) -> Tuple[float, float]:
    """min |num|/|den| 과 argmin 각도"""
    if not r > 0:
        raise ContractViolation(f"circle radius must be positive, got {r}")
    n = max(num.degree, den.degree, 1)
    size = max(POINTWISE_GRID_FLOOR, POINTWISE_GRID_PER_DEGREE * n)
    num_c, den_c = num.array, den.array
    return _locate_min(
        lambda t: np.abs(_values(num_c, r, t)) / np.abs(_values(den_c, r, t)),
        lambda t: np.abs(_values(den_c, r, t)),
        size,
        floor_frac,
    )


def pointwise_ratio_min(num: Polynomial, den: Polynomial, r: float, floor_frac: float = FLOOR_FRAC) -> float:
    return locate_ratio_min(num, den, r, floor_frac)[0]


def _dubinin_terms(roots: np.ndarray, r: float, boundary_tol: float) -> Callable[[np.ndarray], np.ndarray]:
    """|z| = r 에서 Re(z P'/P) = sum_j Re(z/(z - z_j)) = sum_j [1/2 + (r^2 - |z_j|^2) / (2|z - z_j|^2)]"""
    gap = r * r - np.abs(roots) ** 2
    # 원 위의 근(상대 오차 boundary_tol 이내)은 정확히 1/2 을 기여한다
    gap[np.abs(np.abs(roots) - r) <= boundary_tol * r] = 0.0
    on_circle = gap == 0.0

    def quantity(t: np.ndarray) -> np.ndarray:
        z = r * np.exp(1j * t)
        dist = np.abs(z[:, None] - roots[None, :]) ** 2
        terms = np.where(on_circle[None, :], 0.0, gap[None, :] / dist)
        return 0.5 * len(roots) + 0.5 * terms.sum(axis=1)

    return quantity


def locate_dubinin_min(
    p: Polynomial,
    r: float,
    floor_frac: float = FLOOR_FRAC,
    roots: Optional[RootForm] = None,
    boundary_tol: float = PREDICATE_TOL,
) -> Tuple[float, float]:
    """min Re(z P'(z)/P(z)) 과 argmin 각도

    roots 가 주어지면 근 형태의 합으로 계산한다. 원 위에 근이 있을 때 계수 기반 몫은
    근 근처에서 상쇄 오차가 커지지만 근 형태 합은 그렇지 않다.
    """
    if p.degree < 1:
        raise ContractViolation("Dubinin quantity requires degree >= 1")
    if not r > 0:
        raise ContractViolation(f"circle radius must be positive, got {r}")
    size = max(POINTWISE_GRID_FLOOR, POINTWISE_GRID_PER_DEGREE * p.degree)
    coeffs = p.array

    if roots is not None:
        quantity = _dubinin_terms(roots.roots_array, r, boundary_tol)
    else:
        slope = derivative(p).array

        def quantity(t: np.ndarray) -> np.ndarray:
            z = r * np.exp(1j * t)
            return (z * npoly.polyval(z, slope) / npoly.polyval(z, coeffs)).real

    return _locate_min(quantity, lambda t: np.abs(_values(coeffs, r, t)), size, floor_frac)


def pointwise_dubinin_min(
    p: Polynomial, r: float, floor_frac: float = FLOOR_FRAC, roots: Optional[RootForm] = None
) -> float:
    return locate_dubinin_min(p, r, floor_frac, roots)[0]


# ============================================================================
# 성장 인자 / 경계 성장
# ============================================================================

def growth_factor(p: Polynomial, R: float) -> float:
    """max_{|z|=R}|P| / max_{|z|=1}|P|, R >= 1 에서 R^n 이하"""
    if R < 1:
        raise ContractViolation(f"growth factor requires R >= 1, got {R}")
    unit = max_modulus(p, 1.0).value
    if unit == 0:
        raise ContractViolation("growth factor of the zero polynomial is undefined")
    return max_modulus(p, R).value / unit


def boundary_growth_check(r: RootForm, k: float) -> CheckReport:
    """max_{|z|=k}|P| >= 2k^n/(1+k^n) max_{|z|=1}|P| 검사 (영점 |z| <= k, k >= 1)"""
    from polyneq.inequality_catalog import run_check

    return run_check(InequalityId.LEMMA3_13, r, k=k)


def limit_defect_max(p: Polynomial, a: PolarPoint, R: float) -> float:
    """max_{|z|<=R} |D_alpha[P](z)/alpha - P'(z)| = max_{|z|=R} |nP - zP'| / |alpha|"""
    if a.modulus == 0:
        raise ContractViolation("limit defect requires alpha != 0")
    remainder = polar_derivative(p, PolarPoint(alpha=0j))
    return max_modulus(remainder, R).value / a.modulus

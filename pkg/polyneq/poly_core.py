"""
복소 다항식 기본 연산
- Horner 평가, 미분, 근 <-> 계수 변환, Aberth-Ehrlich 근 찾기
- 모든 함수는 순수 함수 (불변 모델 입력, 새 모델 반환)
"""

import logging
import math
from typing import Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from polyneq.errors import ContractViolation, RootFindingError
from polyneq.models import Polynomial, RootForm

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
PREDICATE_TOL = 1e-9
ABERTH_MAX_ITER = 500
CLUSTER_NEWTON_ITER = 50
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


# ============================================================================
# 평가 / 미분
# ============================================================================

def evaluate(p: Polynomial, z: complex) -> complex:
    """sum a_j z^j (Horner)"""
    return complex(npoly.polyval(complex(z), p.array))


def evaluate_on_circle(p: Polynomial, r: float, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """반지름 r 원 위 등간격 size 개 각도에서의 값 (theta, P(r e^{i theta}))"""
    thetas = 2.0 * np.pi * np.arange(size) / size
    return thetas, npoly.polyval(r * np.exp(1j * thetas), p.array)


def derivative(p: Polynomial) -> Polynomial:
    """P'(z). 상수 입력은 degenerate 로 표시된 0 다항식"""
    if p.degree < 1:
        return Polynomial(coeffs=(0j,), degenerate=True)
    return Polynomial.from_array(npoly.polyder(p.array))


# ============================================================================
# 근 <-> 계수 변환
# ============================================================================

def from_roots(r: RootForm) -> Polynomial:
    """c * prod(z - z_j) 전개. 근이 없으면 상수 c"""
    monic = npoly.polyfromroots(r.roots_array) if r.roots else np.ones(1, dtype=complex)
    coeffs = r.leading * np.asarray(monic, dtype=complex)
    # 전개 결과의 최고차 계수는 정확히 c
    coeffs[-1] = r.leading
    return Polynomial(coeffs=coeffs)


def root_residual(p: Polynomial, roots: np.ndarray) -> float:
    """max_j |p(z_j)| / (|a_n| max(1,|z_j|)^n)"""
    if len(roots) == 0:
        return 0.0
    values = np.abs(npoly.polyval(roots, p.array))
    scale = abs(p.leading) * np.maximum(1.0, np.abs(roots)) ** p.degree
    return float(np.max(values / scale))


def _initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    d = len(coeffs) - 1
    radius = abs(coeffs[0] / coeffs[-1]) ** (1.0 / d)
    if not radius > 0 or not math.isfinite(radius):
        radius = 1.0
    angles = 0.4 + GOLDEN_ANGLE * np.arange(d)
    return radius * np.exp(1j * angles)


def find_roots(p: Polynomial, tol: float = RESIDUAL_TOL, max_iter: int = ABERTH_MAX_ITER) -> RootForm:
    """Aberth-Ehrlich 동시 반복으로 모든 근을 구한다"""
    if p.degree < 1:
        raise ContractViolation("find_roots requires degree >= 1")
    if p.leading == 0:
        raise ContractViolation("find_roots requires a nonzero leading coefficient")

    coeffs = p.array
    # 원점 근은 정확히 분리한다
    origin = 0
    while coeffs[origin] == 0:
        origin += 1
    reduced = coeffs[origin:]
    d = len(reduced) - 1
    zeros_at_origin = np.zeros(origin, dtype=complex)
    if d == 0:
        return RootForm(leading=p.leading, roots=zeros_at_origin)

    deriv = npoly.polyder(reduced)
    z = _initial_guesses(reduced)
    best, best_residual = z.copy(), math.inf
    iterations = 0

    for iterations in range(1, max_iter + 1):
        values = npoly.polyval(z, reduced)
        slopes = npoly.polyval(z, deriv)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = values / slopes
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = np.sum(1.0 / diff, axis=1)
            step = newton / (1.0 - newton * repulsion)
        step[values == 0] = 0.0
        stuck = ~np.isfinite(step)
        if stuck.any():
            # P'(z)=0 또는 근 충돌: 작은 회전 섭동으로 탈출
            kick = 1e-8 * (1.0 + np.abs(z[stuck])) * np.exp(1j * GOLDEN_ANGLE * np.flatnonzero(stuck))
            step[stuck] = kick
        z = z - step

        residual = root_residual(p, np.concatenate([zeros_at_origin, z]))
        if residual < best_residual:
            best, best_residual = z.copy(), residual
        if residual <= tol and np.max(np.abs(step)) <= 1e-12 * max(1.0, float(np.max(np.abs(z)))):
            break

    logger.debug("aberth: degree=%d iterations=%d residual=%.3e", p.degree, iterations, best_residual)
    roots = np.concatenate([zeros_at_origin, best])
    if not best_residual <= tol:
        raise RootFindingError(
            f"root finder did not converge: residual {best_residual:.3e} > tol {tol:.1e}",
            best=roots.tolist(),
            residual=best_residual,
            iterations=iterations,
        )
    return merge_clusters(p, RootForm(leading=p.leading, roots=roots), tol)


def inclusion_radii(p: Polynomial, roots: np.ndarray) -> np.ndarray:
    """근사근 z_j 마다 실제 근을 포함하는 원판 반지름 n|p(z_j)| / |a_n prod_{i!=j}(z_j - z_i)|

    원판들의 합집합은 모든 근을 포함하고, 서로 겹치는 m 개 원판의 연결 성분에는 근이 정확히 m 개 있다.
    """
    n = len(roots)
    values = np.abs(npoly.polyval(roots, p.array))
    diff = roots[:, None] - roots[None, :]
    np.fill_diagonal(diff, 1.0)
    spread = abs(p.leading) * np.prod(np.abs(diff), axis=1)

    radii = np.full(n, np.inf)
    exact = values == 0
    radii[exact] = 0.0
    resolved = ~exact & (spread > 0)
    radii[resolved] = n * values[resolved] / spread[resolved]
    return radii


def _cluster_center(coeffs: np.ndarray, members: np.ndarray, reach: float) -> complex:
    """m 개 근 묶음의 중심: P^(m-1) 의 (단순) 근을 무게중심에서 Newton 으로 찾는다"""
    start = complex(members.mean())
    target = npoly.polyder(coeffs, len(members) - 1)
    slope = npoly.polyder(target)
    z = start
    for _ in range(CLUSTER_NEWTON_ITER):
        d = complex(npoly.polyval(z, slope))
        if d == 0:
            break
        step = complex(npoly.polyval(z, target)) / d
        z -= step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    # 묶음 밖으로 벗어나면 무게중심 사용
    if not math.isfinite(abs(z)) or abs(z - start) > reach:
        return start
    return z


def merge_clusters(p: Polynomial, r: RootForm, tol: float = RESIDUAL_TOL) -> RootForm:
    """포함 원판이 겹치는 근 묶음(다중근)을 중심점 하나로 합친다

    m 중근의 개별 근사값은 tol^(1/m) 정도로 흩어진다. 묶음 중심은 P^(m-1) 의 단순근이므로
    tol 수준으로 정확하다. 합친 결과의 잔차가 tol 을 넘으면 원래 근을 그대로 돌려준다.
    """
    roots = r.roots_array
    if len(roots) < 2:
        return r

    radii = inclusion_radii(p, roots)
    touching = np.abs(roots[:, None] - roots[None, :]) <= radii[:, None] + radii[None, :]
    count, labels = connected_components(csr_matrix(touching), directed=False)
    if count == len(roots):
        return r

    merged = roots.copy()
    for label in range(count):
        members = labels == label
        if members.sum() > 1:
            cluster = roots[members]
            reach = float(np.max(np.abs(cluster - cluster.mean())) + np.max(radii[members]))
            merged[members] = _cluster_center(p.array, cluster, reach)
    if not root_residual(p, merged) <= tol:
        return r
    logger.debug("merged %d roots into %d clusters", len(roots), count)
    return RootForm(leading=r.leading, roots=merged)


# ============================================================================
# 정의역 스케일링 / 영점 위치
# ============================================================================

def scale_domain(p: Polynomial, k: float) -> Polynomial:
    """G(z) = P(kz), 계수 a_j k^j"""
    if not k > 0:
        raise ContractViolation(f"scale factor k must be positive, got {k}")
    powers = float(k) ** np.arange(len(p.coeffs))
    return Polynomial.from_array(p.array * powers)


def scale_roots(r: RootForm, k: float) -> RootForm:
    """G(z) = P(kz) 의 근 형태: 선행계수 c k^n, 근 z_j / k"""
    if not k > 0:
        raise ContractViolation(f"scale factor k must be positive, got {k}")
    return RootForm(leading=r.leading * float(k) ** r.degree, roots=r.roots_array / k)


def zeros_in_disk(r: RootForm, k: float, tol: float = PREDICATE_TOL) -> bool:
    """모든 근이 |z| <= k(1+tol) 안에 있는지"""
    if not k > 0:
        raise ContractViolation(f"disk radius k must be positive, got {k}")
    if not r.roots:
        return True
    return bool(np.max(np.abs(r.roots_array)) <= k * (1.0 + tol))

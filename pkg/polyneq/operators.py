"""
미분형 연산자
- 일반 미분, 일반화 미분 P^gamma, 극 미분 D_alpha, 일반화 극 미분 D_alpha^gamma
- Dubinin 실수부 Re(z P'(z) / P(z)) 와 극 미분 극한 결손
"""

import logging
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from polyneq.errors import ContractViolation, InadmissiblePointError
from polyneq.models import GammaWeights, PolarPoint, Polynomial, RootForm
from polyneq.poly_core import derivative, evaluate, evaluate_on_circle, from_roots

logger = logging.getLogger(__name__)

# floor 미지정 시 원 위 최대 |P| 에 곱하는 비율
DUBININ_FLOOR_FRAC = 1e-6


def _check_pairing(r: RootForm, g: GammaWeights) -> None:
    if r.degree < 1:
        raise ContractViolation("generalized operators require degree n >= 1")
    if g.degree != r.degree:
        raise ContractViolation(f"gamma length {g.degree} does not match degree {r.degree}")


def generalized_derivative(r: RootForm, g: GammaWeights) -> Polynomial:
    """P^gamma(z) = sum_j gamma_j c prod_{i != j}(z - z_i)

    각 부분곱을 독립적으로 전개하므로 z = z_j 에서도 값이 유한하다.
    j 번째 가중치는 j 번째 근에 대응한다.
    """
    _check_pairing(r, g)
    roots = r.roots_array
    total = np.zeros(r.degree, dtype=complex)
    for j, weight in enumerate(g.gamma):
        if weight == 0:
            continue
        others = np.delete(roots, j)
        partial = npoly.polyfromroots(others) if len(others) else np.ones(1)
        total += weight * np.asarray(partial, dtype=complex)
    return Polynomial.from_array(r.leading * total)


def polar_derivative(p: Polynomial, a: PolarPoint) -> Polynomial:
    """D_alpha[P](z) = n P(z) + (alpha - z) P'(z), 차수 <= n-1"""
    n = p.degree
    if n < 1:
        raise ContractViolation("polar derivative requires degree n >= 1")

    coeffs = p.array
    slope = npoly.polyder(coeffs)
    raw = n * coeffs
    raw[:n] += a.alpha * slope
    raw[1:] -= slope

    # z^n 계수는 n a_n - n a_n 으로 소거된다
    limit = 1e-12 * abs(coeffs[-1]) * (n + a.modulus)
    if abs(raw[n]) > limit:
        raise ContractViolation(f"z^n coefficient {abs(raw[n]):.3e} of D_alpha did not cancel")
    return Polynomial.from_array(raw[:n])


def generalized_polar_derivative(r: RootForm, g: GammaWeights, a: PolarPoint) -> Polynomial:
    """D_alpha^gamma[P](z) = Lambda P(z) + (alpha - z) P^gamma(z)

    결과는 차수 슬롯 n 을 유지한다. 최고차 계수 c Lambda - c Lambda 는
    수치적으로만 0 이므로 소비자가 크기를 확인한다.
    """
    _check_pairing(r, g)
    n = r.degree
    base = from_roots(r).array
    weighted = generalized_derivative(r, g).array

    raw = g.lambda_sum * base
    raw[:n] += a.alpha * weighted
    raw[1:] -= weighted
    return Polynomial.from_array(raw)


def dubinin_quantity(p: Polynomial, z: complex, floor: Optional[float] = None) -> float:
    """Re(z P'(z) / P(z)), |P(z)| >= floor 인 점에서만 정의"""
    z = complex(z)
    if floor is None:
        radius = abs(z) if abs(z) > 0 else 1.0
        _, values = evaluate_on_circle(p, radius, max(1024, 128 * max(p.degree, 1)))
        floor = DUBININ_FLOOR_FRAC * float(np.max(np.abs(values)))

    value = evaluate(p, z)
    if abs(value) < floor:
        raise InadmissiblePointError(f"|P(z)| = {abs(value):.3e} below floor {floor:.3e} at z = {z}")
    return (z * evaluate(derivative(p), z) / value).real


def limit_ratio_defect(p: Polynomial, a: PolarPoint, z: complex) -> float:
    """|D_alpha[P](z) / alpha - P'(z)| = |n P(z) - z P'(z)| / |alpha|"""
    if a.modulus < 1:
        raise ContractViolation(f"limit defect requires |alpha| >= 1, got {a.modulus}")
    z = complex(z)
    polar = evaluate(polar_derivative(p, a), z)
    return abs(polar / a.alpha - evaluate(derivative(p), z))

"""
부등식 카탈로그
- 22개 부등식의 가정 스키마와 상/하한 공식 (bound_value 가 유일한 공식 출처)
- run_check: 가정 검사 -> 연산자 적용 -> 원 위 측정 -> CheckReport
"""

import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from polyneq.circle_analysis import FLOOR_FRAC, locate_dubinin_min, locate_ratio_min, max_modulus
from polyneq.errors import ContractViolation, HypothesisSchemaError
from polyneq.models import (
    CatalogEntry,
    CheckReport,
    GammaWeights,
    HypothesisSchema,
    InequalityId,
    PolarPoint,
    RootForm,
)
from polyneq.operators import generalized_derivative, generalized_polar_derivative, polar_derivative
from polyneq.poly_core import PREDICATE_TOL, derivative, from_roots, scale_roots, zeros_in_disk

logger = logging.getLogger(__name__)

ABS_TOL_SCALE = 1e-9
REL_TOL = 1e-8
LEMMA1_ABS_TOL = 1e-12
# k 범위 경계 비교 여유
K_RANGE_TOL = 1e-12


class CheckTolerances(BaseModel):
    """run_check 허용오차 묶음 (scan / falsify / sharpness 워커까지 그대로 전달)"""

    model_config = ConfigDict(frozen=True)

    floor_frac: float = Field(default=FLOOR_FRAC, gt=0)
    abs_tol_scale: float = Field(default=ABS_TOL_SCALE, ge=0)
    rel_tol: float = Field(default=REL_TOL, ge=0)
    zero_tol: float = Field(default=PREDICATE_TOL, ge=0)


ID = InequalityId

THM2_ALPHA_NOTE = (
    "|alpha| >= k enforced: the argument applies the k = 1 polar bound to P(kz) at alpha/k, "
    "which needs |alpha/k| >= 1"
)

SCHEMAS: Dict[InequalityId, HypothesisSchema] = {
    ID.BERN_1: HypothesisSchema(
        k_range="none", direction="upper", zeros_constrained=False,
        label="Bernstein", formula="max|P'| <= n max|P|",
    ),
    ID.TURAN_2: HypothesisSchema(
        k_range="k = 1", label="Turan", formula="max|P'| >= (n/2) max|P|",
    ),
    ID.DUBININ_PT_3: HypothesisSchema(
        k_range="k = 1", form="pointwise", operator="dubinin", label="Dubinin pointwise",
        formula="Re(zP'/P) >= (n/2){1 + (1/n)(|a_n|-|a_0|)/(|a_n|+|a_0|)}",
    ),
    ID.DUBININ_4: HypothesisSchema(
        k_range="k = 1", label="Dubinin",
        formula="max|P'| >= (1/2)(n + (|a_n|-|a_0|)/(|a_n|+|a_0|)) max|P|",
    ),
    ID.MALIK_5: HypothesisSchema(
        k_range="k <= 1", label="Malik", formula="max|P'| >= n/(1+k) max|P|",
    ),
    ID.RATHER_PT_6: HypothesisSchema(
        k_range="k <= 1", form="pointwise", operator="dubinin", label="Rather pointwise real part",
        formula="Re(zP'/P) >= n/(1+k){1 + (k/n)(k^n|a_n|-|a_0|)/(k^n|a_n|+|a_0|)}",
    ),
    ID.RATHER_7: HypothesisSchema(
        k_range="k <= 1", form="pointwise", label="Rather pointwise modulus",
        formula="|P'(z)| >= n/(1+k){1 + (k/n)(k^n|a_n|-|a_0|)/(k^n|a_n|+|a_0|)} |P(z)|",
    ),
    ID.AZIZ_POLAR_UPPER: HypothesisSchema(
        k_range="none", alpha_constraint="|alpha| >= 1", direction="upper", operator="polar",
        zeros_constrained=False, uses_alpha=True, label="Aziz polar upper bound",
        formula="max_{|z|=1}|D_alpha P| <= n|alpha| max|P|",
    ),
    ID.AZIZ_RATHER_8: HypothesisSchema(
        k_range="k <= 1", alpha_constraint="|alpha| >= k", operator="polar", uses_alpha=True,
        label="Aziz-Rather polar", formula="max|D_alpha P| >= n/(1+k)(|alpha|-k) max|P|",
    ),
    ID.RATHER_POLAR_9: HypothesisSchema(
        k_range="k <= 1", alpha_constraint="|alpha| >= k", operator="polar", uses_alpha=True,
        label="Rather polar refinement",
        formula="max|D_alpha P| >= n(|alpha|-k)/(1+k){1 + (k/n)(k^n|a_n|-|a_0|)/(k^n|a_n|+|a_0|)} max|P|",
    ),
    ID.THM_F: HypothesisSchema(
        k_range="k <= 1", alpha_constraint="|alpha| >= k", operator="generalized_polar",
        uses_gamma=True, uses_alpha=True, label="generalized polar, k <= 1",
        formula="max|D_alpha^gamma P| >= Lambda/(1+k)(|alpha|-k) max|P|",
    ),
    ID.THM_G_10: HypothesisSchema(
        k_range="k <= 1", form="pointwise", operator="generalized", uses_gamma=True,
        label="generalized derivative pointwise",
        formula="|P^gamma(z)| >= k/(1+k)[Lambda/k + gamma_m(k^n|a_n|-|a_0|)/(k^n|a_n|+|a_0|)] |P(z)|",
    ),
    ID.THM_H: HypothesisSchema(
        k_range="k <= 1", alpha_constraint="|alpha| >= 1", operator="generalized_polar",
        uses_gamma=True, uses_alpha=True, label="generalized polar refinement, k <= 1",
        formula="max|D_alpha^gamma P| >= (|alpha|-k)/(1+k)[Lambda + k gamma_m(k^n|a_n|-|a_0|)/(k^n|a_n|+|a_0|)] max|P|",
    ),
    ID.THM_I: HypothesisSchema(
        k_range="k = 1", alpha_constraint="|alpha| >= 1", operator="generalized_polar",
        uses_gamma=True, uses_alpha=True, label="generalized polar refinement, k = 1",
        formula="max|D_alpha^gamma P| >= (|alpha|-1)/2[Lambda + gamma_m(|a_n|-|a_0|)/(|a_n|+|a_0|)] max|P|",
    ),
    ID.THM1_11: HypothesisSchema(
        k_range="k >= 1", operator="generalized", uses_gamma=True,
        label="generalized derivative, k >= 1",
        formula="max|P^gamma| >= Lambda/(1+k^n)[1 + (gamma_m/Lambda)(k^n|a_n|-|a_0|)/(k^n|a_n|+|a_0|)] max|P|",
    ),
    ID.COR1_12: HypothesisSchema(
        k_range="k >= 1", label="derivative, k >= 1",
        formula="max|P'| >= n/(1+k^n)[1 + (1/n)(k^n|a_n|-|a_0|)/(k^n|a_n|+|a_0|)] max|P|",
    ),
    ID.THM2: HypothesisSchema(
        k_range="k >= 1", alpha_constraint="|alpha| >= k", operator="generalized_polar",
        uses_gamma=True, uses_alpha=True, label="generalized polar, k >= 1",
        formula="max|D_alpha^gamma P| >= (|alpha|-k)/(1+k^n)[Lambda + gamma_m(|a_n|-|a_0|)/(|a_n|+|a_0|)] max|P|",
        note=THM2_ALPHA_NOTE,
    ),
    ID.COR2: HypothesisSchema(
        k_range="k >= 1", alpha_constraint="|alpha| >= k", operator="polar", uses_alpha=True,
        label="polar, k >= 1",
        formula="max|D_alpha P| >= n(|alpha|-k)/(1+k^n)[1 + (1/n)(|a_n|-|a_0|)/(|a_n|+|a_0|)] max|P|",
        note=THM2_ALPHA_NOTE,
    ),
    ID.LEMMA1: HypothesisSchema(
        k_range="none", form="vector", operator="none", zeros_constrained=False,
        label="product lemma", formula="sum (1-x_j)/(1+x_j) >= (1-prod x_j)/(1+prod x_j), 0 <= x_j <= 1",
    ),
    ID.LEMMA2: HypothesisSchema(
        k_range="k >= 1", direction="upper", operator="identity", zeros_constrained=False,
        label="growth on |z| = R (R = k)", formula="max_{|z|=R}|P| <= R^n max_{|z|=1}|P|",
    ),
    ID.LEMMA3_13: HypothesisSchema(
        k_range="k >= 1", operator="identity", label="boundary growth",
        formula="max_{|z|=k}|P| >= 2k^n/(1+k^n) max_{|z|=1}|P|",
    ),
    ID.SCALE_ID_15: HypothesisSchema(
        k_range="k >= 1", direction="upper", operator="scaled_generalized_polar",
        uses_gamma=True, uses_alpha=True, label="scaling identity",
        formula="max_{|z|=1}|D_{alpha/k}^gamma[P](kz)| <= k^(n-1) max_{|z|=1}|D_alpha^gamma P|",
    ),
}


# 카탈로그 CSV 의 eq_label 열 (정리/식 번호)
EQ_LABELS: Dict[InequalityId, str] = {
    ID.BERN_1: "Eq (1)",
    ID.TURAN_2: "Eq (2)",
    ID.DUBININ_PT_3: "Theorem A / Eq (3)",
    ID.DUBININ_4: "Theorem A / Eq (4)",
    ID.MALIK_5: "Eq (5)",
    ID.RATHER_PT_6: "Theorem B / Eq (6)",
    ID.RATHER_7: "Theorem C / Eq (7)",
    ID.AZIZ_POLAR_UPPER: "Aziz polar bound",
    ID.AZIZ_RATHER_8: "Theorem D / Eq (8)",
    ID.RATHER_POLAR_9: "Theorem E / Eq (9)",
    ID.THM_F: "Theorem F",
    ID.THM_G_10: "Theorem G / Eq (10)",
    ID.THM_H: "Theorem H",
    ID.THM_I: "Theorem I",
    ID.THM1_11: "Theorem 1 / Eq (11)",
    ID.COR1_12: "Corollary 1 / Eq (12)",
    ID.THM2: "Theorem 2",
    ID.COR2: "Corollary 2",
    ID.LEMMA1: "Lemma 1",
    ID.LEMMA2: "Lemma 2",
    ID.LEMMA3_13: "Lemma 3 / Eq (13)",
    ID.SCALE_ID_15: "Eq (15)",
}


def schema_for(inequality: InequalityId) -> HypothesisSchema:
    return SCHEMAS[InequalityId(inequality)]


# ============================================================================
# 가정 검사
# ============================================================================

def k_range_problem(schema: HypothesisSchema, k: float) -> Optional[str]:
    """k 가 스키마 범위를 벗어나면 위반 조건 문자열"""
    if schema.k_range == "k <= 1" and k > 1 + K_RANGE_TOL:
        return f"k <= 1 required, got k = {k}"
    if schema.k_range == "k >= 1" and k < 1 - K_RANGE_TOL:
        return f"k >= 1 required, got k = {k}"
    if schema.k_range == "k = 1" and abs(k - 1) > K_RANGE_TOL:
        return f"k = 1 required, got k = {k}"
    return None


def alpha_radius(schema: HypothesisSchema, k: float) -> float:
    """|alpha| 의 하한 (제약 없으면 0)"""
    if schema.alpha_constraint == "|alpha| >= k":
        return k
    if schema.alpha_constraint == "|alpha| >= 1":
        return 1.0
    return 0.0


def alpha_problem(schema: HypothesisSchema, k: float, alpha_mod: float) -> Optional[str]:
    radius = alpha_radius(schema, k)
    if alpha_mod < radius * (1 - K_RANGE_TOL):
        return f"{schema.alpha_constraint} required, got |alpha| = {alpha_mod}"
    return None


# ============================================================================
# 상/하한 공식
# ============================================================================

def _fraction(top: float, a0_mod: float) -> float:
    """(top - |a_0|) / (top + |a_0|)"""
    return (top - a0_mod) / (top + a0_mod)


def bound_value(
    inequality: InequalityId,
    n: int,
    k: float = 1.0,
    alpha_mod: Optional[float] = None,
    a0_mod: float = 0.0,
    an_mod: float = 1.0,
    lambda_sum: Optional[float] = None,
    gamma_min: Optional[float] = None,
    maxmod: float = 1.0,
) -> float:
    """부등식 우변. max 형태는 maxmod 를 곱한 값, 점별 형태는 점별 배수"""
    inequality = InequalityId(inequality)
    schema = schema_for(inequality)
    if inequality is ID.LEMMA1:
        raise ContractViolation("LEMMA1 has no bound multiplier; use lemma1_check")
    if n < 1:
        raise ContractViolation(f"degree n >= 1 required, got {n}")
    if not k > 0:
        raise ContractViolation(f"k must be positive, got {k}")
    if an_mod <= 0:
        raise ContractViolation("|a_n| must be positive")

    problem = k_range_problem(schema, k)
    if problem:
        raise HypothesisSchemaError(f"{inequality.value}: {problem}", constraint=schema.k_range)
    if schema.uses_alpha or schema.alpha_constraint != "none":
        if alpha_mod is None:
            raise ContractViolation(f"{inequality.value} needs |alpha|")
        problem = alpha_problem(schema, k, alpha_mod)
        if problem:
            raise HypothesisSchemaError(f"{inequality.value}: {problem}", constraint=schema.alpha_constraint)
    if schema.uses_gamma and (lambda_sum is None or gamma_min is None):
        raise ContractViolation(f"{inequality.value} needs Lambda and gamma_m")

    kn = k ** n
    f1 = _fraction(an_mod, a0_mod)
    fk = _fraction(kn * an_mod, a0_mod)

    if inequality is ID.BERN_1:
        return n * maxmod
    if inequality is ID.TURAN_2:
        return n / 2 * maxmod
    if inequality is ID.DUBININ_PT_3:
        return n / 2 * (1 + f1 / n)
    if inequality is ID.DUBININ_4:
        return 0.5 * (n + f1) * maxmod
    if inequality is ID.MALIK_5:
        return n / (1 + k) * maxmod
    if inequality in (ID.RATHER_PT_6, ID.RATHER_7):
        return n / (1 + k) * (1 + k / n * fk)
    if inequality is ID.AZIZ_POLAR_UPPER:
        return n * alpha_mod * maxmod
    if inequality is ID.AZIZ_RATHER_8:
        return n / (1 + k) * (alpha_mod - k) * maxmod
    if inequality is ID.RATHER_POLAR_9:
        return n * (alpha_mod - k) / (1 + k) * (1 + k / n * fk) * maxmod
    if inequality is ID.THM_F:
        return lambda_sum / (1 + k) * (alpha_mod - k) * maxmod
    if inequality is ID.THM_G_10:
        return k / (1 + k) * (lambda_sum / k + gamma_min * fk)
    if inequality is ID.THM_H:
        return (alpha_mod - k) / (1 + k) * (lambda_sum + k * gamma_min * fk) * maxmod
    if inequality is ID.THM_I:
        return (alpha_mod - 1) / 2 * (lambda_sum + gamma_min * f1) * maxmod
    if inequality is ID.THM1_11:
        return lambda_sum / (1 + kn) * (1 + gamma_min / lambda_sum * fk) * maxmod
    if inequality is ID.COR1_12:
        return n / (1 + kn) * (1 + fk / n) * maxmod
    if inequality is ID.THM2:
        return (alpha_mod - k) / (1 + kn) * (lambda_sum + gamma_min * f1) * maxmod
    if inequality is ID.COR2:
        return n * (alpha_mod - k) / (1 + kn) * (1 + f1 / n) * maxmod
    if inequality is ID.LEMMA2:
        return kn * maxmod
    if inequality is ID.LEMMA3_13:
        return 2 * kn / (1 + kn) * maxmod
    if inequality is ID.SCALE_ID_15:
        # maxmod 는 max_{|z|=1}|D_alpha^gamma P|
        return k ** (n - 1) * maxmod
    raise ContractViolation(f"unknown inequality {inequality}")


# ============================================================================
# 검사 실행
# ============================================================================

def _witness(r: RootForm, g: Optional[GammaWeights], a: Optional[PolarPoint], k: float) -> Dict[str, Any]:
    return {
        "roots": r.model_dump(mode="json"),
        "gamma": list(g.gamma) if g is not None else None,
        "alpha": a.model_dump(mode="json")["alpha"] if a is not None else None,
        "k": k,
    }


def run_check(
    inequality: InequalityId,
    r: RootForm,
    g: Optional[GammaWeights] = None,
    a: Optional[PolarPoint] = None,
    k: float = 1.0,
    *,
    floor_frac: float = FLOOR_FRAC,
    abs_tol_scale: float = ABS_TOL_SCALE,
    rel_tol: float = REL_TOL,
    zero_tol: float = PREDICATE_TOL,
) -> CheckReport:
    """인스턴스 하나에 대해 부등식을 검사한다"""
    inequality = InequalityId(inequality)
    schema = schema_for(inequality)
    if inequality is ID.LEMMA1:
        raise ContractViolation("LEMMA1 takes an x vector; use lemma1_check")
    if not k > 0:
        raise ContractViolation(f"k must be positive, got {k}")
    n = r.degree
    if n < 1:
        raise ContractViolation(f"{inequality.value} requires degree n >= 1")

    if schema.uses_gamma:
        g = g if g is not None else GammaWeights.ones(n)
        if g.degree != n:
            raise ContractViolation(f"gamma length {g.degree} does not match degree {n}")
    else:
        g = None
    if schema.uses_alpha:
        if a is None:
            raise ContractViolation(f"{inequality.value} needs alpha")
    else:
        a = None

    witness = _witness(r, g, a, k)

    # 가정 검사: 위반 시 pass 판정 없이 보고
    problems: List[str] = []
    k_issue = k_range_problem(schema, k)
    if k_issue:
        problems.append(k_issue)
    if schema.zeros_constrained and not zeros_in_disk(r, k, zero_tol):
        problems.append(f"zeros outside |z| <= {k}")
    if a is not None:
        a_issue = alpha_problem(schema, k, a.modulus)
        if a_issue:
            problems.append(a_issue)
    if problems:
        return CheckReport.skipped(inequality, "; ".join(problems), direction=schema.direction, witness=witness)

    p = from_roots(r)
    unit = max_modulus(p, 1.0)
    params = dict(
        n=n,
        k=k,
        alpha_mod=a.modulus if a is not None else None,
        a0_mod=abs(p.coeffs[0]),
        an_mod=abs(p.leading),
        lambda_sum=g.lambda_sum if g is not None else None,
        gamma_min=g.gamma_min if g is not None else None,
    )

    if schema.form == "pointwise":
        if schema.operator == "dubinin":
            lhs, theta = locate_dubinin_min(p, 1.0, floor_frac, roots=r, boundary_tol=zero_tol)
        else:
            numerator = derivative(p) if schema.operator == "derivative" else generalized_derivative(r, g)
            lhs, theta = locate_ratio_min(numerator, p, 1.0, floor_frac)
        rhs = bound_value(inequality, maxmod=1.0, **params)
        scale = max(abs(lhs), abs(rhs), 1.0)
    elif schema.operator == "identity":
        outer = max_modulus(p, k)
        lhs, theta = outer.value, outer.arg_theta
        rhs = bound_value(inequality, maxmod=unit.value, **params)
        scale = max(unit.value, lhs, rhs)
    elif schema.operator == "scaled_generalized_polar":
        # G(z) = P(kz) 에 대해 D_{alpha/k}^gamma[G](z) = D_alpha^gamma[P](kz)
        scaled = generalized_polar_derivative(scale_roots(r, k), g, PolarPoint(alpha=a.alpha / k))
        inner = generalized_polar_derivative(r, g, a)
        outer = max_modulus(scaled, 1.0)
        lhs, theta = outer.value, outer.arg_theta
        rhs = bound_value(inequality, maxmod=max_modulus(inner, 1.0).value, **params)
        scale = max(lhs, rhs)
    else:
        if schema.operator == "derivative":
            q = derivative(p)
        elif schema.operator == "generalized":
            q = generalized_derivative(r, g)
        elif schema.operator == "polar":
            q = polar_derivative(p, a)
        else:
            q = generalized_polar_derivative(r, g, a)
        estimate = max_modulus(q, 1.0)
        lhs, theta = estimate.value, estimate.arg_theta
        rhs = bound_value(inequality, maxmod=unit.value, **params)
        scale = max(unit.value, lhs, rhs)

    witness["theta"] = theta
    return CheckReport.from_sides(
        inequality,
        lhs,
        rhs,
        direction=schema.direction,
        abs_tol=abs_tol_scale * max(scale, 1e-300),
        rel_tol=rel_tol,
        witness=witness,
        note=schema.note,
    )


def lemma1_check(x: Sequence[float], abs_tol: float = LEMMA1_ABS_TOL, rel_tol: float = 0.0) -> CheckReport:
    """sum (1-x_j)/(1+x_j) >= (1 - prod x_j)/(1 + prod x_j)"""
    values = np.asarray(list(x), dtype=float)
    witness: Dict[str, Any] = {"x": values.tolist()}
    if values.size < 1:
        raise ContractViolation("lemma1_check requires at least one x_j")
    if not np.all(np.isfinite(values)) or np.any(values < 0) or np.any(values > 1):
        return CheckReport.skipped(ID.LEMMA1, "x_j must lie in [0, 1]", direction="lower", witness=witness)

    lhs = float(np.sum((1 - values) / (1 + values)))
    product = float(np.prod(values))
    rhs = (1 - product) / (1 + product)
    return CheckReport.from_sides(
        ID.LEMMA1, lhs, rhs, direction="lower", abs_tol=abs_tol, rel_tol=rel_tol, witness=witness,
    )


def catalog_table() -> List[CatalogEntry]:
    """id 별 가정 스키마와 공식 (22개)"""
    return [
        CatalogEntry(
            id=inequality, schema=schema, eq_label=EQ_LABELS[inequality], label=schema.label, formula=schema.formula
        )
        for inequality, schema in SCHEMAS.items()
    ]

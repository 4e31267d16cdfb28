"""
polyneq 데이터 모델 (Pydantic)
- Polynomial, RootForm, GammaWeights, PolarPoint 등 교환 포맷 정의
- 복소수는 JSON 에서 [re, im] 쌍으로 표현
- 모든 모델은 불변(frozen) 값 객체
"""

import math
from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator


def to_complex(value: Any) -> complex:
    """[re, im] 쌍, 실수, 복소수를 complex 로 변환 (NaN/Inf 거부)"""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex pair must have 2 entries, got {len(value)}")
        result = complex(float(value[0]), float(value[1]))
    elif isinstance(value, (int, float, complex, np.number)):
        result = complex(value)
    else:
        raise ValueError(f"cannot read complex value from {value!r}")

    if not (math.isfinite(result.real) and math.isfinite(result.imag)):
        raise ValueError(f"non-finite complex value {value!r}")
    return result


def complex_pair(value: complex) -> List[float]:
    return [float(value.real), float(value.imag)]


# ============================================================================
# 다항식 표현
# ============================================================================

class Polynomial(BaseModel):
    """계수 형태 다항식 (index j = a_j)"""
    model_config = ConfigDict(frozen=True)

    coeffs: Tuple[complex, ...]
    # 최고차 계수가 정확히 0 인 연산 결과 (상수의 미분 등)
    degenerate: bool = False

    @field_validator("coeffs", mode="before")
    @classmethod
    def _parse_coeffs(cls, value: Any) -> Tuple[complex, ...]:
        if isinstance(value, np.ndarray):
            value = value.tolist()
        return tuple(to_complex(c) for c in value)

    @model_validator(mode="after")
    def _check_leading(self) -> "Polynomial":
        if not self.coeffs:
            raise ValueError("coeffs must not be empty")
        if not self.degenerate and abs(self.coeffs[-1]) == 0:
            raise ValueError("leading coefficient a_n must be nonzero")
        return self

    @field_serializer("coeffs")
    def _dump_coeffs(self, coeffs: Tuple[complex, ...]) -> List[List[float]]:
        return [complex_pair(c) for c in coeffs]

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Polynomial":
        """연산 결과 배열을 감싼다. 최고차 슬롯이 0 이면 degenerate 로 표시"""
        arr = np.atleast_1d(np.asarray(arr, dtype=complex))
        return cls(coeffs=arr, degenerate=bool(arr[-1] == 0))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def __add__(self, other: "Polynomial") -> "Polynomial":
        size = max(len(self.coeffs), len(other.coeffs))
        total = np.zeros(size, dtype=complex)
        total[: len(self.coeffs)] += self.array
        total[: len(other.coeffs)] += other.array
        return Polynomial.from_array(total)

    def scaled(self, factor: complex) -> "Polynomial":
        return Polynomial.from_array(self.array * factor)


class RootForm(BaseModel):
    """근 형태 c * prod(z - z_j), 중근은 반복으로 표현"""
    model_config = ConfigDict(frozen=True)

    leading: complex
    roots: Tuple[complex, ...] = ()

    @field_validator("leading", mode="before")
    @classmethod
    def _parse_leading(cls, value: Any) -> complex:
        return to_complex(value)

    @field_validator("roots", mode="before")
    @classmethod
    def _parse_roots(cls, value: Any) -> Tuple[complex, ...]:
        if isinstance(value, np.ndarray):
            value = value.tolist()
        return tuple(to_complex(z) for z in value)

    @field_validator("leading")
    @classmethod
    def _nonzero_leading(cls, value: complex) -> complex:
        if abs(value) == 0:
            raise ValueError("leading coefficient c must be nonzero")
        return value

    @field_serializer("leading")
    def _dump_leading(self, value: complex) -> List[float]:
        return complex_pair(value)

    @field_serializer("roots")
    def _dump_roots(self, roots: Tuple[complex, ...]) -> List[List[float]]:
        return [complex_pair(z) for z in roots]

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def roots_array(self) -> np.ndarray:
        return np.asarray(self.roots, dtype=complex)


class DiskRadius(BaseModel):
    """영점 원판 반지름 k"""
    model_config = ConfigDict(frozen=True)

    k: float = Field(gt=0, allow_inf_nan=False)


# ============================================================================
# 연산자 파라미터
# ============================================================================

class GammaWeights(BaseModel):
    """일반화 미분의 가중치 gamma = (gamma_1, ..., gamma_n)"""
    model_config = ConfigDict(frozen=True)

    gamma: Tuple[float, ...]

    @field_validator("gamma")
    @classmethod
    def _check_weights(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        if not value:
            raise ValueError("gamma must not be empty")
        if any(not math.isfinite(g) or g < 0 for g in value):
            raise ValueError("gamma weights must be finite and nonnegative")
        if sum(value) <= 0:
            raise ValueError("gamma weights must not be all zero")
        return value

    @classmethod
    def ones(cls, n: int) -> "GammaWeights":
        return cls(gamma=(1.0,) * n)

    @property
    def degree(self) -> int:
        return len(self.gamma)

    @property
    def lambda_sum(self) -> float:
        return float(sum(self.gamma))

    @property
    def gamma_min(self) -> float:
        return float(min(self.gamma))


class PolarPoint(BaseModel):
    """극 미분의 기준점 alpha"""
    model_config = ConfigDict(frozen=True)

    alpha: complex

    @field_validator("alpha", mode="before")
    @classmethod
    def _parse_alpha(cls, value: Any) -> complex:
        return to_complex(value)

    @field_serializer("alpha")
    def _dump_alpha(self, value: complex) -> List[float]:
        return complex_pair(value)

    @property
    def modulus(self) -> float:
        return abs(self.alpha)


# ============================================================================
# 원 위 해석 결과
# ============================================================================

class MaxModEstimate(BaseModel):
    """max_{|z|=r} |Q(z)| 추정값과 수렴 근거"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    value: float = Field(ge=0)
    arg_theta: float = Field(alias="theta")
    grid_size: int = Field(alias="grid")
    refined: bool = False
    rel_gap: float = 0.0


# ============================================================================
# 부등식 카탈로그
# ============================================================================

class InequalityId(str, Enum):
    BERN_1 = "BERN_1"
    TURAN_2 = "TURAN_2"
    DUBININ_PT_3 = "DUBININ_PT_3"
    DUBININ_4 = "DUBININ_4"
    MALIK_5 = "MALIK_5"
    RATHER_PT_6 = "RATHER_PT_6"
    RATHER_7 = "RATHER_7"
    AZIZ_POLAR_UPPER = "AZIZ_POLAR_UPPER"
    AZIZ_RATHER_8 = "AZIZ_RATHER_8"
    RATHER_POLAR_9 = "RATHER_POLAR_9"
    THM_F = "THM_F"
    THM_G_10 = "THM_G_10"
    THM_H = "THM_H"
    THM_I = "THM_I"
    THM1_11 = "THM1_11"
    COR1_12 = "COR1_12"
    THM2 = "THM2"
    COR2 = "COR2"
    LEMMA1 = "LEMMA1"
    LEMMA2 = "LEMMA2"
    LEMMA3_13 = "LEMMA3_13"
    SCALE_ID_15 = "SCALE_ID_15"


KRange = Literal["k <= 1", "k >= 1", "k = 1", "none"]
AlphaConstraint = Literal["|alpha| >= k", "|alpha| >= 1", "none"]


class HypothesisSchema(BaseModel):
    """부등식 하나의 가정 조건과 측정 방식"""
    model_config = ConfigDict(frozen=True)

    k_range: KRange
    alpha_constraint: AlphaConstraint = "none"
    # max: 원 위 최대값 비교, pointwise: 원 위 점별 비교, vector: x 벡터 (LEMMA1)
    form: Literal["max", "pointwise", "vector"] = "max"
    direction: Literal["lower", "upper"] = "lower"
    # 측정 대상 연산자
    operator: Literal[
        "derivative", "generalized", "polar", "generalized_polar",
        "dubinin", "identity", "scaled_generalized_polar", "none",
    ] = "derivative"
    zeros_constrained: bool = True
    uses_gamma: bool = False
    uses_alpha: bool = False
    label: str
    formula: str
    note: Optional[str] = None


class CatalogEntry(BaseModel):
    id: InequalityId
    schema_: HypothesisSchema = Field(alias="schema")
    eq_label: str
    label: str
    formula: str

    model_config = ConfigDict(frozen=True, populate_by_name=True)


class CheckReport(BaseModel):
    """부등식 한 건의 검증 결과"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    id: InequalityId
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    slack: Optional[float] = None
    rel_slack: Optional[float] = None
    passed: Optional[bool] = Field(default=None, alias="pass")
    hypothesis_ok: bool
    witness: Dict[str, Any] = Field(default_factory=dict)
    equality_sharp: bool = False
    direction: Literal["lower", "upper"] = "lower"
    note: Optional[str] = None

    @classmethod
    def from_sides(
        cls,
        inequality: InequalityId,
        lhs: float,
        rhs: float,
        *,
        direction: str,
        abs_tol: float,
        rel_tol: float,
        witness: Dict[str, Any],
        note: Optional[str] = None,
    ) -> "CheckReport":
        """lhs(측정값), rhs(상/하한)로부터 slack 과 pass 판정을 계산"""
        slack = (lhs - rhs) if direction == "lower" else (rhs - lhs)
        rel_slack = slack / max(abs(rhs), 1e-300)
        passed = slack >= -abs_tol - rel_tol * abs(rhs)
        return cls(
            id=inequality,
            lhs=float(lhs),
            rhs=float(rhs),
            slack=float(slack),
            rel_slack=float(rel_slack),
            passed=bool(passed),
            hypothesis_ok=True,
            witness=witness,
            equality_sharp=bool(abs(slack) <= 10 * abs_tol),
            direction=direction,
            note=note,
        )

    @classmethod
    def skipped(
        cls,
        inequality: InequalityId,
        reason: str,
        *,
        direction: str,
        witness: Dict[str, Any],
    ) -> "CheckReport":
        """가정 불충족: pass 판정 없음 (실패가 아님)"""
        return cls(id=inequality, hypothesis_ok=False, witness=witness, direction=direction, note=reason)

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True)


# ============================================================================
# 앙상블 탐색
# ============================================================================

GammaMode = Literal["ones", "uniform01", "exp1"]
AlphaMode = Literal["none", "radial", "annulus"]
ZeroMode = Literal["disk-uniform", "boundary", "clustered", "exterior"]


class EnsembleConfig(BaseModel):
    """랜덤 다항식 앙상블 설정"""
    model_config = ConfigDict(frozen=True)

    degree: int = Field(ge=1)
    k: float = Field(gt=0, allow_inf_nan=False)
    trials: int = Field(ge=1)
    seed: int = Field(ge=0, lt=2 ** 64)
    gamma_mode: GammaMode = "ones"
    alpha_mode: AlphaMode = "none"
    # radial 모드의 |alpha| 배율 (제약 반지름 기준)
    alpha_grid: Tuple[float, ...] = (1.5, 2.0, 4.0, 10.0)
    zero_mode: ZeroMode = "disk-uniform"


class ScanReport(BaseModel):
    """scan / falsify 집계 결과"""
    model_config = ConfigDict(frozen=True)

    id: InequalityId
    config: EnsembleConfig
    checked: int
    skipped: int = 0
    violations: int
    min_slack: Optional[float] = None
    min_rel_slack: Optional[float] = None
    worst_witness: Optional[Dict[str, Any]] = None
    equality_sharp_count: int = 0
    budget: Optional[int] = None
    trajectory: List[float] = Field(default_factory=list)


class RunManifest(BaseModel):
    """CLI 실행 기록 (모든 출력 파일의 머리에 기록)"""
    command: Literal["check", "scan", "sharpness", "falsify", "catalog"]
    flags: Dict[str, Any]
    version: str
    started_at: str
    finished_at: Optional[str] = None
    outputs: List[str] = Field(default_factory=list)

"""
polyneq 예외 정의
- CLI는 이 계층을 종료 코드로 매핑한다 (사용/파싱 오류 → 1)
"""

from typing import List, Optional


class PolyneqError(Exception):
    """polyneq 공통 예외"""


class ContractViolation(PolyneqError, ValueError):
    """입력 계약 위반 (길이 불일치, k <= 0, 차수 조건 등)"""


class RootFindingError(PolyneqError):
    """Aberth 반복이 허용 잔차 안으로 수렴하지 못함"""

    def __init__(self, message: str, best: List[complex], residual: float, iterations: int):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.iterations = iterations


class InadmissiblePointError(PolyneqError):
    """|P(z)| 가 floor 미만인 점 (P(z) != 0 가정 위반)"""


class NoAdmissibleSamplesError(PolyneqError):
    """원 위 격자에 허용 가능한 샘플이 하나도 없음"""


class HypothesisSchemaError(PolyneqError):
    """부등식 id 의 가정 스키마(k 범위, alpha 조건)를 벗어난 파라미터"""

    def __init__(self, message: str, constraint: Optional[str] = None):
        super().__init__(message)
        self.constraint = constraint

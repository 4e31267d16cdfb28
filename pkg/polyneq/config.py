"""
환경 설정 (pydantic-settings)
- POLYNEQ_ 접두사 환경변수 또는 .env 파일에서 로드
"""

import os
from functools import lru_cache
from typing import TYPE_CHECKING

from pydantic_settings import BaseSettings, SettingsConfigDict

if TYPE_CHECKING:
    from polyneq.inequality_catalog import CheckTolerances


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="POLYNEQ_", env_file=".env", extra="ignore")

    # 병렬 워커 수 (0 = 자동)
    threads: int = 0

    # poly_core 기본 허용오차
    residual_tol: float = 1e-10
    predicate_tol: float = 1e-9

    # 점별(pointwise) 부등식의 허용 샘플 기준
    floor_frac: float = 1e-6

    # CheckReport 허용오차
    abs_tol_scale: float = 1e-9
    rel_tol: float = 1e-8

    log_level: str = "INFO"
    output_dir: str = "reports"

    def worker_count(self) -> int:
        if self.threads > 0:
            return self.threads
        return os.cpu_count() or 1

    def check_tolerances(self) -> "CheckTolerances":
        """run_check 에 넘길 허용오차 묶음 (CheckTolerances)"""
        from polyneq.inequality_catalog import CheckTolerances

        return CheckTolerances(
            floor_frac=self.floor_frac,
            abs_tol_scale=self.abs_tol_scale,
            rel_tol=self.rel_tol,
            zero_tol=self.predicate_tol,
        )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()

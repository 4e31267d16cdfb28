"""
랜덤 앙상블 탐색
- sample_instance: (seed, trial, stream tag) 로 키잉한 Philox 스트림에서 인스턴스 생성
- scan: 모든 trial 에 run_check 적용 후 결정적 축약 (최소 slack, 동률이면 낮은 trial 우선)
- falsify: 최악 witness 에서 시작하는 좌표 섭동 하강 + 랜덤 재시작
- sharpness_probe: 극값 다항식 족 위에서 rel_slack 프로파일
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from polyneq.errors import ContractViolation, HypothesisSchemaError, PolyneqError
from polyneq.inequality_catalog import (
    CheckTolerances,
    alpha_radius,
    k_range_problem,
    lemma1_check,
    run_check,
    schema_for,
)
from polyneq.models import (
    CheckReport,
    EnsembleConfig,
    GammaWeights,
    InequalityId,
    PolarPoint,
    RootForm,
    ScanReport,
)

logger = logging.getLogger(__name__)

# 스트림 태그
ZEROS, LEADING, GAMMA, ALPHA, LEMMA, FALSIFY = range(6)

# 제약 경계에서 떨어뜨리는 |alpha| 여유
ALPHA_MARGIN = 1e-6
ANNULUS_SPAN = 4.0
CLUSTER_FRAC = 0.1
EXTERIOR_RANGE = (1.1, 2.0)
ALPHA_MAX_REJECTIONS = 1000

# falsify 좌표별 초기 보폭 (상한) 과 재시작 기준 보폭
INITIAL_STEPS = {"radial": 0.25, "angular": 0.5, "gamma": 0.5, "alpha": 0.25, "x": 0.25}
MIN_STEP = 1e-9

FAMILIES = ("binom_k", "monomial", "alpha_zn_beta")

SUMMARY_FIELDS = ["id", "n", "k", "trials", "violations", "min_slack", "min_rel_slack"]

Instance = Tuple[RootForm, Optional[GammaWeights], Optional[PolarPoint]]
Task = Tuple[InequalityId, EnsembleConfig, int, CheckTolerances]


def _rng(seed: int, trial: int, tag: int) -> np.random.Generator:
    """(seed, trial, tag) 에만 의존하는 카운터 기반 생성기"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial, tag))))


# ============================================================================
# 인스턴스 샘플링
# ============================================================================

def _sample_zeros(cfg: EnsembleConfig, trial: int) -> np.ndarray:
    rng = _rng(cfg.seed, trial, ZEROS)
    n, k = cfg.degree, cfg.k
    angles = rng.uniform(0.0, 2 * math.pi, size=n)

    if cfg.zero_mode == "disk-uniform":
        # 면적 균등: 반지름 k sqrt(u)
        radii = k * np.sqrt(rng.uniform(0.0, 1.0, size=n))
    elif cfg.zero_mode == "boundary":
        radii = np.full(n, k)
    elif cfg.zero_mode == "exterior":
        radii = rng.uniform(EXTERIOR_RANGE[0] * k, EXTERIOR_RANGE[1] * k, size=n)
    else:
        center = k * math.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0.0, 2 * math.pi))
        offsets = CLUSTER_FRAC * k * np.sqrt(rng.uniform(0.0, 1.0, size=n)) * np.exp(1j * angles)
        zeros = center + offsets
        moduli = np.abs(zeros)
        outside = moduli > k
        zeros[outside] *= k / moduli[outside]
        return zeros
    return radii * np.exp(1j * angles)


def _sample_gamma(cfg: EnsembleConfig, trial: int) -> GammaWeights:
    if cfg.gamma_mode == "ones":
        return GammaWeights.ones(cfg.degree)
    rng = _rng(cfg.seed, trial, GAMMA)
    if cfg.gamma_mode == "uniform01":
        # (0, 1] 로 뽑아 전부 0 인 경우를 없앤다
        weights = 1.0 - rng.random(size=cfg.degree)
    else:
        weights = rng.exponential(1.0, size=cfg.degree)
    return GammaWeights(gamma=tuple(float(w) for w in weights))


def alpha_base_radius(inequality: Optional[InequalityId], k: float) -> Tuple[float, float]:
    """(제약 반지름 c, 샘플링 기준 반지름 rho = max(k, c))"""
    constraint = alpha_radius(schema_for(inequality), k) if inequality is not None else 0.0
    return constraint, max(k, constraint)


def _sample_alpha(cfg: EnsembleConfig, trial: int, inequality: Optional[InequalityId]) -> Optional[PolarPoint]:
    if cfg.alpha_mode == "none":
        return None
    rng = _rng(cfg.seed, trial, ALPHA)
    constraint, rho = alpha_base_radius(inequality, cfg.k)
    angle = rng.uniform(0.0, 2 * math.pi)

    if cfg.alpha_mode == "radial":
        modulus = cfg.alpha_grid[trial % len(cfg.alpha_grid)] * rho
        return PolarPoint(alpha=modulus * complex(math.cos(angle), math.sin(angle)))

    for _ in range(ALPHA_MAX_REJECTIONS):
        # 복소평면 고리 위 균일 분포: |alpha|^2 가 [rho^2, (4 rho)^2] 에서 균일
        modulus = math.sqrt(rng.uniform(rho * rho, (ANNULUS_SPAN * rho) ** 2))
        if modulus >= constraint + ALPHA_MARGIN:
            return PolarPoint(alpha=modulus * complex(math.cos(angle), math.sin(angle)))
    raise ContractViolation("alpha rejection sampling exhausted")


def _sample(cfg: EnsembleConfig, trial: int, inequality: Optional[InequalityId]) -> Instance:
    leading_angle = _rng(cfg.seed, trial, LEADING).uniform(0.0, 2 * math.pi)
    roots = RootForm(
        leading=complex(math.cos(leading_angle), math.sin(leading_angle)),
        roots=_sample_zeros(cfg, trial),
    )
    return roots, _sample_gamma(cfg, trial), _sample_alpha(cfg, trial, inequality)


def sample_instance(
    cfg: EnsembleConfig, trial_index: int, inequality: Optional[InequalityId] = None
) -> Instance:
    """trial 하나의 (RootForm, GammaWeights, PolarPoint?)"""
    if not 0 <= trial_index < cfg.trials:
        raise ContractViolation(f"trial_index {trial_index} outside [0, {cfg.trials})")
    return _sample(cfg, trial_index, inequality)


def sample_lemma_vector(cfg: EnsembleConfig, trial_index: int) -> List[float]:
    """LEMMA1 용 x in [0, 1]^n"""
    return _rng(cfg.seed, trial_index, LEMMA).uniform(0.0, 1.0, size=cfg.degree).tolist()


def check_compatibility(inequality: InequalityId, cfg: EnsembleConfig) -> None:
    """샘플링 전에 설정이 부등식의 가정 스키마와 맞는지 확인"""
    inequality = InequalityId(inequality)
    schema = schema_for(inequality)
    if inequality is InequalityId.LEMMA1:
        return
    problem = k_range_problem(schema, cfg.k)
    if problem:
        raise HypothesisSchemaError(f"{inequality.value}: {problem}", constraint=schema.k_range)
    if schema.uses_alpha:
        if cfg.alpha_mode == "none":
            raise HypothesisSchemaError(
                f"{inequality.value} needs alpha; use alpha_mode radial or annulus",
                constraint=schema.alpha_constraint,
            )
        constraint, rho = alpha_base_radius(inequality, cfg.k)
        if cfg.alpha_mode == "radial" and min(cfg.alpha_grid) * rho < constraint + ALPHA_MARGIN:
            raise HypothesisSchemaError(
                f"{inequality.value}: alpha_grid factor {min(cfg.alpha_grid)} breaks {schema.alpha_constraint}",
                constraint=schema.alpha_constraint,
            )


# ============================================================================
# scan
# ============================================================================

def _run_trial(task: Task) -> CheckReport:
    inequality, cfg, trial, tolerances = task
    if inequality is InequalityId.LEMMA1:
        return lemma1_check(sample_lemma_vector(cfg, trial))
    roots, gamma, alpha = _sample(cfg, trial, inequality)
    return run_check(inequality, roots, gamma, alpha, cfg.k, **tolerances.model_dump())


def _map_trials(tasks: List[Task], workers: int) -> List[CheckReport]:
    if workers <= 1 or len(tasks) < 2:
        return [_run_trial(task) for task in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map 은 입력 순서를 보존한다
        return list(pool.map(_run_trial, tasks, chunksize=chunk))


class _Tally:
    """CheckReport 스트림의 결정적 축약"""

    def __init__(self) -> None:
        self.checked = 0
        self.skipped = 0
        self.violations = 0
        self.sharp = 0
        self.min_slack: Optional[float] = None
        self.min_rel_slack: Optional[float] = None
        self.worst: Optional[Dict[str, Any]] = None

    def add(self, report: CheckReport, trial: Optional[int] = None) -> bool:
        """report 를 반영하고 최소 slack 이 갱신되었는지 반환"""
        if not report.hypothesis_ok:
            self.skipped += 1
            return False
        self.checked += 1
        if report.passed is False:
            self.violations += 1
        if report.equality_sharp:
            self.sharp += 1
        if self.min_rel_slack is None or report.rel_slack < self.min_rel_slack:
            self.min_rel_slack = report.rel_slack
        # 동률이면 먼저 들어온(낮은 trial) 쪽 유지
        if self.min_slack is None or report.slack < self.min_slack:
            self.min_slack = report.slack
            self.worst = dict(report.witness)
            if trial is not None:
                self.worst["trial"] = trial
            return True
        return False

    def to_report(self, inequality: InequalityId, cfg: EnsembleConfig, **extra: Any) -> ScanReport:
        return ScanReport(
            id=inequality,
            config=cfg,
            checked=self.checked,
            skipped=self.skipped,
            violations=self.violations,
            min_slack=self.min_slack,
            min_rel_slack=self.min_rel_slack,
            worst_witness=self.worst,
            equality_sharp_count=self.sharp,
            **extra,
        )


def scan(
    inequality: InequalityId,
    cfg: EnsembleConfig,
    workers: Optional[int] = None,
    tolerances: Optional[CheckTolerances] = None,
) -> ScanReport:
    """cfg.trials 개 인스턴스 전부에 대해 부등식을 검사하고 집계한다"""
    inequality = InequalityId(inequality)
    check_compatibility(inequality, cfg)
    tolerances = tolerances or CheckTolerances()

    tasks = [(inequality, cfg, trial, tolerances) for trial in range(cfg.trials)]
    reports = _map_trials(tasks, workers or 1)

    tally = _Tally()
    for trial, report in enumerate(reports):
        tally.add(report, trial)

    logger.info(
        "scan %s n=%d k=%g trials=%d: checked=%d violations=%d min_slack=%s",
        inequality.value, cfg.degree, cfg.k, cfg.trials, tally.checked, tally.violations, tally.min_slack,
    )
    return tally.to_report(inequality, cfg)


def summary_row(report: ScanReport) -> Dict[str, Any]:
    """CSV 요약 한 줄"""
    return {
        "id": report.id.value,
        "n": report.config.degree,
        "k": report.config.k,
        "trials": report.config.trials,
        "violations": report.violations,
        "min_slack": report.min_slack,
        "min_rel_slack": report.min_rel_slack,
    }


# ============================================================================
# falsify
# ============================================================================

class _State:
    """하강 중인 인스턴스 (다항식 id 는 근/가중치/alpha, LEMMA1 은 x)"""

    def __init__(
        self,
        roots: Optional[RootForm] = None,
        gamma: Optional[Sequence[float]] = None,
        alpha: Optional[complex] = None,
        x: Optional[Sequence[float]] = None,
    ):
        self.roots = roots
        self.gamma = np.array(gamma, dtype=float) if gamma is not None else None
        self.alpha = alpha
        self.x = np.array(x, dtype=float) if x is not None else None

    @classmethod
    def from_witness(cls, witness: Dict[str, Any]) -> "_State":
        if "x" in witness:
            return cls(x=witness["x"])
        alpha = witness.get("alpha")
        return cls(
            roots=RootForm.model_validate(witness["roots"]),
            gamma=witness.get("gamma"),
            alpha=complex(alpha[0], alpha[1]) if alpha is not None else None,
        )

    def copy(self) -> "_State":
        return _State(
            roots=self.roots,
            gamma=None if self.gamma is None else self.gamma.copy(),
            alpha=self.alpha,
            x=None if self.x is None else self.x.copy(),
        )


def _evaluate(inequality: InequalityId, state: _State, k: float, tolerances: CheckTolerances) -> Optional[CheckReport]:
    """후보 평가. 가정을 벗어나거나 측정할 수 없는 후보는 None"""
    try:
        if state.x is not None:
            report = lemma1_check(state.x.tolist())
        else:
            gamma = GammaWeights(gamma=tuple(state.gamma.tolist())) if state.gamma is not None else None
            alpha = PolarPoint(alpha=state.alpha) if state.alpha is not None else None
            report = run_check(inequality, state.roots, gamma, alpha, k, **tolerances.model_dump())
    except (PolyneqError, ValidationError) as exc:
        logger.debug("falsify: candidate rejected (%s)", exc)
        return None
    return report if report.hypothesis_ok else None


Coordinate = Tuple[str, int]


def _coordinates(state: _State, cfg: EnsembleConfig) -> List[Coordinate]:
    """하강에서 움직일 좌표 목록 (종류, 인덱스)"""
    if state.x is not None:
        return [("x", j) for j in range(len(state.x))]
    n = state.roots.degree
    coords = [("radial", j) for j in range(n)] + [("angular", j) for j in range(n)]
    if state.gamma is not None and cfg.gamma_mode != "ones":
        coords += [("gamma", j) for j in range(n)]
    if state.alpha is not None:
        # 0: |alpha|, 1: arg alpha
        coords += [("alpha", 0), ("alpha", 1)]
    return coords


def _perturb(state: _State, coord: Coordinate, delta: float, cfg: EnsembleConfig, alpha_floor: float) -> _State:
    """좌표 하나를 delta 만큼 움직인 뒤 허용 집합으로 사영"""
    kind, j = coord
    candidate = state.copy()

    if kind == "x":
        candidate.x[j] = min(1.0, max(0.0, candidate.x[j] + delta))
    elif kind in ("radial", "angular"):
        zeros = candidate.roots.roots_array.copy()
        radius, angle = abs(zeros[j]), float(np.angle(zeros[j]))
        if kind == "radial":
            # 원판 |z| <= k 로 사영
            radius = min(cfg.k, max(0.0, radius + delta * cfg.k))
        else:
            angle += delta
        zeros[j] = radius * complex(math.cos(angle), math.sin(angle))
        candidate.roots = RootForm(leading=candidate.roots.leading, roots=zeros)
    elif kind == "gamma":
        candidate.gamma[j] = max(0.0, candidate.gamma[j] + delta)
    else:
        modulus, angle = abs(candidate.alpha), float(np.angle(candidate.alpha))
        if j == 0:
            modulus = max(alpha_floor, modulus + delta * max(modulus, 1.0))
        else:
            angle += delta
        candidate.alpha = modulus * complex(math.cos(angle), math.sin(angle))
    return candidate


def _restart_state(inequality: InequalityId, cfg: EnsembleConfig, index: int) -> _State:
    """trial 번호 >= trials 인 새 샘플에서 재시작"""
    if inequality is InequalityId.LEMMA1:
        return _State(x=sample_lemma_vector(cfg, index))
    roots, gamma, alpha = _sample(cfg, index, inequality)
    schema = schema_for(inequality)
    return _State(
        roots=roots,
        gamma=list(gamma.gamma) if schema.uses_gamma else None,
        alpha=alpha.alpha if (schema.uses_alpha and alpha is not None) else None,
    )


def falsify(
    inequality: InequalityId,
    cfg: EnsembleConfig,
    budget: int,
    workers: Optional[int] = None,
    tolerances: Optional[CheckTolerances] = None,
) -> ScanReport:
    """slack 을 최소화하는 무도함수 좌표 탐색 (반례/등호 근접 인스턴스 탐색)

    - 시작점: scan 의 최악 witness
    - 좌표마다 보폭을 두고 +-보폭 후보를 평가, 엄격히 감소하면 채택 후 보폭 2배 (초기값 상한)
    - 양방향 모두 실패하면 보폭 절반, 모든 보폭이 MIN_STEP 미만이면 새 샘플에서 재시작
    - budget 은 후보 평가 횟수, trajectory 는 최소 slack 이 갱신될 때마다 기록
    """
    inequality = InequalityId(inequality)
    if budget < 0:
        raise ContractViolation(f"budget must be nonnegative, got {budget}")

    tolerances = tolerances or CheckTolerances()
    base = scan(inequality, cfg, workers, tolerances)
    if budget == 0 or base.worst_witness is None:
        trajectory = [base.min_slack] if base.min_slack is not None else []
        return base.model_copy(update={"budget": budget, "trajectory": trajectory})

    tally = _Tally()
    tally.checked = base.checked
    tally.skipped = base.skipped
    tally.violations = base.violations
    tally.sharp = base.equality_sharp_count
    tally.min_slack = base.min_slack
    tally.min_rel_slack = base.min_rel_slack
    tally.worst = base.worst_witness
    trajectory: List[float] = [base.min_slack]

    is_lemma = inequality is InequalityId.LEMMA1
    constraint, _ = alpha_base_radius(None if is_lemma else inequality, cfg.k)
    alpha_floor = constraint + ALPHA_MARGIN if constraint > 0 else 0.0

    rng = _rng(cfg.seed, cfg.trials, FALSIFY)
    current = _State.from_witness(base.worst_witness)
    current_slack = base.min_slack
    coords = _coordinates(current, cfg)
    steps = {coord: INITIAL_STEPS[coord[0]] for coord in coords}
    evaluations = restarts = 0

    while evaluations < budget:
        active = [coord for coord in coords if steps[coord] >= MIN_STEP]
        if not active:
            current = _restart_state(inequality, cfg, cfg.trials + restarts)
            restarts += 1
            steps = {coord: INITIAL_STEPS[coord[0]] for coord in coords}
            evaluations += 1
            report = _evaluate(inequality, current, cfg.k, tolerances)
            current_slack = report.slack if report is not None else math.inf
            if report is not None and tally.add(report):
                trajectory.append(tally.min_slack)
            continue

        coord = active[int(rng.integers(len(active)))]
        first = 1.0 if rng.random() < 0.5 else -1.0
        improved = False
        for sign in (first, -first):
            if evaluations >= budget:
                break
            candidate = _perturb(current, coord, sign * steps[coord], cfg, alpha_floor)
            evaluations += 1
            report = _evaluate(inequality, candidate, cfg.k, tolerances)
            if report is None:
                continue
            if tally.add(report):
                trajectory.append(tally.min_slack)
            if report.slack < current_slack:
                current, current_slack = candidate, report.slack
                improved = True
                break

        if improved:
            steps[coord] = min(INITIAL_STEPS[coord[0]], 2 * steps[coord])
        else:
            steps[coord] *= 0.5

    logger.info(
        "falsify %s: budget=%d restarts=%d min_slack=%s",
        inequality.value, budget, restarts, tally.min_slack,
    )
    return tally.to_report(inequality, cfg, budget=budget, trajectory=trajectory)


# ============================================================================
# sharpness probe
# ============================================================================

def extremal_family(family: str, n: int, k: float) -> RootForm:
    """binom_k: (z+k)^n, monomial: z^n, alpha_zn_beta: z^n + 1"""
    if n < 1:
        raise ContractViolation(f"degree n >= 1 required, got {n}")
    if family == "binom_k":
        roots = np.full(n, -k, dtype=complex)
    elif family == "monomial":
        roots = np.zeros(n, dtype=complex)
    elif family == "alpha_zn_beta":
        roots = np.exp(1j * np.pi * (2 * np.arange(n) + 1) / n)
    else:
        raise ContractViolation(f"unknown family {family!r}; expected one of {FAMILIES}")
    return RootForm(leading=1.0, roots=roots)


def sharpness_probe(
    inequality: InequalityId,
    family: str,
    n_range: Iterable[int],
    k_range: Iterable[float],
    alpha_grid: Optional[Iterable[float]] = None,
    tolerances: Optional[CheckTolerances] = None,
) -> List[CheckReport]:
    """극값 족 위 격자점마다 CheckReport (rel_slack -> 0 이면 최적 상수)"""
    inequality = InequalityId(inequality)
    if family not in FAMILIES:
        raise ContractViolation(f"unknown family {family!r}; expected one of {FAMILIES}")
    schema = schema_for(inequality)
    if schema.form == "vector":
        raise ContractViolation(f"{inequality.value} has no polynomial extremal family")
    if schema.uses_alpha and alpha_grid is None:
        raise ContractViolation(f"{inequality.value} needs an alpha grid")

    options = (tolerances or CheckTolerances()).model_dump()
    moduli: List[Optional[float]] = list(alpha_grid) if schema.uses_alpha else [None]
    reports = []
    for n in n_range:
        for k in k_range:
            roots = extremal_family(family, n, k)
            for modulus in moduli:
                alpha = PolarPoint(alpha=complex(modulus, 0.0)) if modulus is not None else None
                reports.append(run_check(inequality, roots, GammaWeights.ones(n), alpha, k, **options))
    return reports

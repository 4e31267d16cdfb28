"""
전체 검증 캠페인
- 22개 부등식 x 차수 x 적용 가능한 k x gamma 모드 격자에서 scan 실행
- reports/campaign.json, reports/campaign.csv, REPORT.md 작성
- 보고서 본문의 SHA-256 을 출력 (두 번 실행해 같은 값이면 결정적)
"""

import argparse
import hashlib
import json
import logging
import os
import sys
from datetime import datetime
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from polyneq import __version__
from polyneq.cli import LOG_FORMAT
from polyneq.config import get_settings
from polyneq.ensemble_search import SUMMARY_FIELDS, scan, sharpness_probe, summary_row
from polyneq.inequality_catalog import SCHEMAS, CheckTolerances, k_range_problem
from polyneq.models import EnsembleConfig, InequalityId

logger = logging.getLogger("polyneq.campaign")

# 실험 설정
DEGREES = range(1, 9)
LEMMA_DEGREES = range(1, 11)
K_VALUES = [0.25, 0.5, 1.0, 1.5, 2.0, 5.0]
DEFAULT_TRIALS = 10_000
SEED = 42

# 극값 족 프로파일: (id, family, n 목록, k 목록, |alpha| 목록)
SHARPNESS_PROFILES = [
    (InequalityId.MALIK_5, "binom_k", [3, 5], [0.25, 0.5, 1.0], None),
    (InequalityId.THM1_11, "binom_k", [2, 3, 5], [1.0, 1.5, 2.0], None),
    (InequalityId.THM_I, "binom_k", [3], [1.0], [2.0, 10.0, 100.0]),
    (InequalityId.BERN_1, "monomial", [1, 4, 8], [1.0], None),
    (InequalityId.TURAN_2, "alpha_zn_beta", [1, 4, 8], [1.0], None),
]


def campaign_cells(trials: int, seed: int) -> List[tuple]:
    """(id, EnsembleConfig) 격자"""
    cells = []
    for inequality, schema in SCHEMAS.items():
        if inequality is InequalityId.LEMMA1:
            for n in LEMMA_DEGREES:
                cells.append((inequality, EnsembleConfig(degree=n, k=1.0, trials=trials, seed=seed)))
            continue

        gamma_modes = ["ones", "uniform01"] if schema.uses_gamma else ["ones"]
        alpha_mode = "annulus" if schema.uses_alpha else "none"
        for n in DEGREES:
            for k in K_VALUES:
                if k_range_problem(schema, k):
                    continue
                for gamma_mode in gamma_modes:
                    cfg = EnsembleConfig(
                        degree=n, k=k, trials=trials, seed=seed, gamma_mode=gamma_mode, alpha_mode=alpha_mode,
                    )
                    cells.append((inequality, cfg))
    return cells


def run_campaign(
    trials: int, seed: int, out_dir: str, workers: int, tolerances: Optional[CheckTolerances] = None
) -> str:
    print(f"🧪 캠페인 시작: trials={trials}, seed={seed}, workers={workers}")
    started_at = datetime.now().isoformat(timespec="seconds")

    cells = campaign_cells(trials, seed)
    rows: List[Dict[str, Any]] = []
    scans: List[Dict[str, Any]] = []
    for index, (inequality, cfg) in enumerate(cells, start=1):
        report = scan(inequality, cfg, workers=workers, tolerances=tolerances)
        row = summary_row(report)
        row["gamma_mode"] = cfg.gamma_mode
        rows.append(row)
        scans.append(report.model_dump(mode="json"))
        if report.violations:
            logger.warning("violation: %s n=%d k=%g min_slack=%s", inequality.value, cfg.degree, cfg.k, report.min_slack)
        if index % 50 == 0 or index == len(cells):
            print(f"  {index}/{len(cells)} cells")

    profiles = []
    for inequality, family, n_range, k_range, alphas in SHARPNESS_PROFILES:
        for report in sharpness_probe(inequality, family, n_range, k_range, alphas, tolerances=tolerances):
            profiles.append({
                "id": inequality.value,
                "family": family,
                "n": len(report.witness["roots"]["roots"]),
                "k": report.witness["k"],
                "alpha": report.witness["alpha"][0] if report.witness.get("alpha") else None,
                "rel_slack": report.rel_slack,
            })

    # 본문에는 시각 정보를 넣지 않는다 (다이제스트 비교용)
    body = {"cells": rows, "scans": scans, "sharpness": profiles}
    body_text = json.dumps(body, indent=2, sort_keys=True)
    digest = hashlib.sha256(body_text.encode("utf-8")).hexdigest()

    os.makedirs(out_dir, exist_ok=True)
    manifest = {
        "command": "campaign",
        "flags": {"trials": trials, "seed": seed, "workers": workers},
        "version": __version__,
        "started_at": started_at,
        "finished_at": datetime.now().isoformat(timespec="seconds"),
        "sha256": digest,
    }
    with open(os.path.join(out_dir, "campaign.json"), "w", encoding="utf-8") as f:
        f.write('{\n"manifest": ' + json.dumps(manifest) + ',\n"report": ' + body_text + "\n}\n")

    fields = SUMMARY_FIELDS + ["gamma_mode"]
    with open(os.path.join(out_dir, "campaign.csv"), "w", encoding="utf-8") as f:
        f.write(f"# {json.dumps(manifest)}\n")
        f.write(",".join(fields) + "\n")
        for row in rows:
            f.write(",".join("" if row[key] is None else str(row[key]) for key in fields) + "\n")

    write_report(rows, profiles, trials, seed, digest)
    print(f"\n🔑 sha256(report body) = {digest}")
    return digest


def write_report(rows: List[Dict[str, Any]], profiles: List[Dict[str, Any]], trials: int, seed: int, digest: str):
    total_violations = sum(row["violations"] for row in rows)
    md_content = f"""# 📊 다항식 부등식 검증 캠페인 리포트

**실행 일시**: {datetime.now().strftime("%Y-%m-%d %H:%M:%S")}
**셀 수**: {len(rows)}
**셀당 trial 수**: {trials}
**seed**: {seed}
**본문 SHA-256**: `{digest}`

---

## 1. 부등식별 요약

각 부등식에 대해 차수 1–8, 가정을 만족하는 모든 k, gamma 모드 조합을 스캔한 결과입니다.
**최소 rel_slack** 이 0 에 가까울수록 해당 셀에서 등호에 가까운 인스턴스가 관측된 것입니다.

| 부등식 | 셀 | 위반 | 최소 rel_slack | 상태 |
|--------|----|------|----------------|------|
"""

    by_id: Dict[str, List[Dict[str, Any]]] = {}
    for row in rows:
        by_id.setdefault(row["id"], []).append(row)
    for inequality, cells in by_id.items():
        violations = sum(c["violations"] for c in cells)
        rels = [c["min_rel_slack"] for c in cells if c["min_rel_slack"] is not None]
        worst = f"{min(rels):.3e}" if rels else "-"
        status = "✅" if violations == 0 else "❌ 위반"
        md_content += f"| {inequality} | {len(cells)} | {violations} | {worst} | {status} |\n"

    md_content += """
---

## 2. 극값 족 프로파일

| 부등식 | 족 | n | k | abs(alpha) | rel_slack |
|--------|----|---|---|------------|-----------|
"""
    for p in profiles:
        alpha = "-" if p["alpha"] is None else f"{p['alpha']:g}"
        md_content += f"| {p['id']} | {p['family']} | {p['n']} | {p['k']:g} | {alpha} | {p['rel_slack']:.3e} |\n"

    md_content += f"""
---

## 3. 결론

- 전체 위반 수: **{total_violations}**
- 같은 seed 로 다시 실행했을 때 위 SHA-256 이 같으면 결과가 재현된 것입니다.
"""

    with open("REPORT.md", "w", encoding="utf-8") as f:
        f.write(md_content)

    print("\n✅ 리포트 생성 완료: REPORT.md")


def main(argv=None) -> int:
    load_dotenv()
    settings = get_settings()
    logging.basicConfig(level=settings.log_level.upper(), stream=sys.stderr, format=LOG_FORMAT)

    parser = argparse.ArgumentParser(description="run the full inequality campaign")
    parser.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    parser.add_argument("--seed", type=int, default=SEED)
    parser.add_argument("--out-dir", default=settings.output_dir)
    parser.add_argument("--threads", type=int, default=0)
    args = parser.parse_args(argv)

    run_campaign(
        args.trials, args.seed, args.out_dir, args.threads or settings.worker_count(), settings.check_tolerances()
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())

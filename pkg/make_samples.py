"""
샘플 입력 생성
- 극값 족 (binom_k, monomial, alpha_zn_beta) 을 RootForm / Polynomial JSON 으로 저장
- README 의 CLI 예제가 samples/ 아래 파일을 사용
"""

import json
import math
import os
from typing import Any, Dict

from polyneq.models import Polynomial, RootForm

BASE_DIR = os.path.dirname(os.path.abspath(__file__))
SAMPLES_DIR = os.path.join(BASE_DIR, "samples")

# (k, n)
BINOM_CASES = [(1.0, 3), (0.5, 4), (2.0, 3)]
EDGE_DEGREE = 4
LEMMA_X = [0.2, 0.5, 0.9, 1.0]


def binom_roots(k: float, n: int) -> RootForm:
    return RootForm(leading=1.0, roots=[-k] * n)


def binom_coeffs(k: float, n: int) -> Polynomial:
    """(z+k)^n 계수 a_j = C(n, j) k^(n-j)"""
    return Polynomial(coeffs=[float(math.comb(n, j) * k ** (n - j)) for j in range(n + 1)])


def save(name: str, data: Dict[str, Any]) -> None:
    path = os.path.join(SAMPLES_DIR, name)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
        f.write("\n")
    print(f"  {name}")


def main():
    os.makedirs(SAMPLES_DIR, exist_ok=True)
    print(f"Writing samples to {SAMPLES_DIR}")

    for k, n in BINOM_CASES:
        stem = f"binom_k{k:g}_n{n}"
        save(f"{stem}.roots.json", binom_roots(k, n).model_dump(mode="json"))
        save(f"{stem}.coeffs.json", binom_coeffs(k, n).model_dump(mode="json"))

    # Bernstein 등호: z^n, Turan 등호: z^n + 1
    monomial = Polynomial(coeffs=[0.0] * EDGE_DEGREE + [1.0])
    save(f"monomial_n{EDGE_DEGREE}.coeffs.json", monomial.model_dump(mode="json"))
    two_term = Polynomial(coeffs=[1.0] + [0.0] * (EDGE_DEGREE - 1) + [1.0])
    save(f"alpha_zn_beta_n{EDGE_DEGREE}.coeffs.json", two_term.model_dump(mode="json"))

    save(f"lemma1_x{len(LEMMA_X)}.json", {"x": LEMMA_X})

    # 단위원 밖의 근: 가정 불충족 (exit 3) 예시
    outside = RootForm(leading=1.0, roots=[1.5, 0.2j])
    save("outside_disk.roots.json", outside.model_dump(mode="json"))

    print("Samples complete!")


if __name__ == "__main__":
    main()

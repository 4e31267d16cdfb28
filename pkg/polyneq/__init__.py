"""
polyneq - 복소 다항식의 Bernstein/Turan 형 부등식 수치 검증 도구
"""

__version__ = "1.0.0"

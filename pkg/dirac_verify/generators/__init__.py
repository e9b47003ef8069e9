"""
Report generators for verification runs
"""
from .report_generator import ReportGenerator

__all__ = ["ReportGenerator"]

"""
Input parsers for scenario configs, mass files and field literals
"""
from .scenario_parser import (
    MassFileParser,
    ParseResult,
    ScenarioParser,
    complex_array,
    parse_field_literal,
)

__all__ = ["ScenarioParser", "MassFileParser", "ParseResult", "parse_field_literal", "complex_array"]

"""Shared fixtures: the golden documents and small table builders"""

import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

GOLDEN_DIR = os.path.join(ROOT, "golden")

from sesquiad_document import load  # noqa: E402


def golden_text(name: str) -> str:
    with open(os.path.join(GOLDEN_DIR, f"{name}.sesq"), encoding="utf-8") as handle:
        return handle.read()


def golden_path(name: str) -> str:
    return os.path.join(GOLDEN_DIR, f"{name}.sesq")


def golden(name: str):
    """The built object of a golden document"""
    return load(golden_text(name))[1]

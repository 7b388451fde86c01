"""
harness/__init__.py
Evaluation harness package initialization
"""

from harness.manifest import Manifest, ManifestEntry, load_manifest, save_manifest
from harness.splitter import split
from harness.report import EvaluationReport, build_report
from harness.evaluator import Evaluator, evaluate
from harness.synth import SynthResult, synth_dataset

__all__ = [
    'Manifest',
    'ManifestEntry',
    'load_manifest',
    'save_manifest',
    'split',
    'EvaluationReport',
    'build_report',
    'Evaluator',
    'evaluate',
    'SynthResult',
    'synth_dataset',
]

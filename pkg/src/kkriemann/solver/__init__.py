"""Finite-volume solver: LLF stepping, renormalization, wave extraction."""
from .backend import BACKEND, get_kernels
from .core import (Field, Grid, RunResult, Snapshot, llf_step, max_wave_speed,
                   renormalize, run, simulate, sized_grid)
from .extract import Segment, WaveReport, extract_wave_structure
from .refine import GrowthTable, RefineLevel, refine_study

__all__ = ["BACKEND", "Field", "GrowthTable", "Grid", "RefineLevel", "RunResult", "Segment",
           "Snapshot", "WaveReport", "extract_wave_structure", "get_kernels", "llf_step",
           "max_wave_speed", "refine_study", "renormalize", "run", "simulate", "sized_grid"]

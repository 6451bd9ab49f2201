"""
Configuration module for the wpfp_tssp project.
Run configuration models, the INI loader and the experiment presets.
"""
from .config_loader import load_config, parse_config
from .config_models import OutputOptions, PhysicalParams, RunConfig
from .preset_manager import ExperimentPreset, PresetInfo, PresetManager, preset_manager

__all__ = ["load_config",
           "parse_config",
           "OutputOptions",
           "PhysicalParams",
           "RunConfig",
           "ExperimentPreset",
           "PresetInfo",
           "PresetManager",
           "preset_manager"]

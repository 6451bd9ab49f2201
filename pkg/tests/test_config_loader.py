"""
Tests for the INI configuration loader.
"""
import os
import unittest

from src.wpfp_tssp.config.config_loader import load_config, parse_config, parse_number
from src.wpfp_tssp.config.preset_manager import preset_manager
from src.wpfp_tssp.errors import ConfigurationError
from src.wpfp_tssp.operators.potential import ExternalPotential, SelfConsistentPotential

CONFIG_DIR = os.path.join(os.path.dirname(__file__), '..', 'config')

BASE = """\
[grid]
a = -2
b = 2
c = -2
d = 2
M = 16
N = 16

[physics]
epsilon = 0.1
Dpp = 0.2
Dqq = 0.2
Dpq = 0.05
gamma = 1

[initial]
a11 = 1
a22 = 1
x0 = 0.1
xi0 = -0.2

[potential]
kind = harmonic
coefficients = 1, 1

[run]
dt = 2^-8
T = 0.0625
"""


class TestParseConfig(unittest.TestCase):

    def test_minimal_config(self):
        config = parse_config(BASE)
        self.assertEqual(config.grid.M, 16)
        self.assertEqual(config.dt, 2.0 ** -8)
        self.assertEqual(config.steps, 16)
        self.assertEqual(config.params.potential, ExternalPotential("harmonic", (1.0, 1.0)))
        self.assertEqual(config.friction, "collocation")
        self.assertEqual(config.output.every, 1)

    def test_power_notation(self):
        self.assertEqual(parse_number("2^-8"), 0.00390625)
        self.assertEqual(parse_number(" 2 ^ 7 "), 128.0)
        self.assertEqual(parse_number("-2^-8"), -0.00390625)
        self.assertEqual(parse_number("0.5"), "0.5")

    def test_shipped_configs_match_presets(self):
        """Test that config/<id>.ini describes exactly the built-in preset."""
        for info in preset_manager.get_available_presets():
            with self.subTest(preset=info['id']):
                config = load_config(os.path.join(CONFIG_DIR, f"{info['id']}.ini"))
                self.assertEqual(config, preset_manager.get_preset(info['id']).config)

    def test_self_consistent_potential(self):
        text = BASE.replace("kind = harmonic\ncoefficients = 1, 1", "kind = self_consistent\nalpha = -1")
        config = parse_config(text)
        self.assertEqual(config.params.potential, SelfConsistentPotential(-1))
        self.assertEqual(config.params.alpha_tilde, 0.5)

    def test_unknown_key_reports_line(self):
        text = BASE.replace("gamma = 1", "gamma = 1\nbeta = 2")
        with self.assertRaises(ConfigurationError) as ctx:
            parse_config(text, source="run.ini")
        error = ctx.exception
        self.assertEqual(error.field, "physics.beta")
        self.assertEqual(error.line, 15)
        self.assertEqual(error.message, "unknown key")
        self.assertTrue(str(error).startswith("run.ini:15: physics.beta"))

    def test_unknown_section(self):
        with self.assertRaises(ConfigurationError) as ctx:
            parse_config(BASE + "\n[solver]\norder = 2\n")
        self.assertEqual(ctx.exception.field, "solver")

    def test_missing_section(self):
        text = BASE.split("[run]")[0]
        with self.assertRaises(ConfigurationError) as ctx:
            parse_config(text)
        self.assertEqual(ctx.exception.field, "run")

    def test_invalid_values(self):
        cases = {
            "potential.kind": ("kind = harmonic\ncoefficients = 1, 1", "kind = exp_well\ncoefficients = 1"),
            "potential.alpha": ("kind = harmonic\ncoefficients = 1, 1", "kind = self_consistent\nalpha = 2"),
            "run.T": ("T = 0.0625", "T = 0.07"),
            "run.dt": ("dt = 2^-8", "dt = -2^-8"),
            "grid.M": ("M = 16", "M = 15"),
            "physics.epsilon": ("epsilon = 0.1", "epsilon = 0"),
            "run.friction": ("T = 0.0625", "T = 0.0625\nfriction = spectral"),
        }
        for field, (old, new) in cases.items():
            with self.subTest(field=field):
                with self.assertRaises(ConfigurationError) as ctx:
                    parse_config(BASE.replace(old, new), source="bad.ini")
                self.assertEqual(ctx.exception.field, field)
                self.assertEqual(ctx.exception.path, "bad.ini")
                self.assertIsNotNone(ctx.exception.line)

    def test_indefinite_diffusion(self):
        text = BASE.replace("Dpq = 0.05", "Dpq = 0.5")
        with self.assertRaises(ConfigurationError) as ctx:
            parse_config(text)
        self.assertEqual(ctx.exception.field, "physics")

        override = text.replace("gamma = 1", "gamma = 1\nallow_indefinite_diffusion = true")
        with self.assertLogs("src.wpfp_tssp.config.config_models", level="WARNING"):
            config = parse_config(override)
        self.assertFalse(config.params.diffusion_is_psd())

    def test_output_section(self):
        text = BASE + "\n[output]\nsnapshots = 3\nsnapshot_times = 0.01, 2^-5\nheatmap = yes\nevery = 4\n"
        output = parse_config(text).output
        self.assertEqual(output.snapshots, 3)
        self.assertEqual(output.snapshot_times, (0.01, 0.03125))
        self.assertTrue(output.heatmap)
        self.assertEqual(output.every, 4)

    def test_missing_file(self):
        with self.assertRaises(ConfigurationError) as ctx:
            load_config(os.path.join(CONFIG_DIR, 'missing.ini'))
        self.assertTrue(ctx.exception.path.endswith('missing.ini'))


if __name__ == '__main__':
    unittest.main()

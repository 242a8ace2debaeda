import unittest
from unittest.mock import patch

from bilevelknap.config import SolverConfig, resolve


class TestSolverConfig(unittest.TestCase):

    def test_defaults(self):
        '''Tests the defaults without environment overrides'''
        config = SolverConfig.from_env({})
        self.assertEqual(config, SolverConfig())
        self.assertEqual(config.max_permutation_items, 8)
        self.assertEqual(config.workers, 1)

    def test_overrides(self):
        '''Tests BILEVELKNAP_* variables override single fields'''
        config = SolverConfig.from_env({'BILEVELKNAP_MEMORY_CAP': '4096',
                                        'BILEVELKNAP_WORKERS': '3',
                                        'UNRELATED': 'x'})
        self.assertEqual(config.memory_cap, 4096)
        self.assertEqual(config.workers, 3)
        self.assertEqual(config.mc_block_size, SolverConfig().mc_block_size)

    def test_invalid_values(self):
        '''Tests non integers and non positive values are rejected'''
        with self.assertRaises(ValueError):
            SolverConfig.from_env({'BILEVELKNAP_WORKERS': 'many'})
        with self.assertRaises(ValueError):
            SolverConfig.from_env({'BILEVELKNAP_MEMORY_CAP': '0'})

    @patch.dict('os.environ', {'BILEVELKNAP_MC_BLOCK_SIZE': '128'})
    def test_resolve(self):
        '''Tests None falls back to the process environment'''
        self.assertEqual(resolve(None).mc_block_size, 128)
        explicit = SolverConfig(mc_block_size=7)
        self.assertIs(resolve(explicit), explicit)

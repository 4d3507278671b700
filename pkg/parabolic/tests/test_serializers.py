import json

from django.test import SimpleTestCase, override_settings

from parabolic.exceptions import PreconditionError
from parabolic.identities import ParameterPoint, VerificationRecord
from parabolic.reports import (
    RECORD_HEADER,
    expand_points,
    format_complex,
    plan_runs,
    render_csv,
    render_json,
    run_config,
    sweep_points,
    sweep_values,
)
from parabolic.serializers import (
    GridConfigSerializer,
    VerificationRecordSerializer,
    parse_complex,
)


class ParseComplexTests(SimpleTestCase):
    def test_literals(self):
        cases = {
            '1.5': 1.5 + 0j,
            '-3': -3 + 0j,
            '2i': 2j,
            '-2i': -2j,
            'i': 1j,
            '-i': -1j,
            '1-i': 1 - 1j,
            '0.3+1e-2i': 0.3 + 0.01j,
            '2.5e-3i': 0.0025j,
            '1e-3': 0.001 + 0j,
            ' 1 + 2j ': 1 + 2j,
        }
        for text, expected in cases.items():
            with self.subTest(text=text):
                self.assertEqual(parse_complex(text), expected)

    def test_numbers_pass_through(self):
        self.assertEqual(parse_complex(2), 2 + 0j)
        self.assertEqual(parse_complex(0.5 - 1j), 0.5 - 1j)

    def test_rejects(self):
        for text in ('', 'abc', '1+', '1.5.2', 'nan', '1ii', True, float('inf')):
            with self.subTest(text=text):
                with self.assertRaises(ValueError):
                    parse_complex(text)


class GridConfigTests(SimpleTestCase):
    def test_valid_config(self):
        serializer = GridConfigSerializer(data={
            'identities': ['eq24'],
            'nu': ['0.5', 1.5],
            'z': ['1', {'re': 0.0, 'im': 2.0}],
        })
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.validated_data
        self.assertEqual(config['format'], 'json')
        self.assertEqual(config['z'], [1 + 0j, 2j])
        points = expand_points(config)
        self.assertEqual(len(points), 4)
        self.assertEqual(points[0], ParameterPoint(nu=0.5, mu=0, z=1, a=0))
        self.assertEqual(points[1].z, 2j)

    def test_unknown_identity(self):
        serializer = GridConfigSerializer(data={'identities': ['eq99']})
        self.assertFalse(serializer.is_valid())
        self.assertIn('identities', serializer.errors)

    def test_needs_an_identity(self):
        serializer = GridConfigSerializer(data={'nu': ['1']})
        self.assertFalse(serializer.is_valid())
        self.assertIn('non_field_errors', serializer.errors)

    def test_tolerances_name_catalog_entries(self):
        serializer = GridConfigSerializer(data={'identities': ['eq24'], 'tolerances': {'eq99': 1e-3}})
        self.assertFalse(serializer.is_valid())
        self.assertIn('tolerances', serializer.errors)

    def test_bad_literal(self):
        serializer = GridConfigSerializer(data={'identities': ['eq24'], 'nu': ['one']})
        self.assertFalse(serializer.is_valid())
        self.assertIn('nu', serializer.errors)

    def test_plan_order_and_tolerances(self):
        serializer = GridConfigSerializer(data={
            'identities': ['eq24'],
            'nu': ['0.5'],
            'grids': [
                {'identity': 'eq43', 'nu': ['-0.5'], 'mu': ['1'], 'z': ['1']},
                {'identity': 'eq24', 'nu': ['2'], 'tol': 1e-6},
            ],
            'tolerances': {'eq24': 1e-4, 'eq43': 1e-5},
        })
        self.assertTrue(serializer.is_valid(), serializer.errors)
        runs = plan_runs(serializer.validated_data)
        self.assertEqual([(identity, tol) for identity, _, tol in runs],
                         [('eq24', 1e-4), ('eq43', 1e-5), ('eq24', 1e-6)])


@override_settings(PCF_REPORT_TIMING=False)
class ReportTests(SimpleTestCase):
    config = {
        'identities': ['eq24'],
        'nu': [0.5 + 0j, 1.5 + 0j],
        'z': [1 + 0j],
        'grids': [{'identity': 'eq43', 'nu': [0.5 + 0j], 'mu': [1 + 0j], 'z': [1 + 0j]}],
        'tolerances': {},
        'output': '',
        'format': 'json',
    }

    def test_json_is_deterministic(self):
        first = render_json(run_config(self.config, max_workers=2))
        second = render_json(run_config(self.config, max_workers=1))
        self.assertEqual(first, second)
        data = json.loads(first)
        self.assertEqual(list(data), ['tool', 'version', 'config', 'summary', 'records'])
        self.assertEqual([row['identity'] for row in data['summary']], ['eq24', 'eq43'])
        self.assertEqual(data['summary'][1]['skipped'], 1)
        self.assertNotIn('wall_time', data['summary'][0])
        self.assertEqual(data['records'][0]['point']['nu'], {'re': 0.5, 'im': 0.0})
        self.assertEqual(data['config']['z'], [{'re': 1.0, 'im': 0.0}])

    def test_output_path_stays_out_of_the_report(self):
        elsewhere = dict(self.config, output='elsewhere.json')
        first = render_json(run_config(self.config, max_workers=1))
        second = render_json(run_config(elsewhere, max_workers=1))
        self.assertEqual(first, second)
        self.assertNotIn('output', json.loads(first)['config'])

    def test_non_finite_values_become_null(self):
        record = VerificationRecord(
            identity_id='eq24',
            point=ParameterPoint(nu=0.5, z=1),
            lhs_value=complex(float('inf'), 0.0),
            rhs_value=1 + 0j,
            abs_err=float('nan'),
            rel_err=float('inf'),
            passed=False,
            tolerance=1e-9,
            status='failed',
            diagnostics={'rhs_error_estimate': float('nan'), 'rhs_evaluations': 15},
        )
        data = VerificationRecordSerializer(record).data
        self.assertEqual(data['lhs'], {'re': None, 'im': 0.0})
        self.assertIsNone(data['abs_err'])
        self.assertIsNone(data['rel_err'])
        self.assertEqual(data['diagnostics'], {'rhs_error_estimate': None, 'rhs_evaluations': 15})

    def test_csv(self):
        table = render_csv(run_config(self.config, max_workers=1)).splitlines()
        self.assertEqual(table[0], ','.join(RECORD_HEADER))
        self.assertEqual(len(table), 4)
        self.assertTrue(table[3].startswith('eq43,0.5,1.0,1.0,0.0,,,,,'))
        self.assertIn(',skipped,', table[3])

    def test_format_complex(self):
        self.assertEqual(format_complex(1.5), '1.5')
        self.assertEqual(format_complex(1 - 2j), '1.0-2.0i')
        self.assertEqual(parse_complex(format_complex(0.1 + 1e-20j)), 0.1 + 1e-20j)


class SweepTests(SimpleTestCase):
    def test_values_include_stop(self):
        values = sweep_values(0.2, 2.2, 0.5)
        self.assertEqual(len(values), 5)
        self.assertAlmostEqual(values[-1], 2.2)

    def test_empty_and_invalid(self):
        self.assertEqual(len(sweep_values(1.0, 0.0, 0.5)), 0)
        with self.assertRaises(PreconditionError):
            sweep_values(0.0, 1.0, 0.0)

    def test_points_hold_other_coordinates(self):
        base = ParameterPoint(nu=0.5, mu=1, z=1 + 2j, a=1)
        points = sweep_points(base, 'z-imag', sweep_values(0.0, 1.0, 0.5))
        self.assertEqual([point.z for point in points], [1 + 0j, 1 + 0.5j, 1 + 1j])
        self.assertTrue(all(point.nu == 0.5 and point.a == 1 for point in points))
        with self.assertRaises(PreconditionError):
            sweep_points(base, 'w', sweep_values(0.0, 1.0, 0.5))

import unittest

from CloudHarvestCorePluginManager.decorators import register_definition
from CloudHarvestCorePluginManager.registry import Registry

from EquilibriumPricing.exceptions import ConvergenceException, TaskException
from EquilibriumPricing.tasks import (BaseTask, OracleTaskChain, PriceBsTask, PricingTaskChain, TaskStatusCodes,
                                      task_chain_from_dict, task_from_dict)


@register_definition(name='test-not-converging', category='task')
class NotConvergingTask(BaseTask):
    def method(self):
        raise ConvergenceException('no root', log_level='debug')


class TestTaskStatusCodes(unittest.TestCase):
    def test_enum_values(self):
        task_codes = TaskStatusCodes.__members__
        [self.assertTrue(code == TaskStatusCodes[code].value) for code in task_codes]


class TestRegistry(unittest.TestCase):
    def test_registered_classes(self):
        self.assertIs(Registry.find(result_key='cls', name='chain', category='chain')[0], PricingTaskChain)
        self.assertIs(Registry.find(result_key='cls', name='oracle', category='chain')[0], OracleTaskChain)
        self.assertIs(Registry.find(result_key='cls', name='price-bs', category='task')[0], PriceBsTask)

    def test_unknown_task(self):
        with self.assertRaises(TaskException):
            task_from_dict({'no-such-task': {}})

    def test_unknown_chain(self):
        with self.assertRaises(TaskException):
            task_chain_from_dict({'no-such-chain': {'tasks': []}})

    def test_task_name_defaults_to_registered_name(self):
        self.assertEqual(task_from_dict({'price-bs': {}}).name, 'price-bs')
        self.assertEqual(task_from_dict({'price-bs': {'name': 'bs'}}).name, 'bs')
        self.assertEqual(PriceBsTask().name, 'PriceBsTask')


class TestBaseTask(unittest.TestCase):
    def test_not_implemented(self):
        task = BaseTask(name='bare').run()

        self.assertEqual(task.status, TaskStatusCodes.error)
        self.assertEqual(task.exit_code, 1)
        self.assertEqual(len(task.errors), 1)
        self.assertEqual(task.meta['Status'], 'error')
        self.assertGreaterEqual(task.meta['Duration'], 0)

    def test_exit_code_follows_exception(self):
        task = task_from_dict({'test-not-converging': {}}).run()

        self.assertEqual(task.name, 'test-not-converging')
        self.assertEqual(task.exit_code, 3)

    def test_unexpected_arguments(self):
        with self.assertRaises(TaskException):
            task_from_dict({'price-bs': {'spot': 100.0}})

    def test_complete(self):
        task = task_from_dict({'price-bs': {'strike': 95.0}}).run()

        self.assertEqual(task.status, TaskStatusCodes.complete)
        self.assertEqual(task.exit_code, 0)
        self.assertEqual(task.meta['Count'], 1)
        self.assertEqual(task.errors, [])


class TestTaskChain(unittest.TestCase):
    def setUp(self):
        self.task_configuration = {
            'chain': {
                'name': 'test_chain',
                'description': 'This is a task_chain.',
                'tasks': [
                    {
                        'price-bs': {
                            'name': 'bs',
                            'strike': 95,
                            'result_as': 'bs'
                        }
                    },
                    {
                        'price-eq': {
                            'name': 'equilibrium',
                            'target_p': 0.5,
                            'mu': 0.25,
                            'strike': 90
                        }
                    }
                ]
            }
        }

    def test_run(self):
        chain = task_chain_from_dict(template=self.task_configuration).run()

        self.assertIsInstance(chain, PricingTaskChain)
        self.assertEqual(chain.status, TaskStatusCodes.complete)
        self.assertEqual(chain.exit_code, 0)
        self.assertEqual(len(chain), 2)
        self.assertEqual(len(chain.result), 2)
        self.assertEqual(chain.variables['bs'][0]['K'], 95.0)
        self.assertEqual(chain.result[1]['status'], 'priced')

        metrics = chain.performance_metrics
        self.assertEqual([metric['Name'] for metric in metrics], ['bs', 'equilibrium'])
        self.assertTrue(all(metric['Status'] == 'complete' for metric in metrics))

    def test_stops_at_first_error(self):
        self.task_configuration['chain']['tasks'].insert(0, {'price-eq': {'target_p': 1.5}})

        chain = task_chain_from_dict(template=self.task_configuration).run()

        self.assertEqual(chain.status, TaskStatusCodes.error)
        self.assertEqual(len(chain), 1)
        self.assertEqual(chain.exit_code, 2)
        self.assertTrue(chain.errors)

    def test_unknown_task(self):
        self.task_configuration['chain']['tasks'].append({'no-such-task': {}})

        chain = task_chain_from_dict(template=self.task_configuration).run()

        self.assertEqual(chain.status, TaskStatusCodes.error)
        self.assertEqual(chain.exit_code, 1)
        self.assertEqual(len(chain), 2)

    def test_convergence_exit_code(self):
        chain = task_chain_from_dict(template={'chain': {'tasks': [{'test-not-converging': {}}]}}).run()

        self.assertEqual(chain.exit_code, 3)

    def test_result_variable(self):
        self.task_configuration['chain']['tasks'][1]['price-eq']['result_as'] = 'result'

        chain = task_chain_from_dict(template=self.task_configuration).run()

        self.assertEqual(len(chain.result), 1)
        self.assertEqual(chain.result[0]['K'], 90.0)


class TestOracleTaskChain(unittest.TestCase):
    def template(self, tolerance):
        return {
            'oracle': {
                'tasks': [
                    {
                        'oracle-check': {
                            'checks': ['exercise-probability'],
                            'configs': 2,
                            'paths': 10000,
                            'tolerance': tolerance
                        }
                    }
                ]
            }
        }

    def test_failed_checks(self):
        chain = task_chain_from_dict(template=self.template(-1.0)).run()

        self.assertIsInstance(chain, OracleTaskChain)
        self.assertEqual(chain.status, TaskStatusCodes.error)
        self.assertEqual(chain.exit_code, 1)
        self.assertEqual(len(chain.meta['Failed']), 2)
        self.assertEqual(len(chain.result), 2)

    def test_passed_checks(self):
        chain = task_chain_from_dict(template=self.template(1e9)).run()

        self.assertEqual(chain.status, TaskStatusCodes.complete)
        self.assertNotIn('Failed', chain.meta)


if __name__ == '__main__':
    unittest.main()

"""
Task chain classes which may be named as the top-level key of a chain template.
"""

from CloudHarvestCorePluginManager.decorators import register_definition

from .base import BaseTaskChain, TaskStatusCodes


@register_definition(name='chain', category='chain')
class PricingTaskChain(BaseTaskChain):
    """
    Runs its tasks in order and returns their concatenated records.
    """


@register_definition(name='oracle', category='chain')
class OracleTaskChain(BaseTaskChain):
    """
    A chain of oracle checks. The chain ends in an error state when any check record reports `passed: false`, so the
    command line exits non-zero when a closed form disagrees with its simulation.
    """

    def on_complete(self) -> 'OracleTaskChain':
        super().on_complete()

        failed = [record for record in self.result if record.get('passed') is False]

        if failed:
            self.status = TaskStatusCodes.error
            self.meta['Errors'].append(f'{len(failed)} of {len(self.result)} oracle checks outside tolerance')
            self.meta['Failed'] = [f'{record["check"]} z={record["z_score"]:.2f}' for record in failed]

        return self

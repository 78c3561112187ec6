from .base import BaseTask, BaseTaskChain, TaskStatusCodes
from .chains import OracleTaskChain, PricingTaskChain
from .factories import packaged_chain, task_chain_from_dict, task_chain_from_file, task_from_dict
from .tasks import (MARKET_DEFAULTS, ConventionSearchTask, EquilibriumPriceTask, FileTask, ImpliedVolTask, MarketTask,
                    OracleCheckTask, PriceBsTask, ProbabilityTask, ScanTask, SurfaceTask, TableTask)

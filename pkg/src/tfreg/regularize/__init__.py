from .pipeline import SynthesisFailed, base_lambda, synthesize
from .plan import Plan, PlanInfeasible, base_parameter, parameter_registry, plan
from .steps import (ParityError, PrescribedInfeasible, SamplingError, SpanningTreeError,
                    StageError, TrimError, bounded_spanning_forest, bounded_spanning_tree,
                    parity_subgraph, prescribed_subgraph, sample_subset, trim_excess)

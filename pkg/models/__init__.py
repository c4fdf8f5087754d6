# This file makes the models directory a Python package
from models.models import (
    AuxiliaryPoint,
    BoundaryCondition,
    ConservedState,
    ConvergenceRow,
    DgSolution,
    Eos,
    InvariantRegion,
    LimiterConfig,
    Mesh,
    PrimitiveState,
    PropertyResult,
    RunConfig,
    RunSummary,
    Scenario,
    SminRecord,
    StepperState,
    UnitNormal,
)

__all__ = [
    'AuxiliaryPoint',
    'BoundaryCondition',
    'ConservedState',
    'ConvergenceRow',
    'DgSolution',
    'Eos',
    'InvariantRegion',
    'LimiterConfig',
    'Mesh',
    'PrimitiveState',
    'PropertyResult',
    'RunConfig',
    'RunSummary',
    'Scenario',
    'SminRecord',
    'StepperState',
    'UnitNormal',
]

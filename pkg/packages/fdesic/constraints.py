"""
Parameter boxes and hardware quantization lattices for each canceller family.
"""

import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import InvalidArgumentError
from .rfmodel import (
    PCB_AMP_RANGE_DB,
    PCB_C_F_RANGE_F,
    PCB_C_Q_RANGE_F,
    CancellerFamily,
    PcbCircuitConstants,
)


PHASE_PARAM = "phase_rad"

# Per-tap parameter order used by the optimizer and the lattice search
PARAM_NAMES: dict[CancellerFamily, tuple[str, ...]] = {
    CancellerFamily.PCB: ("amp_db", PHASE_PARAM, "c_f_farad", "c_q_farad"),
    CancellerFamily.RFIC: ("amp_db", PHASE_PARAM, "fc_hz", "q"),
    CancellerFamily.DELAY_LINE: ("amp_linear", "tau_s", PHASE_PARAM),
    CancellerFamily.AMP_PHASE: ("amp_linear", PHASE_PARAM),
}


class ParamBox(BaseModel):
    """Closed interval for one parameter. min > max is reported when a solver uses it."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    min: float
    max: float


class ParamQuantization(BaseModel):
    """
    Realizable values of one parameter: min + k*step up to max, or
    2**bits equally spaced values including both endpoints.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    min: float
    max: float
    step: Optional[float] = Field(default=None, gt=0)
    bits: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check(self):
        if not self.min < self.max:
            raise ValueError(f"quantization range needs min < max, got [{self.min}, {self.max}]")
        if (self.step is None) == (self.bits is None):
            raise ValueError("give exactly one of step or bits")
        return self

    def lattice(self) -> np.ndarray:
        if self.step is not None:
            n_steps = int(math.floor((self.max - self.min) / self.step + 1e-9))
            return self.min + self.step * np.arange(n_steps + 1)
        return np.linspace(self.min, self.max, 2**self.bits)

    def contains(self, value: float) -> bool:
        tol = 1e-9 * (self.max - self.min)
        return self.min - tol <= value <= self.max + tol

    def snap_index(self, value: float) -> int:
        """Index of the nearest lattice value; exact ties go to the lower value."""
        if not self.contains(value):
            raise InvalidArgumentError(f"{value!r} lies outside [{self.min}, {self.max}]")
        lattice = self.lattice()
        upper = int(np.searchsorted(lattice, value, side="left"))
        if upper == 0:
            return 0
        if upper >= lattice.size:
            return lattice.size - 1
        lower = upper - 1
        d_lower = value - lattice[lower]
        d_upper = lattice[upper] - value
        tie_tol = 1e-9 * (lattice[upper] - lattice[lower])
        return lower if d_lower <= d_upper + tie_tol else upper


class QuantizationSpec(BaseModel):
    """Per-parameter lattices; parameters without an entry stay continuous."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    params: dict[str, ParamQuantization]

    def snap(self, name: str, value: float) -> float:
        quant = self.params.get(name)
        if quant is None:
            return value
        return float(quant.lattice()[quant.snap_index(value)])


class ConstraintSet(BaseModel):
    """
    Boxes for one canceller family plus an optional quantization spec.

    Phases are not boxed: they live on the circle [-pi, pi].
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: CancellerFamily
    boxes: dict[str, ParamBox]
    quantization: Optional[QuantizationSpec] = None
    constants: Optional[PcbCircuitConstants] = None

    def check(self, family: CancellerFamily) -> None:
        """Raise InvalidArgumentError unless the set is usable for family."""
        if CancellerFamily(family) != self.family:
            raise InvalidArgumentError(f"constraint set is for {self.family.value}, not {family.value}")
        for name in PARAM_NAMES[self.family]:
            if name == PHASE_PARAM:
                continue
            box = self.boxes.get(name)
            if box is None:
                raise InvalidArgumentError(f"missing box for parameter {name}")
            if box.min > box.max:
                raise InvalidArgumentError(f"infeasible box for {name}: [{box.min}, {box.max}]")

    def pcb_constants(self) -> PcbCircuitConstants:
        return self.constants or PcbCircuitConstants()


def phase_quantization(bits: int = 8) -> ParamQuantization:
    return ParamQuantization(min=-math.pi, max=math.pi, bits=bits)


def default_constraints(family: CancellerFamily) -> ConstraintSet:
    """Hardware ranges and resolutions of the RFIC and PCB cancellers."""
    family = CancellerFamily(family)
    if family == CancellerFamily.RFIC:
        return ConstraintSet(
            family=family,
            boxes={
                "amp_db": ParamBox(min=-40.0, max=-10.0),
                "fc_hz": ParamBox(min=875e6, max=925e6),
                "q": ParamBox(min=1.0, max=50.0),
            },
            quantization=QuantizationSpec(params={
                "amp_db": ParamQuantization(min=-40.0, max=-10.0, step=0.25),
                PHASE_PARAM: phase_quantization(),
                "fc_hz": ParamQuantization(min=875e6, max=925e6, bits=8),
                "q": ParamQuantization(min=1.0, max=50.0, bits=8),
            }),
        )
    if family == CancellerFamily.PCB:
        return ConstraintSet(
            family=family,
            boxes={
                "amp_db": ParamBox(min=PCB_AMP_RANGE_DB[0], max=PCB_AMP_RANGE_DB[1]),
                "c_f_farad": ParamBox(min=PCB_C_F_RANGE_F[0], max=PCB_C_F_RANGE_F[1]),
                "c_q_farad": ParamBox(min=PCB_C_Q_RANGE_F[0], max=PCB_C_Q_RANGE_F[1]),
            },
            quantization=QuantizationSpec(params={
                "amp_db": ParamQuantization(min=PCB_AMP_RANGE_DB[0], max=PCB_AMP_RANGE_DB[1], step=0.5),
                PHASE_PARAM: phase_quantization(),
                "c_f_farad": ParamQuantization(min=PCB_C_F_RANGE_F[0], max=PCB_C_F_RANGE_F[1], step=0.12e-12),
                "c_q_farad": ParamQuantization(min=PCB_C_Q_RANGE_F[0], max=PCB_C_Q_RANGE_F[1], step=0.39e-12),
            }),
            constants=PcbCircuitConstants(),
        )
    if family == CancellerFamily.DELAY_LINE:
        return ConstraintSet(
            family=family,
            boxes={
                "amp_linear": ParamBox(min=0.0, max=1.0),
                "tau_s": ParamBox(min=0.0, max=40e-9),
            },
        )
    return ConstraintSet(family=family, boxes={"amp_linear": ParamBox(min=0.0, max=1.0)})

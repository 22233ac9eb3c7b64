import math

import numpy as np
import pytest
from pydantic import ValidationError

from fdesic.constraints import (
    PARAM_NAMES,
    PHASE_PARAM,
    ConstraintSet,
    ParamBox,
    ParamQuantization,
    QuantizationSpec,
    default_constraints,
    phase_quantization,
)
from fdesic.errors import InvalidArgumentError
from fdesic.rfmodel import CancellerFamily


def test_step_lattice_includes_both_ends():
    quant = ParamQuantization(min=-15.5, max=0.0, step=0.5)
    lattice = quant.lattice()
    assert lattice.size == 32
    assert lattice[0] == -15.5
    assert lattice[-1] == pytest.approx(0.0)


def test_bit_lattice():
    lattice = phase_quantization(8).lattice()
    assert lattice.size == 256
    assert lattice[0] == pytest.approx(-math.pi)
    assert lattice[-1] == pytest.approx(math.pi)


@pytest.mark.parametrize(
    "name, value, expected",
    [
        ("amp_db", -7.3, -7.5),
        ("amp_db", -7.25, -7.5),
        ("amp_db", -7.2, -7.0),
        ("amp_db", 0.0, 0.0),
        ("c_f_farad", 1.00e-12, 0.96e-12),
        ("c_q_farad", 2.0e-12, 2.0e-12),
    ],
)
def test_pcb_snap(name, value, expected):
    qspec = default_constraints(CancellerFamily.PCB).quantization
    assert qspec.snap(name, value) == pytest.approx(expected, abs=1e-20 if "farad" in name else 1e-12)


def test_snap_leaves_unquantized_params_alone():
    qspec = QuantizationSpec(params={"amp_db": ParamQuantization(min=-10.0, max=0.0, step=1.0)})
    assert qspec.snap("tau_s", 1.234e-9) == 1.234e-9


def test_snap_outside_range_raises():
    quant = ParamQuantization(min=0.0, max=1.0, step=0.25)
    with pytest.raises(InvalidArgumentError):
        quant.snap_index(1.5)


def test_snap_lands_on_lattice():
    rng = np.random.default_rng(1)
    quant = default_constraints(CancellerFamily.RFIC).quantization.params["fc_hz"]
    lattice = quant.lattice()
    for value in rng.uniform(quant.min, quant.max, 200):
        snapped = lattice[quant.snap_index(value)]
        assert np.min(np.abs(lattice - value)) == pytest.approx(abs(snapped - value))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(min=1.0, max=0.0, step=0.1),
        dict(min=0.0, max=1.0),
        dict(min=0.0, max=1.0, step=0.1, bits=4),
        dict(min=0.0, max=1.0, step=-0.1),
    ],
)
def test_quantization_validation(kwargs):
    with pytest.raises(ValidationError):
        ParamQuantization(**kwargs)


@pytest.mark.parametrize("family", list(CancellerFamily))
def test_default_constraints_are_usable(family):
    constraints = default_constraints(family)
    constraints.check(family)
    for name in PARAM_NAMES[family]:
        if name != PHASE_PARAM:
            assert name in constraints.boxes


def test_only_hardware_families_are_quantized():
    assert default_constraints(CancellerFamily.PCB).quantization is not None
    assert default_constraints(CancellerFamily.RFIC).quantization is not None
    assert default_constraints(CancellerFamily.DELAY_LINE).quantization is None
    assert default_constraints(CancellerFamily.AMP_PHASE).quantization is None


def test_check_rejects_wrong_family():
    with pytest.raises(InvalidArgumentError):
        default_constraints(CancellerFamily.PCB).check(CancellerFamily.RFIC)


def test_check_rejects_infeasible_box():
    constraints = ConstraintSet(
        family=CancellerFamily.AMP_PHASE,
        boxes={"amp_linear": ParamBox(min=1.0, max=0.5)},
    )
    with pytest.raises(InvalidArgumentError, match="infeasible"):
        constraints.check(CancellerFamily.AMP_PHASE)


def test_check_rejects_missing_box():
    constraints = ConstraintSet(family=CancellerFamily.DELAY_LINE, boxes={"amp_linear": ParamBox(min=0.0, max=1.0)})
    with pytest.raises(InvalidArgumentError, match="tau_s"):
        constraints.check(CancellerFamily.DELAY_LINE)

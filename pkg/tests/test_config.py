from fractions import Fraction

import pytest

from gqmech.config import ConfigError, builtin_configs, load_config, parse_config
from gqmech.numerics import MovingFrame
from gqmech.poisson import FrameConnection
from gqmech.symbolic import poly_parse

OSCILLATOR = """
[model] dim=1 hamiltonian="0.5*p1^2 + 0.5*q1^2"
[frame] velocity="0"
[grid] min=-12 max=12 points=1024
[initial] center_q=1.0 center_p=0.0 width=0.7
[evolve] dt=0.001 steps=6284 observables="q1,p1,0.5*p1^2+0.5*q1^2"
"""


def replace(text, old, new):
    assert old in text
    return text.replace(old, new)


def test_minimal_oscillator():
    spec = parse_config(OSCILLATOR)
    assert spec.dim == 1
    assert spec.hamiltonian.poly == poly_parse("0.5*p1^2 + 0.5*q1^2", 1)
    assert isinstance(spec.frame, MovingFrame) and spec.frame.is_rest()
    assert spec.grid.points == (1024,)
    assert spec.initial.center_q == (1.0,)
    assert spec.evolve.steps == 6284 and spec.evolve.dt == 0.001
    assert [name for name, _ in spec.evolve.observables] == ["q1", "p1", "0.5*p1^2+0.5*q1^2"]


def test_shipped_configs_parse():
    shipped = builtin_configs()
    assert set(shipped) == {"oscillator", "free_particle"}
    assert parse_config(shipped["oscillator"]) == parse_config(OSCILLATOR)
    free = load_config("free_particle")
    assert free.frame.velocity == (Fraction(1),)


def test_cubic_momentum_rejected():
    with pytest.raises(ConfigError) as info:
        parse_config(replace(OSCILLATOR, '"0.5*p1^2 + 0.5*q1^2"', '"p1^3"'))
    assert (info.value.section, info.value.key) == ("model", "hamiltonian")
    assert "momentum degree 3" in str(info.value)


def test_packet_outside_box_rejected():
    with pytest.raises(ConfigError) as info:
        parse_config(replace(OSCILLATOR, "center_q=1.0", "center_q=15.0"))
    assert info.value.section == "initial"
    assert "tail mass" in info.value.reason


@pytest.mark.parametrize(
    "old, new, section, key",
    [
        ("dim=1", "dim=3", "model", "dim"),
        ("dim=1", "dim=one", "model", "dim"),
        ("points=1024", "points=4", "grid", None),
        ("width=0.7", "width=-1", "initial", "width"),
        ("dt=0.001", "dt=0", "evolve", "dt"),
        ("steps=6284", "steps=0", "evolve", "steps"),
        ("steps=6284", "steps=1.5", "evolve", "steps"),
        ('observables="q1,', 'observables="p0,', "evolve", "observables"),
        ('observables="q1,', 'observables="p1^3,', "evolve", "observables"),
        ('velocity="0"', 'velocity="x"', "frame", "velocity"),
        ('velocity="0"', 'velocity="0" gamma="1"', "frame", "velocity"),
        ('velocity="0"', 'gamma="p1"', "frame", "gamma"),
        ("min=-12", "min=nan", "grid", "min"),
        ("min=-12", "min=-12,0", "grid", "min"),
        ("max=12", "max=12 colour=blue", "grid", "colour"),
        ("max=12", "max=12 max=13", "grid", "max"),
        ('hamiltonian="0.5*p1^2 + 0.5*q1^2"', 'hamiltonian="0.5*p1^^2"', "model", "hamiltonian"),
    ],
)
def test_errors_name_the_key(old, new, section, key):
    with pytest.raises(ConfigError) as info:
        parse_config(replace(OSCILLATOR, old, new))
    assert info.value.section == section
    assert info.value.key == key
    assert str(info.value).startswith(f"[{section}]")


def test_missing_and_unknown():
    with pytest.raises(ConfigError) as info:
        parse_config(replace(OSCILLATOR, "steps=6284", ""))
    assert (info.value.section, info.value.key, info.value.reason) == ("evolve", "steps", "missing")
    with pytest.raises(ConfigError) as info:
        parse_config("[physics] x=1")
    assert info.value.section == "physics"
    with pytest.raises(ConfigError):
        parse_config("dim=1")
    with pytest.raises(ConfigError):
        parse_config(OSCILLATOR + '[grid] min=1')


def test_multiline_two_dimensional_config():
    text = """
    # anisotropic oscillator
    [model]
      dim=2
      hamiltonian="0.5*(p1^2 + p2^2) + 0.5*q1^2 + 2*q2^2"
    [frame] gamma="1/2, t"   # a frame accelerating along q2
    [grid] min=-8 max=8,9 points=64,80
    [initial] center_q=1,0 center_p=0 width=0.8,0.6
    [evolve] dt=0.01 steps=10
    """
    spec = parse_config(text)
    assert spec.grid.upper == (8.0, 9.0) and spec.grid.points == (64, 80)
    assert spec.initial.center_q == (1.0, 0.0) and spec.initial.center_p == (0.0, 0.0)
    assert isinstance(spec.frame, FrameConnection)
    assert spec.connection.gamma[1] == poly_parse("t", 2)
    assert spec.evolve.observables == ()


def test_constant_gamma_becomes_moving_frame():
    spec = parse_config(replace(OSCILLATOR, 'velocity="0"', 'gamma="3/2"'))
    assert spec.frame == MovingFrame((Fraction(3, 2),))


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_config(tmp_path / "missing.cfg")
    assert "cannot read" in str(info.value)

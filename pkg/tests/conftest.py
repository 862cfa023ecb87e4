import pytest

from platoonctl import ArrivalModel, PlatoonPolicy, RawCostConfig, normalize_units

# Nominal planning values used throughout the suite (mixed units).
NOMINAL_RAW = dict(
    value_of_time_per_h=25.8,
    fuel_price_per_l=0.868,
    drag_fuel_coeff=6.78e-7,
    fuel_per_100km=41.0,
    fuel_saving_fraction=0.1,
    cruise_speed_mph=55.0,
    merge_zone_km=2.5,
    cruise_zone_km=30.0,
    nominal_merge_time_s=100.0,
)


@pytest.fixture
def nominal_raw():
    return RawCostConfig(**NOMINAL_RAW)


@pytest.fixture
def nominal_params(nominal_raw):
    return normalize_units(nominal_raw)


@pytest.fixture
def nominal_arrival():
    return ArrivalModel(rate=0.02)


@pytest.fixture
def nominal_policy():
    return PlatoonPolicy(threshold=50.0)

import numpy as np
import pytest

from aerocell import kernel
from aerocell.config import load_config
from aerocell.power_models import package_mass
from aerocell.weather_io import synthetic_clear_sky

needs_ext = pytest.mark.skipif(kernel._ckernel is None, reason="compiled kernel not built")


def _weather(n_days=2):
    days = [synthetic_clear_sky(doy, 52.4, 900.0, 18.0, 6.0, 101325.0, 60.0) for doy in (172, 355)][:n_days]
    return [np.concatenate([getattr(d, c) for d in days]) for c in ("T_ws", "p_0", "G_T")]


def _params(cfg, p_other=60.0, pv=True):
    m_pkg = package_mass(cfg.mimo, cfg.ris, cfg.pv, cfg.airframe)
    return kernel.KernelParams.build(cfg, m_pkg, p_other, pv, 1 / 60)


@needs_ext
@pytest.mark.parametrize("overrides", [
    {},
    {"battery.charge_rule": "printed"},
    {"battery.DoD_max": 0.7, "pv.N_PV_p": 40},
    {"pv.N_PV_p": 0},
])
def test_backends_agree(overrides):
    cfg = load_config(overrides=overrides)
    T, p0, G = _weather()
    prm = _params(cfg)
    a = kernel.simulate_uav(T, p0, G, prm, backend="python")
    b = kernel.simulate_uav(T, p0, G, prm, backend="cython")
    assert a.replacements == b.replacements
    assert np.array_equal(a.replaced, b.replaced)
    for name in ("p_hover", "p_pv", "p_total", "e_batt", "e_in", "e_out", "unmet"):
        np.testing.assert_allclose(getattr(a, name), getattr(b, name), rtol=1e-12, atol=1e-9, err_msg=name)
    assert (a.e_initial, a.e_swapped_in) == pytest.approx((b.e_initial, b.e_swapped_in), rel=1e-12)


def test_conservation():
    cfg = load_config()
    T, p0, G = _weather()
    tr = kernel.simulate_uav(T, p0, G, _params(cfg, p_other=150.0))
    assert tr.replacements > 0
    assert abs(tr.conservation_residual()) < 1e-6
    assert np.all((tr.e_batt >= 0) & (tr.e_batt <= 768.0))


def test_pv_disabled_arm():
    cfg = load_config()
    T, p0, G = _weather()
    tr = kernel.simulate_uav(T, p0, G, _params(cfg, pv=False))
    assert not tr.p_pv.any()


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernel._select("fortran")


def test_empty_horizon():
    cfg = load_config()
    tr = kernel.simulate_uav([], [], [], _params(cfg))
    assert tr.replacements == 0 and tr.e_final == pytest.approx(729.6)

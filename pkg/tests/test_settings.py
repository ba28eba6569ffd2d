"""Configuration loading and validation."""

from rmt_lab.config.settings import Settings, get_settings, set_settings


def test_defaults():
    settings = Settings()
    assert settings.solver.newton_max_iters == 100
    assert settings.solver.newton_tol == 1e-12
    assert settings.solver.mass_tol == 1e-6
    assert settings.simulation.eps_reg == 1e-8
    assert settings.simulation.max_halvings == 20
    assert settings.quadrature.bl_max_points == 10_000
    assert settings.sampling.haar_max_retries == 8


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("RMT_LAB_THREADS", "3")
    monkeypatch.setenv("RMT_LAB_EPS_REG", "1e-6")
    monkeypatch.setenv("RMT_LAB_LOG_LEVEL", "DEBUG")
    settings = Settings()
    assert settings.run.threads == 3
    assert settings.simulation.eps_reg == 1e-6
    assert settings.log_level == "DEBUG"


def test_validate_reports_errors():
    settings = Settings()
    assert settings.validate()["valid"]

    settings.run.threads = 0
    settings.simulation.step_safety = 1.5
    result = settings.validate()
    assert not result["valid"]
    assert len(result["errors"]) == 2


def test_unknown_log_level_is_a_warning():
    settings = Settings()
    settings.log_level = "LOUD"
    result = settings.validate()
    assert result["valid"]
    assert result["warnings"]


def test_to_dict_is_complete():
    data = Settings().to_dict()
    assert set(data) == {"sampling", "quadrature", "simulation", "solver", "run", "debug", "log_level"}
    assert data["quadrature"]["inversion_eps"] == [1e-1, 1e-2, 1e-3, 1e-4]


def test_global_instance():
    custom = Settings()
    custom.solver.mass_tol = 1e-4
    set_settings(custom)
    assert get_settings().solver.mass_tol == 1e-4
    set_settings(None)
    assert get_settings().solver.mass_tol == 1e-6

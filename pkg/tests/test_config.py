import pytest
from pydantic import ValidationError

from sfasat.core.config import Settings
from sfasat.core.exceptions import (
    BaseSolverException,
    InvalidFlow,
    MissingVariable,
    ParseError,
    SemanticError,
    TooManyGenerators,
    TooManySetVariables,
)


class TestSettings:
    def test_defaults(self):
        settings = Settings(_env_file=None)
        assert settings.E_MAX == 14
        assert settings.PARIKH_SIZE_CONSTANT == 40
        assert settings.LOG_LEVEL == "WARNING"

    def test_log_level_is_normalized(self):
        assert Settings(_env_file=None, LOG_LEVEL="debug").LOG_LEVEL == "DEBUG"

    def test_unknown_log_level(self):
        with pytest.raises(ValidationError):
            Settings(_env_file=None, LOG_LEVEL="chatty")

    @pytest.mark.parametrize("field", ["E_MAX", "BRUTE_MAX_WORDS", "PARIKH_ENUM_MAX_LEN", "SPARSITY_SCALE"])
    def test_limits_must_be_positive(self, field):
        with pytest.raises(ValidationError):
            Settings(_env_file=None, **{field: 0})

    def test_float_limit_range(self):
        with pytest.raises(ValidationError):
            Settings(_env_file=None, PA_FLOAT_LIMIT=2.0 ** 60)

    def test_environment_prefix(self, monkeypatch):
        monkeypatch.setenv("SFASAT_E_MAX", "5")
        monkeypatch.setenv("SFASAT_BV_DEFAULT_WIDTH", "4")
        settings = Settings(_env_file=None)
        assert settings.E_MAX == 5
        assert settings.BV_DEFAULT_WIDTH == 4


class TestExceptions:
    def test_parse_error_location(self):
        assert ParseError("Unexpected token", line=3, column=4).detail == "Unexpected token (line 3, column 4)"
        assert ParseError("Unexpected token", position=7).detail == "Unexpected token (position 7)"
        assert ParseError().detail == "Parse error"

    def test_semantic_error_line(self):
        error = SemanticError("Unknown state q9", line=2)
        assert error.detail == "Unknown state q9 (line 2)"
        assert error.line == 2

    def test_generator_limit(self):
        error = TooManyGenerators(15, 14)
        assert isinstance(error, TooManySetVariables)
        assert error.error_code == "TOO_MANY_GENERATORS"
        assert error.detail == "15 generators exceed the expansion limit of 14"

    def test_exit_codes(self):
        for error in (ParseError(), SemanticError(), InvalidFlow(), MissingVariable("x")):
            assert isinstance(error, BaseSolverException)
            assert error.exit_code == 2

    def test_str_is_the_detail(self):
        assert str(MissingVariable("k1")) == "No value for variable k1"

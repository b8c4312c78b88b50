import pytest
from pydantic import ValidationError

from zoozve.errors import InputError, UsageError
from zoozve.models import InstrClass, Isa, Kernel
from zoozve.schemas import BenchCase, CliConfig, RegisterGroup, RvvConfig, TraceStats, VConfig
from zoozve.settings import load_config, read_config_file

# ========== MACHINE CONFIGURATIONS ==========

def test_vconfig_defaults():
    """The default Zoozve machine has 512-bit registers, 2048 of them, 16-bit elements."""
    config = VConfig()
    assert config.vlen_bits == 512
    assert config.num_vregs == 2048
    assert config.elements_per_register == 32, f"expected 32 elements per register, got {config.elements_per_register}"


@pytest.mark.parametrize("vlen", [0, 96, 100, -512])
def test_vconfig_rejects_bad_vlen(vlen):
    """VLEN must be a positive power of two."""
    with pytest.raises(ValidationError):
        VConfig(vlen_bits=vlen)


def test_vconfig_rejects_element_wider_than_register():
    with pytest.raises(ValidationError):
        VConfig(vlen_bits=16, vew_bits=32)


def test_vconfig_rejects_too_few_registers():
    with pytest.raises(ValidationError):
        VConfig(num_vregs=16)


def test_with_vew_keeps_machine_shape():
    config = VConfig(vlen_bits=256, num_vregs=64).with_vew(32)
    assert (config.vlen_bits, config.num_vregs, config.vew_bits) == (256, 64, 32)


def test_rvv_vlmax():
    """vlmax = LMUL * VLEN / VEW."""
    assert RvvConfig(vlen_bits=512, vew_bits=16, lmul=2).vlmax == 64
    assert RvvConfig(vlen_bits=512, vew_bits=16, lmul=8).vlmax == 256
    assert RvvConfig(vlen_bits=512, vew_bits=32, lmul=1).vlmax == 16


def test_rvv_rejects_unsupported_lmul():
    with pytest.raises(ValidationError):
        RvvConfig(lmul=3)


# ========== VALUE MODELS ==========

def test_register_group_size_and_text():
    group = RegisterGroup(head=4, tail=7)
    assert group.size == 3
    assert str(group) == "v[4,7)"


def test_register_group_must_be_non_empty():
    with pytest.raises(ValidationError):
        RegisterGroup(head=5, tail=5)


def test_trace_stats_class_sum_is_checked():
    """dynamic_count must equal the sum of the per-class counters."""
    per_class = {c: 0 for c in InstrClass}
    per_class[InstrClass.SCALAR] = 3
    assert TraceStats(dynamic_count=3, per_class=per_class).dynamic_count == 3
    with pytest.raises(ValidationError):
        TraceStats(dynamic_count=4, per_class=per_class)


def test_bench_case_size_ranges():
    """FFT sizes are powers of two in [32, 2048]; BLAS sizes in [512, 16384]."""
    BenchCase(kernel=Kernel.FFT, n=32, isa=Isa.ZOOZVE, config=VConfig())
    BenchCase(kernel=Kernel.AXPY, n=16384, isa=Isa.RVV, config=RvvConfig())
    with pytest.raises(ValidationError):
        BenchCase(kernel=Kernel.FFT, n=4096, isa=Isa.ZOOZVE, config=VConfig())
    with pytest.raises(ValidationError):
        BenchCase(kernel=Kernel.DOTPRODUCT, n=600, isa=Isa.ZOOZVE, config=VConfig())


def test_bench_case_config_must_match_isa():
    with pytest.raises(ValidationError):
        BenchCase(kernel=Kernel.AXPY, n=512, isa=Isa.RVV, config=VConfig())


# ========== SETTINGS ==========

@pytest.fixture
def clean_env(monkeypatch):
    for key in CliConfig.model_fields:
        monkeypatch.delenv("ZOOZVE_" + key.upper(), raising=False)
    return monkeypatch


def test_load_config_defaults(clean_env):
    config = load_config()
    assert config == CliConfig(), f"unexpected defaults: {config}"


def test_lmul_stays_unset_until_configured(clean_env):
    """Unset lmul means 1 on the RVV machine; the environment can set it."""
    config = load_config()
    assert config.lmul is None
    assert config.rvv_config().lmul == 1

    clean_env.setenv("ZOOZVE_LMUL", "4")
    config = load_config()
    assert config.lmul == 4
    assert config.rvv_config().vlmax == 128


def test_config_file_values(clean_env, tmp_path):
    """A key=value file overrides the defaults."""
    path = tmp_path / "zoozve.conf"
    path.write_text("vlen=256\nvregs=64\noutdir=build\n")
    config = load_config(str(path))
    assert config.vlen == 256
    assert config.vregs == 64
    assert config.outdir == "build"


def test_flags_override_file_and_environment(clean_env, tmp_path):
    """Precedence: flags > config file > environment."""
    clean_env.setenv("ZOOZVE_VLEN", "1024")
    clean_env.setenv("ZOOZVE_SEED", "7")
    path = tmp_path / "zoozve.conf"
    path.write_text("vlen=256\n")

    assert load_config().vlen == 1024
    assert load_config(str(path)).vlen == 256
    config = load_config(str(path), vlen=128, seed=None)
    assert config.vlen == 128
    assert config.seed == 7, "an unset flag must not hide the environment value"


def test_unknown_config_key_is_usage_error(clean_env, tmp_path):
    path = tmp_path / "zoozve.conf"
    path.write_text("vlenn=256\n")
    with pytest.raises(UsageError) as exc:
        read_config_file(str(path))
    assert "vlenn" in exc.value.detail


def test_missing_config_file_is_input_error(clean_env, tmp_path):
    with pytest.raises(InputError):
        load_config(str(tmp_path / "missing.conf"))


def test_invalid_values_are_usage_errors(clean_env):
    """Machine invariants are checked before any command runs."""
    with pytest.raises(UsageError):
        load_config(vlen=100)
    with pytest.raises(UsageError):
        load_config(lmul=3)
    with pytest.raises(UsageError):
        load_config(vlen=8, vew=16)


def test_non_integer_environment_value(clean_env):
    clean_env.setenv("ZOOZVE_VREGS", "lots")
    with pytest.raises(UsageError):
        load_config()

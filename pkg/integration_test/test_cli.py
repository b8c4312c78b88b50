import json

import numpy as np


# ========== ASM / DISASM ==========

def test_asm_then_disasm(cli, demo, tmp_path):
    binary = tmp_path / "redsum.bin"
    code, _, err = cli("asm", demo("redsum_zoozve.s"), "-o", binary)
    assert code == 0, f"asm failed: {err}"
    assert binary.stat().st_size > 0

    code, out, _ = cli("disasm", binary)
    assert code == 0
    assert "vredsum v32, v0" in out

    listing = tmp_path / "redsum.txt"
    code, _, _ = cli("disasm", binary, "-o", listing)
    assert code == 0
    assert listing.read_text() == out


def test_asm_error_names_the_line(cli, tmp_path):
    source = tmp_path / "bad.s"
    source.write_text("li a0, 1\nfrobnicate v0\n")
    code, _, err = cli("asm", source)
    assert code == 1
    assert "line 2" in err


def test_disasm_rejects_text(cli, demo):
    code, _, err = cli("disasm", demo("axpy.ir"))
    assert code == 1
    assert err.startswith("error:")


# ========== RUN ==========

def test_run_zoozve_demo_has_no_strips(cli, demo):
    code, out, err = cli("run", demo("redsum_zoozve.s"))
    assert code == 0, f"run failed: {err}"
    stats = json.loads(out)
    assert stats["dynamic_count"] == 7
    assert stats["strip_iterations"] == 0


def test_run_rvv_demo_strip_mines(cli, demo):
    code, out, _ = cli("run", demo("redsum_rvv.s"), "--isa", "rvv")
    assert code == 0
    stats = json.loads(out)
    assert stats["strip_iterations"] == 32
    assert stats["dynamic_count"] == 5 + 7 * 32 + 2


def test_both_demos_store_the_same_sum(cli, demo, tmp_path):
    values = np.random.default_rng(3).integers(-300, 300, size=1024).astype(np.int16)
    image = np.zeros(0x2000, dtype=np.uint8)
    image[0x1000:0x1800] = values.view(np.uint8)
    image_path = tmp_path / "mem.bin"
    image_path.write_bytes(image.tobytes())
    expected = int(np.array(values.astype(np.int64).sum()).astype(np.int16))

    for source, isa in (("redsum_zoozve.s", "zoozve"), ("redsum_rvv.s", "rvv")):
        dump = tmp_path / f"{isa}.dump"
        code, _, err = cli("run", demo(source), "--isa", isa, "--mem-image", image_path,
                           "--dump", dump, "--dump-mem", "0x2000:2")
        assert code == 0, f"{isa}: {err}"
        text = dump.read_text()
        stored = int.from_bytes(bytes.fromhex(text.split("00002000: ")[1].split()[0]), "little", signed=True)
        assert stored == expected, f"{isa} stored {stored}"


def test_run_writes_trace(cli, demo, tmp_path):
    trace = tmp_path / "trace.txt"
    code, _, _ = cli("run", demo("redsum_zoozve.s"), "--trace", trace)
    assert code == 0
    assert len(trace.read_text().splitlines()) == 7


def test_lmul_with_zoozve_is_usage_error(cli, demo):
    code, out, err = cli("run", demo("redsum_zoozve.s"), "--lmul", 2)
    assert code == 2
    assert "--lmul" in err
    assert out == ""


def test_missing_input_names_the_path(cli, tmp_path):
    missing = tmp_path / "nope.s"
    code, _, err = cli("run", missing)
    assert code == 1
    assert str(missing) in err


def test_trap_exits_4_with_partial_stats(cli, demo):
    # the sum is stored at 0x2000, just past an 8 KiB memory
    code, out, err = cli("run", demo("redsum_zoozve.s"), "--mem-size", 0x2000)
    assert code == 4
    assert "trap at instruction" in err
    assert json.loads(out)["dynamic_count"] == 6


def test_timeout_exits_4(cli, demo):
    code, out, err = cli("run", demo("redsum_rvv.s"), "--isa", "rvv", "--max-steps", 50)
    assert code == 4
    assert "max_steps=50" in err
    assert json.loads(out)["dynamic_count"] == 50


def test_bad_dump_range_is_usage_error(cli, demo):
    code, _, err = cli("run", demo("redsum_zoozve.s"), "--dump-mem", "0x2000")
    assert code == 2
    assert "ADDR" in err or "A:B" in err


def test_unknown_isa_is_rejected(cli, demo):
    code, _, _ = cli("run", demo("redsum_zoozve.s"), "--isa", "sve")
    assert code == 2


# ========== CONFIGURATION ==========

def test_invalid_vlen_is_usage_error(cli, demo):
    code, _, err = cli("run", demo("redsum_zoozve.s"), "--vlen", 100)
    assert code == 2
    assert "vlen" in err


def test_config_file_is_read(cli, demo, tmp_path):
    conf = tmp_path / "zoozve.conf"
    conf.write_text("mem_size=8192\n")
    code, _, _ = cli("run", demo("redsum_zoozve.s"), "--config", conf)
    assert code == 4, "mem_size from the file makes the store trap"

    code, _, _ = cli("run", demo("redsum_zoozve.s"), "--config", conf, "--mem-size", 0x10000)
    assert code == 0, "flags override the file"


def test_verbose_and_quiet_conflict(cli, demo):
    code, _, _ = cli("run", demo("redsum_zoozve.s"), "-v", "-q")
    assert code == 2


# ========== COMPILE ==========

def test_compile_writes_artifacts(cli, demo, tmp_path):
    code, out, err = cli("compile", demo("axpy.ir"), "--outdir", tmp_path)
    assert code == 0, f"compile failed: {err}"
    summary = json.loads(out)
    assert summary["name"] == "axpy"
    assert summary["instructions"] < summary["before_merge"]
    for key in ("ir", "split", "before_merge", "asm", "bin", "disasm", "builtins"):
        assert (tmp_path / summary["artifacts"][key].split("/")[-1]).is_file(), f"missing {key}"

    code, out, _ = cli("run", tmp_path / "axpy.bin")
    assert code == 0
    assert json.loads(out)["strip_iterations"] == 0


def test_compile_reports_capacity_errors(cli, tmp_path):
    source = tmp_path / "big.ir"
    source.write_text("buffer @x : <4096 x i16>\n%x = load <4096 x i16> @x\nstore <4096 x i16> %x, @x\n")
    code, _, err = cli("compile", source, "--outdir", tmp_path, "--vregs", 32, "--vlen", 512)
    assert code == 1
    assert "split:" in err


# ========== BENCH / PLOT ==========

def test_bench_small_sweep(cli, tmp_path):
    csv_path, svg_path = tmp_path / "bench.csv", tmp_path / "bench.svg"
    code, out, err = cli("bench", "--kernels", "axpy,dotproduct", "--sizes", "512,1024",
                         "--seeds", 2, "--csv", csv_path, "--plot", svg_path)
    assert code == 0, f"bench failed: {err}"
    lines = [json.loads(line) for line in out.splitlines()]
    assert len(lines) == 2 * 2 * 2 * 2
    assert all(line["correct"] for line in lines)
    assert {line["seed"] for line in lines} == {0, 1}
    assert all(line["speedup"] > 1 for line in lines)
    assert csv_path.read_text().startswith("kernel,n,isa,dyn_count,strip_iters,speedup")
    assert "<svg" in svg_path.read_text()

    replot = tmp_path / "again.svg"
    code, _, _ = cli("plot", "--csv", csv_path, "-o", replot)
    assert code == 0
    assert replot.is_file()


def test_bench_takes_lmul_from_environment(cli, monkeypatch):
    """ZOOZVE_LMUL reaches the RVV runs the same way --lmul does."""
    def rvv_strips(out):
        return [line["strip_iters"] for line in map(json.loads, out.splitlines()) if line["isa"] == "rvv"]

    code, out, err = cli("bench", "--kernels", "dotproduct", "--sizes", 512)
    assert code == 0, f"bench failed: {err}"
    assert rvv_strips(out) == [8], "dotproduct runs at its own LMUL 2 when nothing is set"

    monkeypatch.setenv("ZOOZVE_LMUL", "1")
    code, out, err = cli("bench", "--kernels", "dotproduct", "--sizes", 512)
    assert code == 0, f"bench failed: {err}"
    assert rvv_strips(out) == [32]


def test_bench_rejects_bad_arguments(cli):
    code, _, err = cli("bench", "--kernels", "gemm")
    assert code == 2
    assert "unknown kernel" in err

    code, _, _ = cli("bench", "--kernels", "axpy", "--sizes", "100")
    assert code == 2, "sizes outside the sweep range are rejected"


def test_version(cli):
    code, out, _ = cli("--version")
    assert code == 0
    assert out.startswith("zoozve ")

import pytest

from projlds.config import ConfigError, SimConfig, dump_config, parse_config


def test_parse_all_keys():
    cfg = parse_config("""
        # comment
        matrix = lds:3
        amplitudes = 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0.5
        channel = rayleigh_flat   # inline comment
        detector = pda
        snr_grid_db = 0, 2.5
        seed = 18446744073709551615
        max_trials = 10
        min_bit_errors = 5
        pda_max_iters = 3
        pda_damping = 0.25
        block_size = 4
        workers = 2
        matrix_id = mine
    """)
    assert cfg.snr_grid_db == (0.0, 2.5)
    assert cfg.amplitudes[-1] == 0.5
    assert cfg.seed == 2 ** 64 - 1
    assert cfg.spreading()[1] == "mine"
    assert cfg.link_setup().C.shape == (13, 15)


def test_roundtrip_dump():
    cfg = SimConfig(matrix="identity:3", snr_grid_db=(1.0, 2.0), seed=5)
    assert parse_config(dump_config(cfg)) == cfg


@pytest.mark.parametrize("text,msg", [
    ("bogus = 1", "unknown key 'bogus'"),
    ("seed = abc", "bad value for 'seed'"),
    ("seed", "line 1"),
    ("seed = 1\nseed = 2", "duplicate key 'seed'"),
    ("modulation = 16qam", "modulation"),
    ("channel = rician", "channel"),
    ("detector = mpa", "detector"),
    ("snr_grid_db = ", "snr_grid_db"),
    ("max_trials = 0", "max_trials"),
    ("pda_damping = 1.0", "pda_damping"),
    ("amplitudes = 1, -1", "amplitudes"),
])
def test_errors_name_the_key(text, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(text)


def test_amplitude_length_checked():
    with pytest.raises(ConfigError, match="expected 9 values"):
        SimConfig(matrix="lds:2", amplitudes=(1.0, 2.0)).link_setup()


def test_matrix_file_relative_to_config(tmp_path):
    from projlds.lds import build_lds, export_matrix
    export_matrix(build_lds(2), tmp_path / "m.json")
    (tmp_path / "sim.cfg").write_text("matrix = m.json\n")
    from projlds.config import load_config
    C, ident = load_config(tmp_path / "sim.cfg").spreading()
    assert C.shape == (7, 9) and ident == "m"

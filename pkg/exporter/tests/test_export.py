"""Exporter tests.

The round-trip and manifest checks run on a locally quantized
randomly-initialized network so they work offline; the sparsity check
against the published per-model averages needs the real pretrained
weights and skips when the model zoo is unreachable.
"""


import pytest

torch = pytest.importorskip("torch")

import export_weights as ew
from oztd_writer import oztd_bytes

from ozmac.oztd import load_tensor
from ozmac.profiler import bit_sparsity


@pytest.fixture(scope="module")
def local_model():
    return ew.load_quantized_model("mobilenet_v2", pretrained=False)


@pytest.fixture(scope="module")
def exported(local_model, tmp_path_factory):
    out = tmp_path_factory.mktemp("export")
    manifest = ew.export_from_model(local_model, "mobilenet_v2", out)
    return out, manifest


def test_unknown_model_rejected(tmp_path):
    with pytest.raises(ew.ModelUnavailable):
        ew.export_model("alexnet_supreme", tmp_path)


def test_script_exit_code_on_unknown_model(tmp_path, capsys):
    assert ew.main(["--model", "mobilenet_v2", "--out", str(tmp_path),
                    "--random-weights"]) == 0
    with pytest.raises(SystemExit):  # argparse rejects names outside the zoo list
        ew.main(["--model", "nope", "--out", str(tmp_path)])


def test_manifest_lists_over_50_int8_layers(exported):
    _, manifest = exported
    assert manifest["dtype_bits"] == 8
    assert len(manifest["layers"]) > 50
    assert manifest["model_name"] == "mobilenet_v2"


def test_every_file_round_trips_through_primary_loader(exported, local_model):
    out, manifest = exported
    expected = {name: torch.int_repr(t).contiguous().numpy()
                for name, t in ew.iter_quantized_weights(local_model)}
    for layer in manifest["layers"]:
        tensor = load_tensor(out / layer["file_name"])
        assert tensor.dtype_bits == 8
        assert list(tensor.dims) == layer["dims"]
        assert tensor.count == layer["element_count"]
        codes = expected[layer["layer_name"]]
        assert tensor.values.tolist() == codes.reshape(-1).tolist()  # row-major, bit exact


def test_manifest_quantization_metadata(exported):
    _, manifest = exported
    for layer in manifest["layers"]:
        quant = layer["quantization"]
        if quant["scheme"] == "per_tensor":
            assert "scale" in quant and "zero_point" in quant
        else:
            assert len(quant["scales"]) == layer["dims"][quant["axis"]]


def test_reexport_is_byte_identical(local_model, exported, tmp_path):
    out1, manifest = exported
    ew.export_from_model(local_model, "mobilenet_v2", tmp_path)
    for layer in manifest["layers"]:
        assert (tmp_path / layer["file_name"]).read_bytes() == \
            (out1 / layer["file_name"]).read_bytes()
    assert (tmp_path / "manifest.json").read_text() == (out1 / "manifest.json").read_text()


def test_writer_validates_input(tmp_path):
    with pytest.raises(ValueError):
        oztd_bytes([1, 2, 3], [2])
    with pytest.raises(ValueError):
        oztd_bytes([300], [1])


def test_profiled_export_feeds_primary_statistics(exported):
    out, manifest = exported
    tensors = [load_tensor(out / layer["file_name"]) for layer in manifest["layers"]]
    report = bit_sparsity(tensors, "mobilenet_v2")
    assert report.count == sum(layer["element_count"] for layer in manifest["layers"])
    assert 0.0 <= report.avg_ones <= 8.0


@pytest.mark.parametrize("model_name,published_avg", [
    ("mobilenet_v2", 2.334),
    ("mobilenet_v3", 1.711),
])
def test_pretrained_weights_match_published_averages(tmp_path, model_name, published_avg):
    try:
        manifest = ew.export_model(model_name, tmp_path / model_name, pretrained=True)
    except ew.ModelUnavailable as exc:
        pytest.skip(f"pretrained weights unavailable in this environment: {exc}")
    tensors = [load_tensor(tmp_path / model_name / layer["file_name"])
               for layer in manifest["layers"]]
    report = bit_sparsity(tensors, model_name)
    # tolerance covers model-zoo version drift and the negative-weight
    # popcount convention (magnitude here vs stored bit pattern)
    assert abs(report.avg_ones - published_avg) <= 0.15

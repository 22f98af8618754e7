#!/usr/bin/env python3
"""Export per-layer quantized INT8 weights from the torchvision model zoo
as OZTD files plus a manifest.json.

One OZTD file is written per quantized weight tensor, holding the raw
integer codes row-major (quantization scales and zero points are
recorded in the manifest but never applied). Re-exporting the same
model produces byte-identical files.

Usage:
    python export_weights.py --model mobilenet_v2 --out weights/mobilenet_v2
    python export_weights.py --model mobilenet_v2 --out smoke/ --random-weights

``--random-weights`` quantizes a randomly initialized network locally
instead of downloading pretrained weights; useful as an offline smoke
mode, not for sparsity statistics.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from oztd_writer import write_oztd


class ModelUnavailable(Exception):
    """Unknown model name, or the model zoo could not provide its weights."""


class WriteFailure(Exception):
    pass


# canonical benchmark name -> torchvision.models.quantization builder name
MODEL_BUILDERS = {
    "mobilenet_v2": "mobilenet_v2",
    "mobilenet_v3": "mobilenet_v3_large",
    "inception_v3": "inception_v3",
    "shufflenet_v2": "shufflenet_v2_x1_0",
    "googlenet": "googlenet",
    "resnet18": "resnet18",
    "resnet50": "resnet50",
    "resnext101": "resnext101_32x8d",
}


def load_quantized_model(model_name: str, pretrained: bool = True):
    """Instantiate the quantized model, downloading weights when asked."""
    if model_name not in MODEL_BUILDERS:
        raise ModelUnavailable(
            f"unknown model {model_name!r}; choose from {sorted(MODEL_BUILDERS)}")
    from torchvision.models import quantization as qmodels

    builder = getattr(qmodels, MODEL_BUILDERS[model_name])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            model = builder(weights="DEFAULT" if pretrained else None, quantize=True)
        except Exception as exc:  # zoo unreachable, checkpoint missing, ...
            raise ModelUnavailable(
                f"could not load quantized {model_name!r}: {exc}") from exc
    model.eval()
    return model


def _quant_metadata(tensor) -> dict:
    import torch

    if tensor.qscheme() in (torch.per_channel_affine, torch.per_channel_symmetric):
        return {
            "scheme": "per_channel",
            "axis": int(tensor.q_per_channel_axis()),
            "scales": [float(s) for s in tensor.q_per_channel_scales()],
            "zero_points": [int(z) for z in tensor.q_per_channel_zero_points()],
        }
    return {
        "scheme": "per_tensor",
        "scale": float(tensor.q_scale()),
        "zero_point": int(tensor.q_zero_point()),
    }


def iter_quantized_weights(model):
    """Yield (layer_name, quantized weight tensor) over conv/linear modules."""
    import torch

    for name, module in model.named_modules():
        weight = getattr(module, "weight", None)
        if not callable(weight):
            continue
        try:
            tensor = weight()
        except Exception:
            continue
        if torch.is_tensor(tensor) and tensor.is_quantized:
            yield name, tensor


def export_from_model(model, model_name: str, output_dir) -> dict:
    """Write every quantized weight tensor of ``model`` as OZTD + manifest."""
    import torch

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    layers = []
    for layer_name, tensor in iter_quantized_weights(model):
        codes = torch.int_repr(tensor).contiguous().numpy()
        dims = list(codes.shape)
        file_name = layer_name.replace(".", "_") + ".oztd"
        try:
            write_oztd(out / file_name, codes, dims)
        except (OSError, ValueError) as exc:
            raise WriteFailure(f"layer {layer_name!r}: {exc}") from exc
        layers.append({
            "layer_name": layer_name,
            "file_name": file_name,
            "dims": dims,
            "element_count": int(codes.size),
            "quantization": _quant_metadata(tensor),
        })
    if not layers:
        raise ModelUnavailable(f"{model_name!r} exposes no quantized weight tensors")
    manifest = {"model_name": model_name, "dtype_bits": 8, "layers": layers}
    try:
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                           encoding="utf-8")
    except OSError as exc:
        raise WriteFailure(str(exc)) from exc
    return manifest


def export_model(model_name: str, output_dir, pretrained: bool = True) -> dict:
    return export_from_model(load_quantized_model(model_name, pretrained),
                             model_name, output_dir)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--model", required=True, choices=sorted(MODEL_BUILDERS))
    parser.add_argument("--out", required=True, metavar="DIR")
    parser.add_argument("--random-weights", action="store_true",
                        help="quantize a randomly initialized net locally (offline smoke mode)")
    args = parser.parse_args(argv)
    try:
        manifest = export_model(args.model, args.out, pretrained=not args.random_weights)
    except (ModelUnavailable, WriteFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    total = sum(layer["element_count"] for layer in manifest["layers"])
    print(f"exported {len(manifest['layers'])} layers, {total} weights, to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""CWAE training: objective, gradients, loop, checkpoints and curve export.

The CWAE objective on a batch X with latent codes Z = encode(X) is

    cost = cw_weight * log(max(cw2(Z), eps_log)) + mse(X, decode(Z))

where cw2 is the closed-form squared Cramer-Wold distance between the codes
and N(0, I) in asymptotic mode (the only mode with a closed-form derivative,
which is what the manual backward pass uses).  The smoothing gamma follows
the Silverman rule at the actual batch size.  ``objective="plain_ae"`` drops
the log term and trains on reconstruction alone.
"""

import csv
import io
import math
import struct
from dataclasses import dataclass, fields
from typing import NamedTuple

import numpy as np

from . import kernels, mlp
from .distance import cw2_sample_normal, silverman_gamma
from .normality import mardia
from .phi import PhiMode

OBJECTIVES = ("cwae", "plain_ae")

CSV_COLUMNS = (
    "epoch",
    "rec_error",
    "cw_pre_log",
    "cw_post_log",
    "skewness",
    "kurtosis",
    "normalized_kurtosis",
)


@dataclass
class TrainConfig:
    latent_dim: int
    batch_size: int
    epochs: int
    objective: str = "cwae"
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    adam_epsilon: float = 1e-8
    seed: int = 0
    encoder_hidden: tuple = (200, 200, 200)
    decoder_hidden: tuple = (200, 200, 200)
    output_activation: str = "identity"
    phi_mode: str = "asymptotic"
    eps_log: float = 1e-12
    cw_weight: float = 1.0
    grad_clip_norm: float = 0.0
    valid_cap: int = 10_000


def validate_config(config):
    if config.objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {config.objective!r}")
    if config.latent_dim < 2:
        raise ValueError(f"latent_dim must be >= 2, got {config.latent_dim}")
    if config.epochs < 0:
        raise ValueError(f"epochs must be >= 0, got {config.epochs}")
    if config.batch_size < 2:
        raise ValueError(f"batch_size must be >= 2, got {config.batch_size}")
    if config.objective == "cwae" and config.phi_mode != PhiMode.ASYMPTOTIC.value:
        raise ValueError(
            f"only the asymptotic phi mode has a closed-form derivative; got {config.phi_mode!r}"
        )
    if config.output_activation not in ("identity", "sigmoid"):
        raise ValueError(f"unknown output activation {config.output_activation!r}")
    if config.learning_rate <= 0 or config.eps_log <= 0:
        raise ValueError("learning_rate and eps_log must be > 0")
    if config.grad_clip_norm < 0:
        raise ValueError("grad_clip_norm must be >= 0 (0 disables clipping)")


@dataclass(frozen=True)
class TrainRecord:
    epoch: int
    rec_error: float
    cw_pre_log: float
    cw_post_log: float
    skewness: float
    kurtosis: float
    normalized_kurtosis: float


class CwaeCost(NamedTuple):
    total: float
    mse: float
    cw_log: float
    cw_squared: float


def cwae_cost(x, params, gamma=None, eps_log=1e-12, cw_weight=1.0):
    """Total / reconstruction / log-distance breakdown of the CWAE objective."""
    x = np.asarray(x, dtype=np.float64)
    z = mlp.encode(params, x)
    xhat = mlp.decode(params, z)
    rec = mlp.mse(x, xhat)
    report = cw2_sample_normal(z, gamma=gamma, mode=PhiMode.ASYMPTOTIC)
    cw_sq = report.squared_distance
    cw_log = math.log(max(cw_sq, eps_log))
    return CwaeCost(
        total=cw_weight * cw_log + rec,
        mse=rec,
        cw_log=cw_log,
        cw_squared=cw_sq,
    )


def cost_and_grad(x, params, objective="cwae", gamma=None, eps_log=1e-12, cw_weight=1.0):
    """Objective value and parameter gradients for one batch.

    Returns (flat gradient arrays matching ``mlp.param_arrays``, CwaeCost).
    For ``plain_ae`` the cost breakdown still reports the distance of the
    codes to N(0, I) as a diagnostic, but no gradient flows from it.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    z, enc_caches = mlp._forward_stack(params.encoder, x, "identity")
    xhat, dec_caches = mlp._forward_stack(params.decoder, z, params.output_activation)
    rec = mlp.mse(x, xhat)
    gamma_b = silverman_gamma(n) if gamma is None else gamma
    report = cw2_sample_normal(z, gamma=gamma_b, mode=PhiMode.ASYMPTOTIC)
    cw_sq = report.squared_distance
    cw_log = math.log(max(cw_sq, eps_log))

    dxhat = (2.0 / n) * (xhat - x)
    dec_grads, dz = mlp._backward_stack(
        params.decoder, dec_caches, params.output_activation, xhat, dxhat
    )
    if objective == "cwae" and cw_sq > eps_log:
        dz = dz + (cw_weight / cw_sq) * kernels.cw_normal_asym_grad(z, report.gamma)
    enc_grads, _ = mlp._backward_stack(params.encoder, enc_caches, "identity", z, dz)
    grads = mlp.grads_to_arrays(enc_grads, dec_grads)
    total = (cw_weight * cw_log + rec) if objective == "cwae" else rec
    return grads, CwaeCost(total=total, mse=rec, cw_log=cw_log, cw_squared=cw_sq)


def _clip_grads(grads, max_norm):
    if max_norm <= 0:
        return grads
    total = math.sqrt(sum(float((g * g).sum()) for g in grads))
    if total > max_norm:
        scale = max_norm / total
        grads = [g * scale for g in grads]
    return grads


def _record(epoch, params, valid, config):
    z = mlp.encode(params, valid)
    rec = mlp.mse(valid, mlp.decode(params, z))
    report = cw2_sample_normal(z, mode=PhiMode.ASYMPTOTIC)
    stats = mardia(z)
    return TrainRecord(
        epoch=epoch,
        rec_error=rec,
        cw_pre_log=report.squared_distance,
        cw_post_log=math.log(max(report.squared_distance, config.eps_log)),
        skewness=stats.skewness,
        kurtosis=stats.kurtosis,
        normalized_kurtosis=stats.normalized_kurtosis,
    )


def train(config, train_data, valid_data):
    """Run the training loop; returns (trained params, per-epoch records).

    Records are evaluated on the validation set (capped at
    ``config.valid_cap`` rows) after each epoch; a zero-epoch run emits a
    single baseline record.  Identical (config, data) inputs reproduce the
    exact same record stream.
    """
    validate_config(config)
    train_x = np.ascontiguousarray(np.asarray(train_data, dtype=np.float64))
    valid_x = np.ascontiguousarray(np.asarray(valid_data, dtype=np.float64))
    if train_x.ndim != 2 or valid_x.ndim != 2:
        raise ValueError("train and validation data must be 2-D arrays")
    if train_x.shape[1] != valid_x.shape[1]:
        raise ValueError("train/validation dimension mismatch")
    if train_x.shape[0] < config.batch_size:
        raise ValueError("training set smaller than one batch")
    valid_x = valid_x[: config.valid_cap]

    rng = np.random.default_rng(config.seed)
    params = mlp.init_mlp(
        input_dim=train_x.shape[1],
        latent_dim=config.latent_dim,
        encoder_hidden=config.encoder_hidden,
        decoder_hidden=config.decoder_hidden,
        output_activation=config.output_activation,
        rng=rng,
    )
    arrays = mlp.param_arrays(params)
    state = mlp.init_adam(arrays)

    if config.epochs == 0:
        return params, [_record(0, params, valid_x, config)]

    records = []
    n = train_x.shape[0]
    for epoch in range(1, config.epochs + 1):
        perm = rng.permutation(n)
        for lo in range(0, n, config.batch_size):
            batch = train_x[perm[lo:lo + config.batch_size]]
            if batch.shape[0] < 2 and config.objective == "cwae":
                continue  # a singleton tail batch has no pairwise structure
            grads, _ = cost_and_grad(
                batch,
                params,
                objective=config.objective,
                eps_log=config.eps_log,
                cw_weight=config.cw_weight,
            )
            grads = _clip_grads(grads, config.grad_clip_norm)
            arrays, state = mlp.adam_step(
                arrays,
                grads,
                state,
                learning_rate=config.learning_rate,
                beta1=config.beta1,
                beta2=config.beta2,
                epsilon=config.adam_epsilon,
            )
            params = mlp.replace_params(params, arrays)
        records.append(_record(epoch, params, valid_x, config))
    return params, records


def records_to_csv(records, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow([
                rec.epoch,
                repr(rec.rec_error),
                repr(rec.cw_pre_log),
                repr(rec.cw_post_log),
                repr(rec.skewness),
                repr(rec.kurtosis),
                repr(rec.normalized_kurtosis),
            ])


# --- flat key=value config text (train command input, checkpoint echo) ---

_TUPLE_FIELDS = ("encoder_hidden", "decoder_hidden")


def config_to_text(config):
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if f.name in _TUPLE_FIELDS:
            value = ",".join(str(v) for v in value)
        lines.append(f"{f.name}={value}")
    return "\n".join(lines) + "\n"


def config_from_text(text, extra_keys=()):
    """Parse flat key=value lines into (TrainConfig, extras dict).

    Unknown keys not listed in ``extra_keys`` raise; malformed values raise
    naming the field.
    """
    known = {f.name: f for f in fields(TrainConfig)}
    raw = {}
    extras = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in extra_keys:
            extras[key] = value
        elif key in known:
            raw[key] = value
        else:
            raise ValueError(f"line {lineno}: unknown config field {key!r}")
    kwargs = {}
    for key, value in raw.items():
        ftype = known[key].type
        try:
            if key in _TUPLE_FIELDS:
                kwargs[key] = tuple(int(v) for v in value.split(",") if v != "")
            elif ftype in (int, "int"):
                kwargs[key] = int(value)
            elif ftype in (float, "float"):
                kwargs[key] = float(value)
            else:
                kwargs[key] = value
        except ValueError:
            raise ValueError(f"field {key!r}: could not parse {value!r}") from None
    missing = [name for name in ("latent_dim", "batch_size", "epochs") if name not in kwargs]
    if missing:
        raise ValueError(f"missing required config fields: {', '.join(missing)}")
    return TrainConfig(**kwargs), extras


# --- checkpoint container ---

_MAGIC = b"CWAECKPT"
_VERSION = 1


def save_checkpoint(path, params, config):
    """Versioned binary dump: shapes + row-major float64 blocks + config text."""
    cfg_text = config_to_text(config).encode("utf-8")
    buf = io.BytesIO()
    buf.write(_MAGIC)
    buf.write(struct.pack("<I", _VERSION))
    buf.write(struct.pack("<I", len(cfg_text)))
    buf.write(cfg_text)
    for stack in (params.encoder, params.decoder):
        buf.write(struct.pack("<I", len(stack)))
        for w, b in stack:
            buf.write(struct.pack("<II", w.shape[0], w.shape[1]))
            buf.write(np.ascontiguousarray(w, dtype="<f8").tobytes())
            buf.write(np.ascontiguousarray(b, dtype="<f8").tobytes())
    act = params.output_activation.encode("utf-8")
    buf.write(struct.pack("<I", len(act)))
    buf.write(act)
    with open(path, "wb") as fh:
        fh.write(buf.getvalue())


def _read_exactly(fh, count, what):
    data = fh.read(count)
    if len(data) != count:
        raise ValueError(f"truncated checkpoint: expected {count} bytes for {what}")
    return data


def load_checkpoint(path):
    """Returns (MlpParams, config text echoed at save time)."""
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise ValueError(f"not a checkpoint file: bad magic {magic!r}")
        (version,) = struct.unpack("<I", _read_exactly(fh, 4, "version"))
        if version != _VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        (cfg_len,) = struct.unpack("<I", _read_exactly(fh, 4, "config length"))
        cfg_text = _read_exactly(fh, cfg_len, "config text").decode("utf-8")
        stacks = []
        for name in ("encoder", "decoder"):
            (count,) = struct.unpack("<I", _read_exactly(fh, 4, f"{name} layer count"))
            layers = []
            for idx in range(count):
                rows, cols = struct.unpack("<II", _read_exactly(fh, 8, f"{name}[{idx}] shape"))
                w = np.frombuffer(
                    _read_exactly(fh, 8 * rows * cols, f"{name}[{idx}] weights"), dtype="<f8"
                ).reshape(rows, cols).copy()
                b = np.frombuffer(
                    _read_exactly(fh, 8 * cols, f"{name}[{idx}] bias"), dtype="<f8"
                ).copy()
                layers.append([w, b])
            stacks.append(layers)
        (act_len,) = struct.unpack("<I", _read_exactly(fh, 4, "activation length"))
        act = _read_exactly(fh, act_len, "activation").decode("utf-8")
    params = mlp.MlpParams(encoder=stacks[0], decoder=stacks[1], output_activation=act)
    return params, cfg_text

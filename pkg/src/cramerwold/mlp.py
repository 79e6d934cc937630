"""Feedforward autoencoder with manual backprop.

Encoder and decoder are ReLU stacks with linear output layers (the decoder
optionally ends in a sigmoid for image data).  Weights initialize to
fan-in-scaled uniform noise, biases to zero.  Parameters live in plain
float64 arrays; updates are functional (new arrays, inputs untouched).
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class MlpParams:
    encoder: list  # [W (fan_in, fan_out), b (fan_out,)] per layer
    decoder: list
    output_activation: str = "identity"


@dataclass
class AdamState:
    m: list
    v: list
    t: int = 0


def _init_stack(sizes, rng):
    layers = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        w = rng.uniform(-bound, bound, size=(fan_in, fan_out))
        layers.append([w, np.zeros(fan_out)])
    return layers


def init_mlp(input_dim, latent_dim, encoder_hidden, decoder_hidden, output_activation, rng):
    if output_activation not in ("identity", "sigmoid"):
        raise ValueError(f"unknown output activation {output_activation!r}")
    if input_dim < 1 or latent_dim < 1:
        raise ValueError("input_dim and latent_dim must be positive")
    enc_sizes = [input_dim, *encoder_hidden, latent_dim]
    dec_sizes = [latent_dim, *decoder_hidden, input_dim]
    return MlpParams(
        encoder=_init_stack(enc_sizes, rng),
        decoder=_init_stack(dec_sizes, rng),
        output_activation=output_activation,
    )


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _forward_stack(layers, h, final_activation):
    """Returns (output, caches); caches hold (layer input, preactivation)."""
    caches = []
    for idx, (w, b) in enumerate(layers):
        pre = h @ w + b
        caches.append((h, pre))
        if idx < len(layers) - 1:
            h = np.maximum(pre, 0.0)
        elif final_activation == "sigmoid":
            h = _sigmoid(pre)
        else:
            h = pre
    return h, caches


def _backward_stack(layers, caches, final_activation, output, dout):
    """Backprop through a stack; returns (per-layer grads, gradient at input)."""
    grads = [None] * len(layers)
    dh = dout
    for idx in range(len(layers) - 1, -1, -1):
        h_in, pre = caches[idx]
        if idx == len(layers) - 1:
            dpre = dh * output * (1.0 - output) if final_activation == "sigmoid" else dh
        else:
            dpre = dh * (pre > 0.0)
        grads[idx] = [h_in.T @ dpre, dpre.sum(axis=0)]
        dh = dpre @ layers[idx][0].T
    return grads, dh


def encode(params, x):
    z, _ = _forward_stack(params.encoder, x, "identity")
    return z


def decode(params, z):
    xhat, _ = _forward_stack(params.decoder, z, params.output_activation)
    return xhat


def reconstruct(params, x):
    return decode(params, encode(params, x))


def mse(x, xhat):
    """Mean over points of the squared reconstruction norm (not per-element)."""
    x = np.asarray(x, dtype=np.float64)
    xhat = np.asarray(xhat, dtype=np.float64)
    if x.shape != xhat.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {xhat.shape}")
    diff = x - xhat
    return float(np.einsum("ij,ij->i", diff, diff).mean())


def param_arrays(params):
    """Flat list of parameter arrays in a fixed traversal order."""
    out = []
    for w, b in params.encoder:
        out.extend((w, b))
    for w, b in params.decoder:
        out.extend((w, b))
    return out


def grads_to_arrays(enc_grads, dec_grads):
    out = []
    for gw, gb in enc_grads:
        out.extend((gw, gb))
    for gw, gb in dec_grads:
        out.extend((gw, gb))
    return out


def replace_params(params, arrays):
    """Rebuild an MlpParams from a flat array list (inverse of param_arrays)."""
    it = iter(arrays)
    encoder = [[next(it), next(it)] for _ in params.encoder]
    decoder = [[next(it), next(it)] for _ in params.decoder]
    return MlpParams(encoder=encoder, decoder=decoder, output_activation=params.output_activation)


def init_adam(arrays):
    return AdamState(
        m=[np.zeros_like(a) for a in arrays],
        v=[np.zeros_like(a) for a in arrays],
        t=0,
    )


def adam_step(arrays, grads, state, learning_rate=0.001, beta1=0.9, beta2=0.999, epsilon=1e-8):
    """One bias-corrected Adam update; returns (new arrays, new state)."""
    t = state.t + 1
    new_arrays = []
    new_m = []
    new_v = []
    bc1 = 1.0 - beta1 ** t
    bc2 = 1.0 - beta2 ** t
    for a, g, m, v in zip(arrays, grads, state.m, state.v):
        m = beta1 * m + (1.0 - beta1) * g
        v = beta2 * v + (1.0 - beta2) * (g * g)
        step = learning_rate * (m / bc1) / (np.sqrt(v / bc2) + epsilon)
        new_arrays.append(a - step)
        new_m.append(m)
        new_v.append(v)
    return new_arrays, AdamState(m=new_m, v=new_v, t=t)

"""Layer primitives over NCHW float tensors, each returning (out, cache).

Backward functions take (dout, cache) and return input gradients plus
parameter gradients where applicable. All math stays in the input dtype.
"""

from __future__ import annotations

import numpy as np

BN_EPS = 1e-5
BN_MOMENTUM = 0.1


# ------------------------------------------------------------- convolution


def _im2col(xp, k, stride):
    """(N, C, Hp, Wp) -> (N, C*k*k, out_h*out_w), channel-major patch rows."""
    n, c = xp.shape[:2]
    win = np.lib.stride_tricks.sliding_window_view(xp, (k, k), axis=(2, 3))
    win = win[:, :, ::stride, ::stride]
    out_h, out_w = win.shape[2:4]
    cols = np.ascontiguousarray(win.transpose(0, 1, 4, 5, 2, 3))
    return cols.reshape(n, c * k * k, out_h * out_w), out_h, out_w


def conv_forward(x, w, stride):
    """3x3 or 1x1 convolution; 3x3 pads by 1, 1x1 is unpadded."""
    n, c, h, width = x.shape
    f, c_w, k, k2 = w.shape
    if k != k2 or k not in (1, 3):
        raise ValueError("kernel must be 1x1 or 3x3")
    if c_w != c:
        raise ValueError(f"conv expects {c_w} input channels, got {c}")
    pad = 1 if k == 3 else 0
    xp = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad))) if pad else x
    patches, out_h, out_w = _im2col(xp, k, stride)
    out = np.matmul(w.reshape(f, -1), patches).reshape(n, f, out_h, out_w)
    cache = (x.shape, patches, w, stride, pad)
    return out, cache


def conv_backward(dout, cache):
    x_shape, patches, w, stride, pad = cache
    n, c, h, width = x_shape
    f, _, k, _ = w.shape
    out_h, out_w = dout.shape[2:]
    dflat = dout.reshape(n, f, -1)
    dw = np.matmul(dflat, patches.transpose(0, 2, 1)).sum(axis=0).reshape(w.shape)
    dpatches = np.matmul(w.reshape(f, -1).T, dflat)
    dp = dpatches.reshape(n, c, k, k, out_h, out_w)
    dxp = np.zeros((n, c, h + 2 * pad, width + 2 * pad), dtype=dout.dtype)
    for ki in range(k):
        for kj in range(k):
            dxp[
                :,
                :,
                ki : ki + stride * out_h : stride,
                kj : kj + stride * out_w : stride,
            ] += dp[:, :, ki, kj]
    dx = dxp[:, :, pad : pad + h, pad : pad + width] if pad else dxp
    return dx, dw


# --------------------------------------------------------- batch normalization


def bn_forward(x, gamma, beta, running_mean, running_var, use_batch_stats, update_running):
    """Normalize per channel; batch statistics in training, running in eval.

    Returns (out, cache, new_running_mean, new_running_var). Running stats
    are returned unchanged unless `update_running`.
    """
    axes = (0, 2, 3)
    if use_batch_stats:
        mean = x.mean(axis=axes)
        var = x.var(axis=axes)
        if update_running:
            running_mean = (1 - BN_MOMENTUM) * running_mean + BN_MOMENTUM * mean
            running_var = (1 - BN_MOMENTUM) * running_var + BN_MOMENTUM * var
    else:
        mean = running_mean
        var = running_var
    inv_std = 1.0 / np.sqrt(var + BN_EPS)
    xhat = (x - mean[None, :, None, None]) * inv_std[None, :, None, None]
    out = gamma[None, :, None, None] * xhat + beta[None, :, None, None]
    cache = (xhat, gamma, inv_std, use_batch_stats)
    return out, cache, running_mean, running_var


def bn_backward(dout, cache):
    xhat, gamma, inv_std, used_batch_stats = cache
    dgamma = (dout * xhat).sum(axis=(0, 2, 3))
    dbeta = dout.sum(axis=(0, 2, 3))
    g = gamma[None, :, None, None] * inv_std[None, :, None, None]
    if not used_batch_stats:
        # mean/var were constants: plain affine backward
        return dout * g, dgamma, dbeta
    m = dout.shape[0] * dout.shape[2] * dout.shape[3]
    dxhat = dout * gamma[None, :, None, None]
    sum_dxhat = dxhat.sum(axis=(0, 2, 3), keepdims=True)
    sum_dxhat_xhat = (dxhat * xhat).sum(axis=(0, 2, 3), keepdims=True)
    dx = (inv_std[None, :, None, None] / m) * (m * dxhat - sum_dxhat - xhat * sum_dxhat_xhat)
    return dx, dgamma, dbeta


# ------------------------------------------------------------------ pointwise


def relu_forward(x):
    out = np.maximum(x, 0)
    return out, (x > 0)


def relu_backward(dout, mask):
    return dout * mask


# --------------------------------------------------------------------- head


def global_avg_pool_forward(x):
    n, c, h, w = x.shape
    return x.mean(axis=(2, 3)), (n, c, h, w)


def global_avg_pool_backward(dout, cache):
    n, c, h, w = cache
    return np.broadcast_to(dout[:, :, None, None], (n, c, h, w)) / (h * w)


def dense_forward(x, w, b):
    return x @ w + b, (x, w)


def dense_backward(dout, cache):
    x, w = cache
    return dout @ w.T, x.T @ dout, dout.sum(axis=0)


# --------------------------------------------------------------------- loss


def log_softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def softmax(logits):
    return np.exp(log_softmax(logits))


def cross_entropy(logits, label) -> float:
    """Mean negative log-likelihood; `label` is an int or an int vector."""
    logits = np.atleast_2d(np.asarray(logits, dtype=np.float64))
    labels = np.atleast_1d(np.asarray(label, dtype=np.int64))
    if logits.shape[0] != labels.shape[0]:
        raise ValueError("batch sizes of logits and labels differ")
    lsm = log_softmax(logits)
    return float(-lsm[np.arange(len(labels)), labels].mean())


def softmax_ce_backward(logits, labels):
    """d(mean cross-entropy)/dlogits = (softmax - onehot) / n."""
    n = logits.shape[0]
    probs = softmax(logits)
    grad = probs.copy()
    grad[np.arange(n), labels] -= 1.0
    return grad / n

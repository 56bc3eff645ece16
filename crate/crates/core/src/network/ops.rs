//! Dense tensor operations for the forward pass.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{Activation, Tensor};

/// Cross-correlation with bias. `kernels` is laid out
/// `[filter][channel][ky][kx]`, one bias per filter. Output spatial size is
/// `(n + 2 padding - kernel) / stride + 1`.
pub fn conv_forward<F: Real>(
    input: &Tensor<F>,
    kernels: &[F],
    biases: &[F],
    filters: usize,
    kernel: usize,
    stride: usize,
    padding: usize,
) -> Result<Tensor<F>> {
    if stride == 0 {
        return Err(Error::contract("conv stride must be >= 1"));
    }
    let (channels, in_h, in_w) = input.shape();
    let padded_h = in_h + 2 * padding;
    let padded_w = in_w + 2 * padding;
    if kernel > padded_h || kernel > padded_w {
        return Err(Error::contract(format!(
            "conv kernel {kernel} exceeds padded input {padded_h}x{padded_w}"
        )));
    }
    if kernels.len() != filters * channels * kernel * kernel {
        return Err(Error::DimensionMismatch {
            context: "conv kernels",
            expected: filters * channels * kernel * kernel,
            actual: kernels.len(),
        });
    }
    if biases.len() != filters {
        return Err(Error::DimensionMismatch {
            context: "conv biases",
            expected: filters,
            actual: biases.len(),
        });
    }

    let out_h = (padded_h - kernel) / stride + 1;
    let out_w = (padded_w - kernel) / stride + 1;
    let mut out = Tensor::zeros(filters, out_h, out_w);
    for f in 0..filters {
        for oy in 0..out_h {
            for ox in 0..out_w {
                let mut acc = biases[f];
                for c in 0..channels {
                    for ky in 0..kernel {
                        // Positions that fall into the zero padding contribute nothing.
                        let iy = oy * stride + ky;
                        if iy < padding || iy >= padding + in_h {
                            continue;
                        }
                        for kx in 0..kernel {
                            let ix = ox * stride + kx;
                            if ix < padding || ix >= padding + in_w {
                                continue;
                            }
                            let weight = kernels[((f * channels + c) * kernel + ky) * kernel + kx];
                            acc = acc + weight * input.get(c, iy - padding, ix - padding);
                        }
                    }
                }
                out.data[(f * out_h + oy) * out_w + ox] = acc;
            }
        }
    }
    Ok(out)
}

/// Element-wise `max(0, x)`.
pub fn relu<F: Real>(t: &Tensor<F>) -> Tensor<F> {
    Tensor {
        channels: t.channels,
        height: t.height,
        width: t.width,
        data: t.data.iter().map(|&v| if v > F::zero() { v } else { F::zero() }).collect(),
    }
}

/// Per-channel window maximum.
pub fn maxpool<F: Real>(input: &Tensor<F>, window: usize, stride: usize) -> Result<Tensor<F>> {
    if stride == 0 || window == 0 {
        return Err(Error::contract("pool parameters must be >= 1"));
    }
    let (channels, in_h, in_w) = input.shape();
    if window > in_h || window > in_w {
        return Err(Error::contract(format!(
            "pool window {window} exceeds input {in_h}x{in_w}"
        )));
    }
    let out_h = (in_h - window) / stride + 1;
    let out_w = (in_w - window) / stride + 1;
    let mut out = Tensor::zeros(channels, out_h, out_w);
    for c in 0..channels {
        for oy in 0..out_h {
            for ox in 0..out_w {
                let mut best = input.get(c, oy * stride, ox * stride);
                for ky in 0..window {
                    for kx in 0..window {
                        let v = input.get(c, oy * stride + ky, ox * stride + kx);
                        if v > best {
                            best = v;
                        }
                    }
                }
                out.data[(c * out_h + oy) * out_w + ox] = best;
            }
        }
    }
    Ok(out)
}

/// Affine map plus activation; `matrix` is row-major `[units][inputs]`.
pub fn fc_forward<F: Real>(
    input: &[F],
    matrix: &[F],
    bias: &[F],
    activation: Activation,
) -> Result<Vec<F>> {
    let units = bias.len();
    if units == 0 || matrix.len() != units * input.len() {
        return Err(Error::DimensionMismatch {
            context: "fc matrix",
            expected: units * input.len(),
            actual: matrix.len(),
        });
    }
    let mut out = Vec::with_capacity(units);
    for u in 0..units {
        let row = &matrix[u * input.len()..(u + 1) * input.len()];
        let mut acc = bias[u];
        for (w, x) in row.iter().zip(input) {
            acc = acc + *w * *x;
        }
        out.push(match activation {
            Activation::Relu => {
                if acc > F::zero() {
                    acc
                } else {
                    F::zero()
                }
            }
            Activation::Identity => acc,
        });
    }
    Ok(out)
}

/// Numerically shifted softmax; output sums to one for any finite logits.
pub fn softmax<F: Real>(logits: &[F]) -> Vec<F> {
    let max = logits.iter().copied().fold(F::neg_infinity(), F::max);
    let exps: Vec<F> = logits.iter().map(|&v| (v - max).exp()).collect();
    let total: F = exps.iter().copied().sum();
    exps.into_iter().map(|e| e / total).collect()
}

//! Forward-only convolutional classifier: layer specs, weight layout,
//! tensor ops and the inference path. Training happens elsewhere, by
//! optimizing a slice of the weights with the population metaheuristics.

mod forward;
mod model_io;
mod ops;
mod weights;

pub use forward::{forward, forward_logits, head_forward, trunk_output, DropoutMode};
pub use model_io::{load_model, save_model, ModelContainer};
pub use ops::{conv_forward, fc_forward, maxpool, relu, softmax};
pub use weights::{BlockKind, LayoutBlock, SearchSlice, Weights};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense value grid with channel-major layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<F: Real> {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
    pub data: Vec<F>,
}

impl<F: Real> Tensor<F> {
    pub fn new(channels: usize, height: usize, width: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != channels * height * width {
            return Err(Error::DimensionMismatch {
                context: "tensor buffer",
                expected: channels * height * width,
                actual: data.len(),
            });
        }
        Ok(Self { channels, height, width, data })
    }

    pub fn zeros(channels: usize, height: usize, width: usize) -> Self {
        Self { channels, height, width, data: vec![F::zero(); channels * height * width] }
    }

    /// Channel-major conversion of a grayscale image scaled to [0, 1].
    pub fn from_image(image: &crate::segmentation::GrayImage) -> Self {
        let scale = F::from_f64(1.0 / 255.0);
        let data = image
            .pixels()
            .iter()
            .map(|&p| F::from_f64(p as f64) * scale)
            .collect();
        Self { channels: 1, height: image.height(), width: image.width(), data }
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> F {
        self.data[(c * self.height + y) * self.width + x]
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }
}

/// Post-affine activation of a fully connected layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Identity,
}

/// One layer of the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayerSpec {
    Conv { filters: usize, kernel: usize, stride: usize, padding: usize },
    Relu,
    MaxPool { window: usize, stride: usize },
    FullyConnected { units: usize, activation: Activation },
    Dropout { probability: f64 },
    SoftmaxClassifier { classes: usize },
}

/// Shape of the value flowing between layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueShape {
    Spatial { channels: usize, height: usize, width: usize },
    Flat { len: usize },
}

impl ValueShape {
    pub fn len(&self) -> usize {
        match *self {
            ValueShape::Spatial { channels, height, width } => channels * height * width,
            ValueShape::Flat { len } => len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Full network description: layer chain, input resolution, and the number
/// of scalar side features concatenated before the first dense layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub input_height: usize,
    pub input_width: usize,
    pub side_features: usize,
    pub layers: Vec<LayerSpec>,
}

impl Default for NetworkSpec {
    /// The stock six-layer architecture: three conv/relu/pool stages, a
    /// 512-unit dense layer with dropout, and a two-class softmax head over
    /// a 143x143 grayscale input with three side features.
    fn default() -> Self {
        Self {
            input_height: 143,
            input_width: 143,
            side_features: 3,
            layers: vec![
                LayerSpec::Conv { filters: 52, kernel: 7, stride: 2, padding: 0 },
                LayerSpec::Relu,
                LayerSpec::MaxPool { window: 3, stride: 2 },
                LayerSpec::Conv { filters: 256, kernel: 5, stride: 2, padding: 0 },
                LayerSpec::Relu,
                LayerSpec::MaxPool { window: 3, stride: 2 },
                LayerSpec::Conv { filters: 156, kernel: 3, stride: 2, padding: 0 },
                LayerSpec::Relu,
                LayerSpec::MaxPool { window: 3, stride: 2 },
                LayerSpec::FullyConnected { units: 512, activation: Activation::Relu },
                LayerSpec::Dropout { probability: 0.5 },
                LayerSpec::FullyConnected { units: 2, activation: Activation::Identity },
                LayerSpec::SoftmaxClassifier { classes: 2 },
            ],
        }
    }
}

impl NetworkSpec {
    /// Validate the chain and compute the shape entering every layer plus
    /// the final output shape. Errors name the offending layer.
    pub fn shape_chain(&self) -> Result<Vec<ValueShape>> {
        let mut shape = ValueShape::Spatial {
            channels: 1,
            height: self.input_height,
            width: self.input_width,
        };
        let mut chain = vec![shape];
        let mut seen_dense = false;
        for (index, layer) in self.layers.iter().enumerate() {
            let fail = |msg: String| Error::contract(format!("layer {index}: {msg}"));
            shape = match (*layer).clone() {
                LayerSpec::Conv { filters, kernel, stride, padding } => match shape {
                    ValueShape::Spatial { channels: _, height, width } => {
                        if seen_dense {
                            return Err(fail("conv after dense section".into()));
                        }
                        if stride == 0 || filters == 0 || kernel == 0 {
                            return Err(fail("conv parameters must be positive".into()));
                        }
                        let h = height + 2 * padding;
                        let w = width + 2 * padding;
                        if kernel > h || kernel > w {
                            return Err(fail(format!(
                                "kernel {kernel} exceeds padded input {h}x{w}"
                            )));
                        }
                        ValueShape::Spatial {
                            channels: filters,
                            height: (h - kernel) / stride + 1,
                            width: (w - kernel) / stride + 1,
                        }
                    }
                    ValueShape::Flat { .. } => return Err(fail("conv on flat value".into())),
                },
                LayerSpec::Relu => shape,
                LayerSpec::MaxPool { window, stride } => match shape {
                    ValueShape::Spatial { channels, height, width } => {
                        if stride == 0 || window == 0 {
                            return Err(fail("pool parameters must be positive".into()));
                        }
                        if window > height || window > width {
                            return Err(fail(format!(
                                "pool window {window} exceeds input {height}x{width}"
                            )));
                        }
                        ValueShape::Spatial {
                            channels,
                            height: (height - window) / stride + 1,
                            width: (width - window) / stride + 1,
                        }
                    }
                    ValueShape::Flat { .. } => return Err(fail("pool on flat value".into())),
                },
                LayerSpec::FullyConnected { units, .. } => {
                    if units == 0 {
                        return Err(fail("dense layer must have units".into()));
                    }
                    let inputs = if seen_dense {
                        shape.len()
                    } else {
                        // Side features join at the flatten boundary.
                        shape.len() + self.side_features
                    };
                    seen_dense = true;
                    let _ = inputs;
                    ValueShape::Flat { len: units }
                }
                LayerSpec::Dropout { probability } => {
                    if !(0.0..1.0).contains(&probability) {
                        return Err(fail("dropout probability must lie in [0, 1)".into()));
                    }
                    if !seen_dense {
                        return Err(fail("dropout before dense section".into()));
                    }
                    shape
                }
                LayerSpec::SoftmaxClassifier { classes } => {
                    if index + 1 != self.layers.len() {
                        return Err(fail("classifier must be the final layer".into()));
                    }
                    if shape.len() != classes {
                        return Err(fail(format!(
                            "classifier expects {classes} logits, got {}",
                            shape.len()
                        )));
                    }
                    ValueShape::Flat { len: classes }
                }
            };
            chain.push(shape);
        }
        match self.layers.last() {
            Some(LayerSpec::SoftmaxClassifier { .. }) => Ok(chain),
            _ => Err(Error::contract("network must end with a softmax classifier")),
        }
    }

    /// Number of output classes.
    pub fn classes(&self) -> usize {
        match self.layers.last() {
            Some(LayerSpec::SoftmaxClassifier { classes }) => *classes,
            _ => 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spec_shape_chain_matches_published_sizes() {
        let spec = NetworkSpec::default();
        let chain = spec.shape_chain().unwrap();
        // after conv1
        assert_eq!(chain[1], ValueShape::Spatial { channels: 52, height: 69, width: 69 });
        // after pool1
        assert_eq!(chain[3], ValueShape::Spatial { channels: 52, height: 34, width: 34 });
        // after conv2
        assert_eq!(chain[4], ValueShape::Spatial { channels: 256, height: 15, width: 15 });
        // after pool2
        assert_eq!(chain[6], ValueShape::Spatial { channels: 256, height: 7, width: 7 });
        // after conv3
        assert_eq!(chain[7], ValueShape::Spatial { channels: 156, height: 3, width: 3 });
        // after pool3: flat 156 (+3 side features joins at the dense layer)
        assert_eq!(chain[9], ValueShape::Spatial { channels: 156, height: 1, width: 1 });
        assert_eq!(chain.last().unwrap().len(), 2);
    }

    #[test]
    fn chain_rejects_oversized_kernel() {
        let spec = NetworkSpec {
            input_height: 4,
            input_width: 4,
            side_features: 0,
            layers: vec![
                LayerSpec::Conv { filters: 1, kernel: 7, stride: 1, padding: 0 },
                LayerSpec::FullyConnected { units: 2, activation: Activation::Identity },
                LayerSpec::SoftmaxClassifier { classes: 2 },
            ],
        };
        let err = spec.shape_chain().unwrap_err().to_string();
        assert!(err.contains("layer 0"), "{err}");
    }

    #[test]
    fn chain_requires_terminal_classifier() {
        let spec = NetworkSpec {
            input_height: 8,
            input_width: 8,
            side_features: 0,
            layers: vec![LayerSpec::FullyConnected { units: 2, activation: Activation::Identity }],
        };
        assert!(spec.shape_chain().is_err());
    }

    #[test]
    fn tensor_from_image_scales_to_unit() {
        let img = crate::segmentation::GrayImage::new(2, 1, vec![0, 255]).unwrap();
        let t = Tensor::<f64>::from_image(&img);
        assert_eq!(t.shape(), (1, 1, 2));
        assert_eq!(t.data, vec![0.0, 1.0]);
    }
}

//! Flat parameter vector with a stable block layout derived from the
//! network description.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{RngContext, StreamDomain};
use crate::scalar::Real;

use super::{LayerSpec, NetworkSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    ConvKernel,
    ConvBias,
    FcMatrix,
    FcBias,
}

/// One dense parameter block inside the flat vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutBlock {
    pub layer_index: usize,
    pub kind: BlockKind,
    pub offset: usize,
    pub len: usize,
    /// Fan-in of the producing unit, drives He initialization.
    pub fan_in: usize,
}

/// Which trailing dense layers the optimizer is allowed to tune.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSlice {
    /// Final dense layer only (the classifier head).
    #[default]
    FinalFc,
    /// Both trailing dense layers; much larger search space.
    LastTwoFc,
}

/// All network parameters addressable as one flat vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights<F: Real> {
    flat: Vec<F>,
    layout: Vec<LayoutBlock>,
}

fn build_layout(spec: &NetworkSpec) -> Result<Vec<LayoutBlock>> {
    let chain = spec.shape_chain()?;
    let mut layout = Vec::new();
    let mut offset = 0;
    let mut seen_dense = false;
    let mut channels = 1usize;
    for (index, layer) in spec.layers.iter().enumerate() {
        match *layer {
            LayerSpec::Conv { filters, kernel, .. } => {
                let fan_in = channels * kernel * kernel;
                let len = filters * fan_in;
                layout.push(LayoutBlock {
                    layer_index: index,
                    kind: BlockKind::ConvKernel,
                    offset,
                    len,
                    fan_in,
                });
                offset += len;
                layout.push(LayoutBlock {
                    layer_index: index,
                    kind: BlockKind::ConvBias,
                    offset,
                    len: filters,
                    fan_in,
                });
                offset += filters;
                channels = filters;
            }
            LayerSpec::FullyConnected { units, .. } => {
                let mut inputs = chain[index].len();
                if !seen_dense {
                    inputs += spec.side_features;
                    seen_dense = true;
                }
                let len = units * inputs;
                layout.push(LayoutBlock {
                    layer_index: index,
                    kind: BlockKind::FcMatrix,
                    offset,
                    len,
                    fan_in: inputs,
                });
                offset += len;
                layout.push(LayoutBlock {
                    layer_index: index,
                    kind: BlockKind::FcBias,
                    offset,
                    len: units,
                    fan_in: inputs,
                });
                offset += units;
            }
            _ => {}
        }
    }
    Ok(layout)
}

impl<F: Real> Weights<F> {
    /// Total parameter count for a spec.
    pub fn parameter_count(spec: &NetworkSpec) -> Result<usize> {
        Ok(build_layout(spec)?.last().map_or(0, |b| b.offset + b.len))
    }

    /// Seeded He-style initialization: kernels and matrices drawn from
    /// `N(0, 2 / fan_in)`, biases zero.
    pub fn init_he(spec: &NetworkSpec, seed: u64) -> Result<Self> {
        let layout = build_layout(spec)?;
        let total = layout.last().map_or(0, |b| b.offset + b.len);
        let mut flat = vec![F::zero(); total];
        let mut rng = RngContext::new(seed).stream(StreamDomain::WeightInit, 0, 0);
        for block in &layout {
            match block.kind {
                BlockKind::ConvKernel | BlockKind::FcMatrix => {
                    let std = F::from_f64((2.0 / block.fan_in as f64).sqrt());
                    for slot in &mut flat[block.offset..block.offset + block.len] {
                        *slot = F::standard_normal(&mut rng) * std;
                    }
                }
                BlockKind::ConvBias | BlockKind::FcBias => {}
            }
        }
        Ok(Self { flat, layout })
    }

    /// Adopt an existing flat vector; rejects length mismatches.
    pub fn from_flat(spec: &NetworkSpec, flat: Vec<F>) -> Result<Self> {
        let layout = build_layout(spec)?;
        let total = layout.last().map_or(0, |b| b.offset + b.len);
        if flat.len() != total {
            return Err(Error::DimensionMismatch {
                context: "weights flat vector",
                expected: total,
                actual: flat.len(),
            });
        }
        Ok(Self { flat, layout })
    }

    pub fn as_flat(&self) -> &[F] {
        &self.flat
    }

    pub fn layout(&self) -> &[LayoutBlock] {
        &self.layout
    }

    pub fn len(&self) -> usize {
        self.flat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    /// Blocks belonging to one layer, in layout order.
    pub fn layer_blocks(&self, layer_index: usize) -> Vec<&LayoutBlock> {
        self.layout
            .iter()
            .filter(|b| b.layer_index == layer_index)
            .collect()
    }

    pub fn block_slice(&self, block: &LayoutBlock) -> &[F] {
        &self.flat[block.offset..block.offset + block.len]
    }

    /// Contiguous flat range covered by the chosen search slice.
    pub fn slice_range(&self, slice: SearchSlice) -> Result<std::ops::Range<usize>> {
        let fc_layers: Vec<usize> = self
            .layout
            .iter()
            .filter(|b| b.kind == BlockKind::FcMatrix)
            .map(|b| b.layer_index)
            .collect();
        if fc_layers.is_empty() {
            return Err(Error::contract("network has no dense layers to tune"));
        }
        let first_layer = match slice {
            SearchSlice::FinalFc => *fc_layers.last().unwrap(),
            SearchSlice::LastTwoFc => {
                if fc_layers.len() >= 2 {
                    fc_layers[fc_layers.len() - 2]
                } else {
                    fc_layers[0]
                }
            }
        };
        let start = self
            .layout
            .iter()
            .find(|b| b.layer_index >= first_layer)
            .map(|b| b.offset)
            .unwrap();
        Ok(start..self.flat.len())
    }

    /// Overwrite one flat range.
    pub fn write_slice(&mut self, range: std::ops::Range<usize>, values: &[F]) -> Result<()> {
        if range.end > self.flat.len() || range.len() != values.len() {
            return Err(Error::DimensionMismatch {
                context: "weights slice write",
                expected: range.len(),
                actual: values.len(),
            });
        }
        self.flat[range].copy_from_slice(values);
        Ok(())
    }
}

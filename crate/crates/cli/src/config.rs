//! TOML run configuration. Unknown keys are rejected; missing keys take the
//! documented defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use hawkwolf::network::{Activation, LayerSpec, NetworkSpec};
use hawkwolf::optimizer::RunConfig;
use hawkwolf::pipeline::PipelineOptions;
use hawkwolf::segmentation::PreprocessOptions;
use hawkwolf::trainer::TrainOptions;

use crate::augment::AugmentOp;
use crate::error::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub preprocess: PreprocessOptions,
    pub segmentation: SegmentationConfig,
    pub features: FeaturesConfig,
    pub network: NetworkConfig,
    pub run: RunSection,
    pub train: TrainSection,
    pub augment: AugmentSection,
    pub bench: BenchSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SegmentationConfig {
    pub otsu: bool,
    pub fixed_threshold: u8,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        Self { otsu: true, fixed_threshold: 128 }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeaturesConfig {
    pub variance: hawkwolf::features::VarianceMode,
}

/// Stock architecture knobs; defaults reproduce the six-layer classifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NetworkConfig {
    pub input_size: usize,
    pub conv_filters: Vec<usize>,
    pub conv_kernels: Vec<usize>,
    pub conv_strides: Vec<usize>,
    pub pool_window: usize,
    pub pool_stride: usize,
    pub fc_units: usize,
    pub dropout: f64,
    pub classes: usize,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            input_size: 143,
            conv_filters: vec![52, 256, 156],
            conv_kernels: vec![7, 5, 3],
            conv_strides: vec![2, 2, 2],
            pool_window: 3,
            pool_stride: 2,
            fc_units: 512,
            dropout: 0.5,
            classes: 2,
        }
    }
}

impl NetworkConfig {
    pub fn to_spec(&self) -> Result<NetworkSpec, CliError> {
        if self.conv_filters.len() != self.conv_kernels.len()
            || self.conv_filters.len() != self.conv_strides.len()
        {
            return Err(CliError::data(
                "network.conv_filters, conv_kernels and conv_strides must have equal length",
            ));
        }
        if self.classes != 2 {
            return Err(CliError::data("network.classes must be 2"));
        }
        let mut layers = Vec::new();
        for ((&filters, &kernel), &stride) in self
            .conv_filters
            .iter()
            .zip(&self.conv_kernels)
            .zip(&self.conv_strides)
        {
            layers.push(LayerSpec::Conv { filters, kernel, stride, padding: 0 });
            layers.push(LayerSpec::Relu);
            layers.push(LayerSpec::MaxPool { window: self.pool_window, stride: self.pool_stride });
        }
        layers.push(LayerSpec::FullyConnected {
            units: self.fc_units,
            activation: Activation::Relu,
        });
        layers.push(LayerSpec::Dropout { probability: self.dropout });
        layers.push(LayerSpec::FullyConnected {
            units: self.classes,
            activation: Activation::Identity,
        });
        layers.push(LayerSpec::SoftmaxClassifier { classes: self.classes });
        let spec = NetworkSpec {
            input_height: self.input_size,
            input_width: self.input_size,
            side_features: 3,
            layers,
        };
        spec.shape_chain()
            .map_err(|e| CliError::data(format!("network config yields an invalid chain: {e}")))?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub population: usize,
    pub max_iterations: usize,
    pub hho_fraction: f64,
    pub beta: f64,
}

impl Default for RunSection {
    fn default() -> Self {
        let d = RunConfig::default();
        Self {
            population: d.population,
            max_iterations: d.max_iterations,
            hho_fraction: d.hho_fraction,
            beta: d.beta,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSection {
    pub train_fraction: f64,
    pub batch_cap: usize,
    pub slice: hawkwolf::network::SearchSlice,
    pub weight_bound: f64,
}

impl Default for TrainSection {
    fn default() -> Self {
        let d = TrainOptions::default();
        Self {
            train_fraction: 0.7,
            batch_cap: d.batch_cap,
            slice: d.slice,
            weight_bound: d.weight_bound,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AugmentSection {
    pub ops: Vec<String>,
    pub include_original: bool,
}

impl Default for AugmentSection {
    fn default() -> Self {
        Self {
            ops: vec![
                "rotate90".into(),
                "rotate180".into(),
                "rotate270".into(),
                "flip_h".into(),
                "flip_v".into(),
                "brightness+10".into(),
                "brightness-10".into(),
            ],
            include_original: true,
        }
    }
}

impl AugmentSection {
    pub fn parsed_ops(&self) -> Result<Vec<AugmentOp>, CliError> {
        self.ops.iter().map(|s| AugmentOp::parse(s)).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchSection {
    pub dim: usize,
    pub population: usize,
    pub max_iterations: usize,
    pub seeds: u64,
    pub functions: Vec<String>,
}

impl Default for BenchSection {
    fn default() -> Self {
        Self {
            dim: 10,
            population: 30,
            max_iterations: 500,
            seeds: 30,
            functions: vec!["sphere".into(), "rastrigin".into(), "rosenbrock".into(), "ackley".into()],
        }
    }
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::data(format!("cannot read config {}: {e}", p.display()))
                })?;
                toml::from_str(&text)
                    .map_err(|e| CliError::data(format!("malformed config {}: {e}", p.display())))
            }
        }
    }

    pub fn pipeline_options(&self) -> PipelineOptions {
        PipelineOptions {
            preprocess: self.preprocess,
            otsu: self.segmentation.otsu,
            fixed_threshold: self.segmentation.fixed_threshold,
            variance: self.features.variance,
        }
    }

    pub fn run_config(&self, seed: u64) -> RunConfig {
        RunConfig {
            population: self.run.population,
            max_iterations: self.run.max_iterations,
            seed,
            hho_fraction: self.run.hho_fraction,
            beta: self.run.beta,
            eval_mode: hawkwolf::optimizer::EvalMode::Parallel,
        }
    }

    pub fn train_options(&self) -> TrainOptions {
        TrainOptions {
            slice: self.train.slice,
            weight_bound: self.train.weight_bound,
            batch_cap: self.train.batch_cap,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build_the_stock_spec() {
        let cfg = FileConfig::default();
        let spec = cfg.network.to_spec().unwrap();
        assert_eq!(spec, NetworkSpec::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = toml::from_str::<FileConfig>("unknown_key = 1").unwrap_err();
        assert!(err.to_string().contains("unknown"));
        assert!(toml::from_str::<FileConfig>("[network]\nbogus = 2").is_err());
    }

    #[test]
    fn partial_config_takes_defaults() {
        let cfg: FileConfig = toml::from_str("seed = 7\n[run]\npopulation = 5").unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.run.population, 5);
        assert_eq!(cfg.run.max_iterations, 500);
        assert!(cfg.segmentation.otsu);
    }
}

//! Layer-level profiling of a feature-hierarchy network and the linear
//! cost/quality model fitted from it.
//!
//! A feature-hierarchy network exposes one feature tensor per scale. A
//! class-`k` inference consumes the scales `1..=k`: the edge runs the feature
//! network up to the layer producing scale `k`, ships the concatenated
//! features, and the mobile runs the inference block attached to scale `k`.
//! Everything downstream only sees the fitted [`NetCostModel`].

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{parse_error_with_source, Error, Result};

/// One convolution layer: filter size, output spatial size, channel counts
/// and the number of bytes the layer's output occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLayer", into = "RawLayer")]
pub struct ConvLayerSpec {
    filter_size: u64,
    output_size: u64,
    in_channels: u64,
    out_channels: u64,
    output_bytes: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    filter_size: u64,
    output_size: u64,
    in_channels: u64,
    out_channels: u64,
    output_bytes: u64,
}

impl TryFrom<RawLayer> for ConvLayerSpec {
    type Error = Error;

    fn try_from(r: RawLayer) -> Result<Self> {
        ConvLayerSpec::new(
            r.filter_size,
            r.output_size,
            r.in_channels,
            r.out_channels,
            r.output_bytes,
        )
    }
}

impl From<ConvLayerSpec> for RawLayer {
    fn from(l: ConvLayerSpec) -> Self {
        RawLayer {
            filter_size: l.filter_size,
            output_size: l.output_size,
            in_channels: l.in_channels,
            out_channels: l.out_channels,
            output_bytes: l.output_bytes,
        }
    }
}

impl ConvLayerSpec {
    pub fn new(
        filter_size: u64,
        output_size: u64,
        in_channels: u64,
        out_channels: u64,
        output_bytes: u64,
    ) -> Result<Self> {
        let fields = [
            ("filter_size", filter_size),
            ("output_size", output_size),
            ("in_channels", in_channels),
            ("out_channels", out_channels),
            ("output_bytes", output_bytes),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| *v == 0) {
            return Err(Error::validation(format!("layer field `{name}` must be positive")));
        }
        let flops = [filter_size, filter_size, output_size, output_size, in_channels, out_channels]
            .iter()
            .try_fold(1u64, |acc, &v| acc.checked_mul(v));
        if flops.is_none() {
            return Err(Error::validation("layer FLOPs overflow u64"));
        }
        Ok(ConvLayerSpec {
            filter_size,
            output_size,
            in_channels,
            out_channels,
            output_bytes,
        })
    }

    pub fn filter_size(&self) -> u64 {
        self.filter_size
    }

    pub fn output_size(&self) -> u64 {
        self.output_size
    }

    pub fn in_channels(&self) -> u64 {
        self.in_channels
    }

    pub fn out_channels(&self) -> u64 {
        self.out_channels
    }

    pub fn output_bytes(&self) -> u64 {
        self.output_bytes
    }
}

/// FLOPs of one convolution layer: `k² · m² · h_in · h_out`.
pub fn layer_flops(layer: &ConvLayerSpec) -> u64 {
    let k = layer.filter_size;
    let m = layer.output_size;
    k * k * m * m * layer.in_channels * layer.out_channels
}

/// An ordered layer list plus the layers that emit each feature scale and
/// the first layer of each scale's inference block. Indices are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyProfile {
    layers: Vec<ConvLayerSpec>,
    feature_layers: Vec<usize>,
    inference_starts: Vec<usize>,
    inference_block_len: usize,
}

/// Edge (feature network) and mobile (inference network) loads of one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassLoads {
    pub fn_flops: u64,
    pub in_flops: u64,
}

impl HierarchyProfile {
    pub fn new(
        layers: Vec<ConvLayerSpec>,
        feature_layers: Vec<usize>,
        inference_starts: Vec<usize>,
        inference_block_len: usize,
    ) -> Result<Self> {
        let n = layers.len();
        if feature_layers.is_empty() {
            return Err(Error::validation("profile needs at least one feature scale"));
        }
        if feature_layers.len() != inference_starts.len() {
            return Err(Error::LengthMismatch {
                expected: feature_layers.len(),
                got: inference_starts.len(),
            });
        }
        if inference_block_len == 0 {
            return Err(Error::validation("inference_block_len must be positive"));
        }
        if feature_layers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation("feature layer indices must be strictly increasing"));
        }
        for &f in &feature_layers {
            if f == 0 || f > n {
                return Err(Error::validation(format!("feature layer {f} outside 1..={n}")));
            }
        }
        for &i in &inference_starts {
            if i == 0 || i + inference_block_len - 1 > n {
                return Err(Error::validation(format!(
                    "inference block starting at {i} (len {inference_block_len}) exceeds {n} layers"
                )));
            }
        }
        // Prefix sums below must stay in u64.
        let total = layers
            .iter()
            .try_fold(0u64, |acc, l| acc.checked_add(layer_flops(l)));
        if total.is_none() {
            return Err(Error::validation("total profile FLOPs overflow u64"));
        }
        Ok(HierarchyProfile {
            layers,
            feature_layers,
            inference_starts,
            inference_block_len,
        })
    }

    pub fn layers(&self) -> &[ConvLayerSpec] {
        &self.layers
    }

    pub fn scale_count(&self) -> usize {
        self.feature_layers.len()
    }

    pub fn feature_layers(&self) -> &[usize] {
        &self.feature_layers
    }

    pub fn inference_starts(&self) -> &[usize] {
        &self.inference_starts
    }

    pub fn inference_block_len(&self) -> usize {
        self.inference_block_len
    }

    fn check_class(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.scale_count() {
            return Err(Error::OutOfRangeClass {
                class: k,
                scales: self.scale_count(),
            });
        }
        Ok(())
    }

    fn sum_flops(&self, first: usize, last: usize) -> u64 {
        self.layers[first - 1..last].iter().map(layer_flops).sum()
    }

    /// Loads of a class-`k` inference (`k` is 1-based).
    pub fn class_loads(&self, k: usize) -> Result<ClassLoads> {
        self.check_class(k)?;
        let start = self.inference_starts[k - 1];
        Ok(ClassLoads {
            fn_flops: self.sum_flops(1, self.feature_layers[k - 1]),
            in_flops: self.sum_flops(start, start + self.inference_block_len - 1),
        })
    }

    /// Bytes shipped to the mobile for a class-`k` inference: the outputs of
    /// the feature layers of scales `1..=k`.
    pub fn comm_load(&self, k: usize) -> Result<u64> {
        self.check_class(k)?;
        Ok(self.feature_layers[..k]
            .iter()
            .map(|&f| self.layers[f - 1].output_bytes)
            .sum())
    }

    /// Per-scale feature sizes `d^(k)`.
    pub fn scale_sizes(&self) -> Vec<f64> {
        self.feature_layers
            .iter()
            .map(|&f| self.layers[f - 1].output_bytes as f64)
            .collect()
    }
}

/// Linear cost/quality model of a feature-hierarchy network, all in terms of
/// the feature size `d` in bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetCostModel {
    /// Base feature-network load (FLOPs) paid regardless of `d`.
    pub base_load: f64,
    /// Feature-network FLOPs per byte of extracted features.
    pub fn_slope: f64,
    /// Inference-network FLOPs per byte of received features.
    pub in_slope: f64,
    /// Quality units (mAP) per byte.
    pub quality_slope: f64,
    /// Feature bytes contributed by each scale, in scale order.
    pub scale_sizes: Vec<f64>,
}

impl NetCostModel {
    /// Default detector constants used by the simulation. The scale split
    /// sums to the 6 MB maximum feature size with the first boundary at the
    /// 2.8 MB minimum.
    pub fn reference() -> Self {
        NetCostModel {
            base_load: 14.527e9,
            fn_slope: 12.59e3,
            in_slope: 5.664e3,
            quality_slope: 12.0 / 1e6,
            scale_sizes: vec![2.8e6, 1.6e6, 1.6e6],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base_load.is_finite() && self.base_load >= 0.0) {
            return Err(Error::validation("base_load must be finite and non-negative"));
        }
        for (name, v) in [
            ("fn_slope", self.fn_slope),
            ("in_slope", self.in_slope),
            ("quality_slope", self.quality_slope),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(format!("{name} must be finite and positive")));
            }
        }
        if self.scale_sizes.is_empty() || self.scale_sizes.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
            return Err(Error::validation("scale_sizes must be non-empty and positive"));
        }
        Ok(())
    }

    pub fn total_scale_bytes(&self) -> f64 {
        self.scale_sizes.iter().sum()
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("cost model serializes")
    }

    pub fn from_toml_str(src: &str) -> Result<Self> {
        let model: NetCostModel = toml::from_str(src).map_err(|e| parse_error_with_source(e, src))?;
        model.validate()?;
        Ok(model)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let src = std::fs::read_to_string(path)?;
        Self::from_toml_str(&src)
    }
}

/// Smallest class `k` whose cumulative scale sizes cover `d` bytes.
pub fn scale_for_feature_size(model: &NetCostModel, d: f64) -> Result<usize> {
    let mut covered = 0.0;
    for (i, size) in model.scale_sizes.iter().enumerate() {
        covered += size;
        if d <= covered {
            return Ok(i + 1);
        }
    }
    Err(Error::FeatureTooLarge {
        size: d,
        total: covered,
    })
}

/// One measured class: bytes shipped, edge and mobile FLOPs, and quality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostSample {
    pub comm_bytes: f64,
    pub fn_flops: f64,
    pub in_flops: f64,
    pub quality: f64,
}

/// Builds one regression sample per class from a profile and the measured
/// per-class quality.
pub fn samples_from_profile(profile: &HierarchyProfile, quality: &[f64]) -> Result<Vec<CostSample>> {
    if quality.len() != profile.scale_count() {
        return Err(Error::LengthMismatch {
            expected: profile.scale_count(),
            got: quality.len(),
        });
    }
    (1..=profile.scale_count())
        .map(|k| {
            let loads = profile.class_loads(k)?;
            Ok(CostSample {
                comm_bytes: profile.comm_load(k)? as f64,
                fn_flops: loads.fn_flops as f64,
                in_flops: loads.in_flops as f64,
                quality: quality[k - 1],
            })
        })
        .collect()
}

/// Ordinary least squares: feature-network load with an intercept, the
/// inference load and quality through the origin.
///
/// Scale sizes are the gaps between the distinct sorted `comm_bytes`, which
/// is exact when the samples are one per class.
pub fn fit_cost_model(samples: &[CostSample]) -> Result<NetCostModel> {
    if samples.len() < 2 {
        return Err(Error::DegenerateSamples(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let n = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.comm_bytes).sum::<f64>() / n;
    let mean_fn = samples.iter().map(|s| s.fn_flops).sum::<f64>() / n;
    let sxx: f64 = samples.iter().map(|s| (s.comm_bytes - mean_x).powi(2)).sum();
    if sxx <= 0.0 || samples.iter().all(|s| s.comm_bytes == samples[0].comm_bytes) {
        return Err(Error::DegenerateSamples("all comm_bytes are equal".into()));
    }
    let sxy: f64 = samples
        .iter()
        .map(|s| (s.comm_bytes - mean_x) * (s.fn_flops - mean_fn))
        .sum();
    let fn_slope = sxy / sxx;
    let base_load = mean_fn - fn_slope * mean_x;

    let x2: f64 = samples.iter().map(|s| s.comm_bytes * s.comm_bytes).sum();
    let in_slope = samples.iter().map(|s| s.comm_bytes * s.in_flops).sum::<f64>() / x2;
    let quality_slope = samples.iter().map(|s| s.comm_bytes * s.quality).sum::<f64>() / x2;

    let mut xs: Vec<f64> = samples.iter().map(|s| s.comm_bytes).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut prev = 0.0;
    let scale_sizes = xs
        .iter()
        .map(|&x| {
            let size = x - prev;
            prev = x;
            size
        })
        .collect();

    let model = NetCostModel {
        base_load,
        fn_slope,
        in_slope,
        quality_slope,
        scale_sizes,
    };
    model
        .validate()
        .map_err(|e| Error::DegenerateSamples(format!("fitted model is invalid: {e}")))?;
    Ok(model)
}

/// On-disk layer-spec file: the profile plus measured per-class quality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub feature_layers: Vec<usize>,
    pub inference_starts: Vec<usize>,
    pub inference_block_len: usize,
    pub class_quality: Vec<f64>,
    #[serde(rename = "layer")]
    pub layers: Vec<ConvLayerSpec>,
}

impl ProfileFile {
    pub fn from_toml_str(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| parse_error_with_source(e, src))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let src = std::fs::read_to_string(path)?;
        Self::from_toml_str(&src)
    }

    pub fn profile(&self) -> Result<HierarchyProfile> {
        HierarchyProfile::new(
            self.layers.clone(),
            self.feature_layers.clone(),
            self.inference_starts.clone(),
            self.inference_block_len,
        )
    }

    /// Profiles every class and fits the linear model.
    pub fn fit(&self) -> Result<NetCostModel> {
        let samples = samples_from_profile(&self.profile()?, &self.class_quality)?;
        fit_cost_model(&samples)
    }
}

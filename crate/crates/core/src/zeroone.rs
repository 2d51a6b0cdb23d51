//! Zero-one experiments: the fraction of models over `{1..n}` that satisfy
//! a sentence-only MD-sentence, exactly by enumeration or by sampling.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::algebra::Algebra;
use crate::calculus::at_domain;
use crate::error::{Error, Result};
use crate::format::{parse_md_file, Context};
use crate::infoset::Setting;
use crate::md::MdSentence;
use crate::semantics::{enumerate_models, model_count, satisfies, Model};
use crate::syntax::Vocabulary;

pub const DEFAULT_EXACT_CAP: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeMode {
    Exact,
    Sample,
    /// Exact when the model count is under the cap, else sampled.
    Auto,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub algebra: Algebra,
    pub vocabulary: Vocabulary,
    pub md: MdSentence,
    pub sizes: Vec<(usize, SizeMode)>,
    pub samples: u64,
    pub seed: u64,
    pub delta: f64,
    pub exact_cap: u128,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    algebra: Option<String>,
    md: String,
    sizes: Vec<usize>,
    #[serde(default = "auto")]
    mode: SizeMode,
    #[serde(default)]
    modes: BTreeMap<String, SizeMode>,
    #[serde(default = "default_samples")]
    samples: u64,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_delta")]
    delta: f64,
    exact_cap: Option<u64>,
}

fn auto() -> SizeMode {
    SizeMode::Auto
}

fn default_samples() -> u64 {
    10_000
}

fn default_delta() -> f64 {
    0.05
}

impl ExperimentConfig {
    /// Checks the sentence and the sizes. The vocabulary must cover the
    /// sentence's predicates.
    pub fn new(
        md: MdSentence,
        vocabulary: Vocabulary,
        sizes: Vec<(usize, SizeMode)>,
        samples: u64,
        seed: u64,
    ) -> Result<Self> {
        if !md.algebra().is_finite() {
            return Err(Error::InfiniteCarrier(md.algebra().to_string()));
        }
        if !md.is_sentential() {
            return Err(Error::Invalid("experiments need sentence components".into()));
        }
        if let Some((n, _)) = sizes.iter().find(|(n, _)| *n == 0) {
            return Err(Error::Invalid(format!("size {n}: domains must be nonempty")));
        }
        if samples == 0 && sizes.iter().any(|(_, m)| *m == SizeMode::Sample) {
            return Err(Error::Invalid("sampling needs at least one sample".into()));
        }
        for f in md.formulas() {
            f.check(&vocabulary, crate::syntax::Mode::FirstOrder)?;
        }
        Ok(ExperimentConfig {
            algebra: *md.algebra(),
            vocabulary,
            md,
            sizes,
            samples,
            seed,
            delta: default_delta(),
            exact_cap: DEFAULT_EXACT_CAP,
        })
    }

    /// Reads a TOML configuration:
    ///
    /// ```toml
    /// algebra = "l3"
    /// md = "pred P/1; md s { components: [exists x. P(x)]; set: explicit { (1) } }"
    /// sizes = [1, 2, 3, 30]
    /// mode = "auto"                 # exact | sample | auto
    /// modes = { "30" = "sample" }   # per-size overrides
    /// samples = 10000
    /// seed = 7
    /// ```
    pub fn from_toml(text: &str, algebra: Option<Algebra>) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))?;
        let alg = match (&raw.algebra, algebra) {
            (Some(tok), over) => {
                let a: Algebra = tok.parse()?;
                if over.as_ref().is_some_and(|o| *o != a) {
                    return Err(Error::Invalid(format!("config algebra {a} conflicts with the command line")));
                }
                Some(a)
            }
            (None, over) => over,
        };
        let ctx = Context::new(alg, None).with_fallback(Setting::FirstOrder { domain: 1 });
        let file = parse_md_file(&raw.md, &ctx)?;
        let [(_, md)] = <[_; 1]>::try_from(file.sentences)
            .map_err(|_| Error::Invalid("config needs exactly one md sentence".into()))?;
        let mut sizes = Vec::new();
        for n in raw.sizes {
            sizes.push((n, raw.modes.get(&n.to_string()).copied().unwrap_or(raw.mode)));
        }
        for k in raw.modes.keys() {
            if !sizes.iter().any(|(n, _)| n.to_string() == *k) {
                return Err(Error::Invalid(format!("mode given for size {k}, which is not in `sizes`")));
            }
        }
        let mut cfg = ExperimentConfig::new(md, file.vocabulary, sizes, raw.samples, raw.seed)?;
        cfg.delta = raw.delta;
        if let Some(cap) = raw.exact_cap {
            cfg.exact_cap = cap as u128;
        }
        Ok(cfg)
    }

    fn at(&self, n: usize) -> Result<MdSentence> {
        at_domain(&self.md, n)
    }

    pub fn model_count(&self, n: usize) -> Option<u128> {
        model_count(self.algebra.carrier_size()?, &self.vocabulary, n)
    }
}

/// Satisfying models and all models over `{1..n}`.
pub fn exact_fraction(cfg: &ExperimentConfig, n: usize) -> Result<(u128, u128)> {
    let md = cfg.at(n)?;
    let models = enumerate_models(&cfg.algebra, &cfg.vocabulary, n, cfg.exact_cap)?;
    let total = models.total();
    let hits = models
        .par_bridge()
        .map(|m| satisfies(&cfg.algebra, &m, &md).map(u128::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok((hits, total))
}

/// Seed of sample `j` at size `n`; independent of evaluation order.
fn sample_seed(seed: u64, n: usize, j: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(mix(seed) ^ n as u64) ^ j)
}

/// A uniformly random model: every table entry independent and uniform.
pub fn random_model(alg: &Algebra, vocab: &Vocabulary, n: usize, rng: &mut impl Rng) -> Result<Model> {
    let values = alg.enumerate_carrier()?;
    let tables = vocab
        .predicates()
        .iter()
        .map(|(p, a)| {
            let t = (0..n.pow(*a as u32)).map(|_| values[rng.random_range(0..values.len())].clone()).collect();
            (p.clone(), t)
        })
        .collect();
    Model::new(vocab.clone(), n, tables)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub hits: u64,
    pub samples: u64,
    pub mean: f64,
    pub stderr: f64,
}

pub fn sample_fraction(cfg: &ExperimentConfig, n: usize) -> Result<Estimate> {
    if cfg.samples == 0 {
        return Err(Error::Invalid("sampling needs at least one sample".into()));
    }
    let md = cfg.at(n)?;
    let hits = (0..cfg.samples)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(cfg.seed, n, j));
            let m = random_model(&cfg.algebra, &cfg.vocabulary, n, &mut rng)?;
            satisfies(&cfg.algebra, &m, &md).map(u64::from)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let mean = hits as f64 / cfg.samples as f64;
    let stderr = (mean * (1.0 - mean) / cfg.samples as f64).sqrt();
    Ok(Estimate { hits, samples: cfg.samples, mean, stderr })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Row {
    Exact { n: usize, hits: u128, total: u128 },
    Sampled { n: usize, estimate: Estimate },
}

impl Row {
    pub fn n(&self) -> usize {
        match self {
            Row::Exact { n, .. } | Row::Sampled { n, .. } => *n,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Row::Exact { hits, total, .. } => *hits as f64 / *total as f64,
            Row::Sampled { estimate, .. } => estimate.mean,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    TowardOne,
    TowardZero,
    Inconclusive,
}

/// A heuristic: the last three fractions all above `1 - delta` and
/// nondecreasing, or all below `delta` and nonincreasing.
pub fn trend(values: &[f64], delta: f64) -> Trend {
    let Some(last) = values.len().checked_sub(3).map(|k| &values[k..]) else {
        return Trend::Inconclusive;
    };
    if last.iter().all(|v| *v > 1.0 - delta) && last.windows(2).all(|w| w[0] <= w[1]) {
        Trend::TowardOne
    } else if last.iter().all(|v| *v < delta) && last.windows(2).all(|w| w[0] >= w[1]) {
        Trend::TowardZero
    } else {
        Trend::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub rows: Vec<Row>,
    pub trend: Trend,
    pub seed: u64,
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rows = Vec::new();
    for &(n, mode) in &cfg.sizes {
        let exact = match mode {
            SizeMode::Exact => true,
            SizeMode::Sample => false,
            SizeMode::Auto => cfg.model_count(n).is_some_and(|c| c <= cfg.exact_cap),
        };
        rows.push(if exact {
            let (hits, total) = exact_fraction(cfg, n)?;
            Row::Exact { n, hits, total }
        } else {
            Row::Sampled { n, estimate: sample_fraction(cfg, n)? }
        });
    }
    let values: Vec<f64> = rows.iter().map(|r| r.value()).collect();
    Ok(Report { trend: trend(&values, cfg.delta), rows, seed: cfg.seed })
}

impl Report {
    /// Columns `n, mode, fraction_num, fraction_den, estimate, stderr,
    /// samples, seed`; exact rows leave the sampling columns empty.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
        w.write_record(["n", "mode", "fraction_num", "fraction_den", "estimate", "stderr", "samples", "seed"])
            .map_err(io)?;
        for r in &self.rows {
            let rec = match r {
                Row::Exact { n, hits, total } => [
                    n.to_string(),
                    "exact".into(),
                    hits.to_string(),
                    total.to_string(),
                    format!("{:.12}", r.value()),
                    String::new(),
                    String::new(),
                    String::new(),
                ],
                Row::Sampled { n, estimate } => [
                    n.to_string(),
                    "sample".into(),
                    String::new(),
                    String::new(),
                    format!("{:.12}", estimate.mean),
                    format!("{:.12}", estimate.stderr),
                    estimate.samples.to_string(),
                    self.seed.to_string(),
                ],
            };
            w.write_record(&rec).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }
}

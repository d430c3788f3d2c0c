//! Linear and GCN encoders, deterministic or variational, over arbitrary
//! message passing operators.
//!
//! Featureless graphs use the identity-feature convention: `X = I_n` is never
//! materialized, the first weight matrix is simply gathered through the
//! operator (`Z = op·W0`).

use crate::error::{Error, Result};
use crate::graph::Operator;
use crate::rng::new_rng;
use ndarray::Array2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const LOG_SIGMA_CLAMP: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncoderKind {
    /// One-hop linear map, no activation.
    Linear,
    /// Two GCN layers; the community-augmented operator feeds only the first
    /// layer, the second uses the plain normalized adjacency.
    Gcn2,
    /// Two GCN layers with the augmented operator on both.
    Gcn1,
}

impl EncoderKind {
    pub fn is_gcn(self) -> bool {
        matches!(self, EncoderKind::Gcn2 | EncoderKind::Gcn1)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EncoderKind::Linear => "linear",
            EncoderKind::Gcn2 => "gcn2",
            EncoderKind::Gcn1 => "gcn1",
        }
    }

    pub fn parse(s: &str) -> Result<EncoderKind> {
        match s {
            "linear" => Ok(EncoderKind::Linear),
            "gcn2" | "gcn" => Ok(EncoderKind::Gcn2),
            "gcn1" => Ok(EncoderKind::Gcn1),
            other => Err(Error::parameter(
                "encoder",
                format!("unknown encoder kind '{other}'"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncoderConfig {
    pub kind: EncoderKind,
    pub variational: bool,
    /// Embedding dimension.
    pub d: usize,
    /// Hidden width, used by the GCN kinds.
    pub hidden: usize,
    /// Dropout probability on the hidden activation, in [0, 1).
    pub dropout: f64,
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(Error::parameter("d", "embedding dimension must be >= 1"));
        }
        if self.kind.is_gcn() && self.hidden < 1 {
            return Err(Error::parameter("hidden", "hidden width must be >= 1"));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(Error::parameter("dropout", "must lie in [0, 1)"));
        }
        Ok(())
    }
}

/// Node features: either the identity convention or a dense n×f matrix.
#[derive(Debug, Clone)]
pub enum Features {
    Identity,
    Dense(Array2<f64>),
}

impl Features {
    pub fn input_dim(&self, n: usize) -> usize {
        match self {
            Features::Identity => n,
            Features::Dense(x) => x.ncols(),
        }
    }
}

/// Trainable weight matrices. `w1` is present for GCN kinds; the `_sigma`
/// stack is present for variational models and shares no weights with the
/// mean stack.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    pub w0: Array2<f64>,
    pub w1: Option<Array2<f64>>,
    pub w0_sigma: Option<Array2<f64>>,
    pub w1_sigma: Option<Array2<f64>>,
}

impl Weights {
    pub fn matrices(&self) -> Vec<&Array2<f64>> {
        let mut out = vec![&self.w0];
        out.extend(self.w1.as_ref());
        out.extend(self.w0_sigma.as_ref());
        out.extend(self.w1_sigma.as_ref());
        out
    }

    pub fn matrices_mut(&mut self) -> Vec<&mut Array2<f64>> {
        let mut out = vec![&mut self.w0];
        out.extend(self.w1.as_mut());
        out.extend(self.w0_sigma.as_mut());
        out.extend(self.w1_sigma.as_mut());
        out
    }
}

/// Encoder output. For variational models `z = mu + exp(log_sigma)⊙ε` for
/// the noise draw used at encoding time.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub z: Array2<f64>,
    pub mu: Option<Array2<f64>>,
    pub log_sigma: Option<Array2<f64>>,
}

/// The operators feeding each encoder layer. Linear encoders use `layer1`
/// only; the plain two-layer GCN convention keeps the community term out of
/// the second layer.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    layer1: Operator,
    layer2: Option<Operator>,
}

impl OperatorSet {
    pub fn single(op: Operator) -> OperatorSet {
        OperatorSet {
            layer1: op,
            layer2: None,
        }
    }

    pub fn pair(layer1: Operator, layer2: Operator) -> OperatorSet {
        OperatorSet {
            layer1,
            layer2: Some(layer2),
        }
    }

    pub fn layer1(&self) -> &Operator {
        &self.layer1
    }

    pub fn layer2(&self) -> &Operator {
        self.layer2.as_ref().unwrap_or(&self.layer1)
    }

    pub fn n(&self) -> usize {
        self.layer1.n()
    }
}

/// Reparameterization noise source for variational encoders.
pub enum Noise<'a> {
    /// Fresh standard-normal draw.
    Sample(&'a mut ChaCha8Rng),
    /// Injected noise (frozen draws for gradient checks, tests).
    Fixed(&'a Array2<f64>),
    /// ε = 0: encode at the mean.
    Zero,
}

/// Glorot-uniform initialization, deterministic under `seed`. Matrices are
/// drawn in a fixed order (w0, w1, w0_sigma, w1_sigma).
pub fn init_weights(cfg: &EncoderConfig, f_in: usize, seed: u64) -> Result<Weights> {
    cfg.validate()?;
    if f_in == 0 {
        return Err(Error::parameter("f_in", "input dimension must be >= 1"));
    }
    let mut rng = new_rng(seed);
    let mut glorot = |rows: usize, cols: usize| -> Array2<f64> {
        let bound = (6.0 / (rows + cols) as f64).sqrt();
        let mut w = Array2::<f64>::zeros((rows, cols));
        for v in w.iter_mut() {
            *v = rng.random_range(-bound..bound);
        }
        w
    };
    let (w0, w1) = match cfg.kind {
        EncoderKind::Linear => (glorot(f_in, cfg.d), None),
        EncoderKind::Gcn2 | EncoderKind::Gcn1 => {
            (glorot(f_in, cfg.hidden), Some(glorot(cfg.hidden, cfg.d)))
        }
    };
    let (w0_sigma, w1_sigma) = if cfg.variational {
        match cfg.kind {
            EncoderKind::Linear => (Some(glorot(f_in, cfg.d)), None),
            EncoderKind::Gcn2 | EncoderKind::Gcn1 => (
                Some(glorot(f_in, cfg.hidden)),
                Some(glorot(cfg.hidden, cfg.d)),
            ),
        }
    } else {
        (None, None)
    };
    Ok(Weights {
        w0,
        w1,
        w0_sigma,
        w1_sigma,
    })
}

/// Per-stack forward caches kept for backpropagation.
#[derive(Debug, Clone, Default)]
pub(crate) struct StackCache {
    /// Hidden pre-activation `op1·X·W0` (GCN kinds).
    pub pre_hidden: Option<Array2<f64>>,
    /// Hidden activation after ReLU and dropout (GCN kinds).
    pub hidden: Option<Array2<f64>>,
}

#[derive(Debug, Clone)]
pub struct ForwardPass {
    pub embedding: Embedding,
    pub(crate) mu_cache: StackCache,
    pub(crate) sigma_cache: Option<StackCache>,
    /// Inverted-dropout multipliers shared by both stacks (0 or 1/(1-p)).
    pub(crate) dropout_scale: Option<Array2<f64>>,
    pub(crate) eps: Option<Array2<f64>>,
    /// 1.0 where the raw log-variance lies strictly inside the clamp range.
    pub(crate) clamp_open: Option<Array2<f64>>,
}

fn check_shapes(
    cfg: &EncoderConfig,
    ops: &OperatorSet,
    x: &Features,
    w: &Weights,
) -> Result<usize> {
    cfg.validate()?;
    let n = ops.n();
    if let Features::Dense(f) = x {
        if f.nrows() != n {
            return Err(Error::Shape(format!(
                "features have {} rows, operator has {n}",
                f.nrows()
            )));
        }
    }
    let f_in = x.input_dim(n);
    if w.w0.nrows() != f_in {
        return Err(Error::Shape(format!(
            "w0 has {} rows, input dimension is {f_in}",
            w.w0.nrows()
        )));
    }
    match cfg.kind {
        EncoderKind::Linear => {
            if w.w0.ncols() != cfg.d {
                return Err(Error::Shape("w0 columns must equal d".into()));
            }
            if w.w1.is_some() {
                return Err(Error::Shape("linear encoder takes no w1".into()));
            }
        }
        EncoderKind::Gcn2 | EncoderKind::Gcn1 => {
            if w.w0.ncols() != cfg.hidden {
                return Err(Error::Shape("w0 columns must equal hidden width".into()));
            }
            let w1 = w
                .w1
                .as_ref()
                .ok_or_else(|| Error::Shape("gcn encoder needs w1".into()))?;
            if w1.nrows() != cfg.hidden || w1.ncols() != cfg.d {
                return Err(Error::Shape("w1 must be hidden×d".into()));
            }
        }
    }
    if cfg.variational != w.w0_sigma.is_some() {
        return Err(Error::Shape(
            "variational flag and sigma weights disagree".into(),
        ));
    }
    Ok(n)
}

/// `op·(X·W0)`, with the identity convention short-circuited to `op·W0`.
fn propagate(op: &Operator, x: &Features, w: &Array2<f64>) -> Array2<f64> {
    match x {
        Features::Identity => op.apply(w),
        Features::Dense(f) => op.apply(&f.dot(w)),
    }
}

fn run_stack(
    cfg: &EncoderConfig,
    ops: &OperatorSet,
    x: &Features,
    w0: &Array2<f64>,
    w1: Option<&Array2<f64>>,
    dropout_scale: Option<&Array2<f64>>,
) -> (Array2<f64>, StackCache) {
    match cfg.kind {
        EncoderKind::Linear => (propagate(ops.layer1(), x, w0), StackCache::default()),
        EncoderKind::Gcn2 | EncoderKind::Gcn1 => {
            let pre = propagate(ops.layer1(), x, w0);
            let mut hidden = pre.mapv(|v| v.max(0.0));
            if let Some(scale) = dropout_scale {
                hidden *= scale;
            }
            let z = ops.layer2().apply(&hidden.dot(w1.expect("gcn needs w1")));
            (
                z,
                StackCache {
                    pre_hidden: Some(pre),
                    hidden: Some(hidden),
                },
            )
        }
    }
}

/// Full forward pass with caches for backpropagation.
///
/// `dropout_rng`: a fresh inverted-dropout mask is drawn on the hidden
/// activation when present and `cfg.dropout > 0`; without it encoding is a
/// pure function of `(ops, x, w)` (plus the noise source for variational
/// models).
pub fn encode(
    cfg: &EncoderConfig,
    ops: &OperatorSet,
    x: &Features,
    w: &Weights,
    noise: Noise,
    mut dropout_rng: Option<&mut ChaCha8Rng>,
) -> Result<ForwardPass> {
    let n = check_shapes(cfg, ops, x, w)?;

    let dropout_scale = match (&mut dropout_rng, cfg.kind.is_gcn()) {
        (Some(rng), true) if cfg.dropout > 0.0 => {
            let keep = 1.0 - cfg.dropout;
            let mut mask = Array2::<f64>::zeros((n, cfg.hidden));
            for v in mask.iter_mut() {
                *v = if rng.random_range(0.0..1.0) < keep {
                    1.0 / keep
                } else {
                    0.0
                };
            }
            Some(mask)
        }
        _ => None,
    };

    let (main, mu_cache) = run_stack(cfg, ops, x, &w.w0, w.w1.as_ref(), dropout_scale.as_ref());

    if !cfg.variational {
        return Ok(ForwardPass {
            embedding: Embedding {
                z: main,
                mu: None,
                log_sigma: None,
            },
            mu_cache,
            sigma_cache: None,
            dropout_scale,
            eps: None,
            clamp_open: None,
        });
    }

    let (raw_ls, sigma_cache) = run_stack(
        cfg,
        ops,
        x,
        w.w0_sigma.as_ref().expect("variational needs w0_sigma"),
        w.w1_sigma.as_ref(),
        dropout_scale.as_ref(),
    );
    let clamp_open = raw_ls.mapv(|v| if v.abs() < LOG_SIGMA_CLAMP { 1.0 } else { 0.0 });
    let log_sigma = raw_ls.mapv(|v| v.clamp(-LOG_SIGMA_CLAMP, LOG_SIGMA_CLAMP));

    let eps = match noise {
        Noise::Sample(rng) => {
            let mut e = Array2::<f64>::zeros((n, cfg.d));
            for v in e.iter_mut() {
                *v = StandardNormal.sample(rng);
            }
            e
        }
        Noise::Fixed(e) => {
            if e.dim() != (n, cfg.d) {
                return Err(Error::Shape("noise must be n×d".into()));
            }
            e.clone()
        }
        Noise::Zero => Array2::<f64>::zeros((n, cfg.d)),
    };

    let z = &main + &(log_sigma.mapv(f64::exp) * &eps);
    Ok(ForwardPass {
        embedding: Embedding {
            z,
            mu: Some(main),
            log_sigma: Some(log_sigma),
        },
        mu_cache,
        sigma_cache: Some(sigma_cache),
        dropout_scale,
        eps: Some(eps),
        clamp_open: Some(clamp_open),
    })
}

/// One-hop linear encoding `Z = op·X·W0`.
pub fn encode_linear(op: &Operator, x: &Features, w: &Weights) -> Result<Embedding> {
    let cfg = EncoderConfig {
        kind: EncoderKind::Linear,
        variational: false,
        d: w.w0.ncols(),
        hidden: 0,
        dropout: 0.0,
    };
    Ok(encode(
        &cfg,
        &OperatorSet::single(op.clone()),
        x,
        w,
        Noise::Zero,
        None,
    )?
    .embedding)
}

/// Two-layer GCN encoding `Z = op2·ReLU(op1·X·W0)·W1`.
pub fn encode_gcn2(
    op_first: &Operator,
    op_second: &Operator,
    x: &Features,
    w: &Weights,
) -> Result<Embedding> {
    let cfg = EncoderConfig {
        kind: EncoderKind::Gcn2,
        variational: false,
        d: w.w1.as_ref().map(|m| m.ncols()).unwrap_or(0),
        hidden: w.w0.ncols(),
        dropout: 0.0,
    };
    Ok(encode(
        &cfg,
        &OperatorSet::pair(op_first.clone(), op_second.clone()),
        x,
        w,
        Noise::Zero,
        None,
    )?
    .embedding)
}

/// Variational encoding: separate mean and log-variance stacks over the same
/// operators, then `Z = μ + exp(logσ)⊙ε`.
pub fn encode_variational(
    cfg: &EncoderConfig,
    ops: &OperatorSet,
    x: &Features,
    w: &Weights,
    noise: Noise,
) -> Result<Embedding> {
    if !cfg.variational {
        return Err(Error::parameter("variational", "flag must be set"));
    }
    Ok(encode(cfg, ops, x, w, noise, None)?.embedding)
}

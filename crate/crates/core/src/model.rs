//! The five tree models and their Malthusian parameters.

use thiserror::Error;

use crate::roots;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("preferential attachment requires rho > 0, got {0}")]
    NonPositiveRho(f64),
    #[error("preferential attachment with chi < 0 requires rho/|chi| to be an integer >= 2, got {0}")]
    BadNegativeChi(f64),
    #[error("root rate lambda must be positive, got {0}")]
    NonPositiveLambda(f64),
    #[error("root rate lambda with chi < 0 requires lambda/|chi| to be a positive integer, got {0}")]
    BadLambdaRatio(f64),
    #[error("parameter {0} must be finite")]
    NonFinite(&'static str),
    #[error("m-ary search trees require m >= 3, got {0}")]
    BadArity(u32),
    #[error("mean offspring count is at most 1; no Malthusian parameter exists")]
    Subcritical,
}

/// Which node set the stopping weight counts in an extended binary search
/// tree. The discrete generator always takes `n` as the internal node count;
/// the mode matters for the continuous-time simulation's stopping rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeMode {
    AllNodes,
    InternalNodes,
    ExternalNodes,
}

impl SizeMode {
    pub fn name(self) -> &'static str {
        match self {
            SizeMode::AllNodes => "all_nodes",
            SizeMode::InternalNodes => "internal_nodes",
            SizeMode::ExternalNodes => "external_nodes",
        }
    }
}

/// One of the five tree models, with its parameters.
///
/// * `Rrt` — each new node attaches to a uniformly random existing node; as a
///   branching process, every individual births at the points of a unit-rate
///   Poisson process.
/// * `Bst` — binary search tree of a uniformly random permutation; every
///   individual gets two children after independent Exp(1) waits.
/// * `Pa` — a new node picks parent `v` with probability proportional to
///   `chi * outdeg(v) + rho`; an individual with `k` children births the next
///   after an Exp(chi*k + rho) wait. `root_rate_lambda` replaces `rho` in the
///   root's rates only, giving the "merged roots" variant of the process.
/// * `Xbst` — binary search tree with external leaves filling every empty
///   slot; every individual gets twins after one Exp(1) wait.
/// * `Mary` — m-ary search tree on uniform keys; an individual holds 1..m-1
///   keys, gaining its (i)th key after an Exp(i) wait, and once it holds m-1
///   keys it births m children after independent Exp(1) waits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelSpec {
    Rrt,
    Bst,
    Pa {
        chi: f64,
        rho: f64,
        /// Birth-rate offset used by the root; equals `rho` in the ordinary
        /// process.
        root_rate_lambda: f64,
    },
    Xbst {
        size_mode: SizeMode,
    },
    Mary {
        m: u32,
    },
}

fn integer_ratio(num: f64, den: f64) -> Option<u64> {
    let r = num / den;
    let rounded = r.round();
    (rounded >= 1.0 && (r - rounded).abs() <= 1e-9 * rounded.max(1.0)).then_some(rounded as u64)
}

impl ModelSpec {
    pub fn rrt() -> Self {
        ModelSpec::Rrt
    }

    pub fn bst() -> Self {
        ModelSpec::Bst
    }

    /// The ordinary preferential attachment model (`lambda = rho`).
    pub fn pa(chi: f64, rho: f64) -> Result<Self, ModelError> {
        Self::pa_modified(chi, rho, rho)
    }

    /// Preferential attachment with a modified root rate.
    pub fn pa_modified(chi: f64, rho: f64, root_rate_lambda: f64) -> Result<Self, ModelError> {
        if !chi.is_finite() {
            return Err(ModelError::NonFinite("chi"));
        }
        if !rho.is_finite() || !root_rate_lambda.is_finite() {
            return Err(ModelError::NonFinite("rho"));
        }
        if rho <= 0.0 {
            return Err(ModelError::NonPositiveRho(rho));
        }
        if root_rate_lambda <= 0.0 {
            return Err(ModelError::NonPositiveLambda(root_rate_lambda));
        }
        if chi < 0.0 {
            // Outdegrees cap at rho/|chi|; the cap must be an integer >= 2 so
            // that every individual still has at least two children.
            match integer_ratio(rho, -chi) {
                Some(cap) if cap >= 2 => {}
                _ => return Err(ModelError::BadNegativeChi(rho / -chi)),
            }
            if integer_ratio(root_rate_lambda, -chi).is_none() {
                return Err(ModelError::BadLambdaRatio(root_rate_lambda / -chi));
            }
        }
        Ok(ModelSpec::Pa {
            chi,
            rho,
            root_rate_lambda,
        })
    }

    pub fn xbst(size_mode: SizeMode) -> Self {
        ModelSpec::Xbst { size_mode }
    }

    pub fn mary(m: u32) -> Result<Self, ModelError> {
        if m < 3 {
            return Err(ModelError::BadArity(m));
        }
        Ok(ModelSpec::Mary { m })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Rrt => "rrt",
            ModelSpec::Bst => "bst",
            ModelSpec::Pa { .. } => "pa",
            ModelSpec::Xbst { .. } => "xbst",
            ModelSpec::Mary { .. } => "mary",
        }
    }

    /// Model parameters as a JSON object, used in reports.
    pub fn params_json(&self) -> serde_json::Value {
        match *self {
            ModelSpec::Rrt | ModelSpec::Bst => serde_json::json!({}),
            ModelSpec::Pa {
                chi,
                rho,
                root_rate_lambda,
            } => {
                if root_rate_lambda == rho {
                    serde_json::json!({ "chi": chi, "rho": rho })
                } else {
                    serde_json::json!({ "chi": chi, "rho": rho, "root_rate_lambda": root_rate_lambda })
                }
            }
            ModelSpec::Xbst { size_mode } => serde_json::json!({ "size_mode": size_mode.name() }),
            ModelSpec::Mary { m } => serde_json::json!({ "m": m }),
        }
    }

    pub fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({ "model": self.name(), "params": self.params_json() })
    }

    /// The Malthusian parameter: the `a > 0` with `∫ e^{-a t} μ(dt) = 1`,
    /// where `μ` is the mean measure of an individual's birth times.
    /// Closed forms per model; see [`malthusian_alpha_numeric`] for the
    /// root-finding route used to cross-check them.
    pub fn alpha(&self) -> f64 {
        match *self {
            ModelSpec::Rrt => 1.0,
            ModelSpec::Bst => 1.0,
            ModelSpec::Pa { chi, rho, .. } => chi + rho,
            ModelSpec::Xbst { .. } => 1.0,
            // m (1/(1+a)) Π_{i=2}^{m-1} i/(i+a) telescopes to 1 at a = 1 for
            // every m >= 3.
            ModelSpec::Mary { .. } => 1.0,
        }
    }
}

/// Laplace transform `∫ e^{-a t} μ(dt)` of the mean birth measure.
///
/// RRT: births follow a unit-rate Poisson process, so `μ` is Lebesgue and the
/// transform is `1/a`. BST and XBST: two children at Exp(1) times, `2/(1+a)`.
/// PA: the mean birth intensity at age `t` is `rho e^{chi t}` (the expected
/// rate `chi E[k(t)] + rho` solves a linear ODE), giving `rho/(a - chi)` for
/// `a > chi`. MARY: child `i` is born at `Y_2 + ... + Y_{m-1} + X_i` with
/// independent `Y_j ~ Exp(j)`, `X_i ~ Exp(1)`.
pub fn birth_laplace(spec: &ModelSpec, a: f64) -> f64 {
    match *spec {
        ModelSpec::Rrt => 1.0 / a,
        ModelSpec::Bst | ModelSpec::Xbst { .. } => 2.0 / (1.0 + a),
        ModelSpec::Pa { chi, rho, .. } => {
            if a <= chi {
                f64::INFINITY
            } else {
                rho / (a - chi)
            }
        }
        ModelSpec::Mary { m } => {
            let mut v = f64::from(m) / (1.0 + a);
            for i in 2..m {
                v *= f64::from(i) / (f64::from(i) + a);
            }
            v
        }
    }
}

/// Solves `∫ e^{-a t} μ(dt) = 1` for `a` by bisection to 1e-12, as a
/// cross-check of the closed-form [`ModelSpec::alpha`]. Errors when the mean
/// offspring count is at most 1 (no positive root).
pub fn malthusian_alpha_numeric(spec: &ModelSpec) -> Result<f64, ModelError> {
    let lower = match *spec {
        ModelSpec::Pa { chi, .. } => chi.max(0.0),
        _ => 0.0,
    };
    // Mean offspring count: the transform at a -> lower^+.
    let at_floor = birth_laplace(spec, lower + 1e-12);
    if !(at_floor > 1.0) {
        return Err(ModelError::Subcritical);
    }
    let mut hi = lower.max(1.0);
    while birth_laplace(spec, hi) >= 1.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(ModelError::Subcritical);
        }
    }
    Ok(roots::bisect(
        |a| birth_laplace(spec, a) - 1.0,
        lower + 1e-12,
        hi,
        1e-12,
    ))
}

//! Averaging projections onto the Hankel and Helson classes.
//!
//! The plain averaging projection replaces every anti-diagonal
//! (Hankel side) or divisor fiber (Helson side) of a matrix by its mean;
//! the weighted variants use a convex weight on each anti-diagonal/fiber:
//!
//! ```text
//! γ_k = Σ_{i+j=k} φ(i,j)·a_{i,j}      with  Σ_{i+j=k} φ(i,j) = 1,
//! ρ_k = Σ_{mn=k} Φ(m,n)·a_{m,n}      with  Σ_{mn=k} Φ(m,n) = 1.
//! ```
//!
//! A finite matrix is read as a finitely supported infinite one: the sums
//! run over the full anti-diagonal or fiber with missing entries read as
//! zero, and the unweighted versions always divide by the full count
//! (`k+1` resp. `d(k)`).  This keeps projection outputs exact rather than
//! boundary-corrected — but note that for an N×N Hankel input the
//! anti-diagonals `k > N−1` are only partially represented, so symbol
//! recovery is exact only where the realization fits the truncation.
//!
//! The closed-form weight families are
//! `φ_{α,β}(i,j) = c_α(i)c_β(j)/c_{α+β}(i+j)` on the additive side and
//! `Φ_{α,β}(m,n) = d_α(m)d_β(n)/d_{α+β}(mn)` on the multiplicative side;
//! `α = β = 1` gives the uniform weights `1/(k+1)` and `1/d(k)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::{c_alpha, d_alpha, d_alpha_of_product, d_alpha_table, divisor_count, is_prime};
use crate::schatten::{
    hankel_truncation, helson_truncation, ComplexMatrix, IndexOrigin, SymbolKind, SymbolSequence,
};
use crate::{Error, Result};

/// Absolute tolerance for the unit-sum weight conditions.
pub const WEIGHT_TOLERANCE: f64 = 1e-10;

/// Closed-form family tag of a weight.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFamily {
    /// `1/(i+j+1)` additively, `1/d(mn)` multiplicatively (the α = β = 1
    /// endpoint).
    Uniform,
    /// `c_α(i)c_β(j)/c_{α+β}(i+j)` resp. `d_α(m)d_β(n)/d_{α+β}(mn)`.
    AlphaBeta { alpha: f64, beta: f64 },
    /// Anything else: table-backed or caller-supplied evaluator.
    Custom,
}

/// Evaluable non-negative weight on index pairs — ℕ₀×ℕ₀ for additive
/// weights (the pair (0,0) is meaningful and has weight 1 in every valid
/// family), ℕ×ℕ for multiplicative ones.
#[derive(Clone)]
pub struct WeightFunction {
    kind: SymbolKind,
    family: WeightFamily,
    eval: Arc<dyn Fn(u64, u64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeightFunction")
            .field("kind", &self.kind)
            .field("family", &self.family)
            .finish_non_exhaustive()
    }
}

impl WeightFunction {
    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    /// Evaluates the weight.  Multiplicative weights require both
    /// arguments ≥ 1.
    pub fn eval(&self, a: u64, b: u64) -> f64 {
        if self.kind == SymbolKind::Multiplicative {
            assert!(a >= 1 && b >= 1, "multiplicative weights index from 1");
        }
        (self.eval)(a, b)
    }

    /// The uniform weight of the given kind.
    pub fn uniform(kind: SymbolKind) -> WeightFunction {
        let eval: Arc<dyn Fn(u64, u64) -> f64 + Send + Sync> = match kind {
            SymbolKind::Additive => Arc::new(|i, j| 1.0 / (i + j + 1) as f64),
            SymbolKind::Multiplicative => {
                Arc::new(|m, n| 1.0 / d_alpha_of_product(2.0, m, n).expect("m, n >= 1"))
            }
        };
        WeightFunction { kind, family: WeightFamily::Uniform, eval }
    }

    /// The closed-form two-parameter family; requires `alpha, beta ≥ 1`.
    pub fn alpha_beta(kind: SymbolKind, alpha: f64, beta: f64) -> Result<WeightFunction> {
        if !(alpha >= 1.0) {
            return Err(Error::AlphaBelowOne(alpha));
        }
        if !(beta >= 1.0) {
            return Err(Error::AlphaBelowOne(beta));
        }
        let eval: Arc<dyn Fn(u64, u64) -> f64 + Send + Sync> = match kind {
            SymbolKind::Additive => Arc::new(move |i, j| {
                let i = u32::try_from(i).expect("additive index fits u32");
                let j = u32::try_from(j).expect("additive index fits u32");
                c_alpha(alpha, i).expect("alpha >= 1") * c_alpha(beta, j).expect("beta >= 1")
                    / c_alpha(alpha + beta, i + j).expect("alpha + beta >= 1")
            }),
            SymbolKind::Multiplicative => Arc::new(move |m, n| {
                d_alpha(alpha, m).expect("alpha >= 1") * d_alpha(beta, n).expect("beta >= 1")
                    / d_alpha_of_product(alpha + beta, m, n).expect("alpha + beta >= 1")
            }),
        };
        Ok(WeightFunction { kind, family: WeightFamily::AlphaBeta { alpha, beta }, eval })
    }

    /// Caller-supplied evaluator; validation is the only safety net.
    pub fn custom<F>(kind: SymbolKind, eval: F) -> WeightFunction
    where
        F: Fn(u64, u64) -> f64 + Send + Sync + 'static,
    {
        WeightFunction { kind, family: WeightFamily::Custom, eval: Arc::new(eval) }
    }

    /// Table-backed weight; pairs outside the table evaluate to zero.
    pub fn from_table(kind: SymbolKind, table: BTreeMap<(u64, u64), f64>) -> WeightFunction {
        WeightFunction {
            kind,
            family: WeightFamily::Custom,
            eval: Arc::new(move |a, b| table.get(&(a, b)).copied().unwrap_or(0.0)),
        }
    }
}

/// The additive family `φ_{α,β}`.
pub fn additive_weight_family(alpha: f64, beta: f64) -> Result<WeightFunction> {
    WeightFunction::alpha_beta(SymbolKind::Additive, alpha, beta)
}

/// The multiplicative family `Φ_{α,β}`.
pub fn multiplicative_weight_family(alpha: f64, beta: f64) -> Result<WeightFunction> {
    WeightFunction::alpha_beta(SymbolKind::Multiplicative, alpha, beta)
}

/// Slices a multiplicative weight along the powers of one prime:
/// `φ_p(i,j) = Φ(p^i, p^j)`.  The result satisfies the additive unit-sum
/// condition whenever `Φ` satisfies the multiplicative one, because the
/// divisor pairs of `p^k` are exactly the pairs `(p^i, p^j)` with
/// `i + j = k`.
pub fn local_weight(w: &WeightFunction, p: u64) -> Result<WeightFunction> {
    if w.kind() != SymbolKind::Multiplicative {
        return Err(Error::SymbolKindMismatch {
            expected: SymbolKind::Multiplicative,
            found: w.kind(),
        });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let inner = w.clone();
    Ok(WeightFunction {
        kind: SymbolKind::Additive,
        family: WeightFamily::Custom,
        eval: Arc::new(move |i, j| {
            let pi = p.checked_pow(u32::try_from(i).expect("exponent fits u32"));
            let pj = p.checked_pow(u32::try_from(j).expect("exponent fits u32"));
            match (pi, pj) {
                (Some(a), Some(b)) => inner.eval(a, b),
                _ => panic!("prime power {p}^{} overflows u64", i.max(j)),
            }
        }),
    })
}

/// Outcome of sweeping the unit-sum condition over `k` up to a bound.
#[derive(Debug, Clone)]
pub struct WeightValidation {
    /// Largest |Σ − 1| seen.
    pub max_deviation: f64,
    /// The `k` attaining `max_deviation`.
    pub worst_k: u64,
    /// Every `k` whose deviation exceeds [`WEIGHT_TOLERANCE`].
    pub failing_k: Vec<u64>,
    /// First index pair at which a negative value was evaluated, if any.
    pub negative_at: Option<(u64, u64)>,
}

impl WeightValidation {
    pub fn passes(&self) -> bool {
        self.failing_k.is_empty() && self.negative_at.is_none()
    }
}

struct Sweep {
    sums: Vec<f64>,
    negative_at: Option<(u64, u64)>,
}

impl Sweep {
    fn new(len: usize) -> Self {
        Sweep { sums: vec![0.0; len], negative_at: None }
    }

    fn add(&mut self, slot: usize, a: u64, b: u64, v: f64) {
        if v < 0.0 && self.negative_at.is_none() {
            self.negative_at = Some((a, b));
        }
        self.sums[slot] += v;
    }
}

// Anti-diagonal sums Σ_{i+j=k} φ(i,j) for k = 0..=k_max.  The alpha_beta
// family gets incremental c_α tables so the sweep is O(k_max²) flops
// rather than O(k_max³).
fn additive_sums(w: &WeightFunction, k_max: u64) -> Sweep {
    let km = usize::try_from(k_max).expect("bound fits usize");
    let mut sweep = Sweep::new(km + 1);
    match *w.family() {
        WeightFamily::AlphaBeta { alpha, beta } => {
            let ca = c_alpha_table(alpha, km);
            let cb = c_alpha_table(beta, km);
            let cab = c_alpha_table(alpha + beta, km);
            for k in 0..=km {
                for i in 0..=k {
                    sweep.add(k, i as u64, (k - i) as u64, ca[i] * cb[k - i] / cab[k]);
                }
            }
        }
        _ => {
            for k in 0..=km {
                for i in 0..=k {
                    let (a, b) = (i as u64, (k - i) as u64);
                    sweep.add(k, a, b, w.eval(a, b));
                }
            }
        }
    }
    sweep
}

// Divisor-fiber sums Σ_{mn=k} Φ(m,n) for k = 1..=k_max, accumulated by
// looping over all pairs with m·n ≤ k_max (Σ_k d(k) ≈ k_max·ln k_max
// terms).  Closed-form families evaluate through sieved d_α tables.
fn multiplicative_sums(w: &WeightFunction, k_max: u64) -> Sweep {
    let km = usize::try_from(k_max).expect("bound fits usize");
    let mut sweep = Sweep::new(km);
    let tables = match *w.family() {
        WeightFamily::AlphaBeta { alpha, beta } => Some((
            d_alpha_table(alpha, km).expect("alpha >= 1"),
            d_alpha_table(beta, km).expect("beta >= 1"),
            d_alpha_table(alpha + beta, km).expect("alpha + beta >= 1"),
        )),
        WeightFamily::Uniform => {
            let d2 = d_alpha_table(2.0, km).expect("alpha = 2");
            let ones = vec![1.0; km + 1];
            Some((ones.clone(), ones, d2))
        }
        WeightFamily::Custom => None,
    };
    for m in 1..=km {
        for n in 1..=km / m {
            let v = match &tables {
                Some((da, db, dab)) => da[m] * db[n] / dab[m * n],
                None => w.eval(m as u64, n as u64),
            };
            sweep.add(m * n - 1, m as u64, n as u64, v);
        }
    }
    sweep
}

/// Sweeps the defining unit-sum condition for every `k ≤ k_max`
/// (`k` from 0 for additive weights, from 1 for multiplicative ones) and
/// reports the deviations.  A weight passes iff every deviation is within
/// [`WEIGHT_TOLERANCE`] and no negative value was seen.
pub fn validate_weight(w: &WeightFunction, k_max: u64) -> WeightValidation {
    assert!(k_max >= 1, "validation bound must be positive");
    let (start, sweep) = match w.kind() {
        SymbolKind::Additive => (0u64, additive_sums(w, k_max)),
        SymbolKind::Multiplicative => (1u64, multiplicative_sums(w, k_max)),
    };
    let mut max_deviation = 0.0f64;
    let mut worst_k = start;
    let mut failing_k = Vec::new();
    for (idx, &sum) in sweep.sums.iter().enumerate() {
        let k = start + idx as u64;
        let dev = (sum - 1.0).abs();
        if dev > max_deviation {
            max_deviation = dev;
            worst_k = k;
        }
        if dev > WEIGHT_TOLERANCE {
            failing_k.push(k);
        }
    }
    WeightValidation { max_deviation, worst_k, failing_k, negative_at: sweep.negative_at }
}

fn c_alpha_table(alpha: f64, j_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(j_max + 1);
    let mut value = 1.0f64;
    out.push(value);
    for i in 1..=j_max {
        value *= (alpha - 1.0 + i as f64) / i as f64;
        out.push(value);
    }
    out
}

fn require_origin(a: &ComplexMatrix, expected: IndexOrigin) -> Result<()> {
    if a.origin() != expected {
        return Err(Error::OriginMismatch { expected, found: a.origin() });
    }
    Ok(())
}

fn require_weight_valid(w: &WeightFunction, k_max: u64) -> Result<()> {
    let report = validate_weight(w, k_max);
    if let Some((a, b)) = report.negative_at {
        return Err(Error::Config(format!("weight is negative at ({a}, {b})")));
    }
    if !report.passes() {
        return Err(Error::WeightInvalid {
            k: report.failing_k[0],
            deviation: report.max_deviation,
        });
    }
    Ok(())
}

/// Averaging projection onto Hankel symbols:
/// `γ_k = (1/(k+1))·Σ_{i+j=k} a_{i,j}`, entries outside the matrix read
/// as zero but the divisor is always the full anti-diagonal length `k+1`.
pub fn hankel_average(a: &ComplexMatrix) -> Result<SymbolSequence> {
    require_origin(a, IndexOrigin::Zero)?;
    let mut gamma = SymbolSequence::additive();
    for k in 0..=(a.rows() + a.cols() - 2) {
        let mut sum = Complex64::new(0.0, 0.0);
        for i in k.saturating_sub(a.cols() - 1)..=k.min(a.rows() - 1) {
            sum += a.entry(i, k - i);
        }
        gamma.set(k as u64, sum / (k + 1) as f64)?;
    }
    Ok(gamma)
}

/// Weighted averaging projection onto Hankel symbols:
/// `γ_k = Σ_{i+j=k} φ(i,j)·a_{i,j}`.
///
/// The weight is validated on every anti-diagonal the input touches
/// (`k ≤ rows+cols−2`) before any averaging happens.
pub fn hankel_weighted_average(a: &ComplexMatrix, w: &WeightFunction) -> Result<SymbolSequence> {
    require_origin(a, IndexOrigin::Zero)?;
    if w.kind() != SymbolKind::Additive {
        return Err(Error::SymbolKindMismatch {
            expected: SymbolKind::Additive,
            found: w.kind(),
        });
    }
    let k_top = a.rows() + a.cols() - 2;
    require_weight_valid(w, (k_top as u64).max(1))?;
    let mut gamma = SymbolSequence::additive();
    for k in 0..=k_top {
        let mut sum = Complex64::new(0.0, 0.0);
        for i in k.saturating_sub(a.cols() - 1)..=k.min(a.rows() - 1) {
            let v = a.entry(i, k - i);
            if v != Complex64::new(0.0, 0.0) {
                sum += v * w.eval(i as u64, (k - i) as u64);
            }
        }
        gamma.set(k as u64, sum)?;
    }
    Ok(gamma)
}

/// Averaging projection onto Helson symbols:
/// `ρ_k = (1/d(k))·Σ_{mn=k} a_{m,n}`, with the full divisor count in the
/// denominator regardless of how much of the fiber the matrix covers.
pub fn helson_average(a: &ComplexMatrix) -> Result<SymbolSequence> {
    require_origin(a, IndexOrigin::One)?;
    let mut fibers: BTreeMap<u64, Complex64> = BTreeMap::new();
    for m in 1..=a.rows() {
        for n in 1..=a.cols() {
            let v = a.entry(m, n);
            if v != Complex64::new(0.0, 0.0) {
                *fibers.entry((m * n) as u64).or_insert(Complex64::new(0.0, 0.0)) += v;
            }
        }
    }
    let mut rho = SymbolSequence::multiplicative();
    for (k, sum) in fibers {
        rho.set(k, sum / divisor_count(k)? as f64)?;
    }
    Ok(rho)
}

/// Weighted averaging projection onto Helson symbols:
/// `ρ_k = Σ_{mn=k} Φ(m,n)·a_{m,n}`.
///
/// The weight is validated on every fiber the input can touch
/// (`k ≤ rows·cols`) before any averaging happens; closed-form families
/// sweep through sieved tables so this stays cheap even for ~10⁶ fibers.
pub fn helson_weighted_average(a: &ComplexMatrix, w: &WeightFunction) -> Result<SymbolSequence> {
    require_origin(a, IndexOrigin::One)?;
    if w.kind() != SymbolKind::Multiplicative {
        return Err(Error::SymbolKindMismatch {
            expected: SymbolKind::Multiplicative,
            found: w.kind(),
        });
    }
    require_weight_valid(w, (a.rows() * a.cols()) as u64)?;
    let mut fibers: BTreeMap<u64, Complex64> = BTreeMap::new();
    for m in 1..=a.rows() {
        for n in 1..=a.cols() {
            let v = a.entry(m, n);
            if v != Complex64::new(0.0, 0.0) {
                let weight = w.eval(m as u64, n as u64);
                *fibers.entry((m * n) as u64).or_insert(Complex64::new(0.0, 0.0)) +=
                    v * weight;
            }
        }
    }
    let mut rho = SymbolSequence::multiplicative();
    for (k, sum) in fibers {
        rho.set(k, sum)?;
    }
    Ok(rho)
}

/// Realizes a finitely supported symbol as the smallest truncation that
/// contains every nonzero entry of the corresponding infinite matrix:
/// `(S+1)×(S+1)` for an additive symbol with support bound `S` (the whole
/// anti-diagonal `S` fits), `S×S` for a multiplicative one (every divisor
/// pair of every supported `k ≤ S` fits).  The zero symbol gives a 1×1
/// zero matrix.
pub fn projection_output_matrix(symbol: &SymbolSequence) -> Result<ComplexMatrix> {
    match symbol.kind() {
        SymbolKind::Additive => {
            let s = symbol.support_bound().unwrap_or(0);
            let n = usize::try_from(s + 1).map_err(|_| {
                Error::IndexOverflow(format!("support bound {s} exceeds usize"))
            })?;
            hankel_truncation(symbol, n)
        }
        SymbolKind::Multiplicative => {
            let s = symbol.support_bound().unwrap_or(1).max(1);
            let n = usize::try_from(s)
                .map_err(|_| Error::IndexOverflow(format!("support bound {s} exceeds usize")))?;
            helson_truncation(symbol, n)
        }
    }
}

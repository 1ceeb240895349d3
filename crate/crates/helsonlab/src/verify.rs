//! Seeded self-check suite: every structural invariant the library relies
//! on, exercised at desk scale with reproducible randomness.
//!
//! Each check reports the worst deviation it observed together with the
//! tolerance it was held to, so a near-miss caused by numerical precision
//! is distinguishable from a logic break.  The whole suite is a pure
//! function of the seed.


use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{
    c_alpha, check_multiplicative_pair, convolve, d_alpha, d_alpha_of_product, divisor_count,
    factorize, first_primes, is_prime, Factorization,
};
use crate::bounds::{
    best_ratio_at_prime, blowup_experiment, closed_form_spectrum, default_t_grid, estimate,
    solve_uniform_bound, test_matrix, BlowupMode, TestMatrixTag, WeightTriple,
};
use crate::projections::{
    hankel_average, hankel_weighted_average, helson_average, helson_weighted_average,
    local_weight, multiplicative_weight_family, projection_output_matrix,
};
use crate::schatten::{
    dyadic_embed, hankel_truncation, helson_truncation, multiplicative_assemble, restrict_prime,
    schatten_norm, singular_values, trace_pairing, ComplexMatrix, IndexOrigin, LocalBlockFamily,
    SymbolKind, SymbolSequence,
};

/// One invariant check: its identity, the tolerance it was held to, and
/// the worst deviation observed over all sampled cases.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Worst |deviation| seen; infinite when a case failed structurally.
    pub deviation: f64,
    pub tolerance: f64,
    /// Number of sampled cases.
    pub cases: usize,
    /// Scope of the sweep and, if nonzero, where the worst case sat.
    pub detail: String,
}

struct Recorder {
    name: &'static str,
    tolerance: f64,
    scope: String,
    worst: f64,
    worst_at: String,
    cases: usize,
}

impl Recorder {
    fn new(name: &'static str, tolerance: f64, scope: impl Into<String>) -> Self {
        Recorder {
            name,
            tolerance,
            scope: scope.into(),
            worst: 0.0,
            worst_at: String::new(),
            cases: 0,
        }
    }

    fn observe(&mut self, deviation: f64, at: impl FnOnce() -> String) {
        self.cases += 1;
        let deviation = if deviation.is_nan() { f64::INFINITY } else { deviation };
        if deviation > self.worst || self.worst_at.is_empty() {
            self.worst = self.worst.max(deviation);
            self.worst_at = at();
        }
    }

    /// Records a structural failure (an `Err` where an `Ok` was required).
    fn fail(&mut self, at: impl FnOnce() -> String) {
        self.observe(f64::INFINITY, at);
    }

    fn finish(self) -> CheckOutcome {
        let detail = if self.worst_at.is_empty() {
            self.scope
        } else {
            format!("{}; worst at {}", self.scope, self.worst_at)
        };
        CheckOutcome {
            name: self.name,
            passed: self.worst <= self.tolerance,
            deviation: self.worst,
            tolerance: self.tolerance,
            cases: self.cases,
            detail,
        }
    }
}

/// Runs the full suite; the report is deterministic in the seed.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    let checks: Vec<fn(u64) -> CheckOutcome> = vec![
        check_divisor_counts,
        check_d_alpha_prime_powers,
        check_pair_convolution,
        check_factorization_round_trip,
        check_cross_norm,
        check_restriction_contracts,
        check_hilbert_schmidt_consistency,
        check_structured_truncations,
        check_dyadic_isometry,
        check_assembly_multiplicative,
        check_projection_idempotent,
        check_uniform_projection_orthogonal,
        check_pairing_sees_only_projection,
        check_projection_commutes_with_embedding,
        check_projection_respects_blocks,
        check_spectra_match_numerics,
        check_estimate_never_exceeds_search,
        check_bound_beneath_estimates,
        check_blowup_certified_growth,
        check_branches_stay_continuous,
        check_solver_matches_analytic_q1,
    ];
    checks
        .iter()
        .enumerate()
        .map(|(i, f)| f(seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))))
        .collect()
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, origin: IndexOrigin) -> ComplexMatrix {
    let off = match origin {
        IndexOrigin::Zero => 0,
        IndexOrigin::One => 1,
    };
    let mut m = ComplexMatrix::zeros(rows, cols, origin);
    for i in off..rows + off {
        for j in off..cols + off {
            m.set_entry(i, j, random_complex(rng));
        }
    }
    m
}

fn random_symbol(rng: &mut ChaCha8Rng, kind: SymbolKind, entries: usize, max_index: u64) -> SymbolSequence {
    let lo = match kind {
        SymbolKind::Additive => 0,
        SymbolKind::Multiplicative => 1,
    };
    let mut s = SymbolSequence::new(kind);
    for _ in 0..entries {
        let k = rng.random_range(lo..=max_index);
        s.set(k, random_complex(rng)).expect("index in range");
    }
    s
}

/// Random block for multiplicative assembly: unit at (0,0), free elsewhere.
fn random_unital_block(rng: &mut ChaCha8Rng, size: usize) -> ComplexMatrix {
    let mut b = random_matrix(rng, size, size, IndexOrigin::Zero);
    b.set_entry(0, 0, Complex64::new(1.0, 0.0));
    b
}

// ---------------------------------------------------------------------
// Integer kernel.
// ---------------------------------------------------------------------

fn check_divisor_counts(_seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new("divisor-count-matches-d2", 0.0, "n <= 10000, exact");
    for n in 1..=10_000u64 {
        let counted = divisor_count(n).expect("positive n") as f64;
        let smooth = d_alpha(2.0, n).expect("positive n");
        rec.observe((smooth - counted).abs(), || format!("n = {n}"));
    }
    rec.finish()
}

fn check_d_alpha_prime_powers(_seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "d-alpha-on-prime-powers",
        1e-12,
        "p <= 100, j <= 10, alpha in {1, 1.5, 2, 3}, relative",
    );
    let primes: Vec<u64> = first_primes(25); // all primes up to 100
    for &alpha in &[1.0, 1.5, 2.0, 3.0] {
        for &p in &primes {
            for j in 1..=10u32 {
                let expect = c_alpha(alpha, j).expect("alpha >= 1");
                // Split the exponent so both factors fit in u64 even for
                // p^10 > 2^63; the merged evaluation sees the full power.
                let lo = j / 2;
                let hi = j - lo;
                let got = d_alpha_of_product(alpha, p.pow(lo), p.pow(hi)).expect("fits");
                let mut dev = (got - expect).abs() / expect.max(1.0);
                if let Some(n) = p.checked_pow(j) {
                    let direct = d_alpha(alpha, n).expect("fits");
                    dev = dev.max((direct - expect).abs() / expect.max(1.0));
                }
                rec.observe(dev, || format!("alpha = {alpha}, p = {p}, j = {j}"));
            }
        }
    }
    rec.finish()
}

/// Order-independent pseudo-random unit in [0, 1) keyed by (seed, a, b).
fn hashed_unit(seed: u64, a: u64, b: u64) -> f64 {
    let mut x = seed
        ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ b.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    (x >> 11) as f64 / (1u64 << 53) as f64
}

/// Tabulates a multiplicative function with hashed values on prime powers,
/// |f(p^e)| in [0.3, 1], so convolved values stay exactly computable.
fn hashed_multiplicative_table(seed: u64, facts: &[Factorization]) -> Vec<Complex64> {
    facts
        .iter()
        .map(|f| {
            f.factors()
                .iter()
                .map(|&(p, e)| {
                    let r = 0.3 + 0.7 * hashed_unit(seed, p, u64::from(e));
                    let theta = std::f64::consts::TAU
                        * hashed_unit(seed ^ 0x5bf0_3635_9f7a_11c3, p, u64::from(e));
                    Complex64::from_polar(r, theta)
                })
                .product()
        })
        .collect()
}

fn check_pair_convolution(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "pair-convolution-multiplicative",
        1e-10,
        "20 random multiplicative pair functions, coprime k < l <= 200, relative",
    );
    let bound = 200u64;
    let max_product = (bound * bound) as usize;
    let facts: Vec<Factorization> = (0..=max_product as u64)
        .map(|n| factorize(n.max(1)).expect("positive"))
        .collect();
    let coprime_pairs: Vec<(u64, u64)> = (2..=bound)
        .flat_map(|k| (k + 1..=bound).map(move |l| (k, l)))
        .filter(|&(k, l)| num_integer::gcd(k, l) == 1)
        .collect();
    for instance in 0..20u64 {
        let g = hashed_multiplicative_table(seed.wrapping_add(instance * 2), &facts);
        let h = hashed_multiplicative_table(seed.wrapping_add(instance * 2 + 1), &facts);
        let f = |m: u64, n: u64| g[m as usize] * h[n as usize];
        let convolved: Vec<Complex64> = (0..=bound)
            .map(|k| convolve(f, k.max(1)).expect("positive"))
            .collect();
        for &(k, l) in &coprime_pairs {
            let joint = convolve(f, k * l).expect("positive");
            let split = convolved[k as usize] * convolved[l as usize];
            let dev = (joint - split).norm() / (1.0 + split.norm());
            rec.observe(dev, || format!("instance {instance}, k = {k}, l = {l}"));
        }
    }
    rec.finish()
}

fn check_factorization_round_trip(_seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "factorization-round-trip",
        0.0,
        "n <= 100000: prime factors, ascending, reassemble to n",
    );
    for n in 1..=100_000u64 {
        let f = factorize(n).expect("positive n");
        let mut ok = f.value() == n && f.reassemble() == n;
        let mut last = 0u64;
        for &(p, e) in f.factors() {
            ok &= is_prime(p) && e >= 1 && p > last;
            last = p;
        }
        rec.observe(if ok { 0.0 } else { 1.0 }, || format!("n = {n}"));
    }
    rec.finish()
}

// ---------------------------------------------------------------------
// Spectral toolkit.
// ---------------------------------------------------------------------

const Q_GRID: [f64; 5] = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];

fn check_cross_norm(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "kronecker-cross-norm",
        1e-9,
        "100 random pairs up to 3x3, q in {1, 1.5, 2, 3, inf}, relative",
    );
    let mut rng = rng_for(seed);
    for case in 0..100 {
        let (ra, ca) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let (rb, cb) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let a = random_matrix(&mut rng, ra, ca, IndexOrigin::Zero);
        let b = random_matrix(&mut rng, rb, cb, IndexOrigin::Zero);
        let tensor = crate::schatten::kron(&a, &b).expect("tiny");
        for &q in &Q_GRID {
            let product = schatten_norm(&a, q).expect("valid q") * schatten_norm(&b, q).expect("valid q");
            let joint = schatten_norm(&tensor, q).expect("valid q");
            let dev = (joint - product).abs() / (1.0 + product);
            rec.observe(dev, || format!("case {case}, q = {q}"));
        }
    }
    rec.finish()
}

fn check_restriction_contracts(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "prime-restriction-contracts",
        1e-10,
        "30 random matrices up to 30x30, p in {2, 3, 5}, relative excess",
    );
    let mut rng = rng_for(seed);
    for case in 0..30 {
        let rows = rng.random_range(27..=30);
        let cols = rng.random_range(27..=30);
        let a = random_matrix(&mut rng, rows, cols, IndexOrigin::One);
        for &(p, depth) in &[(2u64, 4usize), (3, 3), (5, 3)] {
            let restricted = restrict_prime(&a, p, depth).expect("depth fits");
            for &q in &Q_GRID {
                let whole = schatten_norm(&a, q).expect("valid q");
                let part = schatten_norm(&restricted, q).expect("valid q");
                let dev = (part - whole).max(0.0) / (1.0 + whole);
                rec.observe(dev, || format!("case {case}, p = {p}, q = {q}"));
            }
        }
    }
    rec.finish()
}

fn check_hilbert_schmidt_consistency(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "hilbert-schmidt-consistency",
        1e-10,
        "50 random matrices up to 12x12: pairing(A, A) = norm_2(A)^2, relative",
    );
    let mut rng = rng_for(seed);
    for case in 0..50 {
        let (rows, cols) = (rng.random_range(2..=12), rng.random_range(2..=12));
        let a = random_matrix(&mut rng, rows, cols, IndexOrigin::Zero);
        let hs = schatten_norm(&a, 2.0).expect("q = 2");
        let self_pairing = trace_pairing(&a, &a).expect("same shape");
        let dev = ((self_pairing.re - hs * hs).abs() + self_pairing.im.abs()) / (1.0 + hs * hs);
        rec.observe(dev, || format!("case {case}"));
    }
    rec.finish()
}

fn check_structured_truncations(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "structured-truncation-entries",
        0.0,
        "entries follow i+j (Hankel) and m*n (Helson) exactly",
    );
    let mut rng = rng_for(seed);
    for case in 0..20 {
        let gamma = random_symbol(&mut rng, SymbolKind::Additive, 12, 30);
        let n = rng.random_range(4..=16);
        let hankel = hankel_truncation(&gamma, n).expect("under cap");
        for i in 0..n {
            for j in 0..n {
                let dev = (hankel.entry(i, j) - gamma.get((i + j) as u64)).norm();
                rec.observe(dev, || format!("hankel case {case}, ({i}, {j})"));
            }
        }
        let rho = random_symbol(&mut rng, SymbolKind::Multiplicative, 15, 60);
        let n = rng.random_range(4..=20);
        let helson = helson_truncation(&rho, n).expect("under cap");
        for m in 1..=n {
            for k in 1..=n {
                let dev = (helson.entry(m, k) - rho.get((m * k) as u64)).norm();
                rec.observe(dev, || format!("helson case {case}, ({m}, {k})"));
            }
        }
    }
    rec.finish()
}

fn check_dyadic_isometry(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "dyadic-embedding-isometry",
        1e-10,
        "30 random matrices up to 6x6, q in {1, 1.7, 2, inf}, relative",
    );
    let mut rng = rng_for(seed);
    for case in 0..30 {
        let (rows, cols) = (rng.random_range(2..=6), rng.random_range(2..=6));
        let a = random_matrix(&mut rng, rows, cols, IndexOrigin::Zero);
        let embedded = dyadic_embed(&a).expect("under cap");
        for &q in &[1.0, 1.7, 2.0, f64::INFINITY] {
            let original = schatten_norm(&a, q).expect("valid q");
            let moved = schatten_norm(&embedded, q).expect("valid q");
            let dev = (moved - original).abs() / (1.0 + original);
            rec.observe(dev, || format!("case {case}, q = {q}"));
        }
    }
    rec.finish()
}

fn check_assembly_multiplicative(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "assembled-blocks-are-pair-multiplicative",
        0.0,
        "10 random block families on {2, 3, 5}, checked on [1, 30]^2",
    );
    let mut rng = rng_for(seed);
    for case in 0..10 {
        let blocks = LocalBlockFamily::new(vec![
            (2, random_unital_block(&mut rng, 3)),
            (3, random_unital_block(&mut rng, 2)),
            (5, random_unital_block(&mut rng, 2)),
        ])
        .expect("valid family");
        let assembled = multiplicative_assemble(&blocks, 30).expect("under cap");
        let f = |m: u64, n: u64| assembled.entry(m as usize, n as usize);
        let ok = check_multiplicative_pair(f, 30, 1e-10);
        rec.observe(if ok { 0.0 } else { 1.0 }, || format!("case {case}"));
    }
    rec.finish()
}

// ---------------------------------------------------------------------
// Averaging projections.
// ---------------------------------------------------------------------

fn check_projection_idempotent(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "weighted-projection-idempotent",
        1e-12,
        "40 random symbols, alpha/beta in [1, 3]: project(realize(s)) = s",
    );
    let mut rng = rng_for(seed);
    for case in 0..20 {
        let alpha = rng.random_range(1.0..3.0);
        let beta = rng.random_range(1.0..3.0);

        let gamma = random_symbol(&mut rng, SymbolKind::Additive, 11, 25);
        let w = crate::projections::additive_weight_family(alpha, beta).expect("alpha >= 1");
        let realized = projection_output_matrix(&gamma).expect("under cap");
        let back = hankel_weighted_average(&realized, &w).expect("valid weight");
        rec.observe(back.max_abs_diff(&gamma).unwrap_or(f64::INFINITY), || {
            format!("additive case {case}")
        });

        let rho = random_symbol(&mut rng, SymbolKind::Multiplicative, 8, 60);
        let w = multiplicative_weight_family(alpha, beta).expect("alpha >= 1");
        let realized = projection_output_matrix(&rho).expect("under cap");
        let back = helson_weighted_average(&realized, &w).expect("valid weight");
        rec.observe(back.max_abs_diff(&rho).unwrap_or(f64::INFINITY), || {
            format!("multiplicative case {case}")
        });
    }
    rec.finish()
}

fn hankel_basis(k: u64, n: usize) -> ComplexMatrix {
    let mut e = SymbolSequence::additive();
    e.set(k, Complex64::new(1.0, 0.0)).expect("additive index");
    hankel_truncation(&e, n).expect("under cap")
}

fn helson_basis(k: u64, n: usize) -> ComplexMatrix {
    let mut e = SymbolSequence::multiplicative();
    e.set(k, Complex64::new(1.0, 0.0)).expect("k >= 1");
    helson_truncation(&e, n).expect("under cap")
}

fn check_uniform_projection_orthogonal(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "uniform-projection-orthogonal-at-2",
        1e-10,
        "30 random matrices up to 8x8: A - PA pairs to zero with every structured basis matrix",
    );
    let mut rng = rng_for(seed);
    for case in 0..15 {
        // Hankel side: realize everything at (S+1) x (S+1) so each
        // anti-diagonal k <= S lies fully inside the window.
        let rows = rng.random_range(2..=8);
        let cols = rng.random_range(2..=8);
        let a = random_matrix(&mut rng, rows, cols, IndexOrigin::Zero);
        let scale = 1.0 + schatten_norm(&a, 2.0).expect("q = 2");
        let span = rows + cols - 1;
        let projected = hankel_truncation(&hankel_average(&a).expect("nonempty"), span).expect("under cap");
        let residual = a.padded(span, span).sub(&projected).expect("same frame");
        for k in 0..span as u64 {
            let pairing = trace_pairing(&residual, &hankel_basis(k, span)).expect("same frame");
            rec.observe(pairing.norm() / scale, || format!("hankel case {case}, k = {k}"));
        }

        // Helson side: realize at (rows*cols) x (rows*cols) so each divisor
        // fiber k <= rows*cols is complete.
        let rows = rng.random_range(2..=8);
        let cols = rng.random_range(2..=8);
        let a = random_matrix(&mut rng, rows, cols, IndexOrigin::One);
        let scale = 1.0 + schatten_norm(&a, 2.0).expect("q = 2");
        let span = rows * cols;
        let projected = helson_truncation(&helson_average(&a).expect("nonempty"), span).expect("under cap");
        let residual = a.padded(span, span).sub(&projected).expect("same frame");
        for k in 1..=span as u64 {
            let pairing = trace_pairing(&residual, &helson_basis(k, span)).expect("same frame");
            rec.observe(pairing.norm() / scale, || format!("helson case {case}, k = {k}"));
        }
    }
    rec.finish()
}

fn check_pairing_sees_only_projection(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "pairing-sees-only-the-projection",
        1e-10,
        "20 random pairs: pairing of a Helson matrix with A equals pairing with the projection of A, relative",
    );
    let mut rng = rng_for(seed);
    for case in 0..20 {
        let rows = rng.random_range(10..=20);
        let cols = rng.random_range(10..=20);
        let mut a = ComplexMatrix::zeros(rows, cols, IndexOrigin::One);
        for _ in 0..40 {
            let m = rng.random_range(1..=rows);
            let n = rng.random_range(1..=cols);
            a.set_entry(m, n, random_complex(&mut rng));
        }
        let rho = random_symbol(&mut rng, SymbolKind::Multiplicative, 40, 400);
        let span = (rows * cols).max(rho.support_bound().unwrap_or(1) as usize);
        let helson = helson_truncation(&rho, span).expect("under cap");
        let direct = trace_pairing(&helson, &a.padded(span, span)).expect("same frame");
        let projected = helson_truncation(&helson_average(&a).expect("nonempty"), span).expect("under cap");
        let through = trace_pairing(&helson, &projected).expect("same frame");
        let dev = (direct - through).norm() / (1.0 + direct.norm());
        rec.observe(dev, || format!("case {case}"));
    }
    rec.finish()
}

fn check_projection_commutes_with_embedding(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "projection-commutes-with-dyadic-embedding",
        1e-12,
        "25 random matrices up to 6x6: project(embed(A)) = embed(project(A))",
    );
    let mut rng = rng_for(seed);
    let alphas = [1.0, 1.5, 2.0, 3.0];
    for case in 0..25 {
        let (rows, cols) = (rng.random_range(2..=6), rng.random_range(2..=6));
        let a = random_matrix(&mut rng, rows, cols, IndexOrigin::Zero);
        let alpha = alphas[rng.random_range(0..alphas.len())];
        let beta = alphas[rng.random_range(0..alphas.len())];
        let big = multiplicative_weight_family(alpha, beta).expect("alpha >= 1");
        let small = local_weight(&big, 2).expect("prime");

        let embedded = dyadic_embed(&a).expect("under cap");
        let through_embedding = helson_weighted_average(&embedded, &big).expect("valid weight");
        let through_projection = hankel_weighted_average(&a, &small).expect("valid weight");

        // The embedded projection lives on powers of two; translate and compare.
        let mut relocated = SymbolSequence::multiplicative();
        for (k, v) in through_projection.support() {
            relocated.set(1u64 << k, v).expect("power of two");
        }
        let dev = through_embedding.max_abs_diff(&relocated).unwrap_or(f64::INFINITY);
        rec.observe(dev, || format!("case {case}, alpha = {alpha}, beta = {beta}"));
    }
    rec.finish()
}

fn check_projection_respects_blocks(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "projection-respects-tensor-blocks",
        1e-12,
        "15 random two-prime assemblies: restricting the projection = projecting the restriction",
    );
    let mut rng = rng_for(seed);
    let alphas = [1.0, 1.5, 2.0, 3.0];
    for case in 0..15 {
        let blocks = LocalBlockFamily::new(vec![
            (2, random_unital_block(&mut rng, 3)),
            (3, random_unital_block(&mut rng, 2)),
        ])
        .expect("valid family");
        let assembled = multiplicative_assemble(&blocks, 12).expect("under cap");
        let alpha = alphas[rng.random_range(0..alphas.len())];
        let beta = alphas[rng.random_range(0..alphas.len())];
        let big = multiplicative_weight_family(alpha, beta).expect("alpha >= 1");

        let projected = helson_truncation(
            &helson_weighted_average(&assembled, &big).expect("valid weight"),
            12,
        )
        .expect("under cap");
        let lhs = restrict_prime(&projected, 2, 3).expect("depth fits");

        let local_matrix = restrict_prime(&assembled, 2, 3).expect("depth fits");
        let small = local_weight(&big, 2).expect("prime");
        let rhs = hankel_truncation(
            &hankel_weighted_average(&local_matrix, &small).expect("valid weight"),
            3,
        )
        .expect("under cap");

        let dev = lhs.max_abs_diff(&rhs).expect("same frame");
        rec.observe(dev, || format!("case {case}, alpha = {alpha}, beta = {beta}"));
    }
    rec.finish()
}

// ---------------------------------------------------------------------
// Lower-bound machinery.
// ---------------------------------------------------------------------

fn check_spectra_match_numerics(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "spectra-match-numerics",
        1e-10,
        "4 tags x 50 random t in [0, 10]: closed-form vs numeric singular values",
    );
    let mut rng = rng_for(seed);
    let tags = [TestMatrixTag::A, TestMatrixTag::B, TestMatrixTag::C, TestMatrixTag::D];
    for case in 0..50 {
        let t = rng.random_range(0.0..10.0);
        for &tag in &tags {
            let closed = closed_form_spectrum(tag, t).expect("t >= 0");
            let numeric = singular_values(&test_matrix(tag, t).expect("t >= 0"));
            rec.observe(closed.max_abs_diff(&numeric), || {
                format!("case {case}, tag {tag:?}, t = {t:.6}")
            });
        }
    }
    rec.finish()
}

fn random_triple(rng: &mut ChaCha8Rng) -> WeightTriple {
    loop {
        let a = rng.random_range(0.0..1.0);
        let b = rng.random_range(0.0..1.0);
        let c = rng.random_range(0.0..1.0);
        let sum = a + b + c;
        if sum > 1e-3 {
            return WeightTriple::new(a / sum, b / sum, c / sum).expect("convex");
        }
    }
}

const Q_OFF_TWO: [f64; 8] = [1.0, 1.2, 1.5, 1.9, 2.1, 3.0, 4.0, 8.0];

fn check_estimate_never_exceeds_search(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "estimate-never-exceeds-search",
        1e-9,
        "200 random weight triples x 8 exponents: ratio search reaches the closed-form estimate",
    );
    let mut rng = rng_for(seed);
    let grid = default_t_grid();
    for case in 0..200 {
        let triple = random_triple(&mut rng);
        for &q in &Q_OFF_TWO {
            let promised = estimate(q, &triple).expect("branch ok");
            let found = best_ratio_at_prime(q, &triple, &grid).expect("branch ok").ratio;
            rec.observe((promised - found).max(0.0), || {
                format!("case {case}, q = {q}, triple = ({:.4}, {:.4}, {:.4})", triple.phi0(), triple.phi1(), triple.phi2())
            });
        }
    }
    rec.finish()
}

fn check_bound_beneath_estimates(seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "uniform-bound-beneath-estimates",
        1e-9,
        "200 random weight triples x 8 exponents: every estimate clears the weight-independent bound",
    );
    let mut rng = rng_for(seed);
    for case in 0..200 {
        let triple = random_triple(&mut rng);
        for &q in &Q_OFF_TWO {
            let floor = solve_uniform_bound(q, 1e-12).expect("branch ok").uniform_bound;
            let promised = estimate(q, &triple).expect("branch ok");
            rec.observe((floor - promised).max(0.0), || {
                format!("case {case}, q = {q}")
            });
        }
    }
    rec.finish()
}

fn check_blowup_certified_growth(_seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "blowup-certified-growth",
        1e-9,
        "q in {1, 1.5, 3}, two weight families, 12 primes: totals clear the certified floor, relative",
    );
    for &q in &[1.0, 1.5, 3.0] {
        for &(alpha, beta) in &[(1.0, 1.0), (2.0, 3.0)] {
            let weight = multiplicative_weight_family(alpha, beta).expect("alpha >= 1");
            let outcome = blowup_experiment(q, &weight, 12, BlowupMode::Product).expect("branch ok");
            let mut previous = 1.0f64;
            for step in &outcome.steps {
                let total = step.total_ratio.expect("product mode never skips");
                let shortfall = (step.floor - total).max(0.0) / step.floor;
                rec.observe(shortfall, || {
                    format!("q = {q}, alpha = {alpha}, beta = {beta}, prime {}", step.prime)
                });
                let monotone = (previous * outcome.bound.uniform_bound - total).max(0.0) / total;
                rec.observe(monotone, || {
                    format!("q = {q}, alpha = {alpha}, beta = {beta}, prime {} (monotone)", step.prime)
                });
                previous = total;
            }
        }
    }
    rec.finish()
}

fn check_branches_stay_continuous(_seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "bound-branches-stay-continuous",
        0.0,
        "q = 2 +/- 10^-k, k <= 4: log-scale bound stays finite and decays toward 2",
    );
    for &side in &[-1.0f64, 1.0] {
        let mut last = f64::INFINITY;
        for k in 1..=4 {
            let q = 2.0 + side * 10f64.powi(-k);
            match solve_uniform_bound(q, 1e-12) {
                Ok(result) => {
                    let bad = !result.ln_delta.is_finite() || result.ln_delta >= last;
                    rec.observe(if bad { 1.0 } else { 0.0 }, || format!("q = {q}"));
                    last = result.ln_delta;
                }
                Err(e) => rec.fail(|| format!("q = {q}: {e}")),
            }
        }
    }
    // The solver must find exactly one crossing everywhere on both branches.
    for i in 0..60 {
        let q = 1.0 + 0.015 * f64::from(i);
        if (q - 2.0).abs() < 1e-9 {
            continue;
        }
        match solve_uniform_bound(q, 1e-12) {
            Ok(result) => rec.observe(
                if result.x_q > 0.0 && result.x_q < 1.0 { 0.0 } else { 1.0 },
                || format!("q = {q}"),
            ),
            Err(e) => rec.fail(|| format!("q = {q}: {e}")),
        }
    }
    rec.finish()
}

fn check_solver_matches_analytic_q1(_seed: u64) -> CheckOutcome {
    let mut rec = Recorder::new(
        "solver-matches-analytic-q1",
        1e-12,
        "q = 1: crossing point and bound against the exact radical expressions",
    );
    let root11 = 11f64.sqrt();
    let x_exact = (18.0 - 2.0 * root11) / 35.0;
    let bound_exact = (3.0 / 35.0) * (4.0 * root11 - 1.0);
    match solve_uniform_bound(1.0, 1e-12) {
        Ok(result) => {
            rec.observe((result.x_q - x_exact).abs(), || "crossing point".to_string());
            rec.observe((result.uniform_bound - bound_exact).abs(), || "bound".to_string());
        }
        Err(e) => rec.fail(|| format!("q = 1: {e}")),
    }
    rec.finish()
}

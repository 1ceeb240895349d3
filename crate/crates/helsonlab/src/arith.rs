//! Exact integer and multiplicative-function machinery.
//!
//! Deterministic trial-division arithmetic: prime factorizations, divisor
//! enumeration, the generalized binomial coefficient
//! `c_α(j) = binom(j+α−1, j)` and the generalized divisor function `d_α`
//! (the Dirichlet-series coefficients of `ζ^α`, extended multiplicatively
//! from `d_α(p^j) = c_α(j)`), plus checks for multiplicativity of
//! two-variable arithmetic functions and the divisor-fiber convolution
//! `F(k) = Σ_{mn=k} f(m, n)`.
//!
//! Inputs stay well below 10⁹ at the scales this crate runs, so trial
//! division is used throughout; there is no probabilistic primality
//! machinery.

use num_complex::Complex64;
use num_integer::Integer;

use crate::{Error, Result};

/// Prime factorization `n = ∏ p^e` with strictly ascending primes.
///
/// The integer 1 carries the empty factor list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// The factored integer.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs, ascending by prime, all exponents ≥ 1.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// p-adic valuation `ν_p(n)`; zero when `p` does not divide `n`.
    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Number of divisors `d(n) = ∏ (e + 1)`.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }

    /// All divisors of `n`, sorted ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let prev = out.clone();
            let mut pe = 1u64;
            for _ in 0..e {
                pe *= p;
                out.extend(prev.iter().map(|d| d * pe));
            }
        }
        out.sort_unstable();
        out
    }

    /// Recomputes `∏ p^e`; always equals [`Self::value`].
    pub fn reassemble(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product()
    }
}

/// Prime factorization of `n ≥ 1` by trial division.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0u32;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut p = 3u64;
    while p * p <= rest {
        push(p, &mut rest);
        p += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { value: n, factors })
}

/// True iff `n` is prime.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut p = 3u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 2;
    }
    true
}

/// The first `count` primes, ascending.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// All ordered pairs `(m, n)` with `m·n = k`, sorted by `m` ascending.
///
/// The result has exactly `d(k)` entries.
pub fn divisor_pairs(k: u64) -> Result<Vec<(u64, u64)>> {
    if k == 0 {
        return Err(Error::ZeroArgument);
    }
    // Enumerate divisors up to √k; each d ≤ √k contributes (d, k/d) and
    // its mirror (k/d, d).
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= k {
        if k % d == 0 {
            small.push((d, k / d));
            if d * d != k {
                large.push((k / d, d));
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Ok(small)
}

/// Number of divisors of `k`.
pub fn divisor_count(k: u64) -> Result<u64> {
    Ok(factorize(k)?.divisor_count())
}

/// Generalized binomial coefficient `c_α(j) = binom(j+α−1, j)`.
///
/// Integer `α` takes an exact integer path (every partial product
/// `binom(α−1+i, i)` is an integer, so each division is exact); real
/// `α ≥ 1` falls back to the rising-factorial product
/// `∏_{i=1..j} (α−1+i)/i`, avoiding gamma-function evaluation.
pub fn c_alpha(alpha: f64, j: u32) -> Result<f64> {
    if !(alpha >= 1.0) {
        return Err(Error::AlphaBelowOne(alpha));
    }
    if alpha.fract() == 0.0 && alpha <= 1e6 {
        let a = alpha as u128 - 1;
        let mut acc: u128 = 1;
        let mut fits = true;
        for i in 1..=u128::from(j) {
            match acc.checked_mul(a + i) {
                Some(v) => acc = v / i,
                None => {
                    fits = false;
                    break;
                }
            }
        }
        if fits {
            return Ok(acc as f64);
        }
    }
    let mut prod = 1.0f64;
    for i in 1..=j {
        prod *= (alpha - 1.0 + f64::from(i)) / f64::from(i);
    }
    Ok(prod)
}

/// Generalized divisor function `d_α(n)`, the multiplicative extension of
/// `d_α(p^j) = c_α(j)`.
///
/// `d_2` counts divisors; `d_1 ≡ 1`.
pub fn d_alpha(alpha: f64, n: u64) -> Result<f64> {
    if !(alpha >= 1.0) {
        return Err(Error::AlphaBelowOne(alpha));
    }
    let mut prod = 1.0f64;
    for &(_, e) in factorize(n)?.factors() {
        prod *= c_alpha(alpha, e)?;
    }
    Ok(prod)
}

/// `d_α(m·n)` computed from the factorizations of the two factors, so the
/// product itself never has to fit in an integer type (it can exceed u64
/// for large prime-power arguments).
pub fn d_alpha_of_product(alpha: f64, m: u64, n: u64) -> Result<f64> {
    if !(alpha >= 1.0) {
        return Err(Error::AlphaBelowOne(alpha));
    }
    let fm = factorize(m)?;
    let fn_ = factorize(n)?;
    let mut prod = 1.0f64;
    let (mut ia, mut ib) = (0usize, 0usize);
    while ia < fm.factors().len() || ib < fn_.factors().len() {
        let pa = fm.factors().get(ia).map(|&(p, _)| p);
        let pb = fn_.factors().get(ib).map(|&(p, _)| p);
        let p = pa.into_iter().chain(pb).min().expect("one side non-empty");
        let mut e = 0u32;
        if pa == Some(p) {
            e += fm.factors()[ia].1;
            ia += 1;
        }
        if pb == Some(p) {
            e += fn_.factors()[ib].1;
            ib += 1;
        }
        prod *= c_alpha(alpha, e)?;
    }
    Ok(prod)
}

/// Table of `d_α(n)` for `1 ≤ n ≤ bound`; index 0 is unused and holds 0.
///
/// Uses a smallest-prime-factor sieve, so a whole range costs
/// `O(bound·log bound)` instead of one trial division per value — this is
/// what makes weight-condition sweeps over `k ≤ 10⁶` cheap.
pub fn d_alpha_table(alpha: f64, bound: usize) -> Result<Vec<f64>> {
    if !(alpha >= 1.0) {
        return Err(Error::AlphaBelowOne(alpha));
    }
    let mut spf = vec![0usize; bound + 1];
    let mut i = 2usize;
    while i <= bound {
        if spf[i] == 0 {
            let mut j = i;
            while j <= bound {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
        i += 1;
    }
    // Largest possible exponent is log2(bound).
    let max_exp = bound.max(1).ilog2() + 1;
    let c: Vec<f64> = (0..=max_exp)
        .map(|j| c_alpha(alpha, j).expect("alpha checked"))
        .collect();
    let mut table = vec![0.0f64; bound + 1];
    if bound >= 1 {
        table[1] = 1.0;
    }
    for n in 2..=bound {
        let p = spf[n];
        let mut m = n;
        let mut e = 0usize;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        table[n] = table[m] * c[e];
    }
    Ok(table)
}

/// Checks whether a two-variable function is multiplicative as a pair:
/// `f(1,1) = 1` and `f(m₁m₂, n₁n₂) = f(m₁,n₁)·f(m₂,n₂)` whenever
/// `gcd(m₁n₁, m₂n₂) = 1`, for all combinations with both products
/// ≤ `bound`, compared to absolute tolerance `tol`.
pub fn check_multiplicative_pair<F>(f: F, bound: u64, tol: f64) -> bool
where
    F: Fn(u64, u64) -> Complex64,
{
    if (f(1, 1) - Complex64::new(1.0, 0.0)).norm() > tol {
        return false;
    }
    for m1 in 1..=bound {
        for m2 in 1..=bound / m1 {
            for n1 in 1..=bound {
                if (m1 * n1).gcd(&m2) != 1 {
                    // n2 cannot restore coprimality once m2 shares a factor.
                    continue;
                }
                for n2 in 1..=bound / n1 {
                    if (m1 * n1).gcd(&(m2 * n2)) != 1 {
                        continue;
                    }
                    let lhs = f(m1 * m2, n1 * n2);
                    let rhs = f(m1, n1) * f(m2, n2);
                    if (lhs - rhs).norm() > tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Divisor-fiber convolution `F(k) = Σ_{mn=k} f(m, n)`.
///
/// When `f` is multiplicative as a pair, so is `k ↦ F(k)`.
pub fn convolve<F>(f: F, k: u64) -> Result<Complex64>
where
    F: Fn(u64, u64) -> Complex64,
{
    let mut sum = Complex64::new(0.0, 0.0);
    for (m, n) in divisor_pairs(k)? {
        sum += f(m, n);
    }
    Ok(sum)
}

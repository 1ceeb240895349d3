//! Finite-truncation matrix algebra for the additive and multiplicative
//! worlds.
//!
//! A Hankel matrix `(γ_{i+j})_{i,j≥0}` lives on 0-based indices; a Helson
//! matrix `(ρ_{mn})_{m,n≥1}` lives on 1-based indices.  Every
//! [`ComplexMatrix`] carries its index origin so the two worlds cannot be
//! mixed silently.  A finitely supported symbol and a truncation large
//! enough to hold every nonzero entry represent the corresponding
//! infinite matrix exactly, so all norms computed here are exact values,
//! not approximations of a limit.
//!
//! Provided here: Hankel/Helson truncations from symbols, singular values
//! and Schatten norms, the Hilbert–Schmidt trace pairing, Kronecker
//! products, restriction to powers of a prime, assembly of a
//! multiplicative matrix from per-prime local blocks, and the dyadic
//! embedding of an additive matrix onto indices `2^i`.

mod svd;

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::arith::{factorize, is_prime, Factorization};
use crate::{Error, Result};

/// Environment variable overriding the maximum allowed matrix dimension.
pub const SIZE_CAP_ENV: &str = "HELSONLAB_SIZE_CAP";

const DEFAULT_SIZE_CAP: usize = 4000;

/// Maximum allowed matrix dimension for constructed matrices.
///
/// Defaults to 4000; override with the `HELSONLAB_SIZE_CAP` environment
/// variable.  Keeps exact-norm evaluation at desk scale from silently
/// exploding (Helson realizations grow quadratically in input size).
pub fn size_cap() -> usize {
    std::env::var(SIZE_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(DEFAULT_SIZE_CAP)
}

fn check_cap(requested: usize) -> Result<()> {
    let cap = size_cap();
    if requested > cap {
        return Err(Error::SizeCapExceeded { requested, cap });
    }
    Ok(())
}

/// Which infinite-matrix world a symbol generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    /// Hankel world: indices start at 0, entry (i,j) reads the symbol at i+j.
    Additive,
    /// Helson world: indices start at 1, entry (m,n) reads the symbol at m·n.
    Multiplicative,
}

/// Index origin of a concrete matrix: 0-based (additive world) or
/// 1-based (multiplicative world).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexOrigin {
    Zero,
    One,
}

impl IndexOrigin {
    fn offset(self) -> usize {
        match self {
            IndexOrigin::Zero => 0,
            IndexOrigin::One => 1,
        }
    }
}

/// Finitely supported complex sequence generating a Hankel or Helson
/// matrix.  Unset indices read as zero; storing an exact zero clears the
/// index, so the support stays tight.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSequence {
    kind: SymbolKind,
    values: BTreeMap<u64, Complex64>,
}

impl SymbolSequence {
    pub fn new(kind: SymbolKind) -> Self {
        SymbolSequence { kind, values: BTreeMap::new() }
    }

    pub fn additive() -> Self {
        Self::new(SymbolKind::Additive)
    }

    pub fn multiplicative() -> Self {
        Self::new(SymbolKind::Multiplicative)
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    /// Stores `value` at `index`.  Multiplicative symbols reject index 0.
    pub fn set(&mut self, index: u64, value: Complex64) -> Result<()> {
        if self.kind == SymbolKind::Multiplicative && index == 0 {
            return Err(Error::ZeroArgument);
        }
        if value == Complex64::new(0.0, 0.0) {
            self.values.remove(&index);
        } else {
            self.values.insert(index, value);
        }
        Ok(())
    }

    /// Value at `index`; zero when unset.
    pub fn get(&self, index: u64) -> Complex64 {
        self.values
            .get(&index)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Stored (index, value) pairs, ascending by index.
    pub fn support(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    /// Largest index with a stored value, if any.
    pub fn support_bound(&self) -> Option<u64> {
        self.values.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest |difference| over the union of supports; `None` when the
    /// kinds differ.
    pub fn max_abs_diff(&self, other: &SymbolSequence) -> Option<f64> {
        if self.kind != other.kind {
            return None;
        }
        let mut worst = 0.0f64;
        for &k in self.values.keys().chain(other.values.keys()) {
            worst = worst.max((self.get(k) - other.get(k)).norm());
        }
        Some(worst)
    }

    pub fn approx_eq(&self, other: &SymbolSequence, tol: f64) -> bool {
        self.max_abs_diff(other).is_some_and(|d| d <= tol)
    }
}

/// Dense complex matrix tagged with its index origin.
///
/// All public index arguments are interpreted in the matrix's own origin:
/// a 1-origin matrix addresses rows `1..=rows`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    origin: IndexOrigin,
    data: Vec<Complex64>, // row-major
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize, origin: IndexOrigin) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            origin,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn origin(&self) -> IndexOrigin {
        self.origin
    }

    fn flat(&self, i: usize, j: usize) -> usize {
        let o = self.origin.offset();
        assert!(
            i >= o && i < self.rows + o && j >= o && j < self.cols + o,
            "index ({i}, {j}) outside a {}x{} matrix with origin {o}",
            self.rows,
            self.cols
        );
        (i - o) * self.cols + (j - o)
    }

    /// Entry at (i, j) in the matrix's own origin.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[self.flat(i, j)]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, value: Complex64) {
        let idx = self.flat(i, j);
        self.data[idx] = value;
    }

    /// Raw 0-based entry access regardless of origin.
    pub(crate) fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    /// Plain (non-conjugating) transpose; keeps the origin.
    pub fn transposed(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows, self.origin);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.at(r, c);
            }
        }
        out
    }

    /// Zero-padded copy of size at least the current one.
    pub fn padded(&self, rows: usize, cols: usize) -> ComplexMatrix {
        assert!(rows >= self.rows && cols >= self.cols, "padding cannot shrink");
        let mut out = ComplexMatrix::zeros(rows, cols, self.origin);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[r * cols + c] = self.at(r, c);
            }
        }
        out
    }

    /// Entrywise difference; shapes and origins must match.
    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_same_frame(other)?;
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(other.data.iter()) {
            *x -= y;
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: Complex64) -> ComplexMatrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x *= factor;
        }
        out
    }

    /// Largest |difference| entrywise, comparing within the common shape
    /// and reading indices outside either matrix as zero.  Origins must
    /// match.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        if self.origin != other.origin {
            return Err(Error::OriginMismatch { expected: self.origin, found: other.origin });
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut worst = 0.0f64;
        for r in 0..self.rows.max(other.rows) {
            for c in 0..self.cols.max(other.cols) {
                let a = if r < self.rows && c < self.cols { self.at(r, c) } else { zero };
                let b = if r < other.rows && c < other.cols { other.at(r, c) } else { zero };
                worst = worst.max((a - b).norm());
            }
        }
        Ok(worst)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        matches!(self.max_abs_diff(other), Ok(d) if d <= tol)
    }

    fn check_same_frame(&self, other: &ComplexMatrix) -> Result<()> {
        if self.origin != other.origin {
            return Err(Error::OriginMismatch { expected: self.origin, found: other.origin });
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        Ok(())
    }
}

/// Non-increasing sequence of non-negative singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    /// Sorts the values non-increasing; rejects negatives and NaN by
    /// assertion (singular values are norms).
    pub fn from_values(mut values: Vec<f64>) -> Self {
        assert!(
            values.iter().all(|&s| s >= 0.0),
            "singular values must be non-negative"
        );
        values.sort_unstable_by(|x, y| y.partial_cmp(x).unwrap());
        SingularSpectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest singular value; zero for an empty spectrum.
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// ℓ^q norm of the spectrum; `q = ∞` gives the largest value.
    ///
    /// Computed in max-normalized form `s₀·(Σ (sᵢ/s₀)^q)^{1/q}` so that
    /// large parameters (e.g. t ~ 1e12 probes) neither overflow nor
    /// underflow.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        if q.is_nan() || q < 1.0 {
            return Err(Error::ExponentBelowOne(q));
        }
        let top = self.largest();
        if top == 0.0 {
            return Ok(0.0);
        }
        if q.is_infinite() {
            return Ok(top);
        }
        let sum: f64 = self
            .values
            .iter()
            .filter(|&&s| s > 0.0)
            .map(|&s| (s / top).powf(q))
            .sum();
        Ok(top * sum.powf(1.0 / q))
    }

    /// Entrywise comparison, padding the shorter spectrum with zeros.
    pub fn max_abs_diff(&self, other: &SingularSpectrum) -> f64 {
        let len = self.values.len().max(other.values.len());
        let mut worst = 0.0f64;
        for i in 0..len {
            let a = self.values.get(i).copied().unwrap_or(0.0);
            let b = other.values.get(i).copied().unwrap_or(0.0);
            worst = worst.max((a - b).abs());
        }
        worst
    }

    pub fn approx_eq(&self, other: &SingularSpectrum, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

/// Per-prime local blocks `(p, A_p)` with strictly ascending primes.
///
/// Blocks are square, 0-origin (their indices are exponents of `p`).
#[derive(Debug, Clone)]
pub struct LocalBlockFamily {
    blocks: Vec<(u64, ComplexMatrix)>,
}

impl LocalBlockFamily {
    pub fn new(blocks: Vec<(u64, ComplexMatrix)>) -> Result<Self> {
        for window in blocks.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(Error::MalformedBlockFamily);
            }
        }
        for (p, block) in &blocks {
            if !is_prime(*p) {
                return Err(Error::NotPrime(*p));
            }
            if block.rows() != block.cols() || block.origin() != IndexOrigin::Zero {
                return Err(Error::MalformedBlockFamily);
            }
        }
        Ok(LocalBlockFamily { blocks })
    }

    pub fn blocks(&self) -> &[(u64, ComplexMatrix)] {
        &self.blocks
    }

    pub fn get(&self, p: u64) -> Option<&ComplexMatrix> {
        self.blocks
            .binary_search_by_key(&p, |&(q, _)| q)
            .ok()
            .map(|i| &self.blocks[i].1)
    }
}

/// N×N Hankel truncation: entry (i,j) = γ_{i+j}, 0-origin.
pub fn hankel_truncation(gamma: &SymbolSequence, n: usize) -> Result<ComplexMatrix> {
    if gamma.kind() != SymbolKind::Additive {
        return Err(Error::SymbolKindMismatch {
            expected: SymbolKind::Additive,
            found: gamma.kind(),
        });
    }
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    check_cap(n)?;
    let mut out = ComplexMatrix::zeros(n, n, IndexOrigin::Zero);
    for i in 0..n {
        for j in 0..n {
            out.set_entry(i, j, gamma.get((i + j) as u64));
        }
    }
    Ok(out)
}

/// N×N Helson truncation: entry (m,n) = ρ_{mn}, 1-origin.
pub fn helson_truncation(rho: &SymbolSequence, n: usize) -> Result<ComplexMatrix> {
    if rho.kind() != SymbolKind::Multiplicative {
        return Err(Error::SymbolKindMismatch {
            expected: SymbolKind::Multiplicative,
            found: rho.kind(),
        });
    }
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    check_cap(n)?;
    let mut out = ComplexMatrix::zeros(n, n, IndexOrigin::One);
    // Walk the support once per row instead of probing every (m, n): row m
    // has entries only at n = k/m for supported k divisible by m.
    for (k, v) in rho.support() {
        for m in 1..=(n as u64) {
            if k % m == 0 {
                let nn = k / m;
                if nn >= 1 && nn <= n as u64 {
                    out.set_entry(m as usize, nn as usize, v);
                }
            }
        }
    }
    Ok(out)
}

/// Full singular spectrum of `a`, length `min(rows, cols)` including
/// zeros, non-increasing.
pub fn singular_values(a: &ComplexMatrix) -> SingularSpectrum {
    SingularSpectrum { values: svd::singular_values_dense(a) }
}

/// Schatten norm ‖a‖_{S_q}: the ℓ^q norm of the singular values.
/// `q = ∞` gives the operator norm.
pub fn schatten_norm(a: &ComplexMatrix, q: f64) -> Result<f64> {
    singular_values(a).lq_norm(q)
}

/// Hilbert–Schmidt trace pairing ⟨A, B⟩ = Σ a·conj(b) = Tr(AB*).
pub fn trace_pairing(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    a.check_same_frame(b)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (x, y) in a.data.iter().zip(b.data.iter()) {
        sum += x * y.conj();
    }
    Ok(sum)
}

/// Kronecker product with the first factor block-major: the result is
/// partitioned into `a.rows × a.cols` blocks, block (r,c) = a_{r,c}·B.
/// The result keeps `a`'s index origin.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a
        .rows()
        .checked_mul(b.rows())
        .ok_or_else(|| Error::IndexOverflow("kron rows".into()))?;
    let cols = a
        .cols()
        .checked_mul(b.cols())
        .ok_or_else(|| Error::IndexOverflow("kron cols".into()))?;
    check_cap(rows.max(cols))?;
    let mut out = ComplexMatrix::zeros(rows, cols, a.origin());
    for ar in 0..a.rows() {
        for ac in 0..a.cols() {
            let factor = a.at(ar, ac);
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for br in 0..b.rows() {
                for bc in 0..b.cols() {
                    out.data[(ar * b.rows() + br) * cols + (ac * b.cols() + bc)] =
                        factor * b.at(br, bc);
                }
            }
        }
    }
    Ok(out)
}

/// Restriction of a 1-origin matrix to rows and columns indexed by powers
/// of `p`: the depth×depth, 0-origin matrix with entry (i,j) = A(p^i, p^j).
pub fn restrict_prime(a: &ComplexMatrix, p: u64, depth: usize) -> Result<ComplexMatrix> {
    if a.origin() != IndexOrigin::One {
        return Err(Error::OriginMismatch {
            expected: IndexOrigin::One,
            found: a.origin(),
        });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if depth == 0 {
        return Err(Error::ZeroArgument);
    }
    let available = a.rows().min(a.cols());
    let mut powers = Vec::with_capacity(depth);
    let mut pw = 1u64;
    for i in 0..depth {
        if pw > available as u64 {
            return Err(Error::DepthTooLarge { p, depth, available });
        }
        powers.push(pw as usize);
        if i + 1 < depth {
            pw = pw
                .checked_mul(p)
                .ok_or_else(|| Error::IndexOverflow(format!("p^{} for p = {p}", i + 1)))?;
        }
    }
    let mut out = ComplexMatrix::zeros(depth, depth, IndexOrigin::Zero);
    for i in 0..depth {
        for j in 0..depth {
            out.set_entry(i, j, a.entry(powers[i], powers[j]));
        }
    }
    Ok(out)
}

/// Assembles the N×N multiplicative matrix from per-prime local blocks:
/// entry (m,n) = ∏_p (A_p)_{ν_p(m), ν_p(n)}.
///
/// Primes not dividing m·n contribute their (0,0) entry, which is
/// required to be 1 within 1e−12 (that is exactly the multiplicativity
/// criterion for the assembly), so they are skipped.  Any prime of m·n
/// outside the family, or an exponent at or beyond the block size, makes
/// the entry 0 — the matrix is padded with trivial one-dimensional
/// factors beyond the listed primes.
pub fn multiplicative_assemble(blocks: &LocalBlockFamily, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    check_cap(n)?;
    for &(p, ref block) in blocks.blocks() {
        let corner = block.entry(0, 0);
        if (corner - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::BlockNotUnital { prime: p, value: corner });
        }
    }
    let facts: Vec<Factorization> = (1..=n as u64)
        .map(|k| factorize(k).expect("k >= 1"))
        .collect();
    let mut out = ComplexMatrix::zeros(n, n, IndexOrigin::One);
    for m in 1..=n {
        let fm = &facts[m - 1];
        for nn in 1..=n {
            let fn_ = &facts[nn - 1];
            let mut value = Complex64::new(1.0, 0.0);
            let mut dead = false;
            // Union of the primes of m and n, each consulted once.
            let mut ia = 0;
            let mut ib = 0;
            while !dead && (ia < fm.factors().len() || ib < fn_.factors().len()) {
                let pa = fm.factors().get(ia).map(|&(p, _)| p);
                let pb = fn_.factors().get(ib).map(|&(p, _)| p);
                let p = match (pa, pb) {
                    (Some(x), Some(y)) => x.min(y),
                    (Some(x), None) => x,
                    (None, Some(y)) => y,
                    (None, None) => unreachable!(),
                };
                let em = if pa == Some(p) {
                    ia += 1;
                    fm.factors()[ia - 1].1
                } else {
                    0
                };
                let en = if pb == Some(p) {
                    ib += 1;
                    fn_.factors()[ib - 1].1
                } else {
                    0
                };
                match blocks.get(p) {
                    Some(block) if (em as usize) < block.rows() && (en as usize) < block.rows() => {
                        value *= block.entry(em as usize, en as usize);
                    }
                    _ => dead = true,
                }
            }
            if !dead && value != Complex64::new(0.0, 0.0) {
                out.set_entry(m, nn, value);
            }
        }
    }
    Ok(out)
}

/// Relocates a 0-origin matrix onto dyadic indices: the output has size
/// `2^(rows−1) × 2^(cols−1)`, 1-origin, with entry (2^i, 2^j) = a_{i,j}
/// and zeros elsewhere.  Singular values are preserved exactly.
pub fn dyadic_embed(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.origin() != IndexOrigin::Zero {
        return Err(Error::OriginMismatch {
            expected: IndexOrigin::Zero,
            found: a.origin(),
        });
    }
    let rows = 1usize
        .checked_shl((a.rows() - 1) as u32)
        .ok_or_else(|| Error::IndexOverflow("dyadic rows".into()))?;
    let cols = 1usize
        .checked_shl((a.cols() - 1) as u32)
        .ok_or_else(|| Error::IndexOverflow("dyadic cols".into()))?;
    check_cap(rows.max(cols))?;
    let mut out = ComplexMatrix::zeros(rows, cols, IndexOrigin::One);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set_entry(1 << i, 1 << j, a.at(i, j));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn corner_center(t: f64) -> ComplexMatrix {
        // 1 at (0,0), t at (1,1): singular values {max(1,t), min(1,t), 0}.
        let mut a = ComplexMatrix::zeros(3, 3, IndexOrigin::Zero);
        a.set_entry(0, 0, re(1.0));
        a.set_entry(1, 1, re(t));
        a
    }

    #[test]
    fn hankel_truncation_places_antidiagonals() {
        let mut gamma = SymbolSequence::additive();
        gamma.set(0, re(1.0)).unwrap();
        let h = hankel_truncation(&gamma, 3).unwrap();
        assert_eq!(h.entry(0, 0), re(1.0));
        assert_eq!(h.entry(0, 1), re(0.0));
        assert_eq!(h.entry(2, 2), re(0.0));

        gamma.set(2, re(0.5)).unwrap();
        let h = hankel_truncation(&gamma, 3).unwrap();
        for (i, j) in [(0usize, 2usize), (1, 1), (2, 0)] {
            assert_eq!(h.entry(i, j), re(0.5));
        }
        assert_eq!(h.entry(2, 2), re(0.0));

        let zero = SymbolSequence::additive();
        let h = hankel_truncation(&zero, 4).unwrap();
        assert_eq!(schatten_norm(&h, 2.0).unwrap(), 0.0);

        let rho = SymbolSequence::multiplicative();
        assert!(hankel_truncation(&rho, 3).is_err());
    }

    #[test]
    fn helson_truncation_places_divisor_fibers() {
        let mut rho = SymbolSequence::multiplicative();
        rho.set(6, re(0.25)).unwrap();
        let h = helson_truncation(&rho, 6).unwrap();
        for (m, n) in [(1usize, 6usize), (2, 3), (3, 2), (6, 1)] {
            assert_eq!(h.entry(m, n), re(0.25));
        }
        assert_eq!(h.entry(4, 4), re(0.0));
        assert_eq!(h.entry(1, 1), re(0.0));

        let mut one = SymbolSequence::multiplicative();
        one.set(1, re(1.0)).unwrap();
        let h = helson_truncation(&one, 4).unwrap();
        assert_eq!(h.entry(1, 1), re(1.0));
        assert_eq!(schatten_norm(&h, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn helson_entries_depend_only_on_product() {
        let mut rho = SymbolSequence::multiplicative();
        for (k, v) in [(2u64, 0.3), (8, -0.7), (12, 1.1), (30, 0.05)] {
            rho.set(k, re(v)).unwrap();
        }
        let h = helson_truncation(&rho, 12).unwrap();
        for m in 1..=12usize {
            for n in 1..=12usize {
                assert_eq!(h.entry(m, n), rho.get((m * n) as u64));
            }
        }
    }

    #[test]
    fn singular_values_match_known_spectra() {
        // 1 at corner, 2 at center: {2, 1, 0}.
        let s = singular_values(&corner_center(2.0));
        let expect = SingularSpectrum::from_values(vec![2.0, 1.0, 0.0]);
        assert!(s.approx_eq(&expect, 1e-13), "{:?}", s.values());

        // Rank-one 1-and-t row: single value √(1+t²).
        let mut b = ComplexMatrix::zeros(3, 3, IndexOrigin::Zero);
        b.set_entry(0, 0, re(1.0));
        b.set_entry(0, 2, re(1.0));
        let s = singular_values(&b);
        let expect = SingularSpectrum::from_values(vec![2f64.sqrt(), 0.0, 0.0]);
        assert!(s.approx_eq(&expect, 1e-13), "{:?}", s.values());

        // Symmetric corner pair: {(√5+1)/2, (√5−1)/2, 0}.
        let mut c = b.clone();
        c.set_entry(2, 0, re(1.0));
        let s = singular_values(&c);
        let phi = (5f64.sqrt() + 1.0) / 2.0;
        let expect = SingularSpectrum::from_values(vec![phi, phi - 1.0, 0.0]);
        assert!(s.approx_eq(&expect, 1e-13), "{:?}", s.values());
    }

    #[test]
    fn singular_values_of_classic_example() {
        // [[3, 0], [4, 5]] has Gram eigenvalues {45, 5}.
        let mut a = ComplexMatrix::zeros(2, 2, IndexOrigin::Zero);
        a.set_entry(0, 0, re(3.0));
        a.set_entry(1, 0, re(4.0));
        a.set_entry(1, 1, re(5.0));
        let s = singular_values(&a);
        assert_relative_eq!(s.values()[0], 45f64.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(s.values()[1], 5f64.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn singular_values_complex_and_rectangular() {
        // [[3i, 0, 0], [4, 5i, 0]]: the Gram matrix of the two nonzero
        // columns is [[25, 20i], [−20i, 25]] with eigenvalues {45, 5}.
        let mut a = ComplexMatrix::zeros(2, 3, IndexOrigin::Zero);
        a.set_entry(0, 0, Complex64::new(0.0, 3.0));
        a.set_entry(1, 0, re(4.0));
        a.set_entry(1, 1, Complex64::new(0.0, 5.0));
        let s = singular_values(&a);
        assert_eq!(s.values().len(), 2);
        assert_relative_eq!(s.values()[0], 45f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(s.values()[1], 5f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn schatten_norms() {
        let mut id = ComplexMatrix::zeros(3, 3, IndexOrigin::Zero);
        for i in 0..3 {
            id.set_entry(i, i, re(1.0));
        }
        assert_relative_eq!(schatten_norm(&id, 1.0).unwrap(), 3.0, max_relative = 1e-13);
        assert_relative_eq!(
            schatten_norm(&id, f64::INFINITY).unwrap(),
            1.0,
            max_relative = 1e-13
        );

        // Four unit entries: Frobenius norm 2, however computed.
        let mut d = corner_center(1.0);
        d.set_entry(0, 2, re(1.0));
        d.set_entry(2, 0, re(1.0));
        let frob: f64 = (0..3)
            .flat_map(|r| (0..3).map(move |c| (r, c)))
            .map(|(r, c)| d.entry(r, c).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert_relative_eq!(frob, 2.0, max_relative = 1e-15);
        assert_relative_eq!(schatten_norm(&d, 2.0).unwrap(), 2.0, max_relative = 1e-12);

        assert!(schatten_norm(&id, 0.5).is_err());
    }

    #[test]
    fn trace_pairing_is_hilbert_schmidt() {
        let mut a = ComplexMatrix::zeros(2, 2, IndexOrigin::Zero);
        a.set_entry(0, 0, Complex64::new(1.0, 2.0));
        a.set_entry(0, 1, Complex64::new(-0.5, 0.25));
        a.set_entry(1, 1, Complex64::new(0.0, -3.0));
        let p = trace_pairing(&a, &a).unwrap();
        assert_relative_eq!(p.im, 0.0, epsilon = 1e-15);
        assert_relative_eq!(
            p.re,
            schatten_norm(&a, 2.0).unwrap().powi(2),
            max_relative = 1e-12
        );

        // Matrix units form an orthonormal family.
        let unit = |i: usize, j: usize| {
            let mut e = ComplexMatrix::zeros(2, 2, IndexOrigin::Zero);
            e.set_entry(i, j, re(1.0));
            e
        };
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let p = trace_pairing(&unit(i, j), &unit(k, l)).unwrap();
                        let expect = if (i, j) == (k, l) { 1.0 } else { 0.0 };
                        assert_eq!(p, re(expect));
                    }
                }
            }
        }

        let b = ComplexMatrix::zeros(3, 2, IndexOrigin::Zero);
        assert!(trace_pairing(&a, &b).is_err());
        let c = ComplexMatrix::zeros(2, 2, IndexOrigin::One);
        assert!(trace_pairing(&a, &c).is_err());
    }

    #[test]
    fn kron_spectra_multiply() {
        let mut id = ComplexMatrix::zeros(2, 2, IndexOrigin::Zero);
        id.set_entry(0, 0, re(1.0));
        id.set_entry(1, 1, re(1.0));
        let kk = kron(&id, &id).unwrap();
        assert_eq!(kk.rows(), 4);
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(kk.at(r, c), if r == c { re(1.0) } else { re(0.0) });
            }
        }

        let a = corner_center(2.0);
        let b = corner_center(3.0);
        let s = singular_values(&kron(&a, &b).unwrap());
        let expect =
            SingularSpectrum::from_values(vec![6.0, 3.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(s.approx_eq(&expect, 1e-12), "{:?}", s.values());

        for q in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let lhs = schatten_norm(&kron(&a, &b).unwrap(), q).unwrap();
            let rhs = schatten_norm(&a, q).unwrap() * schatten_norm(&b, q).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn restriction_extracts_prime_power_hankel() {
        let mut rho = SymbolSequence::multiplicative();
        for k in 1..=81u64 {
            rho.set(k, re(1.0 / k as f64)).unwrap();
        }
        let h = helson_truncation(&rho, 9).unwrap();
        let r = restrict_prime(&h, 2, 3).unwrap();
        assert_eq!(r.origin(), IndexOrigin::Zero);
        for i in 0..3usize {
            for j in 0..3usize {
                assert_eq!(r.entry(i, j), re(1.0 / f64::from(1u32 << (i + j))));
            }
        }
        // The restriction is Hankel: entries depend only on i+j.
        assert_eq!(r.entry(0, 2), r.entry(1, 1));

        assert!(restrict_prime(&h, 4, 2).is_err());
        assert!(restrict_prime(&h, 2, 5).is_err()); // 2^4 = 16 > 9
        let single = restrict_prime(&h, 7, 1).unwrap();
        assert_eq!(single.entry(0, 0), re(1.0));
    }

    #[test]
    fn assembly_is_multiplicative_over_blocks() {
        let t = 0.7;
        let blocks = LocalBlockFamily::new(vec![(2, corner_center(t))]).unwrap();
        let m = multiplicative_assemble(&blocks, 4).unwrap();
        assert_eq!(m.entry(1, 1), re(1.0));
        assert_eq!(m.entry(2, 2), re(t));
        assert_eq!(m.entry(4, 4), re(0.0)); // block entry (2,2) is 0
        for n in 1..=4usize {
            assert_eq!(m.entry(3, n), re(0.0)); // 3 is not in the family
        }

        // Two primes: restriction recovers each block.
        let s = 0.3;
        let blocks =
            LocalBlockFamily::new(vec![(2, corner_center(t)), (3, corner_center(s))]).unwrap();
        let m = multiplicative_assemble(&blocks, 36).unwrap();
        let r2 = restrict_prime(&m, 2, 3).unwrap();
        assert!(r2.approx_eq(&corner_center(t), 1e-15));
        let r3 = restrict_prime(&m, 3, 3).unwrap();
        assert!(r3.approx_eq(&corner_center(s), 1e-15));
        // Mixed entry (2·3, 2·3) = t·s.
        assert_relative_eq!(m.entry(6, 6).re, t * s, max_relative = 1e-15);
    }

    #[test]
    fn assembly_rejects_non_unital_block() {
        let mut block = corner_center(1.0);
        block.set_entry(0, 0, re(0.5));
        let blocks = LocalBlockFamily::new(vec![(2, block)]).unwrap();
        assert!(matches!(
            multiplicative_assemble(&blocks, 4),
            Err(Error::BlockNotUnital { prime: 2, .. })
        ));
    }

    #[test]
    fn block_family_validation() {
        let b = corner_center(1.0);
        assert!(LocalBlockFamily::new(vec![(3, b.clone()), (2, b.clone())]).is_err());
        assert!(LocalBlockFamily::new(vec![(4, b.clone())]).is_err());
        let one_origin = ComplexMatrix::zeros(2, 2, IndexOrigin::One);
        assert!(LocalBlockFamily::new(vec![(2, one_origin)]).is_err());
    }

    #[test]
    fn dyadic_embedding_preserves_spectrum() {
        let mut a = ComplexMatrix::zeros(1, 1, IndexOrigin::Zero);
        a.set_entry(0, 0, Complex64::new(0.25, -1.0));
        let e = dyadic_embed(&a).unwrap();
        assert_eq!(e.rows(), 1);
        assert_eq!(e.entry(1, 1), Complex64::new(0.25, -1.0));

        let mut d = corner_center(0.5);
        d.set_entry(0, 2, re(0.5));
        d.set_entry(2, 0, re(0.5));
        let e = dyadic_embed(&d).unwrap();
        assert_eq!(e.rows(), 4);
        assert_eq!(e.origin(), IndexOrigin::One);
        assert_eq!(e.entry(1, 1), re(1.0));
        assert_eq!(e.entry(2, 2), re(0.5));
        assert_eq!(e.entry(1, 4), re(0.5));
        assert_eq!(e.entry(4, 1), re(0.5));
        assert_eq!(e.entry(3, 3), re(0.0));
        assert!(singular_values(&e).approx_eq(&singular_values(&d), 1e-13));
    }

    #[test]
    fn size_cap_guards_construction() {
        let a = ComplexMatrix::zeros(14, 14, IndexOrigin::Zero);
        assert!(matches!(
            dyadic_embed(&a),
            Err(Error::SizeCapExceeded { requested: 8192, .. })
        ));
        let mut gamma = SymbolSequence::additive();
        gamma.set(0, re(1.0)).unwrap();
        assert!(hankel_truncation(&gamma, 5000).is_err());
    }

    #[test]
    fn symbol_sequence_contract() {
        let mut s = SymbolSequence::multiplicative();
        assert!(s.set(0, re(1.0)).is_err());
        s.set(5, re(2.0)).unwrap();
        s.set(3, re(1.0)).unwrap();
        assert_eq!(s.support_bound(), Some(5));
        s.set(5, re(0.0)).unwrap(); // exact zero clears the slot
        assert_eq!(s.support_bound(), Some(3));
        assert_eq!(s.get(5), re(0.0));
        let mut t = SymbolSequence::multiplicative();
        t.set(3, re(1.0 + 5e-13)).unwrap();
        assert!(s.approx_eq(&t, 1e-12));
        assert!(!s.approx_eq(&t, 1e-14));
        assert!(s.max_abs_diff(&SymbolSequence::additive()).is_none());
    }
}

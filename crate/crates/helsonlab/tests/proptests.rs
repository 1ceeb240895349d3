//! Property tests: structural laws that must hold on arbitrary inputs,
//! not just the hand-picked ones in the unit suites.

use num_complex::Complex64;
use proptest::collection::{btree_map, vec};
use proptest::prelude::*;

use helsonlab::arith::{d_alpha, divisor_count, divisor_pairs, factorize, is_prime};
use helsonlab::bounds::solve_uniform_bound;
use helsonlab::projections::{
    additive_weight_family, hankel_weighted_average, multiplicative_weight_family,
    projection_output_matrix, validate_weight,
};
use helsonlab::schatten::{
    dyadic_embed, hankel_truncation, helson_truncation, kron, schatten_norm, singular_values,
    trace_pairing, ComplexMatrix, IndexOrigin, SymbolKind, SymbolSequence,
};

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(max_dim: usize, origin: IndexOrigin) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(rows, cols)| {
        vec(complex(), rows * cols).prop_map(move |entries| {
            let off = match origin {
                IndexOrigin::Zero => 0,
                IndexOrigin::One => 1,
            };
            let mut m = ComplexMatrix::zeros(rows, cols, origin);
            for i in 0..rows {
                for j in 0..cols {
                    m.set_entry(i + off, j + off, entries[i * cols + j]);
                }
            }
            m
        })
    })
}

fn symbol(kind: SymbolKind, max_index: u64) -> impl Strategy<Value = SymbolSequence> {
    let lo = match kind {
        SymbolKind::Additive => 0,
        SymbolKind::Multiplicative => 1,
    };
    btree_map(lo..=max_index, complex(), 0..10).prop_map(move |entries| {
        let mut s = SymbolSequence::new(kind);
        for (k, v) in entries {
            s.set(k, v).expect("index in range");
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_round_trips(n in 1u64..1_000_000) {
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.value(), n);
        prop_assert_eq!(f.reassemble(), n);
        let mut last = 0u64;
        for &(p, e) in f.factors() {
            prop_assert!(is_prime(p));
            prop_assert!(e >= 1);
            prop_assert!(p > last);
            last = p;
        }
    }

    #[test]
    fn divisor_pairs_cover_everything(k in 1u64..5_000) {
        let pairs = divisor_pairs(k).unwrap();
        prop_assert_eq!(pairs.len() as u64, divisor_count(k).unwrap());
        let mut last_m = 0u64;
        for &(m, n) in &pairs {
            prop_assert_eq!(m * n, k);
            prop_assert!(m > last_m);
            last_m = m;
        }
    }

    #[test]
    fn d_alpha_splits_over_coprime_factors(
        m in 1u64..3_000,
        n in 1u64..3_000,
        alpha in 1.0..4.0f64,
    ) {
        prop_assume!(num_integer::gcd(m, n) == 1);
        let joint = d_alpha(alpha, m * n).unwrap();
        let split = d_alpha(alpha, m).unwrap() * d_alpha(alpha, n).unwrap();
        prop_assert!((joint - split).abs() <= 1e-12 * split.max(1.0));
    }

    #[test]
    fn hankel_entries_follow_index_sums(gamma in symbol(SymbolKind::Additive, 40), n in 1usize..12) {
        let h = hankel_truncation(&gamma, n).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(h.entry(i, j), gamma.get((i + j) as u64));
            }
        }
    }

    #[test]
    fn helson_entries_follow_index_products(rho in symbol(SymbolKind::Multiplicative, 80), n in 1usize..14) {
        let h = helson_truncation(&rho, n).unwrap();
        for m in 1..=n {
            for k in 1..=n {
                prop_assert_eq!(h.entry(m, k), rho.get((m * k) as u64));
            }
        }
    }

    #[test]
    fn singular_values_are_sorted_and_padding_invariant(a in matrix(5, IndexOrigin::Zero)) {
        let spectrum = singular_values(&a);
        let values = spectrum.values();
        for w in values.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        for &s in values {
            prop_assert!(s >= 0.0);
        }
        let padded = singular_values(&a.padded(a.rows() + 2, a.cols() + 1));
        prop_assert!(spectrum.max_abs_diff(&padded) <= 1e-12 * (1.0 + spectrum.largest()));
    }

    #[test]
    fn schatten_norms_decrease_in_q(a in matrix(5, IndexOrigin::Zero)) {
        let n1 = schatten_norm(&a, 1.0).unwrap();
        let n15 = schatten_norm(&a, 1.5).unwrap();
        let n2 = schatten_norm(&a, 2.0).unwrap();
        let n3 = schatten_norm(&a, 3.0).unwrap();
        let ninf = schatten_norm(&a, f64::INFINITY).unwrap();
        let slack = 1e-12 * (1.0 + n1);
        prop_assert!(n1 + slack >= n15 && n15 + slack >= n2);
        prop_assert!(n2 + slack >= n3 && n3 + slack >= ninf);
    }

    #[test]
    fn kronecker_norms_multiply(
        a in matrix(3, IndexOrigin::Zero),
        b in matrix(3, IndexOrigin::Zero),
        q in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, f64::INFINITY]),
    ) {
        let joint = schatten_norm(&kron(&a, &b).unwrap(), q).unwrap();
        let split = schatten_norm(&a, q).unwrap() * schatten_norm(&b, q).unwrap();
        prop_assert!((joint - split).abs() <= 1e-9 * (1.0 + split));
    }

    #[test]
    fn trace_pairing_is_conjugate_symmetric(
        pair in (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            (vec(complex(), r * c), vec(complex(), r * c)).prop_map(move |(x, y)| {
                let mut a = ComplexMatrix::zeros(r, c, IndexOrigin::Zero);
                let mut b = ComplexMatrix::zeros(r, c, IndexOrigin::Zero);
                for i in 0..r {
                    for j in 0..c {
                        a.set_entry(i, j, x[i * c + j]);
                        b.set_entry(i, j, y[i * c + j]);
                    }
                }
                (a, b)
            })
        }),
    ) {
        let (a, b) = pair;
        let ab = trace_pairing(&a, &b).unwrap();
        let ba = trace_pairing(&b, &a).unwrap();
        prop_assert_eq!(ab, ba.conj());
    }

    #[test]
    fn dyadic_embedding_preserves_norms(
        a in matrix(5, IndexOrigin::Zero),
        q in prop::sample::select(vec![1.0, 2.0, 3.0, f64::INFINITY]),
    ) {
        let moved = schatten_norm(&dyadic_embed(&a).unwrap(), q).unwrap();
        let original = schatten_norm(&a, q).unwrap();
        prop_assert!((moved - original).abs() <= 1e-10 * (1.0 + original));
    }

    #[test]
    fn weighted_projections_are_idempotent(
        gamma in symbol(SymbolKind::Additive, 14),
        alpha in 1.0..4.0f64,
        beta in 1.0..4.0f64,
    ) {
        let w = additive_weight_family(alpha, beta).unwrap();
        let realized = projection_output_matrix(&gamma).unwrap();
        let back = hankel_weighted_average(&realized, &w).unwrap();
        prop_assert!(back.max_abs_diff(&gamma).unwrap() <= 1e-12);
    }

    #[test]
    fn weight_families_stay_normalized(alpha in 1.0..4.0f64, beta in 1.0..4.0f64) {
        let additive = additive_weight_family(alpha, beta).unwrap();
        let sweep = validate_weight(&additive, 60);
        prop_assert!(sweep.passes(), "additive deviation {}", sweep.max_deviation);
        let multiplicative = multiplicative_weight_family(alpha, beta).unwrap();
        let sweep = validate_weight(&multiplicative, 500);
        prop_assert!(sweep.passes(), "multiplicative deviation {}", sweep.max_deviation);
    }

    #[test]
    fn solver_stays_on_its_branch(raw in 1.0..8.0f64) {
        prop_assume!((raw - 2.0).abs() > 1e-3);
        let result = solve_uniform_bound(raw, 1e-12).unwrap();
        prop_assert!(result.x_q > 0.0 && result.x_q < 1.0);
        prop_assert!(result.uniform_bound >= 1.0);
        prop_assert!(result.ln_delta.is_finite());
        prop_assert_eq!(format!("{}", result.branch), if raw < 2.0 { "below2" } else { "above2" });
    }

    #[test]
    fn matrix_text_format_round_trips(a in matrix(6, IndexOrigin::One)) {
        let mut buffer = Vec::new();
        helsonlab::io::write_matrix(&mut buffer, &a).unwrap();
        let back = helsonlab::io::read_matrix(&buffer[..]).unwrap();
        prop_assert!(back.approx_eq(&a, 0.0));
    }

    #[test]
    fn symbol_text_format_round_trips(s in symbol(SymbolKind::Multiplicative, 1000)) {
        let mut buffer = Vec::new();
        helsonlab::io::write_symbol(&mut buffer, &s).unwrap();
        let back = helsonlab::io::read_symbol(&buffer[..]).unwrap();
        prop_assert!(back.approx_eq(&s, 0.0));
    }
}

proptest! {
    // Heavier cases: keep the sample count low.
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn helson_projection_annihilates_nothing_in_pairings(
        entries in btree_map((1u64..=12, 1u64..=12), complex(), 1..20),
        rho_map in btree_map(1u64..=144, complex(), 1..12),
    ) {
        let mut a = ComplexMatrix::zeros(12, 12, IndexOrigin::One);
        for (&(m, n), &v) in &entries {
            a.set_entry(m as usize, n as usize, v);
        }
        let mut rho = SymbolSequence::multiplicative();
        let mut rho_is_zero = true;
        for (&k, &v) in &rho_map {
            rho.set(k, v).unwrap();
            rho_is_zero &= v == Complex64::new(0.0, 0.0);
        }
        prop_assume!(!rho_is_zero);
        let span = 144usize;
        let helson = helson_truncation(&rho, span).unwrap();
        let direct = trace_pairing(&helson, &a.padded(span, span)).unwrap();
        let projected = helson_truncation(
            &helsonlab::projections::helson_average(&a).unwrap(),
            span,
        )
        .unwrap();
        let through = trace_pairing(&helson, &projected).unwrap();
        prop_assert!((direct - through).norm() <= 1e-10);
    }

    #[test]
    fn helson_projection_is_idempotent_on_its_range(
        rho in symbol(SymbolKind::Multiplicative, 60),
        alpha in 1.0..3.0f64,
        beta in 1.0..3.0f64,
    ) {
        let w = multiplicative_weight_family(alpha, beta).unwrap();
        let realized = projection_output_matrix(&rho).unwrap();
        let back = helsonlab::projections::helson_weighted_average(&realized, &w).unwrap();
        prop_assert!(back.max_abs_diff(&rho).unwrap() <= 1e-12);
    }
}

#[derive(Debug)]
struct BlockSpec {
    entries: Vec<Complex64>,
    size: usize,
}

fn block(max: usize) -> impl Strategy<Value = BlockSpec> {
    (2..=max).prop_flat_map(|size| {
        vec(complex(), size * size).prop_map(move |entries| BlockSpec { entries, size })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn assembly_restricts_back_to_its_blocks(b2 in block(3), b3 in block(2)) {
        use helsonlab::schatten::{multiplicative_assemble, restrict_prime, LocalBlockFamily};
        let build = |spec: &BlockSpec| {
            let mut m = ComplexMatrix::zeros(spec.size, spec.size, IndexOrigin::Zero);
            for i in 0..spec.size {
                for j in 0..spec.size {
                    m.set_entry(i, j, spec.entries[i * spec.size + j]);
                }
            }
            m.set_entry(0, 0, Complex64::new(1.0, 0.0));
            m
        };
        let m2 = build(&b2);
        let m3 = build(&b3);
        let family = LocalBlockFamily::new(vec![(2, m2.clone()), (3, m3.clone())]).unwrap();
        let assembled = multiplicative_assemble(&family, 36).unwrap();
        let back2 = restrict_prime(&assembled, 2, m2.rows()).unwrap();
        let back3 = restrict_prime(&assembled, 3, m3.rows()).unwrap();
        prop_assert!(back2.max_abs_diff(&m2).unwrap() == 0.0);
        prop_assert!(back3.max_abs_diff(&m3).unwrap() == 0.0);
    }
}

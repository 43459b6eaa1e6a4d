mod common;
#[path = "common/jacobi.rs"]
mod jacobi;

use c2g_core::lowrank::truncated;
use c2g_core::{reconstruct, svd_decompose, RankPolicy};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn eckart_young_on_random_matrices() {
    let mut r = common::rng(31);
    for _ in 0..50 {
        let (h, w) = (r.random_range(1..=64), r.random_range(1..=64));
        let m = DMatrix::from_fn(h, w, |_, _| r.random_range(-100.0..100.0));
        let f = svd_decompose(&m).unwrap();
        let k = r.random_range(1..=h.min(w));
        let err = (&m - reconstruct(&f, &RankPolicy::FixedK { k })).norm();
        let dropped = f.s.iter().skip(k).map(|s| s * s).sum::<f64>().sqrt();
        let roundoff = f64::EPSILON * 64.0 * h.max(w) as f64 * m.norm();
        assert!(
            (err - dropped).abs() <= 1e-8 * dropped + roundoff,
            "{err} vs {dropped}"
        );
    }
}

#[test]
fn singular_values_match_jacobi_reference() {
    let mut r = common::rng(47);
    for trial in 0..40 {
        let (h, w) = (r.random_range(1..=24), r.random_range(1..=24));
        let rank = r.random_range(1..=h.min(w));
        let a = DMatrix::from_fn(h, rank, |_, _| r.random_range(-10.0..10.0));
        let b = DMatrix::from_fn(rank, w, |_, _| r.random_range(-10.0..10.0));
        let m = if trial % 2 == 0 {
            a * b
        } else {
            DMatrix::from_fn(h, w, |_, _| r.random_range(-10.0..10.0))
        };
        let got = svd_decompose(&m).unwrap();
        let want = jacobi::singular_values(&m);
        let scale = want[0].max(1.0);
        for (g, e) in got.s.iter().zip(&want) {
            assert!(
                (g - e).abs() <= 1e-11 * scale,
                "{h}x{w} rank {rank}: {g} vs {e}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn full_rank_reconstructs(h in 1usize..16, w in 1usize..16, seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let m = DMatrix::from_fn(h, w, |_, _| r.random_range(-60.0..60.0));
        let f = svd_decompose(&m).unwrap();
        let rec = reconstruct(&f, &RankPolicy::default());
        prop_assert!((&rec - &m).norm() <= 1e-8 * m.norm().max(1e-300));
        let n = h.min(w);
        prop_assert!((f.u.transpose() * &f.u - DMatrix::identity(n, n)).amax() < 1e-8);
        prop_assert!((f.v.transpose() * &f.v - DMatrix::identity(n, n)).amax() < 1e-8);
        prop_assert!(f.s.iter().zip(f.s.iter().skip(1)).all(|(a, b)| a >= b));
    }

    #[test]
    fn low_rank_products_are_recovered(h in 2usize..12, w in 2usize..12, rank in 1usize..3, seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let rank = rank.min(h.min(w));
        let a = DMatrix::from_fn(h, rank, |_, _| r.random_range(-5.0..5.0));
        let b = DMatrix::from_fn(rank, w, |_, _| r.random_range(-5.0..5.0));
        let m = a * b;
        let f = svd_decompose(&m).unwrap();
        let k = RankPolicy::default().retained_rank(&f);
        prop_assert!(k <= rank);
        prop_assert!((truncated(&f, rank) - &m).norm() <= 1e-9 * m.norm().max(1.0));
    }
}

//! Central finite differences against the analytic BPTT gradients.

mod common;

use common::{compare, point, REL_TOL};

#[test]
fn every_parameter_matches_finite_differences() {
    for (seed, labels) in [(42, [1, 0, 1]), (45, [1, 0, 1]), (46, [1, 0, 1])] {
        let mut pt = point(seed, labels);
        let rows = compare(&mut pt);
        assert_eq!(rows.len(), 460);
        // Central differences resolve about ulp(loss)/ε ≈ 1e-11, so the point
        // must have no vanishing gradients for the relative check to mean anything.
        let min = rows.iter().map(|r| r.1.abs()).fold(f64::MAX, f64::min);
        assert!(min > 1e-6, "seed {seed}: degenerate check point (min |g| = {min:e})");
        for (name, a, fd) in rows {
            let rel = (a - fd).abs() / a.abs().max(fd.abs()).max(1e-8);
            assert!(rel < REL_TOL, "seed {seed} {name}: analytic {a:e} fd {fd:e} rel {rel:e}");
        }
    }
}

#[test]
fn arbitrary_points_agree_in_absolute_terms() {
    for seed in 1..6 {
        let mut pt = point(seed, [(seed % 2) as u8, 1, 0]);
        for (name, a, fd) in compare(&mut pt) {
            assert!((a - fd).abs() < 1e-9, "seed {seed} {name}: {a:e} vs {fd:e}");
        }
    }
}

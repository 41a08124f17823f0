//! Parameter grids.

use std::f64::consts::PI;

/// Coprime `(p, q)` with `0 < q < p`, `p ≤ p_max`, `q ≤ q_max`, and
/// `Δ = cos(qπ/p)`, ordered by `p` then `q`.
pub fn rational_grid(p_max: u32, q_max: u32) -> Vec<(u32, u32, f64)> {
    let mut out = Vec::new();
    for p in 2..=p_max {
        for q in 1..p.min(q_max.saturating_add(1)) {
            if gcd(p, q) == 1 {
                out.push((p, q, (q as f64 * PI / p as f64).cos()));
            }
        }
    }
    out
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `a, a + step, …` up to and including `b`.
pub fn linear_range(a: usize, b: usize, step: usize) -> Vec<usize> {
    (a..=b).step_by(step.max(1)).collect()
}

/// `points` integers spaced evenly in `log n` over `[a, b]`, deduplicated.
pub fn log_range(a: usize, b: usize, points: usize) -> Vec<usize> {
    if points <= 1 || a == b {
        return vec![a];
    }
    let (la, lb) = ((a as f64).ln(), (b as f64).ln());
    let mut out: Vec<usize> = (0..points)
        .map(|k| (la + (lb - la) * k as f64 / (points - 1) as f64).exp().round() as usize)
        .collect();
    out.dedup();
    out
}

/// `η/π` on `(0, 1)` shifted off every small-denominator rational by the
/// golden-ratio fraction of a cell.
pub fn irrational_eta_fractions(points: usize) -> Vec<f64> {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    (0..points).map(|k| (k as f64 + phi) / points as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grids() {
        let g: Vec<(u32, u32)> = rational_grid(3, 3).iter().map(|&(p, q, _)| (p, q)).collect();
        assert_eq!(g, vec![(2, 1), (3, 1), (3, 2)]);
        assert_eq!(rational_grid(5, 5).len(), 9);
        assert_eq!(rational_grid(5, 1).len(), 4);
        assert!(rational_grid(1, 1).is_empty());
    }

    #[test]
    fn totient_counts() {
        let phi = |p: u32| (1..p).filter(|&q| gcd(p, q) == 1).count();
        let want: usize = (2..=60).map(phi).sum();
        assert_eq!(rational_grid(60, 60).len(), want);
        assert!(rational_grid(60, 60).iter().all(|&(_, _, d)| d > -1.0 && d < 1.0));
    }

    #[test]
    fn ranges() {
        assert_eq!(linear_range(2, 10, 4), vec![2, 6, 10]);
        assert_eq!(log_range(10, 10_000, 4), vec![10, 100, 1000, 10_000]);
        let r = log_range(2, 5, 10);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        assert_eq!((r[0], *r.last().unwrap()), (2, 5));
        let x = irrational_eta_fractions(50);
        assert!(x.iter().all(|&v| v > 0.0 && v < 1.0));
    }
}

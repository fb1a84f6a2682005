//! Two-sample Kolmogorov–Smirnov distance.

/// `sup_x |F_a(x) - F_b(x)|` for the empirical distribution functions of two
/// samples. NaNs are rejected by returning `None`, as are empty samples.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.is_empty() || b.is_empty() || a.iter().chain(b).any(|v| v.is_nan()) {
        return None;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Some(d)
}

/// Asymptotic critical distance at level `alpha`:
/// `c(α) sqrt((n + m) / (n m))` with `c(α) = sqrt(-ln(α / 2) / 2)`.
pub fn ks_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n * m) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_disjoint() {
        let a = [0.1, 0.2, 0.3];
        assert_eq!(ks_distance(&a, &a), Some(0.0));
        assert_eq!(ks_distance(&a, &[1.0, 2.0]), Some(1.0));
        assert_eq!(ks_distance(&[], &a), None);
    }

    #[test]
    fn interleaved() {
        // F_a - F_b peaks at 0.5 after {1, 2} vs nothing below 2.5.
        let d = ks_distance(&[1.0, 2.0, 3.0, 4.0], &[2.5, 3.5, 4.5, 5.5]).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        let d = ks_distance(&[1.0, 1.0, 2.0], &[1.0, 2.0, 2.0]).unwrap();
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn critical_value() {
        assert!((ks_critical(1000, 1000, 0.05) - 0.0607).abs() < 1e-3);
    }
}

//! Closed-form spectra of the two exactly solvable models, used as ground
//! truth by the tests and the acceptance suite.
//!
//! Model 1 (p²+q²-normalized isotropic pair with an i·a·xy coupling)
//! separates in rotated modes with ω² = 1 ± i·a/2:
//!   E_mn = 2(m+n+1)·ω_R + 2(m−n)·i·ω_I,
//!   ω_R = √(½ + ½√(1+a²/4)),  ω_I = a/(4ω_R).
//!
//! Model 2 (2x²+y² anisotropic pair, same coupling) has
//!   E_mn = (2m+1)ω₁ + (2n+1)ω₂,
//!   ω₁,₂ = √(3/2 ± √(1−a²)/2),
//! real for |a| ≤ 1 with the exceptional point at a = 1.

use num_complex::Complex64;

/// (ω_R, ω_I) for model 1.
pub fn solvable1_frequencies(a: f64) -> (f64, f64) {
    let omega_r = (0.5 + 0.5 * (1.0 + a * a / 4.0).sqrt()).sqrt();
    let omega_i = a / (4.0 * omega_r);
    (omega_r, omega_i)
}

/// E_mn for model 1; real iff m = n (for a ≠ 0).
pub fn solvable1_energy(m: u32, n: u32, a: f64) -> Complex64 {
    let (wr, wi) = solvable1_frequencies(a);
    Complex64::new(
        2.0 * (m + n + 1) as f64 * wr,
        2.0 * (m as f64 - n as f64) * wi,
    )
}

/// (ω₁, ω₂) for model 2 on the principal branch; beyond |a| = 1 they form a
/// conjugate pair (that region is an extrapolation of the closed form).
pub fn solvable2_frequencies(a: f64) -> (Complex64, Complex64) {
    let disc = Complex64::new(1.0 - a * a, 0.0).sqrt();
    let w1 = (Complex64::new(1.5, 0.0) + disc * 0.5).sqrt();
    let w2 = (Complex64::new(1.5, 0.0) - disc * 0.5).sqrt();
    (w1, w2)
}

/// E_mn for model 2; real for |a| ≤ 1.
pub fn solvable2_energy(m: u32, n: u32, a: f64) -> Complex64 {
    let (w1, w2) = solvable2_frequencies(a);
    w1 * (2 * m + 1) as f64 + w2 * (2 * n + 1) as f64
}

/// The exceptional point of model 2.
pub const SOLVABLE2_EXCEPTIONAL_POINT: f64 = 1.0;

/// C₂ᵥ label of the (m,n) rotated-mode state of model 1:
/// (even,even) → A₁, (odd,odd) → A₂, (odd,even) → B₁, (even,odd) → B₂.
pub fn solvable1_symmetry_label(m: u32, n: u32) -> &'static str {
    match (m % 2, n % 2) {
        (0, 0) => "A1",
        (1, 1) => "A2",
        (1, 0) => "B1",
        (0, 1) => "B2",
        _ => unreachable!(),
    }
}

/// C₂ label for model 2: overall parity of m+n.
pub fn solvable2_symmetry_label(m: u32, n: u32) -> &'static str {
    if (m + n) % 2 == 0 {
        "A"
    } else {
        "B"
    }
}

/// Closed-form eigenvalues of model 1 restricted to one irrep, the lowest
/// `count` sorted by (re, im).
pub fn solvable1_block_spectrum(irrep: &str, a: f64, count: usize) -> Vec<Complex64> {
    let mut vals = Vec::new();
    let reach = (2 * count + 4) as u32;
    for m in 0..reach {
        for n in 0..reach {
            if solvable1_symmetry_label(m, n) == irrep {
                vals.push(solvable1_energy(m, n, a));
            }
        }
    }
    sort_levels(&mut vals);
    vals.truncate(count);
    vals
}

/// Closed-form eigenvalues of model 2 restricted to one irrep.
pub fn solvable2_block_spectrum(irrep: &str, a: f64, count: usize) -> Vec<Complex64> {
    let mut vals = Vec::new();
    let reach = (2 * count + 4) as u32;
    for m in 0..reach {
        for n in 0..reach {
            if solvable2_symmetry_label(m, n) == irrep {
                vals.push(solvable2_energy(m, n, a));
            }
        }
    }
    sort_levels(&mut vals);
    vals.truncate(count);
    vals
}

pub fn sort_levels(vals: &mut [Complex64]) {
    vals.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model1_reference_values() {
        let e = solvable1_energy(0, 0, 0.5);
        assert!((e.re - 2.0153294552).abs() < 1e-8);
        assert!(e.im.abs() < 1e-15);
        let e = solvable1_energy(1, 0, 0.5);
        assert!((e.re - 4.0306589103).abs() < 1e-8);
        assert!((e.im - 0.2480983934).abs() < 1e-8);
        // Hermitian limit
        let e = solvable1_energy(3, 2, 0.0);
        assert_eq!(e, Complex64::new(12.0, 0.0));
    }

    #[test]
    fn model1_conjugate_symmetry() {
        for a in [0.1, 0.7, 2.5] {
            for (m, n) in [(0, 1), (2, 5), (4, 4)] {
                let e1 = solvable1_energy(m, n, a);
                let e2 = solvable1_energy(n, m, a);
                assert!((e1 - e2.conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn model2_reference_values() {
        let e = solvable2_energy(0, 0, 0.6);
        assert!((e.re - (1.9f64.sqrt() + 1.1f64.sqrt())).abs() < 1e-12);
        assert!((e.re - 2.42721372).abs() < 1e-8);
        assert!(e.im.abs() < 1e-15);
        // coalescence at the exceptional point
        let e = solvable2_energy(0, 0, 1.0);
        assert!((e.re - 2.0 * 1.5f64.sqrt()).abs() < 1e-12);
        assert!((e.re - 2.44948975).abs() < 1e-8);
        // decoupled limit
        let e = solvable2_energy(2, 1, 0.0);
        assert!((e.re - (5.0 * 2f64.sqrt() + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn model2_real_inside_complex_outside() {
        for a in [0.1, 0.5, 0.9, 0.999] {
            for (m, n) in [(0, 0), (1, 3), (4, 2)] {
                assert!(solvable2_energy(m, n, a).im.abs() < 1e-12);
            }
        }
        for a in [1.01, 1.5] {
            let e = solvable2_energy(1, 0, a);
            assert!(e.im.abs() > 1e-3);
            // conjugate pairing under m↔n
            let p = solvable2_energy(0, 1, a);
            assert!((e - p.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn symmetry_labels() {
        assert_eq!(solvable1_symmetry_label(0, 0), "A1");
        assert_eq!(solvable1_symmetry_label(1, 1), "A2");
        assert_eq!(solvable1_symmetry_label(1, 0), "B1");
        assert_eq!(solvable1_symmetry_label(0, 1), "B2");
        assert_eq!(solvable2_symmetry_label(0, 0), "A");
        assert_eq!(solvable2_symmetry_label(1, 2), "B");
    }
}

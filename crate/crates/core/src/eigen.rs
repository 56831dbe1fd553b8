//! Dense complex non-symmetric eigensolver: Householder reduction to upper
//! Hessenberg form followed by implicitly shifted QR with deflation, then
//! eigenvectors by back-substitution on the triangular Schur factor.
//!
//! The worker is generic over the float type; the public API is the f64
//! instantiation used by the spectra code. Every returned pair is meant to
//! satisfy ‖Hv − Ev‖ ≤ 1e−10·‖H‖ — callers check via [`max_residual`].

use crate::error::{PtError, Result};
use crate::matrix::Mat;
use num_complex::Complex;
use num_traits::Float;

type C<F> = Complex<F>;

/// Row-major square working storage.
struct Dense<F> {
    n: usize,
    a: Vec<C<F>>,
}

impl<F: Float> Dense<F> {
    fn zeros(n: usize) -> Self {
        Dense { n, a: vec![C::new(F::zero(), F::zero()); n * n] }
    }

    fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            *m.at_mut(i, i) = C::new(F::one(), F::zero());
        }
        m
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> C<F> {
        self.a[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut C<F> {
        &mut self.a[i * self.n + j]
    }

    fn frobenius(&self) -> F {
        self.a
            .iter()
            .fold(F::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }
}

fn f<F: Float>(x: f64) -> F {
    F::from(x).expect("float constant conversion")
}

/// Complex Givens rotation [[c, s], [−s̄, c]] (c real) with G·[a; b] = [r; 0].
fn givens<F: Float>(a: C<F>, b: C<F>) -> (F, C<F>, C<F>) {
    let zero = F::zero();
    if b.norm_sqr() == zero {
        return (F::one(), C::new(zero, zero), a);
    }
    if a.norm_sqr() == zero {
        let bn = b.norm();
        return (zero, b.conj() / bn, C::new(bn, zero));
    }
    let an = a.norm();
    let d = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = an / d;
    let phase = a / an;
    let s = phase * b.conj() / d;
    let r = phase * d;
    (c, s, r)
}

/// Householder reduction to upper Hessenberg form; returns Q with A = Q H Qᴴ.
fn hessenberg<F: Float>(h: &mut Dense<F>, q: &mut Dense<F>) {
    let n = h.n;
    if n < 3 {
        return;
    }
    let zero = F::zero();
    for k in 0..n - 2 {
        // column k below the subdiagonal
        let mut xnorm2 = zero;
        for i in k + 1..n {
            xnorm2 = xnorm2 + h.at(i, k).norm_sqr();
        }
        let xnorm = xnorm2.sqrt();
        if xnorm == zero {
            continue;
        }
        let x0 = h.at(k + 1, k);
        let phase = if x0.norm() == zero {
            C::new(F::one(), zero)
        } else {
            x0 / x0.norm()
        };
        let beta = -phase * xnorm;
        // u = x − β e₁, normalized
        let mut u: Vec<C<F>> = (k + 1..n).map(|i| h.at(i, k)).collect();
        u[0] = u[0] - beta;
        let unorm2 = u.iter().fold(zero, |acc, z| acc + z.norm_sqr());
        if unorm2 == zero {
            continue;
        }
        let unorm = unorm2.sqrt();
        for z in u.iter_mut() {
            *z = *z / unorm;
        }
        let two = f::<F>(2.0);
        // rows k+1.. from the left: A ← (I − 2uuᴴ) A
        for j in k..n {
            let mut dot = C::new(zero, zero);
            for (idx, i) in (k + 1..n).enumerate() {
                dot = dot + u[idx].conj() * h.at(i, j);
            }
            dot = dot * two;
            for (idx, i) in (k + 1..n).enumerate() {
                let v = h.at(i, j) - u[idx] * dot;
                *h.at_mut(i, j) = v;
            }
        }
        // columns k+1.. from the right: A ← A (I − 2uuᴴ)
        for i in 0..n {
            let mut dot = C::new(zero, zero);
            for (idx, jj) in (k + 1..n).enumerate() {
                dot = dot + h.at(i, jj) * u[idx];
            }
            dot = dot * two;
            for (idx, jj) in (k + 1..n).enumerate() {
                let v = h.at(i, jj) - dot * u[idx].conj();
                *h.at_mut(i, jj) = v;
            }
        }
        // accumulate Q
        for i in 0..n {
            let mut dot = C::new(zero, zero);
            for (idx, jj) in (k + 1..n).enumerate() {
                dot = dot + q.at(i, jj) * u[idx];
            }
            dot = dot * two;
            for (idx, jj) in (k + 1..n).enumerate() {
                let v = q.at(i, jj) - dot * u[idx].conj();
                *q.at_mut(i, jj) = v;
            }
        }
        // clean the annihilated entries
        *h.at_mut(k + 1, k) = beta;
        for i in k + 2..n {
            *h.at_mut(i, k) = C::new(zero, zero);
        }
    }
}

/// Eigenvalues of [[a, b], [c, d]], scaled for stability.
fn eig2x2<F: Float>(a: C<F>, b: C<F>, c: C<F>, d: C<F>) -> (C<F>, C<F>) {
    let zero = F::zero();
    let s = a.norm() + b.norm() + c.norm() + d.norm();
    if s == zero {
        return (C::new(zero, zero), C::new(zero, zero));
    }
    let (a, b, c, d) = (a / s, b / s, c / s, d / s);
    let half = f::<F>(0.5);
    let tr = (a + d) * half;
    let det = (a - tr) * (d - tr) - b * c;
    let disc = (-det).sqrt();
    (
        (tr + disc) * s,
        (tr - disc) * s,
    )
}

/// Implicitly shifted QR on a Hessenberg matrix; returns false when the
/// iteration budget runs out. On success `h` is upper triangular.
fn qr_iterate<F: Float>(h: &mut Dense<F>, q: &mut Dense<F>) -> bool {
    let n = h.n;
    if n < 2 {
        return true;
    }
    let zero = F::zero();
    let eps = F::epsilon();
    let smallnum = F::min_positive_value() / eps;
    let mut ihi = n - 1;
    let mut stalled = 0usize;
    let mut total = 0usize;
    let budget = 40 * n.max(8);
    while total < budget {
        // deflate tiny subdiagonals
        let mut k = ihi;
        let mut lo = 0;
        while k >= 1 {
            let sub = h.at(k, k - 1).norm();
            let tst = h.at(k - 1, k - 1).norm() + h.at(k, k).norm();
            let tst = if tst == zero { h.frobenius() } else { tst };
            if sub <= eps * tst || sub <= smallnum {
                *h.at_mut(k, k - 1) = C::new(zero, zero);
                lo = k;
                break;
            }
            k -= 1;
        }
        if lo == ihi || ihi == 0 {
            // 1×1 block converged
            if ihi == 0 {
                return true;
            }
            ihi -= 1;
            stalled = 0;
            continue;
        }
        // also deflate from the bottom if the last subdiagonal is negligible
        if h.at(ihi, ihi - 1).norm() == zero {
            ihi -= 1;
            stalled = 0;
            continue;
        }
        total += 1;
        stalled += 1;
        // shift selection
        let m = ihi;
        let mu = if stalled % 16 == 0 {
            h.at(m, m) + C::new(f::<F>(0.75) * h.at(m, m - 1).norm(), zero)
        } else {
            let (e1, e2) = eig2x2(
                h.at(m - 1, m - 1),
                h.at(m - 1, m),
                h.at(m, m - 1),
                h.at(m, m),
            );
            let hm = h.at(m, m);
            if (e1 - hm).norm() <= (e2 - hm).norm() {
                e1
            } else {
                e2
            }
        };
        // implicit single-shift sweep over [lo..=m]
        let mut x = h.at(lo, lo) - mu;
        let mut z = h.at(lo + 1, lo);
        for k in lo..m {
            let (c, s, _) = givens(x, z);
            let cs = C::new(c, zero);
            // rows k, k+1
            let jstart = k.saturating_sub(1).max(lo);
            for j in jstart..n {
                let t1 = h.at(k, j);
                let t2 = h.at(k + 1, j);
                *h.at_mut(k, j) = cs * t1 + s * t2;
                *h.at_mut(k + 1, j) = -s.conj() * t1 + cs * t2;
            }
            // columns k, k+1
            let iend = (k + 2).min(m) + 1;
            for i in 0..iend {
                let t1 = h.at(i, k);
                let t2 = h.at(i, k + 1);
                *h.at_mut(i, k) = cs * t1 + s.conj() * t2;
                *h.at_mut(i, k + 1) = -s * t1 + cs * t2;
            }
            for i in 0..n {
                let t1 = q.at(i, k);
                let t2 = q.at(i, k + 1);
                *q.at_mut(i, k) = cs * t1 + s.conj() * t2;
                *q.at_mut(i, k + 1) = -s * t1 + cs * t2;
            }
            if k + 1 < m {
                x = h.at(k + 1, k);
                z = h.at(k + 2, k);
            }
        }
    }
    false
}

/// Eigenvectors from the triangular Schur factor by back-substitution.
fn triangular_vectors<F: Float>(t: &Dense<F>, q: &Dense<F>) -> Dense<F> {
    let n = t.n;
    let zero = F::zero();
    let eps = F::epsilon();
    let tnorm = t.frobenius();
    let guard = if tnorm == zero { eps } else { eps * tnorm };
    let mut vecs = Dense::zeros(n);
    let mut y = vec![C::new(zero, zero); n];
    for k in 0..n {
        for item in y.iter_mut() {
            *item = C::new(zero, zero);
        }
        y[k] = C::new(F::one(), zero);
        let lambda = t.at(k, k);
        for i in (0..k).rev() {
            let mut acc = C::new(zero, zero);
            for (j, yj) in y.iter().enumerate().take(k + 1).skip(i + 1) {
                acc = acc + t.at(i, j) * *yj;
            }
            let mut den = t.at(i, i) - lambda;
            if den.norm() < guard {
                den = C::new(guard, zero);
            }
            y[i] = -acc / den;
        }
        // v = Q y, normalized
        let mut nrm2 = zero;
        for i in 0..n {
            let mut acc = C::new(zero, zero);
            for (j, yj) in y.iter().enumerate().take(k + 1) {
                acc = acc + q.at(i, j) * *yj;
            }
            *vecs.at_mut(i, k) = acc;
            nrm2 = nrm2 + acc.norm_sqr();
        }
        let nrm = nrm2.sqrt();
        if nrm > zero {
            for i in 0..n {
                let v = vecs.at(i, k) / nrm;
                *vecs.at_mut(i, k) = v;
            }
        }
    }
    vecs
}

/// Eigenvalues and (right) eigenvectors of a dense complex matrix.
pub struct Eigen {
    /// sorted by (re, im)
    pub values: Vec<num_complex::Complex64>,
    /// columns matching `values`
    pub vectors: Mat<num_complex::Complex64>,
    /// max over pairs of ‖Av − λv‖ / ‖A‖_F
    pub max_rel_residual: f64,
}

fn to_dense(a: &Mat<num_complex::Complex64>) -> Dense<f64> {
    let n = a.n_rows();
    let mut d = Dense::zeros(n);
    for i in 0..n {
        for j in 0..n {
            *d.at_mut(i, j) = a[(i, j)];
        }
    }
    d
}

/// Full eigensolution with residual verification against the 1e−10 contract.
pub fn eigen_c64(a: &Mat<num_complex::Complex64>) -> Result<Eigen> {
    assert!(a.is_square(), "eigen_c64 needs a square matrix");
    let n = a.n_rows();
    if n == 0 {
        return Ok(Eigen { values: vec![], vectors: Mat::zeros(0, 0), max_rel_residual: 0.0 });
    }
    if a.row(0).iter().any(|z| !z.re.is_finite()) {
        return Err(PtError::InvalidArgument("non-finite matrix entry".into()));
    }
    let mut h = to_dense(a);
    let mut q = Dense::identity(n);
    hessenberg(&mut h, &mut q);
    if !qr_iterate(&mut h, &mut q) {
        return Err(PtError::EigenNoConvergence { size: n });
    }
    let vecs = triangular_vectors(&h, &q);
    // sort by (re, im), carrying vectors along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (h.at(i, i), h.at(j, j));
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    let values: Vec<_> = order.iter().map(|&i| h.at(i, i)).collect();
    let vectors = Mat::from_fn(n, n, |i, j| vecs.at(i, order[j]));
    let mut eig = Eigen { values, vectors, max_rel_residual: 0.0 };
    eig.max_rel_residual = max_residual(a, &eig);
    let contract = 1e-10;
    if eig.max_rel_residual > contract {
        return Err(PtError::ResidualTooLarge {
            size: n,
            residual: eig.max_rel_residual,
            contract,
        });
    }
    Ok(eig)
}

/// Eigenvalues only (still residual-checked through the full solve).
pub fn eigenvalues_c64(a: &Mat<num_complex::Complex64>) -> Result<Vec<num_complex::Complex64>> {
    Ok(eigen_c64(a)?.values)
}

/// max over pairs of ‖Av − λv‖₂ / ‖A‖_F.
pub fn max_residual(a: &Mat<num_complex::Complex64>, eig: &Eigen) -> f64 {
    let n = a.n_rows();
    let mut anorm = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            anorm += a[(i, j)].norm_sqr();
        }
    }
    let anorm = anorm.sqrt().max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for (k, lambda) in eig.values.iter().enumerate() {
        let mut r2 = 0.0;
        for i in 0..n {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += a[(i, j)] * eig.vectors[(j, k)];
            }
            acc -= lambda * eig.vectors[(i, k)];
            r2 += acc.norm_sqr();
        }
        worst = worst.max(r2.sqrt());
    }
    worst / anorm
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn companion(roots: &[Complex64]) -> Mat<Complex64> {
        // monic polynomial with the given roots
        let n = roots.len();
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in roots {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (i, ci) in coeffs.iter().enumerate() {
                next[i + 1] += *ci;
                next[i] -= *ci * r;
            }
            coeffs = next;
        }
        // coeffs[i] is the coefficient of λ^i, coeffs[n] = 1
        let mut m = Mat::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = c(1.0, 0.0);
        }
        for i in 0..n {
            m[(i, n - 1)] = -coeffs[i];
        }
        m
    }

    fn assert_matches(found: &[Complex64], expect: &[Complex64], tol: f64) {
        assert_eq!(found.len(), expect.len());
        let mut used = vec![false; expect.len()];
        for f in found {
            let mut best = usize::MAX;
            let mut bd = f64::INFINITY;
            for (i, e) in expect.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let d = (f - e).norm();
                if d < bd {
                    bd = d;
                    best = i;
                }
            }
            assert!(bd < tol, "{f} unmatched (closest {bd:.2e})");
            used[best] = true;
        }
    }

    #[test]
    fn diagonal_matrix() {
        let vals = [c(3.0, -1.0), c(-2.0, 0.5), c(0.0, 0.0), c(1.0, 1.0)];
        let mut m = Mat::zeros(4, 4);
        for (i, v) in vals.iter().enumerate() {
            m[(i, i)] = *v;
        }
        let eig = eigen_c64(&m).unwrap();
        assert_matches(&eig.values, &vals, 1e-12);
    }

    #[test]
    fn companion_roots_recovered() {
        let roots = vec![
            c(1.0, 0.0),
            c(-0.5, 0.25),
            c(2.0, -1.0),
            c(0.3, 0.0),
            c(-1.5, -0.75),
            c(0.3, 2.0),
        ];
        let m = companion(&roots);
        let eig = eigen_c64(&m).unwrap();
        assert_matches(&eig.values, &roots, 1e-8);
        assert!(eig.max_rel_residual < 1e-11);
    }

    #[test]
    fn hermitian_matrix_real_spectrum() {
        // pseudo-random Hermitian
        let n = 24;
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut rnd = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let z = if i == j { c(rnd(), 0.0) } else { c(rnd(), rnd()) };
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        let eig = eigen_c64(&m).unwrap();
        for v in &eig.values {
            assert!(v.im.abs() < 1e-10, "Hermitian eigenvalue {v} not real");
        }
        assert!(eig.max_rel_residual < 1e-12);
    }

    #[test]
    fn jordan_block_cluster() {
        // defective: eigenvalues still accurate to ~eps^(1/n), residual small
        let n = 4;
        let lam = c(1.5, 0.5);
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = lam;
            if i + 1 < n {
                m[(i, i + 1)] = c(1.0, 0.0);
            }
        }
        let eig = eigen_c64(&m).unwrap();
        for v in &eig.values {
            assert!((v - lam).norm() < 1e-3);
        }
        assert!(eig.max_rel_residual < 1e-10);
    }

    #[test]
    fn unitary_similarity_of_diagonal() {
        // Q D Qᴴ via a product of Givens-like rotations
        let n = 8;
        let vals: Vec<Complex64> = (0..n).map(|k| c(k as f64, ((k * k) % 5) as f64 * 0.3 - 0.6)).collect();
        let mut m = Mat::zeros(n, n);
        for (i, v) in vals.iter().enumerate() {
            m[(i, i)] = *v;
        }
        // rotate pairs
        for k in 0..n - 1 {
            let th = 0.3 + 0.1 * k as f64;
            let (cth, sth) = (th.cos(), th.sin());
            for j in 0..n {
                let a = m[(k, j)];
                let b = m[(k + 1, j)];
                m[(k, j)] = a * cth + b * sth;
                m[(k + 1, j)] = -a * sth + b * cth;
            }
            for i in 0..n {
                let a = m[(i, k)];
                let b = m[(i, k + 1)];
                m[(i, k)] = a * cth + b * sth;
                m[(i, k + 1)] = -a * sth + b * cth;
            }
        }
        let eig = eigen_c64(&m).unwrap();
        assert_matches(&eig.values, &vals, 1e-9);
    }
}

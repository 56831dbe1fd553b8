//! Exact Rayleigh–Schrödinger perturbation series in the coupling a for
//! block-diagonalized models, degenerate subspaces included.
//!
//! Within one (irrep,row) block the unperturbed part is diagonal, so the
//! wave-operator (Bloch) recursion applies with the model space D spanned by
//! the block states at one unperturbed energy ε:
//!
//!   Ω₀ = P,  Ωₖ = R[V·Ωₖ₋₁ − Σ_{m=1}^{k−1} Ωₖ₋ₘ·hₘ],   hₖ = P·V·Ωₖ₋₁,
//!
//! with R the reduced resolvent diag(1/(ε−ε_q)) on the complement. The
//! energies are the eigenvalue series of H_eff(a) = ε·1 + Σ aᵏ·hₖ; when the
//! degeneracy is lifted at the first nonvanishing order, the lifting matrix
//! is diagonalized exactly and the remaining orders follow from the
//! nondegenerate matrix-eigenvalue recurrence. The whole pipeline runs over
//! the exact ring, with a complex-float fallback when the lifting eigenvalues
//! escape the field.

use crate::error::{PtError, Result};
use crate::matrix::Mat;
use crate::models::Model;
use crate::scalar::{ExactScalar, Rational, Scalar};
use crate::spectra::BlockBasis;
use num_complex::Complex64;
use num_traits::Zero;

#[derive(Clone, Debug)]
pub enum SeriesCoeffs {
    Exact(Vec<ExactScalar>),
    /// fallback when exact lifting is impossible (never hit by the catalog)
    Float(Vec<Complex64>),
}

/// E(a) = Σ cₖ aᵏ for one level emerging from an unperturbed block level.
#[derive(Clone, Debug)]
pub struct PerturbationSeries {
    pub model: String,
    pub irrep: String,
    pub row: usize,
    /// shell of the unperturbed level
    pub shell0: u32,
    /// unperturbed energy (= c₀)
    pub eps0: Rational,
    /// index within the degenerate group, ordered by the lifting coefficient
    pub member: usize,
    pub coeffs: SeriesCoeffs,
}

impl PerturbationSeries {
    pub fn order(&self) -> usize {
        match &self.coeffs {
            SeriesCoeffs::Exact(v) => v.len() - 1,
            SeriesCoeffs::Float(v) => v.len() - 1,
        }
    }

    pub fn coeff_c64(&self, k: usize) -> Complex64 {
        match &self.coeffs {
            SeriesCoeffs::Exact(v) => v.get(k).map(|c| c.to_c64()).unwrap_or_default(),
            SeriesCoeffs::Float(v) => v.get(k).copied().unwrap_or_default(),
        }
    }

    pub fn exact(&self) -> Option<&[ExactScalar]> {
        match &self.coeffs {
            SeriesCoeffs::Exact(v) => Some(v),
            SeriesCoeffs::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.coeffs, SeriesCoeffs::Exact(_))
    }

    pub fn eval(&self, a: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..=self.order()).rev() {
            acc = acc * a + self.coeff_c64(k);
        }
        acc
    }

    /// Which powers carry nonzero coefficients (exactly, on the exact path).
    pub fn nonzero_orders(&self) -> Vec<usize> {
        (0..=self.order())
            .filter(|&k| match &self.coeffs {
                SeriesCoeffs::Exact(v) => !v[k].is_zero(),
                SeriesCoeffs::Float(v) => v[k].norm() > 1e-9,
            })
            .collect()
    }
}

/// Minimal truncation that makes all coefficients through `order` exact:
/// every virtual state reachable by `order` applications of the perturbation.
pub fn minimal_sufficient_shell(shell0: u32, order: usize, pert_degree: u32) -> u32 {
    shell0 + order as u32 * pert_degree
}

/// Bloch wave-operator recursion: returns h₁…h_order for the model space
/// `deg_idx` (all at unperturbed energy eps), over any scalar.
fn bloch_effective<S: Scalar>(
    b0_diag: &[S],
    v: &Mat<S>,
    deg_idx: &[usize],
    eps: &S,
    order: usize,
) -> Result<Vec<Mat<S>>> {
    let n = b0_diag.len();
    let d = deg_idx.len();
    // reduced resolvent weights on the complement
    let mut resolvent: Vec<Option<S>> = Vec::with_capacity(n);
    for (q, e_q) in b0_diag.iter().enumerate() {
        if deg_idx.contains(&q) {
            resolvent.push(None);
        } else {
            let delta = eps.clone() - e_q.clone();
            let inv = delta.inv_s().ok_or_else(|| {
                PtError::SeriesUnsupported {
                    model: String::new(),
                    reason: "degenerate group spans several block shells".into(),
                }
            })?;
            resolvent.push(Some(inv));
        }
    }
    let mut omega: Vec<Mat<S>> = Vec::with_capacity(order);
    let mut h: Vec<Mat<S>> = Vec::with_capacity(order);
    // Ω₀ = embedding of D
    let mut omega0 = Mat::zeros(n, d);
    for (c, &i) in deg_idx.iter().enumerate() {
        omega0[(i, c)] = S::one();
    }
    omega.push(omega0);
    for k in 1..=order {
        let v_omega = v.matmul(&omega[k - 1]);
        // hₖ = P V Ωₖ₋₁
        let mut hk = Mat::zeros(d, d);
        for (r, &i) in deg_idx.iter().enumerate() {
            for c in 0..d {
                hk[(r, c)] = v_omega[(i, c)].clone();
            }
        }
        h.push(hk);
        if k == order {
            break;
        }
        // Ωₖ = R[VΩₖ₋₁ − Σ_{m=1}^{k−1} Ωₖ₋ₘ hₘ]
        let mut rhs = v_omega;
        for m in 1..k {
            let corr = omega[k - m].matmul(&h[m - 1]);
            rhs = rhs.sub_mat(&corr);
        }
        let mut om_k = Mat::zeros(n, d);
        for (q, res) in resolvent.iter().enumerate() {
            if let Some(w) = res {
                for c in 0..d {
                    om_k[(q, c)] = rhs[(q, c)].clone() * w.clone();
                }
            }
        }
        omega.push(om_k);
    }
    Ok(h)
}

/// Eigenvalue series of A(a) = Σ aʲ·Aⱼ with A₀ diagonal and distinct;
/// returns the series for the p-th diagonal entry through `order`.
fn matrix_eigen_series<S: Scalar>(a_mats: &[Mat<S>], p: usize, order: usize) -> Result<Vec<S>> {
    let d = a_mats[0].n_rows();
    let a_at = |j: usize| -> Option<&Mat<S>> { a_mats.get(j) };
    let lam0 = a_mats[0][(p, p)].clone();
    let mut lam: Vec<S> = vec![lam0.clone()];
    let mut vecs: Vec<Vec<S>> = Vec::with_capacity(order + 1);
    let mut v0 = vec![S::zero(); d];
    v0[p] = S::one();
    vecs.push(v0);
    // inverse gaps (A₀[m][m] − λ₀)⁻¹
    let mut inv_gap: Vec<Option<S>> = Vec::with_capacity(d);
    for m in 0..d {
        if m == p {
            inv_gap.push(None);
        } else {
            let gap = a_mats[0][(m, m)].clone() - lam0.clone();
            let inv = gap.inv_s().ok_or_else(|| PtError::SeriesUnsupported {
                model: String::new(),
                reason: "degeneracy not lifted at leading order".into(),
            })?;
            inv_gap.push(Some(inv));
        }
    }
    for k in 1..=order {
        // u = Σ_{j=1}^{k} A_j v_{k−j}
        let mut u = vec![S::zero(); d];
        for j in 1..=k {
            if let Some(aj) = a_at(j) {
                let vk = &vecs[k - j];
                for r in 0..d {
                    let mut acc = u[r].clone();
                    for c in 0..d {
                        if vk[c].is_zero() || aj[(r, c)].is_zero() {
                            continue;
                        }
                        acc = acc + aj[(r, c)].clone() * vk[c].clone();
                    }
                    u[r] = acc;
                }
            }
        }
        let lam_k = u[p].clone();
        let mut vk = vec![S::zero(); d];
        for m in 0..d {
            if m == p {
                continue;
            }
            // v_k[m] = (Σ_{j=1}^{k−1} λ_j v_{k−j}[m] − u[m]) / (A₀[m][m] − λ₀)
            let mut acc = -u[m].clone();
            for j in 1..k {
                if vecs[k - j][m].is_zero() {
                    continue;
                }
                acc = acc + lam[j].clone() * vecs[k - j][m].clone();
            }
            vk[m] = acc * inv_gap[m].clone().unwrap();
        }
        lam.push(lam_k);
        vecs.push(vk);
    }
    Ok(lam)
}

/// Exact eigen-decomposition of a small matrix whose eigenvalues lie in the
/// field: d = 1 trivially, d = 2 via the quadratic formula.
fn exact_small_eigen(m: &Mat<ExactScalar>) -> Option<(Vec<ExactScalar>, Mat<ExactScalar>)> {
    let d = m.n_rows();
    match d {
        1 => Some((vec![m[(0, 0)].clone()], Mat::identity(1))),
        2 => {
            let tr = m[(0, 0)].clone() + m[(1, 1)].clone();
            let det = m[(0, 0)].clone() * m[(1, 1)].clone() - m[(0, 1)].clone() * m[(1, 0)].clone();
            let disc = tr.clone() * tr.clone() - ExactScalar::from_int(4) * det;
            let root = disc.sqrt_in_field()?;
            let half = ExactScalar::from_ratio(1, 2);
            let l1 = (tr.clone() + root.clone()) * half.clone();
            let l2 = (tr - root) * half;
            if l1 == l2 {
                return None;
            }
            let mut s = Mat::zeros(2, 2);
            for (c, lam) in [l1.clone(), l2.clone()].iter().enumerate() {
                // eigenvector of [[a,b],[c,d]]: (b, λ−a) or (λ−d, c)
                let (v0, v1) = if !m[(0, 1)].is_zero() {
                    (m[(0, 1)].clone(), lam.clone() - m[(0, 0)].clone())
                } else if !m[(1, 0)].is_zero() {
                    (lam.clone() - m[(1, 1)].clone(), m[(1, 0)].clone())
                } else {
                    // already diagonal
                    if c == 0 {
                        (ExactScalar::from_int(1), ExactScalar::zero())
                    } else {
                        (ExactScalar::zero(), ExactScalar::from_int(1))
                    }
                };
                s[(0, c)] = v0;
                s[(1, c)] = v1;
            }
            Some((vec![l1, l2], s))
        }
        _ => None,
    }
}

/// Series for one degenerate group over an arbitrary scalar, given the
/// effective Hamiltonians h₁…h_order and an eigen-decomposition hook for the
/// lifting matrix.
fn series_from_effective<S: Scalar>(
    eps: &S,
    h: &[Mat<S>],
    order: usize,
    eigen_hook: impl Fn(&Mat<S>) -> Option<(Vec<S>, Mat<S>)>,
) -> Result<Vec<Vec<S>>> {
    let d = h.first().map(|m| m.n_rows()).unwrap_or(1);
    if d == 1 {
        let mut coeffs = vec![eps.clone()];
        for hk in h.iter().take(order) {
            coeffs.push(hk[(0, 0)].clone());
        }
        return Ok(vec![coeffs]);
    }
    // first nonvanishing order lifts the degeneracy
    let k0 = match h.iter().position(|m| !m.is_zero_mat()) {
        Some(i) => i + 1,
        None => {
            // no lifting at all: flat series ε for every member
            let coeffs = std::iter::once(eps.clone())
                .chain(std::iter::repeat(S::zero()).take(order))
                .collect::<Vec<_>>();
            return Ok(vec![coeffs; d]);
        }
    };
    let (_, s) = eigen_hook(&h[k0 - 1]).ok_or_else(|| PtError::SeriesUnsupported {
        model: String::new(),
        reason: "lifting matrix not exactly diagonalizable".into(),
    })?;
    let s_inv = s.inverse().ok_or_else(|| PtError::SeriesUnsupported {
        model: String::new(),
        reason: "singular eigenvector matrix".into(),
    })?;
    // G_j = S⁻¹ h_{j+k0} S, j = 0…(order−k0)
    let mut g: Vec<Mat<S>> = Vec::new();
    for j in 0..=(order - k0) {
        match h.get(k0 - 1 + j) {
            Some(hm) => g.push(s_inv.matmul(&hm.matmul(&s))),
            None => g.push(Mat::zeros(d, d)),
        }
    }
    // sanity: G₀ diagonal with distinct entries (within roundoff for floats)
    for r in 0..d {
        for c in 0..d {
            if r != c && g[0][(r, c)].to_c64_s().norm() > 1e-9 * (1.0 + g[0][(r, r)].to_c64_s().norm()) {
                return Err(PtError::SeriesUnsupported {
                    model: String::new(),
                    reason: "lifting matrix diagonalization failed".into(),
                });
            }
        }
    }
    let mut out = Vec::with_capacity(d);
    for p in 0..d {
        let mu = matrix_eigen_series(&g, p, order - k0)?;
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = eps.clone();
        for (k, m) in mu.into_iter().enumerate() {
            coeffs[k0 + k] = m;
        }
        out.push(coeffs);
    }
    Ok(out)
}

fn sort_members<S: Scalar>(series: &mut [Vec<S>]) {
    series.sort_by(|x, y| {
        for (a, b) in x.iter().zip(y.iter()) {
            let (ca, cb) = (a.to_c64_s(), b.to_c64_s());
            let ord = ca
                .re
                .partial_cmp(&cb.re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(ca.im.partial_cmp(&cb.im).unwrap_or(std::cmp::Ordering::Equal));
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    });
}

/// Exact RS series for the block level at `level_index` (shell-major index
/// within the (irrep,row) block). Returns one series per member of the
/// degenerate group containing that level, sorted by coefficients.
///
/// `max_shell = None` uses the minimal sufficient shell; an explicit value
/// below it is rejected with the minimal shell in the error.
pub fn rs_series(
    model: &Model,
    irrep: &str,
    row: usize,
    level_index: usize,
    order: usize,
    max_shell: Option<u32>,
) -> Result<Vec<PerturbationSeries>> {
    rs_series_many(model, irrep, row, &[level_index], order, max_shell)
}

/// Series for several levels of one block, sharing the (expensive) exact
/// basis construction and block assembly.
pub fn rs_series_many(
    model: &Model,
    irrep: &str,
    row: usize,
    level_indices: &[usize],
    order: usize,
    max_shell: Option<u32>,
) -> Result<Vec<PerturbationSeries>> {
    if !model.fock_diagonal_h0 {
        return Err(PtError::SeriesUnsupported {
            model: model.name().into(),
            reason: "unperturbed part is not diagonal in the product basis".into(),
        });
    }
    let top = *level_indices.iter().max().ok_or_else(|| {
        PtError::InvalidArgument("rs_series_many needs at least one level".into())
    })?;
    // locate the levels' shells
    let mut probe = BlockBasis::new(model.group(), irrep, row);
    let mut grow = 2u32;
    while probe.len() <= top {
        probe.extend_to(grow)?;
        if grow > 200 {
            return Err(PtError::InvalidArgument(format!(
                "level index {top} unreachable in block {irrep}"
            )));
        }
        grow += 2;
    }
    let top_shell0 = level_indices
        .iter()
        .map(|&i| probe.vectors[i].shell)
        .max()
        .unwrap();
    let min_shell = minimal_sufficient_shell(top_shell0, order, model.pert_degree);
    let shell = match max_shell {
        None => min_shell,
        Some(s) if s < min_shell => {
            return Err(PtError::OrderNeedsShell { order, max_shell: s, min_shell })
        }
        Some(s) => s,
    };
    let basis = BlockBasis::build(model.group(), irrep, row, shell)?;
    let b0 = basis.assemble_exact(&model.h0());
    // diagonal unperturbed energies (exact rationals)
    let n = basis.len();
    let mut diag: Vec<ExactScalar> = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                assert!(b0[(i, j)].is_zero(), "unperturbed block must be diagonal");
            }
        }
        diag.push(b0[(i, i)].clone());
    }
    let v = basis
        .assemble_exact(&model.perturbation())
        .scale(&ExactScalar::i());
    let mut out = Vec::new();
    let mut done_eps: Vec<ExactScalar> = Vec::new();
    for &level_index in level_indices {
        let eps = diag[level_index].clone();
        if done_eps.contains(&eps) {
            continue;
        }
        done_eps.push(eps.clone());
        let shell0 = probe.vectors[level_index].shell;
        let eps_rat = eps
            .re
            .as_rational()
            .cloned()
            .filter(|_| eps.is_real())
            .ok_or_else(|| PtError::SeriesUnsupported {
                model: model.name().into(),
                reason: "unperturbed energies must be rational".into(),
            })?;
        let deg_idx: Vec<usize> = (0..n).filter(|&i| diag[i] == eps).collect();
        // exact attempt, then float fallback
        let exact_run = bloch_effective(&diag, &v, &deg_idx, &eps, order)
            .and_then(|h| series_from_effective(&eps, &h, order, exact_small_eigen));
        match exact_run {
            Ok(mut series) => {
                sort_members(&mut series);
                for (member, coeffs) in series.into_iter().enumerate() {
                    out.push(PerturbationSeries {
                        model: model.name().into(),
                        irrep: irrep.into(),
                        row,
                        shell0,
                        eps0: eps_rat.clone(),
                        member,
                        coeffs: SeriesCoeffs::Exact(coeffs),
                    });
                }
            }
            Err(PtError::SeriesUnsupported { .. }) => {
                // same pipeline over complex floats
                let diag_f: Vec<Complex64> = diag.iter().map(|d| d.to_c64()).collect();
                let v_f = v.map(|z| z.to_c64());
                let eps_f = eps.to_c64();
                let h = bloch_effective(&diag_f, &v_f, &deg_idx, &eps_f, order)?;
                let mut series = series_from_effective(&eps_f, &h, order, float_small_eigen)?;
                sort_members(&mut series);
                for (member, coeffs) in series.into_iter().enumerate() {
                    out.push(PerturbationSeries {
                        model: model.name().into(),
                        irrep: irrep.into(),
                        row,
                        shell0,
                        eps0: eps_rat.clone(),
                        member,
                        coeffs: SeriesCoeffs::Float(coeffs),
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn float_small_eigen(m: &Mat<Complex64>) -> Option<(Vec<Complex64>, Mat<Complex64>)> {
    let eig = crate::eigen::eigen_c64(m).ok()?;
    // distinctness check
    for (i, a) in eig.values.iter().enumerate() {
        for b in eig.values.iter().skip(i + 1) {
            if (a - b).norm() < 1e-9 * (1.0 + a.norm()) {
                return None;
            }
        }
    }
    Some((eig.values.clone(), eig.vectors.clone()))
}

/// Power parities appearing in the series of the lowest block levels.
#[derive(Clone, Debug)]
pub struct ParityEntry {
    pub level_index: usize,
    pub shell0: u32,
    pub member: usize,
    pub even_present: bool,
    pub odd_present: bool,
    pub exact: bool,
}

/// Which parities of powers of a appear among the lowest block levels.
pub fn series_parity_check(
    model: &Model,
    irrep: &str,
    row: usize,
    levels: usize,
    order: usize,
) -> Result<Vec<ParityEntry>> {
    let mut out = Vec::new();
    let mut covered = std::collections::BTreeSet::new();
    let mut idx = 0usize;
    while out.len() < levels {
        if covered.contains(&idx) {
            idx += 1;
            continue;
        }
        let series = rs_series(model, irrep, row, idx, order, None)?;
        let group = series.len();
        for s in series {
            let nz = s.nonzero_orders();
            out.push(ParityEntry {
                level_index: idx,
                shell0: s.shell0,
                member: s.member,
                even_present: nz.iter().any(|&k| k > 0 && k % 2 == 0),
                odd_present: nz.iter().any(|&k| k % 2 == 1),
                exact: s.is_exact(),
            });
        }
        for j in 0..group {
            covered.insert(idx + j);
        }
        idx += group;
    }
    out.truncate(levels);
    Ok(out)
}

/// |E_diag(a) − Σ cₖ aᵏ| for the level the series belongs to, using a
/// converged diagonalization at the same (irrep,row).
pub fn series_vs_diagonalization(
    model: &Model,
    series: &PerturbationSeries,
    a: f64,
    opts: &crate::spectra::ConvergeOpts,
) -> Result<f64> {
    let predicted = series.eval(a);
    let result = crate::spectra::converge(model, a, &series.irrep, series.row, opts)?;
    let best = result
        .levels
        .iter()
        .map(|l| (l.value - predicted).norm())
        .fold(f64::INFINITY, f64::min);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelId;
    use crate::scalar::{rat, ratio};
    use crate::spectra::ConvergeOpts;

    fn exact_coeff(s: &PerturbationSeries, k: usize) -> ExactScalar {
        s.exact().unwrap()[k].clone()
    }

    #[test]
    fn solvable1_ground_series_matches_closed_form_taylor() {
        // 2ω_R = 2 + a²/16 − 5a⁴/1024 + O(a⁶)
        let model = Model::new(ModelId::Solvable1);
        let s = rs_series(&model, "A1", 0, 0, 4, None).unwrap();
        assert_eq!(s.len(), 1);
        let s = &s[0];
        assert!(s.is_exact());
        assert_eq!(exact_coeff(s, 0), ExactScalar::from_int(2));
        assert_eq!(exact_coeff(s, 1), ExactScalar::zero());
        assert_eq!(exact_coeff(s, 2), ExactScalar::from_ratio(1, 16));
        assert_eq!(exact_coeff(s, 3), ExactScalar::zero());
        assert_eq!(exact_coeff(s, 4), ExactScalar::from_ratio(-5, 1024));
        // numerical cross-check against the closed form
        let a = 0.08;
        let diff = (s.eval(a) - crate::solvable::solvable1_energy(0, 0, a)).norm();
        assert!(diff < 1e-9, "series vs closed form: {diff:.2e}");
    }

    #[test]
    fn henon_heiles_ground_low_orders() {
        let model = Model::new(ModelId::HenonHeiles);
        let s = rs_series(&model, "A1", 0, 0, 4, None).unwrap();
        let s = &s[0];
        assert_eq!(exact_coeff(s, 0), ExactScalar::from_int(2));
        assert_eq!(exact_coeff(s, 2), ExactScalar::from_ratio(1, 18));
        assert_eq!(exact_coeff(s, 4), ExactScalar::from_ratio(-11, 864));
        assert_eq!(exact_coeff(s, 1), ExactScalar::zero());
        assert_eq!(exact_coeff(s, 3), ExactScalar::zero());
    }

    #[test]
    fn solvable1_first_order_lifted_pair() {
        // A1 levels at shell 2 ((2,0)/(0,2) rotated modes): E = 6ω_R ± 4iω_I
        let model = Model::new(ModelId::Solvable1);
        let series = rs_series(&model, "A1", 0, 1, 6, None).unwrap();
        assert_eq!(series.len(), 2);
        for s in &series {
            assert!(s.is_exact());
            assert_eq!(exact_coeff(s, 0), ExactScalar::from_int(6));
        }
        // first-order coefficients ±i
        let c1: Vec<ExactScalar> = series.iter().map(|s| exact_coeff(s, 1)).collect();
        assert!(c1.contains(&ExactScalar::i()));
        assert!(c1.contains(&-ExactScalar::i()));
        // evaluate against the closed form set at small a
        let a = 0.04;
        let mut got: Vec<Complex64> = series.iter().map(|s| s.eval(a)).collect();
        let mut expect = vec![
            crate::solvable::solvable1_energy(2, 0, a),
            crate::solvable::solvable1_energy(0, 2, a),
        ];
        crate::solvable::sort_levels(&mut got);
        crate::solvable::sort_levels(&mut expect);
        for (g, e) in got.iter().zip(expect.iter()) {
            assert!((g - e).norm() < 1e-10, "{g} vs {e}");
        }
    }

    #[test]
    fn henon_heiles_e_rows_identical_series() {
        let model = Model::new(ModelId::HenonHeiles);
        let s0 = rs_series(&model, "E", 0, 0, 6, None).unwrap();
        let s1 = rs_series(&model, "E", 1, 0, 6, None).unwrap();
        assert_eq!(s0.len(), 1);
        for k in 0..=6 {
            assert_eq!(exact_coeff(&s0[0], k), exact_coeff(&s1[0], k), "order {k}");
        }
    }

    #[test]
    fn coefficients_independent_of_extra_shell() {
        let model = Model::new(ModelId::HenonHeiles);
        let min = rs_series(&model, "A2", 0, 0, 4, None).unwrap();
        let shell = minimal_sufficient_shell(3, 4, 3);
        let more = rs_series(&model, "A2", 0, 0, 4, Some(shell + 3)).unwrap();
        for (a, b) in min.iter().zip(more.iter()) {
            for k in 0..=4 {
                assert_eq!(exact_coeff(a, k), exact_coeff(b, k));
            }
        }
    }

    #[test]
    fn insufficient_shell_rejected_with_minimum() {
        let model = Model::new(ModelId::HenonHeiles);
        let err = rs_series(&model, "A1", 0, 0, 8, Some(10)).unwrap_err();
        match err {
            PtError::OrderNeedsShell { min_shell, .. } => assert_eq!(min_shell, 24),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn unsupported_models_rejected() {
        for id in [ModelId::Solvable2, ModelId::PullenEdmonds] {
            let model = Model::new(id);
            let err = rs_series(&model, "A", 0, 0, 2, None).unwrap_err();
            assert!(matches!(err, PtError::SeriesUnsupported { .. }), "{id:?}");
        }
    }

    #[test]
    fn parity_patterns() {
        let model = Model::new(ModelId::Solvable1);
        // A1 block: even-power-only for the m=n members, odd powers on the
        // complex pair members
        let entries = series_parity_check(&model, "A1", 0, 3, 5).unwrap();
        assert!(!entries[0].odd_present, "ground is even-only");
        assert!(entries.iter().skip(1).any(|e| e.odd_present));
        // B1 block: odd powers present already for the lowest level
        let entries = series_parity_check(&model, "B1", 0, 1, 5).unwrap();
        assert!(entries[0].odd_present);
        // Hénon–Heiles: even only
        let model = Model::new(ModelId::HenonHeiles);
        for irrep in ["A1", "A2", "E"] {
            let entries = series_parity_check(&model, irrep, 0, 2, 6).unwrap();
            for e in &entries {
                assert!(!e.odd_present, "{irrep}: {e:?}");
                assert!(e.exact);
            }
        }
    }

    #[test]
    fn series_vs_diagonalization_henon_heiles() {
        let model = Model::new(ModelId::HenonHeiles);
        let s = rs_series(&model, "A1", 0, 0, 8, None).unwrap();
        let d = series_vs_diagonalization(
            &model,
            &s[0],
            0.1,
            &ConvergeOpts { levels: 3, tol: 1e-10, ..Default::default() },
        )
        .unwrap();
        assert!(d < 1e-9, "discrepancy {d:.2e}");
        // exact agreement at a = 0
        let d0 = series_vs_diagonalization(
            &model,
            &s[0],
            0.0,
            &ConvergeOpts { levels: 3, tol: 1e-10, ..Default::default() },
        )
        .unwrap();
        assert!(d0 < 1e-12);
    }

    #[test]
    fn discrepancy_scales_beyond_truncation_order() {
        // |E_diag − series_p(a)| ~ a^{p+2} under halving (even series)
        let model = Model::new(ModelId::HenonHeiles);
        let s = rs_series(&model, "A1", 0, 0, 4, None).unwrap();
        let opts = ConvergeOpts { levels: 2, tol: 1e-12, ..Default::default() };
        let d1 = series_vs_diagonalization(&model, &s[0], 0.2, &opts).unwrap();
        let d2 = series_vs_diagonalization(&model, &s[0], 0.1, &opts).unwrap();
        let exponent = (d1 / d2).log2();
        assert!((exponent - 6.0).abs() < 0.4, "fitted exponent {exponent}");
        let _ = (rat(0), ratio(1, 2));
    }
}

//! Symmetry-blocked assembly and dense complex eigensolution with
//! convergence control, plus reality/conjugacy classification.

use crate::eigen;
use crate::error::{PtError, Result};
use crate::fock::{shell_basis, FloatOperator, FockProduct, FockVector, OperatorPolynomial};
use crate::matrix::Mat;
use crate::models::Model;
use crate::pointgroup::{adapted_shell, CharacterTable, SymmetryAdaptedVector};
use crate::scalar::{rational_to_f64, ExactScalar, RadReal};
use num_complex::Complex64;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Default reality tolerance scale: |Im E| ≤ tol·(1+|Re E|) counts as real.
pub const REALITY_TOL: f64 = 1e-9;

/// Symmetry-adapted basis of one (irrep, row) block, grown shell by shell.
pub struct BlockBasis {
    pub irrep: String,
    pub row: usize,
    pub vectors: Vec<SymmetryAdaptedVector>,
    table: CharacterTable,
    built_shell: Option<u32>,
    float_cache: Vec<BTreeMap<FockProduct, Complex64>>,
}

impl BlockBasis {
    pub fn new(table: CharacterTable, irrep: &str, row: usize) -> Self {
        BlockBasis {
            irrep: irrep.to_string(),
            row,
            vectors: Vec::new(),
            table,
            built_shell: None,
            float_cache: Vec::new(),
        }
    }

    pub fn build(table: CharacterTable, irrep: &str, row: usize, max_shell: u32) -> Result<Self> {
        let mut b = Self::new(table, irrep, row);
        b.extend_to(max_shell)?;
        Ok(b)
    }

    /// Grow the basis to cover all shells ≤ max_shell (incremental).
    pub fn extend_to(&mut self, max_shell: u32) -> Result<()> {
        let from = self.built_shell.map(|s| s + 1).unwrap_or(0);
        for shell in from..=max_shell {
            let vs = adapted_shell(&self.table, &self.irrep, self.row, shell)?;
            for v in vs {
                self.float_cache.push(v.to_c64_normalized().into_iter().collect());
                self.vectors.push(v);
            }
        }
        self.built_shell = Some(self.built_shell.unwrap_or(0).max(max_shell));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Dense complex block ⟨vᵢ|H|vⱼ⟩ over the normalized vectors.
    pub fn assemble_c64(&self, op: &FloatOperator, degree: u32) -> Mat<Complex64> {
        let n = self.len();
        let mut out = Mat::zeros(n, n);
        for j in 0..n {
            let moved = op.apply(&self.float_cache[j]);
            let sj = self.vectors[j].shell;
            for i in 0..n {
                let si = self.vectors[i].shell;
                if si.abs_diff(sj) > degree {
                    continue;
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, c) in &self.float_cache[i] {
                    if let Some(w) = moved.get(k) {
                        acc += c.conj() * w;
                    }
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Exact block in the orthogonal (unnormalized) adapted basis:
    /// B[i][j] = ⟨vᵢ|H|vⱼ⟩ / ⟨vᵢ|vᵢ⟩ — the operator's expansion coefficients,
    /// similar to the normalized block, with entries in the exact ring.
    pub fn assemble_exact(&self, op: &OperatorPolynomial) -> Mat<ExactScalar> {
        let n = self.len();
        let degree = op.degree();
        let mut out = Mat::zeros(n, n);
        for j in 0..n {
            let moved = crate::fock::apply_op_u(op, &self.vectors[j].components);
            let sj = self.vectors[j].shell;
            for i in 0..n {
                let si = self.vectors[i].shell;
                if si.abs_diff(sj) > degree {
                    continue;
                }
                let num = self.vectors[i].components.inner(&moved);
                if num.is_zero() {
                    continue;
                }
                let inv_n2 = self.vectors[i]
                    .norm2
                    .inv()
                    .expect("adapted vectors have nonzero norm");
                out[(i, j)] = num * ExactScalar { re: inv_n2, im: RadReal::zero() };
            }
        }
        out
    }

    /// Exact cross-block matrix elements ⟨vᵢ|H|wⱼ⟩ against another block;
    /// zero for true symmetries of the operator ("different symmetry does
    /// not mix").
    pub fn cross_elements_exact(&self, other: &BlockBasis, op: &OperatorPolynomial) -> Vec<ExactScalar> {
        let mut out = Vec::new();
        for w in &other.vectors {
            let moved = crate::fock::apply_op_u(op, &w.components);
            for v in &self.vectors {
                out.push(v.components.inner(&moved));
            }
        }
        out
    }
}

/// One eigenvalue with its convergence and reality metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub value: Complex64,
    /// absolute change under the last shell increment (None on single solves)
    pub delta: Option<f64>,
    pub converged: bool,
    pub is_real: bool,
}

/// Eigenvalues of one (irrep, row) block at one coupling, sorted by
/// (re, im), with convergence metadata.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub model: String,
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub irrep: String,
    pub row: usize,
    pub shell: u32,
    pub levels: Vec<Level>,
    pub all_converged: bool,
}

impl SpectrumResult {
    pub fn values(&self) -> Vec<Complex64> {
        self.levels.iter().map(|l| l.value).collect()
    }

    pub fn lowest(&self, k: usize) -> Vec<Complex64> {
        self.levels.iter().take(k).map(|l| l.value).collect()
    }
}

fn reality_flag(v: Complex64, tol: f64) -> bool {
    v.im.abs() <= tol * (1.0 + v.re.abs())
}

fn model_params_f64(model: &Model) -> (f64, f64) {
    (rational_to_f64(&model.alpha), rational_to_f64(&model.beta))
}

/// Eigenvalues of one symmetry block at fixed truncation.
pub fn block_spectrum(
    model: &Model,
    a: f64,
    irrep: &str,
    row: usize,
    max_shell: u32,
) -> Result<SpectrumResult> {
    let basis = BlockBasis::build(model.group(), irrep, row, max_shell)?;
    block_spectrum_with(model, a, &basis)
}

/// Same, over an already-built basis (used by the convergence loop).
pub fn block_spectrum_with(model: &Model, a: f64, basis: &BlockBasis) -> Result<SpectrumResult> {
    let op = model.hamiltonian_f64(a);
    let fop = FloatOperator::from_op(&op);
    let matrix = basis.assemble_c64(&fop, op.degree());
    let values = eigen::eigenvalues_c64(&matrix)?;
    let (alpha, beta) = model_params_f64(model);
    Ok(SpectrumResult {
        model: model.name().to_string(),
        a,
        alpha,
        beta,
        irrep: basis.irrep.clone(),
        row: basis.row,
        shell: basis.built_shell().unwrap_or(0),
        levels: values
            .into_iter()
            .map(|value| Level {
                value,
                delta: None,
                converged: false,
                is_real: reality_flag(value, REALITY_TOL),
            })
            .collect(),
        all_converged: false,
    })
}

impl BlockBasis {
    pub fn built_shell(&self) -> Option<u32> {
        self.built_shell
    }
}

/// Full-basis spectrum (no symmetry blocking), sorted by (re, im).
pub fn full_spectrum(model: &Model, a: f64, max_shell: u32) -> Result<Vec<Complex64>> {
    let op = model.hamiltonian_f64(a);
    let basis = shell_basis(model.dim, max_shell);
    let m = crate::fock::assemble_matrix_c64(&op, &basis);
    eigen::eigenvalues_c64(&m)
}

/// Options for the shell-convergence loop.
#[derive(Clone, Debug)]
pub struct ConvergeOpts {
    /// number of lowest levels (by real part) to converge
    pub levels: usize,
    /// absolute per-level tolerance
    pub tol: f64,
    pub start_shell: Option<u32>,
    pub step: u32,
    pub shell_cap: u32,
}

impl Default for ConvergeOpts {
    fn default() -> Self {
        ConvergeOpts { levels: 6, tol: 1e-8, start_shell: None, step: 2, shell_cap: 60 }
    }
}

/// Increase max_shell until the lowest K eigenvalues each move by less than
/// tol under a shell increment. On hitting the cap the partial result is
/// returned with `all_converged = false`.
pub fn converge(
    model: &Model,
    a: f64,
    irrep: &str,
    row: usize,
    opts: &ConvergeOpts,
) -> Result<SpectrumResult> {
    let start = opts.start_shell.unwrap_or_else(|| {
        // enough shells that the K lowest unperturbed levels are present
        (2 * opts.levels as u32 + 4).min(opts.shell_cap)
    });
    let mut basis = BlockBasis::new(model.group(), irrep, row);
    basis.extend_to(start)?;
    let mut prev = block_spectrum_with(model, a, &basis)?;
    let mut shell = start;
    loop {
        if shell + opts.step > opts.shell_cap {
            prev.all_converged = false;
            return Ok(prev);
        }
        shell += opts.step;
        basis.extend_to(shell)?;
        let mut cur = block_spectrum_with(model, a, &basis)?;
        let k = opts.levels.min(cur.levels.len()).min(prev.levels.len());
        let deltas = nearest_deltas(
            &prev.levels.iter().map(|l| l.value).collect::<Vec<_>>(),
            &cur.levels.iter().map(|l| l.value).collect::<Vec<_>>(),
            k,
        );
        let mut all = k == opts.levels;
        for (i, lvl) in cur.levels.iter_mut().enumerate().take(k) {
            lvl.delta = Some(deltas[i]);
            lvl.converged = deltas[i] <= opts.tol;
            if !lvl.converged {
                all = false;
            }
        }
        cur.all_converged = all;
        if all {
            return Ok(cur);
        }
        prev = cur;
    }
}

/// Per-new-level distance to the nearest old level (greedy matching among the
/// k lowest of each).
fn nearest_deltas(old: &[Complex64], new: &[Complex64], k: usize) -> Vec<f64> {
    let old = &old[..k.min(old.len())];
    let new = &new[..k.min(new.len())];
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, n) in new.iter().enumerate() {
        for (j, o) in old.iter().enumerate() {
            pairs.push(((n - o).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut used_new = vec![false; new.len()];
    let mut used_old = vec![false; old.len()];
    let mut out = vec![f64::INFINITY; new.len()];
    for (d, i, j) in pairs {
        if used_new[i] || used_old[j] {
            continue;
        }
        used_new[i] = true;
        used_old[j] = true;
        out[i] = d;
    }
    out
}

/// Matching of B₁ eigenvalues against conjugated B₂ eigenvalues.
#[derive(Clone, Debug)]
pub struct PairingReport {
    /// (index in first, index in second, |E₁ − E₂*|)
    pub pairs: Vec<(usize, usize, f64)>,
    pub unmatched_first: Vec<usize>,
    pub unmatched_second: Vec<usize>,
    pub max_defect: f64,
}

impl PairingReport {
    pub fn fully_paired(&self) -> bool {
        self.unmatched_first.is_empty() && self.unmatched_second.is_empty()
    }
}

/// Greedy matching of each eigenvalue of `first` to a conjugated eigenvalue
/// of `second` within tol.
pub fn conjugate_pairing(
    first: &SpectrumResult,
    second: &SpectrumResult,
    tol: f64,
) -> Result<PairingReport> {
    if first.levels.len() != second.levels.len() {
        return Err(PtError::DimensionMismatch(format!(
            "{} vs {} levels",
            first.levels.len(),
            second.levels.len()
        )));
    }
    let a: Vec<Complex64> = first.levels.iter().map(|l| l.value).collect();
    let b: Vec<Complex64> = second.levels.iter().map(|l| l.value.conj()).collect();
    let mut cands: Vec<(f64, usize, usize)> = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let d = (x - y).norm();
            if d <= tol {
                cands.push((d, i, j));
            }
        }
    }
    cands.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut pairs = Vec::new();
    let mut max_defect = 0.0f64;
    for (d, i, j) in cands {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        max_defect = max_defect.max(d);
        pairs.push((i, j, d));
    }
    Ok(PairingReport {
        pairs,
        unmatched_first: (0..a.len()).filter(|&i| !used_a[i]).collect(),
        unmatched_second: (0..b.len()).filter(|&j| !used_b[j]).collect(),
        max_defect,
    })
}

/// Partition of a spectrum into real / conjugate-paired / unpaired values.
#[derive(Clone, Debug)]
pub struct RealityReport {
    pub real: Vec<usize>,
    /// (i, j) with E_i ≈ E_j*
    pub conjugate_pairs: Vec<(usize, usize)>,
    /// complex values without a partner: truncation artifacts, flagged
    pub unpaired: Vec<usize>,
}

/// Classify eigenvalues as real or conjugate pairs with tolerance
/// tol·(1+|Re E|).
pub fn reality_classify(result: &SpectrumResult, tol: f64) -> RealityReport {
    let vals: Vec<Complex64> = result.levels.iter().map(|l| l.value).collect();
    let mut real = Vec::new();
    let mut complex_idx = Vec::new();
    for (i, v) in vals.iter().enumerate() {
        if reality_flag(*v, tol) {
            real.push(i);
        } else {
            complex_idx.push(i);
        }
    }
    let mut used = vec![false; vals.len()];
    let mut pairs = Vec::new();
    for (pos, &i) in complex_idx.iter().enumerate() {
        if used[i] {
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for &j in complex_idx.iter().skip(pos + 1) {
            if used[j] {
                continue;
            }
            let d = (vals[i] - vals[j].conj()).norm();
            if best.map(|(bd, _)| d < bd).unwrap_or(true) {
                best = Some((d, j));
            }
        }
        if let Some((d, j)) = best {
            if d <= tol * (1.0 + vals[i].re.abs()) * 2.0 {
                used[i] = true;
                used[j] = true;
                pairs.push((i, j));
            }
        }
    }
    let unpaired = complex_idx.into_iter().filter(|&i| !used[i]).collect();
    RealityReport { real, conjugate_pairs: pairs, unpaired }
}

/// Union of all (irrep,row) block spectra of a model at one truncation.
pub fn all_blocks(model: &Model, a: f64, max_shell: u32) -> Result<Vec<SpectrumResult>> {
    let table = model.group();
    let mut out = Vec::new();
    for ir in &table.irreps {
        for row in 0..ir.dim {
            out.push(block_spectrum(model, a, &ir.label, row, max_shell)?);
        }
    }
    Ok(out)
}

/// Exact cross-irrep matrix elements all vanish (checked invariant of the
/// block decomposition).
pub fn cross_irrep_mixing_is_zero(model: &Model, a: f64, max_shell: u32) -> Result<bool> {
    let op = model.hamiltonian_f64(a);
    let table = model.group();
    let mut bases = Vec::new();
    for ir in &table.irreps {
        for row in 0..ir.dim {
            bases.push(BlockBasis::build(table.clone(), &ir.label, row, max_shell)?);
        }
    }
    for (i, a_basis) in bases.iter().enumerate() {
        for b_basis in bases.iter().skip(i + 1) {
            for v in a_basis.cross_elements_exact(b_basis, &op) {
                if !v.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// FockVector inner helper used by the exact cross checks.
pub fn overlap(a: &FockVector, b: &FockVector) -> ExactScalar {
    a.inner(b)
}

/// Greedy nearest-neighbour matching defect between two eigenvalue multisets
/// of equal length: max over matched pairs of |x − y|. Robust against the
/// ordering ambiguity of exactly degenerate real parts.
pub fn multiset_defect(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multiset_defect needs equal lengths");
    if a.is_empty() {
        return 0.0;
    }
    let deltas = nearest_deltas(b, a, a.len());
    deltas.into_iter().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelId;
    use crate::solvable;

    #[test]
    fn solvable1_blocks_match_closed_form() {
        let model = Model::new(ModelId::Solvable1);
        let a = 0.5;
        // 6 levels never split a degenerate Re-cluster of this model
        for irrep in ["A1", "A2", "B1", "B2"] {
            let got = block_spectrum(&model, a, irrep, 0, 26).unwrap();
            let expect = solvable::solvable1_block_spectrum(irrep, a, 6);
            let defect = multiset_defect(&got.lowest(6), &expect);
            assert!(defect < 1e-8, "{irrep}: defect {defect:.2e} vs closed form");
        }
        // lowest overall and lowest B1 reference values
        let a1 = block_spectrum(&model, a, "A1", 0, 24).unwrap();
        assert!((a1.levels[0].value.re - 2.0153294552).abs() < 1e-8);
        let b1 = block_spectrum(&model, a, "B1", 0, 24).unwrap();
        assert!((b1.levels[0].value - Complex64::new(4.0306589103, 0.2480983934)).norm() < 1e-8);
    }

    #[test]
    fn solvable2_ground_state() {
        let model = Model::new(ModelId::Solvable2);
        let got = block_spectrum(&model, 0.6, "A", 0, 30).unwrap();
        assert!((got.levels[0].value.re - 2.42721372).abs() < 1e-7);
        assert!(got.levels[0].is_real);
    }

    #[test]
    fn zero_coupling_gives_unperturbed_ladder() {
        let model = Model::new(ModelId::HenonHeiles);
        let r = converge(&model, 0.0, "A1", 0, &ConvergeOpts { levels: 3, ..Default::default() })
            .unwrap();
        assert!(r.all_converged);
        // A1 content at a=0: shells 0,2,3,… → energies 2, 6, 8
        let vals = r.lowest(3);
        assert!((vals[0].re - 2.0).abs() < 1e-10);
        assert!((vals[1].re - 6.0).abs() < 1e-10);
        assert!((vals[2].re - 8.0).abs() < 1e-10);
    }

    #[test]
    fn converge_reports_deltas_and_shell() {
        let model = Model::new(ModelId::Solvable1);
        let r = converge(
            &model,
            0.5,
            "A1",
            0,
            &ConvergeOpts { levels: 3, tol: 1e-8, ..Default::default() },
        )
        .unwrap();
        assert!(r.all_converged);
        assert!(r.shell <= 40);
        for l in r.levels.iter().take(3) {
            assert!(l.converged);
            assert!(l.delta.unwrap() <= 1e-8);
        }
        let expect = solvable::solvable1_block_spectrum("A1", 0.5, 3);
        assert!(multiset_defect(&r.lowest(3), &expect) < 1e-8);
    }

    #[test]
    fn block_union_equals_full_spectrum() {
        let model = Model::new(ModelId::PullenEdmonds);
        let shell = 8;
        let a = 0.3;
        let mut union: Vec<Complex64> = Vec::new();
        for r in all_blocks(&model, a, shell).unwrap() {
            union.extend(r.values());
        }
        let full = full_spectrum(&model, a, shell).unwrap();
        assert_eq!(union.len(), full.len());
        assert!(multiset_defect(&union, &full) < 1e-8);
    }

    #[test]
    fn cross_irrep_elements_vanish_exactly() {
        for id in [ModelId::Solvable1, ModelId::Barbanis, ModelId::HenonHeiles] {
            let model = Model::new(id);
            assert!(cross_irrep_mixing_is_zero(&model, 0.37, 6).unwrap(), "{:?}", id);
        }
    }

    #[test]
    fn henon_heiles_e_rows_degenerate() {
        let model = Model::new(ModelId::HenonHeiles);
        let r0 = block_spectrum(&model, 0.1, "E", 0, 16).unwrap();
        let r1 = block_spectrum(&model, 0.1, "E", 1, 16).unwrap();
        assert_eq!(r0.levels.len(), r1.levels.len());
        for (x, y) in r0.values().iter().zip(r1.values().iter()).take(10) {
            assert!((x - y).norm() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn conjugate_pairing_solvable1() {
        let model = Model::new(ModelId::Solvable1);
        let b1 = block_spectrum(&model, 0.5, "B1", 0, 20).unwrap();
        let b2 = block_spectrum(&model, 0.5, "B2", 0, 20).unwrap();
        let rep = conjugate_pairing(&b1, &b2, 1e-8).unwrap();
        assert!(rep.fully_paired());
        // identity pairing at a = 0
        let b1 = block_spectrum(&model, 0.0, "B1", 0, 12).unwrap();
        let b2 = block_spectrum(&model, 0.0, "B2", 0, 12).unwrap();
        let rep = conjugate_pairing(&b1, &b2, 1e-8).unwrap();
        assert!(rep.fully_paired());
        assert!(rep.max_defect < 1e-10);
    }

    #[test]
    fn reality_classification_solvable1() {
        let model = Model::new(ModelId::Solvable1);
        let a1 = converge(&model, 0.5, "A1", 0, &ConvergeOpts { levels: 4, ..Default::default() })
            .unwrap();
        let rep = reality_classify(&a1, REALITY_TOL);
        // the m=n modes are real, the m≠n ones come in conjugate pairs
        assert!(rep.real.contains(&0), "A1 ground should be real");
        assert!(!rep.conjugate_pairs.is_empty());
        assert!(rep.unpaired.is_empty());
        let b1 = converge(&model, 0.5, "B1", 0, &ConvergeOpts { levels: 4, ..Default::default() })
            .unwrap();
        let rep = reality_classify(&b1, REALITY_TOL);
        assert!(rep.real.is_empty(), "B1 levels all complex: {rep:?}");
    }
}

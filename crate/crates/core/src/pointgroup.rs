//! Point groups, antiunitary extensions, their action on Fock product bases,
//! character-table projection operators, and symmetry-adapted bases.

use crate::error::{PtError, Result};
use crate::fock::{shell_states, FockProduct, FockVector, OperatorPolynomial};
use crate::matrix::Mat;
use crate::scalar::{rat, ratio, ExactScalar, RadReal, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Orthogonal coordinate map (2D or 3D) with an optional time-reversal flag.
/// Composition is (M₁,t₁)∘(M₂,t₂) = (M₁M₂, t₁ xor t₂); time reversal acts as
/// complex conjugation of coefficients.
#[derive(Clone, PartialEq)]
pub struct GroupElement {
    coord: Mat<RadReal>,
    time_reversal: bool,
}

impl GroupElement {
    /// Build from an exact orthogonal matrix; rejected if MᵀM ≠ 1.
    pub fn new(coord: Mat<RadReal>, time_reversal: bool) -> Result<Self> {
        if !coord.is_square() || !(coord.n_rows() == 2 || coord.n_rows() == 3) {
            return Err(PtError::DimensionMismatch("coordinate map must be 2x2 or 3x3".into()));
        }
        let gram = coord.transpose().matmul(&coord);
        if gram != Mat::identity(coord.n_rows()) {
            return Err(PtError::InvalidArgument("coordinate map is not orthogonal".into()));
        }
        Ok(GroupElement { coord, time_reversal })
    }

    pub fn identity(dim: u8) -> Self {
        GroupElement { coord: Mat::identity(dim as usize), time_reversal: false }
    }

    /// Time reversal alone.
    pub fn time_reversal(dim: u8) -> Self {
        GroupElement { coord: Mat::identity(dim as usize), time_reversal: true }
    }

    pub fn from_rows(rows: &[&[i64]], time_reversal: bool) -> Self {
        let n = rows.len();
        let m = Mat::from_fn(n, n, |i, j| RadReal::from_int(rows[i][j]));
        GroupElement::new(m, time_reversal).expect("integer rows must be orthogonal")
    }

    pub fn dim(&self) -> u8 {
        self.coord.n_rows() as u8
    }

    pub fn coord(&self) -> &Mat<RadReal> {
        &self.coord
    }

    pub fn is_antiunitary(&self) -> bool {
        self.time_reversal
    }

    pub fn compose(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            coord: self.coord.matmul(&o.coord),
            time_reversal: self.time_reversal ^ o.time_reversal,
        }
    }

    /// Inverse; the coordinate part of an orthogonal map is its transpose.
    pub fn inverse(&self) -> GroupElement {
        GroupElement { coord: self.coord.transpose(), time_reversal: self.time_reversal }
    }

    pub fn det(&self) -> RadReal {
        let m = &self.coord;
        match m.n_rows() {
            2 => &m[(0, 0)] * &m[(1, 1)] - &m[(0, 1)] * &m[(1, 0)],
            3 => {
                let mut d = RadReal::zero();
                d += &m[(0, 0)] * &(&m[(1, 1)] * &m[(2, 2)] - &m[(1, 2)] * &m[(2, 1)]);
                d += -(&m[(0, 1)] * &(&m[(1, 0)] * &m[(2, 2)] - &m[(1, 2)] * &m[(2, 0)])).clone();
                d += &m[(0, 2)] * &(&m[(1, 0)] * &m[(2, 1)] - &m[(1, 1)] * &m[(2, 0)]);
                d
            }
            _ => unreachable!(),
        }
    }

    pub fn is_proper(&self) -> bool {
        self.det() == RadReal::one()
    }

    /// Is the coordinate map a signed permutation matrix?
    pub fn is_signed_permutation(&self) -> bool {
        let n = self.coord.n_rows();
        for i in 0..n {
            let mut nonzero = 0;
            for j in 0..n {
                let e = &self.coord[(i, j)];
                if e.is_zero() {
                    continue;
                }
                nonzero += 1;
                if *e != RadReal::one() && *e != -RadReal::one() {
                    return false;
                }
            }
            if nonzero != 1 {
                return false;
            }
        }
        true
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.coord.n_rows();
        write!(f, "[")?;
        for i in 0..n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.coord[(i, j)])?;
            }
        }
        write!(f, "]{}", if self.time_reversal { "·T" } else { "" })
    }
}

/// U_g|n⃗⟩: substitute a†ᵢ → Σⱼ M[j][i]·a†ⱼ in the creation-operator monomial
/// and re-expand; time reversal conjugates the input coefficients. Exact, and
/// shell-preserving because the map is orthogonal.
pub fn act_on_vector(g: &GroupElement, v: &FockVector) -> FockVector {
    let src = if g.time_reversal { v.conj() } else { v.clone() };
    let dim = g.dim() as usize;
    let mut out = FockVector::default();
    for (ket, c) in &src.components {
        // per-axis images: (Σⱼ M[j][i] a†ⱼ)^{n_i}, expanded multinomially
        let mut terms: Vec<(FockProduct, ExactScalar)> =
            vec![(FockProduct::from_slice(&vec![0u32; dim]), c.clone())];
        for axis in 0..dim {
            let n = ket.occ(axis);
            if n == 0 {
                continue;
            }
            let col: Vec<(usize, RadReal)> = (0..dim)
                .filter_map(|j| {
                    let e = g.coord[(j, axis)].clone();
                    (!e.is_zero()).then_some((j, e))
                })
                .collect();
            let expansion = expand_power(&col, n, dim);
            let mut next = Vec::with_capacity(terms.len() * expansion.len());
            for (occ_add, coeff) in &expansion {
                for (base, base_c) in &terms {
                    let mut occ = [0u32; 3];
                    for j in 0..dim {
                        occ[j] = base.occ(j) + occ_add[j];
                    }
                    next.push((
                        FockProduct::from_slice(&occ[..dim]),
                        base_c.clone() * coeff.clone(),
                    ));
                }
            }
            terms = next;
        }
        for (k, val) in terms {
            out.insert_add(k, val);
        }
    }
    out
}

/// (Σⱼ αⱼ a†ⱼ)ⁿ expanded into occupation increments with exact coefficients.
fn expand_power(col: &[(usize, RadReal)], n: u32, dim: usize) -> Vec<([u32; 3], ExactScalar)> {
    fn rec(
        col: &[(usize, RadReal)],
        left: u32,
        occ: [u32; 3],
        coeff: ExactScalar,
        multi: Rational,
        out: &mut Vec<([u32; 3], ExactScalar)>,
    ) {
        if col.len() == 1 {
            let (j, alpha) = &col[0];
            let mut occ = occ;
            occ[*j] += left;
            let mut c = coeff;
            for _ in 0..left {
                c = c * ExactScalar { re: alpha.clone(), im: RadReal::zero() };
            }
            out.push((occ, c.mul_rational(&multi)));
            return;
        }
        let (j, alpha) = &col[0];
        for k in 0..=left {
            let mut occ = occ;
            occ[*j] += k;
            let mut c = coeff.clone();
            for _ in 0..k {
                c = c * ExactScalar { re: alpha.clone(), im: RadReal::zero() };
            }
            // running multinomial factor: C(left, k) folded in stages
            let m = multi.clone() * binomial(left, k);
            rec(&col[1..], left - k, occ, c, m, out);
        }
    }
    let mut out = Vec::new();
    let _ = dim;
    rec(col, n, [0u32; 3], ExactScalar::one(), rat(1), &mut out);
    out
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k.min(n - k) {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rational::new(num, den)
}

/// Expansion of the transformed state of a single (unnormalized) ket.
pub fn act_on_state(g: &GroupElement, state: FockProduct) -> FockVector {
    act_on_vector(g, &FockVector::unit(state))
}

/// How a multidimensional irrep is realized as explicit matrices, enabling
/// row-resolved projectors.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum RepKind {
    /// one-dimensional: characters are the matrices
    Scalar,
    /// the coordinate vector representation
    Coord,
    /// det(g)·coordinate matrix
    DetCoord,
    /// the (2z²−x²−y², √3(x²−y²)) quadratic pair (signed permutations only)
    QuadPair,
    /// no realization available (loaded tables): only isotypic projection
    None,
}

#[derive(Clone)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    /// character per class, in class order
    pub chars: Vec<RadReal>,
    pub rep: RepKind,
}

#[derive(Clone)]
pub struct ConjClass {
    pub label: String,
    pub elements: Vec<GroupElement>,
}

/// Character table with full element lists per class (projectors sum over the
/// whole group).
#[derive(Clone)]
pub struct CharacterTable {
    pub name: String,
    pub space_dim: u8,
    pub classes: Vec<ConjClass>,
    pub irreps: Vec<Irrep>,
}

impl CharacterTable {
    pub fn order(&self) -> usize {
        self.classes.iter().map(|c| c.elements.len()).sum()
    }

    pub fn elements(&self) -> impl Iterator<Item = (&GroupElement, usize)> {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.elements.iter().map(move |e| (e, ci)))
    }

    pub fn irrep(&self, label: &str) -> Result<&Irrep> {
        self.irreps
            .iter()
            .find(|ir| ir.label == label)
            .ok_or_else(|| PtError::UnknownIrrep(label.into(), self.name.clone()))
    }

    pub fn irrep_labels(&self) -> Vec<String> {
        self.irreps.iter().map(|i| i.label.clone()).collect()
    }

    /// Σ dim² = |G| and class-weighted row orthogonality.
    pub fn validate(&self) -> Result<()> {
        let g = self.order();
        let sum_sq: usize = self.irreps.iter().map(|i| i.dim * i.dim).sum();
        if sum_sq != g {
            return Err(PtError::InvalidArgument(format!(
                "Σ dim² = {sum_sq} but |{}| = {g}",
                self.name
            )));
        }
        for (a, ia) in self.irreps.iter().enumerate() {
            for (b, ib) in self.irreps.iter().enumerate() {
                let mut acc = RadReal::zero();
                for (ci, class) in self.classes.iter().enumerate() {
                    let w = RadReal::from_int(class.elements.len() as i64);
                    acc += &(&w * &ia.chars[ci]) * &ib.chars[ci];
                }
                let expect = if a == b { RadReal::from_int(g as i64) } else { RadReal::zero() };
                if acc != expect {
                    return Err(PtError::InvalidArgument(format!(
                        "character rows {} and {} of {} are not orthogonal",
                        ia.label, ib.label, self.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// D^S(g)[r][r] for the row-resolved projector.
    fn rep_diag(&self, irrep: &Irrep, class_idx: usize, g: &GroupElement, row: usize) -> Result<RadReal> {
        match irrep.rep {
            RepKind::Scalar => Ok(irrep.chars[class_idx].clone()),
            RepKind::Coord => Ok(g.coord()[(row, row)].clone()),
            RepKind::DetCoord => Ok(&g.det() * &g.coord()[(row, row)]),
            RepKind::QuadPair => {
                let d = quad_pair_rep(g)?;
                Ok(d[(row, row)].clone())
            }
            RepKind::None => Err(PtError::NoRealization(irrep.label.clone())),
        }
    }
}

/// Representation matrix of a signed permutation on the quadratic pair
/// (2z²−x²−y², √3(x²−y²)).
fn quad_pair_rep(g: &GroupElement) -> Result<Mat<RadReal>> {
    if !g.is_signed_permutation() || g.dim() != 3 {
        return Err(PtError::NoRealization("E quadratic pair needs 3D signed permutations".into()));
    }
    // (U_g f)(x) = f(g⁻¹x); squares only see the permutation
    let ginv = g.inverse();
    // image of the square-coefficient vector: new_c[j] += c[k] when (g⁻¹x)_k
    // hits ±x_j (squares kill the sign)
    let permute = |c: [RadReal; 3]| -> [RadReal; 3] {
        let mut out = [RadReal::zero(), RadReal::zero(), RadReal::zero()];
        for (k, ck) in c.iter().enumerate() {
            for (j, item) in out.iter_mut().enumerate() {
                if !ginv.coord()[(k, j)].is_zero() {
                    *item += ck.clone();
                }
            }
        }
        out
    };
    let u1 = [RadReal::from_int(-1), RadReal::from_int(-1), RadReal::from_int(2)];
    let r3 = RadReal::radical(1, 1, 3);
    let u2 = [r3.clone(), -r3.clone(), RadReal::zero()];
    let mut d = Mat::zeros(2, 2);
    for (col, u) in [u1, u2].into_iter().enumerate() {
        let img = permute(u);
        // decompose img = a·u1 + b·u2 (+ c·(1,1,1), zero for traceless inputs)
        let a = img[2].clone().mul_rational(&ratio(1, 2));
        let b = (&r3 * &(img[0].clone() - img[1].clone())).mul_rational(&ratio(1, 6));
        d[(0, col)] = a;
        d[(1, col)] = b;
    }
    Ok(d)
}

/// Symmetry-adapted vector: exact components over unnormalized kets within a
/// single shell, with its exact squared norm. Normalization is deferred (the
/// norm may not have a square root inside the ring).
#[derive(Clone)]
pub struct SymmetryAdaptedVector {
    pub irrep: String,
    pub row: usize,
    pub shell: u32,
    pub components: FockVector,
    pub norm2: RadReal,
}

impl SymmetryAdaptedVector {
    pub fn to_c64_normalized(&self) -> Vec<(FockProduct, num_complex::Complex64)> {
        self.components.to_c64_normalized_unit()
    }
}

impl fmt::Debug for SymmetryAdaptedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} row {} shell {}] {:?} (norm² {})",
            self.irrep, self.row, self.shell, self.components, self.norm2
        )
    }
}

/// Character projector P^S = (dim/|G|) Σ_R χ^S(R)* R applied to a state;
/// `None` when the state has no component in the irrep.
pub fn project(table: &CharacterTable, irrep: &str, state: FockProduct) -> Result<Option<SymmetryAdaptedVector>> {
    let ir = table.irrep(irrep)?;
    let v = project_vector(table, ir, None, &FockVector::unit(state))?;
    Ok(build_adapted(ir, 0, v))
}

/// Row-resolved projector P^S_rr; requires a representation realization for
/// multidimensional irreps.
pub fn project_row(
    table: &CharacterTable,
    irrep: &str,
    row: usize,
    state: FockProduct,
) -> Result<Option<SymmetryAdaptedVector>> {
    let ir = table.irrep(irrep)?;
    if row >= ir.dim {
        return Err(PtError::RowOutOfRange { irrep: irrep.into(), row, dim: ir.dim });
    }
    let v = project_vector(table, ir, Some(row), &FockVector::unit(state))?;
    Ok(build_adapted(ir, row, v))
}

fn build_adapted(ir: &Irrep, row: usize, v: FockVector) -> Option<SymmetryAdaptedVector> {
    if v.is_zero() {
        return None;
    }
    let shell = v.single_shell().expect("projection preserves shells");
    let norm2 = v.norm2();
    Some(SymmetryAdaptedVector { irrep: ir.label.clone(), row, shell, components: v, norm2 })
}

fn project_vector(
    table: &CharacterTable,
    ir: &Irrep,
    row: Option<usize>,
    v: &FockVector,
) -> Result<FockVector> {
    let mut acc = FockVector::default();
    let prefactor = ratio(ir.dim as i64, table.order() as i64);
    for (g, class_idx) in table.elements() {
        let weight = match row {
            None => ir.chars[class_idx].clone(),
            Some(r) => table.rep_diag(ir, class_idx, g, r)?,
        };
        if weight.is_zero() {
            continue;
        }
        let moved = act_on_vector(g, v);
        // characters and rep entries are real for all built-in groups
        acc.add_scaled(&moved, &ExactScalar { re: weight, im: RadReal::zero() });
    }
    Ok(acc.scale(&ExactScalar::from_rational(prefactor)))
}

/// Orthogonal (not normalized) spanning set for the (irrep,row) subspace of
/// the truncated basis, built shell by shell by projection plus exact
/// Gram–Schmidt. Deterministic: candidates in shell-state order, each kept
/// vector rescaled so its leading component is 1.
pub fn adapted_basis(
    table: &CharacterTable,
    irrep: &str,
    row: usize,
    max_shell: u32,
) -> Result<Vec<SymmetryAdaptedVector>> {
    let mut out = Vec::new();
    for shell in 0..=max_shell {
        out.extend(adapted_shell(table, irrep, row, shell)?);
    }
    Ok(out)
}

/// The (irrep,row) vectors of a single shell.
pub fn adapted_shell(
    table: &CharacterTable,
    irrep: &str,
    row: usize,
    shell: u32,
) -> Result<Vec<SymmetryAdaptedVector>> {
    let ir = table.irrep(irrep)?;
    if row >= ir.dim {
        return Err(PtError::RowOutOfRange { irrep: irrep.into(), row, dim: ir.dim });
    }
    let mut kept: Vec<SymmetryAdaptedVector> = Vec::new();
    for state in shell_states(table.space_dim, shell) {
        let use_row = if ir.dim > 1 { Some(row) } else { None };
        let mut w = project_vector(table, ir, use_row, &FockVector::unit(state))?;
        if w.is_zero() {
            continue;
        }
        // Gram–Schmidt against the kept vectors of this shell
        for prev in &kept {
            let overlap = prev.components.inner(&w);
            if overlap.is_zero() {
                continue;
            }
            let coeff = overlap
                * prev
                    .norm2
                    .inv()
                    .map(|n| ExactScalar { re: n, im: RadReal::zero() })
                    .expect("kept vectors have nonzero norm");
            w = w.sub(&prev.components.scale(&coeff));
        }
        if w.is_zero() {
            continue;
        }
        // canonical scaling: leading (first in basis order) component = 1
        let lead = w.components.values().next().cloned().expect("nonzero");
        let w = w.scale(&lead.inv().expect("leading component nonzero"));
        let norm2 = w.norm2();
        kept.push(SymmetryAdaptedVector {
            irrep: ir.label.clone(),
            row,
            shell,
            components: w,
            norm2,
        });
    }
    Ok(kept)
}

/// Irrep content of one shell: multiplicities by projecting every shell state
/// and counting independent vectors (rank over the exact field).
pub fn classify_shell(table: &CharacterTable, shell: u32) -> Result<Vec<(String, usize)>> {
    let mut out = Vec::new();
    for ir in &table.irreps {
        let count = if ir.rep == RepKind::None && ir.dim > 1 {
            // isotypic rank / dim when no realization is available
            isotypic_rank(table, &ir.label, shell)? / ir.dim
        } else {
            adapted_shell(table, &ir.label, 0, shell)?.len()
        };
        if count > 0 {
            out.push((ir.label.clone(), count));
        }
    }
    Ok(out)
}

fn isotypic_rank(table: &CharacterTable, irrep: &str, shell: u32) -> Result<usize> {
    let ir = table.irrep(irrep)?;
    let mut kept: Vec<FockVector> = Vec::new();
    for state in shell_states(table.space_dim, shell) {
        let mut w = project_vector(table, ir, None, &FockVector::unit(state))?;
        for prev in &kept {
            let overlap = prev.inner(&w);
            if overlap.is_zero() {
                continue;
            }
            let n2 = prev.norm2();
            let coeff = overlap * ExactScalar { re: n2.inv().unwrap(), im: RadReal::zero() };
            w = w.sub(&prev.scale(&coeff));
        }
        if !w.is_zero() {
            kept.push(w);
        }
    }
    Ok(kept.len())
}

/// Exact invariance residual of RH'R⁻¹ − H on interior states (shell ≤
/// max_shell − deg op). Zero for true symmetries; for antiunitary elements
/// the conjugation is carried by the element's time-reversal flag.
pub struct InvarianceResidual {
    pub max_abs: f64,
    pub exact_zero: bool,
}

pub fn verify_invariance(
    op: &OperatorPolynomial,
    max_shell: u32,
    g: &GroupElement,
) -> InvarianceResidual {
    let deg = op.degree();
    let interior = max_shell.saturating_sub(deg);
    let ginv = g.inverse();
    let mut max_abs = 0.0f64;
    let mut exact_zero = true;
    for shell in 0..=interior {
        for state in shell_states(op.dim(), shell) {
            let unit = FockVector::unit(state);
            let back = act_on_vector(&ginv, &unit);
            let moved = crate::fock::apply_op_u(op, &back);
            let forward = act_on_vector(g, &moved);
            let direct = crate::fock::apply_op_u(op, &unit);
            let diff = forward.sub(&direct);
            if !diff.is_zero() {
                exact_zero = false;
                for c in diff.components.values() {
                    max_abs = max_abs.max(c.to_c64().norm());
                }
            }
        }
    }
    InvarianceResidual { max_abs, exact_zero }
}

// ---------------------------------------------------------------------------
// built-in groups
// ---------------------------------------------------------------------------

fn rr(q0: (i64, i64), q3: (i64, i64)) -> RadReal {
    RadReal::new(ratio(q0.0, q0.1), rat(0), ratio(q3.0, q3.1), rat(0))
}

/// Axis conventions for the order-2 groups of the catalog.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum C2Axis {
    /// rotation by π about z: (x,y) → (−x,−y)
    Z,
    /// rotation by π about x: (x,y) → (x,−y)
    X,
    /// rotation by π about y: (x,y) → (−x,y)
    Y,
}

/// C₂ = {E, C₂(axis)} with irreps {A, B}.
pub fn c2(axis: C2Axis) -> CharacterTable {
    let gen = match axis {
        C2Axis::Z => GroupElement::from_rows(&[&[-1, 0], &[0, -1]], false),
        C2Axis::X => GroupElement::from_rows(&[&[1, 0], &[0, -1]], false),
        C2Axis::Y => GroupElement::from_rows(&[&[-1, 0], &[0, 1]], false),
    };
    CharacterTable {
        name: "C2".into(),
        space_dim: 2,
        classes: vec![
            ConjClass { label: "E".into(), elements: vec![GroupElement::identity(2)] },
            ConjClass { label: "C2".into(), elements: vec![gen] },
        ],
        irreps: vec![
            Irrep { label: "A".into(), dim: 1, chars: vec![RadReal::one(), RadReal::one()], rep: RepKind::Scalar },
            Irrep { label: "B".into(), dim: 1, chars: vec![RadReal::one(), -RadReal::one()], rep: RepKind::Scalar },
        ],
    }
}

/// C₂ᵥ = {E, C₂, σᵥ₁: (x,y)→(y,x), σᵥ₂: (x,y)→(−y,−x)}.
pub fn c2v() -> CharacterTable {
    let chars = |v: [i64; 4]| v.iter().map(|&c| RadReal::from_int(c)).collect::<Vec<_>>();
    CharacterTable {
        name: "C2v".into(),
        space_dim: 2,
        classes: vec![
            ConjClass { label: "E".into(), elements: vec![GroupElement::identity(2)] },
            ConjClass {
                label: "C2".into(),
                elements: vec![GroupElement::from_rows(&[&[-1, 0], &[0, -1]], false)],
            },
            ConjClass {
                label: "sv1".into(),
                elements: vec![GroupElement::from_rows(&[&[0, 1], &[1, 0]], false)],
            },
            ConjClass {
                label: "sv2".into(),
                elements: vec![GroupElement::from_rows(&[&[0, -1], &[-1, 0]], false)],
            },
        ],
        irreps: vec![
            Irrep { label: "A1".into(), dim: 1, chars: chars([1, 1, 1, 1]), rep: RepKind::Scalar },
            Irrep { label: "A2".into(), dim: 1, chars: chars([1, 1, -1, -1]), rep: RepKind::Scalar },
            Irrep { label: "B1".into(), dim: 1, chars: chars([1, -1, 1, -1]), rep: RepKind::Scalar },
            Irrep { label: "B2".into(), dim: 1, chars: chars([1, -1, -1, 1]), rep: RepKind::Scalar },
        ],
    }
}

/// C₃ᵥ with the reflection class generated by (x,y)→(x,−y); E is realized by
/// the coordinate vector rep, row 0 even under that reflection.
pub fn c3v() -> CharacterTable {
    let c = rr((-1, 2), (0, 1)); // cos 2π/3
    let s = rr((0, 1), (1, 2)); // sin 2π/3
    let rot = |sgn: i64| {
        let mut m = Mat::zeros(2, 2);
        m[(0, 0)] = c.clone();
        m[(0, 1)] = -s.clone().mul_rational(&rat(sgn));
        m[(1, 0)] = s.clone().mul_rational(&rat(sgn));
        m[(1, 1)] = c.clone();
        GroupElement::new(m, false).expect("rotation is orthogonal")
    };
    let sigma_y = GroupElement::from_rows(&[&[1, 0], &[0, -1]], false);
    let c3 = rot(1);
    let c3sq = rot(-1);
    let sigma2 = c3.compose(&sigma_y).compose(&c3.inverse());
    let sigma3 = c3sq.compose(&sigma_y).compose(&c3sq.inverse());
    let ch = |v: [i64; 3]| v.iter().map(|&x| RadReal::from_int(x)).collect::<Vec<_>>();
    CharacterTable {
        name: "C3v".into(),
        space_dim: 2,
        classes: vec![
            ConjClass { label: "E".into(), elements: vec![GroupElement::identity(2)] },
            ConjClass { label: "2C3".into(), elements: vec![c3, c3sq] },
            ConjClass { label: "3sv".into(), elements: vec![sigma_y, sigma2, sigma3] },
        ],
        irreps: vec![
            Irrep { label: "A1".into(), dim: 1, chars: ch([1, 1, 1]), rep: RepKind::Scalar },
            Irrep { label: "A2".into(), dim: 1, chars: ch([1, 1, -1]), rep: RepKind::Scalar },
            Irrep { label: "E".into(), dim: 2, chars: ch([2, -1, 0]), rep: RepKind::Coord },
        ],
    }
}

/// C₄ᵥ (the a = 0 symmetry of the x²y²-coupled oscillator).
pub fn c4v() -> CharacterTable {
    let ch = |v: [i64; 5]| v.iter().map(|&x| RadReal::from_int(x)).collect::<Vec<_>>();
    CharacterTable {
        name: "C4v".into(),
        space_dim: 2,
        classes: vec![
            ConjClass { label: "E".into(), elements: vec![GroupElement::identity(2)] },
            ConjClass {
                label: "2C4".into(),
                elements: vec![
                    GroupElement::from_rows(&[&[0, -1], &[1, 0]], false),
                    GroupElement::from_rows(&[&[0, 1], &[-1, 0]], false),
                ],
            },
            ConjClass {
                label: "C2".into(),
                elements: vec![GroupElement::from_rows(&[&[-1, 0], &[0, -1]], false)],
            },
            ConjClass {
                label: "2sv".into(),
                elements: vec![
                    GroupElement::from_rows(&[&[1, 0], &[0, -1]], false),
                    GroupElement::from_rows(&[&[-1, 0], &[0, 1]], false),
                ],
            },
            ConjClass {
                label: "2sd".into(),
                elements: vec![
                    GroupElement::from_rows(&[&[0, 1], &[1, 0]], false),
                    GroupElement::from_rows(&[&[0, -1], &[-1, 0]], false),
                ],
            },
        ],
        irreps: vec![
            Irrep { label: "A1".into(), dim: 1, chars: ch([1, 1, 1, 1, 1]), rep: RepKind::Scalar },
            Irrep { label: "A2".into(), dim: 1, chars: ch([1, 1, 1, -1, -1]), rep: RepKind::Scalar },
            Irrep { label: "B1".into(), dim: 1, chars: ch([1, -1, 1, 1, -1]), rep: RepKind::Scalar },
            Irrep { label: "B2".into(), dim: 1, chars: ch([1, -1, 1, -1, 1]), rep: RepKind::Scalar },
            Irrep { label: "E".into(), dim: 2, chars: ch([2, 0, -2, 0, 0]), rep: RepKind::Coord },
        ],
    }
}

/// The order-24 group preserving x²+y²+z² and the product xyz: all signed
/// permutations of the axes with an even number of sign flips (isomorphic to
/// Td, whose irrep labels {A1,A2,E,T1,T2} it carries).
pub fn td() -> CharacterTable {
    let perms: [[usize; 3]; 6] =
        [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [1, 0, 2], [2, 1, 0]];
    let signsets: [[i64; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];
    let mut classes: Vec<(String, Vec<GroupElement>)> = vec![
        ("E".into(), vec![]),
        ("8C3".into(), vec![]),
        ("3C2".into(), vec![]),
        ("6S4".into(), vec![]),
        ("6sd".into(), vec![]),
    ];
    for p in &perms {
        for s in &signsets {
            let mut rows = [[0i64; 3]; 3];
            for (to, &from) in p.iter().enumerate() {
                rows[to][from] = s[to];
            }
            let g = GroupElement::from_rows(&[&rows[0], &rows[1], &rows[2]], false);
            let tr = g.coord()[(0, 0)].clone() + g.coord()[(1, 1)].clone() + g.coord()[(2, 2)].clone();
            let proper = g.is_proper();
            // classes of this group are fixed by (det, trace)
            let idx = match (proper, tr) {
                (true, t) if t == RadReal::from_int(3) => 0,
                (true, t) if t == RadReal::zero() => 1,
                (true, t) if t == RadReal::from_int(-1) => 2,
                (false, t) if t == RadReal::from_int(-1) => 3,
                (false, t) if t == RadReal::from_int(1) => 4,
                _ => unreachable!("unexpected class data"),
            };
            classes[idx].1.push(g);
        }
    }
    let ch = |v: [i64; 5]| v.iter().map(|&x| RadReal::from_int(x)).collect::<Vec<_>>();
    CharacterTable {
        name: "Td".into(),
        space_dim: 3,
        classes: classes
            .into_iter()
            .map(|(label, elements)| ConjClass { label, elements })
            .collect(),
        irreps: vec![
            Irrep { label: "A1".into(), dim: 1, chars: ch([1, 1, 1, 1, 1]), rep: RepKind::Scalar },
            Irrep { label: "A2".into(), dim: 1, chars: ch([1, 1, 1, -1, -1]), rep: RepKind::Scalar },
            Irrep { label: "E".into(), dim: 2, chars: ch([2, -1, 2, 0, 0]), rep: RepKind::QuadPair },
            Irrep { label: "T1".into(), dim: 3, chars: ch([3, 0, -1, 1, -1]), rep: RepKind::DetCoord },
            Irrep { label: "T2".into(), dim: 3, chars: ch([3, 0, -1, -1, 1]), rep: RepKind::Coord },
        ],
    }
}

/// A built-in table by name.
pub fn builtin(name: &str) -> Option<CharacterTable> {
    match name {
        "C2" => Some(c2(C2Axis::Z)),
        "C2v" => Some(c2v()),
        "C3v" => Some(c3v()),
        "C4v" => Some(c4v()),
        "Td" => Some(td()),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// table file schema
// ---------------------------------------------------------------------------

/// Write a table in the documented text schema:
///
/// ```text
/// group <name>
/// space <2|3>
/// class <label>
/// elem <row> ; <row> [; <row>]     # entries a+b r2+c r3+d r6, one line per element
/// ...
/// irrep <label> <dim> <χ per class>
/// ```
pub fn table_to_string(table: &CharacterTable) -> String {
    let mut out = String::new();
    out.push_str(&format!("group {}\n", table.name));
    out.push_str(&format!("space {}\n", table.space_dim));
    for class in &table.classes {
        out.push_str(&format!("class {}\n", class.label));
        for e in &class.elements {
            let n = e.coord().n_rows();
            let rows: Vec<String> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| e.coord()[(i, j)].to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            out.push_str(&format!("elem {}\n", rows.join(" ; ")));
        }
    }
    for ir in &table.irreps {
        let chars: Vec<String> = ir.chars.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("irrep {} {} {}\n", ir.label, ir.dim, chars.join(" ")));
    }
    out
}

/// Parse the schema written by [`table_to_string`]. Loaded multidimensional
/// irreps carry no realization: isotypic projection and classification work,
/// row-resolved bases need a built-in table.
pub fn table_from_str(text: &str) -> Result<CharacterTable> {
    let mut name = String::new();
    let mut space = 0u8;
    let mut classes: Vec<ConjClass> = Vec::new();
    let mut irreps: Vec<Irrep> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| PtError::Parse(format!("line {}: {msg}", lineno + 1));
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kw {
            "group" => name = rest.trim().to_string(),
            "space" => {
                space = rest.trim().parse().map_err(|_| err("bad space dimension"))?;
                if space != 2 && space != 3 {
                    return Err(err("space must be 2 or 3"));
                }
            }
            "class" => classes.push(ConjClass { label: rest.trim().into(), elements: vec![] }),
            "elem" => {
                let class = classes.last_mut().ok_or_else(|| err("elem before class"))?;
                let rows: Vec<&str> = rest.split(';').collect();
                if rows.len() != space as usize {
                    return Err(err("wrong number of rows"));
                }
                let n = space as usize;
                let mut m = Mat::zeros(n, n);
                for (i, row) in rows.iter().enumerate() {
                    let entries: Vec<&str> = row.split_whitespace().collect();
                    if entries.len() != n {
                        return Err(err("wrong number of entries in row"));
                    }
                    for (j, ent) in entries.iter().enumerate() {
                        m[(i, j)] = ent.parse::<RadReal>().map_err(|e| err(&e))?;
                    }
                }
                class
                    .elements
                    .push(GroupElement::new(m, false).map_err(|e| err(&e.to_string()))?);
            }
            "irrep" => {
                let mut parts = rest.split_whitespace();
                let label = parts.next().ok_or_else(|| err("missing irrep label"))?;
                let dim: usize = parts
                    .next()
                    .ok_or_else(|| err("missing irrep dim"))?
                    .parse()
                    .map_err(|_| err("bad irrep dim"))?;
                let chars: Vec<RadReal> = parts
                    .map(|t| t.parse::<RadReal>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| err(&e))?;
                if chars.len() != classes.len() {
                    return Err(err("character count does not match class count"));
                }
                let rep = if dim == 1 { RepKind::Scalar } else { RepKind::None };
                irreps.push(Irrep { label: label.into(), dim, chars, rep });
            }
            _ => return Err(err(&format!("unknown keyword `{kw}`"))),
        }
    }
    let table = CharacterTable { name, space_dim: space, classes, irreps };
    table.validate()?;
    Ok(table)
}

pub fn load_table(path: &std::path::Path) -> Result<CharacterTable> {
    let text = std::fs::read_to_string(path)?;
    table_from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockProduct;

    fn f2(a: u32, b: u32) -> FockProduct {
        FockProduct::new2(a, b)
    }

    #[test]
    fn builtin_tables_validate() {
        for name in ["C2", "C2v", "C3v", "C4v", "Td"] {
            builtin(name).unwrap().validate().unwrap();
        }
        assert_eq!(td().order(), 24);
    }

    #[test]
    fn group_closure_and_orthogonality() {
        for name in ["C2v", "C3v", "C4v", "Td"] {
            let t = builtin(name).unwrap();
            let all: Vec<GroupElement> = t.elements().map(|(g, _)| g.clone()).collect();
            for a in &all {
                for b in &all {
                    let p = a.compose(b);
                    assert!(all.iter().any(|g| *g == p), "{name} not closed");
                }
                assert_eq!(
                    a.compose(&a.inverse()),
                    GroupElement::identity(t.space_dim),
                    "{name} inverse"
                );
            }
        }
    }

    #[test]
    fn c2_parity_action() {
        // C₂ about z on |m,n⟩ gives (−1)^{m+n}
        let g = GroupElement::from_rows(&[&[-1, 0], &[0, -1]], false);
        for (m, n) in [(0, 0), (1, 0), (2, 1), (3, 3)] {
            let v = act_on_state(&g, f2(m, n));
            assert_eq!(v.components.len(), 1);
            let c = v.components.get(&f2(m, n)).unwrap();
            assert_eq!(*c, ExactScalar::from_int(if (m + n) % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn swap_action_permutes_occupations() {
        let g = GroupElement::from_rows(&[&[0, 1], &[1, 0]], false);
        let v = act_on_state(&g, f2(1, 0));
        assert_eq!(v.components.len(), 1);
        assert_eq!(*v.components.get(&f2(0, 1)).unwrap(), ExactScalar::one());
    }

    #[test]
    fn c3_rotation_on_shell_one() {
        // shell 1 transforms as the vector (x,y)
        let t = c3v();
        let c3 = t.classes[1].elements[0].clone();
        let v = act_on_state(&c3, f2(1, 0));
        assert_eq!(*v.components.get(&f2(1, 0)).unwrap(), ExactScalar::from_ratio(-1, 2));
        assert_eq!(*v.components.get(&f2(0, 1)).unwrap(), ExactScalar::radical(1, 2, 3));
    }

    #[test]
    fn action_preserves_shell_and_norm() {
        for table in [c3v(), td()] {
            for (g, _) in table.elements() {
                for shell in 0..=5u32 {
                    for state in shell_states(table.space_dim, shell).into_iter().take(3) {
                        let v = act_on_state(g, state);
                        assert_eq!(v.single_shell(), Some(shell));
                        assert_eq!(v.norm2(), FockVector::unit(state).norm2());
                    }
                }
            }
        }
    }

    #[test]
    fn paper_projections_c3v() {
        // P^{A1}|3,0⟩ ∝ ¼φ30 − (√3/4)φ12, i.e. unnormalized component ratio −3
        let t = c3v();
        let p = project(&t, "A1", f2(3, 0)).unwrap().unwrap();
        let c30 = p.components.get(&f2(3, 0)).unwrap().clone();
        let c12 = p.components.get(&f2(1, 2)).unwrap().clone();
        assert!(!c30.is_zero());
        assert_eq!(c12, c30.mul_rational(&rat(-3)));
        assert_eq!(p.components.components.len(), 2);
        // exact normalized coefficients: ¼ on φ30 when projecting the
        // normalized source (overall scale of the raw projector output)
        let sc30 = crate::fock::ScaledCoeff::from_weight_ratio(c30, &f2(3, 0), &f2(3, 0));
        assert_eq!(sc30.in_ring().unwrap(), ExactScalar::from_ratio(1, 4));

        // P^{A2}|2,1⟩ ∝ ¾φ21 − (√3/4)φ03: unnormalized ratio c03/c21 = −√3·√(3!/ (2!1!)) /3 = −… check exact: −1
        let p = project(&t, "A2", f2(2, 1)).unwrap().unwrap();
        let c21 = p.components.get(&f2(2, 1)).unwrap().clone();
        let c03 = p.components.get(&f2(0, 3)).unwrap().clone();
        // normalized ratio is −√3/3 = (−√3/4)/(3/4); unnormalized picks up √(w21/w03) = √(2/6)
        // so c03 = c21 · (−√3/3)·√(2/6)⁻¹… assert through the normalized view instead
        let n21 = crate::fock::ScaledCoeff::from_weight_ratio(c21.clone(), &f2(2, 1), &f2(2, 1))
            .in_ring()
            .unwrap();
        let n03 = crate::fock::ScaledCoeff::from_weight_ratio(c03.clone(), &f2(0, 3), &f2(2, 1))
            .in_ring()
            .unwrap();
        assert_eq!(n21, ExactScalar::from_ratio(3, 4));
        assert_eq!(n03, ExactScalar::radical(-1, 4, 3));
    }

    #[test]
    fn projector_idempotent_and_zero_case() {
        let t = c2v();
        // totally symmetric ground state unchanged
        let p = project(&t, "A1", f2(0, 0)).unwrap().unwrap();
        assert_eq!(p.components, FockVector::unit(f2(0, 0)));
        // |0,1⟩ has no A1 component... (it is B-type); expect zero
        assert!(project(&t, "A1", f2(0, 1)).unwrap().is_none());
        // idempotence: P(Pφ) = Pφ for a nontrivial case in C3v
        let t3 = c3v();
        let ir = t3.irrep("A1").unwrap();
        let once = project_vector(&t3, ir, None, &FockVector::unit(f2(3, 0))).unwrap();
        let twice = project_vector(&t3, ir, None, &once).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn resolution_of_identity_and_norm_bound() {
        for table in [c2v(), c3v()] {
            for shell in 0..=6u32 {
                for state in shell_states(2, shell) {
                    let mut sum = FockVector::default();
                    for ir in &table.irreps {
                        let p = project_vector(&table, ir, None, &FockVector::unit(state)).unwrap();
                        // ⟨Pφ|Pφ⟩ ≤ ⟨φ|φ⟩, exactly
                        let n2 = p.norm2();
                        let w = FockVector::unit(state).norm2();
                        let diff = w - n2;
                        let q = diff.as_rational().expect("projector norms rational here");
                        assert!(*q >= crate::scalar::rat(0));
                        sum.add_scaled(&p, &ExactScalar::one());
                    }
                    assert_eq!(sum, FockVector::unit(state), "{table:?} shell {shell}",
                        table = table.name);
                }
            }
        }
    }

    #[test]
    fn adapted_basis_c2v_families() {
        let t = c2v();
        // B1, shells ≤ 1: single vector (φ01 + φ10)/√2
        let b1 = adapted_basis(&t, "B1", 0, 1).unwrap();
        assert_eq!(b1.len(), 1);
        let v = &b1[0];
        assert_eq!(v.components.len(), 2);
        let a = v.components.get(&f2(0, 1)).unwrap();
        let b = v.components.get(&f2(1, 0)).unwrap();
        assert_eq!(a, b);
        // A2, shells ≤ 2: single vector (φ20 − φ02)/√2
        let a2 = adapted_basis(&t, "A2", 0, 2).unwrap();
        assert_eq!(a2.len(), 1);
        let v = &a2[0];
        let c20 = v.components.get(&f2(2, 0)).unwrap().clone();
        let c02 = v.components.get(&f2(0, 2)).unwrap().clone();
        assert_eq!(c20, -c02);
    }

    #[test]
    fn block_dimensions_complete_every_shell() {
        for table in [c2(C2Axis::X), c2v(), c3v(), c4v()] {
            for shell in 0..=7u32 {
                let full = shell_states(2, shell).len();
                let mut total = 0usize;
                for ir in &table.irreps {
                    for row in 0..ir.dim {
                        total += adapted_shell(&table, &ir.label, row, shell).unwrap().len();
                    }
                }
                assert_eq!(total, full, "{} shell {shell}", table.name);
            }
        }
    }

    #[test]
    fn adapted_vectors_are_orthogonal_across_irreps() {
        let t = c3v();
        let mut all = Vec::new();
        for ir in &t.irreps {
            for row in 0..ir.dim {
                all.extend(adapted_basis(&t, &ir.label, row, 4).unwrap());
            }
        }
        for (i, a) in all.iter().enumerate() {
            for b in all.iter().skip(i + 1) {
                let ip = a.components.inner(&b.components);
                assert!(ip.is_zero(), "⟨{a:?}|{b:?}⟩ = {ip:?}");
            }
        }
    }

    #[test]
    fn antiunitary_product_is_c2() {
        // A(x)∘A(y) = C₂ exactly
        let ax = GroupElement::from_rows(&[&[1, 0], &[0, -1]], true);
        let ay = GroupElement::from_rows(&[&[-1, 0], &[0, 1]], true);
        let c2el = GroupElement::from_rows(&[&[-1, 0], &[0, -1]], false);
        assert_eq!(ax.compose(&ay), c2el);
        // and the product of two antiunitary catalog elements is unitary
        assert!(!ax.compose(&ay).is_antiunitary());
    }

    #[test]
    fn classify_3d_shells() {
        let t = td();
        let content = |m: u32| classify_shell(&t, m).unwrap();
        assert_eq!(content(0), vec![("A1".to_string(), 1)]);
        assert_eq!(content(1), vec![("T2".to_string(), 1)]);
        assert_eq!(
            content(2),
            vec![("A1".to_string(), 1), ("E".to_string(), 1), ("T2".to_string(), 1)]
        );
        // dimension checks for M ≤ 4: Σ mult·dim = (M+1)(M+2)/2
        for m in 0..=4u32 {
            let total: usize = content(m)
                .iter()
                .map(|(l, c)| c * t.irrep(l).unwrap().dim)
                .sum();
            assert_eq!(total as u32, (m + 1) * (m + 2) / 2);
        }
    }

    #[test]
    fn character_multiplicity_oracle_matches_projection_counts() {
        // independent route: m_S = (1/|G|) Σ_g χ^S(g)* tr(U_g on shell)
        for table in [c2v(), c3v(), td()] {
            for shell in 0..=5u32 {
                let states = shell_states(table.space_dim, shell);
                // traces of the (unnormalized) shell action are basis-independent
                let mut traces: Vec<RadReal> = Vec::new();
                for (g, _) in table.elements() {
                    let mut tr = RadReal::zero();
                    for s in &states {
                        let img = act_on_state(g, *s);
                        if let Some(c) = img.components.get(s) {
                            // diagonal in the unnormalized picture equals the
                            // normalized diagonal (same state, same weight)
                            assert!(c.is_real());
                            tr += c.re.clone();
                        }
                    }
                    traces.push(tr);
                }
                let counted = classify_shell(&table, shell).unwrap();
                for ir in &table.irreps {
                    let mut acc = RadReal::zero();
                    for ((_, ci), tr) in table.elements().zip(traces.iter()) {
                        acc += &ir.chars[ci] * tr;
                    }
                    let mult = acc.mul_rational(&ratio(1, table.order() as i64));
                    let expected = counted
                        .iter()
                        .find(|(l, _)| *l == ir.label)
                        .map(|(_, c)| *c)
                        .unwrap_or(0);
                    assert_eq!(
                        mult,
                        RadReal::from_int(expected as i64),
                        "{} {} shell {shell}",
                        table.name,
                        ir.label
                    );
                }
            }
        }
    }

    #[test]
    fn table_roundtrip_through_schema() {
        for name in ["C2", "C2v", "C3v", "C4v", "Td"] {
            let t = builtin(name).unwrap();
            let text = table_to_string(&t);
            let back = table_from_str(&text).unwrap();
            assert_eq!(back.name, t.name);
            assert_eq!(back.order(), t.order());
            for (a, b) in t.irreps.iter().zip(back.irreps.iter()) {
                assert_eq!(a.label, b.label);
                assert_eq!(a.chars, b.chars);
            }
            for (ca, cb) in t.classes.iter().zip(back.classes.iter()) {
                assert_eq!(ca.elements, cb.elements);
            }
        }
    }
}

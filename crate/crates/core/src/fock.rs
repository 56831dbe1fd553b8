//! Truncated harmonic-oscillator product bases and exact ladder algebra.
//!
//! Exact coefficients are carried relative to the *unnormalized* kets
//! |n⟩ᵤ = (a†)ⁿ|0⟩ with ⟨n|n⟩ᵤ = n!, where every polynomial in positions and
//! momenta has matrix elements inside the exact ring (each factor contributes
//! a power of 1/√2 and integers). Normalized-basis views are exposed through
//! [`ScaledCoeff`], which keeps the leftover factorial square root exact, and
//! through plain complex floats for the numerical paths.

use crate::error::{PtError, Result};
use crate::matrix::Mat;
use crate::scalar::{rat, ratio, rational_to_f64, ExactScalar, Rational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

/// Occupation-number tuple labeling a product oscillator state.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockProduct {
    dim: u8,
    occ: [u32; 3],
}

impl FockProduct {
    pub fn new2(nx: u32, ny: u32) -> Self {
        FockProduct { dim: 2, occ: [nx, ny, 0] }
    }

    pub fn new3(nx: u32, ny: u32, nz: u32) -> Self {
        FockProduct { dim: 3, occ: [nx, ny, nz] }
    }

    pub fn from_slice(occ: &[u32]) -> Self {
        assert!(occ.len() == 2 || occ.len() == 3, "dimension must be 2 or 3");
        let mut a = [0u32; 3];
        a[..occ.len()].copy_from_slice(occ);
        FockProduct { dim: occ.len() as u8, occ: a }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn occ(&self, axis: usize) -> u32 {
        self.occ[axis]
    }

    pub fn occs(&self) -> &[u32] {
        &self.occ[..self.dim as usize]
    }

    /// Total quantum number M = Σ nᵢ.
    pub fn shell(&self) -> u32 {
        self.occs().iter().sum()
    }

    pub fn with_occ(&self, axis: usize, n: u32) -> Self {
        let mut s = *self;
        s.occ[axis] = n;
        s
    }

    /// ∏ nᵢ! — the squared norm of the unnormalized ket.
    pub fn weight(&self) -> Rational {
        let mut w = BigInt::one();
        for &n in self.occs() {
            w *= factorial(n);
        }
        Rational::from_integer(w)
    }

    pub fn sqrt_weight_f64(&self) -> f64 {
        rational_to_f64(&self.weight()).sqrt()
    }
}

impl fmt::Debug for FockProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = self.occs();
        write!(f, "|{}", o[0])?;
        for n in &o[1..] {
            write!(f, ",{n}")?;
        }
        write!(f, "⟩")
    }
}

impl fmt::Display for FockProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn factorial(n: u32) -> BigInt {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut v = vec![BigInt::one()];
        for k in 1..=256u32 {
            let last = v.last().unwrap().clone();
            v.push(last * BigInt::from(k));
        }
        v
    });
    table[n as usize].clone()
}

/// Ordered truncated basis: all states with shell ≤ max_shell,
/// shell-major then lexicographic. The ordering is fixed so assembled
/// matrices are reproducible bit for bit.
#[derive(Clone)]
pub struct Basis {
    dim: u8,
    max_shell: u32,
    states: Vec<FockProduct>,
    index: BTreeMap<FockProduct, usize>,
}

impl Basis {
    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn max_shell(&self) -> u32 {
        self.max_shell
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[FockProduct] {
        &self.states
    }

    pub fn state(&self, i: usize) -> FockProduct {
        self.states[i]
    }

    pub fn index_of(&self, s: &FockProduct) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn from_states(states: Vec<FockProduct>) -> Result<Self> {
        let dim = states.first().map(|s| s.dim()).unwrap_or(2);
        let max_shell = states.iter().map(|s| s.shell()).max().unwrap_or(0);
        let mut index = BTreeMap::new();
        for (i, s) in states.iter().enumerate() {
            if let Some(prev) = index.insert(*s, i) {
                return Err(PtError::DuplicateBasisState(prev, i));
            }
        }
        Ok(Basis { dim, max_shell, states, index })
    }
}

/// All product states with shell ≤ max_shell, ordered by (shell, lexicographic).
pub fn shell_basis(dim: u8, max_shell: u32) -> Basis {
    assert!(dim == 2 || dim == 3, "dimension must be 2 or 3");
    let mut states = Vec::new();
    for m in 0..=max_shell {
        states.extend(shell_states(dim, m));
    }
    Basis::from_states(states).expect("shell enumeration has no duplicates")
}

/// The states of a single shell, lexicographically ordered.
pub fn shell_states(dim: u8, shell: u32) -> Vec<FockProduct> {
    let mut out = Vec::new();
    if dim == 2 {
        for nx in 0..=shell {
            out.push(FockProduct::new2(nx, shell - nx));
        }
        out.sort();
    } else {
        for nx in 0..=shell {
            for ny in 0..=(shell - nx) {
                out.push(FockProduct::new3(nx, ny, shell - nx - ny));
            }
        }
        out.sort();
    }
    out
}

/// One term c · ∏ xᵢ^aᵢ · ∏ pᵢ^bᵢ (positions standing left of momenta).
#[derive(Clone, PartialEq)]
pub struct Monomial {
    pub coeff: ExactScalar,
    pub xpow: [u8; 3],
    pub ppow: [u8; 3],
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.xpow.iter().chain(self.ppow.iter()).map(|&p| p as u32).sum()
    }
}

/// Polynomial in positions and momenta with exact coefficients, kept in a
/// canonical monomial order so equality is syntactic.
#[derive(Clone, PartialEq)]
pub struct OperatorPolynomial {
    dim: u8,
    monomials: Vec<Monomial>,
}

impl OperatorPolynomial {
    pub fn zero(dim: u8) -> Self {
        OperatorPolynomial { dim, monomials: Vec::new() }
    }

    pub fn monomial(dim: u8, coeff: ExactScalar, xpow: &[u8], ppow: &[u8]) -> Self {
        let mut xp = [0u8; 3];
        let mut pp = [0u8; 3];
        xp[..xpow.len()].copy_from_slice(xpow);
        pp[..ppow.len()].copy_from_slice(ppow);
        let mut op = OperatorPolynomial {
            dim,
            monomials: vec![Monomial { coeff, xpow: xp, ppow: pp }],
        };
        op.canonicalize();
        op
    }

    /// xᵢ
    pub fn x(dim: u8, axis: usize) -> Self {
        let mut xp = [0u8; 3];
        xp[axis] = 1;
        Self::monomial(dim, ExactScalar::one(), &xp[..dim as usize], &[])
    }

    /// pᵢ
    pub fn p(dim: u8, axis: usize) -> Self {
        let mut pp = [0u8; 3];
        pp[axis] = 1;
        Self::monomial(dim, ExactScalar::one(), &[], &pp[..dim as usize])
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn degree(&self) -> u32 {
        self.monomials.iter().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        let mut op = OperatorPolynomial {
            dim: self.dim,
            monomials: self.monomials.iter().chain(o.monomials.iter()).cloned().collect(),
        };
        op.canonicalize();
        op
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        let mut op = OperatorPolynomial {
            dim: self.dim,
            monomials: self
                .monomials
                .iter()
                .map(|m| Monomial { coeff: &m.coeff * s, ..m.clone() })
                .collect(),
        };
        op.canonicalize();
        op
    }

    /// Entrywise complex conjugation of the coefficients (time reversal).
    pub fn conj_coeffs(&self) -> Self {
        OperatorPolynomial {
            dim: self.dim,
            monomials: self
                .monomials
                .iter()
                .map(|m| Monomial { coeff: m.coeff.conj(), ..m.clone() })
                .collect(),
        }
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.monomials.iter().all(|m| m.coeff.is_real())
    }

    fn canonicalize(&mut self) {
        self.monomials.sort_by_key(|m| (m.xpow, m.ppow));
        let mut merged: Vec<Monomial> = Vec::with_capacity(self.monomials.len());
        for m in self.monomials.drain(..) {
            if let Some(last) = merged.last_mut() {
                if last.xpow == m.xpow && last.ppow == m.ppow {
                    last.coeff += m.coeff;
                    continue;
                }
            }
            merged.push(m);
        }
        merged.retain(|m| !m.coeff.is_zero());
        self.monomials = merged;
    }
}

impl fmt::Debug for OperatorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        let names = ["x", "y", "z"];
        let pnames = ["px", "py", "pz"];
        let mut first = true;
        for m in &self.monomials {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})", m.coeff)?;
            for a in 0..self.dim as usize {
                for _ in 0..m.xpow[a] {
                    write!(f, "·{}", names[a])?;
                }
            }
            for a in 0..self.dim as usize {
                for _ in 0..m.ppow[a] {
                    write!(f, "·{}", pnames[a])?;
                }
            }
        }
        Ok(())
    }
}

/// Exact expansion over unnormalized kets.
#[derive(Clone, PartialEq, Default)]
pub struct FockVector {
    pub components: BTreeMap<FockProduct, ExactScalar>,
}

impl FockVector {
    pub fn unit(state: FockProduct) -> Self {
        let mut components = BTreeMap::new();
        components.insert(state, ExactScalar::one());
        FockVector { components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn get(&self, state: &FockProduct) -> Option<&ExactScalar> {
        self.components.get(state)
    }

    pub fn add_scaled(&mut self, other: &FockVector, s: &ExactScalar) {
        if s.is_zero() {
            return;
        }
        for (k, v) in &other.components {
            let term = v * s;
            self.insert_add(*k, term);
        }
    }

    pub fn insert_add(&mut self, state: FockProduct, value: ExactScalar) {
        if value.is_zero() {
            return;
        }
        let entry = self.components.entry(state).or_default();
        *entry += value;
        if entry.is_zero() {
            self.components.remove(&state);
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return FockVector::default();
        }
        FockVector {
            components: self.components.iter().map(|(k, v)| (*k, v * s)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        FockVector {
            components: self.components.iter().map(|(k, v)| (*k, v.conj())).collect(),
        }
    }

    pub fn sub(&self, other: &FockVector) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.components {
            out.insert_add(*k, -v.clone());
        }
        out
    }

    /// ⟨self|other⟩ with the unnormalized-ket weights ⟨n|n⟩ᵤ = n!.
    pub fn inner(&self, other: &FockVector) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        let (small, big, flip) = if self.components.len() <= other.components.len() {
            (&self.components, &other.components, false)
        } else {
            (&other.components, &self.components, true)
        };
        for (k, v) in small {
            if let Some(w) = big.get(k) {
                let (bra, ket) = if flip { (w, v) } else { (v, w) };
                acc += bra.conj().mul_rational(&k.weight()) * ket.clone();
            }
        }
        acc
    }

    /// ⟨self|self⟩ (real, nonnegative).
    pub fn norm2(&self) -> crate::scalar::RadReal {
        let z = self.inner(self);
        debug_assert!(z.im.is_zero());
        z.re
    }

    /// All components lie in one shell? Returns it if so.
    pub fn single_shell(&self) -> Option<u32> {
        let mut it = self.components.keys().map(|k| k.shell());
        let first = it.next()?;
        it.all(|s| s == first).then_some(first)
    }

    pub fn max_shell(&self) -> u32 {
        self.components.keys().map(|k| k.shell()).max().unwrap_or(0)
    }

    /// Components against *normalized* basis states, as exact scaled values.
    pub fn normalized_components(&self) -> Vec<(FockProduct, ScaledCoeff)> {
        self.components
            .iter()
            .map(|(k, v)| (*k, ScaledCoeff::from_weight(v.clone(), k)))
            .collect()
    }

    pub fn to_c64_normalized_unit(&self) -> Vec<(FockProduct, Complex64)> {
        let norm = self.norm2().to_f64().sqrt();
        self.components
            .iter()
            .map(|(k, v)| (*k, v.to_c64() * k.sqrt_weight_f64() / norm))
            .collect()
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.components {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({v:?}){k:?}")?;
        }
        Ok(())
    }
}

/// `coeff · √scale` with `scale` a square-free positive integer: a
/// normalized-basis coefficient kept exact even when the factorial square
/// root escapes the ring.
#[derive(Clone, PartialEq, Debug)]
pub struct ScaledCoeff {
    pub coeff: ExactScalar,
    root_primes: std::collections::BTreeSet<u64>,
}

impl ScaledCoeff {
    pub fn exact(coeff: ExactScalar) -> Self {
        ScaledCoeff { coeff, root_primes: Default::default() }
    }

    /// coeff·√(m!·n!·…) for the given state's weight, reduced.
    pub fn from_weight(coeff: ExactScalar, state: &FockProduct) -> Self {
        let mut sc = Self::exact(coeff);
        for &n in state.occs() {
            for k in 2..=n {
                sc.push_factor(k as u64, 1);
            }
        }
        sc
    }

    /// coeff·√(w(num_state)/w(den_state)).
    pub fn from_weight_ratio(coeff: ExactScalar, num: &FockProduct, den: &FockProduct) -> Self {
        let mut sc = Self::exact(coeff);
        for axis in 0..num.dim() as usize {
            let (m, n) = (num.occ(axis), den.occ(axis));
            if m >= n {
                for k in (n + 1)..=m {
                    sc.push_factor(k as u64, 1);
                }
            } else {
                for k in (m + 1)..=n {
                    sc.push_factor(k as u64, -1);
                }
            }
        }
        sc
    }

    /// The square-free integer under the root.
    pub fn scale(&self) -> Rational {
        let mut s = BigInt::one();
        for p in &self.root_primes {
            s *= BigInt::from(*p);
        }
        Rational::from_integer(s)
    }

    /// Multiply the value by √(k^sign), k a small positive integer.
    fn push_factor(&mut self, mut k: u64, sign: i32) {
        let mut p = 2u64;
        while p * p <= k {
            let mut e = 0u32;
            while k % p == 0 {
                k /= p;
                e += 1;
            }
            self.push_prime_power(p, e, sign);
            p += 1;
        }
        if k > 1 {
            self.push_prime_power(k, 1, sign);
        }
    }

    fn push_prime_power(&mut self, p: u64, e: u32, sign: i32) {
        if e == 0 {
            return;
        }
        let whole = rat(p as i64).pow((e / 2) as i32);
        let factor = if sign > 0 { whole } else { whole.recip() };
        self.coeff = self.coeff.mul_rational(&factor);
        if e % 2 == 1 {
            if self.root_primes.remove(&p) {
                // √p·√p = p (or √S/√p = √(S/p) when dividing)
                if sign > 0 {
                    self.coeff = self.coeff.mul_rational(&rat(p as i64));
                }
            } else {
                self.root_primes.insert(p);
                if sign < 0 {
                    // 1/√p = √p/p
                    self.coeff = self.coeff.mul_rational(&ratio(1, p as i64));
                }
            }
        }
    }

    /// The exact ring value, when √scale ∈ {1,√2,√3,√6}.
    pub fn in_ring(&self) -> Option<ExactScalar> {
        let s = crate::scalar::RadReal::from_rational(self.scale()).sqrt_in_field()?;
        Some(&self.coeff * &ExactScalar { re: s, im: Default::default() })
    }

    pub fn to_c64(&self) -> Complex64 {
        self.coeff.to_c64() * rational_to_f64(&self.scale()).sqrt()
    }
}

/// Apply one position factor on one axis (unnormalized picture):
/// x|n⟩ᵤ = (1/√2)(n|n−1⟩ᵤ + |n+1⟩ᵤ).
fn apply_x_u(axis: usize, v: &FockVector) -> FockVector {
    let is2 = ExactScalar::inv_sqrt2();
    let mut out = FockVector::default();
    for (k, c) in &v.components {
        let n = k.occ(axis);
        out.insert_add(k.with_occ(axis, n + 1), c * &is2);
        if n > 0 {
            out.insert_add(k.with_occ(axis, n - 1), (c * &is2).mul_rational(&rat(n as i64)));
        }
    }
    out
}

/// p|n⟩ᵤ = (i/√2)(|n+1⟩ᵤ − n|n−1⟩ᵤ).
fn apply_p_u(axis: usize, v: &FockVector) -> FockVector {
    let i_is2 = ExactScalar::i() * ExactScalar::inv_sqrt2();
    let mut out = FockVector::default();
    for (k, c) in &v.components {
        let n = k.occ(axis);
        out.insert_add(k.with_occ(axis, n + 1), c * &i_is2);
        if n > 0 {
            out.insert_add(k.with_occ(axis, n - 1), -(c * &i_is2).mul_rational(&rat(n as i64)));
        }
    }
    out
}

/// Exact op|v⟩ in the unnormalized picture (no truncation).
pub fn apply_op_u(op: &OperatorPolynomial, v: &FockVector) -> FockVector {
    let mut out = FockVector::default();
    for m in op.monomials() {
        let mut w = v.clone();
        // positions stand left of momenta, so momenta act first
        for axis in 0..op.dim() as usize {
            for _ in 0..m.ppow[axis] {
                w = apply_p_u(axis, &w);
            }
        }
        for axis in 0..op.dim() as usize {
            for _ in 0..m.xpow[axis] {
                w = apply_x_u(axis, &w);
            }
        }
        out.add_scaled(&w, &m.coeff);
    }
    out
}

/// op applied to a single unnormalized unit ket.
pub fn ladder_apply_u(op: &OperatorPolynomial, state: FockProduct) -> FockVector {
    apply_op_u(op, &FockVector::unit(state))
}

/// op applied to a *normalized* basis state, expanded over normalized basis
/// states with exact scaled coefficients.
pub fn ladder_apply(op: &OperatorPolynomial, state: FockProduct) -> Vec<(FockProduct, ScaledCoeff)> {
    ladder_apply_u(op, state)
        .components
        .iter()
        .map(|(k, c)| (*k, ScaledCoeff::from_weight_ratio(c.clone(), k, &state)))
        .collect()
}

/// ⟨basisᵢ|op|basisⱼ⟩ in the unnormalized similarity picture: entries stay in
/// the exact ring and the spectrum/characteristic polynomial is unchanged.
/// Contributions leaving the basis are dropped (truncation).
pub fn assemble_matrix_u(op: &OperatorPolynomial, basis: &Basis) -> Mat<ExactScalar> {
    let n = basis.len();
    let mut m = Mat::zeros(n, n);
    for j in 0..n {
        let col = ladder_apply_u(op, basis.state(j));
        for (k, c) in &col.components {
            if let Some(i) = basis.index_of(k) {
                m[(i, j)] = c.clone();
            }
        }
    }
    m
}

/// Normalized-basis exact matrix. Errs when an entry falls outside the ring
/// (possible at higher occupations); the unnormalized assembly is total.
pub fn assemble_matrix(op: &OperatorPolynomial, basis: &Basis) -> Result<Mat<ExactScalar>> {
    let n = basis.len();
    let mut m = Mat::zeros(n, n);
    for j in 0..n {
        let col = ladder_apply(op, basis.state(j));
        for (k, sc) in &col {
            if let Some(i) = basis.index_of(k) {
                m[(i, j)] = sc.in_ring().ok_or(PtError::EntryOutOfRing { row: i, col: j })?;
            }
        }
    }
    Ok(m)
}

/// Complex-float monomial list for the fast normalized ladder path.
#[derive(Clone)]
pub struct FloatOperator {
    dim: u8,
    monomials: Vec<(Complex64, [u8; 3], [u8; 3])>,
}

impl FloatOperator {
    pub fn from_op(op: &OperatorPolynomial) -> Self {
        FloatOperator {
            dim: op.dim(),
            monomials: op
                .monomials()
                .iter()
                .map(|m| (m.coeff.to_c64(), m.xpow, m.ppow))
                .collect(),
        }
    }

    /// op|v⟩ over normalized basis states, in floating point.
    pub fn apply(&self, v: &BTreeMap<FockProduct, Complex64>) -> BTreeMap<FockProduct, Complex64> {
        let mut out = BTreeMap::new();
        for (c0, xpow, ppow) in &self.monomials {
            let mut w = v.clone();
            for axis in 0..self.dim as usize {
                for _ in 0..ppow[axis] {
                    w = apply_p_f64(axis, &w);
                }
            }
            for axis in 0..self.dim as usize {
                for _ in 0..xpow[axis] {
                    w = apply_x_f64(axis, &w);
                }
            }
            for (k, c) in w {
                *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c0 * c;
            }
        }
        out
    }

    pub fn apply_unit(&self, state: FockProduct) -> BTreeMap<FockProduct, Complex64> {
        let mut v = BTreeMap::new();
        v.insert(state, Complex64::new(1.0, 0.0));
        self.apply(&v)
    }
}

/// x|n⟩ = √(n/2)|n−1⟩ + √((n+1)/2)|n+1⟩ on normalized states.
fn apply_x_f64(axis: usize, v: &BTreeMap<FockProduct, Complex64>) -> BTreeMap<FockProduct, Complex64> {
    let mut out = BTreeMap::new();
    for (k, c) in v {
        let n = k.occ(axis) as f64;
        *out.entry(k.with_occ(axis, k.occ(axis) + 1)).or_insert(Complex64::new(0.0, 0.0)) +=
            c * ((n + 1.0) * 0.5).sqrt();
        if k.occ(axis) > 0 {
            *out.entry(k.with_occ(axis, k.occ(axis) - 1)).or_insert(Complex64::new(0.0, 0.0)) +=
                c * (n * 0.5).sqrt();
        }
    }
    out
}

/// p|n⟩ = i√((n+1)/2)|n+1⟩ − i√(n/2)|n−1⟩ on normalized states.
fn apply_p_f64(axis: usize, v: &BTreeMap<FockProduct, Complex64>) -> BTreeMap<FockProduct, Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let mut out = BTreeMap::new();
    for (k, c) in v {
        let n = k.occ(axis) as f64;
        *out.entry(k.with_occ(axis, k.occ(axis) + 1)).or_insert(Complex64::new(0.0, 0.0)) +=
            c * i * ((n + 1.0) * 0.5).sqrt();
        if k.occ(axis) > 0 {
            *out.entry(k.with_occ(axis, k.occ(axis) - 1)).or_insert(Complex64::new(0.0, 0.0)) -=
                c * i * (n * 0.5).sqrt();
        }
    }
    out
}

/// Normalized-basis matrix in complex floats.
pub fn assemble_matrix_c64(op: &OperatorPolynomial, basis: &Basis) -> Mat<Complex64> {
    let fop = FloatOperator::from_op(op);
    let n = basis.len();
    let mut m = Mat::zeros(n, n);
    for j in 0..n {
        let col = fop.apply_unit(basis.state(j));
        for (k, c) in col {
            if let Some(i) = basis.index_of(&k) {
                m[(i, j)] = c;
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn x2d() -> OperatorPolynomial {
        OperatorPolynomial::x(2, 0)
    }

    #[test]
    fn shell_basis_counts_and_order() {
        let b = shell_basis(2, 1);
        assert_eq!(
            b.states(),
            &[FockProduct::new2(0, 0), FockProduct::new2(0, 1), FockProduct::new2(1, 0)]
        );
        let b = shell_basis(3, 2);
        assert_eq!(b.len(), 10);
        // shell sizes (M+1)(M+2)/2 in 3D
        for m in 0..=6 {
            assert_eq!(shell_states(3, m).len() as u32, (m + 1) * (m + 2) / 2);
        }
    }

    #[test]
    fn ladder_x_on_ground() {
        let r = ladder_apply(&x2d(), FockProduct::new2(0, 0));
        assert_eq!(r.len(), 1);
        let (k, sc) = &r[0];
        assert_eq!(*k, FockProduct::new2(1, 0));
        assert_eq!(sc.in_ring().unwrap(), ExactScalar::inv_sqrt2());
        assert!((sc.to_c64().re - 0.70710678).abs() < 1e-8);
    }

    #[test]
    fn ladder_x_squared_on_ground() {
        let x = x2d();
        let x2 = OperatorPolynomial::monomial(2, ExactScalar::one(), &[2, 0], &[]);
        let r: BTreeMap<_, _> = ladder_apply(&x2, FockProduct::new2(0, 0))
            .into_iter()
            .map(|(k, sc)| (k, sc.in_ring().unwrap()))
            .collect();
        assert_eq!(r[&FockProduct::new2(0, 0)], ExactScalar::from_ratio(1, 2));
        assert_eq!(r[&FockProduct::new2(2, 0)], ExactScalar::radical(1, 2, 2));
        // x² equals x applied twice (no truncation in the exact picture)
        let once = ladder_apply_u(&x, FockProduct::new2(0, 0));
        let twice = apply_op_u(&x, &once);
        assert_eq!(twice, ladder_apply_u(&x2, FockProduct::new2(0, 0)));
    }

    #[test]
    fn ladder_xyz_on_ground() {
        let xyz = OperatorPolynomial::monomial(3, ExactScalar::one(), &[1, 1, 1], &[]);
        let r = ladder_apply(&xyz, FockProduct::new3(0, 0, 0));
        assert_eq!(r.len(), 1);
        let (k, sc) = &r[0];
        assert_eq!(*k, FockProduct::new3(1, 1, 1));
        assert!((sc.to_c64().re - 0.35355339).abs() < 1e-8);
    }

    #[test]
    fn harmonic_oscillator_diagonal() {
        // x² + p² on a 1D-like 2D basis column: use full 2D H₀ and check 2M+2
        let h0: OperatorPolynomial = [
            OperatorPolynomial::monomial(2, ExactScalar::one(), &[2, 0], &[]),
            OperatorPolynomial::monomial(2, ExactScalar::one(), &[0, 2], &[]),
            OperatorPolynomial::monomial(2, ExactScalar::one(), &[], &[2, 0]),
            OperatorPolynomial::monomial(2, ExactScalar::one(), &[], &[0, 2]),
        ]
        .iter()
        .fold(OperatorPolynomial::zero(2), |acc, t| acc.add(t));
        let basis = shell_basis(2, 3);
        let m = assemble_matrix_u(&h0, &basis);
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let expect = if i == j {
                    ExactScalar::from_int((2 * basis.state(i).shell() + 2) as i64)
                } else {
                    ExactScalar::zero()
                };
                assert_eq!(m[(i, j)], expect, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn iaxy_coupling_matrix() {
        // iaxy at a=1 over {00,01,10,11}: only |00⟩↔|11⟩ and |01⟩↔|10⟩, value i/2
        let op = OperatorPolynomial::monomial(2, ExactScalar::i(), &[1, 1], &[]);
        let basis = shell_basis(2, 2);
        let m = assemble_matrix(&op, &basis).unwrap();
        let idx = |a, b| basis.index_of(&FockProduct::new2(a, b)).unwrap();
        let i2 = ExactScalar::imag_ratio(1, 2);
        assert_eq!(m[(idx(1, 1), idx(0, 0))], i2);
        assert_eq!(m[(idx(0, 0), idx(1, 1))], i2);
        assert_eq!(m[(idx(1, 0), idx(0, 1))], i2);
        assert_eq!(m[(idx(0, 1), idx(1, 0))], i2);
    }

    #[test]
    fn float_matches_exact_assembly() {
        let op = OperatorPolynomial::monomial(2, ExactScalar::imag_ratio(3, 7), &[1, 2], &[])
            .add(&OperatorPolynomial::monomial(2, ExactScalar::from_ratio(1, 3), &[0, 2], &[]))
            .add(&OperatorPolynomial::monomial(2, ExactScalar::one(), &[], &[2, 0]));
        let basis = shell_basis(2, 5);
        let mf = assemble_matrix_c64(&op, &basis);
        // cross-check against the exact unnormalized assembly through the
        // similarity rescale by √(weight ratios)
        let mu = assemble_matrix_u(&op, &basis);
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let scale = basis.state(i).sqrt_weight_f64() / basis.state(j).sqrt_weight_f64();
                let expect = mu[(i, j)].to_c64() * scale;
                assert!((mf[(i, j)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn duplicate_basis_rejected() {
        let err = Basis::from_states(vec![FockProduct::new2(0, 0), FockProduct::new2(0, 0)]);
        assert!(matches!(err, Err(PtError::DuplicateBasisState(0, 1))));
    }

    #[test]
    fn scaled_coeff_reduction() {
        // √(4!/1!) = √24 = 2√6
        let sc = ScaledCoeff::from_weight_ratio(
            ExactScalar::one(),
            &FockProduct::new2(4, 0),
            &FockProduct::new2(1, 0),
        );
        assert_eq!(sc.scale(), ratio(6, 1));
        assert_eq!(sc.coeff, ExactScalar::from_int(2));
        assert_eq!(sc.in_ring().unwrap(), ExactScalar::radical(2, 1, 6));
        // 1/√(5!) = √30/60
        let sc = ScaledCoeff::from_weight_ratio(
            ExactScalar::one(),
            &FockProduct::new2(0, 0),
            &FockProduct::new2(5, 0),
        );
        assert_eq!(sc.scale(), ratio(30, 1));
        assert!(sc.in_ring().is_none());
        assert!((sc.to_c64().re - 1.0 / 120f64.sqrt()).abs() < 1e-14);
    }
}

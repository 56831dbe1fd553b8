//! Exact characteristic polynomials det(E·I − H₀ − g·W) in the symbolic
//! coupling g, via the Faddeev–LeVerrier recurrence over the exact ring.
//!
//! Catalog matrices are real in the unnormalized picture, so the recurrence
//! runs over an integer-scaled Z[√2,√3] ring (BigInt coordinates, exact
//! division only by the loop index), which is considerably faster than
//! rational arithmetic; the rational scaling is undone at the end.

use crate::error::{PtError, Result};
use crate::fock::{assemble_matrix_u, shell_basis};
use crate::matrix::{Mat, Poly};
use crate::models::Model;
use crate::scalar::{ExactScalar, RadReal, Rational, Scalar};
use crate::spectra::BlockBasis;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

/// Default cap on the basis dimension for exact computation.
pub const EXACT_DIM_CAP: usize = 120;

/// Coefficients of det(E·I − H(g)), monic in E; `coeffs[k]` multiplies Eᵏ
/// and is an exact polynomial in g.
#[derive(Clone, Debug)]
pub struct CharPoly {
    pub dim: usize,
    pub coeffs: Vec<Poly<ExactScalar>>,
}

impl CharPoly {
    /// Every odd power of g has an exactly zero coefficient?
    pub fn odd_g_all_zero(&self) -> bool {
        self.coeffs.iter().all(|c| {
            c.coeffs()
                .iter()
                .enumerate()
                .all(|(k, v)| k % 2 == 0 || v.is_zero())
        })
    }

    /// Some odd power of g appears with an exactly nonzero coefficient?
    pub fn has_nonzero_odd_g(&self) -> bool {
        !self.odd_g_all_zero()
    }

    /// Numerical evaluation at (E, g).
    pub fn eval(&self, e: Complex64, g: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * e + c.eval_c64(g);
        }
        acc
    }

    /// Evaluation together with the magnitude bound Σ|cₖ(g)|·|E|ᵏ that
    /// controls the floating-point error of the evaluation itself.
    pub fn eval_with_bound(&self, e: Complex64, g: Complex64) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut bound = 0.0f64;
        let ea = e.norm();
        for c in self.coeffs.iter().rev() {
            acc = acc * e + c.eval_c64(g);
            let mag: f64 = c
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, v)| v.to_c64().norm() * g.norm().powi(k as i32))
                .sum();
            bound = bound * ea + mag;
        }
        (acc, bound.max(1.0))
    }

    /// Product of two characteristic polynomials (spectra of a direct sum).
    pub fn product(&self, other: &CharPoly) -> CharPoly {
        let n = self.dim + other.dim;
        let mut coeffs = vec![Poly::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        CharPoly { dim: n, coeffs }
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let gpoly: Vec<String> = c
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| match j {
                    0 => format!("{v}"),
                    1 => format!("({v})g"),
                    _ => format!("({v})g^{j}"),
                })
                .collect();
            let cs = gpoly.join("+");
            match k {
                0 => write!(f, "({cs})")?,
                1 => write!(f, "({cs})E")?,
                _ => write!(f, "({cs})E^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact division by a small natural number, guaranteed exact inside the
/// Faddeev–LeVerrier recurrence.
trait ExactDivNat: Scalar {
    fn div_nat(&self, k: u64) -> Self;
}

impl ExactDivNat for ExactScalar {
    fn div_nat(&self, k: u64) -> Self {
        self.mul_rational(&Rational::new(BigInt::one(), BigInt::from(k)))
    }
}

/// Z[√2,√3] with BigInt coordinates: the integer ring of the fast path.
#[derive(Clone, PartialEq, Default)]
struct IntRad {
    c0: BigInt,
    c2: BigInt,
    c3: BigInt,
    c6: BigInt,
}

impl fmt::Debug for IntRad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}r2+{}r3+{}r6", self.c0, self.c2, self.c3, self.c6)
    }
}

impl std::ops::Add for IntRad {
    type Output = IntRad;
    fn add(self, o: IntRad) -> IntRad {
        IntRad { c0: self.c0 + o.c0, c2: self.c2 + o.c2, c3: self.c3 + o.c3, c6: self.c6 + o.c6 }
    }
}

impl std::ops::Sub for IntRad {
    type Output = IntRad;
    fn sub(self, o: IntRad) -> IntRad {
        IntRad { c0: self.c0 - o.c0, c2: self.c2 - o.c2, c3: self.c3 - o.c3, c6: self.c6 - o.c6 }
    }
}

impl std::ops::Neg for IntRad {
    type Output = IntRad;
    fn neg(self) -> IntRad {
        IntRad { c0: -self.c0, c2: -self.c2, c3: -self.c3, c6: -self.c6 }
    }
}

impl std::ops::Mul for IntRad {
    type Output = IntRad;
    fn mul(self, o: IntRad) -> IntRad {
        let a = &self;
        let b = &o;
        let two = BigInt::from(2);
        let three = BigInt::from(3);
        let six = BigInt::from(6);
        IntRad {
            c0: &a.c0 * &b.c0 + &two * (&a.c2 * &b.c2) + &three * (&a.c3 * &b.c3) + &six * (&a.c6 * &b.c6),
            c2: &a.c0 * &b.c2 + &a.c2 * &b.c0 + &three * (&a.c3 * &b.c6 + &a.c6 * &b.c3),
            c3: &a.c0 * &b.c3 + &a.c3 * &b.c0 + &two * (&a.c2 * &b.c6 + &a.c6 * &b.c2),
            c6: &a.c0 * &b.c6 + &a.c6 * &b.c0 + &a.c2 * &b.c3 + &a.c3 * &b.c2,
        }
    }
}

impl Zero for IntRad {
    fn zero() -> Self {
        IntRad::default()
    }
    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c2.is_zero() && self.c3.is_zero() && self.c6.is_zero()
    }
}

impl One for IntRad {
    fn one() -> Self {
        IntRad { c0: BigInt::one(), ..Default::default() }
    }
}

impl Scalar for IntRad {
    fn conj_s(&self) -> Self {
        self.clone()
    }
    fn inv_s(&self) -> Option<Self> {
        None
    }
    fn from_rational_s(r: &Rational) -> Self {
        assert!(r.is_integer(), "IntRad holds integers only");
        IntRad { c0: r.to_integer(), ..Default::default() }
    }
    fn to_c64_s(&self) -> Complex64 {
        let f = |b: &BigInt| crate::scalar::rational_to_f64(&Rational::from_integer(b.clone()));
        Complex64::new(
            f(&self.c0) + f(&self.c2) * std::f64::consts::SQRT_2 + f(&self.c3) * 3f64.sqrt()
                + f(&self.c6) * 6f64.sqrt(),
            0.0,
        )
    }
}

impl ExactDivNat for IntRad {
    fn div_nat(&self, k: u64) -> Self {
        let k = BigInt::from(k);
        let div = |b: &BigInt| {
            let (q, r) = b.div_rem(&k);
            debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
            q
        };
        IntRad { c0: div(&self.c0), c2: div(&self.c2), c3: div(&self.c3), c6: div(&self.c6) }
    }
}

/// Faddeev–LeVerrier: for H with entries `rows[i] = [(j, hᵢⱼ)]` (sparse),
/// returns [a₁, …, aₙ] with det(E·I − H) = Eⁿ + a₁Eⁿ⁻¹ + … + aₙ.
fn faddeev_leverrier<T: ExactDivNat>(n: usize, rows: &[Vec<(usize, Poly<T>)>]) -> Vec<Poly<T>> {
    let mut m: Vec<Poly<T>> = (0..n * n)
        .map(|idx| {
            if idx % (n + 1) == 0 {
                Poly::constant(T::one())
            } else {
                Poly::zero()
            }
        })
        .collect();
    let mut coeffs = Vec::with_capacity(n);
    for k in 1..=n as u64 {
        // N = H·M
        let mut nmat: Vec<Poly<T>> = vec![Poly::zero(); n * n];
        for (i, row) in rows.iter().enumerate() {
            for (l, h) in row {
                if h.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let mlj = &m[l * n + j];
                    if mlj.is_zero() {
                        continue;
                    }
                    nmat[i * n + j] = nmat[i * n + j].add(&h.mul(mlj));
                }
            }
        }
        // a_k = −tr(N)/k
        let mut tr = Poly::zero();
        for i in 0..n {
            tr = tr.add(&nmat[i * n + i]);
        }
        let ak = Poly::from_coeffs(tr.coeffs().iter().map(|c| (-c.clone()).div_nat(k)).collect());
        if (k as usize) < n {
            for i in 0..n {
                nmat[i * n + i] = nmat[i * n + i].add(&ak);
            }
            m = nmat;
        }
        coeffs.push(ak);
    }
    coeffs
}

fn radreal_is_real_entry(v: &ExactScalar) -> bool {
    v.im.is_zero()
}

fn denominator_lcm(mats: &[&Mat<ExactScalar>]) -> BigInt {
    let mut l = BigInt::one();
    for m in mats {
        for i in 0..m.n_rows() {
            for j in 0..m.n_cols() {
                let e = &m[(i, j)];
                for q in [&e.re.q0, &e.re.q2, &e.re.q3, &e.re.q6] {
                    l = l.lcm(q.denom());
                }
            }
        }
    }
    l
}

fn to_intrad(v: &ExactScalar, scale: &BigInt) -> IntRad {
    let conv = |q: &Rational| {
        let s = q * Rational::from_integer(scale.clone());
        debug_assert!(s.is_integer());
        s.to_integer()
    };
    IntRad { c0: conv(&v.re.q0), c2: conv(&v.re.q2), c3: conv(&v.re.q3), c6: conv(&v.re.q6) }
}

fn intrad_to_exact(v: &IntRad) -> ExactScalar {
    let r = |b: &BigInt| Rational::from_integer(b.clone());
    ExactScalar {
        re: RadReal::new(r(&v.c0), r(&v.c2), r(&v.c3), r(&v.c6)),
        im: RadReal::zero(),
    }
}

/// det(E·I − H₀ − g·W) for exact matrices H₀ and W.
///
/// When both are real (every catalog case) the recurrence runs over the
/// integer-scaled ring; otherwise it falls back to rational arithmetic.
pub fn char_poly_of_parts(h0: &Mat<ExactScalar>, w: &Mat<ExactScalar>, cap: usize) -> Result<CharPoly> {
    let n = h0.n_rows();
    if !h0.is_square() || w.n_rows() != n || w.n_cols() != n {
        return Err(PtError::DimensionMismatch("char_poly_of_parts needs square equal dims".into()));
    }
    if n > cap {
        return Err(PtError::CapExceeded { dim: n, cap });
    }
    if n == 0 {
        return Ok(CharPoly { dim: 0, coeffs: vec![Poly::constant(ExactScalar::one())] });
    }
    let all_real = (0..n).all(|i| {
        (0..n).all(|j| radreal_is_real_entry(&h0[(i, j)]) && radreal_is_real_entry(&w[(i, j)]))
    });
    let coeffs_exact: Vec<Poly<ExactScalar>>;
    if all_real {
        let scale = denominator_lcm(&[h0, w]);
        let rows: Vec<Vec<(usize, Poly<IntRad>)>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter_map(|j| {
                        let p = Poly::from_coeffs(vec![
                            to_intrad(&h0[(i, j)], &scale),
                            to_intrad(&w[(i, j)], &scale),
                        ]);
                        (!p.is_zero()).then_some((j, p))
                    })
                    .collect()
            })
            .collect();
        let raw = faddeev_leverrier(n, &rows);
        // det(E·I − H) = L⁻ⁿ·q(L·E): coefficient of Eʲ is L^{j−n}·q_j
        // (raw[k-1] = a_k multiplies E^{n-k})
        let l = Rational::from_integer(scale);
        let mut per_power: Vec<Poly<ExactScalar>> = vec![Poly::zero(); n + 1];
        per_power[n] = Poly::constant(ExactScalar::one());
        for (k, ak) in raw.iter().enumerate() {
            let j = n - (k + 1);
            let mut factor = Rational::one();
            for _ in 0..(n - j) {
                factor /= l.clone();
            }
            per_power[j] = Poly::from_coeffs(
                ak.coeffs()
                    .iter()
                    .map(|c| intrad_to_exact(c).mul_rational(&factor))
                    .collect(),
            );
        }
        coeffs_exact = per_power;
    } else {
        let rows: Vec<Vec<(usize, Poly<ExactScalar>)>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter_map(|j| {
                        let p = Poly::from_coeffs(vec![h0[(i, j)].clone(), w[(i, j)].clone()]);
                        (!p.is_zero()).then_some((j, p))
                    })
                    .collect()
            })
            .collect();
        let raw = faddeev_leverrier(n, &rows);
        let mut per_power: Vec<Poly<ExactScalar>> = vec![Poly::zero(); n + 1];
        per_power[n] = Poly::constant(ExactScalar::one());
        for (k, ak) in raw.iter().enumerate() {
            per_power[n - (k + 1)] = ak.clone();
        }
        coeffs_exact = per_power;
    }
    Ok(CharPoly { dim: n, coeffs: coeffs_exact })
}

/// Exact characteristic polynomial of the full truncated basis.
pub fn char_poly_full(model: &Model, max_shell: u32, cap: usize) -> Result<CharPoly> {
    let basis = shell_basis(model.dim, max_shell);
    if basis.len() > cap {
        return Err(PtError::CapExceeded { dim: basis.len(), cap });
    }
    let h0 = assemble_matrix_u(&model.h0(), &basis);
    let w = assemble_matrix_u(&model.perturbation(), &basis);
    char_poly_of_parts(&h0, &w, cap)
}

/// Exact characteristic polynomial of one (irrep, row) block.
pub fn char_poly_block(
    model: &Model,
    irrep: &str,
    row: usize,
    max_shell: u32,
    cap: usize,
) -> Result<CharPoly> {
    let basis = BlockBasis::build(model.group(), irrep, row, max_shell)?;
    if basis.len() > cap {
        return Err(PtError::CapExceeded { dim: basis.len(), cap });
    }
    let b0 = basis.assemble_exact(&model.h0());
    let b1 = basis.assemble_exact(&model.perturbation());
    char_poly_of_parts(&b0, &b1, cap)
}

//! Exact scalars: the complexified biquadratic field Q(√2,√3).
//!
//! Every matrix element produced by the ladder algebra lives in this field:
//! position/momentum factors contribute powers of 1/√2, the C₃ rotations
//! contribute ±1/2 and ±√3/2, and the PT-breaking couplings carry a factor i.
//! Arithmetic is exact; conversion to floating point is explicit and one-way.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

pub type Rational = BigRational;

/// Rational from an integer pair, `p/q`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Rational from an integer.
pub fn rat(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Convert a big rational to f64, robust against numerators/denominators
/// far outside the f64 range (plain `to_f64` would overflow to inf).
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let ns = (nb - 500).max(0);
    let ds = (db - 500).max(0);
    let n = (num >> ns as usize).to_f64().unwrap_or(f64::NAN);
    let d = (den >> ds as usize).to_f64().unwrap_or(f64::NAN);
    (n / d) * 2f64.powi((ns - ds) as i32)
}

/// Parse a decimal literal ("0.1", "-3", "2.5e-3", "1/10") into an exact rational.
pub fn parse_decimal_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let neg = int_part.starts_with('-');
    let digits: String = int_part
        .trim_start_matches(['-', '+'])
        .chars()
        .chain(frac_part.chars())
        .collect();
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut num: BigInt = digits.parse().ok()?;
    if neg {
        num = -num;
    }
    let scale = frac_part.len() as i32 - exp;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        Rational::new(num, ten.pow(scale as u32))
    } else {
        Rational::from_integer(num * ten.pow((-scale) as u32))
    })
}

/// Real element of Q(√2,√3): `q0 + q2·√2 + q3·√3 + q6·√6`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RadReal {
    pub q0: Rational,
    pub q2: Rational,
    pub q3: Rational,
    pub q6: Rational,
}

impl RadReal {
    pub fn new(q0: Rational, q2: Rational, q3: Rational, q6: Rational) -> Self {
        RadReal { q0, q2, q3, q6 }
    }

    pub fn from_rational(q: Rational) -> Self {
        RadReal { q0: q, ..Default::default() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    /// p/q · √k for k ∈ {1,2,3,6}.
    pub fn radical(p: i64, q: i64, k: u32) -> Self {
        let r = ratio(p, q);
        match k {
            1 => RadReal { q0: r, ..Default::default() },
            2 => RadReal { q2: r, ..Default::default() },
            3 => RadReal { q3: r, ..Default::default() },
            6 => RadReal { q6: r, ..Default::default() },
            _ => panic!("unsupported radical √{k}"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.q0.is_zero() && self.q2.is_zero() && self.q3.is_zero() && self.q6.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q2.is_zero() && self.q3.is_zero() && self.q6.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.q0)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.q0)
            + rational_to_f64(&self.q2) * std::f64::consts::SQRT_2
            + rational_to_f64(&self.q3) * 3f64.sqrt()
            + rational_to_f64(&self.q6) * 6f64.sqrt()
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        RadReal {
            q0: &self.q0 * r,
            q2: &self.q2 * r,
            q3: &self.q3 * r,
            q6: &self.q6 * r,
        }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        // basis products: √2·√3=√6, √2·√6=2√3, √3·√6=3√2
        let a = self;
        let b = o;
        let two = rat(2);
        let three = rat(3);
        let six = rat(6);
        RadReal {
            q0: &a.q0 * &b.q0 + &two * (&a.q2 * &b.q2) + &three * (&a.q3 * &b.q3) + &six * (&a.q6 * &b.q6),
            q2: &a.q0 * &b.q2 + &a.q2 * &b.q0 + &three * (&a.q3 * &b.q6 + &a.q6 * &b.q3),
            q3: &a.q0 * &b.q3 + &a.q3 * &b.q0 + &two * (&a.q2 * &b.q6 + &a.q6 * &b.q2),
            q6: &a.q0 * &b.q6 + &a.q6 * &b.q0 + &a.q2 * &b.q3 + &a.q3 * &b.q2,
        }
    }

    /// Multiplicative inverse via the tower Q ⊂ Q(√2) ⊂ Q(√2,√3).
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // x = u + v√3 with u, v ∈ Q(√2); x⁻¹ = (u − v√3)/(u² − 3v²)
        let u = (self.q0.clone(), self.q2.clone());
        let v = (self.q3.clone(), self.q6.clone());
        let q2_mul = |a: &(Rational, Rational), b: &(Rational, Rational)| {
            (&a.0 * &b.0 + rat(2) * (&a.1 * &b.1), &a.0 * &b.1 + &a.1 * &b.0)
        };
        let u2 = q2_mul(&u, &u);
        let v2 = q2_mul(&v, &v);
        let d = (u2.0 - rat(3) * v2.0, u2.1 - rat(3) * v2.1);
        // d⁻¹ in Q(√2)
        let nrm = &d.0 * &d.0 - rat(2) * (&d.1 * &d.1);
        if nrm.is_zero() {
            // cannot happen in a field unless self == 0, kept as a guard
            return None;
        }
        let dinv = (&d.0 / &nrm, -(&d.1 / &nrm));
        let pu = q2_mul(&u, &dinv);
        let pv = q2_mul(&v, &dinv);
        Some(RadReal {
            q0: pu.0,
            q2: pu.1,
            q3: -pv.0,
            q6: -pv.1,
        })
    }

    /// Exact square root within the field, when one exists.
    ///
    /// Only handles rational inputs of the form r²·s with s ∈ {1,2,3,6};
    /// anything else returns None.
    pub fn sqrt_in_field(&self) -> Option<RadReal> {
        let q = self.as_rational()?;
        if q.is_negative() {
            return None;
        }
        if q.is_zero() {
            return Some(RadReal::default());
        }
        for s in [1i64, 2, 3, 6] {
            let cand = q / rat(s);
            let (n, d) = (cand.numer(), cand.denom());
            let sn = num_integer::Roots::sqrt(n);
            let sd = num_integer::Roots::sqrt(d);
            if &(&sn * &sn) == n && &(&sd * &sd) == d {
                let root = Rational::new(sn, sd);
                return Some(RadReal::radical(1, 1, s as u32).mul_rational(&root));
            }
        }
        None
    }
}

impl Add for RadReal {
    type Output = RadReal;
    fn add(self, o: RadReal) -> RadReal {
        RadReal {
            q0: self.q0 + o.q0,
            q2: self.q2 + o.q2,
            q3: self.q3 + o.q3,
            q6: self.q6 + o.q6,
        }
    }
}

impl AddAssign for RadReal {
    fn add_assign(&mut self, o: RadReal) {
        self.q0 += o.q0;
        self.q2 += o.q2;
        self.q3 += o.q3;
        self.q6 += o.q6;
    }
}

impl Sub for RadReal {
    type Output = RadReal;
    fn sub(self, o: RadReal) -> RadReal {
        RadReal {
            q0: self.q0 - o.q0,
            q2: self.q2 - o.q2,
            q3: self.q3 - o.q3,
            q6: self.q6 - o.q6,
        }
    }
}

impl Neg for RadReal {
    type Output = RadReal;
    fn neg(self) -> RadReal {
        RadReal {
            q0: -self.q0,
            q2: -self.q2,
            q3: -self.q3,
            q6: -self.q6,
        }
    }
}

impl Mul for RadReal {
    type Output = RadReal;
    fn mul(self, o: RadReal) -> RadReal {
        self.mul_impl(&o)
    }
}

impl<'a> Mul<&'a RadReal> for &'a RadReal {
    type Output = RadReal;
    fn mul(self, o: &'a RadReal) -> RadReal {
        self.mul_impl(o)
    }
}

impl Zero for RadReal {
    fn zero() -> Self {
        RadReal::default()
    }
    fn is_zero(&self) -> bool {
        RadReal::is_zero(self)
    }
}

impl One for RadReal {
    fn one() -> Self {
        RadReal::from_int(1)
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, parts: &[(&Rational, &str)], lead: &mut bool) -> fmt::Result {
    for (q, tag) in parts {
        if q.is_zero() {
            continue;
        }
        if *lead {
            write!(f, "{}{}", q, tag)?;
            *lead = false;
        } else if q.is_negative() {
            write!(f, "-{}{}", -(*q).clone(), tag)?;
        } else {
            write!(f, "+{}{}", q, tag)?;
        }
    }
    Ok(())
}

impl fmt::Display for RadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut lead = true;
        fmt_terms(
            f,
            &[(&self.q0, ""), (&self.q2, "r2"), (&self.q3, "r3"), (&self.q6, "r6")],
            &mut lead,
        )
    }
}

impl fmt::Debug for RadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parse a RadReal from the compact `a+b r2+c r3+d r6` notation used by
/// the character-table files, e.g. `-1/2`, `1/2r3`, `1-1/2r2`.
impl std::str::FromStr for RadReal {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty scalar".into());
        }
        let mut out = RadReal::default();
        let mut term = String::new();
        let mut chars = s.chars().peekable();
        let mut terms: Vec<String> = Vec::new();
        while let Some(c) = chars.next() {
            if (c == '+' || c == '-') && !term.is_empty() && !term.ends_with(['e', 'E']) {
                terms.push(term.clone());
                term.clear();
            }
            if c == '+' && term.is_empty() {
                continue;
            }
            term.push(c);
        }
        if !term.is_empty() {
            terms.push(term);
        }
        for t in terms {
            let (coeff_str, k) = if let Some(idx) = t.find('r') {
                let k: u32 = t[idx + 1..].parse().map_err(|_| format!("bad radical in `{t}`"))?;
                (&t[..idx], k)
            } else {
                (&t[..], 1)
            };
            let coeff = match coeff_str {
                "" => rat(1),
                "-" => rat(-1),
                c => parse_decimal_rational(c).ok_or_else(|| format!("bad rational `{c}`"))?,
            };
            out += RadReal::radical(1, 1, k).mul_rational(&coeff);
        }
        Ok(out)
    }
}

/// Exact complex scalar over Q(√2,√3): `re + i·im`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ExactScalar {
    pub re: RadReal,
    pub im: RadReal,
}

impl ExactScalar {
    pub fn new(re: RadReal, im: RadReal) -> Self {
        ExactScalar { re, im }
    }

    pub fn from_rational(q: Rational) -> Self {
        ExactScalar { re: RadReal::from_rational(q), im: RadReal::default() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(ratio(p, q))
    }

    /// p/q·√k
    pub fn radical(p: i64, q: i64, k: u32) -> Self {
        ExactScalar { re: RadReal::radical(p, q, k), im: RadReal::default() }
    }

    pub fn i() -> Self {
        ExactScalar { re: RadReal::default(), im: RadReal::from_int(1) }
    }

    /// i·p/q
    pub fn imag_ratio(p: i64, q: i64) -> Self {
        ExactScalar { re: RadReal::default(), im: RadReal::from_rational(ratio(p, q)) }
    }

    /// 1/√2 = √2/2, the ubiquitous ladder factor.
    pub fn inv_sqrt2() -> Self {
        Self::radical(1, 2, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactScalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |z|² = z·z̄, a real field element.
    pub fn abs2(&self) -> RadReal {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.abs2().inv()?;
        Some(ExactScalar {
            re: (&self.re * &n),
            im: -(&self.im * &n),
        })
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        ExactScalar { re: self.re.mul_rational(r), im: self.im.mul_rational(r) }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Exact square root when the value is a real rational of the form
    /// ±r²·s with s ∈ {1,2,3,6}; negative inputs give imaginary results.
    pub fn sqrt_in_field(&self) -> Option<ExactScalar> {
        if !self.im.is_zero() {
            return None;
        }
        let q = self.re.as_rational()?;
        if q.is_negative() {
            let pos = RadReal::from_rational(-q.clone()).sqrt_in_field()?;
            Some(ExactScalar { re: RadReal::default(), im: pos })
        } else {
            let root = self.re.sqrt_in_field()?;
            Some(ExactScalar { re: root, im: RadReal::default() })
        }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        // skip the imaginary work in the (frequent) all-real case
        if self.im.is_zero() && o.im.is_zero() {
            return ExactScalar { re: &self.re * &o.re, im: RadReal::default() };
        }
        ExactScalar {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: ExactScalar) -> ExactScalar {
        ExactScalar { re: self.re + o.re, im: self.im + o.im }
    }
}

impl AddAssign for ExactScalar {
    fn add_assign(&mut self, o: ExactScalar) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: ExactScalar) -> ExactScalar {
        ExactScalar { re: self.re - o.re, im: self.im - o.im }
    }
}

impl SubAssign for ExactScalar {
    fn sub_assign(&mut self, o: ExactScalar) {
        let v = self.clone() - o;
        *self = v;
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { re: -self.re, im: -self.im }
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: ExactScalar) -> ExactScalar {
        self.mul_impl(&o)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &'a ExactScalar) -> ExactScalar {
        self.mul_impl(o)
    }
}

impl Div for ExactScalar {
    type Output = ExactScalar;
    fn div(self, o: ExactScalar) -> ExactScalar {
        self.mul_impl(&o.inv().expect("division by zero ExactScalar"))
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar::default()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        ExactScalar::from_int(1)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut lead = true;
        fmt_terms(
            f,
            &[(&self.re.q0, ""), (&self.re.q2, "r2"), (&self.re.q3, "r3"), (&self.re.q6, "r6")],
            &mut lead,
        )?;
        fmt_terms(
            f,
            &[
                (&self.im.q0, "i"),
                (&self.im.q2, "r2i"),
                (&self.im.q3, "r3i"),
                (&self.im.q6, "r6i"),
            ],
            &mut lead,
        )
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for ExactScalar {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty scalar".into());
        }
        let mut out = ExactScalar::default();
        let mut terms: Vec<String> = Vec::new();
        let mut term = String::new();
        for c in s.chars() {
            if (c == '+' || c == '-') && !term.is_empty() {
                terms.push(term.clone());
                term.clear();
            }
            if c == '+' && term.is_empty() {
                continue;
            }
            term.push(c);
        }
        if !term.is_empty() {
            terms.push(term);
        }
        for t in terms {
            let (body, imag) = match t.strip_suffix('i') {
                Some(b) => (b, true),
                None => (&t[..], false),
            };
            let body = if body.is_empty() || body == "-" {
                format!("{body}1")
            } else {
                body.to_string()
            };
            let r: RadReal = body.parse()?;
            if imag {
                out += ExactScalar { re: RadReal::default(), im: r };
            } else {
                out += ExactScalar { re: r, im: RadReal::default() };
            }
        }
        Ok(out)
    }
}

/// Scalar abstraction shared by the exact field and complex floats, so the
/// assembly / characteristic-polynomial / perturbation code can run over
/// either. Concrete aliases live at the crate root.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn conj_s(&self) -> Self;
    fn inv_s(&self) -> Option<Self>;
    fn from_rational_s(r: &Rational) -> Self;
    fn to_c64_s(&self) -> Complex64;
}

impl Div for RadReal {
    type Output = RadReal;
    fn div(self, o: RadReal) -> RadReal {
        self.mul_impl(&o.inv().expect("division by zero RadReal"))
    }
}

impl Scalar for RadReal {
    fn conj_s(&self) -> Self {
        self.clone()
    }
    fn inv_s(&self) -> Option<Self> {
        self.inv()
    }
    fn from_rational_s(r: &Rational) -> Self {
        RadReal::from_rational(r.clone())
    }
    fn to_c64_s(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
}

impl Scalar for ExactScalar {
    fn conj_s(&self) -> Self {
        self.conj()
    }
    fn inv_s(&self) -> Option<Self> {
        self.inv()
    }
    fn from_rational_s(r: &Rational) -> Self {
        ExactScalar::from_rational(r.clone())
    }
    fn to_c64_s(&self) -> Complex64 {
        self.to_c64()
    }
}

impl Scalar for Complex64 {
    fn conj_s(&self) -> Self {
        self.conj()
    }
    fn inv_s(&self) -> Option<Self> {
        if self.norm_sqr() == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn from_rational_s(r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }
    fn to_c64_s(&self) -> Complex64 {
        *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_scalars() -> Vec<ExactScalar> {
        vec![
            ExactScalar::from_ratio(3, 4),
            ExactScalar::radical(1, 2, 2),
            ExactScalar::radical(-2, 3, 3),
            ExactScalar::new(RadReal::radical(1, 2, 6), RadReal::from_rational(ratio(5, 7))),
            ExactScalar::new(
                RadReal::new(ratio(1, 3), ratio(-1, 2), ratio(2, 5), ratio(0, 1)),
                RadReal::new(ratio(-2, 7), ratio(1, 4), ratio(0, 1), ratio(1, 6)),
            ),
        ]
    }

    #[test]
    fn radreal_radical_products() {
        let r2 = RadReal::radical(1, 1, 2);
        let r3 = RadReal::radical(1, 1, 3);
        let r6 = RadReal::radical(1, 1, 6);
        assert_eq!(&r2 * &r2, RadReal::from_int(2));
        assert_eq!(&r3 * &r3, RadReal::from_int(3));
        assert_eq!(&r2 * &r3, r6);
        assert_eq!(&r2 * &r6, RadReal::radical(2, 1, 3));
        assert_eq!(&r3 * &r6, RadReal::radical(3, 1, 2));
    }

    #[test]
    fn field_axioms_on_samples() {
        let xs = sample_scalars();
        for x in &xs {
            for y in &xs {
                for z in &xs {
                    let lhs = (x.clone() * y.clone()) * z.clone();
                    let rhs = x.clone() * (y.clone() * z.clone());
                    assert_eq!(lhs, rhs);
                }
            }
        }
        for x in &xs {
            let inv = x.inv().expect("nonzero");
            assert_eq!(x.clone() * inv, ExactScalar::one());
        }
    }

    #[test]
    fn float_conversion_tracks_exact_value() {
        let xs = sample_scalars();
        for x in &xs {
            for y in &xs {
                let exact = (x.clone() * y.clone()).to_c64();
                let approx = x.to_c64() * y.to_c64();
                assert!((exact - approx).norm() < 1e-12, "{exact} vs {approx}");
            }
        }
    }

    #[test]
    fn robust_rational_to_f64() {
        // 60!² / 2, far beyond naive BigInt→f64 of numerator alone is fine,
        // but probe a genuinely huge ratio too
        let big = BigInt::from(2).pow(2000) + BigInt::from(17);
        let r = Rational::new(big.clone(), big - BigInt::from(12345));
        let f = rational_to_f64(&r);
        assert!((f - 1.0).abs() < 1e-10);
        assert_eq!(rational_to_f64(&ratio(-3, 8)), -0.375);
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["0", "1/2", "-1/2r2", "1-1/2r2+3r3", "-2/3r6", "5"] {
            let v: RadReal = s.parse().unwrap();
            let back: RadReal = v.to_string().parse().unwrap();
            assert_eq!(v, back, "roundtrip of {s}");
        }
        let z: ExactScalar = "1/2+1/2r2i".parse().unwrap();
        assert_eq!(z.re, RadReal::from_rational(ratio(1, 2)));
        assert_eq!(z.im, RadReal::radical(1, 2, 2));
        let back: ExactScalar = z.to_string().parse().unwrap();
        assert_eq!(z, back);
    }

    #[test]
    fn decimal_rational_parsing() {
        assert_eq!(parse_decimal_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_decimal_rational("-2.5e-3").unwrap(), ratio(-1, 400));
        assert_eq!(parse_decimal_rational("3").unwrap(), rat(3));
        assert_eq!(parse_decimal_rational("1/10").unwrap(), ratio(1, 10));
        assert!(parse_decimal_rational("abc").is_none());
    }

    #[test]
    fn sqrt_in_field_cases() {
        let x = RadReal::from_rational(ratio(9, 4));
        assert_eq!(x.sqrt_in_field().unwrap(), RadReal::from_rational(ratio(3, 2)).clone());
        let y = RadReal::from_rational(ratio(1, 2));
        assert_eq!(y.sqrt_in_field().unwrap(), RadReal::radical(1, 2, 2));
        let z = RadReal::from_rational(rat(12));
        assert_eq!(z.sqrt_in_field().unwrap(), RadReal::radical(2, 1, 3));
        assert!(RadReal::from_rational(rat(5)).sqrt_in_field().is_none());
        assert!(RadReal::radical(1, 1, 2).sqrt_in_field().is_none());
    }
}

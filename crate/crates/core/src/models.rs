//! Catalog of the coupled-oscillator Hamiltonians H = H₀ + i·a·W, each with
//! its symmetry point group and antiunitary generators.

use crate::error::{PtError, Result};
use crate::fock::OperatorPolynomial;
use crate::pointgroup::{self, C2Axis, CharacterTable, GroupElement};
use crate::scalar::{ratio, ExactScalar, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum ModelId {
    Solvable1,
    Solvable2,
    Barbanis,
    Barbanis2,
    HenonHeiles,
    H3d,
    PullenEdmonds,
}

impl ModelId {
    pub fn name(&self) -> &'static str {
        match self {
            ModelId::Solvable1 => "solvable1",
            ModelId::Solvable2 => "solvable2",
            ModelId::Barbanis => "barbanis",
            ModelId::Barbanis2 => "barbanis2",
            ModelId::HenonHeiles => "henon_heiles",
            ModelId::H3d => "h3d",
            ModelId::PullenEdmonds => "pullen_edmonds",
        }
    }

    pub fn all() -> [ModelId; 7] {
        [
            ModelId::Solvable1,
            ModelId::Solvable2,
            ModelId::Barbanis,
            ModelId::Barbanis2,
            ModelId::HenonHeiles,
            ModelId::H3d,
            ModelId::PullenEdmonds,
        ]
    }
}

/// A catalog Hamiltonian: exact H₀ and W factories with H(a) = H₀ + i·a·W,
/// its symmetry group, and the antiunitary generators that protect the
/// real-or-conjugate-pair structure of the spectrum.
#[derive(Clone, Debug)]
pub struct Model {
    pub id: ModelId,
    pub dim: u8,
    /// shape parameters, used by the x²y²-coupled model only
    pub alpha: Rational,
    pub beta: Rational,
    /// the unperturbed part is diagonal in the product Fock basis
    pub fock_diagonal_h0: bool,
    /// degree of the perturbation monomials (shell reach per order)
    pub pert_degree: u32,
}

fn mono(dim: u8, coeff: ExactScalar, xpow: &[u8]) -> OperatorPolynomial {
    OperatorPolynomial::monomial(dim, coeff, xpow, &[])
}

fn kinetic(dim: u8, coeff: ExactScalar) -> OperatorPolynomial {
    let mut op = OperatorPolynomial::zero(dim);
    for axis in 0..dim as usize {
        let mut pp = [0u8; 3];
        pp[axis] = 2;
        op = op.add(&OperatorPolynomial::monomial(dim, coeff.clone(), &[], &pp[..dim as usize]));
    }
    op
}

impl Model {
    pub fn by_name(name: &str) -> Result<Model> {
        Self::by_name_with(name, None, None)
    }

    /// Look up a model, overriding α and β (meaningful for `pullen_edmonds`).
    pub fn by_name_with(name: &str, alpha: Option<Rational>, beta: Option<Rational>) -> Result<Model> {
        let id = ModelId::all()
            .into_iter()
            .find(|m| m.name() == name)
            .ok_or_else(|| {
                let names: Vec<_> = ModelId::all().iter().map(|m| m.name()).collect();
                PtError::UnknownModel(name.into(), names.join(", "))
            })?;
        let mut m = Model::new(id);
        if let Some(a) = alpha {
            m.alpha = a;
        }
        if let Some(b) = beta {
            m.beta = b;
        }
        Ok(m)
    }

    pub fn new(id: ModelId) -> Model {
        match id {
            ModelId::Solvable1 => Model {
                id,
                dim: 2,
                alpha: ratio(1, 1),
                beta: ratio(0, 1),
                fock_diagonal_h0: true,
                pert_degree: 2,
            },
            ModelId::Solvable2 => Model {
                id,
                dim: 2,
                alpha: ratio(1, 1),
                beta: ratio(0, 1),
                fock_diagonal_h0: false,
                pert_degree: 2,
            },
            ModelId::Barbanis | ModelId::Barbanis2 => Model {
                id,
                dim: 2,
                alpha: ratio(1, 1),
                beta: ratio(0, 1),
                fock_diagonal_h0: id == ModelId::Barbanis,
                pert_degree: 3,
            },
            ModelId::HenonHeiles => Model {
                id,
                dim: 2,
                alpha: ratio(1, 1),
                beta: ratio(0, 1),
                fock_diagonal_h0: true,
                pert_degree: 3,
            },
            ModelId::H3d => Model {
                id,
                dim: 3,
                alpha: ratio(1, 1),
                beta: ratio(0, 1),
                fock_diagonal_h0: true,
                pert_degree: 3,
            },
            ModelId::PullenEdmonds => Model {
                id,
                dim: 2,
                alpha: ratio(1, 1),
                beta: ratio(1, 10),
                fock_diagonal_h0: false,
                pert_degree: 2,
            },
        }
    }

    pub fn name(&self) -> &'static str {
        self.id.name()
    }

    /// The Hermitian a = 0 part, with each catalog entry following its
    /// source normalization (the ½-factor models keep their ½).
    pub fn h0(&self) -> OperatorPolynomial {
        let one = ExactScalar::from_int(1);
        let half = ExactScalar::from_ratio(1, 2);
        let two = ExactScalar::from_int(2);
        match self.id {
            ModelId::Solvable1 => kinetic(2, one.clone())
                .add(&mono(2, one.clone(), &[2, 0]))
                .add(&mono(2, one, &[0, 2])),
            ModelId::Solvable2 => kinetic(2, one.clone())
                .add(&mono(2, two, &[2, 0]))
                .add(&mono(2, one, &[0, 2])),
            ModelId::Barbanis => kinetic(2, half.clone())
                .add(&mono(2, half.clone(), &[2, 0]))
                .add(&mono(2, half, &[0, 2])),
            ModelId::Barbanis2 => kinetic(2, half.clone())
                .add(&mono(2, half, &[2, 0]))
                .add(&mono(2, one, &[0, 2])),
            ModelId::HenonHeiles => kinetic(2, one.clone())
                .add(&mono(2, one.clone(), &[2, 0]))
                .add(&mono(2, one, &[0, 2])),
            ModelId::H3d => kinetic(3, one.clone())
                .add(&mono(3, one.clone(), &[2, 0, 0]))
                .add(&mono(3, one.clone(), &[0, 2, 0]))
                .add(&mono(3, one, &[0, 0, 2])),
            ModelId::PullenEdmonds => {
                let alpha = ExactScalar::from_rational(self.alpha.clone());
                let beta = ExactScalar::from_rational(self.beta.clone());
                kinetic(2, one)
                    .add(&mono(2, alpha.clone(), &[2, 0]))
                    .add(&mono(2, alpha, &[0, 2]))
                    .add(&mono(2, beta, &[2, 2]))
            }
        }
    }

    /// The real perturbation W with H(a) = H₀ + i·a·W.
    pub fn perturbation(&self) -> OperatorPolynomial {
        let one = ExactScalar::from_int(1);
        match self.id {
            ModelId::Solvable1 | ModelId::Solvable2 | ModelId::PullenEdmonds => {
                mono(2, one, &[1, 1])
            }
            ModelId::Barbanis => mono(2, one, &[1, 2]),
            ModelId::Barbanis2 => mono(2, one, &[2, 1]),
            ModelId::HenonHeiles => {
                mono(2, one, &[1, 2]).add(&mono(2, ExactScalar::from_ratio(-1, 3), &[3, 0]))
            }
            ModelId::H3d => mono(3, one, &[1, 1, 1]),
        }
    }

    /// H(a) = H₀ + i·a·W with exact a.
    pub fn hamiltonian(&self, a: &Rational) -> OperatorPolynomial {
        let ia = ExactScalar::i().mul_rational(a);
        self.h0().add(&self.perturbation().scale(&ia))
    }

    pub fn hamiltonian_f64(&self, a: f64) -> OperatorPolynomial {
        let a = Rational::from_float(a).expect("finite coupling");
        self.hamiltonian(&a)
    }

    /// The declared symmetry point group.
    pub fn group(&self) -> CharacterTable {
        match self.id {
            ModelId::Solvable1 | ModelId::PullenEdmonds => pointgroup::c2v(),
            ModelId::Solvable2 => pointgroup::c2(C2Axis::Z),
            ModelId::Barbanis => pointgroup::c2(C2Axis::X),
            ModelId::Barbanis2 => pointgroup::c2(C2Axis::Y),
            ModelId::HenonHeiles => pointgroup::c3v(),
            ModelId::H3d => pointgroup::td(),
        }
    }

    /// Antiunitary generators (coordinate map composed with time reversal).
    pub fn antiunitary_generators(&self) -> Vec<GroupElement> {
        match self.id {
            ModelId::Solvable1 | ModelId::PullenEdmonds => vec![
                // A(x) = C₂(x)·T and A(y) = C₂(y)·T
                GroupElement::from_rows(&[&[1, 0], &[0, -1]], true),
                GroupElement::from_rows(&[&[-1, 0], &[0, 1]], true),
            ],
            ModelId::Solvable2 => vec![GroupElement::from_rows(&[&[1, 0], &[0, -1]], true)],
            ModelId::Barbanis => vec![GroupElement::from_rows(&[&[-1, 0], &[0, 1]], true)],
            ModelId::Barbanis2 => vec![GroupElement::from_rows(&[&[1, 0], &[0, -1]], true)],
            ModelId::HenonHeiles => vec![GroupElement::from_rows(&[&[-1, 0], &[0, -1]], true)],
            ModelId::H3d => vec![GroupElement::from_rows(
                &[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
                true,
            )],
        }
    }

    /// Unperturbed level spacing (2 for the p²+q² models, 1 for the ½ ones).
    pub fn level_spacing(&self) -> u32 {
        match self.id {
            ModelId::Barbanis | ModelId::Barbanis2 => 1,
            _ => 2,
        }
    }
}

/// Every catalog model with its defaults.
pub fn catalog() -> Vec<Model> {
    ModelId::all().into_iter().map(Model::new).collect()
}

/// `build(name, a)` convenience mirroring the CLI surface.
pub fn build(name: &str, a: &Rational, alpha: Option<Rational>, beta: Option<Rational>) -> Result<OperatorPolynomial> {
    let m = Model::by_name_with(name, alpha, beta)?;
    Ok(m.hamiltonian(a))
}

/// Group and antiunitary generators for a named model.
pub fn model_group(name: &str) -> Result<(CharacterTable, Vec<GroupElement>)> {
    let m = Model::by_name(name)?;
    Ok((m.group(), m.antiunitary_generators()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointgroup::verify_invariance;
    use crate::scalar::rat;

    #[test]
    fn hermitian_at_zero_coupling() {
        for m in catalog() {
            let h = m.hamiltonian(&rat(0));
            assert!(h.has_real_coeffs(), "{} not Hermitian at a=0", m.name());
            assert_eq!(h, m.h0());
        }
    }

    #[test]
    fn pullen_edmonds_limits() {
        // α=1, β=0 reduces to the first solvable model
        let mut pe = Model::new(ModelId::PullenEdmonds);
        pe.beta = rat(0);
        let s1 = Model::new(ModelId::Solvable1);
        assert_eq!(pe.hamiltonian(&ratio(1, 3)), s1.hamiltonian(&ratio(1, 3)));
    }

    #[test]
    fn henon_heiles_monomials() {
        let m = Model::new(ModelId::HenonHeiles);
        let h = m.hamiltonian(&rat(1));
        // contains i·xy² and −(i/3)·x³
        let found_xy2 = h
            .monomials()
            .iter()
            .any(|t| t.xpow == [1, 2, 0] && t.coeff == ExactScalar::i());
        let found_x3 = h
            .monomials()
            .iter()
            .any(|t| t.xpow == [3, 0, 0] && t.coeff == ExactScalar::imag_ratio(-1, 3));
        assert!(found_xy2 && found_x3);
    }

    #[test]
    fn declared_symmetries_have_zero_residual() {
        for m in catalog() {
            let shell = if m.dim == 3 { 4 } else { 6 };
            for a in [ratio(1, 3), ratio(-7, 10)] {
                let h = m.hamiltonian(&a);
                for (g, _) in m.group().elements() {
                    let r = verify_invariance(&h, shell, g);
                    assert!(r.exact_zero, "{}: unitary element {g:?} residual {}", m.name(), r.max_abs);
                }
                for g in m.antiunitary_generators() {
                    let r = verify_invariance(&h, shell, &g);
                    assert!(r.exact_zero, "{}: antiunitary {g:?} residual {}", m.name(), r.max_abs);
                }
            }
        }
    }

    #[test]
    fn barbanis_swap_is_not_a_symmetry() {
        // σᵥ₁ (x↔y) does not leave i·a·xy² invariant
        let m = Model::new(ModelId::Barbanis);
        let h = m.hamiltonian(&ratio(1, 2));
        let swap = GroupElement::from_rows(&[&[0, 1], &[1, 0]], false);
        let r = verify_invariance(&h, 6, &swap);
        assert!(!r.exact_zero);
        assert!(r.max_abs > 1e-3);
    }

    #[test]
    fn antiunitary_generators_compose_into_group() {
        // products of the declared antiunitary elements are unitary members
        for m in catalog() {
            let gens = m.antiunitary_generators();
            let table = m.group();
            let members: Vec<GroupElement> = table.elements().map(|(g, _)| g.clone()).collect();
            for a in &gens {
                for b in &gens {
                    let p = a.compose(b);
                    assert!(!p.is_antiunitary());
                    assert!(members.iter().any(|g| *g == p), "{}: {p:?} not in group", m.name());
                }
            }
        }
    }

    #[test]
    fn conjugating_coupling_flips_sign() {
        // H(−a) equals the coefficient-conjugate of H(a)
        for m in catalog() {
            let a = ratio(3, 7);
            assert_eq!(m.hamiltonian(&-a.clone()), m.hamiltonian(&a).conj_coeffs());
        }
    }

    #[test]
    fn unknown_model_rejected() {
        let err = Model::by_name("nope").unwrap_err();
        assert!(matches!(err, PtError::UnknownModel(..)));
        assert!(err.to_string().contains("solvable1"));
    }
}

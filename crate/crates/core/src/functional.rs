//! One-dimensional representations `φ_{x,χ} = χ ∘ Q_x` of `ℂG` and the Gelfand transform
//! of abelian group bundles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::abelian::{dual_bundle, AbelianError, Character, DualBundle, RootOfUnity};
use crate::algebra::AlgebraElement;
use crate::groupoid::FiniteGroupoid;
use crate::quotient::{abelianize_groupoid, Abelianization};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctionalError {
    #[error("unit {0} is not a fixed point")]
    NotFixed(usize),
    #[error("not a character of the abelianized isotropy group at {0}")]
    NotACharacter(usize),
}

/// A linear functional on `ℂG` given by its values on the basis deltas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacterFunctional {
    /// The fixed point `x`.
    pub point: usize,
    pub character: Character,
    /// `values[γ] = φ(δ_γ)`; `None` is zero.
    pub values: Vec<Option<RootOfUnity>>,
}

impl CharacterFunctional {
    pub fn value(&self, a: usize) -> Option<RootOfUnity> {
        self.values[a]
    }

    pub fn evaluate(&self, f: &AlgebraElement) -> Complex64 {
        f.coeffs()
            .iter()
            .zip(&self.values)
            .filter_map(|(c, v)| v.map(|v| c.to_complex() * v.to_complex()))
            .sum()
    }

    /// First `(α, β)` with `φ(δ_α * δ_β) ≠ φ(δ_α) φ(δ_β)`, compared exactly.
    pub fn multiplicativity_witness(&self, g: &FiniteGroupoid) -> Option<(usize, usize)> {
        for a in g.elements() {
            for b in g.elements() {
                let lhs = g.compose(a, b).and_then(|c| self.values[c]);
                let rhs = match (self.values[a], self.values[b]) {
                    (Some(x), Some(y)) => Some(x * y),
                    _ => None,
                };
                if lhs != rhs {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// First `α` with `φ(δ_α⁻¹) ≠ conj φ(δ_α)`.
    pub fn star_witness(&self, g: &FiniteGroupoid) -> Option<usize> {
        g.elements()
            .find(|&a| self.values[g.inv(a)] != self.values[a].map(RootOfUnity::conj))
    }

    /// The unique unit on which the functional is nonzero, i.e. the point `x_φ` of the
    /// restriction to the diagonal, if the diagonal restriction is an evaluation.
    pub fn diagonal_point(&self, g: &FiniteGroupoid) -> Option<usize> {
        let support: Vec<usize> = g
            .units()
            .iter()
            .copied()
            .filter(|&x| self.values[x].is_some())
            .collect();
        match support.as_slice() {
            [x] if self.values[*x] == Some(RootOfUnity::one()) => Some(*x),
            _ => None,
        }
    }
}

/// Character data of `G^ab` at every fixed point, computed once.
pub struct CharacterData {
    pub abelianization: Abelianization,
    pub dual: DualBundle,
}

impl CharacterData {
    pub fn new(g: &FiniteGroupoid) -> Self {
        let abelianization = abelianize_groupoid(g);
        let dual = dual_bundle(abelianization.groupoid()).expect("G^ab is an abelian group bundle");
        Self {
            abelianization,
            dual,
        }
    }

    fn fiber_over(&self, x: usize) -> Option<&crate::abelian::DualFiber> {
        let unit = self.abelianization.unit_over(x)?;
        self.dual.fibers.iter().find(|f| f.unit == unit)
    }

    /// `φ_{x,χ}`: zero off `G_x`, `χ` of the class in `G_x^ab` on `G_x`.
    pub fn functional(
        &self,
        g: &FiniteGroupoid,
        x: usize,
        chi: &Character,
    ) -> Result<CharacterFunctional, FunctionalError> {
        let fiber = self.fiber_over(x).ok_or(FunctionalError::NotFixed(x))?;
        let valid = Character::from_exps(&fiber.group, chi.exps().to_vec())
            .is_ok_and(|c| c.modulus() == chi.modulus());
        if !valid {
            return Err(FunctionalError::NotACharacter(x));
        }
        let values = g
            .elements()
            .map(|a| {
                if g.src(a) != x {
                    return None;
                }
                let class = self.abelianization.class_of(a).expect("fixed source");
                let pos = fiber
                    .arrows
                    .iter()
                    .position(|&b| b == class)
                    .expect("class in fiber");
                Some(chi.value(pos))
            })
            .collect();
        Ok(CharacterFunctional {
            point: x,
            character: chi.clone(),
            values,
        })
    }
}

pub fn character_functional(
    g: &FiniteGroupoid,
    x: usize,
    chi: &Character,
) -> Result<CharacterFunctional, FunctionalError> {
    CharacterData::new(g).functional(g, x, chi)
}

/// Every `φ_{x,χ}` with `x` a fixed point and `χ` a character of `G_x^ab`.
pub fn enumerate_characters(g: &FiniteGroupoid) -> Vec<CharacterFunctional> {
    let data = CharacterData::new(g);
    g.fixed_points()
        .iter()
        .flat_map(|x| {
            let fiber = data.fiber_over(x).expect("fixed point has a fiber");
            fiber
                .characters
                .iter()
                .map(|chi| data.functional(g, x, chi).expect("valid pair"))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `[φ_{x,χ}(δ_γ)]` for an abelian group bundle, rows in dual-bundle order.
#[derive(Clone, Debug)]
pub struct GelfandMatrix {
    pub rows: Vec<(usize, Character)>,
    pub entries: Vec<Vec<Option<RootOfUnity>>>,
}

impl GelfandMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        let n = self.size();
        DMatrix::from_fn(n, n, |i, j| {
            self.entries[i][j].map_or(Complex64::new(0.0, 0.0), RootOfUnity::to_complex)
        })
    }

    pub fn determinant(&self) -> Complex64 {
        if self.size() == 0 {
            return Complex64::new(1.0, 0.0);
        }
        self.to_complex().determinant()
    }

    /// First `(α, β)` where the transform of `δ_α * δ_β` differs from the entrywise product
    /// of the transforms of `δ_α` and `δ_β`, compared exactly in exponent arithmetic.
    pub fn pointwise_witness(&self, g: &FiniteGroupoid) -> Option<(usize, usize)> {
        for a in g.elements() {
            for b in g.elements() {
                let ok = self.entries.iter().all(|row| {
                    let lhs = g.compose(a, b).and_then(|c| row[c]);
                    let rhs = match (row[a], row[b]) {
                        (Some(x), Some(y)) => Some(x * y),
                        _ => None,
                    };
                    lhs == rhs
                });
                if !ok {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn transform(&self, f: &AlgebraElement) -> Vec<Complex64> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(f.coeffs())
                    .filter_map(|(v, c)| v.map(|v| v.to_complex() * c.to_complex()))
                    .sum()
            })
            .collect()
    }
}

pub fn gelfand_transform(g: &FiniteGroupoid) -> Result<GelfandMatrix, AbelianError> {
    let dual = dual_bundle(g)?;
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for fiber in &dual.fibers {
        for chi in &fiber.characters {
            let mut row = vec![None; g.len()];
            for (pos, &a) in fiber.arrows.iter().enumerate() {
                row[a] = Some(chi.value(pos));
            }
            rows.push((fiber.unit, chi.clone()));
            entries.push(row);
        }
    }
    Ok(GelfandMatrix { rows, entries })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::abelian::characters;
    use crate::generators::{group_bundle, klein_cross, pair_groupoid, trivial_groupoid};
    use crate::group::FiniteGroup;
    use crate::scalar::GaussRat;

    #[test]
    fn trivial_and_sign_characters() {
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
        let phis = enumerate_characters(&z2);
        assert_eq!(phis.len(), 2);
        assert_eq!(phis[0].values, vec![Some(RootOfUnity::one()); 2]);
        assert_eq!(phis[1].value(0), Some(RootOfUnity::one()));
        assert_eq!(phis[1].value(1), Some(RootOfUnity::new(1, 2)));
        for phi in &phis {
            assert!(phi.multiplicativity_witness(&z2).is_none());
            assert!(phi.star_witness(&z2).is_none());
            assert_eq!(phi.diagonal_point(&z2), Some(0));
        }
    }

    #[test]
    fn klein_cross_characters_live_at_center() {
        let k = klein_cross();
        let c = k.index_of("(e,c)").unwrap();
        let phis = enumerate_characters(&k);
        assert_eq!(phis.len(), 4);
        for phi in &phis {
            assert_eq!(phi.point, c);
            let support: Vec<usize> = k.elements().filter(|&a| phi.value(a).is_some()).collect();
            assert_eq!(support.len(), 4);
            assert!(support.iter().all(|&a| k.src(a) == c));
            assert!(support
                .iter()
                .all(|&a| matches!(phi.value(a), Some(v) if v.n <= 2)));
            assert!(phi.multiplicativity_witness(&k).is_none());
        }
        assert!(enumerate_characters(&pair_groupoid(2)).is_empty());
    }

    #[test]
    fn functional_errors() {
        let p = pair_groupoid(2);
        let chi =
            characters(&crate::abelian::FiniteAbelianGroup::new(FiniteGroup::cyclic(1)).unwrap())
                .remove(0);
        assert_eq!(
            character_functional(&p, 0, &chi),
            Err(FunctionalError::NotFixed(0))
        );
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
        assert_eq!(
            character_functional(&z2, 0, &chi),
            Err(FunctionalError::NotACharacter(0))
        );
    }

    #[test]
    fn gelfand_small_cases() {
        let t = gelfand_transform(&trivial_groupoid(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t.entries[i][j], (i == j).then(RootOfUnity::one));
            }
        }
        let z2 = gelfand_transform(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))).unwrap();
        let minus = Some(RootOfUnity::new(1, 2));
        let one = Some(RootOfUnity::one());
        assert_eq!(z2.entries, vec![vec![one, one], vec![one, minus]]);
        assert!((z2.determinant() - Complex64::new(-2.0, 0.0)).norm() < 1e-9);

        let z3 = gelfand_transform(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(3))).unwrap();
        for (i, row) in z3.entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, Some(RootOfUnity::new((i * j) as u64, 3)));
            }
        }
        assert!(gelfand_transform(&pair_groupoid(2)).is_err());
    }

    #[test]
    fn gelfand_turns_convolution_into_pointwise_product() {
        let g = Arc::new(group_bundle(&[
            ("a".into(), FiniteGroup::cyclic(4)),
            ("b".into(), FiniteGroup::klein()),
        ]));
        let m = gelfand_transform(&g).unwrap();
        assert!(m.pointwise_witness(&g).is_none());
        assert!(m.determinant().norm() > 1e-6);
        let f = AlgebraElement::new(
            g.clone(),
            (0..8)
                .map(|i| GaussRat::from_parts(i - 3, 2, i % 3, 1))
                .collect(),
        )
        .unwrap();
        let h = AlgebraElement::new(
            g.clone(),
            (0..8)
                .map(|i| GaussRat::from_parts(1, i + 1, -i, 3))
                .collect(),
        )
        .unwrap();
        let lhs = m.transform(&f.convolve(&h).unwrap());
        let (tf, th) = (m.transform(&f), m.transform(&h));
        for i in 0..8 {
            assert!((lhs[i] - tf[i] * th[i]).norm() < 1e-9);
        }
    }
}

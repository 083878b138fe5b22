//! Two-sided ideals of `ℂG`, in particular the commutator ideal.

use crate::algebra::{delta_coeffs, left_delta, right_delta, AlgebraHom};
use crate::groupoid::FiniteGroupoid;
use crate::linalg::Subspace;
use crate::quotient::abelianize_groupoid;
use crate::scalar::GaussRat;

/// A subspace of `ℂG` stored in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    pub space: Subspace,
}

impl IdealBasis {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// First `(row, arrow, side)` whose product leaves the span; `None` for a two-sided ideal.
    pub fn closure_witness(&self, g: &FiniteGroupoid) -> Option<(usize, usize, Side)> {
        for (i, row) in self.space.dense_rows().iter().enumerate() {
            for a in g.elements() {
                if !self.space.contains(&left_delta(g, a, row)) {
                    return Some((i, a, Side::Left));
                }
                if !self.space.contains(&right_delta(g, row, a)) {
                    return Some((i, a, Side::Right));
                }
            }
        }
        None
    }

    pub fn is_two_sided(&self, g: &FiniteGroupoid) -> bool {
        self.closure_witness(g).is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Smallest two-sided ideal containing every `δ_α * δ_β − δ_β * δ_α`.
///
/// Seeds with the basis commutators, then in rounds multiplies each vector that enlarged
/// the span in the previous round by every delta on both sides, until a round adds nothing.
/// The number of rounds is bounded by `|G|`.
pub fn commutator_ideal(g: &FiniteGroupoid) -> IdealBasis {
    let n = g.len();
    let mut space = Subspace::zero(n);
    let mut frontier = Vec::new();
    for a in g.elements() {
        for b in a + 1..n {
            let mut v = vec![num_traits::Zero::zero(); n];
            if let Some(c) = g.compose(a, b) {
                v[c] = GaussRat::from_int(1);
            }
            if let Some(c) = g.compose(b, a) {
                v[c] -= &GaussRat::from_int(1);
            }
            if space.insert(&v) {
                frontier.push(v);
            }
        }
    }
    while !frontier.is_empty() && space.dim() < n {
        let mut next = Vec::new();
        for v in &frontier {
            for a in g.elements() {
                for w in [left_delta(g, a, v), right_delta(g, v, a)] {
                    if space.insert(&w) {
                        next.push(w);
                    }
                }
            }
        }
        frontier = next;
    }
    IdealBasis { space }
}

/// `dim ℂG − dim I`, the dimension of the abelianized algebra.
pub fn abelianization_dim(g: &FiniteGroupoid) -> usize {
    g.len() - commutator_ideal(g).dim()
}

/// `π = Q ∘ R : ℂG → ℂG_fix → ℂG^ab`.
pub fn abelianization_hom(g: &FiniteGroupoid) -> AlgebraHom {
    let ab = abelianize_groupoid(g);
    let target = ab.groupoid().clone();
    let m = target.len();
    let images = g
        .elements()
        .map(|a| match ab.class_of(a) {
            Some(c) => delta_coeffs(m, c),
            None => vec![num_traits::Zero::zero(); m],
        })
        .collect();
    AlgebraHom {
        domain: std::sync::Arc::new(g.clone()),
        codomain: std::sync::Arc::new(target),
        images,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        klein_cross, pair_groupoid, s3_a3_bundle, s3_groupoid, trivial_groupoid,
    };

    #[test]
    fn commutative_cases() {
        assert!(commutator_ideal(&trivial_groupoid(4)).space.is_zero());
        assert_eq!(abelianization_dim(&trivial_groupoid(5)), 5);
    }

    #[test]
    fn s3_ideal() {
        let ideal = commutator_ideal(&s3_groupoid());
        assert_eq!(ideal.dim(), 4);
        assert!(ideal.is_two_sided(&s3_groupoid()));
        assert_eq!(abelianization_dim(&s3_groupoid()), 2);
    }

    #[test]
    fn matrix_algebra_has_full_ideal() {
        let p = pair_groupoid(2);
        let ideal = commutator_ideal(&p);
        assert_eq!(ideal.dim(), 4);
        assert_eq!(ideal.space, Subspace::full(4));
        assert_eq!(abelianization_dim(&p), 0);
    }

    #[test]
    fn bundle_and_cross() {
        assert_eq!(abelianization_dim(&s3_a3_bundle()), 5);
        assert_eq!(abelianization_dim(&klein_cross()), 4);
    }

    #[test]
    fn pi_kernel_matches_ideal() {
        for g in [
            s3_groupoid(),
            s3_a3_bundle(),
            klein_cross(),
            pair_groupoid(3),
        ] {
            let pi = abelianization_hom(&g);
            assert!(pi.is_star_homomorphism());
            assert!(pi.is_surjective());
            assert_eq!(pi.kernel(), commutator_ideal(&g).space);
        }
    }
}

//! The convolution *-algebra `ℂG` of a finite groupoid over exact Gaussian rationals,
//! and *-homomorphisms between such algebras.
//!
//! `(f * g)(γ) = Σ_{β : s(β) = s(γ)} f(γβ⁻¹) g(β)` and `f*(γ) = conj(f(γ⁻¹))`, so on basis
//! deltas `δ_α * δ_β = δ_{αβ}` when `s(α) = r(β)` and `0` otherwise.

use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::groupoid::{ElementSubset, FiniteGroupoid, RestrictError};
use crate::linalg::{self, Subspace};
use crate::quotient::{quotient, NormalSubgroupoid, QuotientResult};
use crate::scalar::GaussRat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("elements live over different groupoids")]
    HostMismatch,
    #[error("coefficient vector has length {found}, groupoid has {expected} arrows")]
    WrongLength { expected: usize, found: usize },
    #[error("homomorphisms do not compose: codomain and domain differ")]
    NotComposable,
}

/// `f * g` on raw coefficient vectors.
pub fn convolve_coeffs(g: &FiniteGroupoid, f: &[GaussRat], h: &[GaussRat]) -> Vec<GaussRat> {
    let mut out = vec![GaussRat::zero(); g.len()];
    for (a, fa) in f.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (b, hb) in h.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            if let Some(c) = g.compose(a, b) {
                out[c] += &(fa * hb);
            }
        }
    }
    out
}

/// `δ_a * v`.
pub fn left_delta(g: &FiniteGroupoid, a: usize, v: &[GaussRat]) -> Vec<GaussRat> {
    let mut out = vec![GaussRat::zero(); g.len()];
    for (b, x) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        if let Some(c) = g.compose(a, b) {
            out[c] += x;
        }
    }
    out
}

/// `v * δ_a`.
pub fn right_delta(g: &FiniteGroupoid, v: &[GaussRat], a: usize) -> Vec<GaussRat> {
    let mut out = vec![GaussRat::zero(); g.len()];
    for (b, x) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        if let Some(c) = g.compose(b, a) {
            out[c] += x;
        }
    }
    out
}

pub fn involute_coeffs(g: &FiniteGroupoid, f: &[GaussRat]) -> Vec<GaussRat> {
    g.elements().map(|a| f[g.inv(a)].conj()).collect()
}

pub fn delta_coeffs(n: usize, a: usize) -> Vec<GaussRat> {
    let mut v = vec![GaussRat::zero(); n];
    v[a] = GaussRat::one();
    v
}

/// `span{δ_x | x ∈ G⁽⁰⁾}`, the copy of `C(G⁽⁰⁾)` inside `ℂG`.
pub fn diagonal(g: &FiniteGroupoid) -> Subspace {
    Subspace::span(g.len(), g.units().iter().map(|&x| delta_coeffs(g.len(), x)))
}

/// An element of `ℂG`.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    host: Arc<FiniteGroupoid>,
    coeffs: Vec<GaussRat>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_host(other) && self.coeffs == other.coeffs
    }
}

impl AlgebraElement {
    pub fn new(host: Arc<FiniteGroupoid>, coeffs: Vec<GaussRat>) -> Result<Self, AlgebraError> {
        if coeffs.len() != host.len() {
            return Err(AlgebraError::WrongLength {
                expected: host.len(),
                found: coeffs.len(),
            });
        }
        Ok(Self { host, coeffs })
    }

    pub fn zero(host: Arc<FiniteGroupoid>) -> Self {
        let coeffs = vec![GaussRat::zero(); host.len()];
        Self { host, coeffs }
    }

    pub fn delta(host: Arc<FiniteGroupoid>, a: usize) -> Self {
        let coeffs = delta_coeffs(host.len(), a);
        Self { host, coeffs }
    }

    /// `Σ_{x ∈ G⁽⁰⁾} δ_x`, the identity of `ℂG`.
    pub fn one(host: Arc<FiniteGroupoid>) -> Self {
        let mut coeffs = vec![GaussRat::zero(); host.len()];
        for &x in host.units() {
            coeffs[x] = GaussRat::one();
        }
        Self { host, coeffs }
    }

    pub fn host(&self) -> &Arc<FiniteGroupoid> {
        &self.host
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn coeff(&self, a: usize) -> &GaussRat {
        &self.coeffs[a]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_host(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.host, &other.host) || *self.host == *other.host
    }

    pub fn convolve(&self, other: &Self) -> Result<Self, AlgebraError> {
        if !self.same_host(other) {
            return Err(AlgebraError::HostMismatch);
        }
        let coeffs = convolve_coeffs(&self.host, &self.coeffs, &other.coeffs);
        Ok(Self {
            host: self.host.clone(),
            coeffs,
        })
    }

    pub fn involute(&self) -> Self {
        Self {
            host: self.host.clone(),
            coeffs: involute_coeffs(&self.host, &self.coeffs),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if !self.same_host(other) {
            return Err(AlgebraError::HostMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            host: self.host.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        if !self.same_host(other) {
            return Err(AlgebraError::HostMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            host: self.host.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        let coeffs = self.coeffs.iter().map(|x| c * x).collect();
        Self {
            host: self.host.clone(),
            coeffs,
        }
    }
}

/// A linear map `ℂG₁ → ℂG₂` given by the images of the basis deltas.
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    pub domain: Arc<FiniteGroupoid>,
    pub codomain: Arc<FiniteGroupoid>,
    /// `images[α]` is the image of `δ_α`, a dense codomain vector.
    pub images: Vec<Vec<GaussRat>>,
}

impl AlgebraHom {
    /// A hom sending each delta to a delta or to zero.
    pub fn from_arrow_map(
        domain: Arc<FiniteGroupoid>,
        codomain: Arc<FiniteGroupoid>,
        map: impl Fn(usize) -> Option<usize>,
    ) -> Self {
        let m = codomain.len();
        let images = domain
            .elements()
            .map(|a| map(a).map_or_else(|| vec![GaussRat::zero(); m], |b| delta_coeffs(m, b)))
            .collect();
        Self {
            domain,
            codomain,
            images,
        }
    }

    pub fn apply_coeffs(&self, f: &[GaussRat]) -> Vec<GaussRat> {
        let mut out = vec![GaussRat::zero(); self.codomain.len()];
        for (a, c) in f.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (o, x) in out.iter_mut().zip(&self.images[a]) {
                if !x.is_zero() {
                    *o += &(c * x);
                }
            }
        }
        out
    }

    pub fn apply(&self, f: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if *f.host != *self.domain {
            return Err(AlgebraError::HostMismatch);
        }
        AlgebraElement::new(self.codomain.clone(), self.apply_coeffs(f.coeffs()))
    }

    /// `codomain.len() × domain.len()` matrix.
    pub fn matrix(&self) -> Vec<Vec<GaussRat>> {
        (0..self.codomain.len())
            .map(|i| self.images.iter().map(|col| col[i].clone()).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(self.matrix(), self.domain.len())
    }

    pub fn kernel(&self) -> Subspace {
        linalg::kernel(self.matrix(), self.domain.len())
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.codomain.len()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &AlgebraHom) -> Result<AlgebraHom, AlgebraError> {
        if *first.codomain != *self.domain {
            return Err(AlgebraError::NotComposable);
        }
        Ok(AlgebraHom {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            images: first.images.iter().map(|v| self.apply_coeffs(v)).collect(),
        })
    }

    /// First basis pair `(α, β)` with `φ(δ_α * δ_β) ≠ φ(δ_α) * φ(δ_β)`.
    pub fn multiplicativity_witness(&self) -> Option<(usize, usize)> {
        let g = &self.domain;
        let zero = vec![GaussRat::zero(); self.codomain.len()];
        for a in g.elements() {
            for b in g.elements() {
                let lhs = g.compose(a, b).map_or(&zero, |c| &self.images[c]);
                let rhs = convolve_coeffs(&self.codomain, &self.images[a], &self.images[b]);
                if *lhs != rhs {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// First `α` with `φ(δ_α*) ≠ φ(δ_α)*`.
    pub fn star_witness(&self) -> Option<usize> {
        let g = &self.domain;
        g.elements()
            .find(|&a| self.images[g.inv(a)] != involute_coeffs(&self.codomain, &self.images[a]))
    }

    pub fn is_star_homomorphism(&self) -> bool {
        self.multiplicativity_witness().is_none() && self.star_witness().is_none()
    }
}

/// `f ↦ f|_{G_F}` for an invariant unit set `F`.
pub fn restriction_hom(g: &FiniteGroupoid, f: &ElementSubset) -> Result<AlgebraHom, RestrictError> {
    let r = g.restrict(f)?;
    let mut local = vec![None; g.len()];
    for (i, &a) in r.embedding.iter().enumerate() {
        local[a] = Some(i);
    }
    Ok(AlgebraHom::from_arrow_map(
        Arc::new(g.clone()),
        Arc::new(r.groupoid),
        |a| local[a],
    ))
}

/// `Q(f)(q(γ)) = Σ_{q(α) = q(γ)} f(α)`, together with the quotient it lands in.
pub fn quotient_hom(g: &FiniteGroupoid, h: &NormalSubgroupoid) -> (AlgebraHom, QuotientResult) {
    let q = quotient(g, h);
    let hom = AlgebraHom::from_arrow_map(Arc::new(g.clone()), Arc::new(q.quotient.clone()), |a| {
        Some(q.class_map[a])
    });
    (hom, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{klein_cross, pair_groupoid, s3_groupoid};
    use crate::group::FiniteGroup;

    fn z2() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)))
    }

    /// Direct evaluation of the convolution formula, independent of `convolve_coeffs`.
    fn convolve_by_formula(g: &FiniteGroupoid, f: &[GaussRat], h: &[GaussRat]) -> Vec<GaussRat> {
        g.elements()
            .map(|gamma| {
                g.elements()
                    .filter(|&beta| g.src(beta) == g.src(gamma))
                    .fold(GaussRat::zero(), |acc, beta| {
                        let alpha = g.compose(gamma, g.inv(beta)).unwrap();
                        acc + &f[alpha] * &h[beta]
                    })
            })
            .collect()
    }

    #[test]
    fn delta_products() {
        let g = Arc::new(klein_cross());
        for a in g.elements() {
            for b in g.elements() {
                let p = AlgebraElement::delta(g.clone(), a)
                    .convolve(&AlgebraElement::delta(g.clone(), b))
                    .unwrap();
                match g.compose(a, b) {
                    Some(c) => assert_eq!(p, AlgebraElement::delta(g.clone(), c)),
                    None => assert!(p.is_zero()),
                }
            }
        }
    }

    #[test]
    fn formula_agrees() {
        let g = s3_groupoid();
        let f: Vec<GaussRat> = (0..6)
            .map(|i| GaussRat::from_parts(i, 1, 1 - i, 2))
            .collect();
        let h: Vec<GaussRat> = (0..6)
            .map(|i| GaussRat::from_parts(3 - i, 5, i * i, 1))
            .collect();
        assert_eq!(convolve_coeffs(&g, &f, &h), convolve_by_formula(&g, &f, &h));
    }

    #[test]
    fn unit_is_identity() {
        let g = Arc::new(pair_groupoid(3));
        let f = AlgebraElement::new(
            g.clone(),
            (0..9).map(|i| GaussRat::from_parts(i, 3, -i, 7)).collect(),
        )
        .unwrap();
        let one = AlgebraElement::one(g.clone());
        assert_eq!(one.convolve(&f).unwrap(), f);
        assert_eq!(f.convolve(&one).unwrap(), f);
    }

    #[test]
    fn z2_idempotent_annihilation() {
        let g = z2();
        let (e, s) = (
            AlgebraElement::delta(g.clone(), 0),
            AlgebraElement::delta(g.clone(), 1),
        );
        let p = e.add(&s).unwrap().convolve(&e.sub(&s).unwrap()).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn involution_examples() {
        let g = Arc::new(klein_cross());
        let a = g.index_of("(s,x+)").unwrap();
        let d = AlgebraElement::delta(g.clone(), a);
        assert_eq!(d.involute(), AlgebraElement::delta(g.clone(), g.inv(a)));
        let id = d.scale(&GaussRat::i());
        assert_eq!(
            id.involute(),
            AlgebraElement::delta(g.clone(), g.inv(a)).scale(&-GaussRat::i())
        );
        assert_eq!(id.involute().involute(), id);
    }

    #[test]
    fn host_mismatch() {
        let a = AlgebraElement::one(z2());
        let b = AlgebraElement::one(Arc::new(pair_groupoid(2)));
        assert_eq!(a.convolve(&b), Err(AlgebraError::HostMismatch));
        assert!(AlgebraElement::new(z2(), vec![]).is_err());
    }

    #[test]
    fn restriction_examples() {
        let k = klein_cross();
        let all = restriction_hom(&k, &k.unit_set()).unwrap();
        assert_eq!(all.kernel().dim(), 0);
        assert!(all.is_star_homomorphism());

        let c = k.index_of("(e,c)").unwrap();
        let r = restriction_hom(&k, &ElementSubset::from([c])).unwrap();
        assert_eq!(r.codomain.len(), 4);
        assert!(r.is_surjective());
        assert!(r.is_star_homomorphism());
        assert_eq!(r.kernel().dim(), 16);
        let expected = Subspace::span(
            20,
            k.elements()
                .filter(|&a| k.src(a) != c)
                .map(|a| delta_coeffs(20, a)),
        );
        assert_eq!(r.kernel(), expected);

        let z = restriction_hom(&k, &ElementSubset::new()).unwrap();
        assert!(z.codomain.is_empty());
        assert_eq!(z.kernel().dim(), 20);
        assert!(restriction_hom(&pair_groupoid(2), &ElementSubset::from([0])).is_err());
    }

    #[test]
    fn quotient_examples() {
        let g = z2();
        let (id, _) = quotient_hom(&g, &NormalSubgroupoid::units(&g));
        assert!(id.kernel().is_zero());

        let whole = NormalSubgroupoid::new(&g, g.elements().collect()).unwrap();
        let (q, _) = quotient_hom(&g, &whole);
        assert_eq!(q.images[0], q.images[1]);
        let k = q.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[GaussRat::one(), -GaussRat::one()]));
        assert_eq!(k.intersection_dim(&diagonal(&g)), 0);
        assert!(q.is_star_homomorphism());

        let s3 = s3_groupoid();
        let a3 = NormalSubgroupoid::new(&s3, [0, 1, 2].into()).unwrap();
        let (q, _) = quotient_hom(&s3, &a3);
        assert_eq!(q.kernel().dim(), 4);
        assert!(q.is_surjective());
    }

    #[test]
    fn composition_of_homs() {
        let k = klein_cross();
        let c = k.index_of("(e,c)").unwrap();
        let r = restriction_hom(&k, &ElementSubset::from([c])).unwrap();
        let center = (*r.codomain).clone();
        let (q, _) = quotient_hom(
            &center,
            &NormalSubgroupoid::new(&center, center.elements().collect()).unwrap(),
        );
        let pi = q.after(&r).unwrap();
        assert!(pi.is_star_homomorphism());
        assert_eq!(pi.kernel().dim(), 19);
        assert_eq!(r.after(&q).unwrap_err(), AlgebraError::NotComposable);
    }
}

//! Normal subgroupoids, quotient groupoids `G/H`, commutator subgroupoids and `G^ab`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::groupoid::{ElementSubset, FiniteGroupoid, Restriction};

/// Why a subset fails to be a normal subgroupoid.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalityError {
    #[error("{element} is not an arrow of the groupoid")]
    NotAnElement { element: usize },
    #[error("unit {unit} is missing")]
    MissingUnit { unit: usize },
    #[error("{element} is not in the isotropy")]
    NotIsotropy { element: usize },
    #[error("not closed under inversion at {element}")]
    NotClosedUnderInverse { element: usize },
    #[error("product of {a} and {b} leaves the subset")]
    NotClosedUnderProduct { a: usize, b: usize },
    #[error("conjugating {h} by {alpha} gives {conjugate}, outside the subset")]
    NotConjugationInvariant {
        alpha: usize,
        h: usize,
        conjugate: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("not a group bundle: arrow {0} has distinct source and range")]
pub struct NotGroupBundle(pub usize);

/// A subgroupoid `H` with `G⁽⁰⁾ ⊆ H ⊆ Iso(G)` and `αHα⁻¹ ⊆ H`, checked at construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalSubgroupoid {
    carrier: ElementSubset,
}

impl NormalSubgroupoid {
    pub fn new(g: &FiniteGroupoid, carrier: ElementSubset) -> Result<Self, NormalityError> {
        is_normal(g, &carrier)?;
        Ok(Self { carrier })
    }

    pub fn carrier(&self) -> &ElementSubset {
        &self.carrier
    }

    pub fn units(g: &FiniteGroupoid) -> Self {
        Self {
            carrier: g.unit_set(),
        }
    }
}

/// Checks every normal-subgroupoid condition, returning the first failure as a witness.
pub fn is_normal(g: &FiniteGroupoid, h: &ElementSubset) -> Result<(), NormalityError> {
    if let Some(element) = h.iter().find(|&a| a >= g.len()) {
        return Err(NormalityError::NotAnElement { element });
    }
    if let Some(&unit) = g.units().iter().find(|&&x| !h.contains(x)) {
        return Err(NormalityError::MissingUnit { unit });
    }
    if let Some(element) = h.iter().find(|&a| g.src(a) != g.rng(a)) {
        return Err(NormalityError::NotIsotropy { element });
    }
    if let Some(element) = h.iter().find(|&a| !h.contains(g.inv(a))) {
        return Err(NormalityError::NotClosedUnderInverse { element });
    }
    for a in h.iter() {
        for b in h.iter() {
            if let Some(c) = g.compose(a, b) {
                if !h.contains(c) {
                    return Err(NormalityError::NotClosedUnderProduct { a, b });
                }
            }
        }
    }
    for alpha in g.elements() {
        for hh in h.iter().filter(|&x| g.src(x) == g.src(alpha)) {
            let conj = g
                .compose(alpha, hh)
                .and_then(|ah| g.compose(ah, g.inv(alpha)))
                .expect("composable conjugate");
            if !h.contains(conj) {
                return Err(NormalityError::NotConjugationInvariant {
                    alpha,
                    h: hh,
                    conjugate: conj,
                });
            }
        }
    }
    Ok(())
}

/// The quotient groupoid `G/H` and the class map `q: G → G/H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientResult {
    pub quotient: FiniteGroupoid,
    /// `class_map[γ]` is the quotient index of the class of `γ`.
    pub class_map: Vec<usize>,
    /// `representatives[i]` is the smallest host index in class `i`.
    pub representatives: Vec<usize>,
}

impl QuotientResult {
    /// `q⁻¹((G/H)⁽⁰⁾)`.
    pub fn preimage_of_units(&self) -> ElementSubset {
        self.class_map
            .iter()
            .enumerate()
            .filter(|(_, &c)| self.quotient.is_unit(c))
            .map(|(a, _)| a)
            .collect()
    }

    pub fn image(&self, set: &ElementSubset) -> ElementSubset {
        set.iter().map(|a| self.class_map[a]).collect()
    }

    /// Fibers of the class map, indexed by quotient element.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.quotient.len()];
        for (a, &c) in self.class_map.iter().enumerate() {
            out[c].push(a);
        }
        out
    }

    /// Checks that `q` is a surjective groupoid homomorphism that is bijective on units.
    pub fn is_homomorphism(&self, host: &FiniteGroupoid) -> bool {
        let q = &self.class_map;
        let surjective = self.classes().iter().all(|c| !c.is_empty());
        let units_bijective = {
            let img: BTreeSet<usize> = host.units().iter().map(|&x| q[x]).collect();
            img.len() == host.units().len()
                && img
                    .iter()
                    .copied()
                    .eq(self.quotient.units().iter().copied())
        };
        let structure = host.elements().all(|a| {
            q[host.src(a)] == self.quotient.src(q[a]) && q[host.rng(a)] == self.quotient.rng(q[a])
        });
        let products = host
            .comp_triples()
            .iter()
            .all(|&(a, b, c)| self.quotient.compose(q[a], q[b]) == Some(q[c]));
        surjective && units_bijective && structure && products
    }
}

/// `G/H` with `α ∼ β` iff `src(α) = src(β)` and `αβ⁻¹ ∈ H`; classes are labelled by their
/// smallest member and ordered by it.
pub fn quotient(g: &FiniteGroupoid, h: &NormalSubgroupoid) -> QuotientResult {
    let n = g.len();
    let h = h.carrier();
    let rep: Vec<usize> = g
        .elements()
        .map(|a| {
            g.elements()
                .find(|&b| {
                    g.src(a) == g.src(b) && g.compose(a, g.inv(b)).is_some_and(|c| h.contains(c))
                })
                .expect("α ∼ α")
        })
        .collect();
    let representatives: Vec<usize> = rep
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut position = vec![usize::MAX; n];
    for (i, &r) in representatives.iter().enumerate() {
        position[r] = i;
    }
    let class_map: Vec<usize> = rep.iter().map(|&r| position[r]).collect();
    let q = |a: usize| class_map[a];
    let quotient = FiniteGroupoid::from_fn(
        representatives
            .iter()
            .map(|&r| g.label(r).to_string())
            .collect(),
        g.units().iter().map(|&x| q(x)).collect(),
        representatives.iter().map(|&r| q(g.src(r))).collect(),
        representatives.iter().map(|&r| q(g.rng(r))).collect(),
        representatives.iter().map(|&r| q(g.inv(r))).collect(),
        |a, b| {
            let (ra, rb) = (representatives[a], representatives[b]);
            q(g.compose(ra, rb).expect("representatives composable"))
        },
    );
    QuotientResult {
        quotient,
        class_map,
        representatives,
    }
}

/// `Iso(G)°`, which in the discrete model is `Iso(G)`.
pub fn interior_isotropy(g: &FiniteGroupoid) -> NormalSubgroupoid {
    NormalSubgroupoid {
        carrier: g.isotropy(),
    }
}

/// `[G, G] = ⋃ₓ [Gₓ, Gₓ]` for a group bundle.
pub fn commutator_subgroupoid(g: &FiniteGroupoid) -> Result<NormalSubgroupoid, NotGroupBundle> {
    if let Some(a) = g.elements().find(|&a| g.src(a) != g.rng(a)) {
        return Err(NotGroupBundle(a));
    }
    let mut carrier = ElementSubset::new();
    for &x in g.units() {
        let (group, arrows) = g.isotropy_group(x);
        for c in group.commutator_subgroup() {
            carrier.insert(arrows[c]);
        }
    }
    Ok(NormalSubgroupoid { carrier })
}

/// `G_fix`: the restriction of `G` to its fixed points. Always a group bundle.
pub fn g_fix(g: &FiniteGroupoid) -> Restriction {
    g.restrict(&g.fixed_points())
        .expect("fixed points are invariant")
}

/// `G^ab = G_fix / [G_fix, G_fix]` with the data needed to trace classes back into `G`.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub g_fix: Restriction,
    pub commutator: NormalSubgroupoid,
    pub quotient: QuotientResult,
}

impl Abelianization {
    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.quotient.quotient
    }

    /// Class in `G^ab` of a host arrow, `None` if its source is not a fixed point.
    pub fn class_of(&self, host_arrow: usize) -> Option<usize> {
        self.g_fix
            .embedding
            .iter()
            .position(|&a| a == host_arrow)
            .map(|i| self.quotient.class_map[i])
    }

    /// Unit of `G^ab` lying over a host fixed point.
    pub fn unit_over(&self, host_unit: usize) -> Option<usize> {
        self.class_of(host_unit)
    }
}

pub fn abelianize_groupoid(g: &FiniteGroupoid) -> Abelianization {
    let fixed = g_fix(g);
    let commutator = commutator_subgroupoid(&fixed.groupoid).expect("G_fix is a group bundle");
    let quotient = quotient(&fixed.groupoid, &commutator);
    Abelianization {
        g_fix: fixed,
        commutator,
        quotient,
    }
}

/// Whether every isotropy group is commutative.
pub fn has_abelian_isotropy(g: &FiniteGroupoid) -> bool {
    let iso = g.isotropy();
    let commutes = iso.iter().all(|a| {
        iso.iter()
            .filter(|&b| g.src(b) == g.src(a))
            .all(|b| g.compose(a, b) == g.compose(b, a))
    });
    commutes
}

/// All normal subgroupoids, enumerated fiberwise.
///
/// Within an orbit the fiber at one unit determines all others by conjugation, so each
/// orbit contributes the normal subgroups of one representative isotropy group; the
/// product over orbits is filtered through [`is_normal`].
pub fn normal_subgroupoids(g: &FiniteGroupoid) -> Vec<NormalSubgroupoid> {
    let mut per_orbit: Vec<Vec<ElementSubset>> = Vec::new();
    for orbit in g.orbits() {
        let x0 = orbit[0];
        let (group, arrows) = g.isotropy_group(x0);
        let transports: Vec<usize> = orbit
            .iter()
            .map(|&y| g.arrow_between(x0, y).expect("same orbit"))
            .collect();
        let choices = group
            .normal_subgroups()
            .into_iter()
            .map(|n| {
                let mut carrier = ElementSubset::new();
                for &alpha in &transports {
                    for &k in &n {
                        let h = arrows[k];
                        let conj = g
                            .compose(alpha, h)
                            .and_then(|ah| g.compose(ah, g.inv(alpha)))
                            .expect("composable conjugate");
                        carrier.insert(conj);
                    }
                }
                carrier
            })
            .collect();
        per_orbit.push(choices);
    }
    let mut combos: Vec<ElementSubset> = vec![ElementSubset::new()];
    for choices in &per_orbit {
        combos = combos
            .iter()
            .flat_map(|acc| choices.iter().map(move |c| acc.union(c)))
            .collect();
    }
    combos
        .into_iter()
        .filter_map(|c| NormalSubgroupoid::new(g, c).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        klein_cross, pair_groupoid, s3_a3_bundle, s3_groupoid, trivial_groupoid,
    };
    use crate::group::FiniteGroup;

    fn set(g: &FiniteGroupoid, labels: &[&str]) -> ElementSubset {
        labels.iter().map(|l| g.index_of(l).unwrap()).collect()
    }

    #[test]
    fn normality_examples() {
        let s3 = s3_groupoid();
        assert!(is_normal(&s3, &s3.unit_set()).is_ok());
        let b = s3_a3_bundle();
        assert!(is_normal(&b, &b.isotropy()).is_ok());
        let h = set(&s3, &["e", "t"]);
        match is_normal(&s3, &h) {
            Err(NormalityError::NotConjugationInvariant {
                alpha,
                h: t,
                conjugate,
            }) => {
                assert_eq!(s3.label(t), "t");
                assert!(["s", "s2", "ts", "ts2"].contains(&s3.label(alpha)));
                assert!(!h.contains(conjugate));
            }
            other => panic!("expected a conjugation witness, got {other:?}"),
        }
        // conjugation by s specifically: s t s⁻¹ = t s
        let (s, t) = (s3.index_of("s").unwrap(), s3.index_of("t").unwrap());
        let conj = s3.compose(s3.compose(s, t).unwrap(), s3.inv(s)).unwrap();
        assert_eq!(s3.label(conj), "ts");
        assert!(matches!(
            is_normal(&pair_groupoid(2), &pair_groupoid(2).elements().collect()),
            Err(NormalityError::NotIsotropy { .. })
        ));
    }

    #[test]
    fn quotient_by_units_is_identity() {
        let k = klein_cross();
        let q = quotient(&k, &NormalSubgroupoid::units(&k));
        assert_eq!(q.quotient, k);
        assert_eq!(q.class_map, k.elements().collect::<Vec<_>>());
    }

    #[test]
    fn s3_mod_a3() {
        let s3 = s3_groupoid();
        let a3 = NormalSubgroupoid::new(&s3, set(&s3, &["e", "s", "s2"])).unwrap();
        let q = quotient(&s3, &a3);
        assert_eq!(q.quotient.len(), 2);
        assert_eq!(q.quotient.labels(), &["e".to_string(), "t".to_string()]);
        assert!(q.quotient.validate().is_ok());
        assert!(q.is_homomorphism(&s3));
        assert_eq!(q.preimage_of_units(), *a3.carrier());
    }

    #[test]
    fn klein_cross_mod_isotropy() {
        let k = klein_cross();
        let iso = interior_isotropy(&k);
        assert_eq!(iso.carrier().len(), 12);
        assert!(is_normal(&k, iso.carrier()).is_ok());
        let q = quotient(&k, &iso);
        assert!(q.quotient.validate().is_ok());
        assert_eq!(q.quotient.len(), 9);
        assert!(q.quotient.is_effective());
        assert_eq!(q.preimage_of_units(), *iso.carrier());
    }

    #[test]
    fn commutators() {
        let abelian = crate::generators::group_bundle(&[
            ("a".into(), FiniteGroup::klein()),
            ("b".into(), FiniteGroup::cyclic(5)),
        ]);
        assert_eq!(
            commutator_subgroupoid(&abelian).unwrap().carrier(),
            &abelian.unit_set()
        );
        let s3 = s3_groupoid();
        assert_eq!(
            commutator_subgroupoid(&s3).unwrap().carrier(),
            &set(&s3, &["e", "s", "s2"])
        );
        let b = s3_a3_bundle();
        assert_eq!(
            commutator_subgroupoid(&b).unwrap().carrier(),
            &set(&b, &["(e,p)", "(s,p)", "(s2,p)", "(e,q)"])
        );
        assert!(commutator_subgroupoid(&pair_groupoid(2)).is_err());
    }

    #[test]
    fn g_fix_examples() {
        assert!(g_fix(&pair_groupoid(2)).groupoid.is_empty());
        let b = s3_a3_bundle();
        assert_eq!(g_fix(&b).groupoid, b);
        let center = g_fix(&klein_cross()).groupoid;
        assert_eq!(center.len(), 4);
        assert!(center.is_group_bundle());
    }

    #[test]
    fn abelianization_examples() {
        let t = trivial_groupoid(3);
        assert_eq!(abelianize_groupoid(&t).groupoid(), &t);
        let s3 = abelianize_groupoid(&s3_groupoid());
        assert_eq!(s3.groupoid().len(), 2);
        let b = abelianize_groupoid(&s3_a3_bundle());
        let gab = b.groupoid();
        assert_eq!(gab.len(), 5);
        assert!(has_abelian_isotropy(gab));
        let sizes: Vec<usize> = gab
            .units()
            .iter()
            .map(|&x| gab.isotropy_at(x).len())
            .collect();
        assert_eq!(sizes, vec![2, 3]);
        let p = abelianize_groupoid(&pair_groupoid(2));
        assert!(p.groupoid().is_empty());
    }

    #[test]
    fn enumerated_normals() {
        let s3 = s3_groupoid();
        assert_eq!(normal_subgroupoids(&s3).len(), 3);
        let k = klein_cross();
        let normals = normal_subgroupoids(&k);
        // 5 normal subgroups of K at the center, 2 choices on each arm orbit.
        assert_eq!(normals.len(), 5 * 2 * 2);
        assert!(normals.contains(&NormalSubgroupoid::units(&k)));
        assert!(normals.contains(&interior_isotropy(&k)));
        assert_eq!(normal_subgroupoids(&pair_groupoid(3)).len(), 1);
    }
}

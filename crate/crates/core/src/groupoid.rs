//! Finite groupoids as explicit tables, axiom validation and structural subsets.
//!
//! Every finite étale groupoid with Hausdorff unit space is discrete, so the
//! topological side of the theory is not represented: interiors of isotropy
//! are the isotropy itself and every subset is open.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::group::FiniteGroup;

/// A set of arrow indices of some host groupoid.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementSubset(BTreeSet<usize>);

impl ElementSubset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.contains(&a)
    }

    pub fn insert(&mut self, a: usize) -> bool {
        self.0.insert(a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &ElementSubset) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &ElementSubset) -> ElementSubset {
        ElementSubset(self.0.union(&other.0).copied().collect())
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<usize> for ElementSubset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for ElementSubset {
    fn from(xs: [usize; N]) -> Self {
        xs.into_iter().collect()
    }
}

/// One violated axiom, with the arrows that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A table has the wrong length.
    TableSize {
        table: &'static str,
        expected: usize,
        found: usize,
    },
    /// A table entry names a nonexistent arrow.
    IndexOutOfRange {
        table: &'static str,
        at: usize,
        value: usize,
    },
    /// `src` or `rng` lands outside the unit set.
    NotAUnit {
        table: &'static str,
        at: usize,
        value: usize,
    },
    /// `comp` is defined on a pair with `src(a) != rng(b)`.
    CompositionOnNonComposable {
        a: usize,
        b: usize,
    },
    /// `comp` is missing on a composable pair.
    MissingComposite {
        a: usize,
        b: usize,
    },
    /// A unit `x` has `src(x) != x` or `rng(x) != x`.
    UnitLaw {
        unit: usize,
    },
    /// `a·src(a) != a` or `rng(a)·a != a`.
    IdentityLaw {
        element: usize,
    },
    /// `src(ab) != src(b)` or `rng(ab) != rng(a)`.
    SourceRange {
        a: usize,
        b: usize,
    },
    Associativity {
        a: usize,
        b: usize,
        c: usize,
    },
    /// `inv(g)·g != src(g)` or `g·inv(g) != rng(g)`.
    InverseLaw {
        element: usize,
    },
}

impl Violation {
    /// Whether this violation is a malformed table rather than a failed axiom.
    pub fn is_malformed(&self) -> bool {
        matches!(
            self,
            Violation::TableSize { .. }
                | Violation::IndexOutOfRange { .. }
                | Violation::NotAUnit { .. }
                | Violation::CompositionOnNonComposable { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TableSize {
                table,
                expected,
                found,
            } => {
                write!(f, "table {table} has {found} entries, expected {expected}")
            }
            Violation::IndexOutOfRange { table, at, value } => {
                write!(f, "table {table} maps {at} to out-of-range {value}")
            }
            Violation::NotAUnit { table, at, value } => {
                write!(f, "{table}({at}) = {value} is not a unit")
            }
            Violation::CompositionOnNonComposable { a, b } => {
                write!(f, "comp({a}, {b}) defined but src({a}) != rng({b})")
            }
            Violation::MissingComposite { a, b } => write!(f, "comp({a}, {b}) undefined"),
            Violation::UnitLaw { unit } => write!(f, "unit {unit} is not fixed by src/rng"),
            Violation::IdentityLaw { element } => write!(f, "identity law fails at {element}"),
            Violation::SourceRange { a, b } => write!(f, "src/rng of comp({a}, {b}) wrong"),
            Violation::Associativity { a, b, c } => {
                write!(f, "associativity fails on ({a}, {b}, {c})")
            }
            Violation::InverseLaw { element } => write!(f, "inverse law fails at {element}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RestrictError {
    #[error("{0} is not a unit")]
    NotAUnit(usize),
    #[error("unit set is not invariant: arrow {0} leaves it")]
    NotInvariant(usize),
}

/// A finite groupoid on arrows `0..len()`, with a dense partial composition table.
///
/// Construction does not check the axioms; call [`FiniteGroupoid::validate`].
/// Operations other than `validate` assume a valid groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    labels: Vec<String>,
    units: Vec<usize>,
    is_unit: Vec<bool>,
    src: Vec<usize>,
    rng: Vec<usize>,
    inv: Vec<usize>,
    comp: Vec<Option<usize>>,
}

/// The subgroupoid over an invariant unit set, with its embedding into the host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub groupoid: FiniteGroupoid,
    /// `embedding[i]` is the host index of arrow `i`.
    pub embedding: Vec<usize>,
}

impl FiniteGroupoid {
    /// Raw constructor. `comp` is row-major `n × n`, `comp[a * n + b] = Some(ab)`.
    pub fn from_tables(
        labels: Vec<String>,
        units: Vec<usize>,
        src: Vec<usize>,
        rng: Vec<usize>,
        comp: Vec<Option<usize>>,
        inv: Vec<usize>,
    ) -> Self {
        let n = labels.len();
        let mut units = units;
        units.sort_unstable();
        units.dedup();
        let mut is_unit = vec![false; n];
        for &u in &units {
            if u < n {
                is_unit[u] = true;
            }
        }
        Self {
            labels,
            units,
            is_unit,
            src,
            rng,
            inv,
            comp,
        }
    }

    /// Builds the composition table from a product function on composable pairs.
    pub fn from_fn(
        labels: Vec<String>,
        units: Vec<usize>,
        src: Vec<usize>,
        rng: Vec<usize>,
        inv: Vec<usize>,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let n = labels.len();
        let mut comp = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                if src[a] == rng[b] {
                    comp[a * n + b] = Some(mul(a, b));
                }
            }
        }
        Self::from_tables(labels, units, src, rng, comp, inv)
    }

    pub fn empty() -> Self {
        Self::from_tables(vec![], vec![], vec![], vec![], vec![], vec![])
    }

    /// A group as a one-object groupoid.
    pub fn from_group(group: &FiniteGroup) -> Self {
        let n = group.order();
        let e = group.identity();
        Self::from_fn(
            group.labels().to_vec(),
            vec![e],
            vec![e; n],
            vec![e; n],
            (0..n).map(|a| group.inv(a)).collect(),
            |a, b| group.mul(a, b),
        )
    }

    /// Disjoint union; labels are kept when they do not collide, else prefixed `"{k}:"`.
    pub fn disjoint_union(parts: &[FiniteGroupoid]) -> Self {
        let all: Vec<&String> = parts.iter().flat_map(|p| p.labels.iter()).collect();
        let distinct: BTreeSet<&String> = all.iter().copied().collect();
        let prefix = distinct.len() != all.len();
        let total: usize = parts.iter().map(|p| p.len()).sum();
        let mut labels = Vec::with_capacity(total);
        let (mut units, mut src, mut rng, mut inv) = (vec![], vec![], vec![], vec![]);
        let mut comp = vec![None; total * total];
        let mut offset = 0;
        for (k, p) in parts.iter().enumerate() {
            for a in 0..p.len() {
                labels.push(if prefix {
                    format!("{k}:{}", p.labels[a])
                } else {
                    p.labels[a].clone()
                });
                src.push(p.src[a] + offset);
                rng.push(p.rng[a] + offset);
                inv.push(p.inv[a] + offset);
                for b in 0..p.len() {
                    if let Some(c) = p.compose(a, b) {
                        comp[(a + offset) * total + b + offset] = Some(c + offset);
                    }
                }
            }
            units.extend(p.units.iter().map(|u| u + offset));
            offset += p.len();
        }
        Self::from_tables(labels, units, src, rng, comp, inv)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn unit_set(&self) -> ElementSubset {
        self.units.iter().copied().collect()
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.is_unit[a]
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn rng(&self, a: usize) -> usize {
        self.rng[a]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `Some(ab)` when `src(a) == rng(b)`.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.comp[a * self.len() + b]
    }

    pub fn src_table(&self) -> &[usize] {
        &self.src
    }

    pub fn rng_table(&self) -> &[usize] {
        &self.rng
    }

    pub fn inv_table(&self) -> &[usize] {
        &self.inv
    }

    /// All defined products as `(a, b, ab)` triples.
    pub fn comp_triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter_map(|(a, b)| self.compose(a, b).map(|c| (a, b, c)))
            .collect()
    }

    /// Exhaustive check of the groupoid axioms.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let mut v = Vec::new();
        for (table, len) in [
            ("src", self.src.len()),
            ("rng", self.rng.len()),
            ("inv", self.inv.len()),
            ("comp", self.comp.len() / n.max(1)),
        ] {
            if len != n || (table == "comp" && self.comp.len() != n * n) {
                v.push(Violation::TableSize {
                    table,
                    expected: if table == "comp" { n * n } else { n },
                    found: if table == "comp" {
                        self.comp.len()
                    } else {
                        len
                    },
                });
            }
        }
        if !v.is_empty() {
            return ValidationReport { violations: v };
        }
        for &u in &self.units {
            if u >= n {
                v.push(Violation::IndexOutOfRange {
                    table: "units",
                    at: u,
                    value: u,
                });
            }
        }
        for (table, map) in [("src", &self.src), ("rng", &self.rng), ("inv", &self.inv)] {
            for (at, &value) in map.iter().enumerate() {
                if value >= n {
                    v.push(Violation::IndexOutOfRange { table, at, value });
                } else if table != "inv" && !self.is_unit[value] {
                    v.push(Violation::NotAUnit { table, at, value });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = self.compose(a, b) {
                    if c >= n {
                        v.push(Violation::IndexOutOfRange {
                            table: "comp",
                            at: a * n + b,
                            value: c,
                        });
                    }
                }
            }
        }
        if !v.is_empty() {
            return ValidationReport { violations: v };
        }

        for a in 0..n {
            for b in 0..n {
                let composable = self.src[a] == self.rng[b];
                match (composable, self.compose(a, b)) {
                    (false, Some(_)) => v.push(Violation::CompositionOnNonComposable { a, b }),
                    (true, None) => v.push(Violation::MissingComposite { a, b }),
                    _ => {}
                }
            }
        }
        for &x in &self.units {
            if self.src[x] != x || self.rng[x] != x {
                v.push(Violation::UnitLaw { unit: x });
            }
        }
        for a in 0..n {
            if self.compose(a, self.src[a]) != Some(a) || self.compose(self.rng[a], a) != Some(a) {
                v.push(Violation::IdentityLaw { element: a });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.src[a] != self.rng[b] {
                    continue;
                }
                if let Some(ab) = self.compose(a, b) {
                    if self.src[ab] != self.src[b] || self.rng[ab] != self.rng[a] {
                        v.push(Violation::SourceRange { a, b });
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = self.compose(a, b).filter(|_| self.src[a] == self.rng[b]) else {
                    continue;
                };
                for c in 0..n {
                    if self.src[b] != self.rng[c] {
                        continue;
                    }
                    let left = self.compose(ab, c);
                    let right = self.compose(b, c).and_then(|bc| self.compose(a, bc));
                    if left.is_none() || left != right {
                        v.push(Violation::Associativity { a, b, c });
                    }
                }
            }
        }
        for g in 0..n {
            let i = self.inv[g];
            if self.compose(i, g) != Some(self.src[g]) || self.compose(g, i) != Some(self.rng[g]) {
                v.push(Violation::InverseLaw { element: g });
            }
        }
        ValidationReport { violations: v }
    }

    /// `{γ | src(γ) = rng(γ)}`.
    pub fn isotropy(&self) -> ElementSubset {
        self.elements()
            .filter(|&a| self.src[a] == self.rng[a])
            .collect()
    }

    pub fn is_group_bundle(&self) -> bool {
        self.elements().all(|a| self.src[a] == self.rng[a])
    }

    /// Trivial isotropy; in the discrete model the interior of `Iso(G)` is `Iso(G)`.
    pub fn is_effective(&self) -> bool {
        self.isotropy().len() == self.units.len()
    }

    /// `UV = {αβ | α ∈ U, β ∈ V, src(α) = rng(β)}`.
    pub fn compose_sets(&self, u: &ElementSubset, v: &ElementSubset) -> ElementSubset {
        u.iter()
            .flat_map(|a| v.iter().filter_map(move |b| self.compose(a, b)))
            .collect()
    }

    pub fn is_bisection(&self, set: &ElementSubset) -> bool {
        let srcs: BTreeSet<usize> = set.iter().map(|a| self.src[a]).collect();
        let rngs: BTreeSet<usize> = set.iter().map(|a| self.rng[a]).collect();
        srcs.len() == set.len() && rngs.len() == set.len()
    }

    pub fn is_subgroupoid(&self, set: &ElementSubset) -> bool {
        set.iter()
            .all(|a| a < self.len() && set.contains(self.inv[a]))
            && set.iter().all(|a| {
                set.iter()
                    .all(|b| self.compose(a, b).is_none_or(|c| set.contains(c)))
            })
    }

    /// Units `x` such that every arrow with source `x` also has range `x`.
    pub fn fixed_points(&self) -> ElementSubset {
        self.units
            .iter()
            .copied()
            .filter(|&x| {
                self.elements()
                    .all(|a| self.src[a] != x || self.rng[a] == x)
            })
            .collect()
    }

    /// An arrow leaving `f`, if `f` is not invariant.
    pub fn invariance_witness(&self, f: &ElementSubset) -> Option<usize> {
        self.elements()
            .find(|&a| f.contains(self.src[a]) && !f.contains(self.rng[a]))
    }

    /// The groupoid `G_F` on arrows with source in the invariant unit set `f`.
    pub fn restrict(&self, f: &ElementSubset) -> Result<Restriction, RestrictError> {
        if let Some(x) = f.iter().find(|&x| x >= self.len() || !self.is_unit[x]) {
            return Err(RestrictError::NotAUnit(x));
        }
        if let Some(a) = self.invariance_witness(f) {
            return Err(RestrictError::NotInvariant(a));
        }
        let embedding: Vec<usize> = self
            .elements()
            .filter(|&a| f.contains(self.src[a]))
            .collect();
        let mut local = vec![usize::MAX; self.len()];
        for (i, &a) in embedding.iter().enumerate() {
            local[a] = i;
        }
        let map = |a: usize| local[a];
        let groupoid = Self::from_fn(
            embedding.iter().map(|&a| self.labels[a].clone()).collect(),
            f.iter().map(map).collect(),
            embedding.iter().map(|&a| map(self.src[a])).collect(),
            embedding.iter().map(|&a| map(self.rng[a])).collect(),
            embedding.iter().map(|&a| map(self.inv[a])).collect(),
            |a, b| {
                map(self
                    .compose(embedding[a], embedding[b])
                    .expect("composable"))
            },
        );
        Ok(Restriction {
            groupoid,
            embedding,
        })
    }

    /// Arrows `x → x`, in index order.
    pub fn isotropy_at(&self, x: usize) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.src[a] == x && self.rng[a] == x)
            .collect()
    }

    /// The isotropy group at `x`, together with the arrows it indexes.
    pub fn isotropy_group(&self, x: usize) -> (FiniteGroup, Vec<usize>) {
        let arrows = self.isotropy_at(x);
        let pos = |a: usize| arrows.binary_search(&a).expect("isotropy closed");
        let group = FiniteGroup::from_fn(
            arrows.iter().map(|&a| self.labels[a].clone()).collect(),
            |i, j| pos(self.compose(arrows[i], arrows[j]).expect("composable")),
        )
        .expect("isotropy of a valid groupoid is a group");
        (group, arrows)
    }

    /// Orbits of the unit space, each sorted, ordered by smallest unit.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for &x in &self.units {
            if seen[x] {
                continue;
            }
            let orbit: BTreeSet<usize> = self
                .elements()
                .filter(|&a| self.src[a] == x)
                .map(|a| self.rng[a])
                .collect();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit.into_iter().collect());
        }
        out
    }

    /// Some arrow `x → y`, if `x` and `y` lie in one orbit.
    pub fn arrow_between(&self, x: usize, y: usize) -> Option<usize> {
        self.elements()
            .find(|&a| self.src[a] == x && self.rng[a] == y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{klein_cross, pair_groupoid, trivial_groupoid};

    fn z2() -> FiniteGroupoid {
        FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))
    }

    fn set(g: &FiniteGroupoid, labels: &[&str]) -> ElementSubset {
        labels.iter().map(|l| g.index_of(l).unwrap()).collect()
    }

    #[test]
    fn validate_small_cases() {
        assert!(trivial_groupoid(1).validate().is_ok());
        assert!(z2().validate().is_ok());
        assert!(FiniteGroupoid::empty().validate().is_ok());
    }

    #[test]
    fn broken_inverse_is_reported() {
        let g = z2();
        let mut inv = g.inv_table().to_vec();
        inv[1] = 0;
        let bad = FiniteGroupoid::from_tables(
            g.labels().to_vec(),
            g.units().to_vec(),
            g.src_table().to_vec(),
            g.rng_table().to_vec(),
            g.comp.clone(),
            inv,
        );
        let report = bad.validate();
        assert_eq!(
            report.violations,
            vec![Violation::InverseLaw { element: 1 }]
        );
    }

    #[test]
    fn malformed_tables() {
        let g = z2();
        let bad = FiniteGroupoid::from_tables(
            g.labels().to_vec(),
            g.units().to_vec(),
            vec![0, 7],
            g.rng_table().to_vec(),
            g.comp.clone(),
            g.inv_table().to_vec(),
        );
        let report = bad.validate();
        assert!(report.violations.iter().all(Violation::is_malformed));
        assert!(!report.is_ok());

        // comp defined on a non-composable pair of the pair groupoid
        let p = pair_groupoid(2);
        let mut comp = p.comp.clone();
        let n = p.len();
        let (a, b) = (0, 2);
        assert_ne!(p.src(a), p.rng(b));
        comp[a * n + b] = Some(a);
        let bad = FiniteGroupoid::from_tables(
            p.labels().to_vec(),
            p.units().to_vec(),
            p.src_table().to_vec(),
            p.rng_table().to_vec(),
            comp,
            p.inv_table().to_vec(),
        );
        assert!(bad
            .validate()
            .violations
            .contains(&Violation::CompositionOnNonComposable { a, b }));
    }

    #[test]
    fn isotropy_examples() {
        let t = trivial_groupoid(3);
        assert_eq!(t.isotropy(), t.unit_set());
        let p = pair_groupoid(2);
        assert_eq!(p.len(), 4);
        assert_eq!(p.isotropy(), p.unit_set());

        let k = klein_cross();
        let expected = k.unit_set().union(&set(
            &k,
            &[
                "(s,c)", "(t,c)", "(st,c)", "(t,x+)", "(t,x-)", "(s,y+)", "(s,y-)",
            ],
        ));
        assert_eq!(k.isotropy(), expected);
        assert_eq!(expected.len(), 12);
        assert!(k.is_subgroupoid(&k.isotropy()));
    }

    #[test]
    fn compose_sets_examples() {
        let g = z2();
        let gg = ElementSubset::from([1]);
        assert_eq!(g.compose_sets(&gg, &gg), ElementSubset::from([0]));
        let k = klein_cross();
        let v = set(&k, &["(s,x+)", "(t,c)", "(e,y-)"]);
        assert_eq!(k.compose_sets(&k.unit_set(), &v), v);

        let p = pair_groupoid(2);
        let swaps: ElementSubset = p.elements().filter(|&a| !p.is_unit(a)).collect();
        assert!(p.is_bisection(&swaps));
        assert!(p.is_bisection(&p.unit_set()));
        let uv = p.compose_sets(&swaps, &swaps);
        assert!(p.is_bisection(&uv));
        assert_eq!(uv, p.unit_set());
        let uv = p.compose_sets(&swaps, &p.unit_set());
        assert!(p.is_bisection(&uv));
    }

    #[test]
    fn fixed_points_and_restriction() {
        let bundle = FiniteGroupoid::disjoint_union(&[z2(), z2()]);
        assert_eq!(bundle.fixed_points(), bundle.unit_set());
        let p = pair_groupoid(2);
        assert!(p.fixed_points().is_empty());
        let k = klein_cross();
        let c = k.index_of("(e,c)").unwrap();
        assert_eq!(k.fixed_points(), ElementSubset::from([c]));

        assert_eq!(k.restrict(&k.unit_set()).unwrap().groupoid, k);
        let center = k.restrict(&ElementSubset::from([c])).unwrap().groupoid;
        assert_eq!(center.len(), 4);
        assert!(center.validate().is_ok());
        assert_eq!(center.units().len(), 1);
        assert!(center.isotropy_group(0).0.is_abelian());

        let x = p.units()[0];
        match p.restrict(&ElementSubset::from([x])) {
            Err(RestrictError::NotInvariant(a)) => {
                assert_eq!(p.src(a), x);
                assert_ne!(p.rng(a), x);
            }
            other => panic!("expected rejection, got {other:?}"),
        }
        let empty = k.restrict(&ElementSubset::new()).unwrap().groupoid;
        assert!(empty.is_empty());
    }

    #[test]
    fn effectiveness() {
        assert!(pair_groupoid(3).is_effective());
        assert!(!z2().is_effective());
        assert!(!klein_cross().is_effective());
    }
}

//! Finite abelian groups: invariant factors, Pontryagin duals and dual bundles.
//!
//! Character values are never floated here. A character of a group of exponent `N` is
//! stored as exponents mod `N`; the value at `a` is `exp(2πi · exps[a] / N)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::group::FiniteGroup;
use crate::groupoid::FiniteGroupoid;
use crate::snf::smith_normal_form;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("group is not abelian: {0} and {1} do not commute")]
    NotAbelian(usize, usize),
    #[error("not a group bundle: arrow {0} has distinct source and range")]
    NotGroupBundle(usize),
    #[error("fiber over unit {unit} is not abelian")]
    NonAbelianFiber { unit: usize },
    #[error("dual fiber is incomplete: {found} characters for a group of order {order}")]
    IncompleteDual { found: usize, order: usize },
    #[error("character list has duplicates or is not closed under multiplication")]
    NotAGroup,
    #[error("exponent table is not a character")]
    NotACharacter,
}

/// `exp(2πi · k / n)`, kept reduced with `0 ≤ k < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RootOfUnity {
    pub k: u64,
    pub n: u64,
}

impl std::ops::Mul for RootOfUnity {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        let n = self.n.lcm(&other.n);
        Self::new(self.k * (n / self.n) + other.k * (n / other.n), n)
    }
}

impl RootOfUnity {
    pub fn new(k: u64, n: u64) -> Self {
        assert!(n > 0);
        let k = k % n;
        let g = k.gcd(&n);
        Self { k: k / g, n: n / g }
    }

    pub fn one() -> Self {
        Self { k: 0, n: 1 }
    }

    pub fn conj(self) -> Self {
        Self::new(self.n - self.k, self.n)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.k as f64 / self.n as f64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.k, self.n) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (k, n) => write!(f, "ω{n}^{k}"),
        }
    }
}

/// A finite group known to be commutative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    group: FiniteGroup,
    exponent: u64,
}

impl FiniteAbelianGroup {
    pub fn new(group: FiniteGroup) -> Result<Self, AbelianError> {
        let n = group.order();
        for a in 0..n {
            for b in a + 1..n {
                if group.mul(a, b) != group.mul(b, a) {
                    return Err(AbelianError::NotAbelian(a, b));
                }
            }
        }
        let exponent = group.exponent() as u64;
        Ok(Self { group, exponent })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn identity(&self) -> usize {
        self.group.identity()
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.group.mul(a, b)
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    fn power(&self, a: usize, k: i64) -> usize {
        let ord = self.group.element_order(a) as i64;
        let k = k.rem_euclid(ord);
        let mut x = self.identity();
        for _ in 0..k {
            x = self.op(x, a);
        }
        x
    }
}

/// `A ≅ Z/n₁ × … × Z/n_k`, `n₁ | n₂ | …`, realised by explicit generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub factors: Vec<u64>,
    pub generators: Vec<usize>,
    /// Coordinates of every element with respect to `generators`.
    pub coords: Vec<Vec<u64>>,
}

/// Invariant factors via the Smith normal form of a relation matrix read off the table.
///
/// Generators are chosen greedily (largest order first, outside the span so far); each new
/// generator `g_j` contributes the relation `m·g_j = Σ cᵢ gᵢ` with `m` minimal.
pub fn invariant_factors(a: &FiniteAbelianGroup) -> Decomposition {
    let n = a.order();
    let e = a.identity();
    let mut gens: Vec<usize> = Vec::new();
    let mut coords: HashMap<usize, Vec<i64>> = HashMap::from([(e, vec![])]);
    let mut relations: Vec<Vec<i64>> = Vec::new();
    while coords.len() < n {
        let g = (0..n)
            .filter(|x| !coords.contains_key(x))
            .max_by_key(|&x| (a.group.element_order(x), std::cmp::Reverse(x)))
            .expect("element outside span");
        let j = gens.len();
        for c in coords.values_mut() {
            c.push(0);
        }
        let (mut m, mut power) = (1, g);
        while !coords.contains_key(&power) {
            power = a.op(power, g);
            m += 1;
        }
        let mut row: Vec<i64> = coords[&power].iter().map(|c| -c).collect();
        row[j] = m;
        relations.push(row);
        let old: Vec<(usize, Vec<i64>)> = coords.iter().map(|(&x, c)| (x, c.clone())).collect();
        for (s, c) in old {
            let mut x = s;
            for k in 1..m {
                x = a.op(x, g);
                let mut ck = c.clone();
                ck[j] = k;
                coords.insert(x, ck);
            }
        }
        gens.push(g);
    }
    for r in &mut relations {
        r.resize(gens.len(), 0);
    }
    let smith = smith_normal_form(&relations);
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    for (i, &d) in smith.diagonal.iter().enumerate() {
        if d > 1 {
            factors.push(d as u64);
            let h = smith.v_inverse[i]
                .iter()
                .zip(&gens)
                .fold(e, |acc, (&c, &g)| a.op(acc, a.power(g, c)));
            generators.push(h);
        }
    }
    let coords = coordinates(a, &factors, &generators);
    Decomposition {
        factors,
        generators,
        coords,
    }
}

fn coordinates(a: &FiniteAbelianGroup, factors: &[u64], generators: &[usize]) -> Vec<Vec<u64>> {
    let mut out: Vec<Option<Vec<u64>>> = vec![None; a.order()];
    let mut tuple = vec![0u64; factors.len()];
    loop {
        let x = tuple
            .iter()
            .zip(generators)
            .fold(a.identity(), |acc, (&c, &h)| {
                a.op(acc, a.power(h, c as i64))
            });
        assert!(
            out[x].is_none(),
            "generators do not realise the decomposition"
        );
        out[x] = Some(tuple.clone());
        let mut i = factors.len();
        loop {
            if i == 0 {
                return out.into_iter().map(|c| c.expect("covered")).collect();
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < factors[i] {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// A homomorphism `A → 𝕋`, stored as exponents mod the group exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    modulus: u64,
    exps: Vec<u64>,
    factor_residues: Vec<u64>,
}

impl Character {
    /// Validates an exponent table against `a`.
    pub fn from_exps(a: &FiniteAbelianGroup, exps: Vec<u64>) -> Result<Self, AbelianError> {
        let n = a.exponent();
        let ok = exps.len() == a.order()
            && exps[a.identity()] == 0
            && exps.iter().all(|&x| x < n)
            && (0..a.order())
                .all(|x| (0..a.order()).all(|y| exps[a.op(x, y)] == (exps[x] + exps[y]) % n));
        if !ok {
            return Err(AbelianError::NotACharacter);
        }
        let d = invariant_factors(a);
        let factor_residues = d
            .generators
            .iter()
            .zip(&d.factors)
            .map(|(&h, &f)| exps[h] / (n / f))
            .collect();
        Ok(Self {
            modulus: n,
            exps,
            factor_residues,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    /// Residues `rᵢ mod nᵢ` on the invariant-factor generators.
    pub fn factor_residues(&self) -> &[u64] {
        &self.factor_residues
    }

    pub fn value(&self, a: usize) -> RootOfUnity {
        RootOfUnity::new(self.exps[a], self.modulus)
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&x| x == 0)
    }
}

/// All `|A|` characters, one per residue tuple, in lexicographic residue order.
pub fn characters(a: &FiniteAbelianGroup) -> Vec<Character> {
    characters_with(a, &invariant_factors(a))
}

pub fn characters_with(a: &FiniteAbelianGroup, d: &Decomposition) -> Vec<Character> {
    let n = a.exponent();
    let mut out = Vec::with_capacity(a.order());
    let mut residues = vec![0u64; d.factors.len()];
    loop {
        let exps = d
            .coords
            .iter()
            .map(|c| {
                c.iter()
                    .zip(&residues)
                    .zip(&d.factors)
                    .map(|((&ci, &ri), &fi)| ci * ri * (n / fi))
                    .sum::<u64>()
                    % n
            })
            .collect();
        out.push(Character {
            modulus: n,
            exps,
            factor_residues: residues.clone(),
        });
        let mut i = d.factors.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            residues[i] += 1;
            if residues[i] < d.factors[i] {
                break;
            }
            residues[i] = 0;
        }
    }
}

/// The group of a complete list of characters under pointwise multiplication.
pub fn char_group_structure(
    host: &FiniteAbelianGroup,
    fiber: &[Character],
) -> Result<FiniteAbelianGroup, AbelianError> {
    if fiber.len() != host.order() {
        return Err(AbelianError::IncompleteDual {
            found: fiber.len(),
            order: host.order(),
        });
    }
    let n = host.exponent();
    if fiber
        .iter()
        .any(|c| c.modulus != n || c.exps.len() != host.order())
    {
        return Err(AbelianError::NotACharacter);
    }
    let index: HashMap<&[u64], usize> = fiber
        .iter()
        .enumerate()
        .map(|(i, c)| (c.exps.as_slice(), i))
        .collect();
    if index.len() != fiber.len() {
        return Err(AbelianError::NotAGroup);
    }
    let mut table = Vec::with_capacity(fiber.len() * fiber.len());
    for x in fiber {
        for y in fiber {
            let sum: Vec<u64> = x
                .exps
                .iter()
                .zip(&y.exps)
                .map(|(a, b)| (a + b) % n)
                .collect();
            table.push(*index.get(sum.as_slice()).ok_or(AbelianError::NotAGroup)?);
        }
    }
    let labels = fiber
        .iter()
        .map(|c| {
            let r: Vec<String> = c.factor_residues.iter().map(u64::to_string).collect();
            format!("chi[{}]", r.join(","))
        })
        .collect();
    let group = FiniteGroup::from_table(labels, table).map_err(|_| AbelianError::NotAGroup)?;
    FiniteAbelianGroup::new(group)
}

/// The dual of the isotropy group at one unit.
#[derive(Clone, Debug)]
pub struct DualFiber {
    pub unit: usize,
    /// Arrows of the fiber; `group` indexes into this list.
    pub arrows: Vec<usize>,
    pub group: FiniteAbelianGroup,
    pub decomposition: Decomposition,
    pub characters: Vec<Character>,
}

/// `Ĝ = {(χ, x) | x ∈ G⁽⁰⁾, χ ∈ Ĝₓ}` for an abelian group bundle.
#[derive(Clone, Debug)]
pub struct DualBundle {
    pub fibers: Vec<DualFiber>,
}

impl DualBundle {
    pub fn len(&self) -> usize {
        self.fibers.iter().map(|f| f.characters.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn fiber_sizes(&self) -> BTreeMap<usize, usize> {
        self.fibers
            .iter()
            .map(|f| (f.unit, f.characters.len()))
            .collect()
    }
}

pub fn dual_bundle(g: &FiniteGroupoid) -> Result<DualBundle, AbelianError> {
    if let Some(a) = g.elements().find(|&a| g.src(a) != g.rng(a)) {
        return Err(AbelianError::NotGroupBundle(a));
    }
    let mut fibers = Vec::new();
    for &unit in g.units() {
        let (group, arrows) = g.isotropy_group(unit);
        let group =
            FiniteAbelianGroup::new(group).map_err(|_| AbelianError::NonAbelianFiber { unit })?;
        let decomposition = invariant_factors(&group);
        let characters = characters_with(&group, &decomposition);
        fibers.push(DualFiber {
            unit,
            arrows,
            group,
            decomposition,
            characters,
        });
    }
    Ok(DualBundle { fibers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{group_bundle, shuffled_abelian_group, trivial_groupoid};
    use crate::quotient::abelianize_groupoid;

    fn abelian(g: FiniteGroup) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(g).unwrap()
    }

    #[test]
    fn invariant_factor_examples() {
        assert!(invariant_factors(&abelian(FiniteGroup::cyclic(1)))
            .factors
            .is_empty());
        assert_eq!(
            invariant_factors(&abelian(FiniteGroup::klein())).factors,
            vec![2, 2]
        );
        let z6 = abelian(shuffled_abelian_group(&[2, 3], 11));
        let d = invariant_factors(&z6);
        assert_eq!(d.factors, vec![6]);
        assert_eq!(z6.group().element_order(d.generators[0]), 6);
        assert_eq!(
            invariant_factors(&abelian(FiniteGroup::abelian_product(&[4, 6]))).factors,
            vec![2, 12]
        );
        assert!(FiniteAbelianGroup::new(FiniteGroup::s3()).is_err());
    }

    #[test]
    fn character_examples() {
        let trivial = characters(&abelian(FiniteGroup::cyclic(1)));
        assert_eq!(trivial.len(), 1);
        assert!(trivial[0].is_trivial());

        let z2 = abelian(FiniteGroup::cyclic(2));
        let chars = characters(&z2);
        assert_eq!(chars.len(), 2);
        assert_eq!(chars[1].exps(), &[0, 1]);
        assert_eq!(chars[1].value(1), RootOfUnity::new(1, 2));

        let k = abelian(FiniteGroup::klein());
        let chars = characters(&k);
        assert_eq!(chars.len(), 4);
        assert!(chars.iter().all(|c| c.exps().iter().all(|&x| x < 2)));
        let dual = char_group_structure(&k, &chars).unwrap();
        assert_eq!(invariant_factors(&dual).factors, vec![2, 2]);
    }

    #[test]
    fn dual_structure_preserves_factors() {
        for factors in [vec![2], vec![6], vec![2, 2], vec![2, 4], vec![3, 3]] {
            let a = abelian(shuffled_abelian_group(&factors, 3));
            let chars = characters(&a);
            let dual = char_group_structure(&a, &chars).unwrap();
            assert_eq!(
                invariant_factors(&dual).factors,
                factors.iter().map(|&x| x as u64).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn incomplete_dual_rejected() {
        let k = abelian(FiniteGroup::klein());
        let chars = characters(&k);
        assert!(matches!(
            char_group_structure(&k, &chars[..3]),
            Err(AbelianError::IncompleteDual { found: 3, order: 4 })
        ));
        let dup = vec![
            chars[0].clone(),
            chars[0].clone(),
            chars[1].clone(),
            chars[2].clone(),
        ];
        assert_eq!(char_group_structure(&k, &dup), Err(AbelianError::NotAGroup));
    }

    #[test]
    fn from_exps_validates() {
        let z4 = abelian(FiniteGroup::cyclic(4));
        assert!(Character::from_exps(&z4, vec![0, 1, 2, 3]).is_ok());
        assert_eq!(
            Character::from_exps(&z4, vec![0, 1, 1, 3]),
            Err(AbelianError::NotACharacter)
        );
    }

    #[test]
    fn dual_bundle_examples() {
        let t = dual_bundle(&trivial_groupoid(4)).unwrap();
        assert_eq!(t.fibers.len(), 4);
        assert!(t.fibers.iter().all(|f| f.characters.len() == 1));

        let gab = abelianize_groupoid(&crate::generators::s3_a3_bundle());
        let d = dual_bundle(gab.groupoid()).unwrap();
        let sizes: Vec<usize> = d.fibers.iter().map(|f| f.characters.len()).collect();
        assert_eq!(sizes, vec![2, 3]);
        assert_eq!(d.len(), 5);

        let k = group_bundle(&[("c".into(), FiniteGroup::klein())]);
        assert_eq!(dual_bundle(&k).unwrap().len(), 4);

        let bad = crate::generators::s3_a3_bundle();
        assert!(matches!(
            dual_bundle(&bad),
            Err(AbelianError::NonAbelianFiber { .. })
        ));
        assert!(matches!(
            dual_bundle(&crate::generators::pair_groupoid(2)),
            Err(AbelianError::NotGroupBundle(_))
        ));
    }

    #[test]
    fn roots_of_unity() {
        let w = RootOfUnity::new(1, 3);
        assert_eq!(w * w * w, RootOfUnity::one());
        assert_eq!(w.conj(), RootOfUnity::new(2, 3));
        assert_eq!(RootOfUnity::new(2, 4), RootOfUnity::new(1, 2));
        assert!((RootOfUnity::new(1, 2).to_complex() + 1.0).norm() < 1e-12);
    }
}

//! Corpus construction: transformation groupoids, group bundles, named examples and
//! seeded random instances.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::FiniteGroup;
use crate::groupoid::FiniteGroupoid;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("action table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("group element {g} sends point {x} out of range")]
    OutOfRange { g: usize, x: usize },
    #[error("identity moves point {0}")]
    IdentityMoves(usize),
    #[error("act(g, act(h, x)) != act(gh, x) for g={g}, h={h}, x={x}")]
    NotCompatible { g: usize, h: usize, x: usize },
}

/// A left action of a finite group on a finite point set.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: FiniteGroup,
    points: Vec<String>,
    /// `act[g * points.len() + x]`
    act: Vec<usize>,
}

impl GroupAction {
    pub fn new(
        group: FiniteGroup,
        points: Vec<String>,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, ActionError> {
        let m = points.len();
        let table = group
            .elements()
            .flat_map(|g| (0..m).map(move |x| (g, x)))
            .map(|(g, x)| act(g, x))
            .collect();
        Self::from_table(group, points, table)
    }

    pub fn from_table(
        group: FiniteGroup,
        points: Vec<String>,
        act: Vec<usize>,
    ) -> Result<Self, ActionError> {
        let m = points.len();
        let expected = group.order() * m;
        if act.len() != expected {
            return Err(ActionError::TableSize {
                expected,
                found: act.len(),
            });
        }
        for g in group.elements() {
            for x in 0..m {
                if act[g * m + x] >= m {
                    return Err(ActionError::OutOfRange { g, x });
                }
            }
        }
        let e = group.identity();
        if let Some(x) = (0..m).find(|&x| act[e * m + x] != x) {
            return Err(ActionError::IdentityMoves(x));
        }
        for g in group.elements() {
            for h in group.elements() {
                for x in 0..m {
                    if act[g * m + act[h * m + x]] != act[group.mul(g, h) * m + x] {
                        return Err(ActionError::NotCompatible { g, h, x });
                    }
                }
            }
        }
        Ok(Self { group, points, act })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.act[g * self.points.len() + x]
    }

    /// Points fixed by every group element.
    pub fn global_fixed_points(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&x| self.group.elements().all(|g| self.act(g, x) == x))
            .collect()
    }

    /// Left multiplication on the cosets `gK` of a subgroup `K`.
    pub fn on_cosets(group: &FiniteGroup, subgroup: &[usize]) -> Self {
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        let mut which = vec![usize::MAX; group.order()];
        for g in group.elements() {
            if which[g] != usize::MAX {
                continue;
            }
            let mut coset: Vec<usize> = subgroup.iter().map(|&k| group.mul(g, k)).collect();
            coset.sort_unstable();
            for &h in &coset {
                which[h] = cosets.len();
            }
            cosets.push(coset);
        }
        let points = cosets
            .iter()
            .map(|c| format!("{}K", group.label(c[0])))
            .collect();
        Self::new(group.clone(), points, |g, x| {
            which[group.mul(g, cosets[x][0])]
        })
        .expect("coset action")
    }

    /// Disjoint union of actions of one group.
    pub fn sum(parts: &[GroupAction]) -> Self {
        let group = parts[0].group.clone();
        let mut points = Vec::new();
        let mut offsets = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            assert_eq!(p.group, group, "actions of different groups");
            offsets.push(points.len());
            points.extend(p.points.iter().map(|x| format!("{x}#{k}")));
        }
        let owner: Vec<(usize, usize)> = parts
            .iter()
            .enumerate()
            .flat_map(|(k, p)| (0..p.points.len()).map(move |x| (k, x)))
            .collect();
        Self::new(group, points, |g, x| {
            let (k, local) = owner[x];
            offsets[k] + parts[k].act(g, local)
        })
        .expect("sum of actions")
    }
}

/// `Γ ⋉ X`: arrow `(t, x)` goes from `x` to `t·x`; index `t * |X| + x`.
pub fn transformation_groupoid(action: &GroupAction) -> FiniteGroupoid {
    let g = &action.group;
    let m = action.points.len();
    let e = g.identity();
    let idx = |t: usize, x: usize| t * m + x;
    let labels = g
        .elements()
        .flat_map(|t| (0..m).map(move |x| (t, x)))
        .map(|(t, x)| format!("({},{})", g.label(t), action.points[x]))
        .collect();
    let n = g.order() * m;
    FiniteGroupoid::from_fn(
        labels,
        (0..m).map(|x| idx(e, x)).collect(),
        (0..n).map(|a| idx(e, a % m)).collect(),
        (0..n).map(|a| idx(e, action.act(a / m, a % m))).collect(),
        (0..n)
            .map(|a| idx(g.inv(a / m), action.act(a / m, a % m)))
            .collect(),
        // (t1, t2·x)·(t2, x) = (t1 t2, x)
        |a, b| idx(g.mul(a / m, b / m), b % m),
    )
}

/// Disjoint union of one-object groupoids, arrow labels `"(g,unit)"`.
pub fn group_bundle(fibers: &[(String, FiniteGroup)]) -> FiniteGroupoid {
    let parts: Vec<FiniteGroupoid> = fibers
        .iter()
        .map(|(unit, group)| {
            let relabelled = FiniteGroup::from_fn(
                group
                    .elements()
                    .map(|a| format!("({},{unit})", group.label(a)))
                    .collect(),
                |a, b| group.mul(a, b),
            )
            .expect("fiber group");
            FiniteGroupoid::from_group(&relabelled)
        })
        .collect();
    FiniteGroupoid::disjoint_union(&parts)
}

/// `n` units and nothing else; labels `p0, p1, …`.
pub fn trivial_groupoid(n: usize) -> FiniteGroupoid {
    FiniteGroupoid::from_fn(
        (0..n).map(|i| format!("p{i}")).collect(),
        (0..n).collect(),
        (0..n).collect(),
        (0..n).collect(),
        (0..n).collect(),
        |a, _| a,
    )
}

/// Full equivalence relation on `n` points; arrow `(pi,pj)` goes from `pj` to `pi`.
pub fn pair_groupoid(n: usize) -> FiniteGroupoid {
    // index r * n + s for the arrow s -> r; unit at r = s.
    let labels = (0..n * n)
        .map(|a| format!("(p{},p{})", a / n, a % n))
        .collect();
    FiniteGroupoid::from_fn(
        labels,
        (0..n).map(|i| i * n + i).collect(),
        (0..n * n).map(|a| (a % n) * n + a % n).collect(),
        (0..n * n).map(|a| (a / n) * n + a / n).collect(),
        (0..n * n).map(|a| (a % n) * n + a / n).collect(),
        |a, b| (a / n) * n + b % n,
    )
}

/// The Klein group `{e, s, t, st}` acting on the five-point cross `{c, x+, x-, y+, y-}`;
/// `s` swaps the x-arm, `t` swaps the y-arm.
pub fn klein_cross_action() -> GroupAction {
    let k = FiniteGroup::klein();
    let points: Vec<String> = ["c", "x+", "x-", "y+", "y-"].map(String::from).to_vec();
    // Klein elements are bitmasks: bit 0 = s, bit 1 = t.
    GroupAction::new(k, points, |g, x| match x {
        1 | 2 if g & 1 == 1 => 3 - x,
        3 | 4 if g & 2 == 2 => 7 - x,
        _ => x,
    })
    .expect("klein action")
}

pub fn klein_cross() -> FiniteGroupoid {
    transformation_groupoid(&klein_cross_action())
}

/// `S₃` as a one-object groupoid, arrows `e, s, s2, t, ts, ts2`.
pub fn s3_groupoid() -> FiniteGroupoid {
    FiniteGroupoid::from_group(&FiniteGroup::s3())
}

/// Two-point bundle with fiber `S₃` over `p` and `A₃` over `q`.
pub fn s3_a3_bundle() -> FiniteGroupoid {
    group_bundle(&[
        ("p".into(), FiniteGroup::s3()),
        ("q".into(), FiniteGroup::a3()),
    ])
}

/// A named groupoid from the built-in catalogue.
pub fn named(name: &str, n: usize) -> Option<FiniteGroupoid> {
    let group = FiniteGroup::library()
        .into_iter()
        .find(|(label, _)| label.eq_ignore_ascii_case(name))
        .map(|(_, g)| g);
    if let Some(g) = group {
        return Some(FiniteGroupoid::from_group(&g));
    }
    Some(match name {
        "trivial" => trivial_groupoid(n),
        "pair" => pair_groupoid(n),
        "klein-cross" => klein_cross(),
        "s3-a3" => s3_a3_bundle(),
        "empty" => FiniteGroupoid::empty(),
        _ => return None,
    })
}

pub const NAMED: &[&str] = &["trivial", "pair", "klein-cross", "s3-a3", "empty"];

/// A seeded random groupoid with at most `size_budget` arrows.
///
/// Built as a disjoint union of up to three transformation groupoids, each a library
/// group (order ≤ 12) acting on one or two coset spaces of random subgroups.
pub fn random_groupoid(seed: u64, size_budget: usize) -> FiniteGroupoid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let library = FiniteGroup::library();
    let mut remaining = size_budget;
    let mut parts = Vec::new();
    let components = rng.gen_range(1..=3);
    for _ in 0..components {
        if remaining == 0 {
            break;
        }
        let fitting: Vec<&FiniteGroup> = library
            .iter()
            .map(|(_, g)| g)
            .filter(|g| g.order() <= remaining)
            .collect();
        let group = *fitting.choose(&mut rng).expect("Z1 always fits");
        let subgroups = group.subgroups();
        let mut spaces = Vec::new();
        let mut used = 0;
        for _ in 0..rng.gen_range(1..=2) {
            let k = subgroups.choose(&mut rng).expect("trivial subgroup");
            let arrows = group.order() * (group.order() / k.len());
            if used + arrows <= remaining {
                spaces.push(GroupAction::on_cosets(group, k));
                used += arrows;
            }
        }
        if spaces.is_empty() {
            // The whole group as a one-object groupoid always fits.
            spaces.push(GroupAction::on_cosets(
                group,
                &group.elements().collect::<Vec<_>>(),
            ));
            used = group.order();
        }
        parts.push(transformation_groupoid(&GroupAction::sum(&spaces)));
        remaining -= used;
    }
    FiniteGroupoid::disjoint_union(&parts)
}

/// A seeded group bundle with abelian library fibers (order ≤ 12) over 1..=8 points.
pub fn random_abelian_bundle(seed: u64) -> FiniteGroupoid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let abelian: Vec<(String, FiniteGroup)> = FiniteGroup::library()
        .into_iter()
        .filter(|(_, g)| g.is_abelian())
        .collect();
    let points = rng.gen_range(1..=8);
    let fibers: Vec<(String, FiniteGroup)> = (0..points)
        .map(|i| {
            let (_, g) = abelian.choose(&mut rng).expect("nonempty library");
            (format!("u{i}"), g.clone())
        })
        .collect();
    group_bundle(&fibers)
}

/// Invariant-factor lists `n1 | n2 | … ` of every abelian group of order at most `max_order`,
/// keyed by order.
pub fn abelian_types(max_order: usize) -> BTreeMap<usize, Vec<Vec<usize>>> {
    fn extend(acc: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>, product: usize, max: usize) {
        acc.push(prefix.clone());
        // next factor must be a multiple of the previous one
        let last = prefix.last().copied().unwrap_or(1);
        let mut f = if last == 1 { 2 } else { last };
        while product * f <= max {
            if f % last == 0 {
                prefix.push(f);
                extend(acc, prefix, product * f, max);
                prefix.pop();
            }
            f += 1;
        }
    }
    let mut lists = Vec::new();
    extend(&mut lists, &mut Vec::new(), 1, max_order);
    let mut out: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for l in lists {
        out.entry(l.iter().product()).or_default().push(l);
    }
    out
}

/// `Z/n1 × … × Z/nk` with its element labels shuffled by `seed`.
pub fn shuffled_abelian_group(factors: &[usize], seed: u64) -> FiniteGroup {
    let g = FiniteGroup::abelian_product(factors);
    let mut perm: Vec<usize> = g.elements().collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    g.permuted(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transformation_examples() {
        let trivial = GroupAction::new(
            FiniteGroup::cyclic(1),
            vec!["a".into(), "b".into()],
            |_, x| x,
        )
        .unwrap();
        let t = transformation_groupoid(&trivial);
        assert!(t.validate().is_ok());
        assert_eq!(t.len(), 2);
        assert!(t.elements().all(|a| t.is_unit(a)));

        let swap = GroupAction::new(
            FiniteGroup::cyclic(2),
            vec!["a".into(), "b".into()],
            |g, x| (g + x) % 2,
        )
        .unwrap();
        let p = transformation_groupoid(&swap);
        assert!(p.validate().is_ok());
        assert_eq!(p.len(), 4);
        assert!(p.is_effective());
        assert!(p.fixed_points().is_empty());

        let k = klein_cross();
        assert_eq!(k.len(), 20);
        assert!(k.validate().is_ok());
    }

    #[test]
    fn invalid_action_rejected() {
        let r = GroupAction::new(
            FiniteGroup::cyclic(3),
            vec!["a".into(), "b".into()],
            |g, x| {
                if g == 0 {
                    x
                } else {
                    1 - x
                }
            },
        );
        assert!(matches!(r, Err(ActionError::NotCompatible { .. })));
        let r = GroupAction::new(FiniteGroup::cyclic(2), vec!["a".into()], |_, _| 3);
        assert!(matches!(r, Err(ActionError::OutOfRange { .. })));
    }

    #[test]
    fn bundles() {
        assert_eq!(group_bundle(&[("p".into(), FiniteGroup::s3())]).len(), 6);
        let b = s3_a3_bundle();
        assert_eq!(b.len(), 9);
        assert!(b.is_group_bundle());
        assert!(b.validate().is_ok());
        assert!(group_bundle(&[]).is_empty());
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        let g = random_groupoid(0, 1);
        assert_eq!(g.len(), 1);
        assert_eq!(g.units().len(), 1);
        for seed in 0..30 {
            let g = random_groupoid(seed, 20);
            assert!(g.len() <= 20 && !g.is_empty());
            assert!(g.validate().is_ok(), "seed {seed}");
            assert_eq!(g, random_groupoid(seed, 20));
        }
    }

    #[test]
    fn abelian_type_counts() {
        let types = abelian_types(64);
        assert_eq!(types[&1], vec![Vec::<usize>::new()]);
        assert_eq!(types[&8].len(), 3);
        assert_eq!(types[&16].len(), 5);
        assert_eq!(types[&64].len(), 11);
        assert_eq!(types[&36].len(), 4);
    }
}

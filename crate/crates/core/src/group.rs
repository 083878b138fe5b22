//! Finite groups given by Cayley tables, plus a small library of literal groups.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group has no elements")]
    Empty,
    #[error("product of {0} and {1} is out of range")]
    NotClosed(usize, usize),
    #[error("no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails on ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("label table has {labels} entries but the group has {order} elements")]
    LabelCount { labels: usize, order: usize },
}

/// A finite group stored as a dense multiplication table over indices `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Builds and validates a group from labels and a multiplication function on indices.
    pub fn from_fn(
        labels: Vec<String>,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        let n = labels.len();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(mul(a, b));
            }
        }
        Self::from_table(labels, table)
    }

    pub fn from_table(labels: Vec<String>, table: Vec<usize>) -> Result<Self, GroupError> {
        let n = labels.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if table.len() != n * n {
            return Err(GroupError::LabelCount {
                labels: n,
                order: (table.len() as f64).sqrt() as usize,
            });
        }
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] >= n {
                    return Err(GroupError::NotClosed(a, b));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e * n + a] == a && table[a * n + e] == a))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| table[a * n + b] == identity && table[b * n + a] == identity)
                .ok_or(GroupError::NoInverse(a))?;
            inverse.push(b);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(Self {
            labels,
            table,
            identity,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|a| self.element_order(a))
            .fold(1, num_integer::lcm)
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    /// Subgroup generated by `gens`, as a sorted index list.
    pub fn generated(&self, gens: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut seen = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let comms: BTreeSet<usize> = self
            .elements()
            .flat_map(|a| self.elements().map(move |b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        self.generated(comms)
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        s.contains(&self.identity)
            && s.iter().all(|&a| s.contains(&self.inv(a)))
            && s.iter()
                .all(|&a| s.iter().all(|&b| s.contains(&self.mul(a, b))))
    }

    pub fn is_normal_subgroup(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        self.is_subgroup(set)
            && self.elements().all(|g| {
                s.iter()
                    .all(|&h| s.contains(&self.mul(self.mul(g, h), self.inv(g))))
            })
    }

    /// All subgroups, each a sorted index list, in a deterministic order.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::from([vec![self.identity]]);
        let mut frontier: Vec<Vec<usize>> = vec![vec![self.identity]];
        while let Some(h) = frontier.pop() {
            for g in self.elements() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let k = self.generated(h.iter().copied().chain([g]));
                if found.insert(k.clone()) {
                    frontier.push(k);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by_key(|h| h.len());
        out
    }

    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        self.subgroups()
            .into_iter()
            .filter(|h| self.is_normal_subgroup(h))
            .collect()
    }

    /// The group with elements relabelled through `perm` (new index `perm[old]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.order();
        assert_eq!(perm.len(), n);
        let mut back = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            back[new] = old;
        }
        let labels = (0..n).map(|new| self.labels[back[new]].clone()).collect();
        Self::from_fn(labels, |a, b| perm[self.mul(back[a], back[b])]).expect("relabelled group")
    }

    pub fn direct_product(&self, other: &Self) -> Self {
        let m = other.order();
        let labels = self
            .elements()
            .flat_map(|a| other.elements().map(move |b| (a, b)))
            .map(|(a, b)| format!("({},{})", self.label(a), other.label(b)))
            .collect();
        Self::from_fn(labels, |x, y| {
            self.mul(x / m, y / m) * m + other.mul(x % m, y % m)
        })
        .expect("direct product")
    }

    /// Cyclic group `Z/n` with elements `e, g, g2, …`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        Self::from_fn(labels, |a, b| (a + b) % n).expect("cyclic group")
    }

    /// `Z/n1 × … × Z/nk` with additive tuple labels.
    pub fn abelian_product(factors: &[usize]) -> Self {
        let order: usize = factors.iter().product();
        let digits = |mut x: usize| {
            let mut d = vec![0; factors.len()];
            for i in (0..factors.len()).rev() {
                d[i] = x % factors[i];
                x /= factors[i];
            }
            d
        };
        let undigits = |d: &[usize]| d.iter().zip(factors).fold(0, |acc, (x, n)| acc * n + x);
        let labels = (0..order)
            .map(|x| {
                let d: Vec<String> = digits(x).iter().map(|v| v.to_string()).collect();
                format!("[{}]", d.join(","))
            })
            .collect();
        Self::from_fn(labels, |a, b| {
            let (da, db) = (digits(a), digits(b));
            let s: Vec<usize> = (0..factors.len())
                .map(|i| (da[i] + db[i]) % factors[i])
                .collect();
            undigits(&s)
        })
        .expect("abelian product")
    }

    /// The Klein four-group `{e, s, t, st}`.
    pub fn klein() -> Self {
        let labels = ["e", "s", "t", "st"].map(String::from).to_vec();
        Self::from_fn(labels, |a, b| a ^ b).expect("klein group")
    }

    /// `S₃ = ⟨s, t | s³ = t² = e, st = ts²⟩` listed as `e, s, s2, t, ts, ts2`.
    pub fn s3() -> Self {
        let labels = ["e", "s", "s2", "t", "ts", "ts2"]
            .map(String::from)
            .to_vec();
        // index = 3·b + a for t^b s^a; s^a t^d = t^d s^{±a}.
        Self::from_fn(labels, |x, y| {
            let (b, a) = (x / 3, x % 3);
            let (d, c) = (y / 3, y % 3);
            let a = if d == 1 { (3 - a) % 3 } else { a };
            3 * ((b + d) % 2) + (a + c) % 3
        })
        .expect("S3")
    }

    /// `A₃ = {e, s, s2}`, cyclic of order 3.
    pub fn a3() -> Self {
        let labels = ["e", "s", "s2"].map(String::from).to_vec();
        Self::from_fn(labels, |a, b| (a + b) % 3).expect("A3")
    }

    /// Dihedral group of order 8, elements `r^a f^b`.
    pub fn d4() -> Self {
        let labels = (0..8)
            .map(|x| {
                let (a, b) = (x % 4, x / 4);
                match (a, b) {
                    (0, 0) => "e".to_string(),
                    (a, 0) => format!("r{a}"),
                    (0, _) => "f".to_string(),
                    (a, _) => format!("r{a}f"),
                }
            })
            .collect();
        Self::from_fn(labels, |x, y| {
            let (a, b) = (x % 4, x / 4);
            let (c, d) = (y % 4, y / 4);
            let c = if b == 1 { (4 - c) % 4 } else { c };
            ((a + c) % 4) + 4 * ((b + d) % 2)
        })
        .expect("D4")
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn q8() -> Self {
        let units = ["1", "i", "j", "k"];
        let labels = (0..8)
            .map(|x| format!("{}{}", if x >= 4 { "-" } else { "" }, units[x % 4]))
            .collect();
        // Unit products (sign, unit) for 1, i, j, k.
        const PROD: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        Self::from_fn(labels, |x, y| {
            let (neg, u) = PROD[x % 4][y % 4];
            let neg = neg ^ (x >= 4) ^ (y >= 4);
            u + if neg { 4 } else { 0 }
        })
        .expect("Q8")
    }

    /// The built-in library: cyclic groups of order 1..=12, Klein, S₃, A₃, D₄, Q₈.
    pub fn library() -> Vec<(String, FiniteGroup)> {
        let mut out: Vec<(String, FiniteGroup)> = (1..=12)
            .map(|n| (format!("Z{n}"), Self::cyclic(n)))
            .collect();
        out.push(("Klein".into(), Self::klein()));
        out.push(("S3".into(), Self::s3()));
        out.push(("A3".into(), Self::a3()));
        out.push(("D4".into(), Self::d4()));
        out.push(("Q8".into(), Self::q8()));
        out
    }
}

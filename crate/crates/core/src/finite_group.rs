//! Small finite groups given by multiplication tables, their automorphisms, and twisted
//! conjugacy.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};

/// Finite group on elements `0..order`; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub name: String,
    pub labels: Vec<String>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a multiplication table with identity at index 0.
    pub fn from_table(name: &str, labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 || labels.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(AtlasError::InvalidInput("malformed multiplication table".into()));
        }
        if (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
            return Err(AtlasError::InvalidInput("element 0 is not the identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(AtlasError::InvalidInput("table is not associative".into()));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == 0))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| AtlasError::InvalidInput("element without inverse".into()))?;
        let mut g = FiniteGroup { name: name.to_string(), labels, table, inverses, generators: vec![] };
        g.generators = g.greedy_generators();
        Ok(g)
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        FiniteGroup::abelian(&[n])
    }

    /// `Z/d_1 x ... x Z/d_k`, elements ordered with the first coordinate varying slowest.
    pub fn abelian(moduli: &[usize]) -> FiniteGroup {
        let elems = abelian_elements(moduli);
        let index: HashMap<&Vec<usize>, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let table = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| {
                        let s: Vec<usize> = a.iter().zip(b).zip(moduli).map(|((x, y), d)| (x + y) % d).collect();
                        index[&s]
                    })
                    .collect()
            })
            .collect();
        let labels = elems.iter().map(|e| abelian_label(e)).collect();
        let name = if moduli.is_empty() {
            "1".to_string()
        } else {
            moduli.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
        };
        FiniteGroup::from_table(&name, labels, table).expect("abelian table is valid")
    }

    /// Closure of a set of permutations of `0..degree`, identity first, then BFS order.
    pub fn from_permutations(name: &str, degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
        if gens.iter().any(|p| !is_permutation(p, degree)) {
            return Err(AtlasError::InvalidInput("generator is not a permutation".into()));
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let p = compose_perm(&elems[i], g);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let table = elems.iter().map(|a| elems.iter().map(|b| index[&compose_perm(a, b)]).collect()).collect();
        let labels = elems.iter().map(|p| cycle_label(p)).collect();
        FiniteGroup::from_table(name, labels, table)
    }

    pub fn symmetric(n: usize) -> FiniteGroup {
        let mut gens = vec![];
        if n >= 2 {
            gens.push((0..n).map(|i| if i < 2 { 1 - i } else { i }).collect());
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        FiniteGroup::from_permutations(&format!("S{n}"), n, &gens).expect("valid permutations")
    }

    /// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
    pub fn dihedral(n: usize) -> FiniteGroup {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        FiniteGroup::from_permutations(&format!("D{}", 2 * n), n, &[rot, refl]).expect("valid permutations")
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> FiniteGroup {
        // Unit quaternions as (sign, axis) with axis 0 = 1, 1 = i, 2 = j, 3 = k.
        let elems: Vec<(i8, usize)> = [0, 1, 2, 3].iter().flat_map(|&a| [(1, a), (-1, a)]).collect();
        let mul = |(s, a): (i8, usize), (t, b): (i8, usize)| -> (i8, usize) {
            let (sign, axis) = match (a, b) {
                (0, x) | (x, 0) => (1, x),
                (x, y) if x == y => (-1, 0),
                (1, 2) => (1, 3),
                (2, 3) => (1, 1),
                (3, 1) => (1, 2),
                (2, 1) => (-1, 3),
                (3, 2) => (-1, 1),
                (1, 3) => (-1, 2),
                _ => unreachable!(),
            };
            (s * t * sign, axis)
        };
        let index = |e: (i8, usize)| elems.iter().position(|&x| x == e).expect("closed");
        let table = elems.iter().map(|&a| elems.iter().map(|&b| index(mul(a, b))).collect()).collect();
        let labels = elems
            .iter()
            .map(|&(s, a)| format!("{}{}", if s < 0 { "-" } else { "" }, ["1", "i", "j", "k"][a]))
            .collect();
        FiniteGroup::from_table("Q8", labels, table).expect("quaternion table is valid")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn identity_map(&self) -> Vec<usize> {
        (0..self.order()).collect()
    }

    /// `x -> g x g^-1`.
    pub fn inner(&self, g: usize) -> Vec<usize> {
        (0..self.order()).map(|x| self.mul(self.mul(g, x), self.inv(g))).collect()
    }

    pub fn is_automorphism(&self, phi: &[usize]) -> bool {
        let n = self.order();
        is_permutation(phi, n) && (0..n).all(|a| (0..n).all(|b| phi[self.mul(a, b)] == self.mul(phi[a], phi[b])))
    }

    /// All automorphisms, found by extending every assignment of images to the generators.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let gens = &self.generators;
        let n = self.order();
        let mut out = Vec::new();
        let mut images = vec![0usize; gens.len()];
        loop {
            if let Some(phi) = self.extend_hom(&images) {
                if is_permutation(&phi, n) {
                    out.push(phi);
                }
            }
            let mut i = 0;
            loop {
                if i == images.len() {
                    out.sort();
                    return out;
                }
                images[i] += 1;
                if images[i] < n {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }

    /// Extends generator images to a homomorphism, or `None` if inconsistent.
    fn extend_hom(&self, images: &[usize]) -> Option<Vec<usize>> {
        let n = self.order();
        let mut phi = vec![usize::MAX; n];
        phi[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (g, &img) in self.generators.iter().zip(images) {
                let y = self.mul(x, *g);
                let fy = self.mul(phi[x], img);
                if phi[y] == usize::MAX {
                    phi[y] = fy;
                    queue.push_back(y);
                } else if phi[y] != fy {
                    return None;
                }
            }
        }
        (0..n).all(|a| (0..n).all(|b| phi[self.mul(a, b)] == self.mul(phi[a], phi[b]))).then_some(phi)
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order()];
        span[0] = true;
        for a in 0..self.order() {
            if !span[a] {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Ordinary conjugacy classes, each sorted, listed by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        twisted_orbits(self, &self.identity_map())
    }
}

/// Orbits of `a -> g a phi(g)^-1`, each sorted, listed by smallest element (so the orbit of the
/// identity comes first).
pub fn twisted_orbits(group: &FiniteGroup, phi: &[usize]) -> Vec<Vec<usize>> {
    let n = group.order();
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = vec![start];
        orbit_of[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for (g, &pg) in phi.iter().enumerate().take(n) {
                let b = group.mul(group.mul(g, a), group.inv(pg));
                if orbit_of[b] == usize::MAX {
                    orbit_of[b] = id;
                    members.push(b);
                    queue.push_back(b);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    orbits
}

/// Invariant-factor types of all abelian groups of order at most `max_order`.
pub fn abelian_group_types(max_order: usize) -> Vec<Vec<usize>> {
    fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = vec![];
        for first in (1..=n.min(max)).rev() {
            for mut rest in partitions(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut out = vec![];
    for order in 1..=max_order {
        let mut factor: BTreeMap<usize, u32> = BTreeMap::new();
        let mut m = order;
        let mut p = 2;
        while m > 1 {
            while m % p == 0 {
                *factor.entry(p).or_default() += 1;
                m /= p;
            }
            p += 1;
        }
        // Combine one partition per prime into invariant factors d_1 | d_2 | ...
        let mut types: Vec<Vec<usize>> = vec![vec![]];
        for (&p, &e) in &factor {
            let mut next = vec![];
            for t in &types {
                for part in partitions(e, e) {
                    let len = t.len().max(part.len());
                    let mut merged = vec![1usize; len];
                    // Align largest factors at the end.
                    for (i, x) in t.iter().rev().enumerate() {
                        merged[len - 1 - i] *= x;
                    }
                    for (i, &k) in part.iter().enumerate() {
                        merged[len - 1 - i] *= p.pow(k);
                    }
                    next.push(merged);
                }
            }
            types = next;
        }
        out.extend(types);
    }
    out
}

/// Coordinate vectors of `Z/d_1 x ... x Z/d_k` in element order.
pub fn abelian_elements(moduli: &[usize]) -> Vec<Vec<usize>> {
    let mut elems = vec![vec![]];
    for &d in moduli {
        elems = elems
            .into_iter()
            .flat_map(|e: Vec<usize>| {
                (0..d).map(move |x| {
                    let mut v = e.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    elems
}

pub fn abelian_label(e: &[usize]) -> String {
    match e {
        [] => "0".to_string(),
        [x] => x.to_string(),
        _ => format!("({})", e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// `(a * b)(i) = a(b(i))`.
fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn cycle_label(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![];
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i];
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups() {
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        let q8 = FiniteGroup::quaternion();
        assert_eq!(q8.order(), 8);
        assert!(!q8.is_abelian());
        assert_eq!(q8.conjugacy_classes().len(), 5);
        assert_eq!(FiniteGroup::symmetric(3).conjugacy_classes().len(), 3);
        assert_eq!(FiniteGroup::dihedral(4).conjugacy_classes().len(), 5);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(FiniteGroup::cyclic(8).automorphisms().len(), 4);
        assert_eq!(FiniteGroup::abelian(&[2, 2]).automorphisms().len(), 6);
        assert_eq!(FiniteGroup::abelian(&[2, 4]).automorphisms().len(), 8);
        assert_eq!(FiniteGroup::quaternion().automorphisms().len(), 24);
        assert_eq!(FiniteGroup::symmetric(3).automorphisms().len(), 6);
    }

    #[test]
    fn cyclic_inversion_orbits() {
        let z4 = FiniteGroup::cyclic(4);
        let inv: Vec<usize> = (0..4).map(|a| z4.inv(a)).collect();
        assert!(z4.is_automorphism(&inv));
        assert_eq!(twisted_orbits(&z4, &inv).len(), 2);
        assert_eq!(twisted_orbits(&FiniteGroup::cyclic(2), &[0, 1]).len(), 2);
    }

    #[test]
    fn abelian_types_up_to_sixteen() {
        let types = abelian_group_types(16);
        assert_eq!(types.len(), 25);
        assert!(types.contains(&vec![2, 2, 2, 2]));
        assert!(types.contains(&vec![2, 6]));
        assert!(types.contains(&vec![4, 4]));
        for t in &types {
            assert!(t.windows(2).all(|w| w[1] % w[0] == 0), "{t:?}");
        }
    }

    #[test]
    fn rejects_non_automorphism() {
        let z3 = FiniteGroup::cyclic(3);
        assert!(!z3.is_automorphism(&[0, 1, 1]));
        assert!(!z3.is_automorphism(&[1, 0, 2]));
    }
}

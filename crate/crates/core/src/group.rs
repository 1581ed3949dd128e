//! Finite groups given by multiplication tables, with subgroups, quotients
//! and chains of subgroups.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use once_cell::sync::OnceCell;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on group orders for enumeration-heavy operations.
pub const DEFAULT_ORDER_CAP: usize = 64;

/// A finite group with dense element ids; id 0 is the identity.
pub struct FiniteGroup {
    name: String,
    order: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    exponent: usize,
    labels: Vec<String>,
    cache: GroupCache,
}

#[derive(Default)]
struct GroupCache {
    classes: OnceCell<Vec<Vec<usize>>>,
    class_of: OnceCell<Vec<usize>>,
    subgroups: OnceCell<Vec<Subgroup>>,
    subgroup_groups: Mutex<HashMap<Vec<usize>, Arc<FiniteGroup>>>,
    pub(crate) table: OnceCell<Result<Arc<crate::rep::CharacterTable>>>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            name: self.name.clone(),
            order: self.order,
            mult: self.mult.clone(),
            inv: self.inv.clone(),
            exponent: self.exponent,
            labels: self.labels.clone(),
            cache: GroupCache::default(),
        }
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mult == other.mult
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

/// A subgroup, identified by its strictly sorted element ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup { elements: vec![0] }
    }

    /// Wraps a set of ids already known to form a subgroup.
    pub(crate) fn from_ids(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Subgroup { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }

    /// Position of `g` in the sorted element list, which is its id in the
    /// subgroup viewed as a group.
    pub fn index_of(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }
}

fn lcm_all(values: impl Iterator<Item = usize>) -> usize {
    values.fold(1, |acc, v| acc.lcm(&v))
}

impl FiniteGroup {
    fn from_parts(name: String, order: usize, mult: Vec<usize>, labels: Vec<String>) -> Self {
        let mut inv = vec![0; order];
        for a in 0..order {
            for b in 0..order {
                if mult[a * order + b] == 0 {
                    inv[a] = b;
                    break;
                }
            }
        }
        let mut g = FiniteGroup {
            name,
            order,
            mult,
            inv,
            exponent: 1,
            labels,
            cache: GroupCache::default(),
        };
        g.exponent = lcm_all((0..order).map(|x| g.element_order(x)));
        g
    }

    /// Validates a raw table (row a, column b holds a·b).
    pub fn from_table(name: &str, table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidTable("table is not square".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(Error::InvalidTable(format!("id 0 is not an identity at {g}")));
            }
        }
        let mut seen = vec![0usize; n];
        for (i, row) in table.iter().enumerate() {
            for &x in row {
                if seen[x] == i + 1 {
                    return Err(Error::InvalidTable(format!("row {i} is not a permutation")));
                }
                seen[x] = i + 1;
            }
        }
        let mut seen = vec![0usize; n];
        for c in 0..n {
            for row in table {
                if seen[row[c]] == c + 1 {
                    return Err(Error::InvalidTable(format!("column {c} is not a permutation")));
                }
                seen[row[c]] = c + 1;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mult = table.iter().flatten().copied().collect();
        let labels = (0..n).map(|g| format!("g{g}")).collect();
        Ok(Self::from_parts(name.to_string(), n, mult, labels))
    }

    /// Cyclic group of order n; id k is a^k.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedSpec("cyclic group of order 0".into()));
        }
        let mult = (0..n * n).map(|x| (x / n + x % n) % n).collect();
        let labels = (0..n).map(|k| power_label("a", k)).collect();
        Ok(Self::from_parts(format!("C{n}"), n, mult, labels))
    }

    /// Dihedral group of the given order 2n; id k + n·e is a^k s^e.
    pub fn dihedral(order: usize) -> Result<Self> {
        if order < 2 || order % 2 != 0 {
            return Err(Error::MalformedSpec(format!("dihedral order {order} must be even")));
        }
        let n = order / 2;
        let mut mult = Vec::with_capacity(order * order);
        for x in 0..order {
            let (k, e) = (x % n, x / n);
            for y in 0..order {
                let (l, f) = (y % n, y / n);
                let m = if e == 0 { (k + l) % n } else { (k + n - l) % n };
                mult.push(m + n * ((e + f) % 2));
            }
        }
        let labels = (0..order)
            .map(|x| word_label(&power_label("a", x % n), x / n == 1, "s"))
            .collect();
        Ok(Self::from_parts(format!("D{order}"), order, mult, labels))
    }

    /// Dicyclic group of the given order 4n: a^{2n} = 1, x² = a^n,
    /// x a x⁻¹ = a⁻¹; id k + 2n·e is a^k x^e. Order 8 gives Q8 with
    /// i = a and j = x.
    pub fn dicyclic(order: usize) -> Result<Self> {
        if order < 4 || order % 4 != 0 {
            return Err(Error::MalformedSpec(format!(
                "dicyclic order {order} must be a multiple of 4"
            )));
        }
        let n = order / 4;
        let m = 2 * n;
        let mut mult = Vec::with_capacity(order * order);
        for x in 0..order {
            let (k, e) = (x % m, x / m);
            for y in 0..order {
                let (l, f) = (y % m, y / m);
                let id = match (e, f) {
                    (0, _) => (k + l) % m + m * f,
                    (_, 0) => (k + m - l) % m + m,
                    _ => (k + m - l + n) % m,
                };
                mult.push(id);
            }
        }
        let labels = if order == 8 {
            ["1", "i", "-1", "-i", "j", "k", "-j", "-k"]
                .iter()
                .map(|s| s.to_string())
                .collect()
        } else {
            (0..order)
                .map(|x| word_label(&power_label("a", x % m), x / m == 1, "x"))
                .collect()
        };
        let name = if order.is_power_of_two() {
            format!("Q{order}")
        } else {
            format!("Dic{order}")
        };
        Ok(Self::from_parts(name, order, mult, labels))
    }

    /// A × B with id a·|B| + b.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut mult = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                mult.push(a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb));
            }
        }
        let labels = (0..n)
            .map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb]))
            .collect();
        Self::from_parts(format!("{}x{}", a.name, b.name), n, mult, labels)
    }

    /// N ⋊ H where `action[h]` is the automorphism of N by which h acts
    /// (as a permutation of N's ids). Elements (n, h) have id n·|H| + h and
    /// multiply as (n, h)(n', h') = (n·φ(h)(n'), h h').
    pub fn semidirect_product(
        normal: &FiniteGroup,
        acting: &FiniteGroup,
        action: &[Vec<usize>],
    ) -> Result<Self> {
        let (nn, nh) = (normal.order, acting.order);
        if action.len() != nh {
            return Err(Error::InvalidAction(format!(
                "expected {nh} maps, got {}",
                action.len()
            )));
        }
        for (h, perm) in action.iter().enumerate() {
            if perm.len() != nn {
                return Err(Error::InvalidAction(format!("map {h} has wrong length")));
            }
            let mut seen = vec![false; nn];
            for &x in perm {
                if x >= nn || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidAction(format!("map {h} is not a bijection")));
                }
            }
            for x in 0..nn {
                for y in 0..nn {
                    if perm[normal.mul(x, y)] != normal.mul(perm[x], perm[y]) {
                        return Err(Error::InvalidAction(format!(
                            "map {h} is not a homomorphism"
                        )));
                    }
                }
            }
        }
        for h in 0..nh {
            for k in 0..nh {
                let hk = acting.mul(h, k);
                if (0..nn).any(|x| action[hk][x] != action[h][action[k][x]]) {
                    return Err(Error::InvalidAction(format!(
                        "action is not a homomorphism at ({h}, {k})"
                    )));
                }
            }
        }
        let n = nn * nh;
        let mut mult = Vec::with_capacity(n * n);
        for x in 0..n {
            let (a, h) = (x / nh, x % nh);
            for y in 0..n {
                let (b, k) = (y / nh, y % nh);
                mult.push(normal.mul(a, action[h][b]) * nh + acting.mul(h, k));
            }
        }
        let labels = (0..n)
            .map(|x| format!("({},{})", normal.labels[x / nh], acting.labels[x % nh]))
            .collect();
        Ok(Self::from_parts(
            format!("{}s{}", normal.name, acting.name),
            n,
            mult,
            labels,
        ))
    }

    /// N ⋊ C_k where the generator of C_k acts by the automorphism `auto`.
    pub fn semidirect_cyclic(normal: &FiniteGroup, k: usize, auto: &[usize]) -> Result<Self> {
        let acting = FiniteGroup::cyclic(k)?;
        let mut action = vec![(0..normal.order).collect::<Vec<_>>()];
        for t in 1..k {
            let prev = &action[t - 1];
            action.push(prev.iter().map(|&x| auto[x]).collect());
        }
        Self::semidirect_product(normal, &acting, &action)
    }

    /// Closure of a set of permutations of {0, …, degree−1}. Elements are
    /// ordered by discovery, identity first.
    pub fn from_permutations(name: &str, degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        let identity: Vec<usize> = (0..degree).collect();
        let mut elems = vec![identity];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(elems[0].clone(), 0);
        let mut i = 0;
        while i < elems.len() {
            for g in generators {
                if g.len() != degree {
                    return Err(Error::MalformedSpec("permutation of wrong degree".into()));
                }
                let p: Vec<usize> = (0..degree).map(|x| elems[i][g[x]]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
            if elems.len() > 100_000 {
                return Err(Error::MalformedSpec("permutation group too large".into()));
            }
        }
        let n = elems.len();
        let mut mult = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                // (a·b)(x) = a(b(x))
                let p: Vec<usize> = (0..degree).map(|x| a[b[x]]).collect();
                mult.push(index[&p]);
            }
        }
        let labels = (0..n).map(|g| format!("g{g}")).collect();
        Ok(Self::from_parts(name.to_string(), n, mult, labels))
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = labels;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    /// Looks up an element by label or by decimal id.
    pub fn element_by_label(&self, s: &str) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l == s)
            .or_else(|| s.parse::<usize>().ok().filter(|&g| g < self.order))
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// g x g⁻¹.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv[g])
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mult.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The prime p if the order is a power of p (p-groups of order > 1).
    pub fn prime_power(&self) -> Option<(usize, u32)> {
        prime_power(self.order)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order).collect(),
        }
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut elems = vec![0];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        Subgroup { elements: elems }
    }

    /// Validates an element set as a subgroup.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut e: Vec<usize> = elements.to_vec();
        e.sort_unstable();
        e.dedup();
        if e.iter().any(|&x| x >= self.order) {
            return Err(Error::NotSubgroup("element id out of range".into()));
        }
        if e.first() != Some(&0) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        let s = Subgroup { elements: e };
        for &a in &s.elements {
            for &b in &s.elements {
                if !s.contains(self.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!("not closed at ({a}, {b})")));
                }
            }
        }
        Ok(s)
    }

    /// A small generating set, chosen greedily in id order.
    pub fn generators_of(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = Subgroup::trivial();
        for &g in &h.elements {
            if !cur.contains(g) {
                gens.push(g);
                let mut with = gens.clone();
                with.dedup();
                cur = self.generate(&with);
                if cur.order() == h.order() {
                    break;
                }
            }
        }
        gens
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut e: Vec<usize> = h.elements.iter().map(|&x| self.conj(g, x)).collect();
        e.sort_unstable();
        Subgroup { elements: e }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let gens = self.generators_of(&self.whole());
        gens.iter()
            .all(|&g| h.elements.iter().all(|&x| h.contains(self.conj(g, x))))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let e: Vec<usize> = (0..self.order)
            .filter(|&g| h.elements.iter().all(|&x| h.contains(self.conj(g, x))))
            .collect();
        Subgroup { elements: e }
    }

    /// Product set HK (a subgroup when one of them normalizes the other).
    pub fn product_set(&self, h: &Subgroup, k: &Subgroup) -> Vec<usize> {
        let mut s: BTreeSet<usize> = BTreeSet::new();
        for &a in &h.elements {
            for &b in &k.elements {
                s.insert(self.mul(a, b));
            }
        }
        s.into_iter().collect()
    }

    pub fn join(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let mut gens = self.generators_of(h);
        gens.extend(self.generators_of(k));
        self.generate(&gens)
    }

    pub fn intersection(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        Subgroup {
            elements: h.elements.iter().copied().filter(|&g| k.contains(g)).collect(),
        }
    }

    /// Conjugacy classes ordered by smallest element; the first is {0}.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        self.cache.classes.get_or_init(|| {
            let mut seen = vec![false; self.order];
            let mut classes = Vec::new();
            for x in 0..self.order {
                if seen[x] {
                    continue;
                }
                let mut cls: Vec<usize> = (0..self.order).map(|g| self.conj(g, x)).collect();
                cls.sort_unstable();
                cls.dedup();
                for &y in &cls {
                    seen[y] = true;
                }
                classes.push(cls);
            }
            classes
        })
    }

    /// Index of the conjugacy class of each element.
    pub fn class_of(&self) -> &[usize] {
        self.cache.class_of.get_or_init(|| {
            let mut out = vec![0; self.order];
            for (i, c) in self.conjugacy_classes().iter().enumerate() {
                for &x in c {
                    out[x] = i;
                }
            }
            out
        })
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators_of(&self.whole());
        Subgroup {
            elements: (0..self.order)
                .filter(|&z| gens.iter().all(|&g| self.mul(g, z) == self.mul(z, g)))
                .collect(),
        }
    }

    pub fn commutator_subgroup(&self) -> Subgroup {
        let mut comms = BTreeSet::new();
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(self.mul(a, b), self.mul(self.inv[a], self.inv[b]));
                comms.insert(c);
            }
        }
        let gens: Vec<usize> = comms.into_iter().collect();
        self.generate(&gens)
    }

    /// All subgroups, sorted by order then elements, using the default
    /// order bound.
    pub fn subgroups(&self) -> Result<&[Subgroup]> {
        self.enumerate_subgroups(DEFAULT_ORDER_CAP)
    }

    /// All subgroups by fixpoint closure: start from the cyclic subgroups and
    /// keep adjoining one outside element until nothing new appears.
    pub fn enumerate_subgroups(&self, cap: usize) -> Result<&[Subgroup]> {
        if self.order > cap {
            return Err(Error::OrderBoundExceeded {
                order: self.order,
                cap,
            });
        }
        Ok(self.cache.subgroups.get_or_init(|| {
            let mut cyclic: Vec<(Subgroup, usize)> = Vec::new();
            for g in 0..self.order {
                let c = self.generate(&[g]);
                if !cyclic.iter().any(|(d, _)| d == &c) {
                    cyclic.push((c, g));
                }
            }
            let mut found: HashSet<Subgroup> = cyclic.iter().map(|(c, _)| c.clone()).collect();
            let mut queue: Vec<(Subgroup, Vec<usize>)> =
                cyclic.iter().map(|(c, g)| (c.clone(), vec![*g])).collect();
            while let Some((s, gens)) = queue.pop() {
                for (c, g) in &cyclic {
                    if c.is_subset(&s) {
                        continue;
                    }
                    let mut ng = gens.clone();
                    ng.push(*g);
                    let t = self.generate(&ng);
                    if found.insert(t.clone()) {
                        queue.push((t, ng));
                    }
                }
            }
            let mut all: Vec<Subgroup> = found.into_iter().collect();
            all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
            all
        }))
    }

    pub fn normal_subgroups(&self) -> Result<Vec<Subgroup>> {
        Ok(self
            .subgroups()?
            .iter()
            .filter(|h| self.is_normal(h))
            .cloned()
            .collect())
    }

    /// Maximal subgroups among the proper subgroups.
    pub fn maximal_subgroups(&self) -> Result<Vec<Subgroup>> {
        let subs = self.subgroups()?;
        let proper: Vec<&Subgroup> = subs.iter().filter(|s| s.order() < self.order).collect();
        Ok(proper
            .iter()
            .filter(|s| {
                !proper
                    .iter()
                    .any(|t| t.order() > s.order() && s.is_subset(t))
            })
            .map(|s| (*s).clone())
            .collect())
    }

    /// Left coset representatives, swept greedily in id order; the first is 0.
    pub fn coset_representatives(&self, h: &Subgroup) -> Vec<usize> {
        let mut covered = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &x in &h.elements {
                covered[self.mul(g, x)] = true;
            }
        }
        reps
    }

    /// G/N with the projection map. Cosets are numbered by their smallest
    /// element, so the projection sends 0 to 0.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal(self.name.clone()));
        }
        let reps = self.coset_representatives(n);
        let mut proj = vec![0; self.order];
        for (i, &r) in reps.iter().enumerate() {
            for &x in &n.elements {
                proj[self.mul(r, x)] = i;
            }
        }
        let m = reps.len();
        let mut mult = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                mult.push(proj[self.mul(a, b)]);
            }
        }
        let labels = reps.iter().map(|&r| format!("{}N", self.labels[r])).collect();
        let q = FiniteGroup::from_parts(format!("{}/N{}", self.name, n.order()), m, mult, labels);
        Ok((q, proj))
    }

    /// The subgroup as a group in its own right: element i of the result is
    /// `h.elements()[i]`. Cached per subgroup.
    pub fn subgroup_group(&self, h: &Subgroup) -> Arc<FiniteGroup> {
        let mut cache = self.cache.subgroup_groups.lock().expect("cache poisoned");
        if let Some(g) = cache.get(&h.elements) {
            return g.clone();
        }
        let m = h.order();
        let mut mult = Vec::with_capacity(m * m);
        for &a in &h.elements {
            for &b in &h.elements {
                mult.push(h.index_of(self.mul(a, b)).expect("subgroup is closed"));
            }
        }
        let labels = h.elements.iter().map(|&g| self.labels[g].clone()).collect();
        let g = Arc::new(FiniteGroup::from_parts(
            format!("{}<{}>", self.name, m),
            m,
            mult,
            labels,
        ));
        cache.insert(h.elements.clone(), g.clone());
        g
    }

    /// All maximal chains of normal subgroups e = S_0 ⊂ … ⊂ S_d = G,
    /// optionally constrained to pass through `through`.
    pub fn maximal_normal_chains(&self, through: Option<&Subgroup>) -> Result<Vec<SubgroupChain>> {
        if let Some(t) = through {
            if !self.is_normal(t) {
                return Err(Error::NotNormal(format!(
                    "{} (subgroup of order {})",
                    self.name,
                    t.order()
                )));
            }
        }
        if self.order == 1 {
            return Ok(Vec::new());
        }
        let normals = self.normal_subgroups()?;
        let covers: Vec<Vec<usize>> = normals
            .iter()
            .map(|a| {
                (0..normals.len())
                    .filter(|&j| {
                        let b = &normals[j];
                        b.order() > a.order()
                            && a.is_subset(b)
                            && !normals.iter().any(|c| {
                                c.order() > a.order()
                                    && c.order() < b.order()
                                    && a.is_subset(c)
                                    && c.is_subset(b)
                            })
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut path = vec![0usize];
        self.chain_dfs(&normals, &covers, &mut path, &mut out);
        let chains = out
            .into_iter()
            .filter(|p: &Vec<usize>| through.map_or(true, |t| p.iter().any(|&i| &normals[i] == t)))
            .map(|p| {
                let levels: Vec<Subgroup> = p.iter().map(|&i| normals[i].clone()).collect();
                SubgroupChain::new(self, levels).expect("normal covering chain is valid")
            })
            .collect();
        Ok(chains)
    }

    fn chain_dfs(
        &self,
        normals: &[Subgroup],
        covers: &[Vec<usize>],
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let last = *path.last().expect("nonempty path");
        if normals[last].order() == self.order {
            out.push(path.clone());
            return;
        }
        for &next in &covers[last] {
            path.push(next);
            self.chain_dfs(normals, covers, path, out);
            path.pop();
        }
    }

    pub(crate) fn table_cache(&self) -> &OnceCell<Result<Arc<crate::rep::CharacterTable>>> {
        &self.cache.table
    }
}

fn power_label(base: &str, k: usize) -> String {
    match k {
        0 => "e".to_string(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

fn word_label(head: &str, with_tail: bool, tail: &str) -> String {
    match (head, with_tail) {
        (_, false) => head.to_string(),
        ("e", true) => tail.to_string(),
        (h, true) => format!("{h}{tail}"),
    }
}

/// (p, k) with n = p^k, p prime, k ≥ 1.
pub fn prime_power(n: usize) -> Option<(usize, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

/// A chain of subgroups S_0 ⊆ S_1 ⊆ … ⊆ S_d of a fixed group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupChain {
    levels: Vec<Subgroup>,
    normal: Vec<bool>,
}

impl SubgroupChain {
    /// A strict chain from the trivial subgroup to the whole group.
    pub fn new(g: &FiniteGroup, levels: Vec<Subgroup>) -> Result<Self> {
        let c = Self::new_nonstrict(g, levels)?;
        if c.levels.windows(2).any(|w| w[0].order() == w[1].order()) {
            return Err(Error::MalformedSpec("chain inclusions must be strict".into()));
        }
        Ok(c)
    }

    /// Like [`SubgroupChain::new`] but allowing repeated levels.
    pub fn new_nonstrict(g: &FiniteGroup, levels: Vec<Subgroup>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::MalformedSpec("a chain needs at least two levels".into()));
        }
        if levels[0].order() != 1 {
            return Err(Error::MalformedSpec("chain must start at the trivial subgroup".into()));
        }
        if levels.last().map(Subgroup::order) != Some(g.order()) {
            return Err(Error::MalformedSpec("chain must end at the whole group".into()));
        }
        for l in &levels {
            g.subgroup(l.elements())?;
        }
        if levels.windows(2).any(|w| !w[0].is_subset(&w[1])) {
            return Err(Error::MalformedSpec("chain levels are not nested".into()));
        }
        let normal = levels.iter().map(|l| g.is_normal(l)).collect();
        Ok(SubgroupChain { levels, normal })
    }

    /// Length d (number of inclusions).
    pub fn length(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Subgroup] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &Subgroup {
        &self.levels[i]
    }

    pub fn normal_flags(&self) -> &[bool] {
        &self.normal
    }

    pub fn is_normal_chain(&self) -> bool {
        self.normal.iter().all(|&b| b)
    }

    /// Smallest i with g ∈ S_i.
    pub fn layer_of(&self, g: usize) -> usize {
        self.levels
            .iter()
            .position(|l| l.contains(g))
            .expect("top level is the whole group")
    }

    pub fn to_id_lists(&self) -> Vec<Vec<usize>> {
        self.levels.iter().map(|l| l.elements().to_vec()).collect()
    }
}

/// Serialized multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupFile {
            name: g.name().to_string(),
            order: g.order(),
            table: g.table(),
        }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.table.len() != self.order {
            return Err(Error::InvalidTable(format!(
                "declared order {} but table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        FiniteGroup::from_table(&self.name, &self.table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("group file serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Chain file contents: one element-id array per level.
pub fn chain_to_json(chain: &SubgroupChain) -> String {
    serde_json::to_string(&chain.to_id_lists()).expect("chain serializes")
}

pub fn chain_from_json(g: &FiniteGroup, s: &str) -> Result<SubgroupChain> {
    let lists: Vec<Vec<usize>> = serde_json::from_str(s)?;
    let levels = lists
        .iter()
        .map(|l| g.subgroup(l))
        .collect::<Result<Vec<_>>>()?;
    SubgroupChain::new(g, levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q8() -> FiniteGroup {
        FiniteGroup::dicyclic(8).unwrap()
    }

    fn d8() -> FiniteGroup {
        FiniteGroup::dihedral(8).unwrap()
    }

    #[test]
    fn quaternion_relations() {
        let g = q8();
        let (i, j, k, m1) = (1, 4, 5, 2);
        assert_eq!(g.mul(i, i), m1);
        assert_eq!(g.mul(j, j), m1);
        assert_eq!(g.mul(i, j), k);
        assert_eq!(g.mul(j, i), g.mul(m1, k));
        assert_eq!(g.label(k), "k");
        assert_eq!(g.exponent(), 4);
    }

    #[test]
    fn class_and_subgroup_counts() {
        for g in [q8(), d8()] {
            let mut sizes: Vec<usize> = g.conjugacy_classes().iter().map(Vec::len).collect();
            sizes.sort_unstable();
            assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
            assert_eq!(g.center().order(), 2);
            assert_eq!(g.commutator_subgroup(), g.center());
        }
        assert_eq!(q8().subgroups().unwrap().len(), 6);
        assert_eq!(d8().subgroups().unwrap().len(), 10);
        assert_eq!(FiniteGroup::cyclic(7).unwrap().subgroups().unwrap().len(), 2);
    }

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.conjugacy_classes(), &[vec![0]]);
        assert_eq!(g.table(), vec![vec![0]]);
    }

    #[test]
    fn quotients() {
        let g = q8();
        let (q, proj) = g.quotient(&g.center()).unwrap();
        assert_eq!(q.order(), 4);
        assert!((1..4).all(|x| q.element_order(x) == 2));
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(proj[g.mul(a, b)], q.mul(proj[a], proj[b]));
            }
        }
        let (t, _) = g.quotient(&g.whole()).unwrap();
        assert_eq!(t.order(), 1);
        let d = d8();
        let s = d.generate(&[4]);
        assert!(matches!(d.quotient(&s), Err(Error::NotNormal(_))));
    }

    #[test]
    fn normal_chains() {
        let c4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(c4.maximal_normal_chains(None).unwrap().len(), 1);
        for g in [q8(), d8()] {
            let z = g.center();
            let chains = g.maximal_normal_chains(Some(&z)).unwrap();
            assert_eq!(chains.len(), 3);
            assert!(chains.iter().all(|c| c.length() == 3 && c.level(1) == &z));
        }
    }

    #[test]
    fn cosets() {
        let g = q8();
        let z4j = g.generate(&[4]);
        assert_eq!(g.coset_representatives(&z4j).len(), 2);
        assert_eq!(g.coset_representatives(&g.whole()), vec![0]);
    }

    #[test]
    fn table_validation() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table("bad", &bad).is_err());
        let t = d8().table();
        let g = FiniteGroup::from_table("D8", &t).unwrap();
        assert_eq!(g, d8());
        let file = GroupFile::from_group(&g);
        let back = GroupFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
    }

    #[test]
    fn semidirect_validation() {
        let c5 = FiniteGroup::cyclic(5).unwrap();
        let c4 = FiniteGroup::cyclic(4).unwrap();
        let doubling: Vec<usize> = (0..5).map(|x| 2 * x % 5).collect();
        let f20 = FiniteGroup::semidirect_cyclic(&c5, 4, &doubling).unwrap();
        assert_eq!(f20.order(), 20);
        assert!(!f20.is_abelian());
        let not_auto: Vec<usize> = vec![0, 2, 1, 3, 4];
        let action = vec![(0..5).collect(), not_auto.clone(), (0..5).collect(), not_auto];
        assert!(matches!(
            FiniteGroup::semidirect_product(&c5, &c4, &action),
            Err(Error::InvalidAction(_))
        ));
    }
}

//! Glider representations for group-algebra filtrations.
//!
//! A chain e = G_0 ⊂ G_1 ⊂ … ⊂ G_d inside G, an ambient module Ω over G and a
//! generator a give the levels M_0 = Ω and M_k = KG_{d−k}·a (k ≥ 1), so that
//! M_d = Ka. The zero generator gives the zero glider with every level
//! zero. The body is zero by construction (M_{d+1} = 0); [`Glider::stable_core`]
//! computes the largest G-stable subspace of ∩ M_i for validation.
//!
//! The generalized trace is stored in display orientation: row r belongs to
//! G_{d−r}, column c to M_{d−c}, and entry (r, c) with c ≤ r is the trace on
//! KG_{d−r}·M_{d−c}. For g in layer ℓ (g ∈ G_ℓ − G_{ℓ−1}) the rows of G_i
//! with i < ℓ are zero. The bottom-left entry of χ(e) is dim M_d.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use once_cell::sync::OnceCell;
use serde::Serialize;

use crate::cyclo::CycNumber;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, SubgroupChain};
use crate::hasse::relative_subgroup;
use crate::linalg::{is_zero_vector, CycMatrix, Subspace, Vector};
use crate::par;
use crate::random;
use crate::rep::{character_table, decompose_restriction, LabeledModule, Representation};

pub(crate) fn same_subspace(a: &Subspace, b: &Subspace) -> bool {
    a.dim() == b.dim() && a.contains(b).unwrap_or(false)
}

fn lift_vector(v: &[CycNumber], n: u32) -> Vector {
    v.iter().map(|x| x.lift(n)).collect()
}

/// A glider Ω ⊇ M_1 ⊇ … ⊇ M_d over a chain of subgroups of Ω's group.
#[derive(Clone)]
pub struct Glider {
    ambient: Arc<LabeledModule>,
    chain: Vec<Subgroup>,
    generator: Vector,
    levels: Vec<Subspace>,
    trace: OnceCell<GeneralizedCharacter>,
}

impl fmt::Debug for Glider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Glider(length {}, dims {:?})",
            self.length(),
            self.dimension_vector()
        )
    }
}

impl Glider {
    /// Builds the glider of `a` over a chain whose top is the ambient group.
    pub fn build(chain: &SubgroupChain, ambient: Arc<LabeledModule>, a: Vector) -> Result<Self> {
        if chain.level(chain.length()).order() != ambient.group().order() {
            return Err(Error::Precondition(
                "chain top differs from the ambient group".into(),
            ));
        }
        Self::build_over(chain.levels().to_vec(), ambient, a)
    }

    /// Builds over an arbitrary nested list G_0 = e ⊆ G_1 ⊆ … of subgroups of
    /// the ambient group (the top need not be the whole group).
    pub fn build_over(chain: Vec<Subgroup>, ambient: Arc<LabeledModule>, a: Vector) -> Result<Self> {
        let g = ambient.group();
        if chain.is_empty() || chain[0].order() != 1 {
            return Err(Error::MalformedSpec("chain must start at the trivial group".into()));
        }
        for w in chain.windows(2) {
            if !w[0].is_subset(&w[1]) {
                return Err(Error::NotSubgroup("chain levels are not nested".into()));
            }
        }
        if chain.iter().any(|h| h.elements().iter().any(|&x| x >= g.order())) {
            return Err(Error::NotSubgroup("chain level outside the ambient group".into()));
        }
        if a.len() != ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: ambient.dim(),
                got: a.len(),
            });
        }
        let n = ambient.conductor();
        let a = lift_vector(&a, a.iter().fold(n, |acc, x| num_integer::lcm(acc, x.conductor())));
        let d = chain.len() - 1;
        let dim = ambient.dim();
        let levels: Vec<Subspace> = if is_zero_vector(&a) {
            vec![Subspace::zero(n, dim); d + 1]
        } else {
            (0..=d)
                .map(|k| {
                    if k == 0 {
                        Subspace::full(n, dim)
                    } else {
                        ambient.orbit_span(&chain[d - k], &[a.clone()])
                    }
                })
                .collect()
        };
        let glider = Glider {
            ambient,
            chain,
            generator: a,
            levels,
            trace: OnceCell::new(),
        };
        glider.check_fragment()?;
        glider.check_dimension_bounds()?;
        Ok(glider)
    }

    pub fn ambient(&self) -> &Arc<LabeledModule> {
        &self.ambient
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.ambient.group()
    }

    pub fn chain(&self) -> &[Subgroup] {
        &self.chain
    }

    pub fn length(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn generator(&self) -> &[CycNumber] {
        &self.generator
    }

    /// M_0, …, M_d.
    pub fn levels(&self) -> &[Subspace] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> &Subspace {
        &self.levels[k]
    }

    /// Zero by construction.
    pub fn body(&self) -> Subspace {
        Subspace::zero(self.ambient.conductor(), self.ambient.dim())
    }

    /// Largest subspace of ∩ M_i stable under the chain's top group.
    pub fn stable_core(&self) -> Subspace {
        let mut w = self.levels[self.length()].clone();
        let top = &self.chain[self.length()];
        let gens = self.group().generators_of(top);
        loop {
            let mut next = w.clone();
            for &s in &gens {
                let m = self.ambient.matrix(s);
                let image = Subspace::span(w.conductor(), w.ambient_dim(), &w.basis().iter().map(|b| m.mul_vec(b)).collect::<Vec<_>>());
                next = next.intersect(&image).expect("same ambient");
            }
            if next.dim() == w.dim() {
                return w;
            }
            w = next;
        }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.generator)
    }

    /// Largest e with M_e different from the (zero) body.
    pub fn essential_length(&self) -> usize {
        (0..=self.length())
            .rev()
            .find(|&k| !self.levels[k].is_zero())
            .unwrap_or(0)
    }

    /// (dim M_d, …, dim M_0).
    pub fn dimension_vector(&self) -> Vec<usize> {
        self.levels.iter().rev().map(Subspace::dim).collect()
    }

    /// KG_i·M_j as a subspace.
    pub fn module_span(&self, i: usize, j: usize) -> Subspace {
        let m = &self.levels[j];
        if m.is_zero() {
            return m.clone();
        }
        self.ambient.orbit_span(&self.chain[i], m.basis())
    }

    /// KG_j·M_i ⊆ M_{i−j} for all j ≤ i, checked on basis vectors and the
    /// generators of each G_j.
    pub fn check_fragment(&self) -> Result<()> {
        let d = self.length();
        for j in 0..=d {
            let gens = self.group().generators_of(&self.chain[j]);
            for i in j..=d {
                let target = &self.levels[i - j];
                for &s in &gens {
                    for b in self.levels[i].basis() {
                        if !target.contains_vector(&self.ambient.act(s, b)) {
                            return Err(Error::NotInvariant);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// dim KG·a ≤ [G:G_i]·dim M_{d−i} for every i, with the top group of the
    /// chain in place of G; for irreducible gliders also dim M_0 ≤ the same
    /// bound.
    pub fn check_dimension_bounds(&self) -> Result<()> {
        if self.is_zero() {
            return Ok(());
        }
        let d = self.length();
        let top = self.chain[d].order();
        let whole = self.module_span(d, d);
        let irreducible = same_subspace(&whole, &self.levels[0]);
        for i in 0..=d {
            let bound = (top / self.chain[i].order()) * self.levels[d - i].dim();
            if whole.dim() > bound || (irreducible && self.levels[0].dim() > bound) {
                return Err(Error::Precondition(format!(
                    "dimension bound violated at level {i}"
                )));
            }
        }
        Ok(())
    }

    /// Layer of g: the least i with g ∈ G_i, or None when g is outside the
    /// chain's top.
    pub fn layer_of(&self, g: usize) -> Option<usize> {
        self.chain.iter().position(|h| h.contains(g))
    }

    /// The generalized trace; requires essential length equal to the chain
    /// length (true for every nonzero generator).
    pub fn generalized_character(&self) -> Result<&GeneralizedCharacter> {
        self.trace.get_or_try_init(|| generalized_trace(self))
    }

    /// χ(e) in display orientation: the dimensions of the KG_i·M_j.
    pub fn dimension_matrix(&self) -> Vec<Vec<usize>> {
        let d = self.length();
        let mut out = vec![vec![0; d + 1]; d + 1];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate().take(r + 1) {
                *x = self.module_span(d - r, d - c).dim();
            }
        }
        out
    }

    /// Whether χ(e) is symmetric about the anti-diagonal with a 1 in the
    /// bottom-left corner.
    pub fn anti_diagonal_test(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let d = self.length();
        let m = self.dimension_matrix();
        if m[d][0] != 1 {
            return false;
        }
        (0..=d).all(|r| (0..=r).all(|c| m[r][c] == m[d - c][d - r]))
    }

    /// Irreducibility of the glider checked directly: KH·a = Ω for the top H
    /// of the chain, plus KG_i·M_i = KG_{d−i}·M_{d−i} for every i.
    pub fn is_irreducible(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.levels_balanced()
    }

    /// KG_i·M_i = KG_{d−i}·M_{d−i} for all i (each pair compared once).
    fn levels_balanced(&self) -> bool {
        let d = self.length();
        (0..=d / 2)
            .filter(|&i| i != d - i)
            .all(|i| same_subspace(&self.module_span(i, i), &self.module_span(d - i, d - i)))
    }

    /// The tail criterion on the multiplicity structure of Ω, followed by
    /// the level equalities. Requires the chain to end at the ambient group.
    pub fn is_irreducible_certified(&self) -> Result<bool> {
        if self.is_zero() {
            return Ok(false);
        }
        let d = self.length();
        if self.chain[d].order() != self.group().order() {
            return Err(Error::Precondition(
                "the tail criterion needs a chain ending at the ambient group".into(),
            ));
        }
        if !is_irreducible_tail(&self.ambient, &self.generator)?.irreducible {
            return Ok(false);
        }
        Ok(self.levels_balanced())
    }

    /// The same Ω and generator over a chain contained levelwise in this one.
    pub fn restrict(&self, sub_chain: &[Subgroup]) -> Result<Glider> {
        if sub_chain.len() != self.chain.len() {
            return Err(Error::Precondition("sub-chain has a different length".into()));
        }
        if sub_chain.iter().zip(&self.chain).any(|(h, g)| !h.is_subset(g)) {
            return Err(Error::NotSubgroup("sub-chain not contained levelwise".into()));
        }
        Glider::build_over(sub_chain.to_vec(), self.ambient.clone(), self.generator.clone())
    }
}

/// Outcome of the tail criterion: Ω ⊇ KG·a is irreducible iff every
/// isotypic part V^m has m ≤ deg V and its component vectors have rank m.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailCertificate {
    pub irreducible: bool,
    /// (first component of the failing isotypic part, multiplicity, degree, rank)
    pub failing: Option<(usize, usize, usize, usize)>,
}

/// Tail criterion for Ω = ⊕ V_i^{m_i} and a ∈ Ω.
pub fn is_irreducible_tail(ambient: &LabeledModule, a: &[CycNumber]) -> Result<TailCertificate> {
    if a.len() != ambient.dim() {
        return Err(Error::DimensionMismatch {
            expected: ambient.dim(),
            got: a.len(),
        });
    }
    for (rep_idx, blocks) in ambient.isotypic_groups() {
        let model = &ambient.components()[rep_idx].0;
        if blocks
            .iter()
            .any(|b| ambient.components()[b.component].0.matrices() != model.matrices())
        {
            return Err(Error::Precondition(
                "isomorphic components with different matrix models".into(),
            ));
        }
        let degree = model.degree();
        let m = blocks.len();
        let rows: Vec<Vector> = blocks
            .iter()
            .map(|b| a[b.offset..b.offset + b.degree].to_vec())
            .collect();
        let rank = Subspace::span(ambient.conductor(), degree, &rows).dim();
        if m > degree || rank < m {
            return Ok(TailCertificate {
                irreducible: false,
                failing: Some((rep_idx, m, degree, rank)),
            });
        }
    }
    Ok(TailCertificate {
        irreducible: true,
        failing: None,
    })
}

/// Restriction of a labeled module to a subgroup H, re-split into the
/// irreducibles of H's table. Returns the new module (over H viewed as a
/// group) and the change of coordinates P with new = P·old.
pub fn restrict_module(ambient: &LabeledModule, h: &Subgroup) -> Result<(LabeledModule, CycMatrix)> {
    let g = ambient.group();
    let sub = g.subgroup_group(h);
    let table = character_table(&sub)?;
    let dim = ambient.dim();
    let mut columns: Vec<Vector> = Vec::new();
    let mut comps: Vec<(Arc<Representation>, usize)> = Vec::new();
    for b in ambient.blocks() {
        let rep = &ambient.components()[b.component].0;
        for s in decompose_restriction(rep, h)? {
            for v in &s.basis {
                let mut col = vec![CycNumber::zero(1); dim];
                for (t, x) in v.iter().enumerate() {
                    col[b.offset + t] = x.clone();
                }
                columns.push(col);
            }
            comps.push((Arc::new(table.irreps()[s.irrep].clone()), 1));
        }
    }
    let n = columns
        .iter()
        .flatten()
        .fold(ambient.conductor(), |acc, x| num_integer::lcm(acc, x.conductor()));
    let columns: Vec<Vector> = columns.iter().map(|c| lift_vector(c, n)).collect();
    let basis = CycMatrix::from_rows(n, dim, &columns).transpose();
    let p = basis.inverse()?;
    Ok((LabeledModule::new(sub, comps)?, p))
}

/// The generalized trace χ_M, one matrix per element of the chain's top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedCharacter {
    length: usize,
    /// Elements of the top group, ascending ids of the ambient group.
    elements: Vec<usize>,
    layers: Vec<usize>,
    matrices: Vec<CycMatrix>,
}

impl GeneralizedCharacter {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// Matrix of an element of the chain's top (ambient id).
    pub fn at(&self, g: usize) -> Option<&CycMatrix> {
        self.elements.binary_search(&g).ok().map(|i| &self.matrices[i])
    }

    pub fn layer(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok().map(|i| self.layers[i])
    }

    /// Rows of the display that carry data for the layer (the others are
    /// zero by definition).
    pub fn populated_rows(&self, layer: usize) -> std::ops::RangeInclusive<usize> {
        0..=(self.length - layer)
    }
}

/// Computes χ_M(g) for every g in the chain's top.
pub fn generalized_trace(glider: &Glider) -> Result<GeneralizedCharacter> {
    let d = glider.length();
    if glider.is_zero() || glider.essential_length() != d {
        return Err(Error::Precondition(
            "generalized trace needs essential length equal to the chain length".into(),
        ));
    }
    // spans[i][j] = KG_i·M_j for j ≥ i
    let spans: Vec<Vec<Option<Subspace>>> = (0..=d)
        .map(|i| {
            (0..=d)
                .map(|j| (j >= i).then(|| glider.module_span(i, j)))
                .collect()
        })
        .collect();
    let top = glider.chain[d].clone();
    let n = glider.ambient.conductor();
    let items: Vec<usize> = top.elements().to_vec();
    let results = par::try_map(&items, |&g| -> Result<(usize, CycMatrix)> {
        let layer = glider.layer_of(g).expect("element of the top");
        let op = glider.ambient.matrix(g);
        let mut m = CycMatrix::zeros(n, d + 1, d + 1);
        for r in 0..=(d - layer) {
            for c in 0..=r {
                let w = spans[d - r][d - c].as_ref().expect("j ≥ i");
                let t = w.trace_of(&op)?;
                m.set(r, c, t.lift(n));
            }
        }
        Ok((layer, m))
    })?;
    let (layers, matrices) = results.into_iter().unzip();
    Ok(GeneralizedCharacter {
        length: d,
        elements: items,
        layers,
        matrices,
    })
}

/// Elements of G_ℓ − G_{ℓ−1} grouped into G_ℓ-conjugacy classes, for every
/// layer ℓ; ordered by layer, then by smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerClass {
    pub layer: usize,
    pub elements: Vec<usize>,
}

pub fn layer_classes(g: &FiniteGroup, chain: &[Subgroup]) -> Vec<LayerClass> {
    let mut out = Vec::new();
    for (l, h) in chain.iter().enumerate() {
        let mut seen: Vec<bool> = vec![false; g.order()];
        for &x in h.elements() {
            if seen[x] || (l > 0 && chain[l - 1].contains(x)) || (l == 0 && x != 0) {
                continue;
            }
            let mut class: Vec<usize> = h.elements().iter().map(|&y| g.conj(y, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            out.push(LayerClass {
                layer: l,
                elements: class,
            });
        }
    }
    out
}

/// Vectors adapted to the chain: the basis vectors of
/// the G_1-irreducible pieces obtained by splitting `rep` successively along
/// G_{d−1}, …, G_1 (all levels given as subgroups of the ambient group).
pub fn chain_adapted_vectors(rep: &Representation, chain: &[Subgroup]) -> Result<Vec<Vector>> {
    let d = chain.len() - 1;
    let n = rep.degree();
    let basis: Vec<Vector> = CycMatrix::identity(rep.conductor(), n).row_vectors();
    let mut out = Vec::new();
    split_down(rep, chain, d, &basis, &mut out)?;
    Ok(out)
}

fn split_down(
    sigma: &Representation,
    chain: &[Subgroup],
    k: usize,
    basis: &[Vector],
    out: &mut Vec<Vector>,
) -> Result<()> {
    if k <= 1 {
        out.extend(basis.iter().cloned());
        return Ok(());
    }
    let lower = relative_subgroup(&chain[k], &chain[k - 1]);
    let table = character_table(&sigma.group().subgroup_group(&lower))?;
    for s in decompose_restriction(sigma, &lower)? {
        let mapped: Vec<Vector> = s
            .basis
            .iter()
            .map(|v| combine(v, basis))
            .collect();
        split_down(&table.irreps()[s.irrep], chain, k - 1, &mapped, out)?;
    }
    Ok(())
}

fn combine(coeffs: &[CycNumber], basis: &[Vector]) -> Vector {
    let n = coeffs
        .iter()
        .chain(basis.iter().flatten())
        .fold(1, |acc, x| num_integer::lcm(acc, x.conductor()));
    let dim = basis[0].len();
    let mut out = vec![CycNumber::zero(n); dim];
    for (c, b) in coeffs.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o += &(c * x);
        }
    }
    out
}

/// Enumerates irreducible gliders with an irreducible ambient: for every
/// irreducible U of the top group, the chain-adapted vectors and one seeded
/// generic vector serve as generators; gliders with equal generalized
/// characters are merged (first one kept).
pub fn enumerate_gliders(
    g: &Arc<FiniteGroup>,
    chain: &SubgroupChain,
    filter: Option<&[usize]>,
    seed: u64,
) -> Result<Vec<Glider>> {
    let table = character_table(g)?;
    let mut jobs: Vec<(Arc<LabeledModule>, Vector)> = Vec::new();
    for (idx, u) in table.irreps().iter().enumerate() {
        let module = Arc::new(LabeledModule::irreducible(Arc::new(u.clone())));
        let mut rng = random::rng(seed.wrapping_add(idx as u64));
        let mut gens = chain_adapted_vectors(u, chain.levels())?;
        gens.push(generic_generator(chain, &module, &mut rng)?);
        for a in gens {
            jobs.push((module.clone(), a));
        }
    }
    let built = par::try_map(&jobs, |(m, a)| -> Result<Glider> {
        let glider = Glider::build(chain, m.clone(), a.clone())?;
        glider.generalized_character()?;
        Ok(glider)
    })?;
    let mut out: Vec<Glider> = Vec::new();
    for glider in built {
        let chi = glider.generalized_character()?;
        let dup = out.iter().any(|o| {
            Arc::ptr_eq(o.ambient(), glider.ambient())
                && o.generalized_character().map(|c| c == chi).unwrap_or(false)
        });
        if dup {
            continue;
        }
        if let Some(f) = filter {
            if glider.dimension_vector() != f {
                continue;
            }
        }
        out.push(glider);
    }
    Ok(out)
}

/// Number of seeded candidates tried for a generic generator.
pub const GENERIC_TRIES: usize = 8;

/// A seeded vector of full support whose levels have the largest total
/// dimension among [`GENERIC_TRIES`] candidates (first one wins ties).
pub fn generic_generator(
    chain: &SubgroupChain,
    module: &Arc<LabeledModule>,
    rng: &mut impl rand::Rng,
) -> Result<Vector> {
    let mut best: Option<(usize, Vector)> = None;
    for _ in 0..GENERIC_TRIES {
        let a = random::random_full_support(rng, module.conductor(), module.dim());
        let size: usize = chain
            .levels()
            .iter()
            .map(|h| module.orbit_span(h, &[a.clone()]).dim())
            .sum();
        if best.as_ref().map_or(true, |(s, _)| size > *s) {
            best = Some((size, a));
        }
    }
    Ok(best.expect("at least one try").1)
}

/// A wider family used to exercise both answers of the irreducibility
/// tests: the enumerated irreducible ambients, plus Ω = V ⊕ V′ for every
/// pair of irreducibles (repetition allowed) with generators (v, v′),
/// (v, 2v) and a seeded generic vector, v and v′ running over chain-adapted
/// vectors.
pub fn extended_glider_family(g: &Arc<FiniteGroup>, chain: &SubgroupChain, seed: u64) -> Result<Vec<Glider>> {
    let table = character_table(g)?;
    let irreps: Vec<Arc<Representation>> = table.irreps().iter().cloned().map(Arc::new).collect();
    let adapted: Vec<Vec<Vector>> = irreps
        .iter()
        .map(|u| chain_adapted_vectors(u, chain.levels()))
        .collect::<Result<_>>()?;
    let mut jobs: Vec<(Arc<LabeledModule>, Vector)> = Vec::new();
    let mut rng = random::rng(seed);
    for (i, u) in irreps.iter().enumerate() {
        let m = Arc::new(LabeledModule::irreducible(u.clone()));
        for v in &adapted[i] {
            jobs.push((m.clone(), v.clone()));
        }
        jobs.push((m.clone(), generic_generator(chain, &m, &mut rng)?));
        for (j, w) in irreps.iter().enumerate().skip(i) {
            let comps = if i == j {
                vec![(u.clone(), 2)]
            } else {
                vec![(u.clone(), 1), (w.clone(), 1)]
            };
            let m = Arc::new(LabeledModule::new(g.clone(), comps)?);
            let c = m.conductor();
            let two = CycNumber::from_i64(c, 2);
            let v = &adapted[i][0];
            let concat = |x: &Vector, y: &Vector| -> Vector {
                x.iter().chain(y.iter()).map(|t| t.lift(c)).collect()
            };
            jobs.push((m.clone(), concat(v, &adapted[j][adapted[j].len() - 1])));
            if i == j {
                let scaled: Vector = v.iter().map(|x| &two * &x.lift(c)).collect();
                jobs.push((m.clone(), concat(v, &scaled)));
            }
            jobs.push((m.clone(), generic_generator(chain, &m, &mut rng)?));
        }
    }
    par::try_map(&jobs, |(m, a)| Glider::build(chain, m.clone(), a.clone()))
}

/// Comparison key for values from possibly different cyclotomic fields.
fn value_key(x: &CycNumber, n: u32) -> (u8, u32, String) {
    x.lift(n).sort_key()
}

fn matrix_key(m: &CycMatrix, n: u32) -> Vec<(u8, u32, String)> {
    (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .map(|(r, c)| value_key(m.get(r, c), n))
        .collect()
}

type LayerSignature = Vec<Vec<(u8, u32, String)>>;

/// Per layer, the multiset over gliders of the multiset of matrices on the
/// layer's elements.
fn layer_signatures(gliders: &[Glider], d: usize, n: u32) -> Result<Vec<LayerSignature>> {
    let mut out: Vec<LayerSignature> = vec![Vec::new(); d + 1];
    for glider in gliders {
        let chi = glider.generalized_character()?;
        let mut per_layer: Vec<Vec<Vec<(u8, u32, String)>>> = vec![Vec::new(); d + 1];
        for k in 0..chi.elements().len() {
            per_layer[chi.layers[k]].push(matrix_key(&chi.matrices[k], n));
        }
        for (l, mut keys) in per_layer.into_iter().enumerate() {
            keys.sort();
            out[l].push(keys.into_iter().flatten().collect());
        }
    }
    for sig in &mut out {
        sig.sort();
    }
    Ok(out)
}

/// Result of comparing the generalized tables of two chains.
#[derive(Clone, Debug, Serialize)]
pub struct DistinguishReport {
    pub distinguishable: bool,
    /// Layers whose multisets of generalized character values differ.
    pub differing_layers: Vec<usize>,
    /// Distinct character values met on the middle level (G_{d−1}) elements
    /// outside G_{d−2}, per chain.
    pub middle_values: [Vec<String>; 2],
    /// Whether a primitive 4th root of unity occurs among those values.
    pub order_four_values: [bool; 2],
    pub glider_counts: [usize; 2],
}

impl fmt::Display for DistinguishReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.distinguishable {
            writeln!(f, "distinguished")?;
            writeln!(f, "differing layers: {:?}", self.differing_layers)?;
        } else {
            writeln!(f, "indistinguishable")?;
        }
        for k in 0..2 {
            writeln!(
                f,
                "chain {}: {} gliders; middle-level values {{{}}}; order-4 values {}",
                ["A", "B"][k],
                self.glider_counts[k],
                self.middle_values[k].join(", "),
                if self.order_four_values[k] { "present" } else { "absent" }
            )?;
        }
        Ok(())
    }
}

fn middle_values(gliders: &[Glider], d: usize) -> Result<(Vec<String>, bool)> {
    let layer = d.saturating_sub(1);
    let mut values: BTreeMap<(u8, u32, String), CycNumber> = BTreeMap::new();
    for glider in gliders {
        let chi = glider.generalized_character()?;
        for (k, m) in chi.matrices.iter().enumerate() {
            if chi.layers[k] != layer {
                continue;
            }
            for r in chi.populated_rows(layer) {
                for c in 0..=r {
                    let x = m.get(r, c).clone();
                    values.insert(x.sort_key(), x);
                }
            }
        }
    }
    let four = values.values().any(|x| {
        x.root_of_unity_exponent()
            .map(|e| {
                let n = x.conductor();
                let order = n / num_integer::gcd(n, e);
                order == 4
            })
            .unwrap_or(false)
    });
    let shown = values.values().map(|x| x.to_string()).collect();
    Ok((shown, four))
}

/// Compares the glider enumerations of two chains of equal length.
pub fn distinguish_chains(
    a: (&Arc<FiniteGroup>, &SubgroupChain),
    b: (&Arc<FiniteGroup>, &SubgroupChain),
    seed: u64,
) -> Result<DistinguishReport> {
    let d = a.1.length();
    if b.1.length() != d {
        return Err(Error::Precondition(format!(
            "chain lengths differ: {} and {}",
            d,
            b.1.length()
        )));
    }
    let ga = enumerate_gliders(a.0, a.1, None, seed)?;
    let gb = enumerate_gliders(b.0, b.1, None, seed)?;
    let n = num_integer::lcm(
        ga.iter().map(|x| x.ambient().conductor()).fold(1, num_integer::lcm),
        gb.iter().map(|x| x.ambient().conductor()).fold(1, num_integer::lcm),
    );
    let sa = layer_signatures(&ga, d, n)?;
    let sb = layer_signatures(&gb, d, n)?;
    let differing_layers: Vec<usize> = (0..=d).filter(|&l| sa[l] != sb[l]).collect();
    let (va, fa) = middle_values(&ga, d)?;
    let (vb, fb) = middle_values(&gb, d)?;
    Ok(DistinguishReport {
        distinguishable: !differing_layers.is_empty() || ga.len() != gb.len(),
        differing_layers,
        middle_values: [va, vb],
        order_four_values: [fa, fb],
        glider_counts: [ga.len(), gb.len()],
    })
}

fn matrix_text(m: &CycMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let vals: Vec<String> = (0..=r).map(|c| m.get(r, c).to_string()).collect();
            format!("[{}]", vals.join("; "))
        })
        .collect();
    rows.join(" ")
}

/// CSV of the generalized character table: one row per glider and layer
/// class, the matrix written row by row (lower triangle).
pub fn generalized_table_csv(gliders: &[Glider], labels: &dyn Fn(&Glider) -> String) -> Result<String> {
    let mut out = String::from("glider,ambient,generator,dimension_vector,layer,class,class_size,matrix\n");
    for (k, glider) in gliders.iter().enumerate() {
        let chi = glider.generalized_character()?;
        let g = glider.group();
        let gen: Vec<String> = glider.generator().iter().map(|x| x.to_string()).collect();
        let dims: Vec<String> = glider.dimension_vector().iter().map(|x| x.to_string()).collect();
        for class in layer_classes(g, glider.chain()) {
            let rep = class.elements[0];
            let m = chi.at(rep).expect("element of the chain's top");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                k + 1,
                crate::rep::csv_field(&labels(glider)),
                crate::rep::csv_field(&gen.join("; ")),
                crate::rep::csv_field(&format!("({})", dims.join(","))),
                class.layer,
                crate::rep::csv_field(g.label(rep)),
                class.elements.len(),
                crate::rep::csv_field(&matrix_text(m)),
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{build_named, parse_chain};

    fn q8_chain() -> (Arc<FiniteGroup>, SubgroupChain) {
        let g = Arc::new(build_named("Q8", 64).unwrap());
        let c = parse_chain(&g, "Z2,Z4j").unwrap();
        (g, c)
    }

    #[test]
    fn quaternion_gliders_over_u() {
        let (g, c) = q8_chain();
        let found = enumerate_gliders(&g, &c, Some(&[1, 1, 1, 2]), 0).unwrap();
        assert_eq!(found.len(), 2);
        assert!(found.iter().all(|x| x.ambient().dim() == 2 && x.is_irreducible()));
    }

    #[test]
    fn zero_glider() {
        let (g, c) = q8_chain();
        let u = character_table(&g).unwrap().irreps()[4].clone();
        let m = Arc::new(LabeledModule::irreducible(Arc::new(u)));
        let z = Glider::build(&c, m, vec![CycNumber::zero(4); 2]).unwrap();
        assert_eq!(z.essential_length(), 0);
        assert!(z.levels().iter().all(Subspace::is_zero));
        assert!(!z.anti_diagonal_test());
    }
}

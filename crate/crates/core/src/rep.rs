//! Matrix representations, characters, and monomial character tables.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::CycNumber;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::{is_zero_vector, CycMatrix, SpanBuilder, Subspace, Vector};

fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    std::ptr::eq(a, b) || a == b
}

fn conductor_of(g: &FiniteGroup) -> u32 {
    g.exponent() as u32
}

/// An explicit matrix representation ρ: G → GL_n(Q(ζ_N)).
#[derive(Clone)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    degree: usize,
    conductor: u32,
    matrices: Vec<CycMatrix>,
    label: String,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Representation({} of {}, degree {})",
            self.label,
            self.group.name(),
            self.degree
        )
    }
}

impl Representation {
    /// Validates ρ(0) = I and ρ(gs) = ρ(g)ρ(s) for every g and every
    /// generator s, which forces ρ to be a homomorphism.
    pub fn new(group: Arc<FiniteGroup>, matrices: Vec<CycMatrix>, label: &str) -> Result<Self> {
        let rep = Self::new_unchecked(group, matrices, label);
        rep.validate()?;
        Ok(rep)
    }

    fn new_unchecked(group: Arc<FiniteGroup>, matrices: Vec<CycMatrix>, label: &str) -> Self {
        assert_eq!(matrices.len(), group.order(), "one matrix per element");
        let degree = matrices[0].rows();
        let conductor = matrices
            .iter()
            .fold(conductor_of(&group), |acc, m| num_integer::lcm(acc, m.conductor()));
        let matrices = matrices.into_iter().map(|m| m.lift(conductor)).collect();
        Representation {
            group,
            degree,
            conductor,
            matrices,
            label: label.to_string(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.matrices.iter().any(|m| m.rows() != self.degree || m.cols() != self.degree) {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                got: self.matrices.iter().map(CycMatrix::rows).max().unwrap_or(0),
            });
        }
        if !self.matrices[0].is_identity() {
            return Err(Error::Precondition("identity must act trivially".into()));
        }
        let gens = self.group.generators_of(&self.group.whole());
        for g in 0..self.group.order() {
            for &s in &gens {
                let lhs = &self.matrices[self.group.mul(g, s)];
                if *lhs != self.matrices[g].mul(&self.matrices[s]) {
                    return Err(Error::Precondition(format!(
                        "matrices are not multiplicative at ({g}, {s})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Degree-1 representation g ↦ ζ_N^{exps[g]}.
    pub fn from_exponents(group: Arc<FiniteGroup>, conductor: u32, exps: &[u32], label: &str) -> Self {
        let matrices = exps
            .iter()
            .map(|&e| {
                CycMatrix::from_fn(conductor, 1, 1, |_, _| {
                    CycNumber::root_of_unity(conductor, e as i64)
                })
            })
            .collect();
        Self::new_unchecked(group, matrices, label)
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let n = conductor_of(&group);
        let exps = vec![0; group.order()];
        Self::from_exponents(group, n, &exps, "trivial")
    }

    /// The left regular representation.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let c = conductor_of(&group);
        let matrices = (0..n)
            .map(|g| {
                let mut m = CycMatrix::zeros(c, n, n);
                for x in 0..n {
                    m.set(group.mul(g, x), x, CycNumber::one(c));
                }
                m
            })
            .collect();
        Self::new_unchecked(group, matrices, "regular")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn matrix(&self, g: usize) -> &CycMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CycMatrix] {
        &self.matrices
    }

    pub fn act(&self, g: usize, v: &[CycNumber]) -> Vector {
        self.matrices[g].mul_vec(v)
    }

    pub fn character(&self) -> CharacterVector {
        let values = self
            .group
            .conjugacy_classes()
            .iter()
            .map(|c| self.matrices[c[0]].trace())
            .collect();
        CharacterVector::new(self.group.clone(), values)
    }

    pub fn is_irreducible(&self) -> bool {
        let chi = self.character();
        chi.norm_squared().is_one()
    }

    /// Restriction to a subgroup, as a representation of the subgroup viewed
    /// as a group (element i ↦ ρ(h.elements()[i])).
    pub fn restrict(&self, h: &Subgroup) -> Representation {
        let sub = self.group.subgroup_group(h);
        let matrices = h.elements().iter().map(|&g| self.matrices[g].clone()).collect();
        Self::new_unchecked(sub, matrices, &format!("{}|H", self.label))
    }

    /// Multiplicities of the irreducibles of H in the restriction, in the
    /// order of H's character table.
    pub fn multiplicities(&self, h: &Subgroup) -> Result<Vec<usize>> {
        let res = self.restrict(h).character();
        let table = character_table(res.group())?;
        table
            .characters()
            .iter()
            .map(|psi| res.multiplicity_of(psi))
            .collect()
    }

    /// Induction from a subgroup H of `parent` (self is a representation of
    /// the group `parent.subgroup_group(h)`).
    pub fn induce(&self, parent: &Arc<FiniteGroup>, h: &Subgroup) -> Result<Representation> {
        let sub = parent.subgroup_group(h);
        if !same_group(&sub, &self.group) {
            return Err(Error::NotSubgroup(
                "representation is not over the given subgroup".into(),
            ));
        }
        let reps = parent.coset_representatives(h);
        let m = reps.len();
        let n = self.degree;
        let conductor = num_integer::lcm(conductor_of(parent), self.conductor);
        let matrices = (0..parent.order())
            .map(|g| {
                let mut out = CycMatrix::zeros(conductor, m * n, m * n);
                for (j, &tj) in reps.iter().enumerate() {
                    let gt = parent.mul(g, tj);
                    for (i, &ti) in reps.iter().enumerate() {
                        let x = parent.mul(parent.inv(ti), gt);
                        if let Some(k) = h.index_of(x) {
                            let block = &self.matrices[k];
                            for r in 0..n {
                                for c in 0..n {
                                    let v = block.get(r, c);
                                    if !v.is_zero() {
                                        out.set(i * n + r, j * n + c, v.clone());
                                    }
                                }
                            }
                            break;
                        }
                    }
                }
                out
            })
            .collect();
        Ok(Self::new_unchecked(
            parent.clone(),
            matrices,
            &format!("Ind({})", self.label),
        ))
    }

    /// Representation of A × B (ids a·|B| + b) by Kronecker products.
    pub fn tensor(&self, other: &Representation, product: Arc<FiniteGroup>) -> Result<Representation> {
        let (na, nb) = (self.group.order(), other.group.order());
        if product.order() != na * nb {
            return Err(Error::DimensionMismatch {
                expected: na * nb,
                got: product.order(),
            });
        }
        let matrices = (0..na * nb)
            .map(|x| self.matrices[x / nb].kron(&other.matrices[x % nb]))
            .collect();
        Ok(Self::new_unchecked(
            product,
            matrices,
            &format!("{}⊗{}", self.label, other.label),
        ))
    }

    /// Direct sum with block-diagonal matrices.
    pub fn direct_sum(parts: &[&Representation], label: &str) -> Result<Representation> {
        let group = parts
            .first()
            .ok_or_else(|| Error::Precondition("empty direct sum".into()))?
            .group
            .clone();
        if parts.iter().any(|p| !same_group(&p.group, &group)) {
            return Err(Error::Precondition("summands over different groups".into()));
        }
        let c = conductor_of(&group);
        let matrices = (0..group.order())
            .map(|g| {
                let blocks: Vec<&CycMatrix> = parts.iter().map(|p| &p.matrices[g]).collect();
                CycMatrix::block_diagonal(c, &blocks)
            })
            .collect();
        Ok(Self::new_unchecked(group, matrices, label))
    }
}

/// A class function, stored as one value per conjugacy class.
#[derive(Clone)]
pub struct CharacterVector {
    group: Arc<FiniteGroup>,
    values: Vec<CycNumber>,
}

impl fmt::Debug for CharacterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "Character[{}]", vals.join(", "))
    }
}

impl PartialEq for CharacterVector {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.values == other.values
    }
}

impl Eq for CharacterVector {}

impl CharacterVector {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<CycNumber>) -> Self {
        assert_eq!(values.len(), group.conjugacy_classes().len());
        let n = conductor_of(&group);
        let n = values.iter().fold(n, |acc, v| num_integer::lcm(acc, v.conductor()));
        let values = values.into_iter().map(|v| v.lift(n)).collect();
        CharacterVector { group, values }
    }

    /// Builds a class function from per-element values (must be constant on
    /// classes).
    pub fn from_element_values(group: Arc<FiniteGroup>, per_element: &[CycNumber]) -> Self {
        let values = group
            .conjugacy_classes()
            .iter()
            .map(|c| per_element[c[0]].clone())
            .collect();
        Self::new(group, values)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[CycNumber] {
        &self.values
    }

    pub fn value_at(&self, g: usize) -> &CycNumber {
        &self.values[self.group.class_of()[g]]
    }

    pub fn degree(&self) -> usize {
        self.values[0]
            .to_i64()
            .and_then(|d| usize::try_from(d).ok())
            .expect("character degree is a non-negative integer")
    }

    pub fn add(&self, other: &CharacterVector) -> CharacterVector {
        assert!(same_group(&self.group, &other.group));
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Self::new(self.group.clone(), values)
    }

    pub fn scale(&self, k: i64) -> CharacterVector {
        let n = self.values[0].conductor();
        let c = CycNumber::from_i64(n, k);
        Self::new(self.group.clone(), self.values.iter().map(|v| v * &c).collect())
    }

    pub fn product(&self, other: &CharacterVector) -> CharacterVector {
        assert!(same_group(&self.group, &other.group));
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Self::new(self.group.clone(), values)
    }

    /// ⟨χ, ψ⟩ = (1/|G|) Σ_g χ(g)·conj(ψ(g)).
    pub fn inner_product(&self, other: &CharacterVector) -> Result<BigRational> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::Precondition("characters of different groups".into()));
        }
        let classes = self.group.conjugacy_classes();
        let n = self.values[0].conductor();
        let mut acc = CycNumber::zero(n);
        for ((c, a), b) in classes.iter().zip(&self.values).zip(&other.values) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let term = a * &b.conj();
            acc += &(&term * &CycNumber::from_i64(n, c.len() as i64));
        }
        let total = acc
            .to_rational()
            .ok_or_else(|| Error::Precondition("inner product is not rational".into()))?;
        Ok(total / BigRational::from_integer(BigInt::from(self.group.order())))
    }

    pub fn norm_squared(&self) -> BigRational {
        self.inner_product(self).expect("same group")
    }

    /// ⟨self, ψ⟩ as a non-negative integer.
    pub fn multiplicity_of(&self, psi: &CharacterVector) -> Result<usize> {
        let q = self.inner_product(psi)?;
        if !q.is_integer() || q < BigRational::zero() {
            return Err(Error::Precondition(format!(
                "inner product {q} is not a multiplicity"
            )));
        }
        Ok(q.to_integer().try_into().expect("multiplicity fits"))
    }

    /// Restriction of a class function of G to a subgroup H.
    pub fn restrict(&self, h: &Subgroup) -> CharacterVector {
        let sub = self.group.subgroup_group(h);
        let per_element: Vec<CycNumber> =
            h.elements().iter().map(|&g| self.value_at(g).clone()).collect();
        Self::from_element_values(sub, &per_element)
    }

    /// Deterministic ordering key.
    pub fn sort_key(&self) -> Vec<(u8, u32, String)> {
        self.values.iter().map(CycNumber::sort_key).collect()
    }
}

/// The class function h ↦ χ(g⁻¹hg) of a normal subgroup H ⊴ G.
pub fn conjugate_character(
    parent: &FiniteGroup,
    h: &Subgroup,
    chi: &CharacterVector,
    g: usize,
) -> Result<CharacterVector> {
    if !parent.is_normal(h) {
        return Err(Error::NotNormal(parent.name().to_string()));
    }
    let ginv = parent.inv(g);
    let per_element: Vec<CycNumber> = h
        .elements()
        .iter()
        .map(|&x| {
            let y = parent.conj(ginv, x);
            chi.value_at(h.index_of(y).expect("normal subgroup")).clone()
        })
        .collect();
    Ok(CharacterVector::from_element_values(chi.group().clone(), &per_element))
}

/// Linear characters of G in exponent form: each is a vector e with
/// λ(g) = ζ_N^{e[g]}, N the exponent of G. Computed on the abelianization
/// by extending homomorphisms one generator at a time.
pub fn linear_character_exponents(g: &FiniteGroup) -> Vec<Vec<u32>> {
    let n = g.exponent() as u32;
    let (q, proj) = g
        .quotient(&g.commutator_subgroup())
        .expect("commutator subgroup is normal");
    let gens = q.generators_of(&q.whole());
    let mut partial: Vec<Vec<Option<u32>>> = vec![{
        let mut v = vec![None; q.order()];
        v[0] = Some(0);
        v
    }];
    for (idx, &s) in gens.iter().enumerate() {
        let ord = q.element_order(s) as u32;
        let step = n / ord;
        let mut next = Vec::new();
        for vals in &partial {
            for t in 0..ord {
                if let Some(ext) = extend_hom(&q, &gens[..=idx], vals, s, t * step, n) {
                    next.push(ext);
                }
            }
        }
        partial = next;
    }
    let mut out: Vec<Vec<u32>> = partial
        .into_iter()
        .map(|vals| {
            (0..g.order())
                .map(|x| vals[proj[x]].expect("total on the abelianization"))
                .collect()
        })
        .collect();
    out.sort();
    out
}

/// Extends a homomorphism defined on <gens \ s> by s ↦ value, if consistent.
fn extend_hom(
    q: &FiniteGroup,
    gens: &[usize],
    vals: &[Option<u32>],
    s: usize,
    value: u32,
    n: u32,
) -> Option<Vec<Option<u32>>> {
    let mut v = vals.to_vec();
    let gen_vals: Vec<u32> = gens
        .iter()
        .map(|&x| if x == s { value } else { vals[x].expect("earlier generator assigned") })
        .collect();
    let mut queue: Vec<usize> = (0..q.order()).filter(|&x| v[x].is_some()).collect();
    if let Some(old) = v[s] {
        if old != value {
            return None;
        }
    }
    while let Some(x) = queue.pop() {
        let vx = v[x].expect("queued elements are assigned");
        for (&gen, &gv) in gens.iter().zip(&gen_vals) {
            let y = q.mul(x, gen);
            let vy = (vx + gv) % n;
            match v[y] {
                Some(old) if old != vy => return None,
                Some(_) => {}
                None => {
                    v[y] = Some(vy);
                    queue.push(y);
                }
            }
        }
    }
    Some(v)
}

pub fn linear_characters(g: &Arc<FiniteGroup>) -> Vec<Representation> {
    let n = conductor_of(g);
    linear_character_exponents(g)
        .iter()
        .enumerate()
        .map(|(i, e)| Representation::from_exponents(g.clone(), n, e, &format!("L{}", i + 1)))
        .collect()
}

/// Irreducible characters with explicit monomial models.
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    irreps: Vec<Representation>,
    characters: Vec<CharacterVector>,
}

impl fmt::Debug for CharacterTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharacterTable({}, degrees {:?})", self.group.name(), self.degrees())
    }
}

impl CharacterTable {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn irreps(&self) -> &[Representation] {
        &self.irreps
    }

    pub fn characters(&self) -> &[CharacterVector] {
        &self.characters
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.characters.iter().map(CharacterVector::degree).collect()
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    /// Index of the irreducible with the given character.
    pub fn index_of(&self, chi: &CharacterVector) -> Option<usize> {
        self.characters.iter().position(|c| c == chi)
    }

    /// Decomposes a character into irreducible multiplicities.
    pub fn decompose(&self, chi: &CharacterVector) -> Result<Vec<usize>> {
        self.characters.iter().map(|psi| chi.multiplicity_of(psi)).collect()
    }

    /// CSV export: one row per irreducible, one column per class.
    pub fn to_csv(&self) -> String {
        let g = &self.group;
        let classes = g.conjugacy_classes();
        let mut out = String::from("character");
        for c in classes {
            out.push(',');
            out.push_str(&csv_field(g.label(c[0])));
        }
        out.push_str("\nclass_size");
        for c in classes {
            out.push_str(&format!(",{}", c.len()));
        }
        out.push('\n');
        for (rep, chi) in self.irreps.iter().zip(&self.characters) {
            out.push_str(&csv_field(rep.label()));
            for v in chi.values() {
                out.push(',');
                out.push_str(&csv_field(&v.to_string()));
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Whether Ind_H^G λ is irreducible (Mackey): for every g ∉ H, λ and its
/// g-conjugate must differ somewhere on H ∩ gHg⁻¹.
fn induced_is_irreducible(g: &FiniteGroup, h: &Subgroup, lambda: &[u32]) -> bool {
    let mut seen_double = vec![false; g.order()];
    for &x in h.elements() {
        seen_double[x] = true;
    }
    for t in 0..g.order() {
        if seen_double[t] {
            continue;
        }
        for &a in h.elements() {
            for &b in h.elements() {
                seen_double[g.mul(g.mul(a, t), b)] = true;
            }
        }
        let tinv = g.inv(t);
        // h ∈ H with t⁻¹ h t ∈ H
        let separated = h.elements().iter().any(|&x| {
            let y = g.conj(tinv, x);
            match h.index_of(y) {
                Some(iy) => lambda[h.index_of(x).unwrap()] != lambda[iy],
                None => false,
            }
        });
        if !separated {
            return false;
        }
    }
    true
}

/// Character of Ind_H^G λ as exponent counts per class, scaled by |H|.
fn induced_character(g: &Arc<FiniteGroup>, h: &Subgroup, lambda: &[u32], n: u32) -> CharacterVector {
    let classes = g.conjugacy_classes();
    let values = classes
        .iter()
        .map(|c| {
            let x = c[0];
            let mut counts = vec![0i64; n as usize];
            for t in 0..g.order() {
                let y = g.conj(g.inv(t), x);
                if let Some(iy) = h.index_of(y) {
                    counts[lambda[iy] as usize] += 1;
                }
            }
            let v = CycNumber::from_exponent_counts(n, &counts);
            let q = BigRational::new(BigInt::one(), BigInt::from(h.order()));
            v.scale_rational(&q)
        })
        .collect();
    CharacterVector::new(g.clone(), values)
}

fn compute_table(g: &Arc<FiniteGroup>) -> Result<CharacterTable> {
    let order = g.order();
    let n = conductor_of(g);
    let subgroups = g.subgroups()?;
    let mut by_order: Vec<&Subgroup> = subgroups.iter().collect();
    by_order.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.cmp(b)));
    let mut found: Vec<(CharacterVector, Subgroup, Vec<u32>)> = Vec::new();
    let mut seen: HashMap<Vec<CycNumber>, ()> = HashMap::new();
    let mut sum_sq = 0usize;
    let mut done_classes: Vec<Subgroup> = Vec::new();
    for h in by_order {
        if sum_sq == order {
            break;
        }
        let index = order / h.order();
        if index * index > order - sum_sq {
            continue;
        }
        // conjugate subgroups induce the same characters
        if done_classes
            .iter()
            .any(|d| d.order() == h.order() && (0..order).any(|t| &g.conjugate_subgroup(t, d) == h))
        {
            continue;
        }
        done_classes.push(h.clone());
        let sub = g.subgroup_group(h);
        for lambda in linear_character_exponents(&sub) {
            if index * index > order - sum_sq {
                break;
            }
            // lift exponents from exp(H) to exp(G)
            let scale = n / sub.exponent() as u32;
            let lambda: Vec<u32> = lambda.iter().map(|&e| e * scale).collect();
            if !induced_is_irreducible(g, h, &lambda) {
                continue;
            }
            let chi = induced_character(g, h, &lambda, n);
            if seen.insert(chi.values().to_vec(), ()).is_none() {
                sum_sq += index * index;
                found.push((chi, h.clone(), lambda));
            }
        }
    }
    if sum_sq != order {
        return Err(Error::UnsupportedGroup(g.name().to_string()));
    }
    found.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.sort_key().cmp(&b.0.sort_key()))
    });
    let mut irreps = Vec::with_capacity(found.len());
    let mut characters = Vec::with_capacity(found.len());
    for (i, (chi, h, lambda)) in found.into_iter().enumerate() {
        let sub = g.subgroup_group(&h);
        let lin = Representation::from_exponents(sub, n, &lambda, "λ");
        let rep = if h.order() == order {
            Representation::from_exponents(g.clone(), n, &lambda, "")
        } else {
            lin.induce(g, &h)?
        };
        let rep = rep.with_label(&format!("X{}", i + 1));
        debug_assert!(rep.character() == chi);
        irreps.push(rep);
        characters.push(chi);
    }
    Ok(CharacterTable {
        group: g.clone(),
        irreps,
        characters,
    })
}

/// The (cached) character table of a monomial group.
pub fn character_table(g: &Arc<FiniteGroup>) -> Result<Arc<CharacterTable>> {
    g.table_cache()
        .get_or_init(|| compute_table(g).map(Arc::new))
        .clone()
}

/// Explicit decomposition of a representation restricted to H into
/// irreducible H-subspaces.
#[derive(Clone, Debug)]
pub struct IrreducibleSummand {
    /// Index into H's character table.
    pub irrep: usize,
    /// Basis vectors (in the representation space) on which H acts exactly by
    /// the matrices of the table's model of this irreducible.
    pub basis: Vec<Vector>,
}

/// Splits the restriction of `rep` to `h` into irreducible summands using
/// matrix units e_{k1} = (n/|H|) Σ_h σ(h⁻¹)_{1k} ρ(h).
pub fn decompose_restriction(rep: &Representation, h: &Subgroup) -> Result<Vec<IrreducibleSummand>> {
    let res = rep.restrict(h);
    let table = character_table(res.group())?;
    let sub = res.group().clone();
    let mut out = Vec::new();
    for (idx, sigma) in table.irreps().iter().enumerate() {
        let mult = res.character().multiplicity_of(&table.characters()[idx])?;
        if mult == 0 {
            continue;
        }
        let n = sigma.degree();
        let c = num_integer::lcm(res.conductor(), sigma.conductor());
        let scale = CycNumber::from_rational(
            c,
            &BigRational::new(BigInt::from(n), BigInt::from(sub.order())),
        );
        let unit = |k: usize| -> CycMatrix {
            let mut acc = CycMatrix::zeros(c, rep.degree(), rep.degree());
            for x in 0..sub.order() {
                let coeff = sigma.matrix(sub.inv(x)).get(0, k);
                if !coeff.is_zero() {
                    acc = acc.add(&res.matrix(x).scale(coeff));
                }
            }
            acc.scale(&scale)
        };
        let units: Vec<CycMatrix> = (0..n).map(unit).collect();
        let image = Subspace::span(c, rep.degree(), &units[0].transpose().row_vectors());
        debug_assert_eq!(image.dim(), mult);
        for w in image.basis() {
            let basis: Vec<Vector> = units.iter().map(|u| u.mul_vec(w)).collect();
            out.push(IrreducibleSummand { irrep: idx, basis });
        }
    }
    Ok(out)
}

/// A labeled direct sum ⊕ V_i^{m_i} of irreducible representations.
#[derive(Clone, Debug)]
pub struct LabeledModule {
    group: Arc<FiniteGroup>,
    components: Vec<(Arc<Representation>, usize)>,
    conductor: u32,
}

/// One copy of an irreducible inside a labeled module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub component: usize,
    pub copy: usize,
    pub offset: usize,
    pub degree: usize,
}

impl LabeledModule {
    pub fn new(group: Arc<FiniteGroup>, components: Vec<(Arc<Representation>, usize)>) -> Result<Self> {
        if components.iter().any(|(r, _)| !same_group(r.group(), &group)) {
            return Err(Error::Precondition("component over a different group".into()));
        }
        let conductor = components
            .iter()
            .fold(conductor_of(&group), |acc, (r, _)| num_integer::lcm(acc, r.conductor()));
        Ok(LabeledModule {
            group,
            components,
            conductor,
        })
    }

    /// Ω = V.
    pub fn irreducible(rep: Arc<Representation>) -> Self {
        let group = rep.group().clone();
        Self::new(group, vec![(rep, 1)]).expect("single component")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn components(&self) -> &[(Arc<Representation>, usize)] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.iter().map(|(r, m)| r.degree() * m).sum()
    }

    pub fn blocks(&self) -> Vec<Block> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (i, (r, m)) in self.components.iter().enumerate() {
            for copy in 0..*m {
                out.push(Block {
                    component: i,
                    copy,
                    offset,
                    degree: r.degree(),
                });
                offset += r.degree();
            }
        }
        out
    }

    pub fn act(&self, g: usize, v: &[CycNumber]) -> Vector {
        assert_eq!(v.len(), self.dim(), "vector outside the module");
        let mut out = Vec::with_capacity(v.len());
        for b in self.blocks() {
            let slice = &v[b.offset..b.offset + b.degree];
            if is_zero_vector(slice) {
                out.extend(slice.iter().map(|x| x.lift(self.conductor)));
            } else {
                out.extend(
                    self.components[b.component]
                        .0
                        .act(g, slice)
                        .into_iter()
                        .map(|x| x.lift(self.conductor)),
                );
            }
        }
        out
    }

    /// Full block-diagonal matrix of g.
    pub fn matrix(&self, g: usize) -> CycMatrix {
        let blocks: Vec<&CycMatrix> = self
            .blocks()
            .iter()
            .map(|b| self.components[b.component].0.matrix(g))
            .collect();
        CycMatrix::block_diagonal(self.conductor, &blocks)
    }

    /// Character of the whole module.
    pub fn character(&self) -> CharacterVector {
        let mut values = vec![CycNumber::zero(self.conductor); self.group.conjugacy_classes().len()];
        for (r, m) in &self.components {
            let chi = r.character();
            for (v, x) in values.iter_mut().zip(chi.values()) {
                *v += &(x * &CycNumber::from_i64(self.conductor, *m as i64));
            }
        }
        CharacterVector::new(self.group.clone(), values)
    }

    /// Span of {g·a : g ∈ H} for a subgroup H (closure under generators).
    pub fn orbit_span(&self, h: &Subgroup, seeds: &[Vector]) -> Subspace {
        let gens = self.group.generators_of(h);
        orbit_span(self.conductor, self.dim(), &gens, |g, v| self.act(g, v), seeds)
    }

    /// The cyclic module KG·a.
    pub fn cyclic_module(&self, a: &[CycNumber]) -> Result<Subspace> {
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.len(),
            });
        }
        Ok(self.orbit_span(&self.group.whole(), &[a.to_vec()]))
    }

    /// dim ann(a) = |G| − rank of the matrix with rows g·a over all g.
    pub fn annihilator_dim(&self, a: &[CycNumber]) -> Result<usize> {
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.len(),
            });
        }
        let rows: Vec<Vector> = (0..self.group.order()).map(|g| self.act(g, a)).collect();
        let m = CycMatrix::from_rows(self.conductor, self.dim(), &rows);
        Ok(self.group.order() - m.rank())
    }

    /// Components grouped by isomorphism class: (representative component,
    /// list of (component index, copy)) in first-occurrence order.
    pub fn isotypic_groups(&self) -> Vec<(usize, Vec<Block>)> {
        let chars: Vec<CharacterVector> = self.components.iter().map(|(r, _)| r.character()).collect();
        let mut groups: Vec<(usize, Vec<Block>)> = Vec::new();
        for b in self.blocks() {
            match groups.iter_mut().find(|(rep, _)| chars[*rep] == chars[b.component]) {
                Some((_, list)) => list.push(b),
                None => groups.push((b.component, vec![b])),
            }
        }
        groups
    }
}

/// Smallest subspace containing `seeds` and stable under `act(s, ·)` for
/// each generator s.
pub fn orbit_span(
    conductor: u32,
    dim: usize,
    gens: &[usize],
    act: impl Fn(usize, &[CycNumber]) -> Vector,
    seeds: &[Vector],
) -> Subspace {
    let mut span = SpanBuilder::new(conductor, dim);
    let mut queue: Vec<Vector> = Vec::new();
    for s in seeds {
        if span.insert(s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        if span.is_full() {
            break;
        }
        for &g in gens {
            let w = act(g, &v);
            if span.insert(&w) {
                queue.push(w);
            }
        }
    }
    span.finish()
}

/// Bipartite "lies over" graph between Irr(G) and Irr(H): edge (u, v) iff
/// v occurs in the restriction of u.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseEdges {
    pub upper: usize,
    pub lower: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn hasse_diagram(g: &Arc<FiniteGroup>, h: &Subgroup) -> Result<HasseEdges> {
    let top = character_table(g)?;
    let sub = g.subgroup_group(h);
    let bottom = character_table(&sub)?;
    let mut edges = Vec::new();
    for (i, chi) in top.characters().iter().enumerate() {
        let res = chi.restrict(h);
        for (j, psi) in bottom.characters().iter().enumerate() {
            if res.multiplicity_of(psi)? > 0 {
                edges.push((i, j));
            }
        }
    }
    Ok(HasseEdges {
        upper: top.len(),
        lower: bottom.len(),
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q8() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::dicyclic(8).unwrap())
    }

    #[test]
    fn quaternion_table() {
        let g = q8();
        let t = character_table(&g).unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 1, 1, 2]);
        for (i, a) in t.characters().iter().enumerate() {
            for (j, b) in t.characters().iter().enumerate() {
                let ip = a.inner_product(b).unwrap();
                assert_eq!(ip, if i == j { BigRational::one() } else { BigRational::zero() });
            }
        }
        let u = &t.irreps()[4];
        assert_eq!(u.character().value_at(2), &CycNumber::from_i64(4, -2));
    }

    #[test]
    fn linear_character_counts() {
        let c6 = Arc::new(FiniteGroup::cyclic(6).unwrap());
        assert_eq!(linear_characters(&c6).len(), 6);
        assert_eq!(linear_characters(&q8()).len(), 4);
    }

    #[test]
    fn induction_from_center_of_c4() {
        let c4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let z2 = c4.generate(&[2]);
        let triv = Representation::trivial(c4.subgroup_group(&z2));
        let ind = triv.induce(&c4, &z2).unwrap();
        assert_eq!(ind.degree(), 2);
        let chi = ind.character();
        assert_eq!(chi.value_at(2), &CycNumber::from_i64(4, 2));
        assert_eq!(chi.value_at(1), &CycNumber::zero(4));
    }

    #[test]
    fn regular_character_multiplicities() {
        let g = q8();
        let t = character_table(&g).unwrap();
        let reg = Representation::regular(g.clone()).character();
        assert_eq!(t.decompose(&reg).unwrap(), vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn restriction_decomposition_spans() {
        let g = q8();
        let t = character_table(&g).unwrap();
        let u = &t.irreps()[4];
        let z4j = g.generate(&[4]);
        let parts = decompose_restriction(u, &z4j).unwrap();
        assert_eq!(parts.len(), 2);
        assert_ne!(parts[0].irrep, parts[1].irrep);
        let z2 = g.center();
        let parts = decompose_restriction(u, &z2).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].irrep, parts[1].irrep);
    }

    #[test]
    fn conjugating_swaps_eigencharacters() {
        let g = q8();
        let z4j = g.generate(&[4]);
        let sub = g.subgroup_group(&z4j);
        let t = character_table(&sub).unwrap();
        let faithful: Vec<&CharacterVector> = t
            .characters()
            .iter()
            .filter(|c| c.value_at(sub.element_by_label("j").unwrap()).root_of_unity_exponent() == Some(1))
            .collect();
        let chi = faithful[0];
        let conj = conjugate_character(&g, &z4j, chi, 1).unwrap();
        assert_ne!(&conj, chi);
        assert_eq!(conjugate_character(&g, &z4j, chi, 2).unwrap(), *chi);
    }

    #[test]
    fn unsupported_group_is_reported() {
        let q8 = FiniteGroup::dicyclic(8).unwrap();
        // i -> j -> k -> i
        let auto = vec![0, 4, 2, 6, 5, 1, 7, 3];
        let sl23 = Arc::new(FiniteGroup::semidirect_cyclic(&q8, 3, &auto).unwrap());
        assert!(matches!(character_table(&sl23), Err(Error::UnsupportedGroup(_))));
    }
}

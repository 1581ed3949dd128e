//! Gliders over a direct product G × H of a p-group and a q-group: tensor
//! products, the (a, b, c) triple and the tensor-decomposability criterion.
//!
//! Elements of G × H carry ids g·|H| + h. The product chain has levels
//! G_i × H_i; the factor chains may repeat a level as long as the products
//! strictly increase.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::cyclo::CycNumber;
use crate::error::{Error, Result};
use crate::glider::Glider;
use crate::group::{FiniteGroup, Subgroup, SubgroupChain};
use crate::linalg::Vector;
use crate::par;
use crate::registry::{build_named, subgroup_token};
use crate::rep::{character_table, CharacterTable, LabeledModule, Representation};

/// Ladder of subgroups G_i × H_i of G × H.
#[derive(Clone, Debug)]
pub struct ProductChain {
    pub g: Arc<FiniteGroup>,
    pub h: Arc<FiniteGroup>,
    pub product: Arc<FiniteGroup>,
    pub g_levels: Vec<Subgroup>,
    pub h_levels: Vec<Subgroup>,
    pub chain: SubgroupChain,
}

fn gcd(a: usize, b: usize) -> usize {
    num_integer::gcd(a, b)
}

impl ProductChain {
    /// Both level lists start at e, end at the factor and have equal length.
    pub fn new(
        g: Arc<FiniteGroup>,
        g_levels: Vec<Subgroup>,
        h: Arc<FiniteGroup>,
        h_levels: Vec<Subgroup>,
    ) -> Result<Self> {
        if gcd(g.order(), h.order()) != 1 {
            return Err(Error::Precondition(format!(
                "factor orders {} and {} are not coprime",
                g.order(),
                h.order()
            )));
        }
        if g_levels.len() != h_levels.len() {
            return Err(Error::Precondition("factor chains differ in length".into()));
        }
        for (levels, grp) in [(&g_levels, &g), (&h_levels, &h)] {
            if levels.first().map(Subgroup::order) != Some(1)
                || levels.last().map(Subgroup::order) != Some(grp.order())
            {
                return Err(Error::MalformedSpec("factor chain must run from e to the factor".into()));
            }
            if levels.windows(2).any(|w| !w[0].is_subset(&w[1])) {
                return Err(Error::NotSubgroup("factor chain levels are not nested".into()));
            }
        }
        let product = Arc::new(FiniteGroup::direct_product(&g, &h));
        let nb = h.order();
        let levels: Vec<Subgroup> = g_levels
            .iter()
            .zip(&h_levels)
            .map(|(a, b)| pair_subgroup(&product, a, b, nb))
            .collect();
        let chain = SubgroupChain::new(&product, levels)?;
        Ok(ProductChain {
            g,
            h,
            product,
            g_levels,
            h_levels,
            chain,
        })
    }

    /// Builds factors and chains from registry names and chain specs; a
    /// `=` token repeats the previous level.
    pub fn from_specs(g_name: &str, g_chain: &str, h_name: &str, h_chain: &str) -> Result<Self> {
        let g = Arc::new(build_named(g_name, usize::MAX)?);
        let h = Arc::new(build_named(h_name, usize::MAX)?);
        let gl = factor_levels(&g, g_chain)?;
        let hl = factor_levels(&h, h_chain)?;
        Self::new(g, gl, h, hl)
    }

    pub fn length(&self) -> usize {
        self.chain.length()
    }

    /// G_i × e inside the product.
    pub fn g_side(&self) -> Vec<Subgroup> {
        let t = Subgroup::trivial();
        self.g_levels
            .iter()
            .map(|s| pair_subgroup(&self.product, s, &t, self.h.order()))
            .collect()
    }

    /// e × H_i inside the product.
    pub fn h_side(&self) -> Vec<Subgroup> {
        let t = Subgroup::trivial();
        self.h_levels
            .iter()
            .map(|s| pair_subgroup(&self.product, &t, s, self.h.order()))
            .collect()
    }

    pub fn g_table(&self) -> Result<Arc<CharacterTable>> {
        character_table(&self.g)
    }

    pub fn h_table(&self) -> Result<Arc<CharacterTable>> {
        character_table(&self.h)
    }
}

fn pair_subgroup(product: &FiniteGroup, a: &Subgroup, b: &Subgroup, nb: usize) -> Subgroup {
    let ids: Vec<usize> = a
        .elements()
        .iter()
        .flat_map(|&x| b.elements().iter().map(move |&y| x * nb + y))
        .collect();
    product.subgroup(&ids).expect("product of subgroups")
}

fn factor_levels(g: &FiniteGroup, spec: &str) -> Result<Vec<Subgroup>> {
    let mut out: Vec<Subgroup> = vec![Subgroup::trivial()];
    for tok in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let s = if tok == "=" {
            out.last().cloned().expect("nonempty")
        } else {
            subgroup_token(g, tok)?
        };
        out.push(s);
    }
    if out.len() == 1 || out.last().map(Subgroup::order) != Some(g.order()) {
        out.push(g.whole());
    }
    Ok(out)
}

/// ρ ⊗ σ as a representation of G × H (Kronecker products).
pub fn tensor_rep(rho: &Representation, sigma: &Representation, product: Arc<FiniteGroup>) -> Result<Representation> {
    rho.tensor(sigma, product)
}

/// Ω = ⊕ (X_i ⊗ Y_j)^{m}, remembering the factor table indices (i, j).
#[derive(Clone, Debug)]
pub struct ProductModule {
    pub module: Arc<LabeledModule>,
    /// ((G-table index, H-table index), multiplicity) per component.
    pub pairs: Vec<((usize, usize), usize)>,
}

impl ProductModule {
    pub fn new(pc: &ProductChain, pairs: Vec<((usize, usize), usize)>) -> Result<Self> {
        let (tg, th) = (pc.g_table()?, pc.h_table()?);
        let mut comps = Vec::new();
        for &((i, j), m) in &pairs {
            let (x, y) = (
                tg.irreps().get(i).ok_or_else(|| Error::MalformedSpec(format!("no irreducible {i} of G")))?,
                th.irreps().get(j).ok_or_else(|| Error::MalformedSpec(format!("no irreducible {j} of H")))?,
            );
            let rep = tensor_rep(x, y, pc.product.clone())?.with_label(&format!("{i}:{j}"));
            comps.push((Arc::new(rep), m));
        }
        Ok(ProductModule {
            module: Arc::new(LabeledModule::new(pc.product.clone(), comps)?),
            pairs,
        })
    }

    /// Parses `i:j` or `i:j^m` entries separated by commas.
    pub fn parse(pc: &ProductChain, spec: &str) -> Result<Self> {
        let bad = |t: &str| Error::MalformedSpec(format!("bad component '{t}' (expected i:j or i:j^m)"));
        let pairs = spec
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                let (pair, m) = match t.split_once('^') {
                    Some((p, m)) => (p, m.trim().parse::<usize>().map_err(|_| bad(t))?),
                    None => (t, 1),
                };
                let (i, j) = pair.split_once(':').ok_or_else(|| bad(t))?;
                let i = i.trim().parse().map_err(|_| bad(t))?;
                let j = j.trim().parse().map_err(|_| bad(t))?;
                Ok(((i, j), m))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pc, pairs)
    }

    fn degrees(&self) -> Vec<(usize, usize)> {
        self.module
            .components()
            .iter()
            .zip(&self.pairs)
            .map(|((_, _), &((i, j), _))| (i, j))
            .collect()
    }
}

/// (a, b, c): GH-component count and the numbers of G- and H-isomorphism
/// classes among the restricted components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GliderTriple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

fn factor_degree(t: &CharacterTable, i: usize) -> usize {
    t.irreps()[i].degree()
}

/// Triple of Ω without degree conditions: a counts components with
/// multiplicity, b and c count distinct factor irreducibles.
pub fn generalized_triple(pm: &ProductModule) -> GliderTriple {
    let a = pm.pairs.iter().map(|(_, m)| m).sum();
    let b = pm.pairs.iter().map(|((i, _), _)| i).collect::<BTreeSet<_>>().len();
    let c = pm.pairs.iter().map(|((_, j), _)| j).collect::<BTreeSet<_>>().len();
    GliderTriple { a, b, c }
}

fn check_one_dimensional(pc: &ProductChain, pm: &ProductModule) -> Result<()> {
    let (tg, th) = (pc.g_table()?, pc.h_table()?);
    let mut seen = BTreeSet::new();
    for &((i, j), m) in &pm.pairs {
        if factor_degree(&tg, i) != 1 || factor_degree(&th, j) != 1 {
            return Err(Error::Precondition("components are not all one-dimensional".into()));
        }
        if m != 1 || !seen.insert((i, j)) {
            return Err(Error::Precondition("components are not pairwise distinct".into()));
        }
    }
    Ok(())
}

/// The triple of a glider whose ambient has distinct 1-dimensional
/// components.
pub fn glider_triple(pc: &ProductChain, pm: &ProductModule) -> Result<GliderTriple> {
    check_one_dimensional(pc, pm)?;
    Ok(generalized_triple(pm))
}

/// Outcome of the a = bc test.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub triple: GliderTriple,
    pub decomposable: bool,
    /// G- and H-table indices of the factor ambients when decomposable.
    pub factors: Option<(Vec<usize>, Vec<usize>)>,
    /// Whether the tensor of the factor gliders has M's components and
    /// generalized character.
    pub round_trip: Option<bool>,
}

/// Decides tensor decomposability by a = bc and, when it holds, rebuilds M
/// from the regrouped factors.
pub fn is_tensor_decomposable(pc: &ProductChain, pm: &ProductModule, m: &Glider) -> Result<Decomposition> {
    let triple = glider_triple(pc, pm)?;
    if triple.a != triple.b * triple.c {
        return Ok(Decomposition {
            triple,
            decomposable: false,
            factors: None,
            round_trip: None,
        });
    }
    let mut gi: Vec<usize> = Vec::new();
    let mut hj: Vec<usize> = Vec::new();
    for &((i, j), _) in &pm.pairs {
        if !gi.contains(&i) {
            gi.push(i);
        }
        if !hj.contains(&j) {
            hj.push(j);
        }
    }
    let n1 = factor_glider(pc, Side::G, &gi, None)?;
    let n2 = factor_glider(pc, Side::H, &hj, None)?;
    let (tm, t) = tensor_glider(pc, &n1, &gi, &n2, &hj)?;
    let same_components = {
        let mut x: Vec<(usize, usize)> = tm.degrees();
        let mut y: Vec<(usize, usize)> = pm.degrees();
        x.sort_unstable();
        y.sort_unstable();
        x == y
    };
    let round_trip = same_components && t.generalized_character()? == m.generalized_character()?;
    Ok(Decomposition {
        triple,
        decomposable: true,
        factors: Some((gi, hj)),
        round_trip: Some(round_trip),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    G,
    H,
}

/// Glider over one factor: Ω = ⊕ of the listed table irreducibles (one copy
/// each) with the given generator (all ones by default).
pub fn factor_glider(pc: &ProductChain, side: Side, comps: &[usize], a: Option<Vector>) -> Result<Glider> {
    let (grp, levels, table) = match side {
        Side::G => (pc.g.clone(), pc.g_levels.clone(), pc.g_table()?),
        Side::H => (pc.h.clone(), pc.h_levels.clone(), pc.h_table()?),
    };
    let parts = comps
        .iter()
        .map(|&i| (Arc::new(table.irreps()[i].clone()), 1))
        .collect();
    let module = Arc::new(LabeledModule::new(grp, parts)?);
    let n = module.conductor();
    let a = a.unwrap_or_else(|| vec![CycNumber::one(n); module.dim()]);
    Glider::build_over(levels, module, a)
}

/// N1 ⊗ N2 over the product chain. `gi`, `hj` are the factor-table indices
/// of the components of N1 and N2 (one entry per component, in order).
pub fn tensor_glider(
    pc: &ProductChain,
    n1: &Glider,
    gi: &[usize],
    n2: &Glider,
    hj: &[usize],
) -> Result<(ProductModule, Glider)> {
    let (o1, o2) = (n1.ambient(), n2.ambient());
    if gi.len() != o1.components().len() || hj.len() != o2.components().len() {
        return Err(Error::Precondition("factor index lists do not match the ambients".into()));
    }
    let mut pairs = Vec::new();
    for (x, (_, m1)) in gi.iter().zip(o1.components()) {
        for (y, (_, m2)) in hj.iter().zip(o2.components()) {
            pairs.push(((*x, *y), m1 * m2));
        }
    }
    let pm = ProductModule::new(pc, pairs)?;
    let n = pm.module.conductor();
    let (b1, b2) = (o1.blocks(), o2.blocks());
    let mut a: Vector = Vec::with_capacity(pm.module.dim());
    for c1 in 0..o1.components().len() {
        for c2 in 0..o2.components().len() {
            for x in b1.iter().filter(|b| b.component == c1) {
                for y in b2.iter().filter(|b| b.component == c2) {
                    let u = &n1.generator()[x.offset..x.offset + x.degree];
                    let v = &n2.generator()[y.offset..y.offset + y.degree];
                    for s in u {
                        for t in v {
                            a.push((s * t).lift(n));
                        }
                    }
                }
            }
        }
    }
    let glider = Glider::build(&pc.chain, pm.module.clone(), a)?;
    Ok((pm, glider))
}

/// Outcome of the exclusion lemmas for one glider over a product chain.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ExclusionReport {
    pub irreducible: bool,
    pub g_restriction_irreducible: bool,
    pub h_restriction_irreducible: bool,
    pub violations: Vec<String>,
}

/// Tests the implications about which components an irreducible glider over
/// G × H can have when its restrictions to G or H stay irreducible.
pub fn component_exclusion_check(pc: &ProductChain, pm: &ProductModule, m: &Glider) -> Result<ExclusionReport> {
    let mut r = ExclusionReport {
        irreducible: m.is_irreducible(),
        ..Default::default()
    };
    if !r.irreducible {
        return Ok(r);
    }
    r.g_restriction_irreducible = m.restrict(&pc.g_side())?.is_irreducible();
    r.h_restriction_irreducible = m.restrict(&pc.h_side())?.is_irreducible();
    let (tg, th) = (pc.g_table()?, pc.h_table()?);
    for &((i, j), l) in &pm.pairs {
        let (dp, dq) = (factor_degree(&tg, i), factor_degree(&th, j));
        if r.h_restriction_irreducible {
            if dp > 1 && dq == 1 {
                r.violations.push(format!("component {i}:{j} of degree {dp} with M_H irreducible"));
            }
            if dp > 1 && dq > 1 && l * dp > dq {
                r.violations.push(format!("component {i}:{j}^{l}: {l}·{dp} > {dq} with M_H irreducible"));
            }
        }
        if r.g_restriction_irreducible {
            if dq > 1 && dp == 1 {
                r.violations.push(format!("component {i}:{j} of degree {dq} with M_G irreducible"));
            }
            if dp > 1 && dq > 1 && l * dq > dp {
                r.violations.push(format!("component {i}:{j}^{l}: {l}·{dq} > {dp} with M_G irreducible"));
            }
        }
    }
    let all_linear = pm
        .pairs
        .iter()
        .all(|&((i, j), l)| l == 1 && factor_degree(&tg, i) == 1 && factor_degree(&th, j) == 1);
    let t = generalized_triple(pm);
    let distinct_both = all_linear && t.b == t.a && t.c == t.a;
    let both = r.g_restriction_irreducible && r.h_restriction_irreducible;
    if both != distinct_both {
        r.violations.push(format!(
            "both restrictions irreducible = {both}, but distinct one-dimensional components = {distinct_both}"
        ));
    }
    Ok(r)
}

/// Report of the exclusion search on one product.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ExclusionSearchReport {
    pub group: String,
    pub gliders_checked: usize,
    pub irreducible: usize,
    /// Irreducible gliders with a component X ⊗ Y, deg X > 1, whose
    /// restriction to the H-chain is irreducible (expected: none).
    pub excluded_found: usize,
    pub violations: Vec<String>,
}

/// Over every product chain, ambients (X ⊗ Y)^l (deg X > 1, l ≤ 2) with at
/// most one further distinct component, generators from concatenated
/// chain-adapted vectors (distinct or equal across copies) and one seeded
/// generic vector; every irreducible
/// glider goes through [`component_exclusion_check`].
pub fn exclusion_search(g_name: &str, h_name: &str, seed: u64) -> Result<ExclusionSearchReport> {
    let g = Arc::new(build_named(g_name, usize::MAX)?);
    let h = Arc::new(build_named(h_name, usize::MAX)?);
    let chains = product_chains(&g, &h)?;
    let (tg, th) = (character_table(&g)?, character_table(&h)?);
    let all: Vec<(usize, usize)> = (0..tg.len()).flat_map(|i| (0..th.len()).map(move |j| (i, j))).collect();
    let big: Vec<(usize, usize)> = all.iter().copied().filter(|&(i, _)| factor_degree(&tg, i) > 1).collect();
    let mut ambients: Vec<Vec<((usize, usize), usize)>> = Vec::new();
    for &b in &big {
        for l in 1..=2 {
            ambients.push(vec![(b, l)]);
            for &o in all.iter().filter(|&&o| o != b) {
                ambients.push(vec![(b, l), (o, 1)]);
            }
        }
    }
    let mut report = ExclusionSearchReport {
        group: FiniteGroup::direct_product(&g, &h).name().to_string(),
        ..Default::default()
    };
    let mut jobs = Vec::new();
    for (ci, _) in chains.iter().enumerate() {
        for (ai, _) in ambients.iter().enumerate() {
            jobs.push((ci, ai));
        }
    }
    let results = par::try_map(&jobs, |&(ci, ai)| -> Result<(usize, usize, usize, Vec<String>)> {
        let pc = &chains[ci];
        let pm = ProductModule::new(pc, ambients[ai].clone())?;
        let module = &pm.module;
        let n = module.conductor();
        let adapted: Vec<Vec<Vector>> = module
            .components()
            .iter()
            .map(|(rep, _)| crate::glider::chain_adapted_vectors(rep, pc.chain.levels()))
            .collect::<Result<_>>()?;
        let mut gens: Vec<Vector> = Vec::new();
        for pick in 0..3 {
            let mut a = Vector::new();
            for b in module.blocks() {
                let list = &adapted[b.component];
                let k = if pick == 2 { 0 } else { pick + b.copy };
                let v = &list[k % list.len()];
                a.extend(v.iter().map(|x| x.lift(n)));
            }
            gens.push(a);
        }
        let mut rng = crate::random::rng(seed.wrapping_add((ci * ambients.len() + ai) as u64));
        gens.push(crate::glider::generic_generator(&pc.chain, module, &mut rng)?);
        let (mut checked, mut irr, mut found) = (0, 0, 0);
        let mut violations = Vec::new();
        for a in gens {
            let m = Glider::build(&pc.chain, module.clone(), a)?;
            checked += 1;
            let r = component_exclusion_check(pc, &pm, &m)?;
            if !r.irreducible {
                continue;
            }
            irr += 1;
            if r.h_restriction_irreducible {
                found += 1;
            }
            violations.extend(r.violations.into_iter().map(|v| format!("chain {ci}, ambient {:?}: {v}", ambients[ai])));
        }
        Ok((checked, irr, found, violations))
    })?;
    for (c, i, f, v) in results {
        report.gliders_checked += c;
        report.irreducible += i;
        report.excluded_found += f;
        report.violations.extend(v);
    }
    Ok(report)
}

/// Exhaustive search for factor ambients Ω1 ⊆ Irr(G), Ω2 ⊆ Irr(H) (one copy
/// each, all 1-dimensional) with Ω1 ⊗ Ω2 = Ω, followed by a comparison of
/// generalized characters with the tensor of all-ones generators.
pub fn search_tensor_factorization(pc: &ProductChain, pm: &ProductModule, m: &Glider) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let (tg, th) = (pc.g_table()?, pc.h_table()?);
    let lin_g: Vec<usize> = (0..tg.len()).filter(|&i| factor_degree(&tg, i) == 1).collect();
    let lin_h: Vec<usize> = (0..th.len()).filter(|&j| factor_degree(&th, j) == 1).collect();
    let mut target: Vec<(usize, usize)> = pm.pairs.iter().flat_map(|&(p, k)| std::iter::repeat(p).take(k)).collect();
    target.sort_unstable();
    for mg in 1u32..(1 << lin_g.len()) {
        let s1: Vec<usize> = lin_g.iter().enumerate().filter(|(k, _)| mg >> k & 1 == 1).map(|(_, &i)| i).collect();
        if s1.len() > target.len() {
            continue;
        }
        for mh in 1u32..(1 << lin_h.len()) {
            let s2: Vec<usize> = lin_h.iter().enumerate().filter(|(k, _)| mh >> k & 1 == 1).map(|(_, &j)| j).collect();
            if s1.len() * s2.len() != target.len() {
                continue;
            }
            let mut prod: Vec<(usize, usize)> = s1.iter().flat_map(|&i| s2.iter().map(move |&j| (i, j))).collect();
            prod.sort_unstable();
            if prod != target {
                continue;
            }
            let n1 = factor_glider(pc, Side::G, &s1, None)?;
            let n2 = factor_glider(pc, Side::H, &s2, None)?;
            let (_, t) = tensor_glider(pc, &n1, &s1, &n2, &s2)?;
            if t.generalized_character()? == m.generalized_character()? {
                return Ok(Some((s1, s2)));
            }
        }
    }
    Ok(None)
}

/// Report of the characterization suite on one product.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CharSuiteReport {
    pub group: String,
    pub abelian: bool,
    pub chains: usize,
    pub gliders_checked: usize,
    pub irreducible: usize,
    pub decomposable: usize,
    pub violations: Vec<String>,
    pub counterexample: Option<TensorCounterexample>,
}

/// The tensor-product glider violating a = bc for a non-abelian product.
#[derive(Clone, Debug, Serialize)]
pub struct TensorCounterexample {
    pub components: String,
    pub irreducible: bool,
    pub triple: GliderTriple,
    /// (U^{⊕2} ⊃ K(p, p′)) ⊗ (χ ⊃ Ku) reproduces M.
    pub factorization_matches: bool,
    pub factors_irreducible: (bool, bool),
    /// The factorization (U ⊃ K(p + p′)) ⊗ (χ^{⊕2} ⊃ K(u, u)).
    pub alternative_second_factor_irreducible: bool,
    pub alternative_matches: bool,
}

/// Product chains from all pairs of maximal normal factor chains and all
/// monotone interleavings of their steps.
pub fn product_chains(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>) -> Result<Vec<ProductChain>> {
    let cg = factor_chains(g)?;
    let ch = factor_chains(h)?;
    let mut out = Vec::new();
    for a in &cg {
        for b in &ch {
            for (la, lb) in interleavings(a, b) {
                out.push(ProductChain::new(g.clone(), la, h.clone(), lb)?);
            }
        }
    }
    Ok(out)
}

fn factor_chains(g: &Arc<FiniteGroup>) -> Result<Vec<Vec<Subgroup>>> {
    if g.order() == 1 {
        return Ok(vec![vec![Subgroup::trivial()]]);
    }
    Ok(g.maximal_normal_chains(None)?
        .into_iter()
        .map(|c| c.levels().to_vec())
        .collect())
}

/// Lattice paths from (0,0) to (|a|−1, |b|−1) with unit and diagonal steps.
fn interleavings(a: &[Subgroup], b: &[Subgroup]) -> Vec<(Vec<Subgroup>, Vec<Subgroup>)> {
    fn go(
        a: &[Subgroup],
        b: &[Subgroup],
        i: usize,
        j: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if i + 1 == a.len() && j + 1 == b.len() {
            out.push(cur.clone());
            return;
        }
        for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
            if i + di < a.len() && j + dj < b.len() {
                cur.push((i + di, j + dj));
                go(a, b, i + di, j + dj, cur, out);
                cur.pop();
            }
        }
    }
    let mut paths = Vec::new();
    go(a, b, 0, 0, &mut vec![(0, 0)], &mut paths);
    paths
        .into_iter()
        .map(|p| {
            (
                p.iter().map(|&(i, _)| a[i].clone()).collect(),
                p.iter().map(|&(_, j)| b[j].clone()).collect(),
            )
        })
        .collect()
}

/// Generators tried on an ambient with k one-dimensional components: all
/// ones, and for k ≤ `SIGN_VARIANTS_UP_TO` every sign pattern with a leading
/// +1.
pub const SIGN_VARIANTS_UP_TO: usize = 3;

fn generator_family(k: usize, n: u32) -> Vec<Vector> {
    let one = CycNumber::one(n);
    if k > SIGN_VARIANTS_UP_TO {
        return vec![vec![one; k]];
    }
    (0..1u32 << (k.saturating_sub(1)))
        .map(|mask| {
            (0..k)
                .map(|t| {
                    if t > 0 && mask >> (t - 1) & 1 == 1 {
                        -one.clone()
                    } else {
                        one.clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// Abelian products: every multiplicity-free ambient of 1-dimensional
/// irreducibles (at most 16 components) over every product chain, with the
/// generator family above. For each irreducible glider, a = bc must agree
/// with the existence of a tensor factorization found by exhaustive search,
/// and the regrouped factors must rebuild M. Non-abelian products: builds
/// the counterexample instead.
pub fn theorem_char_suite(g_name: &str, h_name: &str) -> Result<CharSuiteReport> {
    let g = Arc::new(build_named(g_name, usize::MAX)?);
    let h = Arc::new(build_named(h_name, usize::MAX)?);
    let product = FiniteGroup::direct_product(&g, &h);
    let mut report = CharSuiteReport {
        group: product.name().to_string(),
        abelian: product.is_abelian(),
        ..Default::default()
    };
    if !report.abelian {
        report.counterexample = Some(tensor_counterexample(g_name, h_name)?);
        return Ok(report);
    }
    let chains = product_chains(&g, &h)?;
    report.chains = chains.len();
    let (ng, nh) = (character_table(&g)?.len(), character_table(&h)?.len());
    let all: Vec<(usize, usize)> = (0..ng).flat_map(|i| (0..nh).map(move |j| (i, j))).collect();
    let mut jobs: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();
    for (ci, _) in chains.iter().enumerate() {
        for mask in 1u32..(1 << all.len()) {
            let subset: Vec<(usize, usize)> = all
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            if subset.len() <= 16 {
                jobs.push((ci, subset));
            }
        }
    }
    let results = par::try_map(&jobs, |(ci, subset)| -> Result<(usize, usize, usize, Vec<String>)> {
        let pc = &chains[*ci];
        let pm = ProductModule::new(pc, subset.iter().map(|&p| (p, 1)).collect())?;
        let (mut checked, mut irreducible, mut decomposable) = (0, 0, 0);
        let mut violations = Vec::new();
        for a in generator_family(subset.len(), pm.module.conductor()) {
            let m = Glider::build(&pc.chain, pm.module.clone(), a)?;
            checked += 1;
            if !m.is_irreducible() {
                continue;
            }
            irreducible += 1;
            let dec = is_tensor_decomposable(pc, &pm, &m)?;
            let found = search_tensor_factorization(pc, &pm, &m)?;
            if dec.decomposable {
                decomposable += 1;
            }
            if dec.decomposable != found.is_some() {
                violations.push(format!(
                    "chain {ci}, components {subset:?}: a = bc is {} but a factorization {}",
                    dec.decomposable,
                    if found.is_some() { "exists" } else { "does not exist" }
                ));
            }
            if dec.round_trip == Some(false) {
                violations.push(format!("chain {ci}, components {subset:?}: regrouped factors do not rebuild M"));
            }
            let t = dec.triple;
            if t.a > t.b * t.c || t.a < t.b.max(t.c) {
                violations.push(format!("chain {ci}, components {subset:?}: triple {t:?} out of range"));
            }
        }
        Ok((checked, irreducible, decomposable, violations))
    })?;
    for (c, i, d, v) in results {
        report.gliders_checked += c;
        report.irreducible += i;
        report.decomposable += d;
        report.violations.extend(v);
    }
    Ok(report)
}

/// Trivial chain e ⊂ G × H, Ω = (U ⊗ χ)^{⊕2} with U ∈ Irr(G) of the largest
/// degree and χ the first 1-dimensional irreducible of H, a = (p⊗u, p′⊗u).
pub fn tensor_counterexample(g_name: &str, h_name: &str) -> Result<TensorCounterexample> {
    let pc = ProductChain::from_specs(g_name, "", h_name, "")?;
    let (tg, th) = (pc.g_table()?, pc.h_table()?);
    let u = (0..tg.len())
        .max_by_key(|&i| (factor_degree(&tg, i), std::cmp::Reverse(i)))
        .expect("nonempty table");
    let (u, chi) = if factor_degree(&tg, u) > 1 {
        (u, 0)
    } else {
        return Err(Error::Precondition(format!("{g_name} has no irreducible of degree > 1")));
    };
    let deg = factor_degree(&tg, u);
    let pm = ProductModule::new(&pc, vec![((u, chi), 2)])?;
    let n = pm.module.conductor();
    let unit = |k: usize, n: u32| -> Vector {
        (0..deg)
            .map(|t| if t == k { CycNumber::one(n) } else { CycNumber::zero(n) })
            .collect()
    };
    let mut a = unit(0, n);
    a.extend(unit(1, n));
    let m = Glider::build(&pc.chain, pm.module.clone(), a)?;

    // (U^{⊕2} ⊃ K(p, p′)) ⊗ (χ ⊃ Ku)
    let g_mod = Arc::new(LabeledModule::new(
        pc.g.clone(),
        vec![(Arc::new(tg.irreps()[u].clone()), 2)],
    )?);
    let ng = g_mod.conductor();
    let (p, p2) = (unit(0, ng), unit(1, ng));
    let mut a1 = p.clone();
    a1.extend(p2.iter().cloned());
    let n1 = Glider::build_over(pc.g_levels.clone(), g_mod, a1)?;
    let n2 = factor_glider(&pc, Side::H, &[chi], None)?;
    let (_, t) = tensor_glider(&pc, &n1, &[u], &n2, &[chi])?;
    let factorization_matches = t.generator() == m.generator() && t.generalized_character()? == m.generalized_character()?;

    // (U ⊃ K(p + p′)) ⊗ (χ^{⊕2} ⊃ K(u, u))
    let sum: Vector = p.iter().zip(&p2).map(|(x, y)| x + y).collect();
    let alt1 = factor_glider(&pc, Side::G, &[u], Some(sum))?;
    let h_mod = Arc::new(LabeledModule::new(
        pc.h.clone(),
        vec![(Arc::new(th.irreps()[chi].clone()), 2)],
    )?);
    let nh = h_mod.conductor();
    let alt2 = Glider::build_over(pc.h_levels.clone(), h_mod, vec![CycNumber::one(nh); 2])?;
    let (_, alt) = tensor_glider(&pc, &alt1, &[u], &alt2, &[chi])?;
    let alternative_matches = alt.is_irreducible() == m.is_irreducible()
        && alt.generalized_character()? == m.generalized_character()?
        && crate::glider::same_subspace(alt.level(1), m.level(1));

    Ok(TensorCounterexample {
        components: format!("({u}:{chi})^2"),
        irreducible: m.is_irreducible(),
        triple: generalized_triple(&pm),
        factorization_matches,
        factors_irreducible: (n1.is_irreducible(), n2.is_irreducible()),
        alternative_second_factor_irreducible: alt2.is_irreducible(),
        alternative_matches,
    })
}

/// ∧: an irreducible of the index-p subgroup extends to p linear
/// characters; ∨: it induces to a single irreducible of degree p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lift {
    Wedge,
    Vee,
}

/// Outcome of the d = 3 case analysis on one product.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ThreeStepReport {
    pub group: String,
    pub gliders_checked: usize,
    pub irreducible: usize,
    /// Irreducible instances per case (∧∧, ∨∨, ∨∧, ∧∨).
    pub cases: [usize; 4],
    pub violations: Vec<String>,
}

fn lifts_over(table: &CharacterTable, top: &FiniteGroup, sub: &Subgroup, v: &crate::rep::CharacterVector) -> Result<(Lift, Vec<usize>)> {
    let _ = top;
    let sub_group = v.group().clone();
    let mut over = Vec::new();
    for (k, chi) in table.characters().iter().enumerate() {
        let res = chi.restrict(sub);
        let res = crate::rep::CharacterVector::new(sub_group.clone(), res.values().to_vec());
        if res.multiplicity_of(v)? > 0 {
            over.push(k);
        }
    }
    let lift = if over.len() == 1 && table.irreps()[over[0]].degree() > 1 {
        Lift::Vee
    } else {
        Lift::Wedge
    };
    Ok((lift, over))
}

/// d = 3 with dim M_1 = 1: for every pair of linear characters V of G_2 and
/// U of H_2 and every multiplicity-free ambient of irreducibles lying over
/// V ⊗ U, takes a = the sum of the (V ⊗ U)-eigenvectors. For each
/// irreducible M checks that the case predicted by the lifts of V and U
/// holds and that a tensor factorization exists exactly when a = bc.
pub fn three_step_suite(pc: &ProductChain) -> Result<ThreeStepReport> {
    if pc.length() != 3 {
        return Err(Error::Precondition("the case analysis needs d = 3".into()));
    }
    let (tg, th) = (pc.g_table()?, pc.h_table()?);
    let (g2, h2) = (pc.g_levels[2].clone(), pc.h_levels[2].clone());
    let g2_group = pc.g.subgroup_group(&g2);
    let h2_group = pc.h.subgroup_group(&h2);
    if !g2_group.is_abelian() || !h2_group.is_abelian() {
        return Err(Error::Precondition("G_2 and H_2 must be abelian".into()));
    }
    let rel_g = crate::hasse::relative_subgroup(&pc.g.whole(), &g2);
    let rel_h = crate::hasse::relative_subgroup(&pc.h.whole(), &h2);
    let tg2 = character_table(&g2_group)?;
    let th2 = character_table(&h2_group)?;
    let mut report = ThreeStepReport {
        group: pc.product.name().to_string(),
        ..Default::default()
    };
    let mut jobs = Vec::new();
    for v in tg2.characters() {
        let (lg, over_g) = lifts_over(&tg, &pc.g, &rel_g, v)?;
        for w in th2.characters() {
            let (lh, over_h) = lifts_over(&th, &pc.h, &rel_h, w)?;
            let pairs: Vec<(usize, usize)> = over_g.iter().flat_map(|&i| over_h.iter().map(move |&j| (i, j))).collect();
            for mask in 1u32..(1 << pairs.len()) {
                let subset: Vec<(usize, usize)> =
                    pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
                jobs.push((v.clone(), w.clone(), lg, lh, subset));
            }
        }
    }
    let results = par::try_map(&jobs, |(v, w, lg, lh, subset)| -> Result<Option<(usize, Vec<String>)>> {
        let pm = ProductModule::new(pc, subset.iter().map(|&p| (p, 1)).collect())?;
        let n = pm.module.conductor();
        // a: in each component the eigenvector of G_2 × H_2 with character v ⊗ w
        let mut a: Vector = Vec::new();
        for &(i, j) in subset {
            let x = eigenvector(&tg.irreps()[i], &g2, v, n)?;
            let y = eigenvector(&th.irreps()[j], &h2, w, n)?;
            for s in &x {
                for t in &y {
                    a.push(s * t);
                }
            }
        }
        let m = Glider::build(&pc.chain, pm.module.clone(), a)?;
        if m.level(1).dim() != 1 || !m.is_irreducible() {
            return Ok(None);
        }
        let case = match (lg, lh) {
            (Lift::Wedge, Lift::Wedge) => 0,
            (Lift::Vee, Lift::Vee) => 1,
            (Lift::Vee, Lift::Wedge) => 2,
            (Lift::Wedge, Lift::Vee) => 3,
        };
        let mut violations = Vec::new();
        let t = generalized_triple(&pm);
        let gi: Vec<usize> = subset.iter().map(|p| p.0).collect::<BTreeSet<_>>().into_iter().collect();
        let hj: Vec<usize> = subset.iter().map(|p| p.1).collect::<BTreeSet<_>>().into_iter().collect();
        let product_set = gi.len() * hj.len() == subset.len();
        let factorization = if product_set {
            let ng = gi.iter().fold(1, |c, &i| num_integer::lcm(c, tg.irreps()[i].conductor()));
            let nh = hj.iter().fold(1, |c, &j| num_integer::lcm(c, th.irreps()[j].conductor()));
            let x: Vec<Vector> = gi.iter().map(|&i| eigenvector(&tg.irreps()[i], &g2, v, ng)).collect::<Result<_>>()?;
            let y: Vec<Vector> = hj.iter().map(|&j| eigenvector(&th.irreps()[j], &h2, w, nh)).collect::<Result<_>>()?;
            let n1 = factor_glider(pc, Side::G, &gi, Some(x.concat()))?;
            let n2 = factor_glider(pc, Side::H, &hj, Some(y.concat()))?;
            let (_, tg_) = tensor_glider(pc, &n1, &gi, &n2, &hj)?;
            tg_.generalized_character()? == m.generalized_character()?
        } else {
            false
        };
        if factorization != (t.a == t.b * t.c) {
            violations.push(format!(
                "{:?}/{:?} components {subset:?}: factorization {factorization}, triple {t:?}",
                lg, lh
            ));
        }
        if case != 0 && !factorization {
            violations.push(format!("{lg:?}/{lh:?} components {subset:?}: not a tensor product"));
        }
        Ok(Some((case, violations)))
    })?;
    report.gliders_checked = jobs.len();
    for r in results.into_iter().flatten() {
        report.irreducible += 1;
        report.cases[r.0] += 1;
        report.violations.extend(r.1);
    }
    Ok(report)
}

/// Built-in d = 3 instances covering the four lift cases: Q8 and D8 with
/// C3, C2 with He27, and Q8 with He27. He27 uses Z(He27) ⊂ A ⊂ He27 with A
/// the first normal abelian subgroup of order 9.
pub fn three_step_instances() -> Result<Vec<ProductChain>> {
    let he = Arc::new(build_named("He27", usize::MAX)?);
    let z = he.center();
    let a = he
        .normal_subgroups()?
        .into_iter()
        .find(|s| s.order() == 9 && z.is_subset(s) && he.subgroup_group(s).is_abelian())
        .ok_or_else(|| Error::Precondition("He27 has no normal abelian subgroup of order 9".into()))?;
    let named = |n: &str| build_named(n, usize::MAX).map(Arc::new);
    let levels = |g: &FiniteGroup, spec: &str| factor_levels(g, spec);
    let (q8, d8, c2, c3) = (named("Q8")?, named("D8")?, named("C2")?, named("C3")?);
    let he_levels = vec![Subgroup::trivial(), z, a, he.whole()];
    Ok(vec![
        ProductChain::new(q8.clone(), levels(&q8, "Z2,Z4i")?, c3.clone(), levels(&c3, "e,C3,=")?)?,
        ProductChain::new(d8.clone(), levels(&d8, "Z2,V4a")?, c3.clone(), levels(&c3, "e,C3,=")?)?,
        ProductChain::new(c2.clone(), levels(&c2, "e,C2,=")?, he.clone(), he_levels.clone())?,
        ProductChain::new(q8.clone(), levels(&q8, "Z2,Z4i")?, he, he_levels)?,
    ])
}

/// A vector of `rep` on which the subgroup acts by the linear character
/// `chi` (given on the subgroup viewed as a group).
fn eigenvector(rep: &Representation, sub: &Subgroup, chi: &crate::rep::CharacterVector, n: u32) -> Result<Vector> {
    let deg = rep.degree();
    let mut space = crate::linalg::Subspace::full(n, deg);
    for (k, &x) in sub.elements().iter().enumerate() {
        let lambda = chi.value_at(k).lift(n);
        let op = rep.matrix(x).lift(n);
        let e = match op.eigenspace(&lambda) {
            Some(e) => e,
            None => return Err(Error::Precondition("no eigenvector for the character".into())),
        };
        space = space.intersect(&e)?;
    }
    space
        .basis()
        .first()
        .cloned()
        .ok_or_else(|| Error::Precondition("character does not occur".into()))
}

/// Matrix of the glider generator blocks (used by tests).
pub fn generator_blocks(m: &Glider) -> Vec<Vector> {
    m.ambient()
        .blocks()
        .iter()
        .map(|b| m.generator()[b.offset..b.offset + b.degree].to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2c3() -> ProductChain {
        ProductChain::from_specs("C2", "", "C3", "").unwrap()
    }

    #[test]
    fn tensor_of_linear_characters_gives_all_of_c6() {
        let pc = c2c3();
        let mut seen = Vec::new();
        for i in 0..2 {
            for j in 0..3 {
                let pm = ProductModule::new(&pc, vec![((i, j), 1)]).unwrap();
                let chi = pm.module.character();
                assert!(!seen.contains(&chi.sort_key()));
                seen.push(chi.sort_key());
            }
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn triples_of_small_ambients() {
        let pc = c2c3();
        let pm = ProductModule::parse(&pc, "0:0,0:1").unwrap();
        assert_eq!(glider_triple(&pc, &pm).unwrap(), GliderTriple { a: 2, b: 1, c: 2 });
        let pm = ProductModule::parse(&pc, "0:0,1:1").unwrap();
        assert_eq!(glider_triple(&pc, &pm).unwrap(), GliderTriple { a: 2, b: 2, c: 2 });
        let pm = ProductModule::parse(&pc, "0:0^2").unwrap();
        assert!(glider_triple(&pc, &pm).is_err());
    }

    #[test]
    fn decomposable_glider_round_trips() {
        let pc = c2c3();
        let pm = ProductModule::parse(&pc, "0:0,0:1").unwrap();
        let n = pm.module.conductor();
        let m = Glider::build(&pc.chain, pm.module.clone(), vec![CycNumber::one(n); 2]).unwrap();
        assert!(m.is_irreducible());
        let d = is_tensor_decomposable(&pc, &pm, &m).unwrap();
        assert!(d.decomposable);
        assert_eq!(d.round_trip, Some(true));
        assert!(search_tensor_factorization(&pc, &pm, &m).unwrap().is_some());

        let pm = ProductModule::parse(&pc, "0:0,1:1").unwrap();
        let m = Glider::build(&pc.chain, pm.module.clone(), vec![CycNumber::one(n); 2]).unwrap();
        let d = is_tensor_decomposable(&pc, &pm, &m).unwrap();
        assert!(!d.decomposable);
        assert!(search_tensor_factorization(&pc, &pm, &m).unwrap().is_none());
    }

    #[test]
    fn quaternion_tensor_counterexample() {
        let c = tensor_counterexample("Q8", "C3").unwrap();
        assert!(c.irreducible);
        assert_eq!(c.triple, GliderTriple { a: 2, b: 1, c: 1 });
        assert!(c.factorization_matches);
        assert_eq!(c.factors_irreducible, (true, true));
        assert!(!c.alternative_second_factor_irreducible);
    }
}

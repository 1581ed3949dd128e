//! Decomposition (inertia) groups attached to a square of chain subgroups.
//!
//! A square is H_i ⊂ H_{i+1}, G_i ⊂ G_{i+1} with H_i = H_{i+1} ∩ G_i, both
//! H_{i+1} and G_i normal in G_{i+1}, and H_{i+1}G_i = G_{i+1}. For a
//! building block S (an irreducible H_i-subspace of a G_{i+1}-module Ω) the
//! pentad consists of
//!
//! * H_i′  = inertia group of χ_S in H_{i+1},
//! * G_i′  = inertia group of χ_S in G_i,
//! * H_i²  = inertia group of χ_S in G_{i+1},
//! * G_i″  = stabilizer in G_{i+1} of the character of the G_i-module KG_i·S,
//! * G_{i+1}′ = stabilizer in G_{i+1} of the character of the H_{i+1}-module
//!   KH_{i+1}·S,
//!
//! the last two computed from the actual spans inside Ω.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cyclo::CycNumber;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::group::SubgroupChain;
use crate::hasse::{chain_hasse, relative_subgroup, ChainHasse};
use crate::linalg::{parse_vector, Subspace, Vector};
use crate::registry::{build_named, subgroup_token};
use crate::rep::{character_table, decompose_restriction, CharacterVector, LabeledModule};

/// Per-element values of a class function on a subgroup, keyed by parent ids.
#[derive(Clone, Debug)]
pub struct SubgroupCharacter {
    pub subgroup: Subgroup,
    /// values[k] belongs to subgroup.elements()[k]
    pub values: Vec<CycNumber>,
}

impl SubgroupCharacter {
    pub fn value(&self, g: usize) -> Option<&CycNumber> {
        self.subgroup.index_of(g).map(|k| &self.values[k])
    }

    /// As a class function of the subgroup viewed as a group.
    pub fn to_character(&self, parent: &FiniteGroup) -> CharacterVector {
        CharacterVector::from_element_values(parent.subgroup_group(&self.subgroup), &self.values)
    }

    /// ⟨χ, χ⟩ computed from element values.
    pub fn norm_is_one(&self, parent: &FiniteGroup) -> Result<bool> {
        let chi = self.to_character(parent);
        Ok(chi.inner_product(&chi)? == num_rational::BigRational::from_integer(1.into()))
    }
}

/// Elements x of `within` with χ(x⁻¹hx) = χ(h) for all h ∈ H. Requires
/// `within` to normalize H.
pub fn inertia_in(g: &FiniteGroup, within: &Subgroup, chi: &SubgroupCharacter) -> Result<Subgroup> {
    let h = &chi.subgroup;
    let mut keep = Vec::new();
    for &x in within.elements() {
        let xinv = g.inv(x);
        let mut fixes = true;
        for (k, &y) in h.elements().iter().enumerate() {
            let c = g.conj(xinv, y);
            let v = chi
                .value(c)
                .ok_or_else(|| Error::NotNormal(format!("{} is not normalized", g.name())))?;
            if v != &chi.values[k] {
                fixes = false;
                break;
            }
        }
        if fixes {
            keep.push(x);
        }
    }
    g.subgroup(&keep)
}

/// The inertia group in G of a character of a normal subgroup H (given as a
/// class function of `g.subgroup_group(h)`).
pub fn inertia_group(g: &Arc<FiniteGroup>, h: &Subgroup, chi: &CharacterVector) -> Result<Subgroup> {
    if !g.is_normal(h) {
        return Err(Error::NotNormal(format!("subgroup of order {} in {}", h.order(), g.name())));
    }
    let values: Vec<CycNumber> = (0..h.order()).map(|k| chi.value_at(k).clone()).collect();
    inertia_in(
        g,
        &g.whole(),
        &SubgroupCharacter {
            subgroup: h.clone(),
            values,
        },
    )
}

/// H_i ⊂ H_{i+1}, G_i ⊂ G_{i+1}, all subgroups of one group.
#[derive(Clone, Debug)]
pub struct ChainSquare {
    pub group: Arc<FiniteGroup>,
    pub h_low: Subgroup,
    pub h_high: Subgroup,
    pub g_low: Subgroup,
    pub g_high: Subgroup,
}

impl ChainSquare {
    pub fn new(
        group: Arc<FiniteGroup>,
        h_low: Subgroup,
        h_high: Subgroup,
        g_low: Subgroup,
        g_high: Subgroup,
    ) -> Result<Self> {
        let sq = ChainSquare {
            group,
            h_low,
            h_high,
            g_low,
            g_high,
        };
        sq.validate()?;
        Ok(sq)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.group;
        let top = g.subgroup_group(&self.g_high);
        let rel = |s: &Subgroup| -> Result<Subgroup> {
            if !s.is_subset(&self.g_high) {
                return Err(Error::NotSubgroup("square level outside G_{i+1}".into()));
            }
            Ok(relative_subgroup(&self.g_high, s))
        };
        if !self.h_low.is_subset(&self.h_high) || !self.h_low.is_subset(&self.g_low) {
            return Err(Error::NotSubgroup("H_i must lie in H_{i+1} and G_i".into()));
        }
        if g.intersection(&self.h_high, &self.g_low) != self.h_low {
            return Err(Error::Precondition("H_i differs from H_{i+1} ∩ G_i".into()));
        }
        for s in [&self.h_high, &self.g_low, &self.h_low] {
            if !top.is_normal(&rel(s)?) {
                return Err(Error::NotNormal("square level in G_{i+1}".into()));
            }
        }
        if self.h_high.order() * self.g_low.order() != self.g_high.order() * self.h_low.order() {
            return Err(Error::Precondition(
                "square violates H_{i+1}G_i = G_{i+1}".into(),
            ));
        }
        Ok(())
    }

    /// The same square inside G_{i+1} viewed as a group.
    pub fn localized(&self) -> ChainSquare {
        if self.g_high.order() == self.group.order() {
            return self.clone();
        }
        let top = self.group.subgroup_group(&self.g_high);
        let rel = |s: &Subgroup| relative_subgroup(&self.g_high, s);
        ChainSquare {
            h_low: rel(&self.h_low),
            h_high: rel(&self.h_high),
            g_low: rel(&self.g_low),
            g_high: top.whole(),
            group: top,
        }
    }

    fn index(&self, big: &Subgroup, small: &Subgroup) -> usize {
        big.order() / small.order()
    }

    /// Parses `H_i,H_{i+1},G_i,G_{i+1}` as four subgroup tokens.
    pub fn parse(group: Arc<FiniteGroup>, spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::MalformedSpec(format!(
                "square needs four subgroups H_i,H_(i+1),G_i,G_(i+1), got '{spec}'"
            )));
        }
        let subs = parts
            .iter()
            .map(|t| subgroup_token(&group, t))
            .collect::<Result<Vec<_>>>()?;
        let mut it = subs.into_iter();
        let (a, b, c, d) = (it.next(), it.next(), it.next(), it.next());
        ChainSquare::new(group, a.unwrap(), b.unwrap(), c.unwrap(), d.unwrap())
    }

    /// Diagram of the chain H_i ⊂ G_i ⊂ G_{i+1}, whose top-level labels name
    /// the ambient components.
    pub fn diagram(&self) -> Result<ChainHasse> {
        let g = &self.group;
        let mut levels = vec![Subgroup::trivial()];
        for s in [&self.h_low, &self.g_low, &self.g_high] {
            if s.order() > levels.last().map_or(0, Subgroup::order) {
                levels.push(s.clone());
            }
        }
        if self.g_high.order() != g.order() {
            return Err(Error::Precondition("labels need G_(i+1) to be the whole group".into()));
        }
        chain_hasse(g, &SubgroupChain::new(g, levels)?)
    }

    /// Ω = ⊕ of the top irreducibles with the given diagram labels.
    pub fn labeled_ambient(&self, labels: &[&str]) -> Result<Arc<LabeledModule>> {
        let h = self.diagram()?;
        let top = &h.levels[0];
        let comps = labels
            .iter()
            .map(|l| {
                let i = top
                    .find(l.trim())
                    .ok_or_else(|| Error::MalformedSpec(format!("unknown label '{l}'")))?;
                Ok((Arc::new(top.table.irreps()[i].clone()), 1))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(LabeledModule::new(self.group.clone(), comps)?))
    }
}

/// The Q8 square Z2 ⊂ Z4i, Z4j ⊂ Q8 with Ω = U ⊕ T3 ⊕ T2 and the blocks
/// spanned by a (−i)-eigenvector of j in U and by t3 + t2.
pub fn quaternion_square() -> Result<(ChainSquare, [BuildingBlock; 2])> {
    let g = Arc::new(build_named("Q8", 8)?);
    let sq = ChainSquare::parse(g.clone(), "Z2,Z4i,Z4j,Q8")?;
    let omega = sq.labeled_ambient(&["U", "T3", "T2"])?;
    let n = omega.conductor();
    let (u, _) = &omega.components()[0];
    let j = g.element_by_label("j").expect("Q8 labels");
    let minus_i = CycNumber::root_of_unity(n, 3 * n as i64 / 4);
    let eig = u
        .matrix(j)
        .eigenspace(&minus_i)
        .ok_or_else(|| Error::Precondition("j has no (−i)-eigenvector".into()))?;
    let mut e1 = eig.basis()[0].clone();
    e1.extend([CycNumber::zero(n), CycNumber::zero(n)]);
    let t = parse_vector("0,0,1,1", n)?;
    let b1 = BuildingBlock::new(&sq, omega.clone(), &[e1])?;
    let b2 = BuildingBlock::new(&sq, omega, &[t])?;
    Ok((sq, [b1, b2]))
}

/// An irreducible H_i-subspace of a module over the square's group.
#[derive(Clone, Debug)]
pub struct BuildingBlock {
    pub ambient: Arc<LabeledModule>,
    pub space: Subspace,
    pub character: SubgroupCharacter,
}

fn traces_on(ambient: &LabeledModule, w: &Subspace, k: &Subgroup) -> Result<SubgroupCharacter> {
    let values = k
        .elements()
        .iter()
        .map(|&x| w.trace_of(&ambient.matrix(x)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubgroupCharacter {
        subgroup: k.clone(),
        values,
    })
}

impl BuildingBlock {
    /// The span of `vectors` inside Ω, which must be an irreducible
    /// H_i-module.
    pub fn new(square: &ChainSquare, ambient: Arc<LabeledModule>, vectors: &[Vector]) -> Result<Self> {
        if ambient.group().order() != square.group.order() {
            return Err(Error::Precondition("ambient over a different group".into()));
        }
        let space = Subspace::span(ambient.conductor(), ambient.dim(), vectors);
        if space.is_zero() {
            return Err(Error::Precondition("building block is zero".into()));
        }
        for &s in &square.group.generators_of(&square.h_low) {
            if !space.is_invariant(&ambient.matrix(s)) {
                return Err(Error::NotInvariant);
            }
        }
        let character = traces_on(&ambient, &space, &square.h_low)?;
        if !character.norm_is_one(&square.group)? {
            return Err(Error::Precondition("building block is not irreducible".into()));
        }
        Ok(BuildingBlock {
            ambient,
            space,
            character,
        })
    }

    /// KK·S for a subgroup K.
    pub fn span_under(&self, k: &Subgroup) -> Subspace {
        self.ambient.orbit_span(k, self.space.basis())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Situation {
    S1,
    S2,
    S3,
    #[serde(rename = "max-case-1")]
    MaxCase1,
    #[serde(rename = "max-case-2")]
    MaxCase2,
    #[serde(rename = "max-case-3")]
    MaxCase3,
    #[serde(rename = "other")]
    Other,
}

impl fmt::Display for Situation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Situation::S1 => "S1",
            Situation::S2 => "S2",
            Situation::S3 => "S3",
            Situation::MaxCase1 => "max-case-1",
            Situation::MaxCase2 => "max-case-2",
            Situation::MaxCase3 => "max-case-3",
            Situation::Other => "other",
        };
        f.write_str(s)
    }
}

/// The five decomposition groups of a building block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pentad {
    pub h_prime: Subgroup,
    pub g_prime: Subgroup,
    pub h_sq: Subgroup,
    pub g_dprime: Subgroup,
    pub g_next_prime: Subgroup,
    pub situation: Situation,
}

impl Pentad {
    pub fn groups(&self) -> [&Subgroup; 5] {
        [
            &self.h_prime,
            &self.g_prime,
            &self.h_sq,
            &self.g_dprime,
            &self.g_next_prime,
        ]
    }
}

pub fn pentad(square: &ChainSquare, s: &BuildingBlock) -> Result<Pentad> {
    let g = &square.group;
    let chi = &s.character;
    let h_prime = inertia_in(g, &square.h_high, chi)?;
    let g_prime = inertia_in(g, &square.g_low, chi)?;
    let h_sq = inertia_in(g, &square.g_high, chi)?;
    let over_g = traces_on(&s.ambient, &s.span_under(&square.g_low), &square.g_low)?;
    let g_dprime = inertia_in(g, &square.g_high, &over_g)?;
    let over_h = traces_on(&s.ambient, &s.span_under(&square.h_high), &square.h_high)?;
    let g_next_prime = inertia_in(g, &square.g_high, &over_h)?;
    let mut p = Pentad {
        h_prime,
        g_prime,
        h_sq,
        g_dprime,
        g_next_prime,
        situation: Situation::Other,
    };
    p.situation = classify_situation(&p, square);
    Ok(p)
}

/// Tags: max-case-3 (H² = G_{i+1}), max-case-1 (H² = G_i), max-case-2
/// (H² = H_{i+1}), S3 (H² = H_i), S1/S2 (H′ = G′ = H_i with H² strictly
/// between H_i and G_{i+1}, and G_{i+1}′ = H_{i+1} resp. G_{i+1}), other.
/// The first matching tag wins in that order.
pub fn classify_situation(p: &Pentad, sq: &ChainSquare) -> Situation {
    if p.h_sq == sq.g_high {
        Situation::MaxCase3
    } else if p.h_sq == sq.g_low {
        Situation::MaxCase1
    } else if p.h_sq == sq.h_high {
        Situation::MaxCase2
    } else if p.h_sq == sq.h_low {
        Situation::S3
    } else if p.h_prime == sq.h_low && p.g_prime == sq.h_low && p.g_next_prime == sq.h_high {
        Situation::S1
    } else if p.h_prime == sq.h_low && p.g_prime == sq.h_low && p.g_next_prime == sq.g_high {
        Situation::S2
    } else {
        Situation::Other
    }
}

/// One failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

/// Outcome of checking every block of a square.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SquareReport {
    pub blocks_checked: usize,
    pub tags: Vec<(String, usize)>,
    /// S1 blocks whose KG_{i+1}·S is too small for the index identity.
    pub index_identity_skipped: usize,
    /// Containments, the pentad biconditionals, the center case and the index
    /// identity.
    pub violations: Vec<Violation>,
    /// Failed conclusions of the p-group statements (degree counts, quotient
    /// and generator, split complement, S3), kept as counterexample bundles.
    pub findings: Vec<Violation>,
}

fn count_tag(tags: &mut Vec<(String, usize)>, tag: Situation) {
    let name = tag.to_string();
    match tags.iter_mut().find(|(t, _)| *t == name) {
        Some((_, n)) => *n += 1,
        None => tags.push((name, 1)),
    }
}

fn is_cyclic_quotient_order_p2(g: &FiniteGroup, top: &Subgroup, n: &Subgroup, p: usize) -> Result<bool> {
    // G_{i+1}/H_i elementary abelian of order p²
    let sub = g.subgroup_group(top);
    let (q, _) = sub.quotient(&relative_subgroup(top, n))?;
    Ok(q.order() == p * p && q.is_abelian() && (0..q.order()).all(|x| q.pow(x, p) == 0))
}

/// Checks the pentad biconditionals and, per detected situation, the conclusions of the
/// statements about S1/S2/S3 for p-group tops.
pub fn verify_square(square: &ChainSquare, blocks: &[BuildingBlock]) -> Result<SquareReport> {
    let g = &square.group;
    let mut report = SquareReport::default();
    let center_case = {
        let top = g.subgroup_group(&square.g_high);
        let z = top.center();
        relative_subgroup(&square.g_high, &square.h_low).is_subset(&z)
    };
    let top_prime = g.subgroup_group(&square.g_high).prime_power();
    for s in blocks {
        report.blocks_checked += 1;
        let p = pentad(square, s)?;
        count_tag(&mut report.tags, p.situation);
        let mut violations = Vec::new();
        let mut findings = Vec::new();
        let mut fail = |check: &str, detail: String| {
            violations.push(Violation {
                check: check.into(),
                detail,
            })
        };
        let mut found = |check: &str, detail: String| {
            findings.push(Violation {
                check: check.into(),
                detail,
            })
        };
        let desc = || format!("square {:?}, block dim {}, pentad {:?}", square_ids(square), s.space.dim(), p);
        // containments
        let chain_ok = square.h_low.is_subset(&p.h_prime)
            && p.h_prime.is_subset(&square.h_high)
            && square.h_low.is_subset(&p.g_prime)
            && p.g_prime.is_subset(&square.g_low)
            && square.h_low.is_subset(&p.h_sq)
            && square.g_low.is_subset(&p.g_dprime)
            && square.h_high.is_subset(&p.g_next_prime);
        if !chain_ok {
            fail("containments", desc());
        }
        if !g.product_set(&p.h_prime, &p.g_prime).iter().all(|&x| p.h_sq.contains(x)) {
            fail("H'G' in H^2", desc());
        }
        let eq1 = (p.h_sq == square.g_low) == (p.g_prime == square.g_low && p.h_prime == square.h_low);
        let eq2 = (p.h_sq == square.h_high) == (p.g_prime == square.h_low && p.h_prime == square.h_high);
        let eq3 = (p.h_sq == square.g_high) == (p.g_prime == square.g_low && p.h_prime == square.h_high);
        for (ok, name) in [(eq1, "biconditional (i)"), (eq2, "biconditional (ii)"), (eq3, "biconditional (iii)")] {
            if !ok {
                fail(name, desc());
            }
        }
        if center_case && p.situation != Situation::MaxCase3 {
            fail("center case", desc());
        }
        match p.situation {
            Situation::S1 | Situation::S2 => {
                if p.situation == Situation::S1 {
                    let whole = s.span_under(&square.g_high);
                    let expected = square.index(&square.g_high, &square.h_low) * s.space.dim();
                    if whole.dim() == expected {
                        let res = traces_on(&s.ambient, &whole, &square.h_low)?;
                        let m = res
                            .to_character(g)
                            .multiplicity_of(&s.character.to_character(g))?;
                        if square.index(&square.g_high, &p.h_sq) * m
                            != square.index(&square.g_high, &square.h_low)
                        {
                            fail("index identity", format!("{} m'={m}", desc()));
                        }
                    } else {
                        report.index_identity_skipped += 1;
                    }
                }
                if let Some((prime, _)) = top_prime {
                    check_p_group_situation(square, s, &p, prime, &mut found)?;
                }
            }
            Situation::S3 => {
                if top_prime.is_some() && (p.g_next_prime != square.h_high || p.g_dprime != square.g_low) {
                    found("situation 3 proposition", desc());
                }
            }
            _ => {}
        }
        report.violations.extend(violations);
        report.findings.extend(findings);
    }
    Ok(report)
}

fn square_ids(sq: &ChainSquare) -> [Vec<usize>; 4] {
    [
        sq.h_low.elements().to_vec(),
        sq.h_high.elements().to_vec(),
        sq.g_low.elements().to_vec(),
        sq.g_high.elements().to_vec(),
    ]
}

fn check_p_group_situation(
    square: &ChainSquare,
    s: &BuildingBlock,
    p: &Pentad,
    prime: usize,
    fail: &mut impl FnMut(&str, String),
) -> Result<()> {
    let g = &square.group;
    let desc = format!("square {:?}, pentad {:?}", square_ids(square), p);
    if !is_cyclic_quotient_order_p2(g, &square.g_high, &square.h_low, prime)? {
        fail("p-group quotient", desc.clone());
    }
    let f = &p.h_sq;
    let witness = f.elements().iter().any(|&x| {
        !square.h_high.contains(x)
            && !square.g_low.contains(x)
            && g.join(&square.h_low, &g.generate(&[x])) == *f
    });
    if !witness {
        fail("p-group generator", desc.clone());
    }
    // the degree counts only apply to S1
    if p.situation != Situation::S1 {
        return check_complement(square, p, prime, &desc, fail);
    }
    let hl = g.subgroup_group(&square.h_low);
    let hh = g.subgroup_group(&square.h_high);
    let t_low = character_table(&hl)?;
    let t_high = character_table(&hh)?;
    let deg = s.space.dim();
    if t_low.degrees().iter().filter(|&&d| d == deg).count() < prime {
        fail("degree count low", desc.clone());
    }
    let rel = relative_subgroup(&square.h_high, &square.h_low);
    let mut spread = 0;
    for chi in t_high.characters() {
        let res = chi.restrict(&rel);
        let res = CharacterVector::new(t_low.group().clone(), res.values().to_vec());
        let mults = t_low.decompose(&res)?;
        let degs = t_low.degrees();
        let distinct = mults.iter().zip(&degs).filter(|(&m, &d)| m == 1 && d == deg).count();
        if distinct >= prime && mults.iter().zip(&degs).all(|(&m, &d)| m == 0 || (m == 1 && d == deg)) {
            spread += 1;
        }
    }
    if spread < prime {
        fail("degree count high", desc.clone());
    }
    check_complement(square, p, prime, &desc, fail)
}

// split extension over H_i and the order of H_i
fn check_complement(
    square: &ChainSquare,
    _p: &Pentad,
    prime: usize,
    desc: &str,
    fail: &mut impl FnMut(&str, String),
) -> Result<()> {
    if square.h_low.order() == prime {
        fail("corollary H_i != C_p", desc.to_string());
    }
    if !has_noncentral_complement(&square.group, &square.g_high, &square.h_low, prime)? {
        fail("split complement", desc.to_string());
    }
    Ok(())
}

/// Some K ≤ top with K ∩ N = e, KN = top, K ≅ C_p × C_p and K not
/// centralizing N.
fn has_noncentral_complement(g: &FiniteGroup, top: &Subgroup, n: &Subgroup, p: usize) -> Result<bool> {
    let elems: Vec<usize> = top
        .elements()
        .iter()
        .copied()
        .filter(|&x| x != 0 && g.element_order(x) == p)
        .collect();
    for (ai, &a) in elems.iter().enumerate() {
        for &b in &elems[ai + 1..] {
            if g.mul(a, b) != g.mul(b, a) {
                continue;
            }
            let k = g.generate(&[a, b]);
            if k.order() != p * p || g.intersection(&k, n).order() != 1 {
                continue;
            }
            if g.join(&k, n) != *top {
                continue;
            }
            let centralizes = k
                .elements()
                .iter()
                .all(|&x| n.elements().iter().all(|&y| g.mul(x, y) == g.mul(y, x)));
            if !centralizes {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Candidate building blocks: for each irreducible U of the square's group,
/// the H_i-irreducible summands of U; and for each pair U ≠ U′ with a common
/// H_i-constituent, the diagonal copy inside U ⊕ U′.
pub fn enumerate_blocks(square: &ChainSquare) -> Result<Vec<BuildingBlock>> {
    let g = &square.group;
    let table = character_table(g)?;
    let mut pieces: Vec<Vec<(usize, Vec<Vector>)>> = Vec::new();
    let mut out = Vec::new();
    for u in table.irreps() {
        let module = Arc::new(LabeledModule::irreducible(Arc::new(u.clone())));
        let parts = decompose_restriction(u, &square.h_low)?;
        let mut mine = Vec::new();
        for part in parts {
            out.push(BuildingBlock::new(square, module.clone(), &part.basis)?);
            mine.push((part.irrep, part.basis));
        }
        pieces.push(mine);
    }
    let irreps = table.irreps();
    for i in 0..irreps.len() {
        for j in i + 1..irreps.len() {
            let Some((a, b)) = pieces[i]
                .iter()
                .find_map(|(k, va)| pieces[j].iter().find(|(l, _)| l == k).map(|(_, vb)| (va, vb)))
            else {
                continue;
            };
            let module = Arc::new(LabeledModule::new(
                g.clone(),
                vec![(Arc::new(irreps[i].clone()), 1), (Arc::new(irreps[j].clone()), 1)],
            )?);
            let c = module.conductor();
            let vectors: Vec<Vector> = a
                .iter()
                .zip(b)
                .map(|(x, y)| x.iter().chain(y.iter()).map(|t| t.lift(c)).collect())
                .collect();
            out.push(BuildingBlock::new(square, module, &vectors)?);
        }
    }
    Ok(out)
}

/// Squares (H_i, H_{i+1}, G_i, G_{i+1}) from every maximal normal chain of
/// G and every normal subgroup H, with H_k = H ∩ G_k, keeping those with
/// H_{i+1}G_i = G_{i+1}; duplicates removed.
pub fn enumerate_squares(g: &Arc<FiniteGroup>) -> Result<Vec<ChainSquare>> {
    let chains = g.maximal_normal_chains(None)?;
    let normals = g.normal_subgroups()?;
    let mut seen: Vec<[Subgroup; 4]> = Vec::new();
    let mut out = Vec::new();
    for c in &chains {
        for h in &normals {
            let hs: Vec<Subgroup> = c.levels().iter().map(|gk| g.intersection(h, gk)).collect();
            for i in 0..c.length() {
                let key = [
                    hs[i].clone(),
                    hs[i + 1].clone(),
                    c.level(i).clone(),
                    c.level(i + 1).clone(),
                ];
                if hs[i + 1].order() * c.level(i).order() != c.level(i + 1).order() * hs[i].order() {
                    continue;
                }
                if seen.contains(&key) {
                    continue;
                }
                seen.push(key.clone());
                let [a, b, cc, d] = key;
                out.push(ChainSquare::new(g.clone(), a, b, cc, d)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{build_named, subgroup_token};

    #[test]
    fn quaternion_pentads() {
        let (sq, [e1, t]) = quaternion_square().unwrap();
        let g = &sq.group;
        let names = |b: &BuildingBlock| {
            let p = pentad(&sq, b).unwrap();
            let mut v: Vec<String> = p.groups().iter().map(|x| crate::registry::subgroup_name(g, x)).collect();
            v.sort();
            v
        };
        assert_eq!(names(&e1), ["Q8", "Q8", "Z4i", "Z4j", "Z4j"]);
        assert_eq!(names(&t), ["Q8", "Q8", "Q8", "Z4i", "Z4j"]);
        let r = verify_square(&sq, &[e1, t]).unwrap();
        assert!(r.violations.is_empty());
    }

    #[test]
    fn faithful_character_of_z4j_has_small_inertia() {
        let g = Arc::new(build_named("Q8", 64).unwrap());
        let z4j = subgroup_token(&g, "Z4j").unwrap();
        let sub = g.subgroup_group(&z4j);
        let t = character_table(&sub).unwrap();
        let j = z4j.index_of(g.element_by_label("j").unwrap()).unwrap();
        let faithful = t
            .characters()
            .iter()
            .find(|c| c.value_at(j) == &CycNumber::root_of_unity(4, 1))
            .unwrap();
        assert_eq!(inertia_group(&g, &z4j, faithful).unwrap(), z4j);
        let trivial = &t.characters()[0];
        assert_eq!(inertia_group(&g, &z4j, trivial).unwrap(), g.whole());
    }
}

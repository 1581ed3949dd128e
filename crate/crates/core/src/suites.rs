//! Brute-force verification suites over the built-in groups.
//!
//! Each suite returns a [`SuiteReport`]; `violations` lists failed
//! statements the suite is meant to confirm, `findings` lists failures of
//! statements that are reported rather than asserted.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::clifford::{enumerate_blocks, enumerate_squares, verify_square};
use crate::error::{Error, Result};
use crate::glider::{extended_glider_family, Glider};
use crate::group::FiniteGroup;
use crate::hasse::restricted_multiplicity;
use crate::linalg::{CycMatrix, Vector};
use crate::nilpotent::{
    exclusion_search, is_tensor_decomposable, theorem_char_suite, three_step_instances, three_step_suite,
    GliderTriple, ProductChain, ProductModule,
};
use crate::par;
use crate::random::{random_nonzero_vector, rng};
use crate::registry::{build_named, builtin_groups};
use crate::rep::{character_table, LabeledModule};
use crate::CycNumber;

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 6] = ["group-algebra", "cyclic-module", "pgroup-thm", "anti-diagonal", "clifford", "nilpotent"];

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub instances_checked: usize,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.instances_checked > 0
    }

    fn note(&mut self, key: &str, v: Value) {
        self.summary.insert(key.to_string(), v);
    }
}

/// Options shared by the suites; `max_order` bounds the groups scanned
/// where a suite has a family of built-in groups.
#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub max_order: usize,
    pub seed: u64,
    pub instances: usize,
    pub timing: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_order: 0,
            seed: 0,
            instances: 200,
            timing: false,
        }
    }
}

/// Default order bound per suite (used when `max_order` is 0).
pub fn default_max_order(suite: &str) -> usize {
    match suite {
        "group-algebra" => 64,
        "cyclic-module" => 32,
        "pgroup-thm" => 32,
        "anti-diagonal" => 16,
        "clifford" => 32,
        _ => 0,
    }
}

pub fn run_suite(name: &str, opts: SuiteOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let cap = if opts.max_order == 0 { default_max_order(name) } else { opts.max_order };
    let mut report = match name {
        "group-algebra" => group_algebra(cap)?,
        "cyclic-module" => cyclic_module(cap, opts.instances, opts.seed)?,
        "pgroup-thm" => pgroup_thm(cap)?,
        "anti-diagonal" => anti_diagonal(cap, opts.seed)?,
        "clifford" => clifford(cap)?,
        "nilpotent" => nilpotent(opts.seed)?,
        _ => {
            return Err(Error::MalformedSpec(format!(
                "unknown suite '{name}' (expected one of {})",
                SUITES.join(", ")
            )))
        }
    };
    if opts.timing {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Built-in groups of order ≤ cap whose character table is computable.
pub fn groups_with_tables(cap: usize) -> Vec<Arc<FiniteGroup>> {
    builtin_groups(cap)
        .into_iter()
        .filter(|g| character_table(g).is_ok())
        .collect()
}

/// Σ deg² = |G| for every built-in group with a table; Q8 and D8 have
/// degrees {1,1,1,1,2}.
pub fn group_algebra(cap: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("group-algebra");
    let mut skipped = Vec::new();
    for g in builtin_groups(cap) {
        let t = match character_table(&g) {
            Ok(t) => t,
            Err(_) => {
                skipped.push(g.name().to_string());
                continue;
            }
        };
        r.instances_checked += 1;
        let sum: usize = t.degrees().iter().map(|d| d * d).sum();
        if sum != g.order() {
            r.violations.push(format!("{}: sum of squared degrees {sum} != {}", g.name(), g.order()));
        }
        if t.characters().iter().any(|c| !num_traits::One::is_one(&c.norm_squared())) {
            r.violations.push(format!("{}: a table character has norm != 1", g.name()));
        }
    }
    for name in ["Q8", "D8"] {
        let g = Arc::new(build_named(name, cap.max(8))?);
        let mut d = character_table(&g)?.degrees();
        d.sort_unstable();
        if d != [1, 1, 1, 1, 2] {
            r.violations.push(format!("{name}: degrees {d:?}"));
        }
    }
    r.note("skipped", json!(skipped));
    Ok(r)
}

/// Random instances Ω = V^n, n ≤ deg V + 2, whose component vectors are
/// combinations of k random vectors of V: dim KG·a = deg V · rank and
/// dim ann(a) = |G| − dim KG·a; for m ≤ deg V independent components
/// dim ann = |G| − m·deg V.
pub fn cyclic_module(cap: usize, instances: usize, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("cyclic-module");
    let groups: Vec<Arc<FiniteGroup>> = groups_with_tables(cap);
    if groups.is_empty() {
        return Ok(r);
    }
    let mut rg = rng(seed);
    let mut jobs = Vec::with_capacity(instances);
    for _ in 0..instances {
        use rand::Rng;
        let g = groups[rg.gen_range(0..groups.len())].clone();
        let t = character_table(&g)?;
        let irrep = rg.gen_range(0..t.len());
        let deg = t.irreps()[irrep].degree();
        let n = rg.gen_range(1..=deg + 2);
        let k = rg.gen_range(1..=n.min(deg));
        let cond = t.irreps()[irrep].conductor();
        let basis: Vec<Vector> = (0..k).map(|_| random_nonzero_vector(&mut rg, cond, deg)).collect();
        let comps: Vec<Vector> = (0..n)
            .map(|_| {
                let coeffs: Vec<i64> = (0..k).map(|_| rg.gen_range(-1..=1)).collect();
                let mut v = vec![CycNumber::zero(cond); deg];
                for (c, b) in coeffs.iter().zip(&basis) {
                    for (o, x) in v.iter_mut().zip(b) {
                        *o += &(&CycNumber::from_i64(cond, *c) * x);
                    }
                }
                v
            })
            .collect();
        jobs.push((g, irrep, comps, basis));
    }
    let out = par::try_map(&jobs, |(g, irrep, comps, basis)| -> Result<Vec<String>> {
        let t = character_table(g)?;
        let rep = Arc::new(t.irreps()[*irrep].clone());
        let deg = rep.degree();
        let cond = rep.conductor();
        let mut v = Vec::new();
        let omega = LabeledModule::new(g.clone(), vec![(rep.clone(), comps.len())])?;
        let a: Vector = comps.concat();
        let rank = CycMatrix::from_rows(cond, deg, comps).rank();
        let dim = omega.cyclic_module(&a)?.dim();
        if dim != deg * rank {
            v.push(format!("{} irrep {irrep}, n = {}: dim KGa = {dim}, deg·rank = {}", g.name(), comps.len(), deg * rank));
        }
        let ann = omega.annihilator_dim(&a)?;
        if ann + dim != g.order() {
            v.push(format!("{} irrep {irrep}: dim ann = {ann}, |G| − dim KGa = {}", g.name(), g.order() - dim));
        }
        let m = CycMatrix::from_rows(cond, deg, basis).rank();
        let indep = LabeledModule::new(g.clone(), vec![(rep, m)])?;
        let b: Vector = basis[..m].concat();
        if CycMatrix::from_rows(cond, deg, &basis[..m]).rank() == m {
            let ann = indep.annihilator_dim(&b)?;
            if ann + m * deg != g.order() {
                v.push(format!("{} irrep {irrep}: {m} independent vectors give dim ann = {ann}", g.name()));
            }
        }
        Ok(v)
    })?;
    r.instances_checked = jobs.len();
    r.violations = out.into_iter().flatten().collect();
    r.note("groups", json!(groups.len()));
    Ok(r)
}

/// For every 2-group of order ≤ cap, every 3-group of order ≤ 27 and every
/// maximal normal chain through the center: irreducibles of G over a common
/// irreducible of G_{d−1} have equal degree. As findings, the same
/// statement for every nontrivial normal subgroup in place of G_{d−1}.
pub fn pgroup_thm(cap: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("pgroup-thm");
    let groups: Vec<Arc<FiniteGroup>> = groups_with_tables(cap.max(27))
        .into_iter()
        .filter(|g| match g.prime_power() {
            Some((2, _)) => g.order() <= cap,
            Some((3, _)) => g.order() <= 27.min(cap.max(27)),
            _ => false,
        })
        .collect();
    let out = par::try_map(&groups, |g| -> Result<(usize, usize, Vec<String>, Vec<String>)> {
        let mut violations = Vec::new();
        let mut findings = Vec::new();
        let center = g.center();
        let chains = g.maximal_normal_chains(Some(&center))?;
        let mut seen: Vec<crate::group::Subgroup> = Vec::new();
        for c in &chains {
            let d = c.length();
            let below = c.level(d - 1).clone();
            if !seen.contains(&below) {
                seen.push(below);
            }
        }
        for h in &seen {
            if let Some(msg) = unequal_degrees_over(g, h)? {
                violations.push(msg);
            }
        }
        let normals = g.normal_subgroups()?;
        let mut corollary_checked = 0;
        for h in normals.iter().filter(|h| h.order() > 1 && h.order() < g.order()) {
            corollary_checked += 1;
            if let Some(msg) = unequal_degrees_over(g, h)? {
                findings.push(msg);
            }
        }
        Ok((chains.len(), corollary_checked, violations, findings))
    })?;
    let (mut chains, mut normals) = (0, 0);
    for (c, n, v, f) in out {
        chains += c;
        normals += n;
        r.violations.extend(v);
        r.findings.extend(f);
    }
    r.instances_checked = chains;
    r.note("groups", json!(groups.iter().map(|g| g.name().to_string()).collect::<Vec<_>>()));
    r.note("normal_subgroups_checked", json!(normals));
    r.note("normal_subgroups_with_unequal_degrees", json!(r.findings.len()));
    Ok(r)
}

fn unequal_degrees_over(g: &Arc<FiniteGroup>, h: &crate::group::Subgroup) -> Result<Option<String>> {
    let tg = character_table(g)?;
    let th = character_table(&g.subgroup_group(h))?;
    let whole = g.whole();
    for (j, psi) in th.characters().iter().enumerate() {
        let mut degs = Vec::new();
        for chi in tg.characters() {
            if restricted_multiplicity(&whole, chi, h, psi)? > 0 {
                degs.push(chi.degree());
            }
        }
        degs.sort_unstable();
        degs.dedup();
        if degs.len() > 1 {
            return Ok(Some(format!(
                "{}: irreducibles over irreducible {j} of a normal subgroup of order {} have degrees {degs:?}",
                g.name(),
                h.order()
            )));
        }
    }
    Ok(None)
}

/// Over every maximal normal chain of every built-in group of order ≤ cap,
/// the extended glider family: the anti-diagonal test agrees with the
/// direct level test and with the tail criterion.
pub fn anti_diagonal(cap: usize, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("anti-diagonal");
    let mut jobs = Vec::new();
    for g in groups_with_tables(cap) {
        for c in g.maximal_normal_chains(None)? {
            jobs.push((g.clone(), c));
        }
    }
    let out = par::try_map(&jobs, |(g, c)| -> Result<(usize, usize, Vec<String>)> {
        let fam: Vec<Glider> = extended_glider_family(g, c, seed)?;
        let mut v = Vec::new();
        let mut irr = 0;
        for (k, x) in fam.iter().enumerate() {
            let anti = x.anti_diagonal_test();
            let direct = x.is_irreducible();
            let tail = x.is_irreducible_certified()?;
            irr += usize::from(direct);
            if anti != direct || direct != tail {
                v.push(format!(
                    "{} chain {:?}, glider {k}: anti-diagonal {anti}, direct {direct}, tail {tail}",
                    g.name(),
                    c.to_id_lists().iter().map(Vec::len).collect::<Vec<_>>()
                ));
            }
        }
        Ok((fam.len(), irr, v))
    })?;
    let mut irr = 0;
    for (n, i, v) in out {
        r.instances_checked += n;
        irr += i;
        r.violations.extend(v);
    }
    r.note("chains", json!(jobs.len()));
    r.note("irreducible", json!(irr));
    Ok(r)
}

/// All squares of every built-in group of order ≤ cap with all irreducible
/// building blocks: containments, the three biconditionals, the center
/// lemma and the index identity as violations; the p-group conclusions as
/// findings (counted per group and check).
pub fn clifford(cap: usize) -> Result<SuiteReport> {
    clifford_over(&groups_with_tables(cap))
}

/// [`clifford`] over an explicit list of groups.
pub fn clifford_over(groups: &[Arc<FiniteGroup>]) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("clifford");
    let mut squares = Vec::new();
    for g in groups {
        for sq in enumerate_squares(g)? {
            squares.push(sq.localized());
        }
    }
    let out = par::try_map(&squares, |sq| -> Result<(String, crate::clifford::SquareReport)> {
        let blocks = enumerate_blocks(sq)?;
        Ok((sq.group.name().to_string(), verify_square(sq, &blocks)?))
    })?;
    let mut tags: BTreeMap<String, usize> = BTreeMap::new();
    let mut findings: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut blocks = 0;
    for (name, rep) in out {
        blocks += rep.blocks_checked;
        for (t, n) in rep.tags {
            *tags.entry(t).or_insert(0) += n;
        }
        for v in rep.violations {
            r.violations.push(format!("{name}: {}: {}", v.check, v.detail));
        }
        for f in rep.findings {
            *findings.entry((name.clone(), f.check)).or_insert(0) += 1;
        }
    }
    r.instances_checked = blocks;
    r.findings = findings
        .into_iter()
        .map(|((g, check), n)| format!("{g}: {check} fails on {n} blocks"))
        .collect();
    r.note("squares", json!(squares.len()));
    r.note("situations", json!(tags));
    Ok(r)
}

/// The tensor statements: the (2,1,2) and (2,2,2) instances on C2 × C3, the
/// a = bc characterization on C2 × C3 and (C2 × C2) × C3, the counterexample
/// on Q8 × C3, the exclusion search on Q8 × C3 and the d = 3 case analysis.
pub fn nilpotent(seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("nilpotent");
    let pc = ProductChain::from_specs("C2", "", "C3", "")?;
    for (spec, triple, decomposable) in [("0:0,0:1", (2, 1, 2), true), ("0:0,1:1", (2, 2, 2), false), ("1:2", (1, 1, 1), true)] {
        let pm = ProductModule::parse(&pc, spec)?;
        let n = pm.module.conductor();
        let m = Glider::build(&pc.chain, pm.module.clone(), vec![CycNumber::one(n); pm.module.dim()])?;
        let d = is_tensor_decomposable(&pc, &pm, &m)?;
        r.instances_checked += 1;
        let want = GliderTriple {
            a: triple.0,
            b: triple.1,
            c: triple.2,
        };
        if d.triple != want || d.decomposable != decomposable || (decomposable && d.round_trip != Some(true)) {
            r.violations.push(format!("C2xC3 {spec}: got {d:?}"));
        }
        r.note(&format!("triple {spec}"), json!(d));
    }
    for (g, h) in [("C2", "C3"), ("V4", "C3")] {
        let rep = theorem_char_suite(g, h)?;
        r.instances_checked += rep.irreducible;
        r.violations.extend(rep.violations.iter().map(|v| format!("{}: {v}", rep.group)));
        r.note(
            &format!("characterization {}", rep.group),
            json!({"chains": rep.chains, "gliders": rep.gliders_checked, "irreducible": rep.irreducible, "decomposable": rep.decomposable}),
        );
    }
    let rep = theorem_char_suite("Q8", "C3")?;
    match &rep.counterexample {
        Some(c) => {
            r.instances_checked += 1;
            let t = c.triple;
            if !(c.irreducible && c.factorization_matches && t.a != t.b * t.c) {
                r.violations.push(format!("Q8xC3: counterexample not confirmed: {c:?}"));
            }
            if !c.alternative_matches || c.alternative_second_factor_irreducible {
                r.findings.push(format!(
                    "Q8xC3: the factorization (U ⊃ K(p+p′)) ⊗ (χ^2 ⊃ K(u,u)) does not reproduce M (matches: {}, second factor irreducible: {})",
                    c.alternative_matches, c.alternative_second_factor_irreducible
                ));
            }
            r.note("counterexample Q8xC3", json!(c));
        }
        None => r.violations.push("Q8xC3: no counterexample built".into()),
    }
    let ex = exclusion_search("Q8", "C3", seed)?;
    r.instances_checked += ex.irreducible;
    r.violations.extend(ex.violations.iter().map(|v| format!("exclusion: {v}")));
    if ex.excluded_found > 0 {
        r.violations.push(format!("exclusion: {} excluded gliders found", ex.excluded_found));
    }
    r.note("exclusion Q8xC3", json!({"gliders": ex.gliders_checked, "irreducible": ex.irreducible}));
    let mut cases = [0usize; 4];
    for pc in three_step_instances()? {
        let t = three_step_suite(&pc)?;
        r.instances_checked += t.irreducible;
        for k in 0..4 {
            cases[k] += t.cases[k];
        }
        r.violations.extend(t.violations.iter().map(|v| format!("{}: {v}", t.group)));
    }
    r.note("three-step cases (wedge-wedge, vee-vee, vee-wedge, wedge-vee)", json!(cases));
    if cases.iter().any(|&c| c == 0) {
        r.violations.push(format!("three-step: a lift case has no instance ({cases:?})"));
    }
    Ok(r)
}

//! "Lies over" diagrams along a subgroup chain, with deterministic labels.
//!
//! Labeling convention. The top level lists Irr(G) by decreasing degree,
//! ties broken by the character values on the elements of the next level
//! (ascending id) and then on the remaining elements; degree-1 characters
//! are named `T1, T2, …` and higher-degree ones `U` (or `U1, U2, …` when
//! there are several). Every lower level is ordered by the position of the
//! first irreducible above it, ties broken by values in the same way; the
//! level just below the top is named `V1, V2, …`, the next one `S, T` when it
//! has exactly two irreducibles (otherwise `S1, S2, …`), and deeper levels
//! `L<level>_<k>`. The trivial level is omitted.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cyclo::CycNumber;
use crate::error::Result;
use crate::group::{FiniteGroup, Subgroup, SubgroupChain};
use crate::rep::{character_table, CharacterTable, CharacterVector};

/// One level of the diagram: Irr(G_level) in display order.
#[derive(Clone, Debug)]
pub struct HasseLevel {
    pub level: usize,
    pub subgroup: Subgroup,
    pub table: Arc<CharacterTable>,
    /// Table indices in display order.
    pub order: Vec<usize>,
    /// Label of each table index.
    pub labels: Vec<String>,
}

impl HasseLevel {
    pub fn label(&self, table_index: usize) -> &str {
        &self.labels[table_index]
    }

    /// Table index carrying the given label.
    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Value of the i-th irreducible at a parent-group element of this level.
    pub fn value(&self, i: usize, g: usize) -> &CycNumber {
        let idx = self.subgroup.index_of(g).expect("element of the level");
        self.table.characters()[i].value_at(idx)
    }
}

/// The diagram of a chain, top level first.
#[derive(Clone, Debug)]
pub struct ChainHasse {
    pub group: Arc<FiniteGroup>,
    pub levels: Vec<HasseLevel>,
    /// (upper level position, upper table index, lower table index) where
    /// positions index `levels` (so the lower level is `upper + 1`).
    pub edges: Vec<(usize, usize, usize)>,
}

fn value_key(v: &CycNumber) -> (u8, u32, String) {
    v.sort_key()
}

fn element_order_for(level: &Subgroup, next: Option<&Subgroup>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    if let Some(n) = next {
        out.extend(n.elements().iter().copied().filter(|&g| level.contains(g)));
    }
    let seen: BTreeSet<usize> = out.iter().copied().collect();
    out.extend(level.elements().iter().copied().filter(|g| !seen.contains(g)));
    out
}

fn values_key(level: &HasseLevel, i: usize, elems: &[usize]) -> Vec<(u8, u32, String)> {
    elems.iter().map(|&g| value_key(level.value(i, g))).collect()
}

/// `lower` re-indexed as a subgroup of `upper` viewed as a group.
pub fn relative_subgroup(upper: &Subgroup, lower: &Subgroup) -> Subgroup {
    let rel: Vec<usize> = lower
        .elements()
        .iter()
        .map(|&g| upper.index_of(g).expect("nested levels"))
        .collect();
    Subgroup::from_ids(rel)
}

/// Multiplicity of ψ ∈ Irr(lower) in the restriction of χ ∈ Irr(upper),
/// both given as characters of the levels viewed as groups.
pub fn restricted_multiplicity(
    upper: &Subgroup,
    chi: &CharacterVector,
    lower: &Subgroup,
    psi: &CharacterVector,
) -> Result<usize> {
    let res = chi.restrict(&relative_subgroup(upper, lower));
    let res = CharacterVector::new(psi.group().clone(), res.values().to_vec());
    res.multiplicity_of(psi)
}

fn sequence_labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

/// Builds the labeled diagram of G_d ⊃ G_{d−1} ⊃ … ⊃ G_1.
pub fn chain_hasse(g: &Arc<FiniteGroup>, chain: &SubgroupChain) -> Result<ChainHasse> {
    let d = chain.length();
    let mut levels: Vec<HasseLevel> = Vec::new();
    for lvl in (1..=d).rev() {
        let sub = chain.level(lvl).clone();
        let table = character_table(&g.subgroup_group(&sub))?;
        let n = table.len();
        levels.push(HasseLevel {
            level: lvl,
            subgroup: sub,
            table,
            order: (0..n).collect(),
            labels: vec![String::new(); n],
        });
    }
    let mut edges = Vec::new();
    for pos in 0..levels.len().saturating_sub(1) {
        let (up, low) = (&levels[pos], &levels[pos + 1]);
        for i in 0..up.table.len() {
            for j in 0..low.table.len() {
                let m = restricted_multiplicity(
                    &up.subgroup,
                    &up.table.characters()[i],
                    &low.subgroup,
                    &low.table.characters()[j],
                )?;
                if m > 0 {
                    edges.push((pos, i, j));
                }
            }
        }
    }
    // ordering and labels
    for pos in 0..levels.len() {
        let next = chain.level(levels[pos].level - 1).clone();
        let elems = element_order_for(&levels[pos].subgroup, Some(&next));
        let n = levels[pos].table.len();
        let mut idx: Vec<usize> = (0..n).collect();
        if pos == 0 {
            let lv = &levels[0];
            idx.sort_by(|&a, &b| {
                let (da, db) = (lv.table.characters()[a].degree(), lv.table.characters()[b].degree());
                db.cmp(&da)
                    .then_with(|| values_key(lv, a, &elems).cmp(&values_key(lv, b, &elems)))
            });
        } else {
            let upper_pos: Vec<usize> = {
                let up = &levels[pos - 1];
                let mut rank = vec![0; up.table.len()];
                for (r, &i) in up.order.iter().enumerate() {
                    rank[i] = r;
                }
                (0..n)
                    .map(|j| {
                        edges
                            .iter()
                            .filter(|(p, _, l)| *p == pos - 1 && *l == j)
                            .map(|(_, u, _)| rank[*u])
                            .min()
                            .unwrap_or(usize::MAX)
                    })
                    .collect()
            };
            let lv = &levels[pos];
            idx.sort_by(|&a, &b| {
                upper_pos[a]
                    .cmp(&upper_pos[b])
                    .then_with(|| values_key(lv, a, &elems).cmp(&values_key(lv, b, &elems)))
            });
        }
        let mut labels = vec![String::new(); n];
        let names: Vec<String> = match pos {
            0 => {
                let degs: Vec<usize> = idx
                    .iter()
                    .map(|&i| levels[0].table.characters()[i].degree())
                    .collect();
                let high = degs.iter().filter(|&&d| d > 1).count();
                let mut us = if high == 1 {
                    vec!["U".to_string()]
                } else {
                    sequence_labels("U", high)
                }
                .into_iter();
                let mut ts = sequence_labels("T", n - high).into_iter();
                degs.iter()
                    .map(|&d| if d > 1 { us.next() } else { ts.next() }.expect("counted"))
                    .collect()
            }
            1 => sequence_labels("V", n),
            2 if n == 2 => vec!["S".into(), "T".into()],
            2 => sequence_labels("S", n),
            _ => sequence_labels(&format!("L{}_", levels[pos].level), n),
        };
        for (name, &i) in names.into_iter().zip(&idx) {
            labels[i] = name;
        }
        levels[pos].order = idx;
        levels[pos].labels = labels;
    }
    edges.sort_by_key(|&(p, u, l)| {
        let ru = levels[p].order.iter().position(|&x| x == u).unwrap();
        let rl = levels[p + 1].order.iter().position(|&x| x == l).unwrap();
        (p, ru, rl)
    });
    Ok(ChainHasse {
        group: g.clone(),
        levels,
        edges,
    })
}

impl ChainHasse {
    /// Edges as label pairs (upper, lower).
    pub fn labeled_edges(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(p, u, l)| {
                (
                    self.levels[p].labels[u].clone(),
                    self.levels[p + 1].labels[l].clone(),
                )
            })
            .collect()
    }

    /// Node labels grouped into connected components (each sorted by level
    /// then display order); components ordered by their first node.
    pub fn components(&self) -> Vec<Vec<String>> {
        let mut nodes: Vec<(usize, usize)> = Vec::new();
        for (p, lv) in self.levels.iter().enumerate() {
            for &i in &lv.order {
                nodes.push((p, i));
            }
        }
        let pos = |n: (usize, usize)| nodes.iter().position(|&m| m == n).unwrap();
        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for &(p, u, l) in &self.edges {
            let a = find(&mut parent, pos((p, u)));
            let b = find(&mut parent, pos((p + 1, l)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: Vec<(usize, Vec<String>)> = Vec::new();
        for k in 0..nodes.len() {
            let r = find(&mut parent, k);
            let (p, i) = nodes[k];
            let label = self.levels[p].labels[i].clone();
            match comps.iter_mut().find(|(root, _)| *root == r) {
                Some((_, list)) => list.push(label),
                None => comps.push((r, vec![label])),
            }
        }
        comps.into_iter().map(|(_, l)| l).collect()
    }

    /// Labels of the neighbours of `label` one level below.
    pub fn below(&self, label: &str) -> Vec<String> {
        self.labeled_edges()
            .into_iter()
            .filter(|(u, _)| u == label)
            .map(|(_, l)| l)
            .collect()
    }

    /// Labels of the neighbours of `label` one level above.
    pub fn above(&self, label: &str) -> Vec<String> {
        self.labeled_edges()
            .into_iter()
            .filter(|(_, l)| l == label)
            .map(|(u, _)| u)
            .collect()
    }

    /// DOT rendering, one rank per level.
    pub fn to_dot(&self) -> String {
        let mut out = format!("graph \"{}\" {{\n", self.group.name());
        out.push_str("  rankdir=TB;\n  node [shape=plaintext];\n");
        for lv in &self.levels {
            out.push_str(&format!("  {{ rank=same; /* G_{} */", lv.level));
            for &i in &lv.order {
                out.push_str(&format!(" \"{}\";", lv.labels[i]));
            }
            out.push_str(" }\n");
        }
        for (u, l) in self.labeled_edges() {
            out.push_str(&format!("  \"{u}\" -- \"{l}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{build_named, parse_chain};

    #[test]
    fn quaternion_diagram_labels() {
        let g = Arc::new(build_named("Q8", 64).unwrap());
        let chain = parse_chain(&g, "Z2,Z4j").unwrap();
        let h = chain_hasse(&g, &chain).unwrap();
        let top: Vec<&str> = h.levels[0].order.iter().map(|&i| h.levels[0].label(i)).collect();
        assert_eq!(top, vec!["U", "T1", "T2", "T3", "T4"]);
        let t2 = h.levels[0].find("T2").unwrap();
        let i = g.element_by_label("i").unwrap();
        assert_eq!(h.levels[0].value(t2, i), &CycNumber::from_i64(4, -1));
        assert_eq!(h.edges.len(), 10);
        assert_eq!(h.components().len(), 2);
    }
}

//! Built-in groups by name, named subgroups, and chain specifications.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, SubgroupChain, DEFAULT_ORDER_CAP};

/// Names of the built-in groups, in a fixed order.
pub const BUILTIN_NAMES: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C12", "C16", "C27", "C32", "C64",
    "C2xC2", "C2xC4", "C2xC2xC2", "C3xC3", "C2xC3", "C2xC2xC3", "C4xC4", "C2xC8", "C3xC9",
    "C3xC3xC3", "D6", "D8", "D10", "D12", "D16", "D32", "D64", "Q8", "Q16", "Q32", "Q64",
    "Dic12", "SD16", "SD32", "M16", "M32", "He27", "C9sC3", "A4", "S4", "F20", "C7sC3",
    "SL23", "D8xC2", "Q8xC2", "D8xC4", "Q8xC4", "D8xC3", "Q8xC3", "Q8xC8",
];

/// Built-in groups of order at most `max_order`, in registry order.
pub fn builtin_groups(max_order: usize) -> Vec<Arc<FiniteGroup>> {
    BUILTIN_NAMES
        .iter()
        .map(|n| build_named(n, usize::MAX).expect("built-in names parse"))
        .filter(|g| g.order() <= max_order)
        .map(Arc::new)
        .collect()
}

fn parse_order(s: &str, prefix: &str) -> Option<usize> {
    s.strip_prefix(prefix)?.parse().ok()
}

fn power_map(n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|x| x * k % n).collect()
}

/// Builds a group from a registry name such as `Q8`, `D8`, `C5`, `Dic12`,
/// `SD16`, `He27` or a product `AxB`.
pub fn build_named(name: &str, cap: usize) -> Result<FiniteGroup> {
    let g = build_unchecked(name.trim())?;
    if g.order() > cap {
        return Err(Error::OrderBoundExceeded {
            order: g.order(),
            cap,
        });
    }
    Ok(g)
}

fn build_unchecked(name: &str) -> Result<FiniteGroup> {
    if let Some((a, b)) = name.rsplit_once('x') {
        if !a.is_empty() && !b.is_empty() {
            let ga = build_unchecked(a)?;
            let gb = build_unchecked(b)?;
            return Ok(FiniteGroup::direct_product(&ga, &gb));
        }
    }
    let bad = || Error::MalformedSpec(format!("unknown group '{name}'"));
    let g = match name {
        "S3" => FiniteGroup::dihedral(6)?.with_name("S3"),
        "V4" => FiniteGroup::direct_product(&FiniteGroup::cyclic(2)?, &FiniteGroup::cyclic(2)?)
            .with_name("V4"),
        "He27" => {
            let c3 = FiniteGroup::cyclic(3)?;
            let n = FiniteGroup::direct_product(&c3, &c3);
            // (x, y) ↦ (x + y, y)
            let auto: Vec<usize> = (0..9).map(|v| ((v / 3 + v % 3) % 3) * 3 + v % 3).collect();
            FiniteGroup::semidirect_cyclic(&n, 3, &auto)?.with_name("He27")
        }
        "C9sC3" => FiniteGroup::semidirect_cyclic(&FiniteGroup::cyclic(9)?, 3, &power_map(9, 4))?
            .with_name("C9sC3"),
        "F20" => FiniteGroup::semidirect_cyclic(&FiniteGroup::cyclic(5)?, 4, &power_map(5, 2))?
            .with_name("F20"),
        "C7sC3" => FiniteGroup::semidirect_cyclic(&FiniteGroup::cyclic(7)?, 3, &power_map(7, 2))?
            .with_name("C7sC3"),
        "A4" => {
            let c2 = FiniteGroup::cyclic(2)?;
            let v4 = FiniteGroup::direct_product(&c2, &c2);
            FiniteGroup::semidirect_cyclic(&v4, 3, &[0, 2, 3, 1])?.with_name("A4")
        }
        "S4" => FiniteGroup::from_permutations("S4", 4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]])?,
        "SL23" => {
            let q8 = FiniteGroup::dicyclic(8)?;
            // i ↦ j ↦ k ↦ i
            FiniteGroup::semidirect_cyclic(&q8, 3, &[0, 4, 2, 6, 5, 1, 7, 3])?.with_name("SL23")
        }
        _ => {
            if let Some(n) = parse_order(name, "SD") {
                if n < 16 || !n.is_power_of_two() {
                    return Err(bad());
                }
                let m = n / 2;
                FiniteGroup::semidirect_cyclic(&FiniteGroup::cyclic(m)?, 2, &power_map(m, m / 2 - 1))?
                    .with_name(name)
            } else if let Some(n) = parse_order(name, "M") {
                if n < 16 || !n.is_power_of_two() {
                    return Err(bad());
                }
                let m = n / 2;
                FiniteGroup::semidirect_cyclic(&FiniteGroup::cyclic(m)?, 2, &power_map(m, m / 2 + 1))?
                    .with_name(name)
            } else if let Some(n) = parse_order(name, "Dic") {
                FiniteGroup::dicyclic(n)?.with_name(name)
            } else if let Some(n) = parse_order(name, "Q") {
                if n < 8 || !n.is_power_of_two() {
                    return Err(bad());
                }
                FiniteGroup::dicyclic(n)?
            } else if let Some(n) = parse_order(name, "D") {
                FiniteGroup::dihedral(n)?
            } else if let Some(n) = parse_order(name, "C") {
                FiniteGroup::cyclic(n)?
            } else {
                return Err(bad());
            }
        }
    };
    Ok(g)
}

/// Parses a `--make` descriptor: `cyclic:n`, `dihedral:2n`, `dicyclic:4n`,
/// `product:A,B` (registry names), or a registry name.
pub fn build_descriptor(spec: &str, cap: usize) -> Result<FiniteGroup> {
    let parse_n = |s: &str| -> Result<usize> {
        s.trim()
            .parse()
            .map_err(|_| Error::MalformedSpec(format!("bad order in '{spec}'")))
    };
    let g = match spec.split_once(':') {
        Some(("cyclic", n)) => FiniteGroup::cyclic(parse_n(n)?)?,
        Some(("dihedral", n)) => FiniteGroup::dihedral(parse_n(n)?)?,
        Some(("dicyclic", n)) => FiniteGroup::dicyclic(parse_n(n)?)?,
        Some(("product", rest)) => {
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| Error::MalformedSpec(format!("product needs two factors: '{spec}'")))?;
            FiniteGroup::direct_product(&build_unchecked(a.trim())?, &build_unchecked(b.trim())?)
        }
        Some((kind, _)) => {
            return Err(Error::MalformedSpec(format!("unknown constructor '{kind}'")))
        }
        None => build_unchecked(spec.trim())?,
    };
    if g.order() > cap {
        return Err(Error::OrderBoundExceeded {
            order: g.order(),
            cap,
        });
    }
    Ok(g)
}

/// Resolves a subgroup token: a named subgroup (`Z2`, `Z4i`, `Z4j`, `Z4k`
/// in Q8; `Z2`, `Z4`, `V4a`, `V4b` in D8), `e`/`1` (trivial), `Z` (center),
/// `G` or the group's name (whole group), `#k` (k-th subgroup in the
/// enumeration), or `<x;y;…>` (subgroup generated by labelled elements).
pub fn subgroup_token(g: &FiniteGroup, token: &str) -> Result<Subgroup> {
    let t = token.trim();
    let by_label = |l: &str| -> Result<usize> {
        g.element_by_label(l.trim())
            .ok_or_else(|| Error::MalformedSpec(format!("unknown element '{l}' in {}", g.name())))
    };
    if let Some(inner) = t.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
        let gens = inner
            .split(|c: char| c == ';' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(by_label)
            .collect::<Result<Vec<_>>>()?;
        return Ok(g.generate(&gens));
    }
    if let Some(k) = t.strip_prefix('#') {
        let k: usize = k
            .parse()
            .map_err(|_| Error::MalformedSpec(format!("bad subgroup index '{t}'")))?;
        let subs = g.enumerate_subgroups(DEFAULT_ORDER_CAP.max(g.order()))?;
        return subs
            .get(k)
            .cloned()
            .ok_or_else(|| Error::MalformedSpec(format!("no subgroup {t}")));
    }
    match t {
        "e" | "1" => return Ok(Subgroup::trivial()),
        "Z" => return Ok(g.center()),
        "G" => return Ok(g.whole()),
        _ if t == g.name() => return Ok(g.whole()),
        _ => {}
    }
    let gen = |labels: &[&str]| -> Result<Subgroup> {
        let ids = labels.iter().map(|l| by_label(l)).collect::<Result<Vec<_>>>()?;
        Ok(g.generate(&ids))
    };
    let named = match (g.name(), t) {
        ("Q8", "Z2") => gen(&["-1"]),
        ("Q8", "Z4i") => gen(&["i"]),
        ("Q8", "Z4j") => gen(&["j"]),
        ("Q8", "Z4k") => gen(&["k"]),
        ("D8", "Z2") => gen(&["a^2"]),
        ("D8", "Z4") => gen(&["a"]),
        ("D8", "V4a") => gen(&["a^2", "s"]),
        ("D8", "V4b") => gen(&["a^2", "as"]),
        _ => Err(Error::MalformedSpec(format!(
            "unknown subgroup '{t}' of {}",
            g.name()
        ))),
    };
    named
}

/// Name of a subgroup if it matches a named one (used in reports).
pub fn subgroup_name(g: &FiniteGroup, h: &Subgroup) -> String {
    if h.order() == 1 {
        return "e".into();
    }
    if h.order() == g.order() {
        return g.name().into();
    }
    let candidates: &[&str] = match g.name() {
        "Q8" => &["Z2", "Z4i", "Z4j", "Z4k"],
        "D8" => &["Z2", "Z4", "V4a", "V4b"],
        _ => &[],
    };
    for c in candidates {
        if subgroup_token(g, c).ok().as_ref() == Some(h) {
            return (*c).into();
        }
    }
    format!("{:?}", h.elements())
}

/// Splits on commas that are not inside `<…>` or `(…)`.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '<' | '(' => depth += 1,
            '>' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

/// Parses a chain specification: comma-separated subgroup tokens for the
/// levels; the trivial subgroup and the whole group are added when omitted.
pub fn parse_chain(g: &FiniteGroup, spec: &str) -> Result<SubgroupChain> {
    let mut levels: Vec<Subgroup> = split_top_level(spec)
        .iter()
        .map(|t| subgroup_token(g, t))
        .collect::<Result<Vec<_>>>()?;
    if levels.first().map(Subgroup::order) != Some(1) {
        levels.insert(0, Subgroup::trivial());
    }
    if levels.last().map(Subgroup::order) != Some(g.order()) {
        levels.push(g.whole());
    }
    SubgroupChain::new(g, levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_orders() {
        for name in BUILTIN_NAMES {
            let g = build_named(name, 64).unwrap();
            assert!(g.order() <= 64, "{name}");
        }
        assert_eq!(build_named("He27", 64).unwrap().order(), 27);
        assert!(!build_named("He27", 64).unwrap().is_abelian());
        assert_eq!(build_named("SD16", 64).unwrap().exponent(), 8);
        assert_eq!(build_named("S4", 64).unwrap().order(), 24);
        assert!(matches!(
            build_named("C128", 64),
            Err(Error::OrderBoundExceeded { order: 128, cap: 64 })
        ));
        assert!(build_named("Foo", 64).is_err());
    }

    #[test]
    fn quaternion_chain_tokens() {
        let g = build_named("Q8", 64).unwrap();
        let c = parse_chain(&g, "Z2,Z4j").unwrap();
        assert_eq!(c.length(), 3);
        assert_eq!(c.level(2).elements(), &[0, 2, 4, 6]);
        let same = parse_chain(&g, "e,<-1>,<j>,Q8").unwrap();
        assert_eq!(c, same);
        assert_eq!(subgroup_name(&g, c.level(2)), "Z4j");
    }

    #[test]
    fn dihedral_named_subgroups() {
        let g = build_named("D8", 64).unwrap();
        let v = subgroup_token(&g, "V4a").unwrap();
        assert_eq!(v.order(), 4);
        assert!(g.is_normal(&v));
        assert!((1..4).all(|i| g.element_order(v.elements()[i]) == 2));
    }

    #[test]
    fn descriptors() {
        assert_eq!(build_descriptor("cyclic:1", 64).unwrap().order(), 1);
        assert_eq!(build_descriptor("product:Q8,C3", 64).unwrap().order(), 24);
        assert!(build_descriptor("bogus:3", 64).is_err());
    }
}

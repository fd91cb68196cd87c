//! Group descriptors: `cyclic:N`, `dihedral:N`, `product:A*B*...`,
//! `perm:(1 2)(3 4),(1 2 3)` and `table:PATH`.
//!
//! Products fold left. A factor that is itself a product is written in
//! square brackets, e.g. `product:cyclic:7*[product:cyclic:2*cyclic:2]`.

use std::fmt;
use std::str::FromStr;

use crate::error::GroupError;
use crate::group::{
    direct_product, from_cayley_file, from_permutation_generators, make_cyclic, make_dihedral, FiniteGroup, Permutation,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    /// At least two factors, multiplied left to right.
    Product(Vec<GroupSpec>),
    /// Generators, each a list of cycles over 1-based points.
    Perm(Vec<Vec<Vec<usize>>>),
    Table(String),
}

fn bad(input: &str, reason: impl Into<String>) -> GroupError {
    GroupError::Descriptor {
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn parse_count(input: &str, body: &str) -> Result<usize, GroupError> {
    body.trim()
        .parse()
        .map_err(|_| bad(input, format!("`{body}` is not a nonnegative integer")))
}

/// Split on `*` outside square brackets.
fn split_factors<'a>(input: &str, body: &'a str) -> Result<Vec<&'a str>, GroupError> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in body.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(bad(input, "unbalanced `]`"));
                }
            }
            '*' if depth == 0 => {
                parts.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(bad(input, "unbalanced `[`"));
    }
    parts.push(&body[start..]);
    Ok(parts)
}

fn parse_generator(input: &str, text: &str) -> Result<Vec<Vec<usize>>, GroupError> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    if rest.is_empty() {
        return Err(bad(input, "empty permutation generator"));
    }
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .ok_or_else(|| bad(input, format!("expected `(` in `{text}`")))?;
        let close = inner
            .find(')')
            .ok_or_else(|| bad(input, format!("missing `)` in `{text}`")))?;
        let points = inner[..close]
            .split_whitespace()
            .map(|p| match p.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(bad(input, format!("`{p}` is not a point (points are 1-based)"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !points.is_empty() {
            cycles.push(points);
        }
        rest = inner[close + 1..].trim_start();
    }
    Ok(cycles)
}

impl GroupSpec {
    pub fn parse(input: &str) -> Result<Self, GroupError> {
        Self::parse_inner(input, input.trim())
    }

    fn parse_inner(input: &str, s: &str) -> Result<Self, GroupError> {
        let (kind, body) = s.split_once(':').ok_or_else(|| bad(input, "expected KIND:ARGS"))?;
        match kind {
            "cyclic" => Ok(GroupSpec::Cyclic(parse_count(input, body)?)),
            "dihedral" => Ok(GroupSpec::Dihedral(parse_count(input, body)?)),
            "product" => {
                let factors = split_factors(input, body)?
                    .into_iter()
                    .map(|f| {
                        let f = f.trim();
                        match f.strip_prefix('[').and_then(|f| f.strip_suffix(']')) {
                            Some(inner) => Self::parse_inner(input, inner.trim()),
                            None => Self::parse_inner(input, f),
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if factors.len() < 2 {
                    return Err(bad(input, "a product needs at least two factors"));
                }
                Ok(GroupSpec::Product(factors))
            }
            "perm" => {
                let gens = body
                    .split(',')
                    .map(|g| parse_generator(input, g))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(GroupSpec::Perm(gens))
            }
            "table" => {
                if body.trim().is_empty() {
                    return Err(bad(input, "missing table path"));
                }
                Ok(GroupSpec::Table(body.trim().to_string()))
            }
            other => Err(bad(input, format!("unknown group kind `{other}`"))),
        }
    }

    /// `Some(n)` for `dihedral:n`.
    pub fn dihedral_n(&self) -> Option<usize> {
        match self {
            GroupSpec::Dihedral(n) => Some(*n),
            _ => None,
        }
    }

    /// Order of the described group, where it is known without building it.
    fn declared_order(&self) -> Option<usize> {
        match self {
            GroupSpec::Cyclic(n) => Some(*n),
            GroupSpec::Dihedral(n) => n.checked_mul(2),
            GroupSpec::Product(fs) => fs
                .iter()
                .try_fold(1usize, |acc, f| f.declared_order().and_then(|o| acc.checked_mul(o))),
            _ => None,
        }
    }

    /// Construct the group, refusing anything above `cap` elements.
    pub fn build(&self, cap: usize) -> Result<FiniteGroup, GroupError> {
        if self.declared_order().is_some_and(|o| o > cap) {
            return Err(GroupError::TooLarge { cap });
        }
        let g = match self {
            GroupSpec::Cyclic(n) => make_cyclic(*n)?,
            GroupSpec::Dihedral(n) => make_dihedral(*n)?,
            GroupSpec::Product(fs) => {
                let mut acc = fs[0].build(cap)?;
                for f in &fs[1..] {
                    acc = direct_product(&acc, &f.build(cap)?)?;
                }
                if acc.order() > cap {
                    return Err(GroupError::TooLarge { cap });
                }
                acc
            }
            GroupSpec::Perm(gens) => {
                let degree = gens.iter().flatten().flatten().copied().max().unwrap_or(0);
                let perms = gens
                    .iter()
                    .map(|cycles| Permutation::from_cycles(degree, cycles))
                    .collect::<Result<Vec<_>, _>>()?;
                from_permutation_generators(&perms, cap)?
            }
            GroupSpec::Table(path) => {
                let content = std::fs::read_to_string(path).map_err(|source| GroupError::Io {
                    path: path.clone(),
                    source,
                })?;
                let g = from_cayley_file(&content)?;
                if g.order() > cap {
                    return Err(GroupError::TooLarge { cap });
                }
                g
            }
        };
        Ok(g.with_descriptor(self.to_string()))
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupSpec::parse(s)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Product(fs) => {
                f.write_str("product:")?;
                for (i, factor) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    match factor {
                        GroupSpec::Product(_) => write!(f, "[{factor}]")?,
                        _ => write!(f, "{factor}")?,
                    }
                }
                Ok(())
            }
            GroupSpec::Perm(gens) => {
                f.write_str("perm:")?;
                for (i, cycles) in gens.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    if cycles.is_empty() {
                        f.write_str("()")?;
                    }
                    for c in cycles {
                        let pts: Vec<String> = c.iter().map(usize::to_string).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                Ok(())
            }
            GroupSpec::Table(path) => write!(f, "table:{path}"),
        }
    }
}

/// Parse and build in one step.
pub fn build_group(descriptor: &str, cap: usize) -> Result<FiniteGroup, GroupError> {
    GroupSpec::parse(descriptor)?.build(cap)
}

//! Text grammar for naming groups on the command line and in catalog manifests.
//!
//! ```text
//! cyclic:<n> | dihedral:<n> | symmetric:<n> | alternating:<n>
//! quaternion:<2^m> | dicyclic:<4m> | elementary:<p>:<d> | semidirect:<m>:<n>:<r>
//! product:<spec>,<spec>[,...]   (wrap nested products in parentheses)
//! table:<path>                  (JSON {"order": n, "table": [[...]]})
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    /// Dihedral group of the regular `n`-gon, order `2n`.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    /// Generalized quaternion group of the given (power of two) order.
    Quaternion(usize),
    /// Dicyclic group of the given order (a multiple of 4, at least 8).
    Dicyclic(usize),
    Elementary { p: usize, rank: usize },
    /// `Z_m ⋊ Z_n` where the generator of `Z_n` acts by `x ↦ r·x`.
    Semidirect { m: usize, n: usize, r: usize },
    Product(Vec<GroupSpec>),
    Table(PathBuf),
}

fn number(text: &str, what: &str) -> Result<usize> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| Error::GroupSpec(format!("bad {what} {text:?}")))
}

/// Splits on commas that are not nested inside parentheses.
fn split_top_level(text: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::GroupSpec(format!("unbalanced parentheses in {text:?}")));
                }
            }
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::GroupSpec(format!("unbalanced parentheses in {text:?}")));
    }
    parts.push(&text[start..]);
    Ok(parts)
}

fn strip_parens(text: &str) -> &str {
    let t = text.trim();
    if t.starts_with('(') && t.ends_with(')') {
        &t[1..t.len() - 1]
    } else {
        t
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = strip_parens(text);
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::GroupSpec(format!("expected <family>:<args>, got {text:?}")))?;
        let spec = match kind.trim() {
            "cyclic" => GroupSpec::Cyclic(number(rest, "order")?),
            "dihedral" => GroupSpec::Dihedral(number(rest, "polygon size")?),
            "symmetric" => GroupSpec::Symmetric(number(rest, "degree")?),
            "alternating" => GroupSpec::Alternating(number(rest, "degree")?),
            "quaternion" => GroupSpec::Quaternion(number(rest, "order")?),
            "dicyclic" => GroupSpec::Dicyclic(number(rest, "order")?),
            "elementary" => {
                let (p, d) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::GroupSpec("elementary:<p>:<rank>".into()))?;
                GroupSpec::Elementary {
                    p: number(p, "prime")?,
                    rank: number(d, "rank")?,
                }
            }
            "semidirect" => {
                let fields: Vec<&str> = rest.split(':').collect();
                if fields.len() != 3 {
                    return Err(Error::GroupSpec("semidirect:<m>:<n>:<r>".into()));
                }
                GroupSpec::Semidirect {
                    m: number(fields[0], "modulus")?,
                    n: number(fields[1], "acting order")?,
                    r: number(fields[2], "multiplier")?,
                }
            }
            "product" => {
                let factors = split_top_level(rest)?
                    .into_iter()
                    .map(str::parse)
                    .collect::<Result<Vec<GroupSpec>>>()?;
                if factors.len() < 2 {
                    return Err(Error::GroupSpec("product needs at least two factors".into()));
                }
                GroupSpec::Product(factors)
            }
            "table" => GroupSpec::Table(PathBuf::from(rest.trim())),
            other => return Err(Error::GroupSpec(format!("unknown family {other:?}"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Alternating(n) => write!(f, "alternating:{n}"),
            GroupSpec::Quaternion(n) => write!(f, "quaternion:{n}"),
            GroupSpec::Dicyclic(n) => write!(f, "dicyclic:{n}"),
            GroupSpec::Elementary { p, rank } => write!(f, "elementary:{p}:{rank}"),
            GroupSpec::Semidirect { m, n, r } => write!(f, "semidirect:{m}:{n}:{r}"),
            GroupSpec::Product(factors) => {
                write!(f, "product:")?;
                for (i, g) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    if matches!(g, GroupSpec::Product(_)) {
                        write!(f, "({g})")?;
                    } else {
                        write!(f, "{g}")?;
                    }
                }
                Ok(())
            }
            GroupSpec::Table(path) => write!(f, "table:{}", path.display()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_families() {
        assert_eq!("cyclic:6".parse::<GroupSpec>().unwrap(), GroupSpec::Cyclic(6));
        assert_eq!(
            "semidirect:7:3:2".parse::<GroupSpec>().unwrap(),
            GroupSpec::Semidirect { m: 7, n: 3, r: 2 }
        );
        assert_eq!(
            "product:cyclic:2,(product:cyclic:2,cyclic:3)".parse::<GroupSpec>().unwrap(),
            GroupSpec::Product(vec![
                GroupSpec::Cyclic(2),
                GroupSpec::Product(vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(3)]),
            ])
        );
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "cyclic:6",
            "dihedral:4",
            "quaternion:8",
            "elementary:2:3",
            "product:cyclic:2,(product:cyclic:2,cyclic:3)",
            "table:/tmp/g.json",
        ] {
            let spec: GroupSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!("cyclic".parse::<GroupSpec>().is_err());
        assert!("cyclic:x".parse::<GroupSpec>().is_err());
        assert!("torus:3".parse::<GroupSpec>().is_err());
        assert!("product:cyclic:2".parse::<GroupSpec>().is_err());
        assert!("product:(cyclic:2,cyclic:3".parse::<GroupSpec>().is_err());
    }
}

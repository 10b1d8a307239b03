use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Automorphism, Group, GroupAction, GroupError};

/// Serializable description of a group, as stored in certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDesc {
    /// A spec string such as `heis:5` (file-based specs are never stored).
    Spec(String),
    Table {
        table: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<usize>>,
    },
    Direct { direct: Vec<GroupDesc> },
    Semidirect { semidirect: SemidirectDesc },
}

/// Semidirect data: `action[k]` is the automorphism of `normal` induced by
/// the `k`-th generator of `complement`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectDesc {
    pub normal: Box<GroupDesc>,
    pub complement: Box<GroupDesc>,
    pub action: Vec<Vec<u32>>,
}

fn spec_err(spec: &str, reason: impl Into<String>) -> GroupError {
    GroupError::Spec { spec: spec.to_string(), reason: reason.into() }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> GroupError {
    GroupError::Io { path: path.display().to_string(), reason: e.to_string() }
}

/// Parse a Cayley table file: first line `n`, then `n` rows of `n` indices.
pub fn parse_table(text: &str) -> Result<Vec<Vec<u32>>, GroupError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| GroupError::MalformedTable("empty file".into()))?
        .trim()
        .parse()
        .map_err(|_| GroupError::MalformedTable("first line must be the order".into()))?;
    let rows: Vec<Vec<u32>> = lines
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| GroupError::MalformedTable(format!("bad entry {t:?}"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.len() != n {
        return Err(GroupError::MalformedTable(format!("expected {n} rows, found {}", rows.len())));
    }
    Ok(rows)
}

pub fn write_table(group: &Group) -> Result<String, GroupError> {
    let table = group.table()?;
    let mut out = format!("{}\n", group.order());
    for row in table {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// An action file: one line per generator of the acting group, each line the
/// image of every element of the target.
pub fn read_action_file(path: &Path) -> Result<Vec<Vec<u32>>, GroupError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| io_err(path, format!("bad entry {t:?}"))))
                .collect()
        })
        .collect()
}

fn parse_num<T: std::str::FromStr>(spec: &str, s: &str) -> Result<T, GroupError> {
    s.trim().parse().map_err(|_| spec_err(spec, format!("{s:?} is not a number")))
}

impl Group {
    /// Parse a spec string: `cyclic:n`, `abelian:AxBx…`, `dihedral:n`,
    /// `quaternion[:n]`, `heis:q`, `sym:n`, `table:PATH`, `sdp:N:H:PATH`.
    pub fn from_spec(spec: &str) -> Result<Group, GroupError> {
        let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
        match kind {
            "cyclic" => Group::cyclic(parse_num(spec, rest)?),
            "abelian" => {
                let factors: Vec<u64> = rest.split('x').map(|f| parse_num(spec, f)).collect::<Result<_, _>>()?;
                Group::abelian(&factors)
            }
            "dihedral" => Group::dihedral(parse_num(spec, rest)?),
            "quaternion" if rest.is_empty() => Group::quaternion(8),
            "quaternion" => Group::quaternion(parse_num(spec, rest)?),
            "heis" => Group::heisenberg(parse_num(spec, rest)?),
            "sym" => Group::symmetric(parse_num(spec, rest)?),
            "table" => {
                let path = Path::new(rest);
                let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
                Group::from_table(parse_table(&text)?)
            }
            "sdp" => Self::parse_sdp(spec, rest),
            _ => Err(spec_err(spec, "unknown group kind")),
        }
    }

    fn parse_sdp(spec: &str, rest: &str) -> Result<Group, GroupError> {
        let (groups, path) = rest.rsplit_once(':').ok_or_else(|| spec_err(spec, "expected sdp:N:H:ACTION"))?;
        let parts: Vec<&str> = groups.split(':').collect();
        let images = read_action_file(Path::new(path))?;
        let mut last_err = spec_err(spec, "cannot split into normal and complement specs");
        for k in 1..parts.len() {
            let (n, h) = (parts[..k].join(":"), parts[k..].join(":"));
            match (Group::from_spec(&n), Group::from_spec(&h)) {
                (Ok(n), Ok(h)) => return Self::semidirect_from_images(Arc::new(n), Arc::new(h), images),
                (Err(e), _) | (_, Err(e)) => last_err = e,
            }
        }
        Err(last_err)
    }

    fn semidirect_from_images(n: Arc<Group>, h: Arc<Group>, images: Vec<Vec<u32>>) -> Result<Group, GroupError> {
        let autos: Vec<Automorphism> =
            images.into_iter().map(|m| Automorphism::new(&n, m)).collect::<Result<_, _>>()?;
        let act = GroupAction::new(h, n, autos)?;
        Group::semidirect(&act)
    }

    pub fn from_desc(desc: &GroupDesc) -> Result<Group, GroupError> {
        match desc {
            GroupDesc::Spec(s) => {
                if s.starts_with("table:") || s.starts_with("sdp:") {
                    return Err(spec_err(s, "file-based specs cannot be embedded"));
                }
                Group::from_spec(s)
            }
            GroupDesc::Table { table, generators } => {
                let g = Group::from_table(table.clone())?;
                match generators {
                    Some(gens) => g.with_generators(gens.clone()),
                    None => Ok(g),
                }
            }
            GroupDesc::Direct { direct } => {
                let factors = direct.iter().map(|d| Group::from_desc(d).map(Arc::new)).collect::<Result<_, _>>()?;
                Group::direct_product(factors)
            }
            GroupDesc::Semidirect { semidirect } => {
                let n = Arc::new(Group::from_desc(&semidirect.normal)?);
                let h = Arc::new(Group::from_desc(&semidirect.complement)?);
                Self::semidirect_from_images(n, h, semidirect.action.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_strings() {
        assert_eq!(Group::from_spec("cyclic:6").unwrap().order(), 6);
        assert_eq!(Group::from_spec("abelian:2x2x4").unwrap().order(), 16);
        assert_eq!(Group::from_spec("dihedral:8").unwrap().order(), 8);
        assert_eq!(Group::from_spec("quaternion").unwrap().order(), 8);
        assert_eq!(Group::from_spec("heis:5").unwrap().order(), 125);
        assert!(Group::from_spec("heis:6").is_err());
        assert!(Group::from_spec("bogus:1").is_err());
    }

    #[test]
    fn table_round_trip() {
        let g = Group::dihedral(8).unwrap();
        let text = write_table(&g).unwrap();
        let h = Group::from_table(parse_table(&text).unwrap()).unwrap();
        for x in 0..8 {
            for y in 0..8 {
                assert_eq!(g.mul(x, y), h.mul(x, y));
            }
        }
    }

    #[test]
    fn descriptors_round_trip_through_json() {
        let n = Arc::new(Group::cyclic(3).unwrap());
        let h = Arc::new(Group::cyclic(2).unwrap());
        let inv = Automorphism::new(&n, vec![0, 2, 1]).unwrap();
        let g = Group::semidirect(&GroupAction::new(h, n, vec![inv]).unwrap()).unwrap();
        let json = serde_json::to_string(g.desc()).unwrap();
        let back: GroupDesc = serde_json::from_str(&json).unwrap();
        let g2 = Group::from_desc(&back).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(g.mul(x, y), g2.mul(x, y));
            }
        }
    }
}

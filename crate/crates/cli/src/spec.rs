use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use fibered_burnside::{CayleyTable, FiniteGroup, ThevenazGroup, ThevenazSpec};

/// A parsed `kind:args` group description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Abelian(Vec<usize>),
    Dihedral(usize),
    Symmetric(usize),
    Thevenaz(ThevenazSpec),
    Cayley(PathBuf),
}

/// A built group plus what the report needs to identify it.
pub struct LoadedGroup {
    pub group: FiniteGroup,
    pub thevenaz: Option<ThevenazGroup>,
    /// Bytes hashed into the report: the spec text, or the file contents.
    pub identity: Vec<u8>,
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse().with_context(|| format!("not a non-negative integer: {s:?}"))
}

impl GroupSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let Some((kind, args)) = s.split_once(':') else {
            bail!("group spec {s:?} must look like kind:args, e.g. cyclic:6");
        };
        Ok(match kind.trim() {
            "cyclic" => GroupSpec::Cyclic(parse_usize(args)?),
            "abelian" => GroupSpec::Abelian(args.split(',').map(parse_usize).collect::<Result<_>>()?),
            "dihedral" => GroupSpec::Dihedral(parse_usize(args)?),
            "symmetric" => GroupSpec::Symmetric(parse_usize(args)?),
            "thevenaz" => GroupSpec::Thevenaz(args.parse()?),
            "cayley" => GroupSpec::Cayley(PathBuf::from(args)),
            other => bail!("unknown group kind {other:?} (cyclic, abelian, dihedral, symmetric, thevenaz, cayley)"),
        })
    }

    pub fn load(&self, text: &str) -> Result<LoadedGroup> {
        let mut thevenaz = None;
        let mut identity = text.as_bytes().to_vec();
        let group = match self {
            GroupSpec::Cyclic(0) => bail!("cyclic group order must be positive"),
            GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupSpec::Abelian(factors) => {
                if factors.contains(&0) {
                    bail!("abelian factors must be positive");
                }
                FiniteGroup::abelian(factors)
            }
            GroupSpec::Dihedral(n) => FiniteGroup::dihedral(*n)?,
            GroupSpec::Symmetric(n) => FiniteGroup::symmetric(*n)?,
            GroupSpec::Thevenaz(spec) => {
                let t = ThevenazGroup::build(*spec)?;
                let g = t.group().clone();
                thevenaz = Some(t);
                g
            }
            GroupSpec::Cayley(path) => {
                let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
                let table: CayleyTable = serde_json::from_slice(&bytes)
                    .with_context(|| format!("parsing Cayley table JSON in {}", path.display()))?;
                identity = bytes;
                FiniteGroup::from_cayley_json(&table)?
            }
        };
        Ok(LoadedGroup { group, thevenaz, identity })
    }
}

//! Naming algebras on the command line: a family member such as
//! `S(2,(2,2))'` (one prime per derived step) or a path to an algebra file.

use std::path::Path;

use cartan_core::cartan::{build, CartanAlgebra, CartanFamily};
use cartan_core::{AlgebraDescriptor, LieAlgebra, Prime};

use crate::files::import_algebra;
use crate::CliError;

/// A family member and how many derived steps to take.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: CartanFamily,
    pub derived: u32,
}

impl FamilySpec {
    pub fn parse(s: &str, p: Prime) -> Result<Self, CliError> {
        let t = s.trim();
        let body = t.trim_end_matches('\'');
        let derived = (t.len() - body.len()) as u32;
        let family = CartanFamily::parse(body, p).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(FamilySpec { family, derived })
    }

    pub fn build(&self) -> Result<CartanAlgebra, CliError> {
        let mut a = build(&self.family).map_err(|e| CliError::Usage(e.to_string()))?;
        for _ in 0..self.derived {
            a = a.derived().map_err(|e| CliError::Usage(e.to_string()))?;
        }
        Ok(a)
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        AlgebraDescriptor::Family {
            family: self.family.clone(),
            derived: self.derived,
        }
    }
}

/// An algebra named on the command line, with its certificate descriptor.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub algebra: LieAlgebra,
    pub descriptor: AlgebraDescriptor,
}

/// Existing files are read as algebra files; anything else must parse as a
/// family member.
pub fn resolve(arg: &str, p: Prime) -> Result<Resolved, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
        let (algebra, hash) =
            import_algebra(&text).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
        return Ok(Resolved {
            algebra,
            descriptor: AlgebraDescriptor::Hash(hash),
        });
    }
    let spec = FamilySpec::parse(arg, p).map_err(|e| {
        CliError::Usage(format!(
            "{arg:?} is neither a file nor a family member: {e}"
        ))
    })?;
    Ok(Resolved {
        algebra: spec.build()?.into_algebra(),
        descriptor: spec.descriptor(),
    })
}

/// Reads a descriptor string as written in certificate files.
pub fn parse_descriptor(s: &str, p: Prime) -> AlgebraDescriptor {
    if let Some(h) = s.strip_prefix("sha256:") {
        return AlgebraDescriptor::Hash(h.to_string());
    }
    match FamilySpec::parse(s, p) {
        Ok(spec) => spec.descriptor(),
        Err(_) => AlgebraDescriptor::Label(s.to_string()),
    }
}

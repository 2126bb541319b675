use std::path::{Path, PathBuf};

use clap::Args;
use jordan_spectra::eja::{AlgebraDescriptor, Family};
use jordan_spectra::geometry::{fixtures, ConvexBody, Scalar};
use jordan_spectra::{Error, Result};

/// Where the body comes from: a JSON file (positional or `--input`), a
/// built-in fixture (`fixture:NAME`), or an algebra given by `--eja`.
#[derive(Args, Clone, Debug)]
pub struct BodyArgs {
    /// Body JSON file, or `fixture:NAME` for a built-in polytope.
    #[arg(value_name = "INPUT")]
    pub positional: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub input: Option<String>,
    /// Jordan algebra family: sym_r, herm_c, herm_h, spin, herm_o.
    #[arg(long, value_name = "FAMILY")]
    pub eja: Option<String>,
    /// Matrix size for sym_r, herm_c, herm_h (herm_o is always 3).
    #[arg(long)]
    pub m: Option<usize>,
    /// Ball dimension for spin (the algebra is ℝⁿ ⊕ ℝ).
    #[arg(long)]
    pub n: Option<usize>,
}

pub fn algebra(family: &str, m: Option<usize>, n: Option<usize>) -> Result<AlgebraDescriptor> {
    let family = Family::parse(family)?;
    let param = match family {
        Family::HermO => m.unwrap_or(3),
        Family::Spin => n.or(m).ok_or_else(|| Error::InvalidAlgebra("spin needs --n".into()))?,
        _ => m.or(n).ok_or_else(|| Error::InvalidAlgebra(format!("{} needs --m", family.name())))?,
    };
    AlgebraDescriptor::new(family, param)
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

impl BodyArgs {
    pub fn has_body(&self) -> bool {
        self.eja.is_some() || self.positional.is_some() || self.input.is_some()
    }

    pub fn resolve(&self) -> Result<ConvexBody> {
        if let Some(f) = &self.eja {
            return Ok(ConvexBody::Eja(algebra(f, self.m, self.n)?));
        }
        let src = match (&self.positional, &self.input) {
            (Some(_), Some(_)) => return Err(Error::Parse("give the input either positionally or with --input".into())),
            (Some(s), None) | (None, Some(s)) => s,
            (None, None) => return Err(Error::Parse("no body given: pass a JSON file, fixture:NAME, or --eja".into())),
        };
        if let Some(name) = src.strip_prefix("fixture:") {
            return fixtures::by_name(name)
                .map(ConvexBody::Polytope)
                .ok_or_else(|| Error::Parse(format!("unknown fixture {name:?}; known: {}", fixtures::CATALOG.join(", "))));
        }
        ConvexBody::from_json(&read_file(&PathBuf::from(src))?)
    }
}

/// Comma-separated exact coordinates, e.g. `1/2,1/3`.
pub fn exact_point(s: &str) -> Result<Vec<Scalar>> {
    s.split(',').map(|t| t.trim().parse()).collect()
}

pub fn float_point(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}")))).collect()
}

//! On-disk JSON formats. Complex numbers are `[re, im]` pairs; reals are
//! written in shortest round-trip form, so write → read is bit-stable.

use std::fs;
use std::path::Path;

use idmps::mps::SiteTensor;
use idmps::{BondSpectrum, CanonicalForm, DenseTensor, MatrixProductState, C64};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub version: u32,
    pub shape: Vec<usize>,
    /// Row-major, last index fastest.
    pub data: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteFile {
    pub phys_dim: usize,
    pub left_dim: usize,
    pub right_dim: usize,
    pub data: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MpsFile {
    pub version: u32,
    pub form: String,
    pub sites: Vec<SiteFile>,
    /// One entry per cut; `null` where no spectrum is stored.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bonds: Option<Vec<Option<Vec<f64>>>>,
}

fn pairs(data: &[C64]) -> Vec<[f64; 2]> {
    data.iter().map(|z| [z.re, z.im]).collect()
}

fn complex(data: &[[f64; 2]]) -> Vec<C64> {
    data.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

fn check_version(v: u32) -> Result<(), CliError> {
    if v != FORMAT_VERSION {
        return Err(CliError::input(format!("unsupported file version {v}")));
    }
    Ok(())
}

impl TensorFile {
    pub fn from_tensor(t: &DenseTensor) -> Self {
        Self {
            version: FORMAT_VERSION,
            shape: t.shape().to_vec(),
            data: pairs(t.data()),
        }
    }

    pub fn to_tensor(&self) -> Result<DenseTensor, CliError> {
        check_version(self.version)?;
        DenseTensor::new(self.shape.clone(), complex(&self.data)).map_err(CliError::input)
    }
}

impl MpsFile {
    pub fn from_mps(m: &MatrixProductState) -> Self {
        let sites = m
            .sites()
            .iter()
            .map(|s| SiteFile {
                phys_dim: s.phys_dim(),
                left_dim: s.left_dim(),
                right_dim: s.right_dim(),
                data: pairs(s.data()),
            })
            .collect();
        let bonds: Vec<Option<Vec<f64>>> = m.bonds().iter().map(|b| b.as_ref().map(|b| b.values().to_vec())).collect();
        Self {
            version: FORMAT_VERSION,
            form: m.form().to_string(),
            sites,
            bonds: bonds.iter().any(Option::is_some).then_some(bonds),
        }
    }

    pub fn to_mps(&self) -> Result<MatrixProductState, CliError> {
        check_version(self.version)?;
        let form: CanonicalForm = self.form.parse().map_err(CliError::input)?;
        let sites = self
            .sites
            .iter()
            .map(|s| SiteTensor::new(s.phys_dim, s.left_dim, s.right_dim, complex(&s.data)))
            .collect::<idmps::Result<Vec<_>>>()
            .map_err(CliError::input)?;
        let bonds = match &self.bonds {
            None => Vec::new(),
            Some(list) => list
                .iter()
                .map(|b| b.clone().map(BondSpectrum::new).transpose())
                .collect::<idmps::Result<Vec<_>>>()
                .map_err(CliError::input)?,
        };
        MatrixProductState::new(sites, bonds, form).map_err(CliError::input)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|e| CliError::input(e.to_string()))?;
    fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

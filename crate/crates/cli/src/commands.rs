//! The four subcommands. Each returns the JSON report for stdout plus the exit
//! code, or a [`CliError`] when nothing useful can be reported.

use std::path::{Path, PathBuf};

use idmps::mps::{
    bond_spectrum, from_dense, to_dense, verify_form, DecomposeOptions, FormReport, FormRequest,
};
use idmps::oscillator::{build_bundle, element_decay_table, Element, OscillatorParams};
use idmps::schmidt::entropy;
use idmps::{CanonicalForm, Error, TruncationPolicy, DEFAULT_RANK_TOL};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_VERIFY};
use crate::files::{read_json, write_json, MpsFile, TensorFile};

pub const RANK_TOL_VAR: &str = "IDMPS_RANK_TOL";

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub code: u8,
}

impl Report {
    fn ok(json: Value) -> Self {
        Self { json, code: 0 }
    }
}

/// Rank-cut tolerance: `IDMPS_RANK_TOL` if set, else the library default.
pub fn rank_tol(var: Option<&str>) -> Result<f64, CliError> {
    let Some(raw) = var else {
        return Ok(DEFAULT_RANK_TOL);
    };
    match raw.trim().parse::<f64>() {
        Ok(v) if (0.0..1.0).contains(&v) => Ok(v),
        _ => Err(CliError::input(format!("{RANK_TOL_VAR} must be a number in [0, 1), got {raw:?}"))),
    }
}

pub fn parse_form(s: &str) -> Result<FormRequest, CliError> {
    match s.parse::<CanonicalForm>() {
        Ok(CanonicalForm::Left) => Ok(FormRequest::Left),
        Ok(CanonicalForm::Right) => Ok(FormRequest::Right),
        Ok(CanonicalForm::Mixed { center }) => Ok(FormRequest::Mixed(center)),
        Ok(CanonicalForm::Vidal) => Ok(FormRequest::Vidal),
        _ => Err(CliError::input(format!("form must be left, right, mixed:<n> or vidal, got {s:?}"))),
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

#[derive(Debug, Clone)]
pub struct DecomposeArgs {
    pub input: PathBuf,
    pub form: FormRequest,
    pub max_bond: Option<usize>,
    pub weight_tol: Option<f64>,
    pub out: PathBuf,
    pub rank_tol: f64,
}

pub fn decompose(args: &DecomposeArgs) -> Result<Report, CliError> {
    let t = read_json::<TensorFile>(&args.input)?.to_tensor()?;
    let policy = match (args.max_bond, args.weight_tol) {
        (None, None) => None,
        (chi, eps) => Some(TruncationPolicy::new(chi, eps).map_err(CliError::input)?),
    };
    let opts = DecomposeOptions {
        rank_tol: args.rank_tol,
        policy,
    };
    let dec = from_dense(&t, args.form, &opts)?;
    let m = &dec.mps;

    let mut spectra = Vec::with_capacity(m.len().saturating_sub(1));
    let mut entropies = Vec::with_capacity(spectra.capacity());
    for cut in 1..m.len() {
        let s = bond_spectrum(m, cut, args.rank_tol)?.into_inner();
        entropies.push(entropy(&s)?);
        spectra.push(s);
    }
    let discarded = dec.errors.iter().fold(0.0, |acc, e| acc + e * e).sqrt();
    write_json(&args.out, &MpsFile::from_mps(m))?;

    Ok(Report::ok(json!({
        "command": "decompose",
        "form": m.form().to_string(),
        "shape": t.shape(),
        "norm": t.norm(),
        "bond_dims": m.bond_dims(),
        "spectra": spectra,
        "entropies": entropies,
        "truncation_errors": dec.errors,
        "truncation_error_bound": discarded,
        "out": path_str(&args.out),
    })))
}

#[derive(Debug, Clone)]
pub struct ReconstructArgs {
    pub input: PathBuf,
    pub out: PathBuf,
    /// Original tensor to measure the reconstruction against.
    pub reference: Option<PathBuf>,
    pub rank_tol: f64,
}

pub fn reconstruct(args: &ReconstructArgs) -> Result<Report, CliError> {
    let m = read_json::<MpsFile>(&args.input)?.to_mps()?;
    let dense = to_dense(&m)?;
    write_json(&args.out, &TensorFile::from_tensor(&dense))?;

    // decompose the result again and contract it back: a check on the
    // contraction that needs no reference
    let norm = dense.norm();
    let round_trip = if norm == 0.0 {
        0.0
    } else {
        let opts = DecomposeOptions {
            rank_tol: args.rank_tol,
            policy: None,
        };
        let again = to_dense(&from_dense(&dense, FormRequest::Vidal, &opts)?.mps)?;
        again.distance(&dense)? / norm
    };
    let reference = match &args.reference {
        None => None,
        Some(p) => {
            let r = read_json::<TensorFile>(p)?.to_tensor()?;
            let dist = dense.distance(&r).map_err(CliError::input)?;
            Some(if r.norm() > 0.0 { dist / r.norm() } else { dist })
        }
    };

    Ok(Report::ok(json!({
        "command": "reconstruct",
        "form": m.form().to_string(),
        "shape": dense.shape(),
        "norm": norm,
        "round_trip_residual": round_trip,
        "reference_residual": reference,
        "out": path_str(&args.out),
    })))
}

#[derive(Debug, Clone)]
pub struct VerifyArgs {
    pub input: PathBuf,
    pub tol: f64,
    /// Also require `‖ψ‖ = 1`.
    pub normalized: bool,
}

pub fn verify(args: &VerifyArgs) -> Result<Report, CliError> {
    let m = read_json::<MpsFile>(&args.input)?.to_mps()?;
    let report = match verify_form(&m, args.tol, args.normalized) {
        Ok(r) => r,
        Err(e @ Error::FormMismatch { .. }) => return Err(CliError::verify(e)),
        Err(e) => return Err(e.into()),
    };
    let passed = report.passed();
    let body = match &report {
        FormReport::Normalization(r) => json!({
            "kind": "normalization",
            "residuals": r.residuals,
            "required": r.required,
            "worst_site": r.worst_site,
            "norm_sqr": r.norm_sqr,
        }),
        FormReport::Vidal(r) => json!({
            "kind": "vidal",
            "left_residuals": r.left_residuals,
            "right_residuals": r.right_residuals,
            "norm_residuals": r.norm_residuals,
        }),
    };
    Ok(Report {
        json: json!({
            "command": "verify",
            "form": m.form().to_string(),
            "tol": args.tol,
            "passed": passed,
            "report": body,
        }),
        code: if passed { 0 } else { EXIT_VERIFY },
    })
}

/// Oscillator parameters as read from a TOML file; command-line flags win.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorConfig {
    pub n: Option<usize>,
    pub omega_tilde: Option<f64>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub varphi: Option<f64>,
    pub cutoff: Option<usize>,
}

impl OscillatorConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }

    /// Fields set in `self` replace those in `base`.
    pub fn over(self, base: Self) -> Self {
        Self {
            n: self.n.or(base.n),
            omega_tilde: self.omega_tilde.or(base.omega_tilde),
            theta: self.theta.or(base.theta),
            phi: self.phi.or(base.phi),
            varphi: self.varphi.or(base.varphi),
            cutoff: self.cutoff.or(base.cutoff),
        }
    }

    pub fn params(&self) -> Result<OscillatorParams, CliError> {
        fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
            v.ok_or_else(|| CliError::input(format!("missing oscillator parameter `{name}`")))
        }
        OscillatorParams::new(
            need(self.n, "n")?,
            need(self.omega_tilde, "omega_tilde")?,
            need(self.theta, "theta")?,
            need(self.phi, "phi")?,
            need(self.varphi, "varphi")?,
            need(self.cutoff, "cutoff")?,
        )
        .map_err(CliError::input)
    }
}

#[derive(Debug, Clone)]
pub struct OscillatorArgs {
    pub params: OscillatorParams,
    pub out: PathBuf,
    pub csv: Option<PathBuf>,
}

pub fn oscillator(args: &OscillatorArgs) -> Result<Report, CliError> {
    let p = &args.params;
    let bundle = build_bundle(p)?;
    write_json(&args.out, &MpsFile::from_mps(&bundle.mps))?;

    let mut rows = 0usize;
    if let Some(path) = &args.csv {
        let io = |e: csv::Error| CliError::input(format!("{}: {e}", path.display()));
        let mut w = csv::Writer::from_path(path).map_err(io)?;
        w.write_record(["which", "a", "b", "index", "magnitude"]).map_err(io)?;
        for which in [Element::A1, Element::A2, Element::A3] {
            for r in element_decay_table(&bundle, which) {
                let b = r.b.map(|b| b.to_string()).unwrap_or_default();
                w.write_record([
                    r.which.to_string(),
                    r.a.to_string(),
                    b,
                    r.index.to_string(),
                    r.magnitude.to_string(),
                ])
                .map_err(io)?;
                rows += 1;
            }
        }
        w.flush().map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    }

    let (theta, phi, varphi) = p.angles();
    Ok(Report::ok(json!({
        "command": "oscillator",
        "n": p.n(),
        "omega_tilde": p.omega_tilde(),
        "angles": [theta, phi, varphi],
        "phys_cutoff": p.phys_cutoff(),
        "mode_direction": p.mode_direction(),
        "bond_dims": bundle.mps.bond_dims(),
        "alphas": p.alphas(),
        "gammas": p.gammas(),
        "out": path_str(&args.out),
        "csv": args.csv.as_deref().map(path_str),
        "csv_rows": rows,
    })))
}

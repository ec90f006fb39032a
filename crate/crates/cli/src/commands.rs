use std::path::Path;
use std::process::ExitCode;

use platoon_core::analysis::{self, Verdict};
use platoon_core::platoon::{self, DominanceCertificate};
use platoon_core::sim::{self, SimScenario};
use serde::Serialize;

use crate::config::{parse_config, LoadedConfig};
use crate::error::CliError;
use crate::output::{csv, num, write_out};

/// Residual ceiling for the eigenvector identities.
pub const IDENTITY_TOL: f64 = 1e-6;

fn load(path: &Path) -> Result<LoadedConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

fn print_notices(notices: &[String]) {
    for n in notices {
        eprintln!("notice: {n}");
    }
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    eigenvalues: &'a [f64],
    fiedler: f64,
    gershgorin_upper: f64,
    theorem1_lower: Option<f64>,
    dominance_certificate: Option<CertificateJson<'a>>,
}

#[derive(Serialize)]
struct CertificateJson<'a> {
    /// null when infinite (predecessor following).
    p: Option<f64>,
    row_margins: &'a [f64],
    lower_bound: f64,
}

impl<'a> From<&'a DominanceCertificate> for CertificateJson<'a> {
    fn from(c: &'a DominanceCertificate) -> Self {
        CertificateJson {
            p: c.p.is_finite().then_some(c.p),
            row_margins: &c.row_margins,
            lower_bound: c.lower_bound,
        }
    }
}

pub fn spectrum(config: &Path, out: Option<&Path>) -> Result<ExitCode, CliError> {
    let cfg = load(config)?;
    let report = platoon::spectrum(&cfg.platoon)?;
    print_notices(&report.notices);
    let cert = match platoon::dominance_certificate(&cfg.platoon) {
        Ok(c) => Some(c),
        Err(platoon_core::Error::CertificateHypothesis(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let body = SpectrumJson {
        eigenvalues: &report.eigenvalues,
        fiedler: report.fiedler,
        gershgorin_upper: report.gershgorin_upper,
        theorem1_lower: report.uniform_lower,
        dominance_certificate: cert.as_ref().map(CertificateJson::from),
    };
    let mut text = serde_json::to_string_pretty(&body).expect("report serializes");
    text.push('\n');
    write_out(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

pub fn harmonic(config: &Path, out: Option<&Path>) -> Result<ExitCode, CliError> {
    let cfg = load(config)?;
    let verdict = analysis::harmonic_test_with_band(&cfg.platoon, &cfg.band)?;
    print_notices(&verdict.notices);
    let mut text = serde_json::to_string_pretty(&verdict).expect("verdict serializes");
    text.push('\n');
    write_out(out, &text)?;
    Ok(match verdict.verdict {
        Verdict::UnstableBlocks => ExitCode::from(3),
        _ => ExitCode::SUCCESS,
    })
}

pub fn freqresp(config: &Path, out: Option<&Path>, points: usize) -> Result<ExitCode, CliError> {
    if points < 2 {
        return Err(CliError::Config("points must be at least 2".into()));
    }
    let cfg = load(config)?;
    let series = analysis::leader_to_last_response(&cfg.platoon, &cfg.band, points)?;
    let header = ["omega_rad_s", "re", "im", "mag_db"].map(String::from);
    let rows = series
        .omegas
        .iter()
        .zip(&series.values)
        .zip(series.magnitudes_db())
        .map(|((w, v), db)| vec![num(*w), num(v.re), num(v.im), num(db)]);
    write_out(out, &csv(&header, rows))?;
    Ok(ExitCode::SUCCESS)
}

pub fn gamma(
    config: &Path,
    out: Option<&Path>,
    n_min: usize,
    n_max: usize,
    n_step: usize,
) -> Result<ExitCode, CliError> {
    if n_min < 2 || n_max < n_min || n_step == 0 {
        return Err(CliError::Config(
            "sweep needs 2 <= n-min <= n-max and n-step > 0".into(),
        ));
    }
    let cfg = load(config)?;
    let template = cfg.template()?;
    let ns: Vec<usize> = (n_min..=n_max).step_by(n_step).collect();
    let rows = analysis::gamma_sequence(&template, &ns, &cfg.band)?;
    let header = ["n", "gamma", "gamma_root_n", "zeta_min_lower"].map(String::from);
    let body = csv(
        &header,
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                num(r.gamma),
                num(r.gamma_root_n),
                r.zeta_min_lower.map(num).unwrap_or_default(),
            ]
        }),
    );
    write_out(out, &body)?;
    Ok(ExitCode::SUCCESS)
}

pub fn step(
    config: &Path,
    out: Option<&Path>,
    t_end: f64,
    dt: f64,
    absolute: bool,
) -> Result<ExitCode, CliError> {
    let cfg = load(config)?;
    let delta = cfg.platoon.ref_distance();
    let n = cfg.platoon.n();
    let ts = sim::simulate(&SimScenario::unit_step(cfg.platoon, t_end, dt))?;
    let positions = if absolute {
        ts.absolute_positions(delta)
    } else {
        ts.deviations.clone()
    };
    let mut header = vec!["t".to_string()];
    header.extend((2..=n).map(|i| format!("pos_{i}")));
    let rows = ts.times.iter().zip(&positions).map(|(t, row)| {
        std::iter::once(num(*t))
            .chain(row.iter().map(|x| num(*x)))
            .collect()
    });
    write_out(out, &csv(&header, rows))?;
    Ok(ExitCode::SUCCESS)
}

pub fn identities(config: &Path) -> Result<ExitCode, CliError> {
    let cfg = load(config)?;
    let res = match analysis::verify_eigen_identities(&cfg.platoon) {
        Ok(r) => r,
        Err(platoon_core::Error::DefectiveSpectrum(gap)) => {
            eprintln!("simple eigenvalues required (min eigenvalue gap {gap:e})");
            return Ok(ExitCode::from(4));
        }
        Err(e) => return Err(e.into()),
    };
    for (m, r) in res.power_sums.iter().enumerate() {
        println!("power_sum m={m} residual={}", num(*r));
    }
    println!(
        "inverse_sum value={} expected={} residual={}",
        num(res.inverse_sum_value),
        num(1.0 / cfg.platoon.leader_gain()),
        num(res.inverse_sum)
    );
    let worst = res.max_residual();
    if worst <= IDENTITY_TOL {
        println!("ok: max residual {} <= {IDENTITY_TOL:e}", num(worst));
        Ok(ExitCode::SUCCESS)
    } else {
        println!("FAIL: max residual {} > {IDENTITY_TOL:e}", num(worst));
        Ok(ExitCode::from(4))
    }
}

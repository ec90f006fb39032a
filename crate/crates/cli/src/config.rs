//! JSON platoon configuration files.
//!
//! ```json
//! {
//!   "n": 20,
//!   "gains": 1.0,
//!   "asymmetries": 0.5,
//!   "vehicle":    { "num": [1], "den": [0, 0, 1] },
//!   "controller": { "num": [3, 43, 110], "den": [1, 2.9, 1] },
//!   "ref_distance": 1.0,
//!   "omega_band": [0.001, 1000]
//! }
//! ```
//!
//! Polynomial coefficients are listed in ascending powers of `s`. Scalar
//! `gains`/`asymmetries` apply to every follower (the trailing vehicle's
//! asymmetry is always 0); arrays must have `n − 1` entries.

use platoon_core::analysis::{Band, FamilyTemplate};
use platoon_core::{Error as CoreError, PlatoonConfig, RationalTF};
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum PerVehicle {
    Scalar(f64),
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub platoon: PlatoonConfig,
    pub band: Band,
    pub gains: PerVehicle,
    pub asymmetries: PerVehicle,
}

impl LoadedConfig {
    /// Family template for length sweeps; only scalar configs qualify.
    pub fn template(&self) -> Result<FamilyTemplate, CliError> {
        match (&self.gains, &self.asymmetries) {
            (PerVehicle::Scalar(g), PerVehicle::Scalar(e)) => Ok(FamilyTemplate {
                gains: vec![*g],
                asymmetries: vec![*e],
                vehicle: self.platoon.vehicle().clone(),
                controller: self.platoon.controller().clone(),
                ref_distance: self.platoon.ref_distance(),
            }),
            _ => Err(CliError::Config("sweep requires scalar template".into())),
        }
    }
}

fn bad(field: &str, reason: &str) -> CliError {
    CliError::Config(format!("{field} {reason}"))
}

fn number(v: &Value, field: &str) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| bad(field, "must be a number"))
}

fn number_list(v: &Value, field: &str) -> Result<Vec<f64>, CliError> {
    let arr = v.as_array().ok_or_else(|| bad(field, "must be an array of numbers"))?;
    if arr.is_empty() {
        return Err(bad(field, "must not be empty"));
    }
    arr.iter().map(|x| number(x, field)).collect()
}

fn per_vehicle(obj: &Map<String, Value>, field: &str) -> Result<PerVehicle, CliError> {
    match obj.get(field) {
        None => Err(bad(field, "required")),
        Some(Value::Array(_)) => Ok(PerVehicle::List(number_list(&obj[field], field)?)),
        Some(v) => Ok(PerVehicle::Scalar(number(v, field)?)),
    }
}

fn transfer_function(obj: &Map<String, Value>, field: &str) -> Result<RationalTF, CliError> {
    let tf = obj
        .get(field)
        .ok_or_else(|| bad(field, "required"))?
        .as_object()
        .ok_or_else(|| bad(field, "must be an object with num and den"))?;
    let num_field = format!("{field}.num");
    let den_field = format!("{field}.den");
    let num = number_list(tf.get("num").ok_or_else(|| bad(&num_field, "required"))?, &num_field)?;
    let den = number_list(tf.get("den").ok_or_else(|| bad(&den_field, "required"))?, &den_field)?;
    RationalTF::from_coeffs(num, den).map_err(|_| bad(&den_field, "must not be identically zero"))
}

fn expand(v: &PerVehicle, n: usize, field: &str) -> Result<Vec<f64>, CliError> {
    match v {
        PerVehicle::Scalar(x) => Ok(vec![*x; n - 1]),
        PerVehicle::List(xs) if xs.len() == n - 1 => Ok(xs.clone()),
        PerVehicle::List(xs) => Err(bad(
            field,
            &format!("must have n - 1 = {} entries, got {}", n - 1, xs.len()),
        )),
    }
}

pub fn parse_config(text: &str) -> Result<LoadedConfig, CliError> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("config is not valid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| CliError::Config("config must be a JSON object".into()))?;

    let n_val = obj.get("n").ok_or_else(|| bad("n", "required"))?;
    let n = n_val
        .as_u64()
        .filter(|&n| n >= 2)
        .ok_or_else(|| bad("n", "must be an integer >= 2"))? as usize;

    let gains = per_vehicle(obj, "gains")?;
    let asymmetries = per_vehicle(obj, "asymmetries")?;
    let vehicle = transfer_function(obj, "vehicle")?;
    let controller = transfer_function(obj, "controller")?;

    let ref_distance = match obj.get("ref_distance") {
        None => 1.0,
        Some(v) => number(v, "ref_distance")?,
    };
    let band = match obj.get("omega_band") {
        None => Band::default(),
        Some(v) => {
            let b = number_list(v, "omega_band")?;
            if b.len() != 2 {
                return Err(bad("omega_band", "must be [lo, hi]"));
            }
            Band::new(b[0], b[1]).map_err(|_| bad("omega_band", "must satisfy 0 < lo < hi"))?
        }
    };

    let gain_list = expand(&gains, n, "gains")?;
    let mut asym_list = expand(&asymmetries, n, "asymmetries")?;
    if matches!(asymmetries, PerVehicle::Scalar(_)) {
        // Broadcast covers vehicles that have a follower.
        *asym_list.last_mut().unwrap() = 0.0;
    }

    let platoon = PlatoonConfig::new(n, gain_list, asym_list, vehicle, controller, ref_distance)
        .map_err(|e| match e {
            CoreError::InvalidConfig { field, reason } => CliError::Config(format!("{field}: {reason}")),
            other => CliError::Config(other.to_string()),
        })?;

    Ok(LoadedConfig {
        platoon,
        band,
        gains,
        asymmetries,
    })
}

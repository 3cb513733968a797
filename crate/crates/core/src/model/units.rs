use serde::{Deserialize, Serialize};

use super::{Carrier, CarrierKind, CoefficientUnit, Diagnostic, DiagnosticCode, Efficiency, ModelError, Process, Scenario};

pub const SECONDS_PER_HOUR: f64 = 3600.0;
const JOULES_PER_KWH: f64 = 3.6e6;

/// Exergy flow in W of a material stream given in kg/s.
pub fn exergy_flow(mass_flow: f64, carrier: &Carrier) -> Result<f64, ModelError> {
    match (carrier.kind, carrier.chemical_exergy) {
        (CarrierKind::Material, Some(e)) => Ok(mass_flow * e),
        _ => Err(ModelError::NotMaterial(carrier.id.clone())),
    }
}

/// Availability law turning a weather series into a flow limit in kW.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenewableLaw {
    /// `coefficient · v³` (kW·s³/m³) between the cut-in and cut-off speeds.
    Wind { coefficient: f64, cut_in: f64, cut_off: f64 },
    /// `area · irradiance` with the area in m² and irradiance in W/m².
    Solar { area: f64 },
}

pub fn renewable_limit_series(law: &RenewableLaw, weather: &[f64]) -> Result<Vec<f64>, Diagnostic> {
    for (t, &w) in weather.iter().enumerate() {
        if !w.is_finite() {
            return Err(Diagnostic::fatal(DiagnosticCode::NonFinite, format!("weather step {}", t + 1), "weather value is not finite"));
        }
        if w < 0.0 {
            return Err(Diagnostic::fatal(
                DiagnosticCode::NegativeWeather,
                format!("weather step {}", t + 1),
                format!("weather value {w} is negative"),
            ));
        }
    }
    Ok(match *law {
        RenewableLaw::Wind { coefficient, cut_in, cut_off } => weather
            .iter()
            .map(|&v| if v >= cut_in && v <= cut_off { coefficient * v * v * v } else { 0.0 })
            .collect(),
        RenewableLaw::Solar { area } => weather.iter().map(|&g| area * g / 1000.0).collect(),
    })
}

fn single_material<'a>(scenario: &'a Scenario, shares: &[super::Share]) -> Option<&'a Carrier> {
    match shares {
        [only] => scenario.carrier(&only.carrier).filter(|c| c.is_material() && c.chemical_exergy.is_some()),
        _ => None,
    }
}

/// Global efficiency of `process` in exergy terms, with the conversion
/// factor applied to a declared unit-bearing coefficient.
pub fn resolve_efficiency(scenario: &Scenario, process: &Process) -> Result<(f64, Option<f64>), String> {
    match process.efficiency {
        Efficiency::Plain(v) => {
            if v.is_finite() && v > 0.0 && v <= 1.0 {
                Ok((v, None))
            } else {
                Err(format!("efficiency {v} is outside (0, 1]; declare a unit for coefficients above 1"))
            }
        }
        Efficiency::Declared { value, unit } => {
            if !(value.is_finite() && value > 0.0) {
                return Err(format!("coefficient {value} {} must be positive and finite", unit.as_str()));
            }
            let exergy = |c: &Carrier| c.chemical_exergy.unwrap();
            let factor = match unit {
                CoefficientUnit::KwPerKw => 1.0,
                CoefficientUnit::KgPerKwh => {
                    let out = single_material(scenario, &process.outlets)
                        .ok_or("kg/kWh needs exactly one material outlet")?;
                    exergy(out) / JOULES_PER_KWH
                }
                CoefficientUnit::KwhPerKg => {
                    let inp =
                        single_material(scenario, &process.inlets).ok_or("kWh/kg needs exactly one material inlet")?;
                    JOULES_PER_KWH / exergy(inp)
                }
                CoefficientUnit::KgPerKg => {
                    let inp =
                        single_material(scenario, &process.inlets).ok_or("kg/kg needs exactly one material inlet")?;
                    let out = single_material(scenario, &process.outlets)
                        .ok_or("kg/kg needs exactly one material outlet")?;
                    exergy(out) / exergy(inp)
                }
            };
            Ok((value * factor, Some(factor)))
        }
    }
}

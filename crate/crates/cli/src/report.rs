//! Machine-readable report objects and their CSV projections.
//!
//! JSON output is a single top-level object with lower_snake_case keys;
//! floats serialize at full precision (the shortest representation that
//! parses back to the identical bits). CSV is UTF-8, comma-separated,
//! `.` decimal point, always with a header row.

use serde::{Deserialize, Serialize};

/// Gap solution, phase-diagram context, and relaxation constants.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GapReport {
    pub epsilon: f64,
    pub beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_critical: Option<f64>,
    pub lambda: f64,
    pub k: f64,
    pub superconducting: bool,
    pub residual: f64,
    pub c: f64,
    pub d: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_exit_time: Option<f64>,
}

impl GapReport {
    pub const CSV_HEADER: &'static str = "epsilon,beta,beta_ratio,beta_critical,lambda,k,\
                                          superconducting,residual,c,d,invariant_exit_time";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.epsilon,
            self.beta,
            opt(self.beta_ratio),
            opt(self.beta_critical),
            self.lambda,
            self.k,
            self.superconducting,
            self.residual,
            self.c,
            self.d,
            opt(self.invariant_exit_time),
        )
    }
}

/// One sample of a scenario trajectory: closed form vs oracle.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_diff: f64,
}

pub const TRAJECTORY_CSV_HEADER: &str = "t,closed_form,oracle,abs_diff";

pub fn trajectory_csv_row(p: &TrajectoryPoint) -> String {
    format!("{},{},{},{}", p.t, p.closed_form, p.oracle, p.abs_diff)
}

/// Energy-entropy balance verdicts of the four operator families at one time.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EebVerdicts {
    pub t: f64,
    pub quadratures_satisfied: bool,
    pub quadratures_worst_margin: f64,
    pub constants_of_motion_satisfied: bool,
    pub constants_of_motion_worst_margin: f64,
    pub creation_satisfied: bool,
    pub creation_worst_margin: f64,
    pub annihilation_satisfied: bool,
    pub annihilation_worst_margin: f64,
    pub population_ratio: f64,
    pub boltzmann_ratio: f64,
    pub witness_modulus: f64,
}

pub const EEB_CSV_HEADER: &str = "t,quadratures_satisfied,quadratures_worst_margin,\
                                  constants_of_motion_satisfied,constants_of_motion_worst_margin,\
                                  creation_satisfied,creation_worst_margin,\
                                  annihilation_satisfied,annihilation_worst_margin,\
                                  population_ratio,boltzmann_ratio,witness_modulus";

pub fn eeb_csv_row(v: &EebVerdicts) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        v.t,
        v.quadratures_satisfied,
        v.quadratures_worst_margin,
        v.constants_of_motion_satisfied,
        v.constants_of_motion_worst_margin,
        v.creation_satisfied,
        v.creation_worst_margin,
        v.annihilation_satisfied,
        v.annihilation_worst_margin,
        v.population_ratio,
        v.boltzmann_ratio,
        v.witness_modulus,
    )
}

/// Full scenario report: gap context, classification, exit time, and the
/// stability audit at {t*/2, t*, 2t*} when an exit time exists.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScenarioReport {
    pub gap: GapReport,
    pub phi: f64,
    pub observable: String,
    pub seed: u64,
    pub classification: String,
    pub amplitude_offdiag: f64,
    pub amplitude_diag: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exit_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eeb: Option<Vec<EebVerdicts>>,
}

/// Scenario output as one JSON document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScenarioOutput {
    pub report: ScenarioReport,
    pub trajectory: Vec<TrajectoryPoint>,
}

/// Stability audit rows as one JSON document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StabilityOutput {
    pub gap: GapReport,
    pub phi: f64,
    pub seed: u64,
    pub rows: Vec<EebVerdicts>,
}

/// Sweep rows as one JSON document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
}

/// One grid point of a parameter sweep. Failures are recorded in-row.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub phi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub superconducting: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_star: Option<f64>,
    /// Peak σ^z excursion, attained exactly at t*.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_excursion: Option<f64>,
    /// How many of the four EEB families are satisfied at t*.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eeb_families_satisfied: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annihilation_violated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub const SWEEP_CSV_HEADER: &str = "epsilon,beta_ratio,beta,phi,lambda,k,superconducting,\
                                    residual,c,d,classification,t_star,peak_excursion,\
                                    eeb_families_satisfied,annihilation_violated,error";

pub fn sweep_csv_row(r: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.epsilon,
        opt(r.beta_ratio),
        opt(r.beta),
        r.phi,
        opt(r.lambda),
        opt(r.k),
        opt(r.superconducting),
        opt(r.residual),
        opt(r.c),
        opt(r.d),
        opt_ref(&r.classification),
        opt(r.t_star),
        opt(r.peak_excursion),
        opt(r.eeb_families_satisfied),
        opt(r.annihilation_violated),
        opt_ref(&r.error),
    )
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_ref(v: &Option<String>) -> String {
    v.clone().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_floats_round_trip_exactly() {
        let report = GapReport {
            epsilon: 0.1,
            beta: 2.0273255405408219,
            beta_ratio: Some(1.0000000000000002),
            beta_critical: Some(2.0273255405408219),
            lambda: 0.4170731337078085,
            k: 0.48626124548523453,
            superconducting: true,
            residual: 2.220446049250313e-16,
            c: 10.590735230639623,
            d: 17.181470461279247,
            invariant_exit_time: Some(0.07341395206141102),
        };
        let text = serde_json::to_string(&report).unwrap();
        let back: GapReport = serde_json::from_str(&text).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn csv_rows_match_header_arity() {
        let row = SweepRow {
            epsilon: 0.25,
            beta_ratio: Some(2.0),
            beta: Some(4.394),
            phi: 0.785,
            lambda: Some(0.417),
            k: Some(0.486),
            superconducting: Some(true),
            residual: Some(1e-16),
            c: Some(10.59),
            d: Some(17.18),
            classification: Some("metastable".into()),
            t_star: Some(0.0734),
            peak_excursion: Some(0.064),
            eeb_families_satisfied: Some(3),
            annihilation_violated: Some(true),
            error: None,
        };
        assert_eq!(
            sweep_csv_row(&row).split(',').count(),
            SWEEP_CSV_HEADER.split(',').count()
        );
        assert_eq!(GapReport::CSV_HEADER.split(',').count(), 11);
    }
}

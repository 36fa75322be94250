//! JSON envelope interface behind the `gausskit` binary.
//!
//! An envelope `{"command", "payload", "tolerances"?}` is validated, dispatched
//! and answered with a single JSON document. Exit codes: 0 success, 1
//! malformed input, 2 domain rejection (the report is still printed).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::covariance::{extreme_decompose, kn_membership, MembershipReport};
use crate::error::Error;
use crate::fock::{
    max_entry, oracle_chf, oracle_state_1mode, partial_trace, two_mode_vacuum_action, Keep,
    MAX_CUTOFF,
};
use crate::linalg::{mat_from_rows, mat_to_rows, CMat, RMat};
use crate::purification::{marginal, purify};
use crate::state::{chf, entropy_purity, new_state, pure_wave_params, state_spectrum, GaussianState};
use crate::symmetry::{act_on_state, compose, GaussianSymmetry};
use crate::symplectic::{random_symplectic, SymplecticMatrix};
use crate::tol::Tolerances;
use crate::williamson::williamson_decompose;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;

pub const COMMANDS: &[&str] = &[
    "check",
    "williamson",
    "decompose",
    "state chf",
    "state spectrum",
    "state entropy",
    "state wave",
    "act",
    "compose",
    "purify",
    "oracle chf",
    "oracle spectrum",
    "oracle ptrace",
    "random-symplectic",
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandEnvelope {
    pub command: String,
    #[serde(default)]
    pub payload: Value,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
}

/// Flags that apply on top of the envelope.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    /// Replaces every tolerance, including envelope overrides.
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    /// The JSON document for stdout, newline-terminated.
    pub stdout: String,
    /// Diagnostic line for stderr, if any.
    pub stderr: Option<String>,
}

type Complex = [f64; 2];

fn cx(z: Complex) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn pair(z: Complex64) -> Complex {
    [z.re, z.im]
}

fn cmat_json(m: &CMat) -> Vec<Vec<Complex>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateJson {
    l: Vec<f64>,
    m: Vec<f64>,
    #[serde(rename = "S")]
    s: Vec<Vec<f64>>,
}

impl StateJson {
    fn from_state(st: &GaussianState) -> Self {
        StateJson {
            l: st.l().iter().copied().collect(),
            m: st.m().iter().copied().collect(),
            s: mat_to_rows(st.s()),
        }
    }

    fn build(&self, tol: &Tolerances) -> Result<GaussianState, Failure> {
        Ok(new_state(&self.l, &self.m, &matrix(&self.s)?, tol)?)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymmetryJson {
    phase: Complex,
    alpha: Vec<Complex>,
    #[serde(rename = "L")]
    l: Vec<Vec<f64>>,
}

impl SymmetryJson {
    fn from_symmetry(g: &GaussianSymmetry) -> Self {
        SymmetryJson {
            phase: pair(g.phase()),
            alpha: g.alpha().iter().copied().map(pair).collect(),
            l: mat_to_rows(g.l().matrix()),
        }
    }

    fn build(&self, tol: &Tolerances) -> Result<GaussianSymmetry, Failure> {
        let l = SymplecticMatrix::new(matrix(&self.l)?, tol.sym)?;
        Ok(GaussianSymmetry::new(
            cx(self.phase),
            self.alpha.iter().copied().map(cx).collect(),
            l,
        )?)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixS {
    #[serde(rename = "S")]
    s: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixA {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateOnly {
    state: StateJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateAlpha {
    state: StateJson,
    alpha: Vec<Complex>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateK {
    state: StateJson,
    k: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActPayload {
    g: SymmetryJson,
    state: StateJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComposePayload {
    g1: SymmetryJson,
    g2: SymmetryJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleChfPayload {
    state: StateJson,
    alpha: Vec<Complex>,
    cutoff: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleSpectrumPayload {
    state: StateJson,
    k: usize,
    cutoff: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OraclePtracePayload {
    state: StateJson,
    /// 1 or 2
    keep: usize,
    cutoff: usize,
    /// Cutoff for building the two-mode vector; defaults to twice `cutoff`.
    #[serde(default)]
    work_cutoff: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomPayload {
    n: usize,
    #[serde(default)]
    spread: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Debug)]
enum Failure {
    Malformed(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Malformed(e.to_string())
    }
}

fn matrix(rows: &[Vec<f64>]) -> Result<RMat, Failure> {
    if rows.is_empty() {
        return Err(Failure::Malformed("matrix has no rows".into()));
    }
    Ok(mat_from_rows(rows)?)
}

fn parse<T: for<'de> Deserialize<'de>>(payload: Value) -> Result<T, Failure> {
    Ok(serde_json::from_value(payload)?)
}

fn one_mode(state: &GaussianState) -> Result<(), Failure> {
    if state.n() != 1 {
        return Err(Failure::Malformed(format!(
            "oracle commands take single-mode states (got {} modes)",
            state.n()
        )));
    }
    Ok(())
}

fn cutoff_ok(cutoff: usize) -> Result<(), Failure> {
    if cutoff == 0 || cutoff > MAX_CUTOFF {
        return Err(Failure::Malformed(format!("cutoff must lie in 1..={MAX_CUTOFF}")));
    }
    Ok(())
}

fn dispatch(command: &str, payload: Value, tol: &Tolerances, seed: Option<u64>) -> Result<Value, Failure> {
    match command {
        "check" => {
            let p: MatrixS = parse(payload)?;
            let report = kn_membership(&matrix(&p.s)?, tol)?;
            if !report.member {
                return Err(Error::NotInKn(Box::new(report)).into());
            }
            Ok(serde_json::to_value(report)?)
        }
        "williamson" => {
            let p: MatrixA = parse(payload)?;
            let w = williamson_decompose(&matrix(&p.a)?, tol.psd)?;
            Ok(json!({
                "d": w.d,
                "M": mat_to_rows(w.m.matrix()),
                "residual": w.residual,
                "symplectic_residual": w.symplectic_residual,
                "orientation": w.orientation,
            }))
        }
        "decompose" => {
            let p: MatrixS = parse(payload)?;
            let e = extreme_decompose(&matrix(&p.s)?, tol)?;
            Ok(json!({
                "L": mat_to_rows(e.l.matrix()),
                "M": mat_to_rows(e.m.matrix()),
                "residual": e.residual,
                "L_symplectic_residual": e.l.residual(),
                "M_symplectic_residual": e.m.residual(),
            }))
        }
        "state chf" => {
            let p: StateAlpha = parse(payload)?;
            let st = p.state.build(tol)?;
            let alpha: Vec<Complex64> = p.alpha.iter().copied().map(cx).collect();
            Ok(json!({ "value": pair(chf(&st, &alpha)?) }))
        }
        "state spectrum" => {
            let p: StateK = parse(payload)?;
            let st = p.state.build(tol)?;
            Ok(serde_json::to_value(state_spectrum(&st, p.k, tol)?)?)
        }
        "state entropy" => {
            let p: StateOnly = parse(payload)?;
            let st = p.state.build(tol)?;
            Ok(serde_json::to_value(entropy_purity(&st, tol)?)?)
        }
        "state wave" => {
            let p: StateOnly = parse(payload)?;
            let st = p.state.build(tol)?;
            let w = pure_wave_params(&st, tol)?;
            Ok(json!({
                "alpha": w.alpha.iter().copied().map(pair).collect::<Vec<_>>(),
                "U": cmat_json(&w.u),
                "lambdas": w.lambdas,
                "residual": w.residual,
            }))
        }
        "act" => {
            let p: ActPayload = parse(payload)?;
            let g = p.g.build(tol)?;
            let st = p.state.build(tol)?;
            let out = act_on_state(&g, &st)?;
            let report = kn_membership(out.s(), tol)?;
            Ok(json!({ "state": StateJson::from_state(&out), "member": report.member }))
        }
        "compose" => {
            let p: ComposePayload = parse(payload)?;
            let g = compose(&p.g1.build(tol)?, &p.g2.build(tol)?)?;
            Ok(json!({
                "g": SymmetryJson::from_symmetry(&g),
                "symplectic_residual": g.l().residual(),
            }))
        }
        "purify" => {
            let p: StateOnly = parse(payload)?;
            let st = p.state.build(tol)?;
            let r = purify(&st, tol)?;
            let report = kn_membership(r.pure_state.s(), tol)?;
            Ok(json!({
                "state": StateJson::from_state(&r.pure_state),
                "L1": mat_to_rows(r.factor_l1.matrix()),
                "L2": mat_to_rows(r.factor_l2.matrix()),
                "symmetry": SymmetryJson::from_symmetry(&r.symmetry),
                "marginal_residual": r.residual,
                "extreme": report.extreme,
            }))
        }
        "oracle chf" => {
            let p: OracleChfPayload = parse(payload)?;
            cutoff_ok(p.cutoff)?;
            let st = p.state.build(tol)?;
            one_mode(&st)?;
            let alpha: Vec<Complex64> = p.alpha.iter().copied().map(cx).collect();
            let analytic = chf(&st, &alpha)?;
            let rho = oracle_state_1mode(&st, p.cutoff)?;
            let value = oracle_chf(&rho, &alpha)?;
            Ok(json!({
                "value": pair(value),
                "analytic": pair(analytic),
                "deviation": (value - analytic).norm(),
                "trace": rho.trace().re,
            }))
        }
        "oracle spectrum" => {
            let p: OracleSpectrumPayload = parse(payload)?;
            cutoff_ok(p.cutoff)?;
            let st = p.state.build(tol)?;
            one_mode(&st)?;
            let analytic = state_spectrum(&st, p.k, tol)?;
            let rho = oracle_state_1mode(&st, p.cutoff)?;
            let mut eig: Vec<f64> = rho.matrix().clone().symmetric_eigenvalues().iter().copied().collect();
            eig.sort_by(|a, b| b.total_cmp(a));
            eig.truncate(p.k);
            let deviation = analytic
                .top_eigenvalues
                .iter()
                .zip(&eig)
                .map(|(a, b)| (a.eigenvalue - b).abs())
                .fold(0.0_f64, f64::max);
            let analytic: Vec<f64> = analytic.top_eigenvalues.iter().map(|e| e.eigenvalue).collect();
            Ok(json!({
                "eigenvalues": eig,
                "analytic": analytic,
                "max_deviation": deviation,
                "trace": rho.trace().re,
            }))
        }
        "oracle ptrace" => {
            let p: OraclePtracePayload = parse(payload)?;
            cutoff_ok(p.cutoff)?;
            let work = p.work_cutoff.unwrap_or((2 * p.cutoff).min(MAX_CUTOFF));
            cutoff_ok(work)?;
            if work < p.cutoff {
                return Err(Failure::Malformed("work_cutoff must be at least cutoff".into()));
            }
            let keep = match p.keep {
                1 => Keep::First,
                2 => Keep::Second,
                k => return Err(Failure::Malformed(format!("keep must be 1 or 2 (got {k})"))),
            };
            let st = p.state.build(tol)?;
            one_mode(&st)?;
            let r = purify(&st, tol)?;
            let psi = two_mode_vacuum_action(&r.symmetry, work)?;
            let rho = psi.truncate(p.cutoff)?.density();
            let reduced = partial_trace(&rho, keep)?;
            let kept = marginal(&r.pure_state, &[p.keep - 1])?;
            let reference = oracle_state_1mode(&kept, p.cutoff)?;
            Ok(json!({
                "rho": cmat_json(reduced.matrix()),
                "max_deviation": max_entry(&(reduced.matrix() - reference.matrix())),
                "trace": reduced.trace().re,
                "work_cutoff": work,
            }))
        }
        "random-symplectic" => {
            let p: RandomPayload = parse(payload)?;
            let seed = seed.or(p.seed).unwrap_or(0);
            let spread = p.spread.unwrap_or(0.5);
            let l = random_symplectic(p.n, seed, spread)?;
            Ok(json!({
                "L": mat_to_rows(l.matrix()),
                "seed": seed,
                "spread": spread,
                "symplectic_residual": l.residual(),
            }))
        }
        other => Err(Failure::Malformed(format!(
            "unknown command {other:?}; expected one of {}",
            COMMANDS.join(", ")
        ))),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidModeCount(_) => "invalid_mode_count",
        Error::NotSquare { .. } => "not_square",
        Error::OddDimension(_) => "odd_dimension",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NotSymmetric { .. } => "not_symmetric",
        Error::NotPositiveDefinite { .. } => "not_positive_definite",
        Error::NotSymplectic { .. } => "not_symplectic",
        Error::NotInKn(_) => "not_in_kn",
        Error::DiagonalBelowOne { .. } => "diagonal_below_one",
        Error::MixedState { .. } => "mixed_state",
        Error::NonUnitPhase { .. } => "non_unit_phase",
        Error::EmptySubset => "empty_subset",
        Error::ModeOutOfRange { .. } => "mode_out_of_range",
        Error::DuplicateMode(_) => "duplicate_mode",
        Error::OracleTrace { .. } => "oracle_trace",
        Error::SqueezeOutOfRange { .. } => "squeeze_out_of_range",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::Numerical(_) => "numerical",
    }
}

fn render(mut doc: Value, tol: Option<&Tolerances>) -> String {
    if let (Value::Object(map), Some(t)) = (&mut doc, tol) {
        map.insert("tolerances".into(), serde_json::to_value(t).expect("plain floats"));
    }
    let mut s = serde_json::to_string(&doc).expect("serializable document");
    s.push('\n');
    s
}

fn report_value(report: &MembershipReport) -> Value {
    serde_json::to_value(report).expect("plain fields")
}

pub fn execute(input: &str, overrides: Overrides) -> Outcome {
    let envelope: CommandEnvelope = match serde_json::from_str(input) {
        Ok(e) => e,
        Err(e) => {
            let msg = format!("malformed envelope: {e}");
            return Outcome {
                code: EXIT_MALFORMED,
                stdout: render(json!({ "error": { "kind": "malformed_input", "message": msg } }), None),
                stderr: Some(msg),
            };
        }
    };
    let mut tol = envelope.tolerances.unwrap_or_default();
    if let Some(t) = overrides.tol {
        tol = Tolerances::uniform(t);
    }
    let command = envelope.command.clone();
    match dispatch(&command, envelope.payload, &tol, overrides.seed) {
        Ok(mut result) => {
            if let Value::Object(map) = &mut result {
                map.insert("command".into(), Value::String(command));
            }
            Outcome {
                code: EXIT_OK,
                stdout: render(result, Some(&tol)),
                stderr: None,
            }
        }
        Err(Failure::Malformed(msg)) => Outcome {
            code: EXIT_MALFORMED,
            stdout: render(
                json!({ "command": command, "error": { "kind": "malformed_input", "message": msg } }),
                Some(&tol),
            ),
            stderr: Some(format!("{command}: {msg}")),
        },
        Err(Failure::Library(e)) => {
            let code = if e.is_domain_rejection() {
                EXIT_REJECTED
            } else {
                EXIT_MALFORMED
            };
            let mut err = json!({ "kind": error_kind(&e), "message": e.to_string() });
            if let Error::NotInKn(report) = &e {
                err["report"] = report_value(report);
            }
            Outcome {
                code,
                stdout: render(json!({ "command": command, "error": err }), Some(&tol)),
                stderr: Some(format!("{command}: {e}")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &str) -> (i32, Value) {
        let o = execute(s, Overrides::default());
        (o.code, serde_json::from_str(&o.stdout).unwrap())
    }

    #[test]
    fn vacuum_check() {
        let (code, v) = run(r#"{"command":"check","payload":{"S":[[0.5,0],[0,0.5]]}}"#);
        assert_eq!(code, 0);
        assert_eq!(v["member"], true);
        assert_eq!(v["extreme"], true);
        assert!((v["d"][0].as_f64().unwrap() - 0.5).abs() <= 1e-15);
        assert_eq!(v["tolerances"]["psd"], 1e-9);
    }

    #[test]
    fn sub_vacuum_is_rejected() {
        let (code, v) = run(r#"{"command":"check","payload":{"S":[[0.25,0],[0,0.25]]}}"#);
        assert_eq!(code, 2);
        let m = v["error"]["report"]["min_eig_complex"].as_f64().unwrap();
        assert!((m + 0.5).abs() < 1e-12);
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(run("{").0, 1);
        assert_eq!(run(r#"{"command":"check","payload":{"S":[[1]]},"extra":1}"#).0, 1);
        assert_eq!(run(r#"{"command":"check","payload":{"S":[[1]]}}"#).0, 1);
        assert_eq!(run(r#"{"command":"check","payload":{"T":[[1,0],[0,1]]}}"#).0, 1);
        assert_eq!(run(r#"{"command":"frobnicate","payload":{}}"#).0, 1);
    }

    #[test]
    fn tolerance_override() {
        let o = execute(
            r#"{"command":"williamson","payload":{"A":[[1,0],[0,4]]},"tolerances":{"psd":1e-6}}"#,
            Overrides::default(),
        );
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["tolerances"]["psd"], 1e-6);
        assert_eq!(v["tolerances"]["sym"], 1e-9);
        let o = execute(
            r#"{"command":"williamson","payload":{"A":[[1,0],[0,4]]},"tolerances":{"psd":1e-6}}"#,
            Overrides { tol: Some(1e-3), seed: None },
        );
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["tolerances"]["psd"], 1e-3);
        assert!((v["d"][0].as_f64().unwrap() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn output_is_deterministic() {
        let input = r#"{"command":"random-symplectic","payload":{"n":2}}"#;
        let a = execute(input, Overrides { tol: None, seed: Some(42) });
        let b = execute(input, Overrides { tol: None, seed: Some(42) });
        assert_eq!(a, b);
        let c = execute(input, Overrides { tol: None, seed: Some(43) });
        assert_ne!(a.stdout, c.stdout);
    }

    #[test]
    fn emitted_matrices_round_trip() {
        let (_, v) = run(r#"{"command":"random-symplectic","payload":{"n":2,"seed":5}}"#);
        let rows: Vec<Vec<f64>> = serde_json::from_value(v["L"].clone()).unwrap();
        let again = serde_json::to_value(&rows).unwrap();
        assert_eq!(again, v["L"]);
        let l = mat_from_rows(&rows).unwrap();
        assert_eq!(l, random_symplectic(2, 5, 0.5).unwrap().into_matrix());
    }
}

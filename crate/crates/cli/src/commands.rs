use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use omegaforge::bits::Bits;
use omegaforge::machines::{check_infsd, check_monotone, check_oracle, AnyMachine, Grid, Nat};
use omegaforge::measure::{
    ml_test_build, ml_test_verify, sub_enumeration, trace_violations, ClassTag, MeasureError, MlInput,
    Truncation, CSV_HEADER,
};
use omegaforge::stagewise::Stage;

use crate::config::{self, RunConfig};
use crate::error::CliError;
use crate::output::{emit, parse_json, to_json};
use crate::schema::{Artifact, Built, OracleScript, ARTIFACT_FORMAT};
use crate::Cli;

const DEFAULT_DEPTH: usize = 6;
const DEFAULT_STAGE: Stage = 32;
const DEFAULT_NMAX: Nat = 32;

pub fn build(cli: &Cli) -> Result<(), CliError> {
    let cfg = config::load_required(cli.config.as_deref())?;
    let spec = cfg
        .machine
        .clone()
        .ok_or_else(|| CliError::Input("configuration has no \"machine\"".into()))?;
    let Built { mut log, .. } = spec.build()?;
    log.seed = cfg.seed;
    let artifact = Artifact {
        format: ARTIFACT_FORMAT.into(),
        machine: spec,
        log,
    };
    let out = cli.out.as_deref().or(cfg.outputs.artifact.as_deref());
    emit(out, &to_json(&artifact))
}

pub fn load_machine(path: &Path) -> Result<AnyMachine, CliError> {
    let artifact: Artifact = parse_json(path)?;
    if artifact.format != ARTIFACT_FORMAT {
        return Err(CliError::Input(format!(
            "{}: format {:?}, expected {ARTIFACT_FORMAT:?}",
            path.display(),
            artifact.format
        )));
    }
    artifact.machine.build()?.machine.ok_or_else(|| {
        CliError::Domain(format!("{}: the artifact describes no machine", path.display()))
    })
}

fn measure_error(e: MeasureError) -> CliError {
    match e {
        MeasureError::Machine(m) => CliError::Violation(m.to_string()),
        other => CliError::Domain(other.to_string()),
    }
}

/// `points` evenly spaced truncations from the origin to `end`.
pub fn ramp(end: Truncation, points: usize) -> Vec<Truncation> {
    if points <= 1 {
        return vec![end];
    }
    let last = points - 1;
    (0..points)
        .map(|i| {
            Truncation::new(
                end.depth * i / last,
                (u64::from(end.stage) * i as u64 / last as u64) as Stage,
                end.n_max * i as Nat / last as Nat,
            )
        })
        .collect()
}

fn schedule(cli: &Cli, cfg: Option<&RunConfig>, points: usize) -> Vec<Truncation> {
    let flagged = cli.depth.is_some() || cli.stage.is_some() || cli.nmax.is_some();
    match cfg {
        Some(c) if !flagged && !c.schedule.is_empty() => c.schedule.clone(),
        _ => ramp(
            Truncation::new(
                cli.depth.unwrap_or(DEFAULT_DEPTH),
                cli.stage.unwrap_or(DEFAULT_STAGE),
                cli.nmax.unwrap_or(DEFAULT_NMAX),
            ),
            points,
        ),
    }
}

pub fn trace(cli: &Cli, machine: &Path, tag: &str, points: usize) -> Result<(), CliError> {
    let tag = ClassTag::from_str(tag).map_err(|e| CliError::Input(e.to_string()))?;
    let cfg = config::load(cli.config.as_deref())?;
    let machine = load_machine(machine)?;
    let sched = schedule(cli, cfg.as_ref(), points);
    let rows = omegaforge::measure::trace(&machine, tag, &sched, cli.jobs).map_err(measure_error)?;
    let mut csv = format!("{CSV_HEADER}\n");
    for r in &rows {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    let out = cli
        .out
        .as_deref()
        .or(cfg.as_ref().and_then(|c| c.outputs.trace.as_deref()));
    emit(out, &csv)?;
    let violations = trace_violations(&rows);
    if let Some(v) = violations.first() {
        return Err(CliError::Violation(format!(
            "{} certified-bound violation(s), first: {v}",
            violations.len()
        )));
    }
    Ok(())
}

/// Input of the `mltest` command.  Rationals are written as `"p/q"`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MlConfig {
    /// The prefix-free set in enumeration order.
    pub s: Vec<Bits>,
    /// The sub-enumeration, given directly ...
    #[serde(default)]
    pub v: Option<Vec<Bits>>,
    /// ... or by the stages at which indices into `s` enter an oracle.
    #[serde(default)]
    pub v_oracle: Option<OracleScript>,
    #[serde(default)]
    pub horizon: Option<Stage>,
    /// Bound on the measure of `S` not yet enumerated.
    #[serde(default)]
    pub tail: Option<String>,
    pub levels: u32,
    #[serde(default)]
    pub epsilons: BTreeMap<u32, String>,
    /// Multipliers applied to `δ_n` after building, for adversarial checks.
    #[serde(default)]
    pub delta_scale: BTreeMap<u32, String>,
}

fn rational(field: &str, s: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(s.trim()).map_err(|e| CliError::Input(format!("{field}: {s:?}: {e}")))
}

pub fn mltest(cli: &Cli, input: &Path) -> Result<(), CliError> {
    let ml: MlConfig = parse_json(input)?;
    let cfg = config::load(cli.config.as_deref())?;
    let v = match (&ml.v, &ml.v_oracle) {
        (Some(_), Some(_)) => {
            return Err(CliError::Input("give either \"v\" or \"v_oracle\", not both".into()))
        }
        (Some(v), None) => v.clone(),
        (None, Some(script)) => {
            let horizon = ml
                .horizon
                .ok_or_else(|| CliError::Input("\"v_oracle\" needs a \"horizon\"".into()))?;
            sub_enumeration(&ml.s, &script.to_approx()?, horizon)
        }
        (None, None) => Vec::new(),
    };
    let tail = match &ml.tail {
        Some(t) => rational("tail", t)?,
        None => BigRational::from_integer(0.into()),
    };
    let mut epsilons = BTreeMap::new();
    for (n, e) in &ml.epsilons {
        epsilons.insert(*n, rational("epsilons", e)?);
    }
    let horizon = v.len();
    let ml_input = MlInput {
        s: ml.s.clone(),
        v,
        tail,
    };
    let mut test = ml_test_build(&ml_input, ml.levels, &epsilons).map_err(CliError::domain)?;
    for (n, k) in &ml.delta_scale {
        let k = rational("delta_scale", k)?;
        let component = test
            .components
            .iter_mut()
            .find(|c| c.n == *n)
            .ok_or_else(|| CliError::Input(format!("delta_scale: no level {n}")))?;
        component.delta = &component.delta * &k;
    }
    let report = ml_test_verify(&test, horizon);
    let out = cli
        .out
        .as_deref()
        .or(cfg.as_ref().and_then(|c| c.outputs.report.as_deref()));
    emit(out, &to_json(&report))?;
    let failures = report.failures();
    if failures.is_empty() {
        Ok(())
    } else {
        let names: Vec<String> = failures.iter().map(u32::to_string).collect();
        Err(CliError::Violation(format!(
            "measure bound exceeded at n = {}",
            names.join(", ")
        )))
    }
}

pub fn verify_machine(cli: &Cli, machine: &Path) -> Result<(), CliError> {
    let m = load_machine(machine)?;
    let depth = cli.depth.unwrap_or(DEFAULT_DEPTH);
    let n_max = cli.nmax.unwrap_or(16);
    let stage = cli.stage.unwrap_or(DEFAULT_STAGE);
    let grid = Grid {
        depth,
        n_max,
        stage,
    };
    let violations = match &m {
        AnyMachine::Oracle(o) => check_oracle(o.as_ref(), grid),
        AnyMachine::Monotone(n) => check_monotone(n.as_ref(), grid),
        AnyMachine::InfSd(i) => check_infsd(i.as_ref(), depth, n_max),
    };
    let mut text = format!(
        "{} ({:?}): depth {depth}, n_max {n_max}, stage {stage}: {} violation(s)\n",
        m.describe(),
        m.kind(),
        violations.len()
    );
    for v in &violations {
        text.push_str(&format!("  {v}\n"));
    }
    emit(cli.out.as_deref(), &text)?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Violation(format!("{} invariant violation(s)", violations.len())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_ends_at_the_target() {
        let end = Truncation::new(6, 30, 12);
        let r = ramp(end, 4);
        assert_eq!(r.len(), 4);
        assert_eq!(r[0], Truncation::new(0, 0, 0));
        assert_eq!(r[3], end);
        assert!(r.windows(2).all(|w| w[0].precedes(&w[1])));
        assert_eq!(ramp(end, 1), vec![end]);
    }

    #[test]
    fn ml_config_rejects_unknown_keys() {
        let bad = r#"{"s":["0"],"levels":1,"epsilon":{}}"#;
        assert!(serde_json::from_str::<MlConfig>(bad).is_err());
    }
}

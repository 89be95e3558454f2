//! JSON surfaces: instance files, coverage files and solve reports.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Result, SapError};
use crate::greedy::GreedyTrace;
use crate::instance::{Instance, InstanceData, SeminarSelection};
use crate::rational;
use crate::reduction::CoverageInstance;
use crate::solver::SolveReport;

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let data: InstanceData =
        serde_json::from_str(text).map_err(|e| SapError::Parse(e.to_string()))?;
    Instance::new(data)
}

pub fn parse_coverage(text: &str) -> Result<CoverageInstance> {
    let mc: CoverageInstance =
        serde_json::from_str(text).map_err(|e| SapError::Parse(e.to_string()))?;
    mc.validate()?;
    Ok(mc)
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(inst.data()).expect("instance data serializes")
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    algorithm: &'static str,
    profit: String,
    assignment: Map<String, Value>,
    seed: &'a SeminarSelection,
    selection: &'a SeminarSelection,
    single_seminar_fallback: bool,
    fixed_size: bool,
    seeds_evaluated: usize,
    wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a GreedyTrace>,
}

/// Report document; assignment keys are student indices, values seminar ids.
pub fn report_json(inst: &Instance, report: &SolveReport) -> Value {
    let assignment = report
        .assignment
        .iter()
        .map(|(i, b)| (i.to_string(), Value::String(inst.seminar(b).id.clone())))
        .collect();
    let doc = ReportDoc {
        algorithm: report.algorithm.name(),
        profit: rational::format(&report.profit),
        assignment,
        seed: &report.seed_selection,
        selection: &report.selection,
        single_seminar_fallback: report.single_seminar_fallback,
        fixed_size: report.fixed_size,
        seeds_evaluated: report.seeds_evaluated,
        wall_time_ms: report.wall_time.as_secs_f64() * 1e3,
        trace: report.trace.as_ref(),
    };
    serde_json::to_value(doc).expect("report serializes")
}

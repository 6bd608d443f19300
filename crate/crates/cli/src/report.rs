use goppa_census::census::{CensusReport, CensusRow, Params};
use goppa_census::goppa::{CodeDump, MapKind};
use goppa_census::oracle::{ClassTally, Scope};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub r1: u32,
    pub rbar: u32,
    pub fix_affine: String,
    pub fix_projective: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub affine_classes: Vec<ClassTally>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub projective_classes: Vec<ClassTally>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectCounts {
    #[serde(rename = "N")]
    pub n: String,
    #[serde(rename = "Ne")]
    pub ne: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub params: Params,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<Scope>,
    pub elements_visited: String,
    pub rows: Vec<OracleRow>,
    #[serde(rename = "N")]
    pub n: String,
    #[serde(rename = "Ne")]
    pub ne: String,
    /// Frobenius cycles on the orbit keys, counted without Burnside.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_count_direct: Option<DirectCounts>,
    /// Projective matches whose dependency had c = 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affine_dependencies: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diff {
    pub r1: Option<u32>,
    pub field: &'static str,
    pub formula: Option<String>,
    pub oracle: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub trust: &'static str,
    #[serde(rename = "N")]
    pub n: Option<String>,
    #[serde(rename = "Ne")]
    pub ne: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub params: Params,
    pub ladder: goppa_census::Ladder,
    pub formula_rows: Vec<CensusRow>,
    pub formula: Option<CensusReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula_error: Option<String>,
    pub oracle: OracleReport,
    pub diffs: Vec<Diff>,
    pub status: &'static str,
    pub summary: Summary,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub p: u64,
    pub t: u32,
    pub r: u32,
    pub q: String,
    #[serde(rename = "N")]
    pub n: String,
    #[serde(rename = "Ne")]
    pub ne: String,
    pub reference_n: Option<String>,
    pub reference_ne: Option<String>,
    /// "agree", "disagree", or "none" when no reference value exists.
    pub flag: &'static str,
    pub breakdown: Vec<CensusRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapCheck {
    pub map: MapKind,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoppaReport {
    pub code: CodeDump,
    pub alpha_field_index: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub map_checks: Vec<MapCheck>,
    pub maps_passed: usize,
    pub maps_checked: usize,
}

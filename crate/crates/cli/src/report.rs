//! Machine-readable decision reports. Exact values are strings.

use serde::{Deserialize, Serialize};

use selfsim_core::decide::{BranchAnalysis, BranchReport, DecisionReport, GraphReport, Witness};
use selfsim_core::numeric::WitnessCheck;
use selfsim_core::words::DigitWord;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub beta: BetaFile,
    pub verdict: String,
    pub branch: Option<String>,
    pub bn: BnFile,
    pub vartheta: Option<u32>,
    pub direct: BranchFile,
    pub conjugate: Option<BranchFile>,
    pub witness: Option<WitnessFile>,
    pub witness_note: Option<String>,
    pub closed_form: Option<String>,
    pub timings: Timings,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaFile {
    /// Primitive integer coefficients, ascending.
    pub minimal_polynomial: Vec<String>,
    pub interval: [String; 2],
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BnFile {
    pub verdict: String,
    pub provenance: String,
    pub relation: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchFile {
    pub side: String,
    pub values: Vec<String>,
    #[serde(flatten)]
    pub analysis: AnalysisFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AnalysisFile {
    NotInT {
        entry: usize,
        value: String,
        n_max: usize,
    },
    Unresolved {
        tau: usize,
    },
    Graph(GraphFile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub tau: usize,
    pub vartheta: u32,
    pub n0: usize,
    pub words: Vec<String>,
    pub w_size: usize,
    pub vertices: Vec<String>,
    pub edge_count: usize,
    pub cycle: Option<Vec<String>>,
    pub longest_path: Option<usize>,
    pub witness_level: Option<usize>,
    pub coarse_level: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub side: String,
    pub level: usize,
    pub i1: Vec<String>,
    pub i2: Vec<String>,
    pub coverage_verified: bool,
    pub maps: Vec<MapFile>,
    pub check: Option<CheckFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub word: String,
    pub j: usize,
    pub reflected: bool,
    pub ratio: String,
    pub offset: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckFile {
    pub depth: usize,
    pub distance: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub decide_us: u64,
    pub verify_us: Option<u64>,
}

fn words(ws: &[DigitWord], n: u32) -> Vec<String> {
    ws.iter().map(|w| w.render(n)).collect()
}

impl GraphFile {
    pub fn from_graph(g: &GraphReport, n: u32) -> Self {
        GraphFile {
            tau: g.tau,
            vartheta: g.vartheta,
            n0: g.n0,
            words: words(&g.words, n),
            w_size: g.w_size,
            vertices: words(&g.vertices, n),
            edge_count: g.edge_count,
            cycle: g.cycle.as_ref().map(|c| words(c, n)),
            longest_path: g.longest_path,
            witness_level: g.witness_level,
            coarse_level: g.coarse_level,
        }
    }
}

impl BranchFile {
    pub fn from_branch(b: &BranchReport, n: u32) -> Self {
        let analysis = match &b.analysis {
            BranchAnalysis::NotInT {
                entry,
                value,
                n_max,
            } => AnalysisFile::NotInT {
                entry: *entry,
                value: value.to_string(),
                n_max: *n_max,
            },
            BranchAnalysis::Unresolved { tau } => AnalysisFile::Unresolved { tau: *tau },
            BranchAnalysis::Graph(g) => AnalysisFile::Graph(GraphFile::from_graph(g, n)),
        };
        BranchFile {
            side: b.side.as_str().into(),
            values: b.values.iter().map(ToString::to_string).collect(),
            analysis,
        }
    }
}

impl WitnessFile {
    pub fn from_witness(w: &Witness, n: u32) -> Self {
        WitnessFile {
            side: w.side.as_str().into(),
            level: w.level,
            i1: words(&w.i1, n),
            i2: words(&w.i2, n),
            coverage_verified: w.coverage_verified,
            maps: w
                .maps
                .iter()
                .map(|m| MapFile {
                    word: m.word.render(n),
                    j: m.j,
                    reflected: m.reflected,
                    ratio: m.ratio.to_string(),
                    offset: m.offset.to_string(),
                })
                .collect(),
            check: None,
        }
    }

    pub fn with_check(mut self, depth: usize, c: &WitnessCheck<f64>) -> Self {
        self.check = Some(CheckFile {
            depth,
            distance: c.distance,
            tol: c.tol,
            passed: c.passed,
        });
        self
    }
}

impl ReportFile {
    pub fn from_report(r: &DecisionReport, timings: Timings) -> Self {
        let iv = r.field.supplied_interval();
        ReportFile {
            schema: REPORT_SCHEMA,
            n: r.n,
            beta: BetaFile {
                minimal_polynomial: r
                    .field
                    .minimal_polynomial()
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
                interval: [iv.lo.to_string(), iv.hi.to_string()],
                degree: r.field.degree(),
            },
            verdict: r.verdict.to_string(),
            branch: r.branch.map(|b| b.as_str().into()),
            bn: BnFile {
                verdict: r.bn_status.verdict.to_string(),
                provenance: r.bn_status.provenance.as_str().into(),
                relation: r.bn_status.witness.as_ref().map(|w| w.coeffs.clone()),
            },
            vartheta: r.vartheta,
            direct: BranchFile::from_branch(&r.direct, r.n),
            conjugate: r.conjugate.as_ref().map(|b| BranchFile::from_branch(b, r.n)),
            witness: r.witness.as_ref().map(|w| WitnessFile::from_witness(w, r.n)),
            witness_note: r.witness_note.clone(),
            closed_form: r.closed_form.map(|v| v.to_string()),
            timings,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json_str(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

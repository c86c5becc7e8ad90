use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use resdist_core::graph::{parse_dimacs_gr, parse_edge_list};
use resdist_core::{build_graph, Graph, LabelIndex, NodeId, WeightMode};
use thiserror::Error;

use crate::{Format, GraphArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Build(String),
    #[error("{0}")]
    Verify(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Build(_) => 2,
            CliError::Verify(_) => 3,
        }
    }
}

pub fn input_error(context: &str) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::Input(format!("{context}: {e}"))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn weight_mode(args: &GraphArgs) -> WeightMode {
    match (args.weights, args.format) {
        (Some(w), _) => w.into(),
        (None, Format::Edges) => WeightMode::Conductance,
        (None, Format::Dimacs) => WeightMode::Unweighted,
    }
}

pub fn load_graph(args: &GraphArgs) -> Result<Graph, CliError> {
    let reader = open(&args.input)?;
    let records = match args.format {
        Format::Edges => parse_edge_list(reader),
        Format::Dimacs => parse_dimacs_gr(reader),
    }
    .map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
    build_graph(&records, weight_mode(args)).map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))
}

pub fn load_index(path: &Path) -> Result<LabelIndex, CliError> {
    LabelIndex::read_from(open(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn resolve(idx: &LabelIndex, external: u64) -> Result<NodeId, CliError> {
    idx.internal_id(external).ok_or_else(|| CliError::Input(format!("unknown node id {external}")))
}

/// The graph must be the one the index was built from.
pub fn check_matches(idx: &LabelIndex, g: &Graph) -> Result<(), CliError> {
    if idx.external_ids() != g.external_ids() {
        return Err(CliError::Input("index was not built from this graph".into()));
    }
    Ok(())
}

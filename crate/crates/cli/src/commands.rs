//! Command definitions and their text output.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use cyforge_core::completion::cy_completion;
use cyforge_core::document::{to_dot, DocumentError, QpDocument};
use cyforge_core::hochschild::{hc_dims, hh_dims};
use cyforge_core::jacobian::jacobian_dims;
use cyforge_core::mutation::{delete_vertex, premutate, reduce_trivial};
use cyforge_core::ncgeom::{check_nondegenerate, check_pairing_compat, ext_ainfty};
use cyforge_core::potential::{connes_b, Potential};
use cyforge_core::Error;

#[derive(Debug, Parser)]
#[command(name = "cyforge", version, about = "Quivers with potential, Ginzburg algebras and their invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Document to read; `-` for standard input.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Ginzburg algebra (or deformed CY completion of a dg input) as a document.
    Ginzburg {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        n: i64,
        /// Document whose potential is added as a deformation.
        #[arg(long)]
        deform: Option<PathBuf>,
    },
    /// Evaluates d^2 on every generator of a dg document.
    CheckD2 {
        #[command(flatten)]
        input: Input,
    },
    /// Dimensions of the truncated Jacobian algebra by path length.
    Jacobian {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_len: usize,
    },
    /// Pre-mutation at a vertex.
    Mutate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        vertex: String,
        /// Cancel 2-cycles appearing in the new potential.
        #[arg(long)]
        reduce: bool,
    },
    /// Removes a vertex with its arrows and the potential terms through it.
    DeleteVertex {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        vertex: String,
    },
    /// Hochschild homology of the path algebra by path length.
    Hh {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_len: usize,
    },
    /// Cyclic homology of the path algebra by path length.
    Hc {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_len: usize,
    },
    /// Connes' B applied to the potential.
    ConnesB {
        #[command(flatten)]
        input: Input,
    },
    /// Chain-level Calabi-Yau pairing checks for the 3-dimensional Ginzburg algebra.
    CyCheck {
        #[command(flatten)]
        input: Input,
    },
    /// A-infinity structure on Ext read off the Ginzburg differential.
    Ainfty {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        n: i64,
    },
    /// Graphviz description of the quiver.
    ExportDot {
        #[command(flatten)]
        input: Input,
    },
    /// HTTP session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory for session snapshots.
        #[arg(long, env = "CYFORGE_STATE_DIR")]
        state_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {message}")]
    Read { path: String, message: String },
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    /// 1 for bad input, 2 when an internal consistency check fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Document(_) => 1,
            CliError::Engine(Error::D2Failure { .. }) | CliError::CheckFailed(_) => 2,
            CliError::Engine(_) => 1,
        }
    }
}

pub fn read_document(path: &std::path::Path) -> Result<QpDocument, CliError> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| CliError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(QpDocument::parse(&text)?)
}

fn potential_or_zero(doc: &QpDocument, q: &std::sync::Arc<cyforge_core::algebra::GradedQuiver>, n: i64) -> Result<Potential, CliError> {
    let w = doc.potential_over(q)?;
    Ok(if w.is_zero() { Potential::zero(q.clone(), 3 - n) } else { w })
}

/// Runs a non-serving command and returns its standard output.
pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Ginzburg { input, n, deform } => {
            let doc = read_document(&input.input)?;
            let a = doc.dga()?;
            let q = a.quiver().clone();
            let mut w = potential_or_zero(&doc, &q, *n)?;
            if let Some(path) = deform {
                let extra = potential_or_zero(&read_document(path)?, &q, *n)?;
                w = w.plus(&extra)?;
            }
            let g = cy_completion(&a, *n, &w)?;
            Ok(QpDocument::from_ginzburg(&g).emit())
        }
        Command::CheckD2 { input } => {
            let a = read_document(&input.input)?.dga_unchecked()?;
            let report = a.check_d_squared();
            match report.failure {
                None => Ok(format!("d^2 = 0 on {} generators\n", report.generators_checked)),
                Some((g, residual)) => Err(CliError::CheckFailed(format!(
                    "d^2 != 0 on `{}`: {}",
                    a.quiver().arrow_name(g),
                    residual.display(a.quiver())
                ))),
            }
        }
        Command::Jacobian { input, max_len } => {
            let w = read_document(&input.input)?.potential()?;
            let j = jacobian_dims(&w, *max_len);
            let mut out = String::from("length\tdim\n");
            for (len, d) in j.dims.iter().enumerate() {
                let _ = writeln!(out, "{len}\t{d}");
            }
            let _ = writeln!(out, "total\t{}", j.total());
            let _ = writeln!(out, "stabilized\t{}", j.stabilized);
            if !j.length_homogeneous {
                out.push_str("filtered\ttrue\n");
            }
            Ok(out)
        }
        Command::Mutate { input, vertex, reduce } => {
            let qp = read_document(&input.input)?.qp()?;
            let v = qp.quiver().vertex_by_name(vertex)?;
            let mut out = premutate(&qp, v)?;
            if *reduce {
                out = reduce_trivial(&out)?.0;
            }
            Ok(QpDocument::from_qp(&out).emit())
        }
        Command::DeleteVertex { input, vertex } => {
            let qp = read_document(&input.input)?.qp()?;
            let v = qp.quiver().vertex_by_name(vertex)?;
            Ok(QpDocument::from_qp(&delete_vertex(&qp, v)?).emit())
        }
        Command::Hh { input, max_len } => {
            let q = read_document(&input.input)?.quiver()?;
            let mut out = String::from("length\tHH0\tHH1\n");
            for h in hh_dims(&q, *max_len) {
                let _ = writeln!(out, "{}\t{}\t{}", h.len, h.degree0, h.degree1);
            }
            Ok(out)
        }
        Command::Hc { input, max_len } => {
            let q = read_document(&input.input)?.quiver()?;
            let mut out = String::from("length\tHC0\tHC1\n");
            for h in hc_dims(&q, *max_len) {
                let _ = writeln!(out, "{}\t{}\t{}", h.len, h.degree0, h.degree1);
            }
            Ok(out)
        }
        Command::ConnesB { input } => {
            let w = read_document(&input.input)?.potential()?;
            let chain = connes_b(&w);
            Ok(format!("{}\n", chain.display(w.quiver())))
        }
        Command::CyCheck { input } => {
            let doc = read_document(&input.input)?;
            let q = doc.quiver()?;
            let w = potential_or_zero(&doc, &q, 3)?;
            let compat = check_pairing_compat(&q, &w)?;
            let nondeg = check_nondegenerate(&q, &w)?;
            let mut out = format!("{compat}\n");
            let _ = writeln!(
                out,
                "nondegenerate: {} ({} generators)",
                if nondeg.passed() { "pass" } else { "FAIL" },
                nondeg.generators
            );
            for p in &nondeg.problems {
                let _ = writeln!(out, "  {p}");
            }
            if compat.passed() && nondeg.passed() {
                Ok(out)
            } else {
                Err(CliError::CheckFailed(out.trim_end().to_string()))
            }
        }
        Command::Ainfty { input, n } => {
            let doc = read_document(&input.input)?;
            let q = doc.quiver()?;
            let w = potential_or_zero(&doc, &q, *n)?;
            let g = cyforge_core::completion::ginzburg(&q, &w, *n)?;
            let table = ext_ainfty(&g)?;
            let failures = table.round_trip_failures(&g);
            if !failures.is_empty() {
                return Err(CliError::CheckFailed(format!(
                    "reassembly differs on {} generators",
                    failures.len()
                )));
            }
            let mut out = table.display(g.quiver());
            if !out.ends_with('\n') {
                out.push('\n');
            }
            Ok(out)
        }
        Command::ExportDot { input } => {
            let doc = read_document(&input.input)?;
            let q = doc.quiver()?;
            let w = doc.potential_over(&q)?;
            Ok(to_dot(&q, (!w.is_zero()).then_some(&w)))
        }
        Command::Serve { .. } => Err(CliError::Engine(Error::UnsupportedArgument(
            "serve runs through the async entry point".into(),
        ))),
    }
}

//! The `distrealize` command-line tool.
//!
//! Exit codes: 0 feasible / pass / full agreement, 1 infeasible / fail /
//! disagreement, 2 usage or input error.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::doc::{
    to_pretty_json, CrosscheckDocument, InstanceDocument, ReportDocument, ResultDocument, Witness, WitnessDocument,
};
use crate::error::{Error, Result};
use crate::family::{IntervalFamily, Variant};
use crate::graph::decide_graph;
use crate::instance::{random_instance, InstanceSpec};
use crate::oracle::{brute_force_graph_decide, brute_force_tree_decide, MAX_ORACLE_LEAVES};
use crate::splits::Strategy;
use crate::tree::{decide_star, decide_tree, TreeDecision};
use crate::verify::{verify_graph, verify_tree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "distrealize", version, about = "Realize interval-constrained distances by weighted graphs and trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide an instance file and print a witness or certificates.
    Decide {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "topology")]
        strategy: Strategy,
        /// Include every candidate's certificate for infeasible tree instances.
        #[arg(long)]
        emit_certificate: bool,
    },
    /// Check a witness against an instance.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare the deciders with brute force on seeded random instances.
    Crosscheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        variant: Variant,
        #[arg(long, default_value_t = 50)]
        seeds: u64,
        #[arg(long, default_value = "topology")]
        strategy: Strategy,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// A finished command: exit code and the document to print.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub document: String,
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_family(path: &PathBuf) -> Result<IntervalFamily> {
    InstanceDocument::parse(&read(path)?)
        .and_then(|doc| doc.to_family())
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn decide_document(family: &IntervalFamily, strategy: Strategy, emit_certificate: bool) -> Result<ResultDocument> {
    match family.variant() {
        Variant::GraphClosed => ResultDocument::from_graph(&decide_graph(family)?, family),
        Variant::StarOpen => ResultDocument::from_tree(&decide_star(family)?, family, emit_certificate),
        _ => ResultDocument::from_tree(&decide_tree(family, strategy)?, family, emit_certificate),
    }
}

pub fn cmd_decide(input: &PathBuf, strategy: Strategy, emit_certificate: bool) -> Result<Outcome> {
    let family = load_family(input)?;
    let doc = decide_document(&family, strategy, emit_certificate)?;
    let code = if doc.feasible { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome { code, document: to_pretty_json(&doc) })
}

pub fn cmd_verify(input: &PathBuf, witness: &PathBuf) -> Result<Outcome> {
    let family = load_family(input)?;
    let witness = WitnessDocument::parse(&read(witness)?)
        .and_then(|w| w.to_witness())
        .map_err(|e| Error::Parse(format!("{}: {e}", witness.display())))?;
    let report = match witness {
        Witness::Graph(g) => verify_graph(&g, &family)?,
        Witness::Tree(t) => verify_tree(&t, &family)?,
    };
    let code = if report.passed() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome { code, document: to_pretty_json(&ReportDocument::from_report(&report)) })
}

/// Decide one seeded instance both ways. `Ok(None)` on agreement (with
/// verified witnesses), `Ok(Some(note))` otherwise.
pub fn crosscheck_seed(n: usize, variant: Variant, strategy: Strategy, seed: u64) -> Result<(bool, Option<String>)> {
    let (family, _) = random_instance(&InstanceSpec::mixed(n, variant, seed))?;
    let (main, oracle, witness_ok) = match variant {
        Variant::GraphClosed => {
            let d = decide_graph(&family)?;
            let o = brute_force_graph_decide(&family)?;
            let ok = match &d {
                crate::graph::GraphDecision::Feasible { witness } => verify_graph(witness, &family)?.passed(),
                _ => true,
            };
            (d.is_feasible(), o.is_feasible(), ok)
        }
        _ => {
            let d = if variant == Variant::StarOpen { decide_star(&family)? } else { decide_tree(&family, strategy)? };
            let o = brute_force_tree_decide(&family)?;
            let ok = match &d {
                TreeDecision::Feasible { witness, .. } => verify_tree(witness, &family)?.passed(),
                TreeDecision::Infeasible { certificates } => certificates.iter().all(|c| c.validate(&family).is_ok()),
            };
            (d.is_feasible(), o.is_feasible(), ok)
        }
    };
    let note = if main != oracle {
        Some(format!("decider says feasible = {main}, brute force says {oracle}"))
    } else if !witness_ok {
        Some("decider output failed re-verification".to_string())
    } else {
        None
    };
    Ok((main, note))
}

pub fn cmd_crosscheck(n: usize, variant: Variant, seeds: u64, strategy: Strategy) -> Result<Outcome> {
    if !(2..=MAX_ORACLE_LEAVES).contains(&n) {
        return Err(Error::Size(format!("crosscheck needs 2 <= n <= {MAX_ORACLE_LEAVES}, got {n}")));
    }
    if variant.is_tree() && n < 4 && strategy == Strategy::Raw {
        return Err(Error::Size("raw strategy needs n >= 4".into()));
    }
    let mut doc = CrosscheckDocument {
        n,
        variant: variant.name().to_string(),
        strategy: format!("{strategy:?}").to_lowercase(),
        seeds,
        feasible: 0,
        infeasible: 0,
        agreed: 0,
        disagreements: Vec::new(),
        notes: Default::default(),
    };
    for seed in 0..seeds {
        let (feasible, note) = crosscheck_seed(n, variant, strategy, seed)?;
        if feasible {
            doc.feasible += 1;
        } else {
            doc.infeasible += 1;
        }
        match note {
            None => doc.agreed += 1,
            Some(note) => {
                doc.disagreements.push(seed);
                doc.notes.insert(seed, note);
            }
        }
    }
    let code = if doc.disagreements.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome { code, document: to_pretty_json(&doc) })
}

fn emit(document: &str, output: &Option<PathBuf>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, document).map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => {
            print!("{document}");
            Ok(())
        }
    }
}

/// Run a parsed command; errors become exit code 2 with a message on
/// stderr.
pub fn run(cli: Cli) -> i32 {
    let (result, output) = match cli.command {
        Command::Decide { input, output, strategy, emit_certificate } => {
            (cmd_decide(&input, strategy, emit_certificate), output)
        }
        Command::Verify { input, witness, output } => (cmd_verify(&input, &witness), output),
        Command::Crosscheck { n, variant, seeds, strategy, output } => {
            (cmd_crosscheck(n, variant, seeds, strategy), output)
        }
    };
    match result.and_then(|o| emit(&o.document, &output).map(|_| o.code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

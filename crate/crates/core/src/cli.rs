//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error or failed verification,
//! 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{ArgGroup, Parser, Subcommand};

use crate::mgt::{
    check_t_relations, check_u_relations, closure_bounded, projection_stats, u_qp, MgtElement, MgtError,
    DEFAULT_MAX_MODULUS,
};
use crate::strata::{build_poset_bounded, codim_profile, DEFAULT_MAX_N};
use crate::symmetric::{act_on_tree, FinPermutation};
use crate::trees::StableTree;
use crate::verify::{self, Suite, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "genus0", version, about = "Stable trees, boundary strata, cofinite permutations and the mGT tower")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Boundary strata of M_0,n as a poset of stable trees.
    #[command(group(ArgGroup::new("format").args(["profile", "dot", "json"])))]
    Strata {
        n: u32,
        /// Number of strata in each codimension (the default).
        #[arg(long)]
        profile: bool,
        /// Cover relations as a Graphviz digraph.
        #[arg(long)]
        dot: bool,
        /// Nodes and covers as JSON.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: u32,
    },
    /// The finite group mGT_q acting on Z/qZ.
    #[command(group(ArgGroup::new("mode").args(["order", "elements", "project", "check_relations"])))]
    Mgt {
        q: u32,
        /// Group order (the default).
        #[arg(long)]
        order: bool,
        /// Every element as a table of images, one per line.
        #[arg(long)]
        elements: bool,
        /// Reduce mod p: the image of --element, or kernel and image sizes.
        #[arg(long, value_name = "P")]
        project: Option<u32>,
        /// Element of mGT_q to project, as {"q":..,"table":[..]} or a bare table.
        #[arg(long, value_name = "JSON", requires = "project")]
        element: Option<String>,
        /// Check the reduction relations on every divisor chain whose top is a
        /// multiple of q no larger than S.
        #[arg(long, value_name = "S")]
        check_relations: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_MAX_MODULUS)]
        max_q: u32,
    },
    /// Run invariant suites.
    Verify {
        #[arg(long, default_value = "all", value_parser = ["trees", "strata", "symmetric", "mgt", "all"])]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Relabel the tails of a tree by a permutation in cycle notation.
    Act {
        permutation: String,
        /// Tree as {"vertices":[..],"edges":[[a,b],..],"tails":{"label":vertex,..}}.
        tree: String,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, String> {
    let text = match command {
        Command::Strata { n, dot, json, max_n, .. } => {
            let poset = build_poset_bounded(n, max_n).map_err(|e| e.to_string())?;
            if dot {
                poset.export_dot()
            } else if json {
                serde_json::to_string(&poset.to_json()).expect("poset JSON serializes")
            } else {
                codim_profile(&poset).to_string()
            }
        }
        Command::Mgt {
            q,
            elements,
            project,
            element,
            check_relations,
            max_q,
            ..
        } => mgt_command(q, elements, project, element, check_relations, max_q).map_err(|e| e.to_string())?,
        Command::Verify { suite, seed } => {
            let suite: Suite = suite.parse()?;
            let report = verify::run(suite, seed);
            writeln!(out, "{report}").map_err(|e| e.to_string())?;
            return Ok(if report.passed() { 0 } else { 1 });
        }
        Command::Act { permutation, tree } => {
            let p: FinPermutation = permutation.parse().map_err(|e: crate::symmetric::SymmetricError| e.to_string())?;
            let t = StableTree::from_json_str(&tree).map_err(|e| e.to_string())?;
            act_on_tree(&p, &t).canonical_form().to_json_string()
        }
    };
    writeln!(out, "{text}").map_err(|e| e.to_string())?;
    Ok(0)
}

#[derive(Debug, thiserror::Error)]
enum MgtCliError {
    #[error(transparent)]
    Mgt(#[from] MgtError),
    #[error("cannot parse element: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Other(String),
}

fn mgt_command(
    q: u32,
    elements: bool,
    project: Option<u32>,
    element: Option<String>,
    check_relations: Option<u32>,
    max_q: u32,
) -> Result<String, MgtCliError> {
    let group = closure_bounded(q, max_q)?;
    if elements {
        return Ok(group.iter().map(MgtElement::table_json).collect::<Vec<_>>().join("\n"));
    }
    if let Some(p) = project {
        if p == 0 || !q.is_multiple_of(p) {
            return Err(MgtError::NotADivisor { p, q }.into());
        }
        let Some(text) = element else {
            let st = projection_stats(q, p, max_q)?;
            return Ok(format!(
                "|mGT_{q}| = {}, |mGT_{p}| = {}, kernel {}, image {}",
                st.source_order, st.target_order, st.kernel, st.image
            ));
        };
        let e = parse_element(&text)?;
        if e.modulus() != q {
            return Err(MgtError::ModulusMismatch(q, e.modulus()).into());
        }
        if !group.contains(&e) {
            return Err(MgtCliError::Other(format!("{e} is not in mGT_{q}")));
        }
        return Ok(u_qp(&e, p)?.table_json());
    }
    if let Some(s) = check_relations {
        if s < q || s > max_q {
            return Err(MgtError::OutOfRange { q: s, min: q, max: max_q }.into());
        }
        let tops: Vec<u32> = (q..=s).filter(|t| t % q == 0).collect();
        let t = check_t_relations(tops.iter().copied())?;
        let u = check_u_relations(tops.iter().copied(), max_q)?;
        return match t.failure.or(u.failure) {
            None => Ok("OK (all chains)".to_string()),
            Some(f) => Err(MgtCliError::Other(f)),
        };
    }
    Ok(group.len().to_string())
}

fn parse_element(text: &str) -> Result<MgtElement, MgtCliError> {
    if text.trim_start().starts_with('[') {
        let table: Vec<u32> = serde_json::from_str(text)?;
        Ok(MgtElement::from_table(table)?)
    } else {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("genus0").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn profiles() {
        assert_eq!(call(&["strata", "4", "--profile"]).1, "codim: [1, 3] total: 4\n");
        assert_eq!(call(&["strata", "3"]).1, "codim: [1] total: 1\n");
        assert_eq!(call(&["strata", "2"]).0, 1);
        assert_eq!(call(&["strata", "4", "--dot", "--json"]).0, 2);
    }

    #[test]
    fn mgt_modes() {
        assert_eq!(call(&["mgt", "5", "--order"]).1, "20\n");
        assert_eq!(call(&["mgt", "6", "--project", "3", "--element", "[0,5,4,3,2,1]"]).1, "[0,2,1]\n");
        assert_eq!(call(&["mgt", "6", "--project", "4"]).0, 1);
        assert_eq!(call(&["mgt", "3", "--elements"]).1.lines().count(), 6);
        assert_eq!(call(&["mgt", "1"]).0, 1);
        assert_eq!(call(&["mgt", "5", "--element", "[0,1,2,3,4]"]).0, 2);
    }
}

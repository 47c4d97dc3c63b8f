use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qhyper_core::hyperalg::{
    derived_relations_rea3, hyperdet_fixed, hyperdet_full_sum, hyperdet_normalized, minor_xi, relations,
    relations_axis, HyperAlgebra, RelationSet,
};
use qhyper_core::ncalg::text::{render_latex, render_text, to_json};
use qhyper_core::pfaffian::{pf_full, pf_prime, pf_recursive, PfShape};
use qhyper_core::verify::{check_theorem, registry, CheckOptions, CheckReport, Limits, MembershipOptions, Mode, Params};
use qhyper_core::NCPoly;

const USAGE: u8 = 64;

/// `println!` that exits quietly once stdout is closed.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout().lock(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "qhyper", version, about = "Quantum hyperdeterminants and hyper-Pfaffians")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for span generation; 0 uses all cores.
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a quantum hyperdeterminant.
    Det {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        m: usize,
        /// Fixed-axis form with the identity on this axis.
        #[arg(long, conflicts_with_all = ["normalized", "full_sum"])]
        fixed_axis: Option<usize>,
        /// Full permutation sum divided by [n]_{q^2}! (the default).
        #[arg(long)]
        normalized: bool,
        /// Full permutation sum without normalization.
        #[arg(long, conflicts_with = "normalized")]
        full_sum: bool,
    },
    /// Expand a quantum hyper-Pfaffian.
    Pf {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        blocks: usize,
        #[arg(long, value_enum, default_value_t = PfForm::Prime)]
        form: PfForm,
    },
    /// Expand a minor hyperdeterminant; one `--sets 1,2` per axis.
    Minor {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        m: usize,
        #[arg(long, required = true, value_parser = parse_set)]
        sets: Vec<Vec<u8>>,
    },
    /// Print the defining relations.
    Relations {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        m: usize,
        /// Only the relations of this axis.
        #[arg(long)]
        axis: Option<usize>,
        /// The derived cross-axis differences instead.
        #[arg(long)]
        derived: bool,
    },
    /// Run a registered identity check.
    Verify(VerifyArgs),
    /// List registered checks.
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PfForm {
    Prime,
    Full,
    Recursive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Specialize,
    Auto,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    id: String,
    #[arg(long)]
    n: Option<u8>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    r: Option<u8>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    kprime: Option<usize>,
    #[arg(long)]
    axis: Option<usize>,
    /// Axes before the split of a split comultiplication; alias of `--m`.
    #[arg(long)]
    split: Option<usize>,
    #[arg(long)]
    m2: Option<usize>,
    #[arg(long)]
    axis2: Option<usize>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    cartan: Option<String>,
    #[arg(long)]
    hypf: Option<String>,
    #[arg(long)]
    sign: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    #[arg(long, default_value_t = 3)]
    samples: usize,
    #[arg(long, env = "QHYPER_SEED", default_value_t = 0x5eed)]
    seed: u64,
    /// Largest basis dimension (words) before giving up.
    #[arg(long, default_value_t = Limits::default().max_words)]
    max_dim: usize,
    #[arg(long, default_value_t = Limits::default().max_rows)]
    max_rows: usize,
}

fn parse_set(s: &str) -> Result<Vec<u8>, String> {
    s.split(',').map(|x| x.trim().parse::<u8>().map_err(|e| format!("{x}: {e}"))).collect()
}

fn print_poly(p: &NCPoly, format: Format) {
    match format {
        Format::Text => out!("{}", render_text(p)),
        Format::Latex => out!("{}", render_latex(p)),
        Format::Json => out!("{}", to_json(p)),
    }
}

fn print_relations(rels: &RelationSet, format: Format) {
    match format {
        Format::Json => out!("{}", serde_json::Value::Array(rels.iter().map(to_json).collect())),
        Format::Text => rels.iter().for_each(|r| out!("{}", render_text(r))),
        Format::Latex => rels.iter().for_each(|r| out!("{} = 0", render_latex(r))),
    }
}

fn print_report(r: &CheckReport, format: Format) {
    match format {
        Format::Json => out!("{}", serde_json::to_string_pretty(r).expect("serializable")),
        Format::Text | Format::Latex => {
            out!("{}: {}", r.id, r.verdict.label());
            out!("params: {}", serde_json::to_string(&r.params).expect("serializable"));
            match serde_json::to_value(&r.verdict).expect("serializable") {
                serde_json::Value::Object(o) if o.len() > 1 => out!("detail: {}", serde_json::Value::Object(o)),
                _ => {}
            }
            out!(
                "mode: {:?}, words: {}, rows: {}, rank: {}, grades: {}, seed: {}",
                r.mode, r.dims.words, r.dims.rows, r.dims.rank, r.dims.grades, r.seed
            );
            for n in &r.notes {
                out!("  {n}");
            }
            eprintln!("elapsed: {} ms", r.millis);
        }
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE)
}

fn run(cli: Cli) -> ExitCode {
    let format = cli.format;
    match cli.command {
        Command::Det { n, m, fixed_axis, normalized: _, full_sum } => {
            if n == 0 || m == 0 {
                return usage_error("n and m must be positive");
            }
            let alg = HyperAlgebra::cube(n, m);
            let p = match (fixed_axis, full_sum) {
                (Some(k), _) => hyperdet_fixed(&alg, k),
                (None, true) => hyperdet_full_sum(&alg),
                (None, false) => hyperdet_normalized(&alg),
            };
            match p {
                Ok(p) => print_poly(&p, format),
                Err(e) => return usage_error(e),
            }
        }
        Command::Pf { k, m, blocks, form } => {
            let shape = match PfShape::new(k, m, blocks) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            let p = match form {
                PfForm::Prime => pf_prime(&shape, 0, 'b'),
                PfForm::Full => pf_full(&shape, 0, 'b'),
                PfForm::Recursive => pf_recursive(&shape, 0, 'b'),
            };
            print_poly(&p, format);
        }
        Command::Minor { n, m, sets } => {
            if n == 0 || m == 0 {
                return usage_error("n and m must be positive");
            }
            match minor_xi(&HyperAlgebra::cube(n, m), &sets) {
                Ok(p) => print_poly(&p, format),
                Err(e) => return usage_error(e),
            }
        }
        Command::Relations { n, m, axis, derived } => {
            if n == 0 || m == 0 {
                return usage_error("n and m must be positive");
            }
            let alg = HyperAlgebra::cube(n, m);
            let rels = match (derived, axis) {
                (true, _) => derived_relations_rea3(&alg),
                (false, Some(k)) => relations_axis(&alg, k),
                (false, None) => Ok(relations(&alg)),
            };
            match rels {
                Ok(r) => print_relations(&r, format),
                Err(e) => return usage_error(e),
            }
        }
        Command::List => {
            let reg = registry();
            match format {
                Format::Json => out!("{}", serde_json::to_string_pretty(&reg).expect("serializable")),
                Format::Text | Format::Latex => {
                    for t in reg {
                        let defaults = serde_json::to_string(&t.defaults).expect("serializable");
                        out!("{:<30} {:<56} {defaults}", t.id, t.anchor);
                    }
                }
            }
        }
        Command::Verify(a) => {
            if a.split.is_some() && a.m.is_some() && a.split != a.m {
                return usage_error("--split and --m disagree");
            }
            let params = Params {
                n: a.n,
                m: a.m.or(a.split),
                k: a.k,
                l: a.l,
                r: a.r,
                t: a.t,
                blocks: a.blocks,
                p: a.p,
                kprime: a.kprime,
                axis: a.axis,
                m2: a.m2,
                axis2: a.axis2,
                instances: a.instances,
                cartan: a.cartan,
                hypf: a.hypf,
                sign: a.sign,
            };
            let mode = match a.mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Specialize => Mode::Specialize,
                ModeArg::Auto => Mode::Auto,
            };
            let opts = CheckOptions {
                membership: MembershipOptions {
                    mode,
                    samples: a.samples,
                    seed: a.seed,
                    limits: Limits { max_words: a.max_dim, max_rows: a.max_rows },
                },
            };
            match check_theorem(&a.id, &params, &opts) {
                Ok(r) => {
                    print_report(&r, format);
                    return ExitCode::from(r.exit_code() as u8);
                }
                Err(e) => return usage_error(e),
            }
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            return usage_error(e);
        }
    }
    run(cli)
}

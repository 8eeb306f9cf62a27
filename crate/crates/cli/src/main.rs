use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kopt_core::analytic::{k_optimal_first_order, k_optimal_second_order, weight_table};
use kopt_core::io::{design_to_csv, design_to_json, parse_bounds, parse_design, parse_design_doc};
use kopt_core::metrics::{efficiency_comparison, evaluate};
use kopt_core::optimizer::optimize_weights;
use kopt_core::simplex::{simplex_centroid, simplex_lattice, transform_design};
use kopt_core::{Criterion, Design, ModelBasis, OptimizeSpec, Order, TransformDirection};

type Result<T> = std::result::Result<T, Box<dyn std::error::Error>>;

/// K-optimal designs for first- and second-order Scheffé mixture models.
#[derive(Parser, Debug)]
#[command(name = "kopt", version)]
struct Cli {
    /// Worker threads for multistart optimization (results do not depend on it).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Write output to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equal-weight {q, m} simplex-lattice design.
    Lattice {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = DesignFormat::Json)]
        format: DesignFormat,
    },
    /// Equal-weight simplex-centroid design.
    Centroid {
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = DesignFormat::Json)]
        format: DesignFormat,
    },
    /// Closed-form K-optimal design.
    Koptimal {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = DesignFormat::Json)]
        format: DesignFormat,
    },
    /// Spectral metrics of a design's information matrix.
    Evaluate {
        /// Design JSON ("-" for standard input).
        #[arg(long)]
        design: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
    },
    /// Optimize weights on a fixed support.
    Optimize {
        /// Design JSON whose points form the support; its weights are ignored.
        #[arg(long)]
        support: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[arg(long, default_value_t = kopt_core::optimizer::DEFAULT_MULTISTARTS)]
        multistarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optimize every weight separately instead of per permutation orbit.
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long, default_value_t = kopt_core::optimizer::DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// D- and K-efficiency of the K-optimal design against the equal-weight {q, 2} lattice.
    Efficiency {
        #[arg(long)]
        q: usize,
    },
    /// Map a design between original and pseudo-component coordinates.
    Transform {
        #[arg(long)]
        design: PathBuf,
        /// Bounds JSON {"lower": [...], "upper": [...]}.
        #[arg(long)]
        bounds: PathBuf,
        #[arg(long, value_enum)]
        direction: DirectionArg,
    },
    /// K-optimal second-order weights for q = 3..=qmax.
    Table {
        #[arg(long)]
        qmax: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DesignFormat {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TableFormat {
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CriterionArg {
    K,
    D,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DirectionArg {
    ToPseudoLower,
    FromPseudoLower,
    ToPseudoUpper,
    FromPseudoUpper,
}

impl From<DirectionArg> for TransformDirection {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::ToPseudoLower => TransformDirection::ToPseudoLower,
            DirectionArg::FromPseudoLower => TransformDirection::FromPseudoLower,
            DirectionArg::ToPseudoUpper => TransformDirection::ToPseudoUpper,
            DirectionArg::FromPseudoUpper => TransformDirection::FromPseudoUpper,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()?;
    }
    let out = match &cli.command {
        Command::Lattice { q, m, format } => {
            render(&Design::uniform(simplex_lattice(*q, *m)?)?, *format)
        }
        Command::Centroid { q, format } => {
            render(&Design::uniform(simplex_centroid(*q)?)?, *format)
        }
        Command::Koptimal { order, q, format } => {
            let d = match order_of(*order)? {
                Order::First => k_optimal_first_order(*q)?,
                Order::Second => k_optimal_second_order(*q)?,
            };
            render(&d, *format)
        }
        Command::Evaluate { design, order } => {
            let d = parse_design(&read_input(design)?)?;
            let b = ModelBasis::new(d.q(), order_of(*order)?)?;
            json_line(&evaluate(&d, &b)?)
        }
        Command::Optimize {
            support,
            order,
            criterion,
            multistarts,
            seed,
            no_symmetry,
            tol,
        } => {
            let doc = parse_design_doc(&read_input(support)?)?;
            let points = doc.support()?;
            let basis = ModelBasis::new(doc.q, order_of(*order)?)?;
            let criterion = match criterion {
                CriterionArg::K => Criterion::K,
                CriterionArg::D => Criterion::D,
            };
            let mut spec = OptimizeSpec::new(criterion, points, basis);
            spec.multistarts = *multistarts;
            spec.seed = *seed;
            spec.symmetry_reduction = !no_symmetry;
            spec.tolerance = *tol;
            let result = optimize_weights(&spec)?;
            // carry the support along so the output is itself a design document
            let mut value = serde_json::to_value(&result)?;
            let map = value.as_object_mut().expect("result is an object");
            map.insert("q".into(), doc.q.into());
            map.insert("points".into(), serde_json::to_value(&doc.points)?);
            json_line(&value)
        }
        Command::Efficiency { q } => json_line(&efficiency_comparison(*q)?),
        Command::Transform {
            design,
            bounds,
            direction,
        } => {
            let d = parse_design(&read_input(design)?)?;
            let b = parse_bounds(&read_input(bounds)?)?;
            render(
                &transform_design(&d, &b, (*direction).into())?,
                DesignFormat::Json,
            )
        }
        Command::Table { qmax, format } => {
            let t = weight_table(*qmax)?;
            Ok(match format {
                TableFormat::Csv => t.to_csv(),
                TableFormat::Text => t.to_text(),
            })
        }
    }?;
    write_output(cli.output.as_deref(), &out)
}

fn order_of(order: u8) -> Result<Order> {
    Ok(Order::try_from(order)?)
}

fn render(d: &Design, format: DesignFormat) -> Result<String> {
    Ok(match format {
        DesignFormat::Json => design_to_json(d) + "\n",
        DesignFormat::Csv => design_to_csv(d),
    })
}

fn json_line<T: serde::Serialize + ?Sized>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()).into())
}

fn write_output(path: Option<&Path>, s: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, s).map_err(|e| format!("cannot write {}: {e}", p.display()).into()),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(s.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

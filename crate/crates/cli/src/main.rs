use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperiso::candidates::{initial_mesh, CandidateSpec, Case};
use hyperiso::evolve::{evolve_to_convergence, write_trace_csv, EvolveConfig, Status};
use hyperiso::hyperbolic::cell;
use hyperiso::mesh::write_off;
use hyperiso::sweep::{self, Curve};
use hyperiso::Error;

#[derive(Parser)]
#[command(name = "hyperiso", version, about = "Isoperimetric surfaces in the hyperbolic cubic lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the cell constants.
    Constants,
    /// Evolve one candidate to convergence.
    Evolve {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        eps: f64,
        /// Write the iteration trace as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the final mesh as OFF.
        #[arg(long)]
        mesh_out: Option<PathBuf>,
    },
    /// Evolve a candidate over an ε grid and write the V×A table.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Grid `lo:hi:n`, endpoints included; defaults to the case's
        /// admissible range.
        #[arg(long, value_parser = parse_range)]
        eps_range: Option<(f64, f64, usize)>,
        /// Grid size when `--eps-range` is absent.
        #[arg(long, default_value_t = 12)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assemble the isop-curve and its turning points from sweep tables.
    Isop {
        /// Sweep CSV files containing aaa, abb and bbe records.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Area ratios of bbd, acc and abc against the isop-curve and bbd.
    Gaps {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Hyperbolic volumes of the eighth and of the cube.
    Cellvol,
    /// Run the closed-form oracle checks.
    Validate,
    /// Write a candidate's initial mesh as OFF.
    ExportMesh {
        #[arg(long)]
        case: Case,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        mesh_out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    case: Case,
    /// `key = value` evolution settings.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    max_iter: Option<usize>,
}

impl RunArgs {
    fn config(&self) -> hyperiso::Result<EvolveConfig> {
        let mut cfg = match &self.config {
            Some(p) => EvolveConfig::parse(&std::fs::read_to_string(p)?)?,
            None => EvolveConfig::default(),
        };
        if let Some(n) = self.max_iter {
            cfg.max_iterations = n;
        }
        Ok(cfg)
    }
}

fn parse_range(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err("expected lo:hi:n".into());
    };
    let lo = lo.parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi = hi.parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    let n = n.parse().map_err(|_| format!("bad count `{n}`"))?;
    Ok((lo, hi, n))
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn load_records(inputs: &[PathBuf]) -> hyperiso::Result<Vec<sweep::SweepRecord>> {
    let mut all = Vec::new();
    for p in inputs {
        all.extend(sweep::read_csv(BufReader::new(File::open(p)?))?);
    }
    Ok(all)
}

fn write_mesh(path: &Path, mesh: &hyperiso::mesh::SurfaceMesh) -> hyperiso::Result<()> {
    write_off(mesh, BufWriter::new(File::create(path)?))
}

/// Degeneration is the expected outcome only for bcd.
fn degenerate_exit(case: Case, status: Status) -> ExitCode {
    if status == Status::Degenerate && case != Case::Bcd {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> hyperiso::Result<ExitCode> {
    match cli.command {
        Command::Constants => {
            let g = cell();
            println!("c       {:.15}", g.c);
            println!("r       {:.15}", g.r);
            println!("eps_max {:.15}", g.eps_max);
            println!("corner  {:.15}", g.corner);
            println!("vertex  {:.15}", g.vertex);
            println!("V_eps   {:.15}", hyperiso::candidates::volume_for_eps(g.eps_max)?);
        }
        Command::Evolve { run, eps, out, mesh_out } => {
            let cfg = run.config()?;
            let spec = CandidateSpec::new(run.case, eps)?;
            let r = evolve_to_convergence(&initial_mesh(&spec)?, &cfg)?;
            println!(
                "{} eps={} V_target={:.10} V={:.10} A={:.8} facets={} iterations={} status={} ortho={:.4}",
                run.case,
                eps,
                spec.target_volume,
                r.volume,
                r.area,
                r.mesh.area_facet_count(),
                r.iterations,
                r.status,
                r.orthogonality_deficit
            );
            if let Some(why) = &r.reason {
                println!("reason: {why}");
            }
            if let Some(p) = out {
                write_trace_csv(&r, BufWriter::new(File::create(p)?))?;
            }
            if let Some(p) = mesh_out {
                write_mesh(&p, &r.mesh)?;
            }
            return Ok(degenerate_exit(run.case, r.status));
        }
        Command::Sweep { run, eps_range, points, out } => {
            let cfg = run.config()?;
            let grid = match eps_range {
                Some((lo, hi, n)) => sweep::linspace(lo, hi, n),
                None => sweep::default_grid(run.case, points),
            };
            let records = sweep::run_sweep(run.case, &grid, &cfg)?;
            let mut w = output(&out)?;
            sweep::write_csv(&records, &mut w)?;
            w.flush()?;
            if run.case != Case::Bcd && records.iter().any(|r| r.status == Status::Degenerate) {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Isop { inputs, out } => {
            let records = load_records(&inputs)?;
            let isop = sweep::isop_curve(&records)?;
            let mut w = output(&out)?;
            writeln!(w, "volume,area,winner")?;
            for p in &isop.points {
                writeln!(w, "{:.12e},{:.12e},{}", p.volume, p.area, p.winner)?;
            }
            w.flush()?;
            for (a, b) in [(Case::Aaa, Case::Abb), (Case::Abb, Case::Bbe)] {
                let tps = sweep::turning_points(&Curve::from_records(&records, a), &Curve::from_records(&records, b))?;
                for t in tps {
                    eprintln!("turning point {a}/{b}: V = {:.5} ± {:.5}", t.volume, t.uncertainty);
                }
            }
        }
        Command::Gaps { inputs } => {
            let records = load_records(&inputs)?;
            let isop = sweep::isop_curve(&records)?;
            let bbd = Curve::from_records(&records, Case::Bbd);
            let g = sweep::gap_report(&bbd, &isop)?;
            println!("bbd/isop  min {:.4} at V={:.4}  max {:.4} at V={:.4}", g.min, g.min_at, g.max, g.max_at);
            for case in [Case::Acc, Case::Abc] {
                let c = Curve::from_records(&records, case);
                match sweep::family_ratio(&c, &bbd) {
                    Ok(r) => println!("{case}/bbd  min {:.4} at V={:.4}  max {:.4} at V={:.4}", r.min, r.min_at, r.max, r.max_at),
                    Err(e) => println!("{case}/bbd  {e}"),
                }
            }
        }
        Command::Cellvol => {
            let (vb, vc) = sweep::cell_volume()?;
            println!("V_B {vb:.10}");
            println!("V_C {vc:.10}");
        }
        Command::Validate => {
            let checks = sweep::validate()?;
            for c in &checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                println!("{mark} {} (residual {:.3e}, tolerance {:.1e})", c.name, c.residual, c.tolerance);
            }
            if checks.iter().any(|c| !c.passed) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::ExportMesh { case, eps, mesh_out } => {
            let mesh = initial_mesh(&CandidateSpec::new(case, eps)?)?;
            write_mesh(&mesh_out, &mesh)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) | Error::Config(_) | Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

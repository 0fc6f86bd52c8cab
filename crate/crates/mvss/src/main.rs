use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use mvss::instances::random_rips_instance;
use mvss::io;
use mvss::pipeline::{compute, Options};
use mvss_core::complex::build_vietoris_rips;
use mvss_core::cover::{default_epsilon, Partition, PartitionSpec};
use mvss_core::persistence::{standard_persistence, Barcode};
use mvss_core::{FieldSpec, Grade};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "mvss", about = "Persistent homology by Mayer-Vietoris spectral sequence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverKind {
    Cube,
    Voronoi,
    Geodesic,
}

#[derive(clap::Args)]
struct ComputeArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    cover: PathBuf,
    /// Prime characteristic of the coefficient field.
    #[arg(long, default_value_t = 2)]
    field: u32,
    /// Resolve extensions against the global boundary matrix.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long)]
    ledger: Option<PathBuf>,
    #[arg(long)]
    dump_pages: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Vietoris-Rips complex of a CSV point cloud.
    BuildRips {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        max_grade: Grade,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Thickened partition cover.
    Cover {
        #[arg(long, value_enum)]
        kind: CoverKind,
        #[arg(long)]
        points: Option<PathBuf>,
        /// Needed for geodesic covers.
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long)]
        side: Option<f64>,
        /// Comma separated cube origin; defaults to the coordinate-wise minimum.
        #[arg(long, value_delimiter = ',')]
        origin: Option<Vec<f64>>,
        /// Landmark points (CSV) for Voronoi, vertex ids for geodesic.
        #[arg(long)]
        landmarks: Option<PathBuf>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// With `--max-grade`, sets the default epsilon `2 * step * max_grade`.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        max_grade: Option<Grade>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Barcode through the spectral sequence.
    Compute(ComputeArgs),
    /// Barcode by direct reduction, without the cover.
    Oracle {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks the spectral barcodes against the direct reduction.
    Compare {
        #[arg(long, required_unless_present = "random")]
        complex: Option<PathBuf>,
        #[arg(long, required_unless_present = "random")]
        cover: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        field: u32,
        /// Instead of files, check this many seeded random instances.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Writes every page of the spectral sequence as text.
    DumpPages {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long)]
        dir: PathBuf,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_dumps(dir: &Path, dumps: &[String]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for (i, d) in dumps.iter().enumerate() {
        let p = dir.join(format!("page{}.txt", i + 1));
        std::fs::write(&p, d).with_context(|| format!("cannot write {}", p.display()))?;
    }
    Ok(())
}

fn field(p: u32) -> Result<FieldSpec> {
    Ok(FieldSpec::new(p)?)
}

/// Pointwise Betti agreement at every grade up to past the last endpoint.
fn pointwise_equal(a: &Barcode, b: &Barcode) -> bool {
    let top = a.max_grade().max(b.max_grade()) + 1;
    let dims = a.max_dim().max(b.max_dim()).unwrap_or(0);
    (0..=dims).all(|n| (0..=top).all(|s| a.betti(n, s) == b.betti(n, s)))
}

fn compare_one(name: &str, x: &mvss_core::complex::FilteredComplex, cover: &mvss_core::complex::Cover, f: FieldSpec) -> Result<bool> {
    let oracle = standard_persistence(x, &f);
    let opts = Options {
        field: f,
        exact: true,
        ..Default::default()
    };
    let out = compute(x, cover, &opts)?;
    let betti = pointwise_equal(&out.graded, &oracle);
    let exact = out.exact.as_ref() == Some(&oracle);
    println!(
        "{name}: pointwise-betti {} exact {}",
        if betti { "PASS" } else { "FAIL" },
        if exact { "PASS" } else { "FAIL" }
    );
    Ok(betti && exact)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::BuildRips {
            points,
            step,
            max_grade,
            max_dim,
            out,
        } => {
            let pts = io::parse_points(&io::read_file(&points)?)?;
            let x = build_vietoris_rips(&pts, step, max_grade, max_dim)?;
            emit(&out, &io::format_complex(&x))?;
        }
        Command::Cover {
            kind,
            points,
            complex,
            side,
            origin,
            landmarks,
            epsilon,
            step,
            max_grade,
            out,
        } => {
            let pts = match &points {
                Some(p) => io::parse_points(&io::read_file(p)?)?,
                None => Vec::new(),
            };
            let x = match &complex {
                Some(p) => io::parse_complex(&io::read_file(p)?)?,
                None => Default::default(),
            };
            let epsilon = match (epsilon, step, max_grade) {
                (Some(e), _, _) => e,
                (None, Some(s), Some(g)) => default_epsilon(s, g),
                _ => 0.0,
            };
            let variant = match kind {
                CoverKind::Cube => {
                    let side = side.context("--side is required for cube covers")?;
                    let origin = origin.unwrap_or_else(|| {
                        let d = pts.first().map_or(0, Vec::len);
                        (0..d).map(|k| pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min)).collect()
                    });
                    Partition::Cube { origin, side }
                }
                CoverKind::Voronoi => {
                    let l = landmarks.context("--landmarks is required for Voronoi covers")?;
                    Partition::Voronoi {
                        landmarks: io::parse_points(&io::read_file(&l)?)?,
                    }
                }
                CoverKind::Geodesic => {
                    let l = landmarks.context("--landmarks is required for geodesic covers")?;
                    if complex.is_none() {
                        bail!("--complex is required for geodesic covers");
                    }
                    Partition::Geodesic {
                        landmarks: io::parse_vertex_ids(&io::read_file(&l)?)?,
                    }
                }
            };
            let spec = PartitionSpec { variant, epsilon };
            spec.validate()?;
            let cover = spec.build(&pts, &x)?;
            emit(&out, &io::format_cover(&cover))?;
        }
        Command::Compute(a) => {
            let x = io::parse_complex(&io::read_file(&a.complex)?)?;
            let cover = io::parse_cover(&io::read_file(&a.cover)?)?;
            let opts = Options {
                field: field(a.field)?,
                workers: a.parallel,
                exact: a.exact,
                keep_pages: a.dump_pages.is_some(),
            };
            let o = compute(&x, &cover, &opts)?;
            if let Some(dir) = &a.dump_pages {
                write_dumps(dir, &o.dumps)?;
            }
            if let Some(l) = &a.ledger {
                std::fs::write(l, io::format_ledger(&o.ledger, &o.plan)?).with_context(|| format!("cannot write {}", l.display()))?;
                eprintln!(
                    "messages: total {} bound {} {}",
                    o.stats.total,
                    o.stats.bound,
                    if o.stats.passed { "PASS" } else { "FAIL" }
                );
            }
            let b = if a.exact { o.exact.expect("requested") } else { o.graded };
            emit(&a.out, &io::format_barcode(&b))?;
            return Ok(o.stats.passed);
        }
        Command::Oracle { complex, field: p, out } => {
            let x = io::parse_complex(&io::read_file(&complex)?)?;
            emit(&out, &io::format_barcode(&standard_persistence(&x, &field(p)?)))?;
        }
        Command::Compare {
            complex,
            cover,
            field: p,
            random,
            seed,
        } => {
            let f = field(p)?;
            if let Some(n) = random {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut ok = true;
                for i in 0..n {
                    let inst = random_rips_instance(&mut rng, 200);
                    ok &= compare_one(&format!("instance {i} ({})", inst.name), &inst.complex, &inst.cover, f)?;
                }
                return Ok(ok);
            }
            let x = io::parse_complex(&io::read_file(complex.as_ref().expect("required"))?)?;
            let c = io::parse_cover(&io::read_file(cover.as_ref().expect("required"))?)?;
            return compare_one("input", &x, &c, f);
        }
        Command::DumpPages {
            complex,
            cover,
            field: p,
            dir,
        } => {
            let x = io::parse_complex(&io::read_file(&complex)?)?;
            let c = io::parse_cover(&io::read_file(&cover)?)?;
            let opts = Options {
                field: field(p)?,
                keep_pages: true,
                ..Default::default()
            };
            write_dumps(&dir, &compute(&x, &c, &opts)?.dumps)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

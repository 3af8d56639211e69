use clap::{Parser, Subcommand};
use std::path::PathBuf;
use symtensor::algebra::{dense, AlgebraElement, DEFAULT_CAP};
use symtensor::blockdiag::{dense_oracle_table, BlockDiagonalizer};
use symtensor::combinatorics::profile_count;
use symtensor::error::Result;
use symtensor::io as sio;
use symtensor::linalg;
use symtensor::terwilliger::BinaryBlockDiag;

#[derive(Parser)]
#[command(
    name = "symtensor",
    version,
    about = "Exact block diagonalization of symmetric tensor power algebras"
)]
struct Cli {
    /// Directory for cached tables (falls back to SYMTENSOR_CACHE_DIR).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Numeric tolerance for floating-point verification checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Worker thread count (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Computes block diagonalizations.
    Blockdiag {
        #[command(subcommand)]
        which: BlockdiagCmd,
    },
    /// Hamming-scheme closed forms.
    Terwilliger {
        #[command(subcommand)]
        which: TerwilligerCmd,
    },
    /// Tabulates the binary block coefficients.
    Beta {
        #[arg(long)]
        n: u32,
        /// Use the alternative summation formula.
        #[arg(long)]
        schrijver: bool,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recomputes the tables by brute force on words and diffs them.
    Verify {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: u32,
        /// Maximum dense dimension p^n the oracle may allocate.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Exports a reduced semidefinite program.
    Export {
        #[command(subcommand)]
        which: ExportCmd,
    },
}

#[derive(Subcommand)]
enum BlockdiagCmd {
    /// Full symmetric tensor power of the p x p matrix algebra.
    Full {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: u32,
        /// Dump numeric orthonormalized images instead of exact tables.
        #[arg(long)]
        orthonormal: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symmetric tensor power of a base algebra loaded from JSON.
    General {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TerwilligerCmd {
    /// Binary closed form: one entry per (i, j, t) and block k.
    Binary {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nonbinary transported coefficients over the quadratic extension.
    Nonbinary {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExportCmd {
    /// SDPA sparse format (.dat-s).
    Sdpa {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => sio::write_atomic(path, bytes),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let cache_dir = cli.cache.clone().or_else(sio::cache_dir_from_env);
    match &cli.command {
        Command::Blockdiag { which } => match which {
            BlockdiagCmd::Full { p, n, orthonormal, out } => {
                let bd = sio::diagonalizer_cached(*n, *p, cache_dir.as_deref())?;
                let v = sio::dump_full_tables(&bd, *orthonormal);
                emit(out, &sio::to_pretty_bytes(&v)?)?;
                Ok(0)
            }
            BlockdiagCmd::General { base, n, out } => {
                let base = sio::load_base_algebra(base)?;
                let report = base.validate();
                if !report.is_valid() {
                    return Err(symtensor::Error::InvalidBase(report.to_string()));
                }
                let v = sio::dump_general_transport(&base, *n)?;
                emit(out, &sio::to_pretty_bytes(&v)?)?;
                Ok(0)
            }
        },
        Command::Terwilliger { which } => match which {
            TerwilligerCmd::Binary { n, out } => {
                let v = sio::dump_binary_blockdiag(&BinaryBlockDiag::new(*n));
                emit(out, &sio::to_pretty_bytes(&v)?)?;
                Ok(0)
            }
            TerwilligerCmd::Nonbinary { q, n, out } => {
                let v = sio::dump_nonbinary(*q, *n)?;
                emit(out, &sio::to_pretty_bytes(&v)?)?;
                Ok(0)
            }
        },
        Command::Beta { n, schrijver, csv, out } => {
            let bytes = if *csv {
                sio::beta_csv(*n, *schrijver)?.into_bytes()
            } else {
                sio::to_pretty_bytes(&sio::dump_beta_json(*n, *schrijver)?)?
            };
            emit(out, &bytes)?;
            Ok(0)
        }
        Command::Verify { p, n, cap } => verify(*p, *n, cap.unwrap_or(DEFAULT_CAP), cli.tol, cache_dir.as_deref()),
        Command::Export { which } => match which {
            ExportCmd::Sdpa { program, out } => {
                let (program, base) = sio::load_sdp_program(program)?;
                let mut buf = Vec::new();
                symtensor::sdpa::export_sdpa(&program, base.as_ref(), &mut buf)?;
                sio::write_atomic(out, &buf)?;
                Ok(0)
            }
        },
    }
}

/// Recomputes every table by brute force on words, checks the dimension
/// identity, exact and numeric multiplicativity, and coordinate-map
/// injectivity; prints a diff line per mismatch and exits nonzero on any.
fn verify(p: usize, n: u32, cap: usize, tol: f64, cache_dir: Option<&std::path::Path>) -> Result<i32> {
    dense::check_cap(n, p, cap)?;
    let bd = sio::diagonalizer_cached(n, p, cache_dir)?;
    let mut failures: Vec<String> = Vec::new();

    if bd.dimension_identity_holds() {
        println!("dimension identity: ok ({} profiles)", profile_count(n, p));
    } else {
        failures.push(format!(
            "dimension identity: block sizes {:?} do not square-sum to {}",
            bd.block_sizes(),
            profile_count(n, p)
        ));
    }

    for table in bd.tables() {
        let oracle = dense_oracle_table(table.lambda(), n, p, cap)?;
        let mut mismatches = 0usize;
        let profiles: std::collections::BTreeSet<_> = table
            .entries()
            .map(|(d, _)| d.clone())
            .chain(oracle.entries().map(|(d, _)| d.clone()))
            .collect();
        for d in profiles {
            let got = table.entry_or_zero(&d);
            let want = oracle.entry_or_zero(&d);
            if got != want {
                for r in 0..got.nrows() {
                    for c in 0..got.ncols() {
                        if got.get(r, c) != want.get(r, c) {
                            failures.push(format!(
                                "table {} profile {d} entry ({r},{c}): pipeline {} oracle {}",
                                table.lambda(),
                                got.get(r, c),
                                want.get(r, c)
                            ));
                            mismatches += 1;
                        }
                    }
                }
            }
        }
        if mismatches == 0 {
            println!(
                "table {} ({} basis vectors): matches the word-level recomputation",
                table.lambda(),
                table.dimension()
            );
        }
    }

    let mut elems: Vec<AlgebraElement> = vec![AlgebraElement::identity(n, p)];
    for i in 0..p {
        for j in 0..p {
            if i != j {
                elems.push(AlgebraElement::elementary(i, j, n, p)?);
            }
        }
    }
    let mut exact_ok = true;
    let mut numeric_ok = true;
    let mut max_err = 0.0f64;
    for a in &elems {
        for b in &elems {
            let ab = a.multiply(b);
            let lhs = bd.apply_exact(&ab);
            let ga = bd.apply_exact(a);
            let gb = bd.apply_exact(b);
            for (idx, gram) in bd.grams().iter().enumerate() {
                let ginv = gram.inverse()?;
                let rhs = ga[idx].matmul(&ginv).matmul(&gb[idx]);
                if lhs[idx] != rhs {
                    exact_ok = false;
                    failures.push(format!(
                        "exact product rule fails on block {} for a pair of elementary moves",
                        bd.lambdas()[idx]
                    ));
                }
            }
            let nab = bd.apply_orthonormal(&ab);
            let na = bd.apply_orthonormal(a);
            let nb = bd.apply_orthonormal(b);
            for idx in 0..nab.len() {
                let err = linalg::max_abs(&(&nab[idx] - &na[idx] * &nb[idx]));
                max_err = max_err.max(err);
                if err > tol {
                    numeric_ok = false;
                    failures.push(format!(
                        "numeric product rule off by {err:.3e} on block {}",
                        bd.lambdas()[idx]
                    ));
                }
            }
        }
    }
    if exact_ok {
        println!("exact product rule: ok on {} element pairs", elems.len() * elems.len());
    }
    if numeric_ok {
        println!("numeric product rule: ok (max deviation {max_err:.3e}, tolerance {tol:.1e})");
    }

    match full_rank_certificate(&bd) {
        Ok(true) => println!("coordinate map: full rank certified modulo a 61-bit prime"),
        Ok(false) => failures.push("coordinate map is rank deficient".into()),
        Err(e) => println!("coordinate map rank check skipped: {e}"),
    }

    if failures.is_empty() {
        println!("verify p={p} n={n}: all checks passed");
        Ok(0)
    } else {
        println!("verify p={p} n={n}: {} mismatches", failures.len());
        for f in &failures {
            println!("  {f}");
        }
        Ok(1)
    }
}

/// Stacks all table columns into one matrix over the profile basis and
/// certifies full column rank by a modular rank computation.
fn full_rank_certificate(bd: &BlockDiagonalizer) -> Result<bool> {
    use symtensor::combinatorics::enum_profiles;
    let profiles = enum_profiles(bd.n(), bd.p());
    let index: std::collections::BTreeMap<_, _> = profiles
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, d)| (d, i))
        .collect();
    let cols: usize = bd.tables().iter().map(|t| t.dimension() * t.dimension()).sum();
    let mut m = symtensor::linalg::Mat::zeros(profiles.len(), cols);
    let mut col = 0usize;
    for table in bd.tables() {
        let dim = table.dimension();
        for r in 0..dim {
            for c in 0..dim {
                for (d, mat) in table.entries() {
                    let v = mat.get(r, c);
                    if !v.is_zero() {
                        m.set(index[d], col, v.clone());
                    }
                }
                col += 1;
            }
        }
    }
    Ok(m.rank_mod_m61()? == cols.min(profiles.len()))
}

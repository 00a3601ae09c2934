use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use tutte_theta::codes::{replicate4, weight_enumerator_enum, weight_enumerator_greene, BinaryCode};
use tutte_theta::f2::F2Matrix;
use tutte_theta::graphs::{GraphFile, Multigraph};
use tutte_theta::lattices::{theta_direct, theta_from_code};
use tutte_theta::matroids::{tutte, tutte_deletion_contraction, tutte_subset_expansion, Matroid};
use tutte_theta::pipeline::{bpr_family, persist_pairs, run_pipeline, search_tequivalent, SearchOptions};
use tutte_theta::poly::{Poly, Vars};
use tutte_theta::primes::{admissible_matrix, paper_weight_matrix, PrimeOracle, WeightMatrix, DEFAULT_PRIME_CAP};
use tutte_theta::statepoly::{
    reconstruct_pseudo, reconstruct_symbolic, state_vars, z_state_symbolic, z_state_weighted, PseudoStatePoly,
    SymbolicStatePoly,
};
use tutte_theta::{Error, Result};

#[derive(Parser)]
#[command(name = "tutte-theta", version, about = "Graph state polynomials, Tutte polynomials, codes and theta series")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the result here instead of stdout. For `search`, the directory
    /// that receives one graph file per pair member.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixKind {
    Paper,
    Admissible,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TutteAlgorithm {
    Auto,
    Subsets,
    DeletionContraction,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WenumAlgorithm {
    Enumerate,
    Greene,
}

#[derive(Subcommand)]
enum Command {
    /// n-state polynomial of a graph (Negami form unless --symbolic).
    Nstate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        /// Print the polynomial in the variables x_ij.
        #[arg(long)]
        symbolic: bool,
    },
    /// Prime-weighted n-state polynomial of a graph.
    Pseudo {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = MatrixKind::Paper)]
        matrix: MatrixKind,
        /// State count (default: 3m for admissible matrices).
        #[arg(long)]
        n: Option<usize>,
        /// Edge budget for an admissible matrix (default: the graph's edge count).
        #[arg(long)]
        m: Option<u64>,
        /// Largest prime index the sieve may be asked for.
        #[arg(long, default_value_t = DEFAULT_PRIME_CAP)]
        prime_cap: u64,
        /// Also write the weight matrix as JSON.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
    },
    /// Rebuild a graph from a polynomial written by `pseudo` or `nstate --symbolic`.
    Reconstruct {
        /// Polynomial JSON.
        #[arg(long)]
        poly: PathBuf,
        /// Weight matrix JSON (pseudo polynomials).
        #[arg(long, required_unless_present = "symbolic_n")]
        matrix_file: Option<PathBuf>,
        /// State count of a symbolic polynomial.
        #[arg(long = "symbolic-n")]
        symbolic_n: Option<usize>,
    },
    /// Tutte polynomial of a graph or of a binary matrix.
    Tutte {
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        graph: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TutteAlgorithm::Auto)]
        algorithm: TutteAlgorithm,
    },
    /// Weight enumerator of a code, or of the incidence code of a graph.
    Wenum {
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        graph: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = WenumAlgorithm::Enumerate)]
        algorithm: WenumAlgorithm,
    },
    /// Generator matrix of the 4-fold replicated code.
    Replicate4 {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Theta series of the Construction A lattice of a code.
    Theta {
        #[arg(long)]
        matrix: PathBuf,
        /// Precision in quarter units of the exponent.
        #[arg(long, default_value_t = 40)]
        prec: usize,
        /// Enumerate lattice vectors instead of using the weight enumerator.
        #[arg(long)]
        direct: bool,
    },
    /// Tutte, code and theta comparison of two graphs.
    Pipeline {
        #[arg(long)]
        g1: PathBuf,
        #[arg(long)]
        g2: PathBuf,
        /// Subdivisions per marked edge; builds the (m, n) family from the inputs.
        #[arg(long, requires = "n")]
        m: Option<usize>,
        /// Length of the joined path.
        #[arg(long, requires = "m")]
        n: Option<usize>,
        #[arg(long, default_value_t = 40)]
        prec: usize,
    },
    /// Exhaustive search for non-isomorphic graphs with equal Tutte polynomials.
    Search {
        #[arg(long)]
        max_v: usize,
        #[arg(long)]
        max_e: usize,
        /// Allow parallel edges.
        #[arg(long)]
        multigraphs: bool,
        #[arg(long)]
        two_connected: bool,
    },
    /// Prime lookups and weight matrices.
    Primes {
        /// Print the k-th prime.
        #[arg(long)]
        nth: Option<u64>,
        /// Print the weight matrix on this many states.
        #[arg(long)]
        table: Option<usize>,
        #[arg(long, value_enum, default_value_t = MatrixKind::Paper)]
        matrix: MatrixKind,
        /// Edge budget for an admissible table.
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = DEFAULT_PRIME_CAP)]
        prime_cap: u64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<GraphFile> {
    GraphFile::parse(&read(path)?).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn read_code(path: &Path) -> Result<BinaryCode> {
    let m = F2Matrix::parse(&read(path)?).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    Ok(BinaryCode::from_matrix(&m))
}

fn read_matroid(graph: Option<&Path>, matrix: Option<&Path>) -> Result<Matroid> {
    match (graph, matrix) {
        (Some(g), _) => Ok(Matroid::graphic(read_graph(g)?.graph)),
        (None, Some(m)) => Ok(Matroid::vector_f2(
            F2Matrix::parse(&read(m)?).map_err(|e| Error::Invalid(format!("{}: {e}", m.display())))?,
        )),
        (None, None) => Err(Error::Invalid("give --graph or --matrix".into())),
    }
}

fn poly_out(p: &Poly, format: Format) -> String {
    match format {
        Format::Text => format!("{p}\n"),
        Format::Json => format!("{}\n", p.to_json()),
    }
}

fn graph_out(g: &Multigraph, format: Format) -> String {
    match format {
        Format::Text => g.to_file_string(),
        Format::Json => {
            let v = serde_json::json!({ "vertices": g.n_vertices(), "edges": g.edges() });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    }
}

fn weight_matrix(kind: MatrixKind, n: Option<usize>, m: Option<u64>, prime_cap: u64, edges: usize) -> Result<WeightMatrix> {
    match kind {
        MatrixKind::Paper => {
            let n = n.ok_or_else(|| Error::Invalid("--n is required with --matrix paper".into()))?;
            paper_weight_matrix(n, &PrimeOracle::default().with_cap(prime_cap))
        }
        MatrixKind::Admissible => {
            let m = m.unwrap_or(edges as u64);
            let n = n.unwrap_or(3 * m.max(1) as usize);
            Ok(admissible_matrix(m, n)?.0)
        }
    }
}

/// Runs the command. Takes `out` when the command consumes it itself.
fn run(cli: Cli, out: &mut Option<PathBuf>) -> Result<String> {
    let format = cli.format;
    Ok(match cli.command {
        Command::Nstate { graph, n, symbolic } => {
            let g = read_graph(&graph)?.graph;
            let z = z_state_symbolic(&g, n)?;
            if symbolic {
                poly_out(z.poly(), format)
            } else {
                poly_out(&z.negami(), format)
            }
        }
        Command::Pseudo {
            graph,
            matrix,
            n,
            m,
            prime_cap,
            matrix_out,
        } => {
            let g = read_graph(&graph)?.graph;
            let w = weight_matrix(matrix, n, m, prime_cap, g.n_edges())?;
            if let Some(path) = matrix_out {
                fs::write(path, w.to_json() + "\n")?;
            }
            poly_out(z_state_weighted(&g, &w)?.poly(), format)
        }
        Command::Reconstruct {
            poly,
            matrix_file,
            symbolic_n,
        } => {
            let text = read(&poly)?;
            let g = match (symbolic_n, matrix_file) {
                (Some(n), _) => {
                    let p = Poly::from_json(&text, state_vars(n))?;
                    reconstruct_symbolic(&SymbolicStatePoly::new(n, p)?)?
                }
                (None, Some(wf)) => {
                    let w = WeightMatrix::from_json(&read(&wf)?)?;
                    let p = Poly::from_json(&text, Vars::univariate())?;
                    reconstruct_pseudo(&PseudoStatePoly::new(w.clone(), p)?, &w)?
                }
                (None, None) => return Err(Error::Invalid("give --matrix-file or --symbolic-n".into())),
            };
            graph_out(&g, format)
        }
        Command::Tutte { graph, matrix, algorithm } => {
            let m = read_matroid(graph.as_deref(), matrix.as_deref())?;
            let t = match algorithm {
                TutteAlgorithm::Auto => tutte(&m),
                TutteAlgorithm::Subsets => tutte_subset_expansion(&m)?,
                TutteAlgorithm::DeletionContraction => tutte_deletion_contraction(&m),
            };
            poly_out(&t, format)
        }
        Command::Wenum { graph, matrix, algorithm } => {
            let m = match (graph, matrix) {
                (Some(g), _) => Matroid::incidence(&read_graph(&g)?.graph),
                (None, Some(f)) => read_matroid(None, Some(&f))?,
                (None, None) => return Err(Error::Invalid("give --graph or --matrix".into())),
            };
            let w = match algorithm {
                WenumAlgorithm::Enumerate => weight_enumerator_enum(&BinaryCode::from_matroid(&m)?)?,
                WenumAlgorithm::Greene => weight_enumerator_greene(&m)?,
            };
            poly_out(&w, format)
        }
        Command::Replicate4 { matrix } => {
            let c = replicate4(&read_code(&matrix)?);
            let gm = c.generator_matrix();
            match format {
                Format::Text => gm.to_file_string(),
                Format::Json => {
                    let rows: Vec<String> = gm.rows().iter().map(|r| r.to_string()).collect();
                    let v = serde_json::json!({ "length": c.length(), "rows": rows });
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
                }
            }
        }
        Command::Theta { matrix, prec, direct } => {
            let c = read_code(&matrix)?;
            let s = if direct {
                theta_direct(&c, prec)?
            } else {
                theta_from_code(&c, prec)?
            };
            match format {
                Format::Text => format!("{s}\n"),
                Format::Json => format!("{}\n", s.to_json()),
            }
        }
        Command::Pipeline { g1, g2, m, n, prec } => {
            let f1 = read_graph(&g1)?;
            let f2 = read_graph(&g2)?;
            let (a, b) = match (m, n) {
                (Some(m), Some(n)) => bpr_family(&f1, &f2, m, n)?,
                _ => (f1.graph, f2.graph),
            };
            let report = run_pipeline(&a, &b, prec);
            match format {
                Format::Json => format!("{}\n", report.to_json()),
                Format::Text => {
                    let show = |o: Option<bool>| o.map_or("skipped".to_string(), |b| b.to_string());
                    let mut s = String::new();
                    s += &format!("edge_count: {}\n", report.edge_count);
                    s += &format!("tutte_equal: {}\n", show(report.tutte_equal));
                    s += &format!("tutte_algorithms_agree: {}\n", show(report.tutte_algorithms_agree));
                    s += &format!("graphs_nonisomorphic: {}\n", show(report.graphs_nonisomorphic));
                    s += &format!("wenum_equal: {}\n", show(report.wenum_equal));
                    s += &format!("wenum_algorithms_agree: {}\n", show(report.wenum_algorithms_agree));
                    s += &format!(
                        "replicated_doubly_even: {}\n",
                        report
                            .replicated_doubly_even
                            .map_or("skipped".into(), |(x, y)| format!("{x}, {y}"))
                    );
                    s += &format!(
                        "theta_equal_to_precision: {} (N = {})\n",
                        show(report.theta_equal_to_precision.0),
                        report.theta_equal_to_precision.1
                    );
                    s += &format!("lattice_rank: {}\n", report.lattice_rank);
                    s += &format!("lattice_isomorphism: {}\n", report.lattice_isomorphism);
                    for k in &report.skipped {
                        s += &format!("skipped: {k}\n");
                    }
                    s
                }
            }
        }
        Command::Search {
            max_v,
            max_e,
            multigraphs,
            two_connected,
        } => {
            let opts = SearchOptions {
                max_vertices: max_v,
                max_edges: max_e,
                multigraphs,
                two_connected,
            };
            let pairs = search_tequivalent(&opts);
            if let Some(dir) = out.take() {
                persist_pairs(&dir, &pairs)?;
            }
            match format {
                Format::Text => {
                    let mut s = format!("{} pairs\n", pairs.len());
                    for (k, (a, b)) in pairs.iter().enumerate() {
                        s += &format!("pair {k}: {:?} | {:?}\n", a.sorted_edges(), b.sorted_edges());
                    }
                    s
                }
                Format::Json => {
                    let v: Vec<_> = pairs
                        .iter()
                        .map(|(a, b)| {
                            serde_json::json!([
                                { "vertices": a.n_vertices(), "edges": a.edges() },
                                { "vertices": b.n_vertices(), "edges": b.edges() },
                            ])
                        })
                        .collect();
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
                }
            }
        }
        Command::Primes {
            nth,
            table,
            matrix,
            m,
            prime_cap,
        } => {
            let oracle = PrimeOracle::default().with_cap(prime_cap);
            match (nth, table) {
                (Some(k), _) => {
                    let p = oracle.nth_prime(&BigUint::from(k))?;
                    match format {
                        Format::Text => format!("{p}\n"),
                        Format::Json => format!("{}\n", serde_json::json!({ "index": k, "prime": p.to_string() })),
                    }
                }
                (None, Some(n)) => {
                    let w = match matrix {
                        MatrixKind::Paper => paper_weight_matrix(n, &oracle)?,
                        MatrixKind::Admissible => admissible_matrix(m, n)?.0,
                    };
                    match format {
                        Format::Text => w.to_string(),
                        Format::Json => w.to_json() + "\n",
                    }
                }
                (None, None) => return Err(Error::Invalid("give --nth or --table".into())),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => e.exit(),
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .expect("thread pool configured once");
    }
    let mut out = cli.out.clone();
    match run(cli, &mut out) {
        Ok(text) => {
            let written = match out {
                Some(path) => fs::write(&path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_cap_exceeded() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

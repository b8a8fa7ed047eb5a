//! Command-line front door for the library: surface-syntax round trips,
//! proof checking, boolean-valued evaluation, regular-open algebras, finite
//! forcing demos, sunflower extraction and the seeded soundness fuzzer.
//!
//! Output is line-oriented `key=value` pairs (pass `--human` for prose).
//! Exit codes: 0 success, 1 check/verification failure, 2 usage or input
//! error, 3 size guard.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bvlogic::boolalg::{AlgebraError, FinCBA, FinTopSpace};
use bvlogic::combinatorics::{self, CohenGround, CombinatoricsError, SetFamily};
use bvlogic::corpus::{self, CorpusError};
use bvlogic::harness;
use bvlogic::proof;
use bvlogic::semantics::{self, SemanticsError};
use bvlogic::syntax::{formula_from_str, formula_to_string, SyntaxError};

#[derive(Parser)]
#[command(
    name = "bvlogic",
    version,
    about = "First-order proofs, boolean-valued models and finite forcing demos"
)]
struct Cli {
    /// Emit prose instead of machine-readable key=value lines.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Elaborate a surface-syntax formula file into its de Bruijn form.
    Parse { file: PathBuf },
    /// Render a de Bruijn formula (s-expression file) as surface syntax.
    Print { file: PathBuf },
    /// Check a derivation (s-expression) against a context and a goal
    /// (surface syntax, one context formula per line).
    CheckProof {
        proof: PathBuf,
        context: PathBuf,
        goal: PathBuf,
    },
    /// Realize a sentence (s-expression over the structure's language) in a
    /// boolean-valued structure; with --gamma, test the forcing inequality.
    Eval {
        structure: PathBuf,
        sentence: PathBuf,
        /// Truth-value index that should force the sentence.
        #[arg(long)]
        gamma: Option<usize>,
    },
    /// Build the regular-open algebra of a finite topology and dump it.
    Ro { topology: PathBuf },
    /// Finite forcing-poset demos over a ground line of N cells.
    Cohen {
        /// Number of ground cells (0, 0) … (0, N-1).
        #[arg(long)]
        ground: usize,
        /// Check that the embedded image of all conditions is dense.
        #[arg(long)]
        density: bool,
        /// Check that the conditions in FILE are pairwise incompatible.
        #[arg(long, conflicts_with = "density")]
        antichain: Option<PathBuf>,
    },
    /// Extract a delta system (sunflower) from a family of finite sets.
    Delta {
        family: PathBuf,
        /// Required number of sets in the extracted system.
        #[arg(long)]
        target: usize,
    },
    /// Fuzz the soundness property over seeded random structures.
    FuzzSoundness {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: usize,
    },
    /// Emit the set-theory axiom corpus and the continuum hypothesis.
    Corpus {
        /// Emit a single named axiom.
        #[arg(long)]
        axiom: Option<String>,
        /// Emit the continuum-hypothesis sentence.
        #[arg(long, conflicts_with = "axiom")]
        ch: bool,
    },
}

struct Failure {
    code: &'static str,
    exit: u8,
    message: String,
}

impl Failure {
    fn new(code: &'static str, exit: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            exit,
            message: message.into(),
        }
    }
}

type Run = Result<(), Failure>;

fn main() -> ExitCode {
    // Die quietly when the consumer closes the pipe (e.g. `bvlogic ro t | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {} {}", failure.code, failure.message);
            ExitCode::from(failure.exit)
        }
    }
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Parse { file } => run_parse(file, cli.human),
        Command::Print { file } => run_print(file, cli.human),
        Command::CheckProof {
            proof,
            context,
            goal,
        } => run_check_proof(proof, context, goal, cli.human),
        Command::Eval {
            structure,
            sentence,
            gamma,
        } => run_eval(structure, sentence, *gamma, cli.human),
        Command::Ro { topology } => run_ro(topology),
        Command::Cohen {
            ground,
            density,
            antichain,
        } => run_cohen(*ground, *density, antichain.as_deref(), cli.human),
        Command::Delta { family, target } => run_delta(family, *target, cli.human),
        Command::FuzzSoundness { seed, trials } => run_fuzz(*seed, *trials, cli.human),
        Command::Corpus { axiom, ch } => run_corpus(axiom.as_deref(), *ch, cli.human),
    }
}

// ---------------------------------------------------------------------------
// Error mapping
// ---------------------------------------------------------------------------

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new("io", 2, format!("{}: {e}", path.display())))
}

fn from_corpus(e: CorpusError) -> Failure {
    Failure::new("parse", 2, e.to_string())
}

fn from_syntax(e: SyntaxError) -> Failure {
    Failure::new("parse", 2, e.to_string())
}

fn from_algebra(e: AlgebraError) -> Failure {
    match e {
        AlgebraError::Guard { .. } => Failure::new("guard", 3, e.to_string()),
        AlgebraError::AxiomViolation { .. } => Failure::new("invalid", 1, e.to_string()),
        _ => Failure::new("parse", 2, e.to_string()),
    }
}

fn from_semantics(e: SemanticsError) -> Failure {
    match e {
        SemanticsError::Guard { .. } => Failure::new("guard", 3, e.to_string()),
        SemanticsError::Congruence { .. } => Failure::new("invalid", 1, e.to_string()),
        SemanticsError::ProofRejected(_) => Failure::new("rejected", 1, e.to_string()),
        SemanticsError::Algebra(inner) => from_algebra(inner),
        _ => Failure::new("parse", 2, e.to_string()),
    }
}

fn from_combinatorics(e: CombinatoricsError) -> Failure {
    match e {
        CombinatoricsError::Guard { .. } => Failure::new("guard", 3, e.to_string()),
        CombinatoricsError::Algebra(inner) => from_algebra(inner),
        _ => Failure::new("parse", 2, e.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn run_parse(file: &Path, human: bool) -> Run {
    let text = read(file)?;
    let formula = corpus::read_formula(&text).map_err(from_corpus)?;
    let sexp = formula_to_string(&formula, corpus::set_language());
    if human {
        println!("de Bruijn form: {sexp}");
        println!(
            "size {} with {} free variable(s)",
            formula.size(),
            formula.free_bound()
        );
    } else {
        println!("formula={sexp}");
        println!("closed={}", formula.is_closed());
        println!("size={}", formula.size());
    }
    Ok(())
}

fn run_print(file: &Path, human: bool) -> Run {
    let text = read(file)?;
    let formula = formula_from_str(&text, corpus::set_language()).map_err(from_syntax)?;
    let surface = corpus::print_formula(&formula);
    if human {
        println!("{surface}");
    } else {
        println!("text={surface}");
    }
    Ok(())
}

fn run_check_proof(proof_path: &Path, context_path: &Path, goal_path: &Path, human: bool) -> Run {
    let lang = corpus::set_language();
    let tree = proof::proof_from_str(&read(proof_path)?, lang).map_err(from_syntax)?;
    let mut context = proof::Context::new();
    for line in read(context_path)?.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("--") {
            continue;
        }
        context.insert(corpus::read_formula(line).map_err(from_corpus)?);
    }
    let goal = corpus::read_formula(&read(goal_path)?).map_err(from_corpus)?;
    match proof::diagnose(&tree, &context, &goal) {
        Ok(()) => {
            if human {
                println!(
                    "the derivation proves {} from {} hypothese(s)",
                    corpus::print_formula(&goal),
                    context.len()
                );
            } else {
                println!("checked=true");
                println!("hypotheses={}", context.len());
                println!("goal={}", corpus::print_formula(&goal));
            }
            Ok(())
        }
        Err(failure) => Err(Failure::new("rejected", 1, failure.to_string())),
    }
}

fn run_eval(structure_path: &Path, sentence_path: &Path, gamma: Option<usize>, human: bool) -> Run {
    let base = structure_path.parent().map(Path::to_path_buf);
    let resolve = |path: &str| -> std::io::Result<String> {
        let mut full = PathBuf::from(path);
        if full.is_relative() {
            if let Some(dir) = &base {
                full = dir.join(full);
            }
        }
        fs::read_to_string(full)
    };
    let structure =
        semantics::structure_from_text(&read(structure_path)?, resolve).map_err(from_semantics)?;
    let sentence =
        formula_from_str(&read(sentence_path)?, structure.language()).map_err(from_syntax)?;
    let value = structure
        .realize_sentence(&sentence)
        .map_err(from_semantics)?;
    let label = structure.algebra().element_label(value);
    if human {
        println!(
            "the sentence realizes to element {} ({label})",
            value.index()
        );
    } else {
        println!("value={}", value.index());
        println!("label={label}");
    }
    if let Some(index) = gamma {
        let gamma = structure
            .algebra()
            .element(index)
            .ok_or_else(|| Failure::new("parse", 2, format!("no algebra element {index}")))?;
        let forced = structure.forces(gamma, &sentence).map_err(from_semantics)?;
        if human {
            println!(
                "gamma {} {} the sentence",
                index,
                if forced { "forces" } else { "does not force" }
            );
        } else {
            println!("forces={forced}");
        }
        if !forced {
            return Err(Failure::new(
                "unforced",
                1,
                format!("element {index} does not force the sentence"),
            ));
        }
    }
    Ok(())
}

fn run_ro(topology_path: &Path) -> Run {
    let space = FinTopSpace::from_text(&read(topology_path)?).map_err(from_algebra)?;
    let algebra = FinCBA::regular_open(space).map_err(from_algebra)?;
    let dump = algebra.dump().map_err(from_algebra)?;
    print!("{dump}");
    Ok(())
}

fn run_cohen(ground_cells: usize, density: bool, antichain: Option<&Path>, human: bool) -> Run {
    let ground = CohenGround::line(ground_cells).map_err(from_combinatorics)?;
    if let Some(path) = antichain {
        let conditions =
            combinatorics::conditions_from_text(&read(path)?).map_err(from_combinatorics)?;
        let mut images = Vec::with_capacity(conditions.len());
        for condition in &conditions {
            images.push(combinatorics::iota(&ground, condition).map_err(from_combinatorics)?);
        }
        let mut all_incompatible = true;
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                let incompatible = images[i].is_disjoint(&images[j]);
                all_incompatible &= incompatible;
                if human {
                    println!(
                        "conditions {i} and {j} are {}",
                        if incompatible {
                            "incompatible"
                        } else {
                            "compatible"
                        }
                    );
                } else {
                    println!("pair={i},{j} incompatible={incompatible}");
                }
            }
        }
        if human {
            println!(
                "{} condition(s): {}an antichain",
                conditions.len(),
                if all_incompatible { "" } else { "not " }
            );
        } else {
            println!("size={}", conditions.len());
            println!("antichain={all_incompatible}");
        }
        if !all_incompatible {
            return Err(Failure::new(
                "not-antichain",
                1,
                "some pair of conditions is compatible",
            ));
        }
        return Ok(());
    }
    if density {
        let report = combinatorics::density_check(&ground).map_err(from_combinatorics)?;
        let cross = match report.algebra_cross_check {
            Some(agreed) => agreed.to_string(),
            None => "skipped".to_string(),
        };
        if human {
            println!(
                "{} conditions over {} cells: image {} dense (cross-check {cross})",
                report.conditions,
                report.ground,
                if report.dense { "is" } else { "is not" }
            );
        } else {
            println!("conditions={}", report.conditions);
            println!("all_nonzero={}", report.all_nonzero);
            println!("atoms_covered={}", report.atoms_covered);
            println!("dense={}", report.dense);
            println!("cross_check={cross}");
        }
        if !report.dense {
            return Err(Failure::new("not-dense", 1, "the image is not dense"));
        }
        return Ok(());
    }
    let conditions = 3usize.pow(ground.len() as u32);
    if human {
        println!(
            "ground of {} cell(s): {} assignments, {} conditions",
            ground.len(),
            ground.assignments(),
            conditions
        );
    } else {
        println!("cells={}", ground.len());
        println!("assignments={}", ground.assignments());
        println!("conditions={conditions}");
    }
    Ok(())
}

fn run_delta(family_path: &Path, target: usize, human: bool) -> Run {
    let family = SetFamily::from_text(&read(family_path)?).map_err(from_combinatorics)?;
    let outcome = combinatorics::delta_extract(&family, target).map_err(from_combinatorics)?;
    match outcome {
        Some(system) => {
            let indices: Vec<String> = system.indices.iter().map(|i| i.to_string()).collect();
            let root: Vec<String> = system.root.iter().map(|x| x.to_string()).collect();
            if human {
                println!(
                    "found {} sets (indices {}) sharing root {{{}}}",
                    system.indices.len(),
                    indices.join(" "),
                    root.join(" ")
                );
            } else {
                println!("family={}", family.len());
                println!("target={target}");
                println!("found=true");
                println!("indices={}", indices.join(" "));
                println!("root={}", root.join(" "));
            }
            Ok(())
        }
        None => {
            if human {
                println!("no delta system of {target} sets found");
            } else {
                println!("family={}", family.len());
                println!("target={target}");
                println!("found=false");
            }
            Err(Failure::new(
                "not-found",
                1,
                format!("no delta system of {target} sets located"),
            ))
        }
    }
}

fn run_fuzz(seed: u64, trials: usize, human: bool) -> Run {
    let report = harness::fuzz_soundness(seed, trials);
    if human {
        println!(
            "{} soundness checks over {} trials (seed {}): {} violation(s)",
            report.checked, report.trials, report.seed, report.violations
        );
    } else {
        println!("{report}");
    }
    if report.violations > 0 {
        for failure in &report.failures {
            eprintln!("error: violation {failure}");
        }
        return Err(Failure::new(
            "violations",
            1,
            format!("{} soundness check(s) failed", report.violations),
        ));
    }
    Ok(())
}

fn emit_sentence(name: &str, formula: &bvlogic::syntax::Formula, human: bool) {
    let text = corpus::print_formula(formula);
    if human {
        println!("{name}: {text}");
    } else {
        println!("name={name}");
        println!("text={text}");
        println!(
            "formula={}",
            formula_to_string(formula, corpus::set_language())
        );
        println!("closed={}", formula.is_closed());
        println!("size={}", formula.size());
    }
}

fn run_corpus(axiom: Option<&str>, ch: bool, human: bool) -> Run {
    if ch {
        emit_sentence("ch", &corpus::ch_sentence(), human);
        return Ok(());
    }
    match axiom {
        Some(name) => match corpus::zfc_axiom(name) {
            Some(formula) => {
                emit_sentence(name, &formula, human);
                Ok(())
            }
            None => Err(Failure::new(
                "unknown-axiom",
                2,
                format!("no axiom named `{name}`"),
            )),
        },
        None => {
            for (name, _) in corpus::zfc_axioms() {
                if human {
                    println!("axiom {name}");
                } else {
                    println!("axiom={name}");
                }
            }
            Ok(())
        }
    }
}

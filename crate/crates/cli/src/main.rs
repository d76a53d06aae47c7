use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use langpoly::closures::{compile, declared_bound, Strategy};
use langpoly::langs::{all_strings, bits_to_string, LanguageSpec};
use langpoly::machines::{kpass_to_onepass, two_pass_mod6_machine, TWO_PASS_MOD6_SPACE};
use langpoly::polytope::DeclaredBound;
use langpoly::verify::{verify_against_points, verify_language_ef, VerificationReport, VerifyOptions};
use langpoly::zoo::{
    bipp_automaton, bipp_width, cut_vectors, cutsat_formula, cutsat_var, decode_bipp, ipp_points, off_diagonal,
    unsat_ef,
};
use langpoly::{Error, ExtendedFormulation, Rational};

#[derive(Parser)]
#[command(name = "langpoly", version, about = "Extended formulations for polytopes of binary languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Automaton,
    Closure,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Automaton => Strategy::Automaton,
            StrategyArg::Closure => Strategy::Closure,
        }
    }
}

#[derive(clap::Args)]
struct CheckArgs {
    /// Also certify equality with the exact hull of L(n).
    #[arg(long)]
    exact: bool,
    /// Random objectives in the support battery.
    #[arg(long, default_value_t = 200)]
    directions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest hull elimination size attempted with --exact.
    #[arg(long, default_value_t = 14)]
    threshold: usize,
}

impl CheckArgs {
    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            directions: self.directions,
            seed: self.seed,
            certify: self.exact,
            exact_threshold: self.threshold,
            ..VerifyOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the strings of length n, one per line.
    Enumerate {
        spec: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Compile a formulation and write it as HREP + PROJ text.
    Build {
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// Check a formulation against the language oracle.
    Verify {
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        /// Formulation file written by `build`; compiled in memory if absent.
        #[arg(long)]
        ef: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
        #[command(flatten)]
        check: CheckArgs,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Tabulate formulation sizes over a range of lengths.
    Size {
        spec: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        csv: bool,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// Run a bundled example.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Walk-polytope formulation of the parity language.
    Parity {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// CUTSAT clauses, satisfying assignments and their cut projections.
    Cutsat {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Compact formulation of the non-satisfying assignments of CUTSAT.
    Unsat {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Binary integer partitions read by a streaming automaton.
    Bipp {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Fixed-instance knapsack automaton.
    Knapsack {
        #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
        weights: Vec<u64>,
        #[arg(long, default_value_t = 10)]
        capacity: u64,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Kleene star of a finite language, e.g. --lang '{"11"}'.
    Star {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Two-pass machine (ones mod 2, then mod 3) against its one-pass simulation.
    Kpass {
        /// Largest input length swept.
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn load_spec(path: &Path) -> Result<LanguageSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    LanguageSpec::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn compiled(spec: &LanguageSpec, n: usize, strategy: StrategyArg) -> Result<(ExtendedFormulation, String), Failure> {
    let builder = compile::<Rational>(spec, strategy.into())?;
    Ok((builder.build(n)?, builder.name().to_string()))
}

fn report(r: &VerificationReport, json: bool) -> CmdResult {
    if json {
        println!("{}", r.to_json());
    } else {
        print!("{}", r.summary());
    }
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Enumerate { spec, n } => {
            for x in load_spec(&spec)?.enumerate(n)? {
                println!("{}", bits_to_string(&x));
            }
            Ok(())
        }
        Command::Build { spec, n, out, strategy } => {
            let l = load_spec(&spec)?;
            let (e, name) = compiled(&l, n, strategy)?;
            let mut comments = vec![
                format!("language: {}", l.kind()),
                format!("construction: {name}"),
                format!("n: {n}"),
                format!("inequalities: {}", e.size()),
            ];
            if let Some(b) = declared_bound::<Rational>(&l, n)? {
                comments.push(format!("bound: {} = {}", b.expression, b.value));
            }
            fs::write(&out, e.to_text(&comments)).map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
            println!("wrote {} ({} inequalities, {} equations, {} variables)", out.display(), e.size(), e.system().equation_count(), e.variables());
            Ok(())
        }
        Command::Verify { spec, n, ef, strategy, check, json } => {
            let l = load_spec(&spec)?;
            let e = match ef {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    let e = ExtendedFormulation::parse_text(&text)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    e
                }
                None => compiled(&l, n, strategy)?.0,
            };
            let bound = declared_bound::<Rational>(&l, n)?;
            let mut r = verify_language_ef(&e, &l, n, &check.options())?;
            if let Some(b) = &bound {
                r = r.with_size_check(&e, b);
            }
            report(&r, json)
        }
        Command::Size { spec, from, to, csv, strategy } => {
            let l = load_spec(&spec)?;
            let builder = compile::<Rational>(&l, strategy.into())?;
            if csv {
                println!("n,inequalities,equations,variables,bound");
            } else {
                println!("{:>4} {:>12} {:>10} {:>10} {:>10}", "n", "inequalities", "equations", "variables", "bound");
            }
            for n in from..=to {
                let e = builder.build(n)?;
                let r = e.size_report();
                let bound = declared_bound::<Rational>(&l, n)?.map_or(String::new(), |b| b.value.to_string());
                if csv {
                    println!("{n},{},{},{},{bound}", r.inequalities, r.equations, r.variables);
                } else {
                    println!("{n:>4} {:>12} {:>10} {:>10} {bound:>10}", r.inequalities, r.equations, r.variables);
                }
            }
            Ok(())
        }
        Command::Demo { demo } => run_demo(demo),
    }
}

fn verify_spec(l: &LanguageSpec, n: usize, check: &CheckArgs) -> CmdResult {
    let (e, name) = compiled(l, n, StrategyArg::Auto)?;
    println!("construction: {name}");
    let mut r = verify_language_ef(&e, l, n, &check.options())?;
    if let Some(b) = declared_bound::<Rational>(l, n)? {
        r = r.with_size_check(&e, &b);
    }
    report(&r, false)
}

/// Parses `{"11", "0"}` (quotes optional) into a finite language.
fn parse_set(text: &str) -> Result<LanguageSpec, Failure> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Failure::Usage(format!("`{text}` is not a set like {{\"11\",\"0\"}}")))?;
    let words: Vec<String> = inner
        .split(',')
        .map(|w| w.trim().trim_matches('"').to_string())
        .filter(|w| !w.is_empty())
        .collect();
    for w in &words {
        langpoly::langs::parse_bits(w)?;
    }
    Ok(LanguageSpec::explicit(words.iter().map(String::as_str)))
}

fn run_demo(demo: Demo) -> CmdResult {
    match demo {
        Demo::Parity { n, check } => verify_spec(&LanguageSpec::Parity, n, &check),
        Demo::Cutsat { n } => {
            let phi = cutsat_formula(n)?;
            println!("{} variables, {} clauses", phi.vars, phi.clauses.len());
            let name = |v: usize| format!("x{}{}", v / n + 1, v % n + 1);
            for c in &phi.clauses {
                let lits: Vec<String> =
                    c.iter().map(|l| format!("{}{}", if l.positive { "" } else { "!" }, name(l.var))).collect();
                println!("  ({})", lits.join(" | "));
            }
            if phi.vars > 16 {
                return Err(Failure::Usage(format!("truth-table sweep over {} variables is too large", phi.vars)));
            }
            let sat = phi.satisfying();
            println!("{} satisfying assignments (x11 x12 ... x{n}{n}):", sat.len());
            for x in &sat {
                println!("  {}", bits_to_string(x));
            }
            let cuts: BTreeSet<Vec<u8>> = sat.iter().map(|x| off_diagonal(n, x)).collect();
            println!("{} distinct off-diagonal projections:", cuts.len());
            for c in &cuts {
                println!("  {}", bits_to_string(c));
            }
            let ok = cuts == cut_vectors(n);
            println!("projections equal the cut vectors of K_{n}: {}", if ok { "yes" } else { "NO" });
            debug_assert_eq!(cutsat_var(n, 0, 0), 0);
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Demo::Unsat { n, check } => {
            let phi = cutsat_formula(n)?;
            if phi.vars > 16 {
                return Err(Failure::Usage(format!("truth-table sweep over {} variables is too large", phi.vars)));
            }
            let e: ExtendedFormulation = unsat_ef(&phi)?;
            let points: Vec<Vec<u8>> = all_strings(phi.vars).filter(|x| !phi.eval(x)).collect();
            let m = phi.clauses.len();
            let bound = DeclaredBound {
                expression: format!("2 * {} * {m} + 2 * ({m} - 1)", phi.vars),
                value: (2 * phi.vars * m + 2 * (m - 1)) as u128,
            };
            println!("{} non-satisfying assignments, formulation size {}", points.len(), e.size());
            let r = verify_against_points(&e, &points, phi.vars, &check.options())?.with_size_check(&e, &bound);
            report(&r, false)
        }
        Demo::Bipp { n, check } => {
            if n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let w = bipp_width(n);
            let len = n * w;
            let a = bipp_automaton(n);
            println!("n = {n}, {w} bits per part, input length {len}, {} automaton states", a.states());
            let l = LanguageSpec::Bipp;
            let accepted = l.enumerate(len)?;
            let mut decoded: Vec<Vec<u64>> = accepted.iter().map(|x| decode_bipp(n, x)).collect();
            decoded.sort();
            for (x, p) in accepted.iter().zip(accepted.iter().map(|x| decode_bipp(n, x))) {
                println!("  {} -> {p:?}", bits_to_string(x));
            }
            let ok = decoded == ipp_points(n);
            println!("decoded strings equal the {} partitions of {n}: {}", ipp_points(n).len(), if ok { "yes" } else { "NO" });
            let verified = verify_spec(&l, len, &check);
            if ok {
                verified
            } else {
                Err(Failure::Verification)
            }
        }
        Demo::Knapsack { weights, capacity, check } => {
            let n = weights.len();
            let l = LanguageSpec::Knapsack { weights, capacity };
            println!("{} feasible subsets", l.enumerate(n)?.len());
            verify_spec(&l, n, &check)
        }
        Demo::Star { lang, n, check } => {
            let base = if lang.trim_start().starts_with("{\"type\"") {
                LanguageSpec::from_json(&lang)?
            } else {
                parse_set(&lang)?
            };
            let l = LanguageSpec::star(base);
            let members = l.enumerate(n)?;
            println!("{} strings of length {n}:", members.len());
            for x in &members {
                println!("  {}", bits_to_string(x));
            }
            verify_spec(&l, n, &check)
        }
        Demo::Kpass { n } => {
            let mut ok = true;
            for len in 0..=n {
                let tm = two_pass_mod6_machine(len);
                let sim = kpass_to_onepass(&tm, 2, len, TWO_PASS_MOD6_SPACE)?;
                let mut mismatches = 0;
                let mut accepted = 0;
                for x in all_strings(len) {
                    let ones = x.iter().filter(|&&b| b == 1).count();
                    let got = sim.automaton.run(&x);
                    accepted += got as usize;
                    if got != (ones % 6 == 0) || got != tm.simulate(&x, TWO_PASS_MOD6_SPACE, 2)? {
                        mismatches += 1;
                    }
                }
                println!(
                    "n = {len}: {} graph nodes, {} simulator states, {accepted} accepted, {mismatches} mismatches",
                    sim.graph.configs.len(),
                    sim.automaton.states()
                );
                ok &= mismatches == 0;
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use confbraid::acceptance::{self, AcceptanceConfig};
use confbraid::braid::{
    artin_equal, b3_normal_form, braid_eq, double_coset_eq_b3, gassner_split, psi3_star_hom, r_star_hom,
    BraidHom, BraidWord,
};
use confbraid::confmaps::{
    identity_twisted_by_discriminant, j_invariant, psi_k, resolve_quartic, shape_invariant, shapes_agree,
    ConfError, Configuration,
};
use confbraid::f2dyn::{solve_equation_with, SolveOptions};
use confbraid::modgroup::{
    braid_related_parabolic_pairs, double_coset_witness_psl, h_star, normal_form, normalize_parabolic_pair,
    psl_equal, trace_class, ModularWord, UnimodularMatrix,
};
use confbraid::monodromy::{induced_hom, map_psi3, map_psi3_r, map_r};
use confbraid::report::{Check, Report};
use confbraid::Exec;
use num_complex::Complex64;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "confbraid",
    version,
    about = "Braid, free-group and configuration-space checks"
)]
struct Cli {
    /// Emit CSV rows of the checks instead of the JSON report.
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Emit the JSON report (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve f^(6k+1)(w)·f^(-6k-1)(w) = w over reduced words of bounded length.
    SolveF2 {
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Disable the length pre-test.
        #[arg(long)]
        unpruned: bool,
    },
    /// Randomized and exhaustive checks of the free-group lemmas.
    VerifyLemmas {
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Equality of two braid words, e.g. "1 2 -1".
    BraidEq {
        #[arg(long)]
        n: usize,
        left: String,
        right: String,
    },
    /// Normal form of a PSL2(Z) matrix, a word in a, A, b, or a braid in B3/B4.
    NormalForm {
        /// Four integers "a b c d".
        #[arg(long, group = "input")]
        matrix: Option<String>,
        #[arg(long, group = "input")]
        word: Option<String>,
        #[arg(long, group = "input", requires = "n", allow_hyphen_values = true)]
        braid: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Whether g2 lies in <beta> g <alpha> in B3.
    DoubleCosets {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        g2: String,
    },
    /// Normalize braid-related parabolic pairs, given or enumerated.
    ParabolicClassify {
        #[arg(long, requires = "q", allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, requires = "p", allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, default_value_t = 10)]
        bound: i64,
    },
    /// Evaluate a configuration-space map on a configuration.
    EvalMap {
        #[arg(long, value_enum)]
        map: MapName,
        /// JSON [[re, im], ...] or whitespace-separated reals.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        /// Minimum separation the output must keep.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// The resolving quartic.
    #[command(name = "eval-R")]
    EvalR {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// x-coordinates of k-torsion points.
    EvalPsi {
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// j-invariant of y² = (x - x1)(x - x2)(x - x3).
    JInv {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Affine shape of a 3-point configuration, optionally compared with another.
    Shape {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(long, allow_hyphen_values = true)]
        compare: Option<String>,
        #[arg(long, default_value_t = acceptance::J_TOLERANCE)]
        tolerance: f64,
    },
    /// Braid monodromy of a map, traced from the basepoint {1, ..., n}.
    Monodromy {
        #[arg(long, value_enum)]
        map: MonoMap,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// The acceptance suite, or one criterion of it.
    Acceptance {
        #[arg(long)]
        quick: bool,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        criterion: Option<u8>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MapName {
    #[value(name = "R")]
    R,
    Psi3,
    Psi4,
    Psi5,
    #[value(name = "psi3R")]
    Psi3R,
    DiscTwist,
}

#[derive(Clone, Copy, ValueEnum)]
enum MonoMap {
    #[value(name = "R")]
    R,
    Psi3,
    #[value(name = "psi3R")]
    Psi3R,
}

/// Bad input, reported with exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let start = Instant::now();
    match run(&cli, exec, start) {
        Ok(report) => {
            let text = if cli.csv {
                report.to_csv()
            } else {
                report.to_json() + "\n"
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().write_all(text.as_bytes());
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn elapsed(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn run(cli: &Cli, exec: Exec, start: Instant) -> Result<Report, Usage> {
    match &cli.command {
        Command::SolveF2 { k, max_len, unpruned } => {
            let r = solve_equation_with(
                *k,
                *max_len,
                SolveOptions {
                    pruned: !unpruned,
                    exec,
                },
            );
            let ms = elapsed(start);
            let non_identity = r.solutions.iter().filter(|w| !w.is_identity()).count();
            let check = if *k == 0 {
                Check::new("solutions_in_orbit_of_x", r.in_orbit_of_x, json!(null))
            } else {
                Check::new(
                    "only_identity",
                    non_identity == 0,
                    json!({"non_identity": non_identity}),
                )
            };
            let solutions: Vec<String> = r.solutions.iter().map(|w| w.to_string()).collect();
            Ok(Report::new(
                "solve-f2",
                json!({"k": k, "max_len": max_len, "pruned": !unpruned}),
                json!({
                    "k": k,
                    "max_len": max_len,
                    "solutions": solutions,
                    "count": solutions.len(),
                    "examined": r.examined,
                    "pruned": r.pruned,
                    "elapsed_ms": ms,
                }),
                vec![check],
                ms,
            ))
        }
        Command::VerifyLemmas { trials, max_len } => {
            let cfg = AcceptanceConfig {
                seed: cli.seed,
                exec,
                trials: *trials,
                exhaustive_len: *max_len,
                ..Default::default()
            };
            let c = acceptance::criterion_3(&cfg);
            Ok(Report::new(
                "verify-lemmas",
                json!({"seed": cli.seed, "trials": trials, "max_len": max_len}),
                json!({"summary": c.summary_line()}),
                c.checks,
                elapsed(start),
            ))
        }
        Command::BraidEq { n, left, right } => {
            let u = BraidWord::parse(*n, left)?;
            let v = BraidWord::parse(*n, right)?;
            let equal = braid_eq(&u, &v)?;
            let oracle = artin_equal(&u, &v)?;
            Ok(Report::new(
                "braid-eq",
                json!({"n": n, "left": u, "right": v}),
                json!({"equal": equal}),
                vec![Check::new(
                    "artin_oracle_agrees",
                    equal == oracle,
                    json!({"oracle": oracle}),
                )],
                elapsed(start),
            ))
        }
        Command::NormalForm {
            matrix,
            word,
            braid,
            n,
        } => normal_form_report(matrix, word, braid, *n, start),
        Command::DoubleCosets { g, g2 } => {
            let u = BraidWord::parse(3, g)?;
            let v = BraidWord::parse(3, g2)?;
            let same = double_coset_eq_b3(&u, &v)?;
            let witness = double_coset_witness_psl(&h_star(&u)?, &h_star(&v)?);
            Ok(Report::new(
                "double-cosets",
                json!({"g": u, "g2": v}),
                json!({"same_double_coset": same, "psl_witness": witness}),
                // equality in B3 forces equality of the images in PSL2(Z)
                vec![Check::new(
                    "psl_image_consistent",
                    !same || witness.is_some(),
                    json!(null),
                )],
                elapsed(start),
            ))
        }
        Command::ParabolicClassify { p, q, bound } => parabolic_report(p, q, *bound, start),
        Command::EvalMap {
            map,
            points,
            tolerance,
        } => {
            let c = parse_points(points)?;
            let (name, out) = match map {
                MapName::R => ("R", resolve_quartic(&c)),
                MapName::Psi3 => ("psi3", psi_k(&c, 3)),
                MapName::Psi4 => ("psi4", psi_k(&c, 4)),
                MapName::Psi5 => ("psi5", psi_k(&c, 5)),
                MapName::Psi3R => ("psi3R", map_psi3_r(&c)),
                MapName::DiscTwist => ("disc-twist", identity_twisted_by_discriminant(&c)),
            };
            eval_report("eval-map", name, &c, out?, *tolerance, start)
        }
        Command::EvalR { points, tolerance } => {
            let c = parse_points(points)?;
            eval_report("eval-R", "R", &c, resolve_quartic(&c)?, *tolerance, start)
        }
        Command::EvalPsi { k, points, tolerance } => {
            let c = parse_points(points)?;
            eval_report(
                "eval-psi",
                &format!("psi{k}"),
                &c,
                psi_k(&c, *k)?,
                *tolerance,
                start,
            )
        }
        Command::JInv { points } => {
            let c = parse_points(points)?;
            let j = j_invariant(&c)?;
            Ok(Report::new(
                "j-inv",
                json!({"points": c}),
                json!({"j": [j.re, j.im]}),
                vec![Check::new("finite", j.is_finite(), json!(null))],
                elapsed(start),
            ))
        }
        Command::Shape {
            points,
            compare,
            tolerance,
        } => {
            let c = parse_points(points)?;
            let s = shape_invariant(&c)?;
            let mut results = json!({"shape": [s.re, s.im]});
            let mut checks = vec![Check::new("finite", s.is_finite(), json!(null))];
            if let Some(other) = compare {
                let d = parse_points(other)?;
                let t = shape_invariant(&d)?;
                results["other_shape"] = json!([t.re, t.im]);
                checks.push(Check::new(
                    "shapes_agree",
                    shapes_agree(s, t, *tolerance),
                    json!(null),
                ));
            }
            Ok(Report::new(
                "shape",
                json!({"points": c, "compare": compare, "tolerance": tolerance}),
                results,
                checks,
                elapsed(start),
            ))
        }
        Command::Monodromy { map, steps, max_len } => monodromy_report(*map, *steps, *max_len, exec, start),
        Command::Acceptance {
            quick,
            criterion,
            trials,
            steps,
        } => {
            let mut cfg = if *quick {
                AcceptanceConfig::quick()
            } else {
                AcceptanceConfig::default()
            };
            cfg.seed = cli.seed;
            cfg.exec = exec;
            if let Some(t) = trials {
                cfg.trials = *t;
            }
            if let Some(s) = steps {
                cfg.steps = *s;
            }
            let criteria = match criterion {
                Some(id) => vec![acceptance::run_criterion(*id, &cfg).expect("range checked by clap")],
                None => acceptance::run_all(&cfg),
            };
            let mut checks = Vec::new();
            for c in &criteria {
                eprintln!("{}", c.summary_line());
                for ch in &c.checks {
                    checks.push(Check::new(
                        format!("c{}.{}", c.id, ch.name),
                        ch.passed,
                        ch.detail.clone(),
                    ));
                }
            }
            let summary: Vec<Value> = criteria
                .iter()
                .map(
                    |c| json!({"id": c.id, "title": c.title, "passed": c.passed, "elapsed_ms": c.elapsed_ms}),
                )
                .collect();
            Ok(Report::new(
                "acceptance",
                serde_json::to_value(cfg).expect("serializable"),
                json!({"criteria": summary}),
                checks,
                elapsed(start),
            ))
        }
    }
}

fn parse_points(text: &str) -> Result<Configuration, Usage> {
    let t = text.trim();
    let pts: Vec<Complex64> = if t.starts_with('[') {
        let pairs: Vec<[f64; 2]> = serde_json::from_str(t)?;
        pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    } else {
        t.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map(|x| Complex64::new(x, 0.0)))
            .collect::<Result<_, _>>()?
    };
    Ok(Configuration::new(pts)?)
}

fn parse_matrix(text: &str) -> Result<UnimodularMatrix, Usage> {
    let v: Vec<i64> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c, d] => Ok(UnimodularMatrix::from_i64(a, b, c, d)?),
        _ => Err(Usage(format!("expected four integers, got {text:?}"))),
    }
}

fn normal_form_report(
    matrix: &Option<String>,
    word: &Option<String>,
    braid: &Option<String>,
    n: Option<usize>,
    start: Instant,
) -> Result<Report, Usage> {
    if let Some(b) = braid {
        let n = n.expect("required by clap");
        let w = BraidWord::parse(n, b)?;
        let (results, round_trip) = match n {
            3 => {
                let nf = b3_normal_form(&w)?;
                let back = nf.to_braid();
                let ok = braid_eq(&back, &w)?;
                (
                    json!({"psl_part": nf.psl_part, "exponent_sum": nf.exponent_sum}),
                    ok,
                )
            }
            4 => {
                let nf = gassner_split(&w)?;
                let ok = braid_eq(&nf.to_braid(), &w)?;
                (json!({"kernel_part": nf.kernel_part, "b3_part": nf.b3_part}), ok)
            }
            _ => return Err(Usage("braid normal forms exist for n = 3 and n = 4".into())),
        };
        return Ok(Report::new(
            "normal-form",
            json!({"braid": w, "n": n}),
            results,
            vec![Check::new("round_trip", round_trip, json!(null))],
            elapsed(start),
        ));
    }
    let (m, input) = match (matrix, word) {
        (Some(t), _) => (parse_matrix(t)?, json!({"matrix": t})),
        (_, Some(t)) => (ModularWord::parse(t)?.evaluate(), json!({"word": t})),
        _ => return Err(Usage("one of --matrix, --word or --braid is required".into())),
    };
    let nf = normal_form(&m);
    let round_trip = psl_equal(&nf.evaluate(), &m);
    Ok(Report::new(
        "normal-form",
        input,
        json!({"matrix": m, "normal_form": nf, "trace_class": trace_class(&m)}),
        vec![Check::new("round_trip", round_trip, json!(null))],
        elapsed(start),
    ))
}

fn parabolic_report(
    p: &Option<String>,
    q: &Option<String>,
    bound: i64,
    start: Instant,
) -> Result<Report, Usage> {
    if let (Some(p), Some(q)) = (p, q) {
        let (pm, qm) = (parse_matrix(p)?, parse_matrix(q)?);
        let norm = normalize_parabolic_pair(&pm, &qm)?;
        return Ok(Report::new(
            "parabolic-classify",
            json!({"p": pm, "q": qm}),
            json!({"conjugator": norm.conjugator, "inverted": norm.inverted}),
            vec![Check::new("normalized", true, json!(null))],
            elapsed(start),
        ));
    }
    let pairs = braid_related_parabolic_pairs(bound);
    let mut inverted = 0usize;
    let mut failures = Vec::new();
    for (a, b) in &pairs {
        let pm = UnimodularMatrix::from_i64(a[0], a[1], a[2], a[3])?;
        let qm = UnimodularMatrix::from_i64(b[0], b[1], b[2], b[3])?;
        match normalize_parabolic_pair(&pm, &qm) {
            Ok(n) => inverted += n.inverted as usize,
            Err(e) => failures.push(json!({"p": a, "q": b, "error": e.to_string()})),
        }
    }
    Ok(Report::new(
        "parabolic-classify",
        json!({"bound": bound}),
        json!({"pairs": pairs.len(), "inverted": inverted}),
        vec![Check::new(
            "all_pairs_normalize",
            failures.is_empty(),
            json!(failures),
        )],
        elapsed(start),
    ))
}

fn eval_report(
    command: &str,
    map: &str,
    input: &Configuration,
    out: Configuration,
    tolerance: f64,
    start: Instant,
) -> Result<Report, Usage> {
    let sep = out.separation();
    Ok(Report::new(
        command,
        json!({"map": map, "points": input, "tolerance": tolerance}),
        json!({"output": out, "separation": sep}),
        vec![Check::new(
            "separated",
            sep > tolerance,
            json!({"separation": sep}),
        )],
        elapsed(start),
    ))
}

fn monodromy_report(
    map: MonoMap,
    steps: usize,
    max_len: usize,
    exec: Exec,
    start: Instant,
) -> Result<Report, Usage> {
    type Map = fn(&Configuration) -> Result<Configuration, ConfError>;
    let (name, f, n, m, expected): (&str, Map, usize, usize, BraidHom) = match map {
        MonoMap::R => ("R", map_r, 4, 3, r_star_hom()),
        MonoMap::Psi3 => ("psi3", map_psi3, 3, 4, psi3_star_hom()),
        MonoMap::Psi3R => ("psi3R", map_psi3_r, 4, 4, psi3_star_hom().after(&r_star_hom())?),
    };
    let h = induced_hom(&f, n, m, steps, exec)?;
    let conjugator = h.conjugator_to(&expected, max_len)?;
    let checks = vec![
        Check::new("relations_hold", h.relations.is_hom, json!(h.relations)),
        Check::new("permutations_consistent", h.permutations_consistent, json!(null)),
        Check::new(
            "conjugate_to_expected",
            conjugator.is_some(),
            json!({"expected": expected.images, "max_len": max_len}),
        ),
    ];
    Ok(Report::new(
        "monodromy",
        json!({"map": name, "steps": steps, "max_len": max_len}),
        json!({
            "images": h.hom.images,
            "exponent_sums": h.exponent_sums,
            "conjugator": conjugator,
            "frames_per_loop": h.frames_per_loop,
        }),
        checks,
        elapsed(start),
    ))
}

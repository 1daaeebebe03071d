//! `ecb` — classify elliptic curves p-adically, run height surveys against
//! the exact family densities, and print the density and rank-bound tables.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error (singular or
//! non-minimal input, unsupported prime).

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::json;

use ecb_core::bounds::{
    conditional_100pct, headline, lp_oracle, rank0_bound, rank01_bounds, rank1_bound, scenario,
    BoundInputs, LpTarget,
};
use ecb_core::curve::CurveModel;
use ecb_core::densities::{
    mu_missing_two_mult, mu_s0, mu_s1prime_components_5, mu_s1prime_5, mu_s1_5, norm_factor,
    s0_s1_lower_bound,
};
use ecb_core::families::{classify_family, factor_discriminant};
use ecb_core::numeric::{decimal_string, parse_rational, Round};
use ecb_core::reduction::LocalProfile;
use ecb_core::survey::run_survey;
use ecb_core::Error as CoreError;

const DECIMAL_DIGITS: usize = 10;

#[derive(Parser)]
#[command(name = "ecb", version, about = "Elliptic-curve census and bounds toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full p-adic diagnostic of a single curve y^2 = x^3 + Ax + B
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        prime: u64,
    },
    /// Sweep all curves below a height bound and compare against the exact densities
    Survey {
        #[arg(long)]
        max_height: u64,
        #[arg(long)]
        prime: u64,
        /// Worker count; defaults to ECB_WORKERS, then 1
        #[arg(long)]
        workers: Option<usize>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Exact density table and certified Euler products
    Densities {
        /// Euler-product truncation
        #[arg(long, default_value_t = 10_000)]
        truncation: u64,
    },
    /// Closed-form rank bounds at a prime, verified against the LP oracle
    Bounds {
        #[arg(long)]
        prime: u64,
    },
    /// The combined lower bound on the rank-0-or-1 density with its input ledger
    Headline {
        /// Equidistribution constant (rational or decimal, default 0.5501)
        #[arg(long)]
        kappa: Option<String>,
        /// Density slack (rational or decimal, default 0.00001)
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Evaluate bound × kappa × density for hypothetical inputs
    Scenario {
        #[arg(long)]
        bound: String,
        #[arg(long)]
        kappa: String,
        #[arg(long)]
        density: String,
    },
}

enum AppError {
    Usage(String),
    Domain(CoreError),
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        AppError::Domain(e)
    }
}

fn main() {
    // die quietly when the consumer closes the pipe (e.g. `ecb ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli.command) {
        Ok(()) => {}
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(AppError::Domain(e)) => {
            let tag = match e {
                CoreError::SingularCurve => "singular_curve",
                CoreError::NonMinimalModel => "non_minimal_model",
                CoreError::UnsupportedPrime(_) => "unsupported_prime",
                CoreError::ZeroInput => "zero_input",
                CoreError::PreconditionViolated(_) => "precondition_violated",
                CoreError::InfeasibleConstraints => "infeasible_constraints",
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "error": tag,
                    "message": e.to_string(),
                }))
                .expect("error serialization")
            );
            std::process::exit(2);
        }
    }
}

fn run(cmd: Command) -> Result<(), AppError> {
    match cmd {
        Command::Classify { a, b, prime } => classify_cmd(&a, &b, prime),
        Command::Survey {
            max_height,
            prime,
            workers,
            out,
        } => survey_cmd(max_height, prime, workers, out),
        Command::Densities { truncation } => {
            densities_cmd(truncation);
            Ok(())
        }
        Command::Bounds { prime } => bounds_cmd(prime),
        Command::Headline { kappa, epsilon } => headline_cmd(kappa, epsilon),
        Command::Scenario {
            bound,
            kappa,
            density,
        } => scenario_cmd(&bound, &kappa, &density),
    }
}

fn dec(r: &BigRational) -> String {
    decimal_string(r, DECIMAL_DIGITS, Round::Nearest)
}

fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_big(s: &str, what: &str) -> Result<BigInt, AppError> {
    s.trim()
        .parse()
        .map_err(|_| AppError::Usage(format!("{what} must be an integer, got `{s}`")))
}

fn parse_unit_rational(s: &str, what: &str) -> Result<BigRational, AppError> {
    parse_rational(s)
        .ok_or_else(|| AppError::Usage(format!("{what} must be a rational or decimal, got `{s}`")))
}

fn classify_cmd(a: &str, b: &str, prime: u64) -> Result<(), AppError> {
    let a = parse_big(a, "--a")?;
    let b = parse_big(b, "--b")?;
    let curve = CurveModel::new(a, b)?;
    let profile = LocalProfile::compute(&curve, prime)?;
    let factored = factor_discriminant(&curve)?;
    let family = classify_family(&curve, prime)?;

    let factors: Vec<serde_json::Value> = factored
        .factors
        .iter()
        .map(|(p, e)| json!([p.to_string(), e]))
        .collect();
    let conditions: Vec<serde_json::Value> = family
        .diagnostics
        .iter()
        .map(|c| json!({"label": c.label, "holds": c.holds}))
        .collect();
    let record = json!({
        "curve": {"a": curve.a().to_string(), "b": curve.b().to_string()},
        "height": curve.height().to_string(),
        "disc_min": curve.disc_min().to_string(),
        "factorization": {"sign": factored.sign, "factors": factors},
        "local": {
            "prime": prime,
            "reduction": profile.rtype.as_str(),
            "disc_valuation": profile.k,
            "l_invariant_ord1": profile.l_invariant_ord1,
        },
        "family": {
            "s0": family.in_s0,
            "s1_prime": family.in_s1prime,
            "s1": family.in_s1,
            "conditions": conditions,
        },
    });
    println!("{}", serde_json::to_string_pretty(&record).expect("serialization"));
    Ok(())
}

fn survey_cmd(
    max_height: u64,
    prime: u64,
    workers: Option<usize>,
    out: Option<std::path::PathBuf>,
) -> Result<(), AppError> {
    let workers = match workers {
        Some(w) if w >= 1 => w,
        Some(_) => return Err(AppError::Usage("--workers must be >= 1".into())),
        None => match std::env::var("ECB_WORKERS") {
            Ok(v) => v
                .parse::<usize>()
                .ok()
                .filter(|&w| w >= 1)
                .ok_or_else(|| {
                    AppError::Usage(format!("ECB_WORKERS must be an integer >= 1, got `{v}`"))
                })?,
            Err(_) => 1,
        },
    };
    let report = run_survey(max_height, prime, workers)?;
    let c = &report.counters;

    let mut empirical = serde_json::Map::new();
    let mut deltas = serde_json::Map::new();
    if let Some(e) = report.empirical_s0() {
        empirical.insert("s0".into(), json!(dec(&e)));
        deltas.insert("s0".into(), json!(dec(&report.s0_delta().expect("nonempty"))));
    }
    if let Some(e) = report.empirical_s1_prime() {
        empirical.insert("s1_prime".into(), json!(dec(&e)));
        if let Some(exact) = &report.reference.s1_prime {
            let d = (&e - exact).abs();
            deltas.insert("s1_prime".into(), json!(dec(&d)));
        }
    }
    if let Some(e) = report.empirical_s1() {
        empirical.insert("s1".into(), json!(dec(&e)));
    }

    let mut exact = serde_json::Map::new();
    exact.insert(
        "s0".into(),
        json!({"rational": rational_string(&report.reference.s0), "decimal": dec(&report.reference.s0)}),
    );
    if let Some(v) = &report.reference.s1_prime {
        exact.insert(
            "s1_prime".into(),
            json!({"rational": rational_string(v), "decimal": dec(v)}),
        );
    }
    if let Some(v) = &report.reference.s1_lower {
        exact.insert("s1_lower".into(), json!({"decimal": dec(v)}));
    }

    let doc = json!({
        "max_height": report.max_height,
        "prime": report.prime,
        "counters": {
            "total": c.total,
            "good_ordinary": c.good_ordinary,
            "good_supersingular": c.good_supersingular,
            "mult_split": c.mult_split,
            "mult_nonsplit": c.mult_nonsplit,
            "additive": c.additive,
            "s0": c.s0,
            "s1_prime": c.s1_prime,
            "s1": c.s1,
            "skipped_singular": c.skipped_singular,
            "skipped_nonminimal": c.skipped_nonminimal,
        },
        "empirical": empirical,
        "exact": exact,
        "deltas": deltas,
        "decimal_precision": DECIMAL_DIGITS,
        "wall_time_ms": report.wall_time_ms as u64,
        "workers": report.workers,
        "digest": report.digest,
    });
    let text = serde_json::to_string_pretty(&doc).expect("serialization");
    match out {
        Some(path) => std::fs::write(&path, text + "\n")
            .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn densities_cmd(truncation: u64) {
    let five10 = BigInt::from(5).pow(10);
    let mu0 = mu_s0(5).expect("5 is prime");
    // display form 4*5^10 / (5*(5^10-1))
    let mu0_display = format!(
        "{}/{}",
        BigInt::from(4) * &five10,
        BigInt::from(5) * (&five10 - BigInt::one())
    );
    let (good, nonsplit, split) = mu_s1prime_components_5();
    let mu1p = mu_s1prime_5();
    println!("exact densities at p = 5 (normalized by 1 - 5^-10)");
    println!("  mu(S0(5))   base family      = {mu0_display} ~ {}", dec(&mu0));
    println!("  good ordinary component      = {} ~ {}", rational_string(&good), dec(&good));
    println!("  nonsplit mult component      = {} ~ {}", rational_string(&nonsplit), dec(&nonsplit));
    println!("  split mult component         = {} ~ {}", rational_string(&split), dec(&split));
    println!("  mu(S1'(5))  refined at 5     = {} ~ {}", rational_string(&mu1p), dec(&mu1p));
    println!();
    let s1 = mu_s1_5(truncation);
    println!("certified Euler products (truncation L = {truncation})");
    println!(
        "  mu(S1(5))   fully refined    in {}  width {}",
        s1.to_decimal(DECIMAL_DIGITS),
        decimal_string(&s1.width(), DECIMAL_DIGITS, Round::Ceil)
    );
    let s0s1 = s0_s1_lower_bound(5, truncation).expect("5 is prime");
    println!(
        "  intersection bound at p = 5  in {}  width {}",
        s0s1.to_decimal(DECIMAL_DIGITS),
        decimal_string(&s0s1.width(), DECIMAL_DIGITS, Round::Ceil)
    );
    println!();
    println!("vanishing bound for curves missing two multiplicative primes");
    for l in [50u64, 100, 200, 400] {
        let v = mu_missing_two_mult(l, 5);
        println!("  L = {l:4}: {}", dec(&v));
    }
}

fn bounds_cmd(prime: u64) -> Result<(), AppError> {
    if prime < 3 {
        return Err(AppError::Domain(CoreError::UnsupportedPrime(prime)));
    }
    let inputs = BoundInputs::defaults(prime);
    let rows = [
        ("rank 0 (equidistributed parity)", rank0_bound(prime), true, LpTarget::Rank0),
        ("rank 1 (equidistributed parity)", rank1_bound(prime), true, LpTarget::Rank1),
        ("rank 0 or 1 (no parity)", rank01_bounds(prime, false), false, LpTarget::Rank0Or1),
        ("rank 0 or 1 (parity)", rank01_bounds(prime, true), true, LpTarget::Rank0Or1),
    ];
    println!("Selmer-average rank bounds at p = {prime} (average order p+1)");
    for (label, closed, parity, target) in rows {
        let (lp, _) = lp_oracle(prime, 8, parity, target, &inputs)?;
        let verdict = if lp == closed { "matches LP oracle" } else { "LP ORACLE DISAGREES" };
        println!(
            "  {label:32} {:>9} ~ {}  [{verdict}]",
            rational_string(&closed),
            dec(&closed)
        );
        if lp != closed {
            return Err(AppError::Domain(CoreError::PreconditionViolated(
                "closed form disagrees with LP oracle",
            )));
        }
    }
    if prime >= 5 {
        println!();
        let cond = conditional_100pct(prime, 10_000)?;
        println!(
            "conditional all-primes bound: {}  (tends to 1 as p grows)",
            cond.to_decimal(DECIMAL_DIGITS)
        );
    }
    Ok(())
}

fn headline_cmd(kappa: Option<String>, epsilon: Option<String>) -> Result<(), AppError> {
    let mut inputs = BoundInputs::defaults(5);
    if let Some(k) = kappa {
        inputs.kappa = parse_unit_rational(&k, "--kappa")?;
    }
    if let Some(e) = epsilon {
        inputs.epsilon_mu_diff = parse_unit_rational(&e, "--epsilon")?;
    }
    let mu0 = mu_s0(5)?;
    let mu1p = mu_s1prime_5();
    let h = headline(&inputs)?;
    println!("headline lower bound on the rank-0-or-1 density");
    println!("inputs:");
    println!("  kappa   = {} ~ {}", rational_string(&inputs.kappa), dec(&inputs.kappa));
    println!(
        "  epsilon = {} ~ {}",
        rational_string(&inputs.epsilon_mu_diff),
        dec(&inputs.epsilon_mu_diff)
    );
    println!("  mu_s0(5)      = {} ~ {}", rational_string(&mu0), dec(&mu0));
    println!("  mu_s1prime_5  = {} ~ {}", rational_string(&mu1p), dec(&mu1p));
    println!("outputs:");
    println!("  rank-0 path   3/8 * kappa * mu_s0(5)              ~ {}", dec(&h.rank0_path));
    println!("  rank-1 path   19/40 * kappa * mu_s1prime - eps    ~ {}", dec(&h.rank1_path));
    println!("  combined      (7/8 k + 19/24 (1-k)) mu' - corr    ~ {}", dec(&h.combined));
    println!("  average-rank lower bound                          ~ {}", dec(&h.rank1_path));
    Ok(())
}

fn scenario_cmd(bound: &str, kappa: &str, density: &str) -> Result<(), AppError> {
    let b = parse_unit_rational(bound, "--bound")?;
    let k = parse_unit_rational(kappa, "--kappa")?;
    let d = match density.trim() {
        // convenience: the normalized non-additive local density at 5
        "non-additive-5" => BigRational::new(BigInt::from(24), BigInt::from(25)) * norm_factor(5),
        other => parse_unit_rational(other, "--density")?,
    };
    let v = scenario(&b, &k, &d)?;
    let percent = &v * BigRational::from_integer(BigInt::from(100));
    println!(
        "scenario bound = {} ~ {}  ({} %)",
        rational_string(&v),
        dec(&v),
        decimal_string(&percent, 4, Round::Nearest)
    );
    Ok(())
}

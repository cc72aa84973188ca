use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cmeis_core::formalgroup::Coeff;
use cmeis_core::heckel::{l_eisenstein, DEFAULT_TRUNCATION};
use cmeis_core::lattice::period_lattice;
use cmeis_core::{damerell, l_direct, run_suite, weierstrass_fg, Error, LSpec, LValue, Preset, Series, DEFAULT_PREC};

#[derive(Parser)]
#[command(
    name = "cmeis",
    version,
    about = "Numerical checks for CM elliptic curves: Eisenstein numbers, elliptic units, Hecke L-values, formal groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite and write its JSON report.
    Run {
        /// Suite name, or `all`.
        suite: String,
        /// Builtin preset name (qi, q7, q3) or path to a preset JSON file.
        #[arg(long, default_value = "qi")]
        preset: String,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        bits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print only the summary line.
        #[arg(long)]
        quiet: bool,
    },
    /// Evaluate L(ψ̄^{k+j}, k) for the preset character.
    Lvalue {
        #[arg(short)]
        k: i64,
        #[arg(short, default_value_t = 0)]
        j: i64,
        #[arg(long, value_enum, default_value_t = Route::Both)]
        route: Route,
        /// Recognise the normalised value as a rational number.
        #[arg(long)]
        detect: bool,
        /// Ideal-norm truncation of the direct series.
        #[arg(short = 'N', default_value_t = DEFAULT_TRUNCATION)]
        n: u64,
        #[arg(long, default_value = "qi")]
        preset: String,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        bits: u32,
    },
    /// Formal group of the preset curve, checked modulo T^{D+1}.
    Fg {
        #[arg(long, default_value = "qi")]
        curve: String,
        #[arg(long, default_value_t = 30)]
        trunc: usize,
        /// Number of coefficients printed per series.
        #[arg(long, default_value_t = 12)]
        show: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Direct,
    Eisenstein,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Run { suite, preset, bits, out, quiet } => run(&suite, &preset, bits, out, quiet),
        Cmd::Lvalue { k, j, route, detect, n, preset, bits } => lvalue(k, j, route, detect, n, &preset, bits),
        Cmd::Fg { curve, trunc, show } => fg(&curve, trunc, show),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(match e {
                Error::UnknownSuite(_) | Error::PresetParse(_) | Error::InvalidInput(_) | Error::Divergent(_) => 2,
                _ => 1,
            })
        }
    }
}

fn describe(e: &Error) -> String {
    match e {
        Error::UnknownSuite(s) => format!("UnknownSuite: {s} (expected one of {}, all)", cmeis_core::SUITES.join(", ")),
        Error::PresetParse(s) => format!("PresetParseError: {s}"),
        Error::Divergent(m) => format!("ConvergenceRefused: the direct series needs margin > 1, have {m}"),
        e => e.to_string(),
    }
}

fn run(suite: &str, preset: &str, bits: u32, out: Option<PathBuf>, quiet: bool) -> Result<bool, Error> {
    if suite != "all" && !cmeis_core::SUITES.contains(&suite) {
        return Err(Error::UnknownSuite(suite.to_string()));
    }
    let pre = Preset::load(preset)?;
    let report = run_suite(suite, &pre, bits)?;
    if !quiet {
        for r in &report.records {
            let mark = if r.pass { "PASS" } else { "FAIL" };
            println!(
                "{mark}  {:<22} {:<48} residual {:>10}  tol {:>6}  {:.2}s",
                r.suite, r.label, r.residual, r.tolerance, r.wall_seconds
            );
        }
        for r in &report.deviations {
            println!("NOTE  {:<22} {:<48} residual {:>10}  (literal form, not counted)", r.suite, r.label, r.residual);
        }
    }
    let failed = report.failures().count();
    println!(
        "{} {} on {} at {} bits: {} checks, {} failed",
        if report.pass { "PASS" } else { "FAIL" },
        report.suite,
        report.preset,
        report.precision,
        report.records.len(),
        failed
    );
    if let Some(path) = out {
        report.write(&path)?;
    }
    Ok(report.pass)
}

fn print_value(label: &str, v: &LValue) {
    println!(
        "{label:<10} {}  ± {:.1e}  route {:?}  truncation {}  tail {:.1e}{}",
        v.value.to_decimal(40),
        v.value.err(),
        v.route,
        v.truncation,
        v.tail_bound,
        if v.tail_dominated { "  (tail dominated)" } else { "" }
    );
}

fn lvalue(k: i64, j: i64, route: Route, detect: bool, n: u64, preset: &str, bits: u32) -> Result<bool, Error> {
    let pre = Preset::load(preset)?;
    let spec = LSpec::at_zero(k, j, pre.f());
    println!("L(psi-bar^{}, {k}) for {} modulo ({})", k + j, pre.id, pre.f());
    let mut values = Vec::new();
    if route != Route::Eisenstein {
        let v = l_direct(&spec, &pre.psi, n, bits)?;
        print_value("direct", &v);
        values.push(v);
    }
    if route != Route::Direct {
        let lat = period_lattice(&pre, bits)?;
        let v = l_eisenstein(&spec, &pre.psi, lat.basis().0)?;
        print_value("eisenstein", &v);
        values.push(v);
    }
    let mut ok = true;
    if let [a, b] = &values[..] {
        let (diff, err) = a.agreement(b);
        let bound = err + a.tail_bound + b.tail_bound;
        ok = diff <= bound.max(1e-15);
        println!("difference {diff:.2e} (bound {bound:.2e}) {}", if ok { "agree" } else { "DISAGREE" });
    }
    if detect {
        let d = damerell(k, j, &pre, n, bits)?;
        println!("normalised {}", d.normalized.to_decimal(30));
        println!("rational   {}", d.candidate.a);
        println!(
            "constant   (2pi)^-{j} (4 Omega)^{} {}= {}",
            k + j,
            if d.has_sqrt { "sqrt(-d) " } else { "" },
            d.archimedean.to_decimal(30)
        );
        println!("sqrt(-d)   {}", if d.has_sqrt { "yes (j odd)" } else { "no" });
    }
    Ok(ok)
}

fn show<R: Coeff + std::fmt::Display>(name: &str, s: &Series<R>, n: usize) {
    let terms: Vec<String> =
        s.c.iter().enumerate().take(n + 1).filter(|(_, c)| !c.is_zero()).map(|(i, c)| format!("({c})T^{i}")).collect();
    println!("{name:<6} {} + O(T^{})", terms.join(" + "), n + 1);
}

fn fg(curve: &str, d: usize, n: usize) -> Result<bool, Error> {
    let pre = Preset::load(curve)?;
    let fg = weierstrass_fg(&pre.curve.a4, &pre.curve.a6, d)?;
    println!("y^2 = x^3 + ({})x + ({}), truncation T^{}", pre.curve.a4, pre.curve.a6, d + 1);
    show("w", &fg.w, n);
    show("omega", &fg.omega, n);
    show("log", &fg.group.log, n);
    show("[2]", &fg.group.law.diagonal(), n);
    let mut f = Vec::new();
    for t in 2..=n.min(d) {
        for i in 0..=t {
            let c = &fg.group.law.c[i][t - i];
            if *c != 0 {
                f.push(format!("({c})X^{i}Y^{}", t - i));
            }
        }
    }
    println!("F      X + Y + {}", if f.is_empty() { "0".to_string() } else { f.join(" + ") });
    let check = fg.group.check()?;
    let mismatch = fg.differential_mismatch();
    let residual = fg.curve_residual().c.iter().all(|c| *c == 0);
    println!("law identities       {}", if check.all() { "exact" } else { "FAILED" });
    for f in &check.failures {
        println!("  {f}");
    }
    println!("log' = omega         {}", mismatch.map_or("exact".to_string(), |k| format!("differs at T^{k}")));
    println!("curve equation       {}", if residual { "exact" } else { "FAILED" });
    Ok(check.all() && mismatch.is_none() && residual)
}

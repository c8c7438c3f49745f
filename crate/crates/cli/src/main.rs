//! `pdensity`: exact p-densities of exponent sets and their consequences
//! for exponential sums, L-polynomial slopes, and point counts.
//!
//! Exit codes: 0 success, 2 bad input, 3 resource ceiling, 4 internal error
//! (a proven invariant failed; report it).

use clap::{Args, Parser, Subcommand};
use pdensity::density::{p_density, Method};
use pdensity::expsum::{
    ax_katz_bound, exponential_sum, q_valuation, tightness_search, Polynomial,
};
use pdensity::ff::Field;
use pdensity::lfunc::{
    affine_point_count, first_slope_sample, genus_slope_table, l_polynomial, newton_polygon,
    supersingular_check,
};
use pdensity::modular::ExponentSet;
use pdensity::polyparse::parse_polynomial;
use pdensity::report::{format_opt_rat, format_rat, format_vector, Report};
use pdensity::stickelberger::{gauss_valuation, gauss_valuation_table, singleton_density};
use pdensity::{bounds, selftest, Config, Error, Natural, Rat, Result};
use std::fmt::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pdensity", version, about = "Exact p-densities of exponent sets", max_term_width = 100)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the p-density of an exponent set with a witness.
    Density(SetArgs),
    /// Density plus every lower/upper bound with tightness flags.
    Bounds(SetArgs),
    /// Orbit-averaged fractional parts: tau_d(a) values for one d.
    Tau(TauArgs),
    /// Evaluate one exponential sum exactly.
    Expsum(PolyArgs),
    /// Search for a sum whose valuation attains the set density.
    Tight(TightArgs),
    /// L-polynomial of a one-variable sum, with coefficient valuations.
    Lpoly(PolyArgs),
    /// Newton polygon (vertices and slopes) of the L-polynomial.
    Newton(PolyArgs),
    /// Sample first slopes over the monic coefficient family.
    SlopeSample(SlopeArgs),
    /// Decide supersingularity of the Artin-Schreier family for a set.
    Supersingular(SetArgs),
    /// Genus and predicted first slope per degree window.
    GenusTable(GenusArgs),
    /// Point-count valuation bound for a polynomial system.
    Axkatz(SystemArgs),
    /// Run the built-in verification corpus.
    Selftest,
}

#[derive(Args)]
struct SetArgs {
    /// The prime p.
    #[arg(short = 'p', value_name = "P")]
    p: Option<u64>,
    /// Exponent set: comma-separated entries, colons inside vectors
    /// (e.g. `11,3,1` or `3:1,1:2`).
    #[arg(short = 'D', long = "set", value_name = "SET")]
    set: Option<String>,
    /// TOML file with `p = ...` and `exponents = [[...], ...]`.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["p", "set"])]
    file: Option<std::path::PathBuf>,
    /// Re-check the result against exhaustive enumeration where feasible.
    #[arg(long)]
    validate: bool,
    /// Override every resource ceiling with one value.
    /// Override every resource ceiling with one value.
    #[arg(long, value_name = "N")]
    ceiling: Option<u64>,
}

#[derive(Args)]
struct TauArgs {
    /// The prime p.
    p: u64,
    /// The modulus d (>= 2, prime to p).
    d: u64,
    /// Optional argument a in 1..d; omit for the full table.
    a: Option<u64>,
}

#[derive(Args)]
struct PolyArgs {
    /// Field order q = p^m.
    #[arg(short = 'q', long = "field", value_name = "Q")]
    q: u64,
    /// Polynomial text, e.g. `x1^3 + [0,1]*x1`.
    #[arg(short = 'f', long = "poly", value_name = "POLY")]
    poly: String,
    /// Field modulus coefficients, ascending (overrides the built-in table).
    /// Field modulus coefficients, ascending (overrides the built-in table).
    #[arg(long, value_name = "C0,C1,...")]
    modulus: Option<String>,
    /// Override every resource ceiling with one value.
    /// Override every resource ceiling with one value.
    #[arg(long, value_name = "N")]
    ceiling: Option<u64>,
}

#[derive(Args)]
struct TightArgs {
    /// Field order q = p^m.
    #[arg(short = 'q', long = "field", value_name = "Q")]
    q: u64,
    /// Exponent set over the same prime as the field.
    #[arg(short = 'D', long = "set", value_name = "SET")]
    set: String,
    /// Field modulus coefficients, ascending (overrides the built-in table).
    #[arg(long, value_name = "C0,C1,...")]
    modulus: Option<String>,
    /// Attempt budget.
    #[arg(long, default_value_t = 1000)]
    budget: u64,
    /// Seed for the randomized phase.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override every resource ceiling with one value.
    #[arg(long, value_name = "N")]
    ceiling: Option<u64>,
}

#[derive(Args)]
struct SlopeArgs {
    /// Field order q = p^m.
    #[arg(short = 'q', long = "field", value_name = "Q")]
    q: u64,
    /// One-dimensional exponent set; the top entry is the monic degree.
    #[arg(short = 'D', long = "set", value_name = "SET")]
    set: String,
    /// Field modulus coefficients, ascending (overrides the built-in table).
    #[arg(long, value_name = "C0,C1,...")]
    modulus: Option<String>,
    /// Sample budget.
    #[arg(long, default_value_t = 100)]
    budget: u64,
    /// Seed for the randomized phase.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override every resource ceiling with one value.
    #[arg(long, value_name = "N")]
    ceiling: Option<u64>,
}

#[derive(Args)]
struct GenusArgs {
    /// The prime p.
    #[arg(short = 'p', value_name = "P")]
    p: u64,
    /// Largest degree row.
    #[arg(long, value_name = "D")]
    dmax: u64,
    /// Override every resource ceiling with one value.
    #[arg(long, value_name = "N")]
    ceiling: Option<u64>,
}

#[derive(Args)]
struct SystemArgs {
    /// Field order q = p^m.
    #[arg(short = 'q', long = "field", value_name = "Q")]
    q: u64,
    /// One polynomial per flag; repeat for a system.
    #[arg(short = 'f', long = "poly", value_name = "POLY", required = true)]
    polys: Vec<String>,
    /// Field modulus coefficients, ascending (overrides the built-in table).
    #[arg(long, value_name = "C0,C1,...")]
    modulus: Option<String>,
    /// Override every resource ceiling with one value.
    #[arg(long, value_name = "N")]
    ceiling: Option<u64>,
}

#[derive(serde::Deserialize)]
struct FileInput {
    p: u64,
    exponents: Vec<Vec<u64>>,
}

fn parse_set_text(p: u64, text: &str) -> Result<ExponentSet> {
    let mut vectors = Vec::new();
    for chunk in text.split(',') {
        let mut v = Vec::new();
        for part in chunk.split(':') {
            let n: u64 = part
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad exponent entry: {part:?}")))?;
            v.push(n);
        }
        vectors.push(v);
    }
    ExponentSet::new(p, vectors)
}

fn load_set(args: &SetArgs) -> Result<ExponentSet> {
    if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))?;
        let input: FileInput =
            toml::from_str(&text).map_err(|e| Error::parse(format!("bad input file: {e}")))?;
        return ExponentSet::new(input.p, input.exponents);
    }
    let p = args
        .p
        .ok_or_else(|| Error::validation("missing -p (or use --file)"))?;
    let text = args
        .set
        .as_ref()
        .ok_or_else(|| Error::validation("missing -D (or use --file)"))?;
    parse_set_text(p, text)
}

fn factor_prime_power(q: u64) -> Result<(u64, usize)> {
    if q < 2 {
        return Err(Error::validation("field order must be at least 2"));
    }
    let mut p = q;
    let mut i = 2u64;
    while i.saturating_mul(i) <= q {
        if q.is_multiple_of(i) {
            p = i;
            break;
        }
        i += 1;
    }
    let mut t = q;
    let mut m = 0usize;
    while t.is_multiple_of(p) {
        t /= p;
        m += 1;
    }
    if t != 1 {
        return Err(Error::validation(format!("{q} is not a prime power")));
    }
    Ok((p, m))
}

fn parse_modulus(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad modulus coefficient: {part:?}")))
        })
        .collect()
}

fn load_field(q: u64, modulus: &Option<String>) -> Result<Field> {
    let (p, m) = factor_prime_power(q)?;
    let modulus = modulus.as_deref().map(parse_modulus).transpose()?;
    Field::new(p, m, modulus)
}

fn config_with(ceiling: Option<u64>, validate: bool) -> Config {
    let mut cfg = Config {
        validate,
        ..Config::default()
    };
    if let Some(c) = ceiling {
        cfg.node_ceiling = c;
        cfg.enumeration_ceiling = c as u128;
        cfg.expsum_ceiling = c as u128;
        cfg.cycle_work_ceiling = c;
    }
    cfg
}

fn format_naturals(u: &[Natural]) -> String {
    let inner: Vec<String> = u.iter().map(|x| x.to_string()).collect();
    format!("[{}]", inner.join(","))
}

fn format_rats(v: &[Rat]) -> String {
    let inner: Vec<String> = v.iter().map(format_rat).collect();
    format!("[{}]", inner.join(","))
}

fn method_string(method: &Method) -> String {
    match method {
        Method::Direct => "direct".into(),
        Method::BoxCertified { box_cap, bound } => {
            format!("box-certified(cap={box_cap}, bound={bound})")
        }
        Method::FullGraph => "full-graph".into(),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn density_lines(rep: &mut Report, res: &pdensity::density::DensityResult) {
    rep.rat("density", &res.density);
    rep.set("normalized", &res.normalized);
    for (orig, red, k) in &res.reductions {
        rep.line(
            "reduction",
            format!("{} -> {} / p^{k}", format_vector(orig), format_vector(red)),
        );
    }
    for v in &res.merged {
        rep.line("merged", format_vector(v));
    }
    rep.line("witness_m", res.witness.m);
    rep.line("witness", format_naturals(&res.witness.u));
    rep.line("witness_weight", res.witness.weight);
    if res.witness.u != res.normalized_witness.u {
        rep.line("normalized_witness", format_naturals(&res.normalized_witness.u));
    }
    rep.line("orbit_size", res.orbit.len());
    rep.line("method", method_string(&res.method));
    rep.line("graph_nodes", res.graph_nodes);
}

fn run_density(args: &SetArgs) -> Result<String> {
    let set = load_set(args)?;
    let cfg = config_with(args.ceiling, args.validate);
    let res = p_density(&set, &cfg)?;
    let mut rep = Report::new("density");
    rep.line("p", set.p());
    rep.set("input", &set);
    density_lines(&mut rep, &res);
    Ok(rep.render())
}

fn run_bounds(args: &SetArgs) -> Result<String> {
    let set = load_set(args)?;
    let cfg = config_with(args.ceiling, args.validate);
    let b = bounds::bound_report(&set, &cfg)?;
    let mut rep = Report::new("bounds");
    rep.line("p", set.p());
    rep.set("input", &set);
    rep.set("normalized", &b.density.normalized);
    rep.rat("density", &b.density.density);
    rep.line("weight_of_set", b.weight_of_set);
    rep.rat("weight_bound", &b.weight_bound);
    rep.line("weight_tight", yes_no(b.weight_tight));
    rep.rat("covector_bound", &b.covector.bound);
    rep.line("covector", format_rats(&b.covector.covector));
    rep.line("covector_tight", yes_no(b.covector_tight));
    rep.rat("weighted_covector_bound", &b.covector_weighted.bound);
    rep.line("weighted_covector", format_rats(&b.covector_weighted.covector));
    rep.line("weighted_covector_tight", yes_no(b.covector_weighted_tight));
    match &b.omega {
        Some(cert) => {
            rep.rat("dilation_bound", &cert.omega);
            rep.vector("dilation_point", &cert.lattice_point);
            rep.line("dilation_coefficients", format_rats(&cert.coefficients));
            rep.line(
                "dilation_tight",
                yes_no(b.omega_tight.expect("tightness accompanies the bound")),
            );
        }
        None => {
            rep.line("dilation_bound", "skipped (box over ceiling)");
        }
    }
    for (coord, bound) in &b.projections {
        rep.rat(format!("projection_{coord}"), bound);
    }
    if let Some(u) = &b.upper_half {
        rep.rat("upper_bound", u);
    }
    if let Some(sp) = b.semi_primitive {
        rep.line("semi_primitive", yes_no(sp));
    }
    Ok(rep.render())
}

fn run_tau(args: &TauArgs) -> Result<String> {
    let mut rep = Report::new("tau");
    rep.line("p", args.p);
    rep.line("d", args.d);
    match args.a {
        Some(a) => {
            let v = gauss_valuation(args.p, args.d, a)?;
            rep.line("a", a);
            rep.rat("tau", &v);
        }
        None => {
            let table = gauss_valuation_table(args.p, args.d)?;
            rep.line("orbit_length", table.ell);
            for (a, v) in &table.values {
                rep.rat(format!("tau_{a}"), v);
            }
            let (min, argmin) = singleton_density(args.p, args.d)?;
            rep.rat("min", &min);
            rep.line("argmin", argmin);
        }
    }
    Ok(rep.render())
}

fn field_lines(rep: &mut Report, field: &Field) {
    rep.line("q", field.order());
    rep.line("p", field.p());
    rep.line("m", field.degree());
    rep.line("modulus", format_vector(field.modulus()));
}

fn run_expsum(args: &PolyArgs) -> Result<String> {
    let field = load_field(args.q, &args.modulus)?;
    let cfg = config_with(args.ceiling, false);
    let raw = parse_polynomial(&args.poly, None)?;
    let poly = Polynomial::resolve(&raw, &field)?;
    let sum = exponential_sum(&field, &poly, &cfg)?;
    let mut rep = Report::new("expsum");
    field_lines(&mut rep, &field);
    rep.line("poly", &args.poly);
    rep.line("variables", poly.nvars());
    rep.line("sum", &sum);
    rep.opt_rat("valuation", &q_valuation(&sum, &field));
    Ok(rep.render())
}

fn run_tight(args: &TightArgs) -> Result<String> {
    let field = load_field(args.q, &args.modulus)?;
    let set = parse_set_text(field.p(), &args.set)?;
    let cfg = config_with(args.ceiling, false);
    let t = tightness_search(&field, &set, args.budget, args.seed, &cfg)?;
    let mut rep = Report::new("tight");
    field_lines(&mut rep, &field);
    rep.set("input", &set);
    rep.rat("density", &t.density);
    match t.space {
        Some(s) => rep.line("space", s),
        None => rep.line("space", "over 2^128"),
    };
    rep.line("budget", args.budget);
    rep.line("seed", args.seed);
    rep.line("tried", t.tried);
    rep.line("exhausted", yes_no(t.exhausted));
    match &t.found {
        Some(w) => {
            rep.line("found", "yes");
            for c in &w.coefficients {
                rep.line("coefficient", format_vector(c));
            }
            rep.line("sum", &w.sum);
            rep.rat("valuation", &w.valuation);
        }
        None => {
            rep.line("found", "no");
        }
    }
    Ok(rep.render())
}

fn lpoly_of(args: &PolyArgs) -> Result<(Field, Polynomial, pdensity::lfunc::LPolynomial, Config)> {
    let field = load_field(args.q, &args.modulus)?;
    let cfg = config_with(args.ceiling, false);
    let raw = parse_polynomial(&args.poly, None)?;
    let poly = Polynomial::resolve(&raw, &field)?;
    let lp = l_polynomial(&field, &poly, &cfg)?;
    Ok((field, poly, lp, cfg))
}

fn run_lpoly(args: &PolyArgs) -> Result<String> {
    let (field, poly, lp, cfg) = lpoly_of(args)?;
    let mut rep = Report::new("lpoly");
    field_lines(&mut rep, &field);
    rep.line("poly", &args.poly);
    rep.line("degree", lp.degree());
    for (j, c) in lp.coefficients.iter().enumerate() {
        rep.line(format!("coeff_{j}"), c);
    }
    let vals = lp.valuations();
    for (j, v) in vals.iter().enumerate() {
        rep.line(format!("valuation_{j}"), format_opt_rat(v));
    }
    let np = newton_polygon(&lp)?;
    rep.line("slopes", format_rats(&np.slopes));
    match np.first_slope() {
        Some(s) => rep.rat("first_slope", s),
        None => rep.line("first_slope", "none"),
    };
    let aff = affine_point_count(&field, &poly, &cfg)?;
    rep.line("affine_points", aff);
    rep.line("projective_points", aff + 1);
    Ok(rep.render())
}

fn run_newton(args: &PolyArgs) -> Result<String> {
    let (field, _, lp, _) = lpoly_of(args)?;
    let np = newton_polygon(&lp)?;
    let mut rep = Report::new("newton");
    field_lines(&mut rep, &field);
    rep.line("poly", &args.poly);
    rep.line("degree", lp.degree());
    let verts: Vec<String> = np
        .vertices
        .iter()
        .map(|(j, v)| format!("({j},{})", format_rat(v)))
        .collect();
    rep.line("vertices", format!("[{}]", verts.join(",")));
    rep.line("slopes", format_rats(&np.slopes));
    match np.first_slope() {
        Some(s) => rep.rat("first_slope", s),
        None => rep.line("first_slope", "none"),
    };
    Ok(rep.render())
}

fn run_slope_sample(args: &SlopeArgs) -> Result<String> {
    let field = load_field(args.q, &args.modulus)?;
    let set = parse_set_text(field.p(), &args.set)?;
    let cfg = config_with(args.ceiling, false);
    let s = first_slope_sample(&field, &set, args.budget, args.seed, &cfg)?;
    let mut rep = Report::new("slope-sample");
    field_lines(&mut rep, &field);
    rep.set("input", &set);
    rep.rat("density", &s.density);
    match s.space {
        Some(v) => rep.line("space", v),
        None => rep.line("space", "over 2^128"),
    };
    rep.line("budget", args.budget);
    rep.line("seed", args.seed);
    rep.line("tried", s.tried);
    rep.line("exhausted", yes_no(s.exhausted));
    rep.opt_rat("min_slope", &s.min_slope);
    rep.line("attained_by", s.attained);
    rep.line("attains_density", yes_no(s.attains_density));
    Ok(rep.render())
}

fn run_supersingular(args: &SetArgs) -> Result<String> {
    let set = load_set(args)?;
    let cfg = config_with(args.ceiling, args.validate);
    let s = supersingular_check(&set, &cfg)?;
    let mut rep = Report::new("supersingular");
    rep.line("p", set.p());
    rep.set("input", &set);
    density_lines(&mut rep, &s.density);
    rep.line("supersingular", yes_no(s.supersingular));
    Ok(rep.render())
}

fn run_genus_table(args: &GenusArgs) -> Result<String> {
    let cfg = config_with(args.ceiling, false);
    let rows = genus_slope_table(args.p, args.dmax, &cfg)?;
    let mut rep = Report::new("genus-table");
    rep.line("p", args.p);
    rep.line("dmax", args.dmax);
    for row in &rows {
        let window = row
            .window
            .map(|n| n.to_string())
            .unwrap_or_else(|| "-".into());
        let predicted = row
            .predicted
            .as_ref()
            .map(format_rat)
            .unwrap_or_else(|| "-".into());
        rep.line(
            "row",
            format!(
                "d={} genus={} window={} predicted={} density={}",
                row.d,
                row.genus,
                window,
                predicted,
                format_rat(&row.density)
            ),
        );
    }
    Ok(rep.render())
}

fn run_axkatz(args: &SystemArgs) -> Result<String> {
    let field = load_field(args.q, &args.modulus)?;
    let cfg = config_with(args.ceiling, false);
    let raws: Vec<_> = args
        .polys
        .iter()
        .map(|text| parse_polynomial(text, None))
        .collect::<Result<_>>()?;
    let nvars = raws.iter().map(|r: &pdensity::polyparse::RawPoly| r.nvars).max().unwrap_or(1);
    let system: Vec<Polynomial> = args
        .polys
        .iter()
        .map(|text| {
            let raw = parse_polynomial(text, Some(nvars))?;
            Polynomial::resolve(&raw, &field)
        })
        .collect::<Result<_>>()?;
    let a = ax_katz_bound(&field, &system, &cfg)?;
    let mut rep = Report::new("axkatz");
    field_lines(&mut rep, &field);
    for text in &args.polys {
        rep.line("poly", text);
    }
    rep.line("variables", nvars);
    rep.line("equations", system.len());
    rep.set("lifted_support", &a.lifted);
    rep.rat("lifted_density", &a.density.density);
    rep.rat("bound", &a.bound);
    rep.line("count", &a.count);
    rep.opt_rat("count_valuation", &a.count_valuation);
    rep.line("bound_holds", "yes");
    Ok(rep.render())
}

fn run_selftest() -> (String, bool) {
    let items = selftest::run(&Config::default());
    let mut out = String::new();
    let mut failed = 0usize;
    for item in &items {
        if item.passed {
            writeln!(out, "ok   {} ({})", item.name, item.note).unwrap();
        } else {
            failed += 1;
            writeln!(out, "FAIL {}: {}", item.name, item.note).unwrap();
        }
    }
    writeln!(out, "passed {}/{}", items.len() - failed, items.len()).unwrap();
    (out, failed == 0)
}

fn run(cmd: &Cmd) -> Result<String> {
    match cmd {
        Cmd::Density(args) => run_density(args),
        Cmd::Bounds(args) => run_bounds(args),
        Cmd::Tau(args) => run_tau(args),
        Cmd::Expsum(args) => run_expsum(args),
        Cmd::Tight(args) => run_tight(args),
        Cmd::Lpoly(args) => run_lpoly(args),
        Cmd::Newton(args) => run_newton(args),
        Cmd::SlopeSample(args) => run_slope_sample(args),
        Cmd::Supersingular(args) => run_supersingular(args),
        Cmd::GenusTable(args) => run_genus_table(args),
        Cmd::Axkatz(args) => run_axkatz(args),
        Cmd::Selftest => unreachable!("handled in main"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = pdensity::set_parallelism(jobs) {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    }
    if matches!(cli.cmd, Cmd::Selftest) {
        let (out, ok) = run_selftest();
        print!("{out}");
        return if ok { ExitCode::SUCCESS } else { ExitCode::from(4) };
    }
    match run(&cli.cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

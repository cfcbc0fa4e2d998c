//! Command-line front end: parse a datum (shipped fixture name or JSON
//! file), run the requested verification or computation, and print a
//! deterministic line-oriented report.
//!
//! Exit codes: 0 when every requested check passes, 1 when a mathematical
//! check fails (broken relations, disagreeing tables, inconsistent
//! fixed-point data), 2 on unusable input (parse errors, missing labels,
//! inapplicable operations, bad caps).

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hbmodel_core::equivariant::TruncatedModule;
use hbmodel_core::fixed_point::{cp2_weighted, relation_report, FixedPointData};
use hbmodel_core::fixtures;
use hbmodel_core::model::{
    canonical_extension, coexact_square, cohomology_cartan, cohomology_minimal, dbar_trichotomy,
    dhb_squares_to_zero, gamma_witness, homotopy_identities, minimal_model,
    neumann_expansion_identity, q_del_equals_del_p, transfer_on_general_element,
    twisted_product, IdentityOutcome, MinimalModel,
};
use hbmodel_core::rational::{fmt_rat, parse_rat, Rat};
use hbmodel_core::{Error, Report};

const DEFAULT_CAP: usize = 10;

#[derive(Parser)]
#[command(
    name = "hbmodel",
    about = "Exact workbench for minimal models of equivariant cohomology",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DatumArgs {
    /// Shipped fixture name or path to a datum file.
    datum: String,
    /// Polynomial weight cap (default from the file, else 10).
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a datum and run the operator-identity checks.
    Check(DatumArgs),
    /// Per-degree summary of the Hodge package.
    Hodge(DatumArgs),
    /// Transferred differential on the harmonic generators.
    Dhb(DatumArgs),
    /// Cohomology from the minimal model and from the brute-force module.
    Cohomology(DatumArgs),
    /// Canonical closed extension of a labeled harmonic class.
    Extend {
        #[command(flatten)]
        datum: DatumArgs,
        /// Basis label of the harmonic class to extend.
        #[arg(long)]
        class: String,
    },
    /// Twisted product of two labeled harmonic classes.
    Product {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Exhaustive identity sweep over the truncated module.
    Identities(DatumArgs),
    /// Ring-presentation coefficients from moment values.
    CpnCoeffs {
        /// Comma-separated moment values, e.g. -4,-1,5 or 1/2,3,-7/3.
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// Comma-separated equivariant Euler numbers (optional).
        #[arg(long, allow_hyphen_values = true)]
        euler: Option<String>,
        /// Highest averaged moment power to verify.
        #[arg(long, default_value_t = 8)]
        jmax: usize,
    },
    /// Weighted projective-plane example with closed-form cross-checks.
    CpnCp2 {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        /// Positive rational scale; the volume comes out as s^2.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// List the shipped fixtures.
    Examples,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.render());
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_failed_check() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cmd: Command) -> Result<Report, Error> {
    match cmd {
        Command::Check(args) => check_cmd(&args),
        Command::Hodge(args) => hodge_cmd(&args),
        Command::Dhb(args) => dhb_cmd(&args),
        Command::Cohomology(args) => cohomology_cmd(&args),
        Command::Extend { datum, class } => extend_cmd(&datum, &class),
        Command::Product { datum, left, right } => product_cmd(&datum, &left, &right),
        Command::Identities(args) => identities_cmd(&args),
        Command::CpnCoeffs { mu, euler, jmax } => cpn_coeffs_cmd(&mu, euler.as_deref(), jmax),
        Command::CpnCp2 { a, b, s } => cpn_cp2_cmd(a, b, &s),
        Command::Examples => Ok(examples_cmd()),
    }
}

/// Resolve a fixture name or file path into a validated module.
fn load_module(args: &DatumArgs) -> Result<(TruncatedModule, Report), Error> {
    let names: Vec<&str> = fixtures::fixture_names();
    let (datum, file_cap, source) = if names.contains(&args.datum.as_str())
        || args.datum == fixtures::BROKEN_FIXTURE.0
    {
        (fixtures::fixture(&args.datum)?, None, args.datum.clone())
    } else {
        let parsed = hbmodel_core::io::parse_datum_path(Path::new(&args.datum))?;
        (parsed.datum, parsed.cap, args.datum.clone())
    };
    let cap = args.cap.or(file_cap).unwrap_or(DEFAULT_CAP);
    let module = TruncatedModule::new(datum, cap)?;
    let mut report = Report::new();
    report.begin("inputs");
    report.kv("datum", &source);
    report.kv("cap", &cap.to_string());
    report.kv(
        "window",
        &format!(
            "operator identities exact for total degree <= {}; dimensions reported for total degree <= {}",
            module.window(),
            cap
        ),
    );
    Ok((module, report))
}

fn add_outcomes(report: &mut Report, outcomes: &[IdentityOutcome]) {
    for o in outcomes {
        report.check(&o.name, o.passed, o.witness.as_deref());
    }
}

fn check_cmd(args: &DatumArgs) -> Result<Report, Error> {
    let (module, mut report) = load_module(args)?;
    report.begin("validation");
    for line in &module.validation().checks {
        report.check(&line.name, line.passed, line.witness.as_deref());
    }
    report.kv(
        "product_operations",
        if module.product_enabled() {
            "enabled"
        } else {
            "disabled"
        },
    );
    if let Some(reason) = &module.validation().product_reason {
        report.kv("product_note", reason);
    }
    report.begin("operator-identities");
    let (pq_ok, pq_witness) = module.check_pq_zero();
    report.check("pq_qp_zero", pq_ok, pq_witness.first().map(String::as_str));
    let mm = minimal_model(&module)?;
    add_outcomes(&mut report, &homotopy_identities(&module, &mm));
    add_outcomes(&mut report, &dbar_trichotomy(&module));
    report.begin("result");
    report.kv(
        "status",
        if report.all_passed() { "pass" } else { "FAIL" },
    );
    Ok(report)
}

fn hodge_cmd(args: &DatumArgs) -> Result<Report, Error> {
    let (module, mut report) = load_module(args)?;
    let c = &module.datum().complex;
    let h = module.hodge();
    report.begin("hodge");
    for m in 0..c.len() {
        report.kv(
            &format!("degree {m}"),
            &format!(
                "dim {}, harmonic {}, boundary {}, coexact {}",
                c.dim(m),
                h.harmonic_basis[m].len(),
                h.boundary_basis[m].len(),
                h.coexact_basis[m].len()
            ),
        );
    }
    report.begin("identities");
    for (name, ok, witness) in hbmodel_core::hodge::identity_checks(c, h) {
        report.check(&name, ok, (!witness.is_empty()).then_some(witness.as_str()));
    }
    Ok(report)
}

fn dhb_cmd(args: &DatumArgs) -> Result<Report, Error> {
    let (module, mut report) = load_module(args)?;
    let mm = minimal_model(&module)?;
    report.begin("transferred-differential");
    describe_generators(&module, &mm, &mut report);
    report.check("dual_computation_agreement", true, None);
    report.kv("dhb_is_zero", if mm.dhb_is_zero { "true" } else { "false" });
    report.kv(
        "free_module",
        if mm.dhb_is_zero {
            "extensions certified up to the cap"
        } else {
            "transferred differential is nonzero"
        },
    );
    Ok(report)
}

fn describe_generators(module: &TruncatedModule, mm: &MinimalModel, report: &mut Report) {
    let c = &module.datum().complex;
    for deg in 0..c.len() {
        for (idx, value) in mm.dhb[deg].iter().enumerate() {
            let mut gen = hbmodel_core::ModuleElement::zero();
            gen.add_term(
                hbmodel_core::Monomial::one(module.datum().rank()),
                deg,
                module.hodge().harmonic_basis[deg][idx].clone(),
            );
            report.kv(
                &format!("d_HB[{}]", module.render_element(&gen)),
                &module.render_element(value),
            );
        }
    }
}

fn cohomology_cmd(args: &DatumArgs) -> Result<Report, Error> {
    let (module, mut report) = load_module(args)?;
    let mm = minimal_model(&module)?;
    let minimal = cohomology_minimal(&module, &mm);
    let cartan = cohomology_cartan(&module);
    report.begin("minimal-model");
    for (m, d) in minimal.dims.iter().enumerate() {
        report.kv(&format!("H^{m}"), &d.to_string());
    }
    report.begin("brute-force");
    for (m, d) in cartan.dims.iter().enumerate() {
        report.kv(&format!("H^{m}"), &d.to_string());
    }
    report.begin("agreement");
    report.check("tables_agree", minimal.dims == cartan.dims, None);
    Ok(report)
}

fn harmonic_class(
    module: &TruncatedModule,
    label: &str,
) -> Result<(usize, Vec<Rat>), Error> {
    let c = &module.datum().complex;
    let (deg, idx) = c
        .find_label(label)
        .ok_or_else(|| Error::Parse(format!("unknown basis label {label:?}")))?;
    let mut v = vec![Rat::from_integer(0.into()); c.dim(deg)];
    v[idx] = Rat::from_integer(1.into());
    let projected = module.hodge().harmonic_projector[deg].mul_vec(&v);
    if projected != v {
        return Err(Error::NotHarmonic {
            label: label.to_string(),
            degree: deg,
        });
    }
    Ok((deg, v))
}

fn extend_cmd(args: &DatumArgs, class: &str) -> Result<Report, Error> {
    let (module, mut report) = load_module(args)?;
    let mm = minimal_model(&module)?;
    let (deg, v) = harmonic_class(&module, class)?;
    let ext = canonical_extension(&module, &mm, deg, &v)?;
    report.begin("canonical-extension");
    report.kv("class", class);
    report.kv("degree", &deg.to_string());
    report.kv("extension", &module.render_element(&ext));
    report.check(
        "extension_closed",
        module.apply_dg(&ext).is_zero(),
        None,
    );
    Ok(report)
}

fn product_cmd(args: &DatumArgs, left: &str, right: &str) -> Result<Report, Error> {
    let (module, mut report) = load_module(args)?;
    let mm = minimal_model(&module)?;
    let (dl, vl) = harmonic_class(&module, left)?;
    let (dr, vr) = harmonic_class(&module, right)?;
    let prod = twisted_product(&module, &mm, (dl, &vl), (dr, &vr))?;
    report.begin("twisted-product");
    report.kv("left", left);
    report.kv("right", right);
    report.kv("product", &module.render_element(&prod));
    // the weight-zero check runs inside twisted_product; reaching this
    // point means it held
    report.check("weight_zero_is_harmonic_product", true, None);
    let gamma = gamma_witness(&module, &mm, (dl, &vl), (dr, &vr))?;
    report.kv("gamma_witness", &module.render_element(&gamma));
    report.check("gamma_substitution", true, None);
    Ok(report)
}

fn identities_cmd(args: &DatumArgs) -> Result<Report, Error> {
    let (module, mut report) = load_module(args)?;
    let mm = minimal_model(&module)?;
    report.begin("identities");
    let (pq_ok, pq_witness) = module.check_pq_zero();
    report.check("pq_qp_zero", pq_ok, pq_witness.first().map(String::as_str));
    let sq = coexact_square(&module);
    report.check(&sq.name, sq.passed, sq.witness.as_deref());
    add_outcomes(&mut report, &dbar_trichotomy(&module));
    add_outcomes(&mut report, &homotopy_identities(&module, &mm));
    let ne = neumann_expansion_identity(&module);
    report.check(&ne.name, ne.passed, ne.witness.as_deref());
    let qd = q_del_equals_del_p(&module);
    report.check(&qd.name, qd.passed, qd.witness.as_deref());
    let sq2 = dhb_squares_to_zero(&module, &mm);
    report.check(&sq2.name, sq2.passed, sq2.witness.as_deref());
    // the general-element transfer formula on every basis element in the window
    let degs = module.datum().t_degrees();
    let mut transfer_witness: Option<String> = None;
    for (mon, deg, idx) in module.basis() {
        if mon.weight(&degs) + deg > module.window() {
            continue;
        }
        let e = module.basis_element(&mon, deg, idx);
        if let Err(Error::IdentityFailed { witness, .. }) =
            transfer_on_general_element(&module, &e)
        {
            transfer_witness = Some(witness);
            break;
        }
    }
    report.check(
        "transfer_on_general_element",
        transfer_witness.is_none(),
        transfer_witness.as_deref(),
    );
    report.begin("result");
    report.kv(
        "status",
        if report.all_passed() { "pass" } else { "FAIL" },
    );
    Ok(report)
}

fn parse_rat_list(text: &str, key: &str) -> Result<Vec<Rat>, Error> {
    text.split(',')
        .map(|part| {
            parse_rat(part.trim())
                .map_err(|_| Error::Parse(format!("bad rational {part:?} under {key}")))
        })
        .collect()
}

fn cpn_coeffs_cmd(mu: &str, euler: Option<&str>, jmax: usize) -> Result<Report, Error> {
    let mu = parse_rat_list(mu, "--mu")?;
    let data = match euler {
        Some(e) => {
            let eps = parse_rat_list(e, "--euler")?;
            FixedPointData::isolated_with_euler(&mu, &eps)?
        }
        None => FixedPointData::isolated(&mu)?,
    };
    relation_report(&data, jmax)
}

fn cpn_cp2_cmd(a: i64, b: i64, s: &str) -> Result<Report, Error> {
    let scale = parse_rat(s)?;
    let rep = cp2_weighted(a, b, &scale)?;
    let mut report = Report::new();
    report.begin("weighted-projective-plane");
    report.kv("a", &a.to_string());
    report.kv("b", &b.to_string());
    report.kv("s", &fmt_rat(&rep.scale));
    report.kv(
        "mu",
        &rep.mu.iter().map(fmt_rat).collect::<Vec<_>>().join(","),
    );
    report.kv(
        "euler",
        &rep.euler.iter().map(fmt_rat).collect::<Vec<_>>().join(","),
    );
    report.kv("volume", &fmt_rat(&rep.volume));
    for (i, c) in rep.coeffs.0.iter().enumerate() {
        report.kv(&format!("c{}", i + 1), &fmt_rat(c));
    }
    report.begin("verification");
    report.check("volume_constancy", true, None);
    report.check("c2_closed_form", true, None);
    report.check("c3_closed_form", true, None);
    report.check("c3_factored_form", true, None);
    report.begin("ring-presentation");
    report.kv("relation", &rep.relation);
    Ok(report)
}

fn examples_cmd() -> Report {
    let mut report = Report::new();
    report.begin("fixtures");
    for (name, description) in fixtures::FIXTURES {
        report.kv(name, description);
    }
    report.begin("negative-control");
    let (name, description) = fixtures::BROKEN_FIXTURE;
    report.kv(name, description);
    report
}

//! Command-line front end.
//!
//! Subcommands: `construct`, `encode`, `verify-mrd`, `compare`, `bench`,
//! `examples`. Exit codes: 0 success, 1 a checked verdict came out false,
//! 2 invalid parameters, 3 construction failed validation, 4 I/O error,
//! 5 enumeration cap exceeded. `RANKFORGE_CAP` overrides the default
//! enumeration cap; an explicit `--cap` flag wins over both.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    complexity_report, render_csv, render_table, section5_preset, AnalysisError, ReportConfig,
    Scheme,
};
use crate::circmrd::{
    build_pq, code_set_equal, gabidulin_coincidence, generalized_gabidulin, identity_h_pair,
    instance_from_text, instance_to_text, message_from_digits, transform_codebook,
    CircCodeParams, CircError, CodeInstance, CoincidenceVerdict, EncodePath, PqChoice, Variant,
    DEFAULT_ENUMERATION_CAP,
};
use crate::field::{multiplicative_order, FieldElement, FieldSpec, Poly};
use crate::gabidulin::{dual_basis, Basis, GabidulinParams};
use crate::linalg::MatFq;
use crate::tables;

#[derive(Parser)]
#[command(
    name = "rankforge",
    about = "Construct, encode and cross-check rank-metric codes built from circular shifts",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code instance and write it to a file.
    Construct(ConstructArgs),
    /// Encode a message with a stored instance.
    Encode(EncodeArgs),
    /// Enumerate the codebook and report the minimum rank.
    #[command(name = "verify-mrd")]
    VerifyMrd(InstanceArgs),
    /// Run the equivalence checkers against a stored instance.
    Compare(InstanceArgs),
    /// Predicted-vs-measured encoder operation counts.
    Bench(BenchArgs),
    /// Regenerate a bundled worked example and diff it bit-exactly.
    Examples(ExamplesArgs),
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    q: u64,
    #[arg(long = "L", alias = "l")]
    l: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// Comma-separated shift exponents, one per column.
    #[arg(long)]
    exponents: String,
    /// c1 (Q = H_L) or c2 (Q = tau(C_L) G_L^T).
    #[arg(long)]
    variant: String,
    /// `a`, `b`, or a path to a file holding the P and Q matrices.
    #[arg(long)]
    pq: String,
    /// Output path for the instance file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Message digits, most significant block first (length J*k).
    #[arg(long)]
    message: String,
    /// generic | fast
    #[arg(long, default_value = "fast")]
    path: String,
    /// Write the codeword here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Enumeration cap (number of messages).
    #[arg(long)]
    cap: Option<u128>,
}

#[derive(Args)]
struct BenchArgs {
    /// Named preset; `section5` runs the L=5, n=4, k=3 comparison.
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated prime L values; runs every k <= n <= m_L pair.
    #[arg(long = "L", alias = "l")]
    l: Option<String>,
    /// Emit machine-readable rows instead of the aligned table.
    #[arg(long)]
    csv: bool,
    /// Append wall-clock nanoseconds to the table (non-deterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ExamplesArgs {
    /// ex1 | ex2 | ex3 | ex4 | ex5 | all
    name: String,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliFailure {
    pub code: i32,
    pub message: String,
}

impl CliFailure {
    fn verdict(msg: impl Into<String>) -> Self {
        CliFailure {
            code: 1,
            message: msg.into(),
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        CliFailure {
            code: 2,
            message: msg.into(),
        }
    }

    fn validation(msg: impl Into<String>) -> Self {
        CliFailure {
            code: 3,
            message: msg.into(),
        }
    }

    fn io(msg: impl Into<String>) -> Self {
        CliFailure {
            code: 4,
            message: msg.into(),
        }
    }

    fn cap(msg: impl Into<String>) -> Self {
        CliFailure {
            code: 5,
            message: msg.into(),
        }
    }
}

fn map_circ(e: CircError) -> CliFailure {
    match e {
        CircError::EnumerationTooLarge { .. } => CliFailure::cap(e.to_string()),
        other => CliFailure::usage(other.to_string()),
    }
}

fn map_analysis(e: AnalysisError) -> CliFailure {
    match e {
        AnalysisError::Circ(CircError::EnumerationTooLarge { .. }) => {
            CliFailure::cap(e.to_string())
        }
        other => CliFailure::usage(other.to_string()),
    }
}

fn effective_cap(flag: Option<u128>) -> u128 {
    if let Some(c) = flag {
        return c;
    }
    if let Ok(v) = std::env::var("RANKFORGE_CAP") {
        if let Ok(c) = v.trim().parse::<u128>() {
            return c;
        }
    }
    DEFAULT_ENUMERATION_CAP
}

pub fn run(cli: Cli) -> Result<(), CliFailure> {
    match cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Encode(args) => cmd_encode(args),
        Command::VerifyMrd(args) => cmd_verify_mrd(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Examples(args) => cmd_examples(&args.name),
    }
}

fn load_instance(path: &PathBuf) -> Result<CodeInstance, CliFailure> {
    let text = fs::read_to_string(path).map_err(|e| CliFailure::io(format!("{path:?}: {e}")))?;
    instance_from_text(&text).map_err(map_circ)
}

fn cmd_construct(args: ConstructArgs) -> Result<(), CliFailure> {
    let exponents: Result<Vec<usize>, _> = args
        .exponents
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect();
    let exponents =
        exponents.map_err(|_| CliFailure::usage(format!("bad exponents `{}`", args.exponents)))?;
    let variant = Variant::parse(&args.variant).map_err(map_circ)?;
    let pq = match args.pq.as_str() {
        "a" => PqChoice::InstanceA,
        "b" => PqChoice::InstanceB,
        path => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliFailure::io(format!("{path}: {e}")))?;
            let (p, q) = parse_pair_file(&text)
                .ok_or_else(|| CliFailure::usage(format!("{path}: expected two matrices")))?;
            PqChoice::User { p, q }
        }
    };
    let params = CircCodeParams::new(args.q, args.l, args.k, args.n, exponents, variant, pq)
        .map_err(map_circ)?;
    let inst = build_pq(params).map_err(map_circ)?;
    let report = crate::circmrd::validate_pq(&inst);
    if !report.all_passed() {
        return Err(CliFailure::validation(format!(
            "instance failed validation: {}",
            report.failures.join("; ")
        )));
    }
    fs::write(&args.out, instance_to_text(&inst))
        .map_err(|e| CliFailure::io(format!("{:?}: {e}", args.out)))?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn parse_pair_file(text: &str) -> Option<(MatFq, MatFq)> {
    // two matrix blocks back to back; the header row count delimits each
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let read_block = |lines: &mut dyn Iterator<Item = &str>| -> Option<String> {
        let header = lines.next()?;
        let rows: usize = header.split_whitespace().next()?.parse().ok()?;
        let mut block = String::from(header);
        block.push('\n');
        for _ in 0..rows {
            block.push_str(lines.next()?);
            block.push('\n');
        }
        Some(block)
    };
    let p = MatFq::parse_text(&read_block(&mut lines)?).ok()?;
    let q = MatFq::parse_text(&read_block(&mut lines)?).ok()?;
    Some((p, q))
}

fn cmd_encode(args: EncodeArgs) -> Result<(), CliFailure> {
    let inst = load_instance(&args.instance)?;
    let path = match args.path.as_str() {
        "fast" => EncodePath::Fast,
        "generic" => EncodePath::Generic,
        other => return Err(CliFailure::usage(format!("unknown path `{other}`"))),
    };
    let m = message_from_digits(&args.message, inst.params().q, inst.message_len())
        .map_err(map_circ)?;
    let w = inst.encode(&m, path).map_err(map_circ)?;
    let text = w.matrix.to_text();
    match args.out {
        Some(out) => fs::write(&out, text).map_err(|e| CliFailure::io(format!("{out:?}: {e}")))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_verify_mrd(args: InstanceArgs) -> Result<(), CliFailure> {
    let inst = load_instance(&args.instance)?;
    let report = inst.verify_mrd(effective_cap(args.cap)).map_err(map_circ)?;
    println!(
        "min_rank={} MRD={}",
        report.min_rank,
        if report.is_mrd { "yes" } else { "no" }
    );
    if !report.is_mrd {
        return Err(CliFailure::verdict(format!(
            "minimum rank {} falls short of n-k+1 = {}",
            report.min_rank, report.singleton_distance
        )));
    }
    Ok(())
}

fn cmd_compare(args: InstanceArgs) -> Result<(), CliFailure> {
    let inst = load_instance(&args.instance)?;
    let cap = effective_cap(args.cap);
    let mut any_false = false;

    // C2 = T C1 for the same underlying pair
    let params = inst.params().clone();
    let (c1_params, c2_params) = (
        CircCodeParams {
            variant: Variant::C1,
            ..params.clone()
        },
        CircCodeParams {
            variant: Variant::C2,
            ..params
        },
    );
    let c1 = build_pq(c1_params).map_err(map_circ)?;
    let c2 = build_pq(c2_params).map_err(map_circ)?;
    let c1_book = c1.codebook(cap).map_err(map_circ)?;
    let c2_book = c2.codebook(cap).map_err(map_circ)?;
    let bridged = transform_codebook(c1.t_matrix(), &c1_book);
    let bridge_ok = code_set_equal(&bridged, &c2_book);
    println!("c2-vs-t-c1: {}", if bridge_ok { "equal" } else { "UNEQUAL" });
    any_false |= !bridge_ok;

    // generalized sum-of-Gabidulin view, when the pair has the right shape
    match generalized_gabidulin(&inst) {
        Ok(gen) => {
            let book = gen.codebook(cap).map_err(map_circ)?;
            let own = inst.codebook(cap).map_err(map_circ)?;
            let ok = code_set_equal(&book, &own);
            println!("generalized: {}", if ok { "equal" } else { "UNEQUAL" });
            any_false |= !ok;
        }
        Err(CircError::PreconditionViolated(reason)) => {
            println!("generalized: not-applicable ({reason})");
        }
        Err(e) => return Err(map_circ(e)),
    }

    // coincidence with Gabidulin codes
    match gabidulin_coincidence(&inst, cap).map_err(map_circ)? {
        CoincidenceVerdict::Coincides { .. } => println!("gabidulin-coincidence: coincides"),
        CoincidenceVerdict::Differs { exponent, witness } => println!(
            "gabidulin-coincidence: differs (shift {exponent}, minimal polynomial {witness} is reducible)"
        ),
        CoincidenceVerdict::Undetermined { reason } => {
            println!("gabidulin-coincidence: undetermined ({reason})")
        }
    }

    if any_false {
        return Err(CliFailure::verdict("an equivalence check failed"));
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliFailure> {
    let configs = if let Some(preset) = &args.preset {
        match preset.as_str() {
            "section5" => section5_preset(),
            other => return Err(CliFailure::usage(format!("unknown preset `{other}`"))),
        }
    } else if let Some(ls) = &args.l {
        let mut configs = Vec::new();
        for tok in ls.split(',') {
            let l: usize = tok
                .trim()
                .parse()
                .map_err(|_| CliFailure::usage(format!("bad L `{tok}`")))?;
            let m_l = multiplicative_order(2, l as u64)
                .map_err(|e| CliFailure::usage(e.to_string()))? as usize;
            for n in 1..=m_l {
                for k in 1..=n {
                    for scheme in [Scheme::C1, Scheme::C2] {
                        configs.push(ReportConfig { scheme, l, n, k });
                    }
                }
            }
        }
        configs
    } else {
        return Err(CliFailure::usage("bench needs --preset or --L"));
    };
    let rows = complexity_report(&configs).map_err(map_analysis)?;
    if args.csv {
        print!("{}", render_csv(&rows));
    } else {
        print!("{}", render_table(&rows, args.timing));
    }
    if rows.iter().any(|r| !r.counts_match()) {
        return Err(CliFailure::verdict("measured counts diverge from formulas"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Worked examples
// ---------------------------------------------------------------------------

fn cmd_examples(name: &str) -> Result<(), CliFailure> {
    match name {
        "ex1" => example1(),
        "ex2" => example2(),
        "ex3" => example3(),
        "ex4" => example4(),
        "ex5" => example5(),
        "all" => {
            example1()?;
            example2()?;
            example3()?;
            example4()?;
            example5()
        }
        other => Err(CliFailure::usage(format!(
            "unknown example `{other}` (expected ex1..ex5 or all)"
        ))),
    }
}

fn diff_tables(label: &str, got: &[MatFq], expect: &[MatFq]) -> Result<(), CliFailure> {
    if got.len() != expect.len() {
        return Err(CliFailure::verdict(format!(
            "{label}: {} codewords, expected {}",
            got.len(),
            expect.len()
        )));
    }
    for (i, (g, e)) in got.iter().zip(expect).enumerate() {
        if g != e {
            return Err(CliFailure::verdict(format!(
                "{label}: first difference at codeword {i}\nexpected:\n{e}got:\n{g}"
            )));
        }
    }
    println!("ok: {label} ({} codewords)", got.len());
    Ok(())
}

fn check(label: &str, ok: bool) -> Result<(), CliFailure> {
    if !ok {
        return Err(CliFailure::verdict(format!("{label}: FAILED")));
    }
    println!("ok: {label}");
    Ok(())
}

/// F_16 on the printed modulus, with the message order used by the tables:
/// zero first, then ascending powers of the generator.
fn f16_message_order() -> (FieldSpec, Vec<FieldElement>) {
    let fs = FieldSpec::new(2, 4, Some(Poly::from_coeffs(&[1, 1, 0, 0, 1]))).expect("F_16");
    let mut order = vec![fs.zero()];
    order.extend((0..15).map(|e| fs.pow(fs.generator(), e)));
    (fs, order)
}

fn example1() -> Result<(), CliFailure> {
    let (fs, messages) = f16_message_order();
    let a = fs.generator().clone();
    let basis = Basis::new(&fs, (0..4).map(|i| fs.pow(&a, i)).collect())
        .expect("polynomial basis");
    let betas: Vec<FieldElement> = (1..=4).map(|e| fs.pow(&a, e)).collect();
    let params = GabidulinParams::new(fs.clone(), betas, 1, basis.clone())
        .map_err(|e| CliFailure::usage(e.to_string()))?;
    let expect: Vec<MatFq> = tables::EX1_MATRIX_CODEBOOK
        .iter()
        .map(|rows| tables::mat_from_rows(2, rows))
        .collect();

    let matrix_rep: Vec<MatFq> = messages
        .iter()
        .map(|u| params.encode_matrix(&[u.clone()]).expect("encode"))
        .collect();
    diff_tables("ex1 matrix-representation table", &matrix_rep, &expect)?;

    let dual = dual_basis(&fs, &basis).map_err(|e| CliFailure::usage(e.to_string()))?;
    let counterpart: Vec<MatFq> = messages
        .iter()
        .map(|u| params.encode_counterpart(&[u.clone()], &dual).expect("encode"))
        .collect();
    diff_tables("ex1 dual-basis counterpart table", &counterpart, &expect)?;

    // vector codewords are the shifted power windows [a^(e+1) .. a^(e+4)]
    let mut vectors_ok = true;
    for e in 0..15u128 {
        let v = params.encode_vector(&[fs.pow(&a, e)]).expect("encode");
        let want: Vec<FieldElement> = (1..=4).map(|t| fs.pow(&a, e + t)).collect();
        if v != want {
            vectors_ok = false;
        }
    }
    check("ex1 vector codewords", vectors_ok)?;
    check(
        "ex1 representations coincide as sets",
        params
            .check_prop1(DEFAULT_ENUMERATION_CAP)
            .map_err(|e| CliFailure::usage(e.to_string()))?,
    )
}

fn ex2_instance() -> Result<CodeInstance, CliFailure> {
    let (g, h) = identity_h_pair(2, 7).map_err(map_circ)?;
    let params = CircCodeParams::new(
        2,
        7,
        1,
        3,
        vec![0, 1, 2],
        Variant::C1,
        PqChoice::User { p: g, q: h },
    )
    .map_err(map_circ)?;
    build_pq(params).map_err(map_circ)
}

fn ex3_instance() -> Result<CodeInstance, CliFailure> {
    let params =
        CircCodeParams::new(2, 7, 1, 3, vec![0, 1, 2], Variant::C2, PqChoice::InstanceA)
            .map_err(map_circ)?;
    build_pq(params).map_err(map_circ)
}

/// Generator tables list the codeword of each unit message, last position
/// first.
fn generator_table(inst: &CodeInstance) -> Vec<MatFq> {
    let d = inst.message_len();
    (0..d)
        .map(|i| {
            let mut m = vec![0; d];
            m[d - 1 - i] = 1;
            inst.encode(&m, EncodePath::Fast).expect("unit").matrix
        })
        .collect()
}

fn example2() -> Result<(), CliFailure> {
    let inst = ex2_instance()?;
    check(
        "ex2 pair shape (G = [I 1], H = [I 0]^T)",
        *inst.g_matrix() == MatFq::identity(6, 2).hstack(&MatFq::ones(6, 1, 2))
            && *inst.h_matrix()
                == MatFq::identity(6, 2)
                    .hstack(&MatFq::zeros(6, 1, 2))
                    .transpose(),
    )?;
    let expect: Vec<MatFq> = tables::EX2_GENERATORS
        .iter()
        .map(|rows| tables::mat_from_rows(2, rows))
        .collect();
    diff_tables("ex2 generator table", &generator_table(&inst), &expect)?;
    let report = inst.verify_mrd(DEFAULT_ENUMERATION_CAP).map_err(map_circ)?;
    check("ex2 full-rank enumeration (min rank 3 over 63)", report.min_rank == 3)
}

fn example3() -> Result<(), CliFailure> {
    let inst = ex3_instance()?;
    let expect: Vec<MatFq> = tables::EX3_GENERATORS
        .iter()
        .map(|rows| tables::mat_from_rows(2, rows))
        .collect();
    diff_tables("ex3 generator table", &generator_table(&inst), &expect)?;
    let report = inst.verify_mrd(DEFAULT_ENUMERATION_CAP).map_err(map_circ)?;
    check("ex3 full-rank enumeration (min rank 3 over 63)", report.min_rank == 3)?;

    // the bridge back to the C1 variant of the same pair
    let c1 = build_pq(CircCodeParams {
        variant: Variant::C1,
        ..inst.params().clone()
    })
    .map_err(map_circ)?;
    let c1_book = c1.codebook(1 << 10).map_err(map_circ)?;
    let c2_book = inst.codebook(1 << 10).map_err(map_circ)?;
    check(
        "ex3 codebook equals T times the c1 codebook",
        code_set_equal(&transform_codebook(c1.t_matrix(), &c1_book), &c2_book),
    )?;

    // generator-level combination: second table = first table recombined
    let ex2 = ex2_instance()?;
    let a_table = generator_table(&ex2);
    let pattern = tables::mat_from_rows(2, &tables::EX3_FROM_EX2_PATTERN);
    let mut combo_ok = true;
    for col in 0..6 {
        let mut acc = MatFq::zeros(6, 3, 2);
        for (i, ai) in a_table.iter().enumerate() {
            if pattern[(i, col)] == 1 {
                acc = acc.add(ai);
            }
        }
        if acc != expect[col] {
            combo_ok = false;
        }
    }
    check("ex3 generators recombine from ex2 generators", combo_ok)
}

fn example4() -> Result<(), CliFailure> {
    let (g, h) = identity_h_pair(2, 5).map_err(map_circ)?;
    let mk = |variant| -> Result<CodeInstance, CliFailure> {
        build_pq(
            CircCodeParams::new(
                2,
                5,
                1,
                4,
                vec![0, 1, 2, 3],
                variant,
                PqChoice::User {
                    p: g.clone(),
                    q: h.clone(),
                },
            )
            .map_err(map_circ)?,
        )
        .map_err(map_circ)
    };
    let c1 = mk(Variant::C1)?;
    let c2 = mk(Variant::C2)?;

    check(
        "ex4 T matrix",
        *c1.t_matrix() == tables::mat_from_rows(2, &tables::EX4_T),
    )?;

    let fs = c1.field().clone();
    let a = fs.generator().clone();
    let u1 = c1.u_column(1);
    let expect_u1: Vec<FieldElement> =
        vec![fs.pow(&a, 11), fs.pow(&a, 10), fs.pow(&a, 4), fs.pow(&a, 8)];
    check("ex4 u_1 column", u1 == expect_u1)?;

    let expect_c1: Vec<MatFq> = tables::EX4_C1_CODEBOOK
        .iter()
        .map(|rows| tables::mat_from_rows(2, rows))
        .collect();
    let c1_book = c1.codebook(1 << 10).map_err(map_circ)?;
    diff_tables("ex4 c1 codeword table", &c1_book, &expect_c1)?;
    let expect_c2: Vec<MatFq> = tables::EX4_C2_CODEBOOK
        .iter()
        .map(|rows| tables::mat_from_rows(2, rows))
        .collect();
    let c2_book = c2.codebook(1 << 10).map_err(map_circ)?;
    diff_tables("ex4 c2 codeword table", &c2_book, &expect_c2)?;

    // Gabidulin side: evaluation points 1, b, b^2, b^3 on the 5th root b
    let beta = c1.beta().clone();
    let betas: Vec<FieldElement> = (0..4).map(|e| fs.pow(&beta, e)).collect();
    let basis_u1 = Basis::new(&fs, u1).map_err(|e| CliFailure::usage(e.to_string()))?;
    let gab = GabidulinParams::new(fs.clone(), betas, 1, basis_u1.clone())
        .map_err(|e| CliFailure::usage(e.to_string()))?;
    let (_, messages) = f16_message_order();

    let m1: Vec<MatFq> = messages
        .iter()
        .map(|u| gab.encode_counterpart(&[u.clone()], &basis_u1).expect("encode"))
        .collect();
    let expect_m1: Vec<MatFq> = tables::EX4_GABIDULIN_U1_CODEBOOK
        .iter()
        .map(|rows| tables::mat_from_rows(2, rows))
        .collect();
    diff_tables("ex4 gabidulin table on u_1", &m1, &expect_m1)?;

    let t_inv = c1.t_matrix().inverse().expect("T is invertible");
    let bprime_elems: Vec<FieldElement> = (0..4)
        .map(|c| {
            let mut acc = fs.zero();
            for (r, b) in basis_u1.elements().iter().enumerate() {
                if t_inv[(r, c)] == 1 {
                    acc = fs.add(&acc, b);
                }
            }
            acc
        })
        .collect();
    let expect_bprime: Vec<FieldElement> = [1u128, 4, 7, 10].iter().map(|&e| fs.pow(&a, e)).collect();
    check("ex4 transformed basis u_1 T^-1", bprime_elems == expect_bprime)?;
    let basis_bprime = Basis::new(&fs, bprime_elems).map_err(|e| CliFailure::usage(e.to_string()))?;
    let m2: Vec<MatFq> = messages
        .iter()
        .map(|u| gab.encode_counterpart(&[u.clone()], &basis_bprime).expect("encode"))
        .collect();
    let expect_m2: Vec<MatFq> = tables::EX4_GABIDULIN_DUAL_CODEBOOK
        .iter()
        .map(|rows| tables::mat_from_rows(2, rows))
        .collect();
    diff_tables("ex4 gabidulin table on u_1 T^-1", &m2, &expect_m2)?;

    check("ex4 c1 coincides with the u_1 table as sets", code_set_equal(&c1_book, &m1))?;
    check("ex4 c2 coincides with the transformed table as sets", code_set_equal(&c2_book, &m2))?;
    check(
        "ex4 coincidence verdicts",
        matches!(
            gabidulin_coincidence(&c1, 1 << 10).map_err(map_circ)?,
            CoincidenceVerdict::Coincides { .. }
        ) && matches!(
            gabidulin_coincidence(&c2, 1 << 10).map_err(map_circ)?,
            CoincidenceVerdict::Coincides { .. }
        ),
    )?;
    let report = c1.verify_mrd(1 << 10).map_err(map_circ)?;
    check("ex4 full-rank enumeration (min rank 4 over 15)", report.min_rank == 4)
}

fn example5() -> Result<(), CliFailure> {
    let inst = ex2_instance()?;
    let gen = generalized_gabidulin(&inst).map_err(map_circ)?;
    let fs = inst.field().clone();
    let beta = inst.beta().clone();

    // lambda order: zero, then ascending powers of the 7th root
    let mut lambdas = vec![fs.zero()];
    lambdas.extend((0..7).map(|e| fs.pow(&beta, e)));

    let stack = |active: usize| -> Vec<MatFq> {
        lambdas
            .iter()
            .map(|lam| {
                let mut lam_rows = vec![vec![fs.zero()], vec![fs.zero()]];
                lam_rows[active][0] = lam.clone();
                gen.codeword_for_lambdas(&lam_rows)
            })
            .collect()
    };
    let expect1: Vec<MatFq> = tables::EX5_STACK1
        .iter()
        .map(|rows| tables::mat_from_rows(2, rows))
        .collect();
    diff_tables("ex5 first summed stack", &stack(0), &expect1)?;
    let expect2: Vec<MatFq> = tables::EX5_STACK2
        .iter()
        .map(|rows| tables::mat_from_rows(2, rows))
        .collect();
    diff_tables("ex5 second summed stack", &stack(1), &expect2)?;

    let book = gen.codebook(1 << 10).map_err(map_circ)?;
    let ex2_book = inst.codebook(1 << 10).map_err(map_circ)?;
    check("ex5 codebook equals the ex2 codebook (64 codewords)", code_set_equal(&book, &ex2_book))?;
    let ex3 = ex3_instance()?;
    let ex3_book = ex3.codebook(1 << 10).map_err(map_circ)?;
    check("ex5 codebook equals the ex3 codebook (64 codewords)", code_set_equal(&book, &ex3_book))?;

    // nonzero stack codewords recombine from the ex2 generators
    let a_table = generator_table(&inst);
    for (label, pattern, expect) in [
        ("ex5 stack1 recombines from ex2 generators", tables::EX5_STACK1_PATTERN, &expect1),
        ("ex5 stack2 recombines from ex2 generators", tables::EX5_STACK2_PATTERN, &expect2),
    ] {
        let pat = tables::mat_from_rows(2, &pattern);
        let mut ok = true;
        for col in 0..7 {
            let mut acc = MatFq::zeros(6, 3, 2);
            for (i, ai) in a_table.iter().enumerate() {
                if pat[(i, col)] == 1 {
                    acc = acc.add(ai);
                }
            }
            if acc != expect[col + 1] {
                ok = false;
            }
        }
        check(label, ok)?;
    }
    Ok(())
}

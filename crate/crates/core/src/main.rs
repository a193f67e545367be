use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use frobhecke::category::{Morphism, ObjectWord, PathElement, Session};
use frobhecke::cyciso::cyclotomic_iso;
use frobhecke::cyclo::{stabilized_quotient_dim, Cyclotomic};
use frobhecke::frobenius::{builtin, change_trace, FrobeniusAlgebra, RawAlgebra};
use frobhecke::parse::{fmt_diagram, fmt_object_word, fmt_poly, fmt_wreath, parse_diagram, parse_object, parse_poly, parse_wreath};
use frobhecke::poly::{PinLabel, PolyAlg, PolyElement, Variant};
use frobhecke::rational::{fmt_q, parse_q, Q};
use frobhecke::sample::{Sampler, GENERATOR};
use frobhecke::verify::{run_verify, VerifyConfig};
use frobhecke::wreath::WreathAlg;
use frobhecke::Error;

#[derive(Parser)]
#[command(name = "frobhecke", version, about = "Exact computations in Frobenius Hecke and affine wreath product algebras")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Opts {
    /// Algebra JSON file or builtin name (ground, clifford_even, clifford_odd, grassmann, cyclicN).
    #[arg(long, global = true, default_value = "ground")]
    algebra: String,
    /// Use the quantum variant (Laurent dots, Hecke generators).
    #[arg(long, global = true)]
    quantum: bool,
    /// Hecke parameter of the quantum variant, as p/q.
    #[arg(long, global = true, default_value = "1")]
    z: String,
    /// Number of black strands.
    #[arg(long, global = true, default_value_t = 1)]
    d: usize,
    /// Pin labels; repeat the flag or separate with commas.
    #[arg(long = "Q", global = true, value_delimiter = ',')]
    labels: Vec<String>,
    /// Number of strands; inferred from the expressions when omitted.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Frobenius superalgebra data.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Polynomial superalgebra computations.
    #[command(subcommand)]
    Pol(PolCmd),
    /// Affine wreath product algebra computations.
    #[command(subcommand)]
    Wreath(WreathCmd),
    /// Higher-level diagram category computations.
    #[command(subcommand)]
    Cat(CatCmd),
    /// Run the verification suites for one algebra.
    Verify,
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Check the axioms and print the dimension, trace parity and symmetry.
    Validate { file: Option<String> },
    /// Print the left dual basis.
    Dual { file: Option<String> },
    /// Print the Nakayama automorphism.
    Nakayama { file: Option<String> },
    /// Replace the trace and print the element relating old and new trace.
    ChangeTrace {
        file: Option<String>,
        /// New trace values on the basis, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        trace: Vec<String>,
    },
}

#[derive(Subcommand)]
enum PolCmd {
    Mul { a: String, b: String },
    /// Demazure operator on strands i, i+1 (1-based).
    Demazure {
        #[arg(long)]
        i: usize,
        f: String,
    },
    /// Quantum divided difference on strands i, i+1 (1-based).
    Delta {
        #[arg(long)]
        i: usize,
        f: String,
    },
    /// Teleporter between strands i and j (1-based).
    Teleporter {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
}

#[derive(Subcommand)]
enum WreathCmd {
    Mul { a: String, b: String },
    /// Decide whether an element is central.
    Center { u: String },
    /// Reduce an element modulo the level-zero cyclotomic ideal of the first --Q.
    Cyclo { u: String },
    /// Dimension of the level-zero cyclotomic quotient, by brute force in growing degree windows.
    DimOracle {
        #[arg(long, default_value_t = 2)]
        bound: i32,
        #[arg(long, default_value_t = 7)]
        max_bound: i32,
    },
}

#[derive(Subcommand)]
enum CatCmd {
    /// List the objects with d black strands and one red strand per label.
    Shuffles,
    /// Normal form of the composite of two diagram words, the first applied first.
    Compose {
        #[arg(long)]
        src: String,
        first: String,
        second: String,
    },
    /// Image of a diagram word in the affine wreath product algebra.
    Phi {
        #[arg(long)]
        src: String,
        diagram: String,
    },
    /// Normal form of a diagram word.
    Normalize {
        #[arg(long)]
        src: String,
        diagram: String,
    },
    /// Product of path algebra elements given as `OBJ: DIAGRAM` blocks separated by `|`; the right factor acts first.
    PathMul { left: String, right: String },
    /// Compare the level-one corner quotient with the level-zero cyclotomic quotient.
    CycloIso {
        #[arg(long, default_value_t = 3)]
        bound: i32,
        #[arg(long, default_value_t = 7)]
        max_bound: i32,
    },
    /// Decide whether the diagonal path element of a d-strand polynomial is central.
    Center { f: String },
}

type Res<T> = Result<T, Error>;

/// Text and JSON renderings of one result.
struct Out {
    text: String,
    json: Value,
    ok: bool,
}

impl Out {
    fn new(text: String, json: Value) -> Self {
        Out { text, json, ok: true }
    }
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn load_algebra(source: &str) -> Res<FrobeniusAlgebra> {
    if !Path::new(source).exists() {
        if let Some(a) = builtin::by_name(source) {
            return Ok(a);
        }
    }
    let text = std::fs::read_to_string(source).map_err(|e| input(format!("cannot read {source}: {e}")))?;
    let raw: RawAlgebra = serde_json::from_str(&text).map_err(|e| input(format!("malformed algebra JSON in {source}: {e}")))?;
    FrobeniusAlgebra::validate(&raw)
}

fn parse_z(o: &Opts) -> Res<Q> {
    parse_q(&o.z).ok_or_else(|| input(format!("bad rational `{}` for --z", o.z)))
}

fn variant(o: &Opts) -> Variant {
    if o.quantum {
        Variant::Quantum
    } else {
        Variant::Degenerate
    }
}

/// Largest strand index mentioned by dots `x3`, `X3` or crossings `s2`, `T2`, and token arity.
fn infer_n(texts: &[&str]) -> usize {
    let mut n = 1;
    for t in texts {
        let b = t.as_bytes();
        let mut depth = 0;
        let mut bars = 0;
        for (k, &c) in b.iter().enumerate() {
            match c {
                b'(' => {
                    depth += 1;
                    bars = 0;
                }
                b'|' if depth > 0 => bars += 1,
                b')' => {
                    depth -= 1;
                    n = n.max(bars + 1);
                }
                b'x' | b'X' | b's' | b'T' if depth == 0 => {
                    let digits: String = b[k + 1..].iter().take_while(|d| d.is_ascii_digit()).map(|&d| d as char).collect();
                    if let Ok(i) = digits.parse::<usize>() {
                        n = n.max(if c == b's' || c == b'T' { i + 1 } else { i });
                    }
                }
                _ => {}
            }
        }
    }
    n
}

fn strands(o: &Opts, texts: &[&str]) -> usize {
    o.n.unwrap_or_else(|| infer_n(texts))
}

fn one_strand(alg: &Arc<FrobeniusAlgebra>, o: &Opts) -> PolyAlg {
    PolyAlg::new(alg.clone(), 1, variant(o))
}

fn raw_labels(alg: &Arc<FrobeniusAlgebra>, o: &Opts) -> Res<Vec<PolyElement>> {
    let one = one_strand(alg, o);
    o.labels.iter().map(|t| parse_poly(&one, t)).collect()
}

fn pin_labels(alg: &Arc<FrobeniusAlgebra>, o: &Opts) -> Res<Vec<PinLabel>> {
    if o.labels.is_empty() {
        return Err(input("at least one pin label is required (--Q)"));
    }
    let one = one_strand(alg, o);
    raw_labels(alg, o)?.iter().map(|f| one.pin_label(f)).collect()
}

fn session(alg: &Arc<FrobeniusAlgebra>, o: &Opts) -> Res<Session> {
    Session::new(alg.clone(), o.d, variant(o), parse_z(o)?, pin_labels(alg, o)?)
}

fn fmt_morphism(s: &Session, m: &Morphism) -> String {
    format!("{} -> {} : {}", fmt_object_word(&m.src), fmt_object_word(&m.tgt), fmt_wreath(&s.wa, &m.body))
}

fn morphism_json(s: &Session, m: &Morphism) -> Value {
    json!({ "src": fmt_object_word(&m.src), "tgt": fmt_object_word(&m.tgt), "body": fmt_wreath(&s.wa, &m.body) })
}

fn fmt_path(s: &Session, u: &PathElement) -> String {
    if u.blocks.is_empty() {
        return "0".into();
    }
    u.blocks.values().map(|m| fmt_morphism(s, m)).collect::<Vec<_>>().join("\n")
}

/// `OBJ: DIAGRAM | OBJ: DIAGRAM`; an empty diagram is the identity.
fn parse_path(s: &Session, text: &str) -> Res<PathElement> {
    let mut out = PathElement::default();
    for block in text.split('|') {
        let (obj, diag) = block.split_once(':').ok_or_else(|| input(format!("path block `{}` needs the form OBJ: DIAGRAM", block.trim())))?;
        let src = parse_object(obj)?;
        s.check_object(&src)?;
        let word = if diag.trim().is_empty() { Vec::new() } else { parse_diagram(s.wa.alg(), diag)? };
        out = out.add(&PathElement::from_morphism(s.normalize_diagram(&src, &word)?));
    }
    Ok(out)
}

fn src_object(s: &Session, text: &str) -> Res<ObjectWord> {
    let w = parse_object(text)?;
    s.check_object(&w)?;
    Ok(w)
}

fn algebra_cmd(cmd: &AlgebraCmd, o: &Opts) -> Res<Out> {
    let file = match cmd {
        AlgebraCmd::Validate { file } | AlgebraCmd::Dual { file } | AlgebraCmd::Nakayama { file } | AlgebraCmd::ChangeTrace { file, .. } => file,
    };
    let alg = load_algebra(file.as_deref().unwrap_or(&o.algebra))?;
    let m = alg.dim();
    Ok(match cmd {
        AlgebraCmd::Validate { .. } => {
            let text = format!(
                "{}: valid Frobenius superalgebra\ndim {m}\ntrace parity {}\nsymmetric {}",
                alg.name, alg.eps, alg.symmetric
            );
            Out::new(text, json!({ "name": alg.name, "valid": true, "dim": m, "eps": alg.eps, "symmetric": alg.symmetric }))
        }
        AlgebraCmd::Dual { .. } => {
            let rows: Vec<(String, String)> = (0..m).map(|i| (alg.labels[i].clone(), alg.fmt_elem(alg.dual_basis(i)))).collect();
            let text = rows.iter().map(|(b, d)| format!("{b}^v = {d}")).collect::<Vec<_>>().join("\n");
            let map: serde_json::Map<String, Value> = rows.into_iter().map(|(b, d)| (b, Value::String(d))).collect();
            Out::new(text, json!({ "dual": map }))
        }
        AlgebraCmd::Nakayama { .. } => {
            let rows: Vec<(String, String)> = (0..m).map(|i| (alg.labels[i].clone(), alg.fmt_elem(&alg.psi(&alg.basis(i))))).collect();
            let mut text = rows.iter().map(|(b, d)| format!("psi({b}) = {d}")).collect::<Vec<_>>().join("\n");
            let _ = write!(text, "\nsymmetric {}", alg.symmetric);
            let map: serde_json::Map<String, Value> = rows.into_iter().map(|(b, d)| (b, Value::String(d))).collect();
            Out::new(text, json!({ "nakayama": map, "symmetric": alg.symmetric }))
        }
        AlgebraCmd::ChangeTrace { trace, .. } => {
            let t: Vec<Q> = trace
                .iter()
                .map(|s| parse_q(s.trim()).ok_or_else(|| input(format!("bad rational `{s}` in --trace"))))
                .collect::<Res<_>>()?;
            if t.len() != m {
                return Err(input(format!("--trace needs {m} values, got {}", t.len())));
            }
            let c = change_trace(&alg, &t)?;
            let (u, ui) = (alg.fmt_elem(&c.u), alg.fmt_elem(&c.u_inv));
            Out::new(format!("u = {u}\nu^-1 = {ui}\ntrace parity {}", c.eps_new), json!({ "u": u, "u_inv": ui, "eps": c.eps_new }))
        }
    })
}

fn pol_cmd(cmd: &PolCmd, alg: &Arc<FrobeniusAlgebra>, o: &Opts) -> Res<Out> {
    let v = variant(o);
    let poly_for = |texts: &[&str], min: usize| PolyAlg::new(alg.clone(), strands(o, texts).max(min), v);
    let index = |i: usize, n: usize| -> Res<usize> {
        if i == 0 || i >= n {
            return Err(Error::IndexOutOfRange(format!("i = {i} needs 1 <= i < n = {n}")));
        }
        Ok(i - 1)
    };
    let (p, f) = match cmd {
        PolCmd::Mul { a, b } => {
            let p = poly_for(&[a, b], 1);
            let f = p.try_mul(&parse_poly(&p, a)?, &parse_poly(&p, b)?)?;
            (p, f)
        }
        PolCmd::Demazure { i, f } => {
            let p = poly_for(&[f], i + 1);
            let r = p.demazure(index(*i, p.n)?, &parse_poly(&p, f)?)?;
            (p, r)
        }
        PolCmd::Delta { i, f } => {
            let p = poly_for(&[f], i + 1);
            let r = p.delta(index(*i, p.n)?, &parse_poly(&p, f)?)?;
            (p, r)
        }
        PolCmd::Teleporter { i, j } => {
            let p = PolyAlg::new(alg.clone(), o.n.unwrap_or(0).max(*i).max(*j), v);
            if *i == 0 || *j == 0 {
                return Err(Error::IndexOutOfRange("strands are numbered from 1".into()));
            }
            let r = p.teleporter(i - 1, j - 1)?;
            (p, r)
        }
    };
    let s = fmt_poly(&p, &f);
    Ok(Out::new(s.clone(), json!({ "n": p.n, "result": s })))
}

fn wreath_cmd(cmd: &WreathCmd, alg: &Arc<FrobeniusAlgebra>, o: &Opts) -> Res<Out> {
    let texts: Vec<&str> = match cmd {
        WreathCmd::Mul { a, b } => vec![a, b],
        WreathCmd::Center { u } | WreathCmd::Cyclo { u } => vec![u],
        WreathCmd::DimOracle { .. } => vec![],
    };
    let n = match cmd {
        WreathCmd::DimOracle { .. } => o.n.unwrap_or(o.d),
        _ => strands(o, &texts),
    };
    let wa = WreathAlg::new(alg.clone(), n, variant(o), parse_z(o)?)?;
    let cyclotomic = || -> Res<Cyclotomic> {
        let f = raw_labels(alg, o)?.into_iter().next().ok_or_else(|| input("a cyclotomic quotient needs --Q"))?;
        Cyclotomic::new(wa.clone(), one_strand(alg, o).cyclotomic_label(&f)?)
    };
    Ok(match cmd {
        WreathCmd::Mul { a, b } => {
            let r = fmt_wreath(&wa, &wa.mul(&parse_wreath(&wa, a)?, &parse_wreath(&wa, b)?));
            Out::new(r.clone(), json!({ "n": n, "result": r }))
        }
        WreathCmd::Center { u } => {
            let c = wa.is_central(&parse_wreath(&wa, u)?);
            Out::new(format!("central {c}"), json!({ "n": n, "central": c }))
        }
        WreathCmd::Cyclo { u } => {
            let cy = cyclotomic()?;
            let r = fmt_wreath(&wa, &cy.reduce(&parse_wreath(&wa, u)?)?);
            Out::new(r.clone(), json!({ "n": n, "result": r }))
        }
        WreathCmd::DimOracle { bound, max_bound } => {
            let cy = cyclotomic()?;
            let rep = stabilized_quotient_dim(&cy, *bound, *max_bound);
            let text = format!(
                "dimension {} at bound {} (next bound gives {}), {}",
                rep.dim,
                rep.bound,
                rep.next_dim,
                if rep.stabilized { "stabilized" } else { "not stabilized" }
            );
            let mut out = Out::new(
                text,
                json!({ "n": n, "dim": rep.dim, "bound": rep.bound, "next_dim": rep.next_dim, "stabilized": rep.stabilized, "reduced_words": cy.reduced_basis_size() }),
            );
            out.ok = rep.stabilized;
            out
        }
    })
}

fn cat_cmd(cmd: &CatCmd, alg: &Arc<FrobeniusAlgebra>, o: &Opts) -> Res<Out> {
    let s = session(alg, o)?;
    Ok(match cmd {
        CatCmd::Shuffles => {
            let objs: Vec<String> = s.shuffles().iter().map(|w| fmt_object_word(w)).collect();
            Out::new(objs.join("\n"), json!({ "objects": objs }))
        }
        CatCmd::Compose { src, first, second } => {
            let src = src_object(&s, src)?;
            let f = s.normalize_diagram(&src, &parse_diagram(alg, first)?)?;
            let g = s.normalize_diagram(&f.tgt, &parse_diagram(alg, second)?)?;
            let h = s.compose(&g, &f)?;
            Out::new(fmt_morphism(&s, &h), morphism_json(&s, &h))
        }
        CatCmd::Phi { src, diagram } => {
            let src = src_object(&s, src)?;
            let word = parse_diagram(alg, diagram)?;
            let r = fmt_wreath(&s.wa, &s.phi_word(&src, &word)?);
            Out::new(r.clone(), json!({ "diagram": fmt_diagram(alg, s.variant(), &word), "result": r }))
        }
        CatCmd::Normalize { src, diagram } => {
            let src = src_object(&s, src)?;
            let m = s.normalize_diagram(&src, &parse_diagram(alg, diagram)?)?;
            Out::new(fmt_morphism(&s, &m), morphism_json(&s, &m))
        }
        CatCmd::PathMul { left, right } => {
            let r = s.path_multiply(&parse_path(&s, left)?, &parse_path(&s, right)?)?;
            let blocks: Vec<Value> = r.blocks.values().map(|m| morphism_json(&s, m)).collect();
            Out::new(fmt_path(&s, &r), json!({ "blocks": blocks }))
        }
        CatCmd::CycloIso { bound, max_bound } => {
            let rep = cyclotomic_iso(&s, *bound, *max_bound)?;
            let text = format!(
                "double crossing equals the pin {}\nideal maps to zero {}\nkernel lies in the ideal {} ({} composites)\ncorner dimension {}\nquotient dimension {} at bound {}{}",
                rep.double_crossing_is_pin,
                rep.ideal_to_zero,
                rep.kernel_in_ideal,
                rep.composites_checked,
                rep.cyc_dim,
                rep.quotient_dim,
                rep.bound,
                if rep.stabilized { "" } else { " (not stabilized)" }
            );
            let mut out = Out::new(
                text,
                json!({
                    "double_crossing_is_pin": rep.double_crossing_is_pin,
                    "ideal_to_zero": rep.ideal_to_zero,
                    "kernel_in_ideal": rep.kernel_in_ideal,
                    "composites_checked": rep.composites_checked,
                    "corner_dim": rep.cyc_dim,
                    "quotient_dim": rep.quotient_dim,
                    "bound": rep.bound,
                    "stabilized": rep.stabilized,
                }),
            );
            out.ok = rep.passed();
            out
        }
        CatCmd::Center { f } => {
            let f = parse_poly(s.poly(), f)?;
            let c = s.is_central_path(&s.diagonal(&f));
            Out::new(format!("central {c}"), json!({ "central": c }))
        }
    })
}

fn config_hash(alg: &FrobeniusAlgebra, o: &Opts) -> String {
    let raw = serde_json::to_string(&alg.to_raw()).unwrap_or_default();
    let cfg = json!({ "algebra": raw, "quantum": o.quantum, "z": o.z, "d": o.d, "Q": o.labels, "seed": o.seed });
    let digest = Sha256::digest(cfg.to_string().as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn verify_cmd(alg: &Arc<FrobeniusAlgebra>, o: &Opts) -> Res<Out> {
    let z = if o.quantum { parse_z(o)? } else { Q::zero() };
    let cfg = VerifyConfig { alg: alg.clone(), variant: variant(o), z: z.clone(), d: o.d, labels: raw_labels(alg, o)? };
    if o.d == 0 {
        return Err(input("--d must be positive"));
    }
    if o.quantum {
        WreathAlg::quantum(alg.clone(), 1, z)?;
    }
    let rep = run_verify(&cfg, &mut Sampler::new(o.seed));
    let hash = config_hash(alg, o);
    let mut text = String::new();
    let _ = writeln!(text, "frobhecke verify");
    let _ = writeln!(text, "algebra {}", alg.name);
    let _ = writeln!(text, "variant {}", if o.quantum { format!("quantum z={}", fmt_q(&cfg.z)) } else { "degenerate".into() });
    let _ = writeln!(text, "d {}", o.d);
    let _ = writeln!(text, "seed {} ({GENERATOR})", o.seed);
    let _ = writeln!(text, "config {hash}");
    for note in &rep.notes {
        let _ = writeln!(text, "note: {note}");
    }
    for suite in &rep.suites {
        let _ = writeln!(text, "{} {}: {}", if suite.passed() { "PASS" } else { "FAIL" }, suite.name, suite.summary());
        for c in suite.failures() {
            let _ = writeln!(text, "  failed: {} {}", c.name, c.detail);
        }
    }
    let _ = write!(text, "result {}", if rep.passed() { "PASS" } else { "FAIL" });
    let json = json!({
        "algebra": alg.name,
        "quantum": o.quantum,
        "z": fmt_q(&cfg.z),
        "d": o.d,
        "seed": o.seed,
        "generator": GENERATOR,
        "config_hash": hash,
        "notes": rep.notes,
        "suites": rep.suites,
        "passed": rep.passed(),
    });
    let mut out = Out::new(text, json);
    out.ok = rep.passed();
    Ok(out)
}

fn run(cli: &Cli) -> Res<Out> {
    let o = &cli.opts;
    if let Cmd::Algebra(cmd) = &cli.cmd {
        return algebra_cmd(cmd, o);
    }
    let alg = Arc::new(load_algebra(&o.algebra)?);
    match &cli.cmd {
        Cmd::Algebra(_) => unreachable!(),
        Cmd::Pol(cmd) => pol_cmd(cmd, &alg, o),
        Cmd::Wreath(cmd) => wreath_cmd(cmd, &alg, o),
        Cmd::Cat(cmd) => cat_cmd(cmd, &alg, o),
        Cmd::Verify => verify_cmd(&alg, o),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.opts.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            match cli.opts.format {
                Format::Text => eprintln!("error[{}]: {e}", e.code()),
                Format::Json => println!("{}", json!({ "error": e.code(), "message": e.to_string() })),
            }
            ExitCode::from(if e.is_verification_failure() { 1 } else { 2 })
        }
    }
}

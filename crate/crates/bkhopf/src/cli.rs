//! Argument handling and the four subcommands.
//!
//! Exit status: 0 on success, 1 for invalid input (including infeasible
//! equations and malformed files), 2 when the input is well-formed but a
//! condition or verification fails; the report is still printed then.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use bkhopf_core::{
    fmt_elem, solve_k, tuple_from_kcp2, verify_general_tuple, CyclicN1, EisensteinPoly, Error, Family, FieldDesc,
    GaloisRing, Kcp2Module, Kcp2Params, Kcp2Setting, ModElem, OrderName, SolveOptions,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::format::{self, ModuleSpec, SCHEMA};

#[derive(Parser, Debug)]
#[command(name = "bkhopf", version, about = "Breuil-Kisin modules and Hopf orders in KC_p and KC_{p^2}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub job: JobArgs,
}

#[derive(Args, Debug)]
pub struct JobArgs {
    /// Residue characteristic.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Residue field degree over F_p.
    #[arg(long, global = true, default_value_t = 1)]
    pub d: usize,
    /// Witt length; also the level of --cyclotomic.
    #[arg(long, global = true, default_value_t = 1)]
    pub n: u32,
    /// Eisenstein polynomial: ascending comma-separated integers, or "cyclotomic[:N]".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eisenstein: Option<String>,
    /// Use ((u+1)^{p^n} − 1)/((u+1)^{p^{n−1}} − 1).
    #[arg(long, global = true, conflicts_with = "eisenstein")]
    pub cyclotomic: bool,
    /// u-adic precision for series solving.
    #[arg(long, global = true, default_value_t = 20)]
    pub precision: i64,
    /// Largest pole order m of the monomials a·u^{-m} swept for f.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub family_max: Option<i64>,
    /// Emit a JSON record instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve f·g = φ(g)·h over k[[u]].
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Hopf orders in KC_p as rank-one modules, with their Larson presentations.
    OrdersKcp,
    /// Parameter sets (j1, j2, f) giving Hopf orders in KC_{p^2}.
    OrdersKcp2,
    /// Verify one (j1, j2, f) from a JSON module spec.
    Check { file: PathBuf },
}

/// Invalid input; exit status 1.
#[derive(Debug)]
pub struct Failure(pub String);

fn invalid(e: impl ToString) -> Failure {
    Failure(e.to_string())
}

/// A finished command: both renderings, and whether everything verified.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

impl JobArgs {
    fn p(&self) -> Result<u64, Failure> {
        self.p.ok_or_else(|| invalid("--p is required"))
    }

    fn field(&self) -> Result<FieldDesc, Failure> {
        FieldDesc::standard(self.p()?, self.d).map_err(invalid)
    }

    fn eisenstein(&self) -> Result<EisensteinPoly, Failure> {
        let p = self.p()?;
        match (&self.eisenstein, self.cyclotomic) {
            (Some(text), _) => format::parse_eisenstein(p, text).map_err(invalid),
            (None, true) => format::parse_eisenstein(p, &format!("cyclotomic:{}", self.n)).map_err(invalid),
            (None, false) => Err(invalid("one of --eisenstein or --cyclotomic is required")),
        }
    }
}

struct ElemText<'a>(&'a GaloisRing, &'a bkhopf_core::Elem);

impl std::fmt::Display for ElemText<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt_elem(self.0, self.1, f)
    }
}

fn poly_text(eis: &EisensteinPoly) -> String {
    let mut parts = Vec::new();
    for (i, &c) in eis.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "u".into(),
            _ => format!("u^{i}"),
        };
        let body = match (c.abs(), i) {
            (a, 0) => a.to_string(),
            (1, _) => mono,
            (a, _) => format!("{a}*{mono}"),
        };
        let sign = if c < 0 { "-" } else { "+" };
        if parts.is_empty() {
            parts.push(if c < 0 { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{sign} {body}"));
        }
    }
    parts.join(" ")
}

fn solve(job: &JobArgs, f: &str, h: &str) -> Result<Report, Failure> {
    if job.n != 1 {
        return Err(invalid("solve works over the residue field; use --n 1"));
    }
    let k = Arc::new(GaloisRing::field(&job.field()?));
    let f = format::parse_series(&k, f).map_err(|e| invalid(format!("--f: {e}")))?;
    let h = format::parse_series(&k, h).map_err(|e| invalid(format!("--h: {e}")))?;
    let sol = solve_k(&f, &h, &SolveOptions::with_prec(job.precision)).map_err(invalid)?;
    let window = match sol.verified_to {
        None => "exact".to_string(),
        Some(n) => format!("verified through O(u^{n})"),
    };
    Ok(Report {
        text: format!("g = {}\n{window}\n", sol.g),
        json: json!({
            "schema": SCHEMA,
            "command": "solve",
            "ring": format::ring_to_json(&k),
            "f": format::series_to_json(&f),
            "h": format::series_to_json(&h),
            "g": format::series_to_json(&sol.g),
            "verified_to": sol.verified_to,
        }),
        ok: true,
    })
}

fn orders_kcp(job: &JobArgs) -> Result<Report, Failure> {
    let eis = job.eisenstein()?;
    let ctx = CyclicN1::new(&eis, &job.field()?).map_err(invalid)?;
    let k = ctx.ring();
    let orders = ctx.enumerate_kcp_orders();
    let mut text = format!("E = {}  (p = {}, e = {}, c0 = {})\n", poly_text(&eis), eis.p(), eis.e(), eis.c0_int());
    writeln!(text, "{:>3} {:>3}  {:<8} {:<8} larson order", "r", "j", "b", "name").unwrap();
    let mut rows = Vec::new();
    for (m, larson) in &orders {
        let name = match ctx.breuil_label(m).name {
            OrderName::RCp => "RC_p",
            OrderName::DualRCp => "(RC_p)*",
            OrderName::Other => "other",
        };
        let b = ElemText(k, &m.b).to_string();
        writeln!(text, "{:>3} {:>3}  {:<8} {:<8} {}", m.r, larson.j, b, name, larson.presentation()).unwrap();
        rows.push(json!({
            "b": format::elem_to_json(k, &m.b),
            "r": m.r,
            "j": larson.j,
            "name": name,
            "larson": larson.presentation(),
        }));
    }
    Ok(Report {
        text,
        json: json!({
            "schema": SCHEMA,
            "command": "orders-kcp",
            "ring": format::ring_to_json(k),
            "eisenstein": eis.coeffs().iter().map(|&c| c as i64).collect::<Vec<_>>(),
            "e": eis.e(),
            "orders": rows,
        }),
        ok: true,
    })
}

fn mod_elem_text(x: &ModElem) -> String {
    format!("({})·e1 + [{}]·e2", x.a, x.b)
}

fn mod_elem_json(x: &ModElem) -> Value {
    json!({ "a": format::series_to_json(&x.a), "b": format::series_to_json(&x.b) })
}

struct Verified {
    verify_bk: bool,
    generic_fiber_witness: bool,
}

fn verify(setting: &Kcp2Setting, module: &Kcp2Module) -> Result<Verified, Failure> {
    Ok(Verified {
        verify_bk: setting.verify_bk(module).map_err(invalid)?,
        generic_fiber_witness: setting.generic_fiber_witness(module).map_err(invalid)?,
    })
}

fn orders_kcp2(job: &JobArgs) -> Result<Report, Failure> {
    let max_m = job.family_max.unwrap_or(4);
    let max_m = u32::try_from(max_m).map_err(|_| invalid(format!("--family-max must be non-negative, got {max_m}")))?;
    let eis = job.eisenstein()?;
    let setting = Kcp2Setting::new(&eis, &job.field()?).map_err(invalid)?;
    let list = setting.enumerate(Family::Monomials { max_m });
    let p = eis.p();
    let mut text = format!("E = {}  (p = {p}, e = {}), f = 0 or a·u^-m with m ≤ {max_m}\n", poly_text(&eis), eis.e());
    writeln!(text, "{:>3} {:>3}  {:<16} {:<9} {:<9} generic fiber", "j1", "j2", "f", "j1≥p·j2", "verify_bk").unwrap();
    let mut rows = Vec::new();
    let mut all_ok = true;
    for cand in &list.entries {
        let module = setting.build_module(&cand.params).map_err(invalid)?;
        let v = verify(&setting, &module)?;
        all_ok &= v.verify_bk && v.generic_fiber_witness;
        let Kcp2Params { j1, j2, f } = &cand.params;
        writeln!(
            text,
            "{j1:>3} {j2:>3}  {:<16} {:<9} {:<9} {}",
            f.to_string(),
            cand.j1_ge_pj2,
            v.verify_bk,
            v.generic_fiber_witness
        )
        .unwrap();
        rows.push(json!({
            "j1": j1,
            "j2": j2,
            "f": f.to_string(),
            "cond1": cand.conditions.cond1,
            "cond2": cand.conditions.cond2,
            "j1_ge_pj2": cand.j1_ge_pj2,
            "verify_bk": v.verify_bk,
            "generic_fiber_witness": v.generic_fiber_witness,
        }));
    }
    writeln!(text, "{} parameter sets", rows.len()).unwrap();
    Ok(Report {
        text,
        json: json!({
            "schema": SCHEMA,
            "command": "orders-kcp2",
            "ring": format::ring_to_json(setting.residue_field()),
            "eisenstein": eis.coeffs().iter().map(|&c| c as i64).collect::<Vec<_>>(),
            "family_max": max_m,
            "truncated": list.truncated,
            "orders": rows,
        }),
        ok: all_ok,
    })
}

fn check(file: &PathBuf) -> Result<Report, Failure> {
    let raw = std::fs::read_to_string(file).map_err(|e| invalid(format!("{}: {e}", file.display())))?;
    let spec = ModuleSpec::from_json(&raw).map_err(|e| invalid(format!("{}: {e}", file.display())))?;
    let eis = spec.eisenstein.resolve(spec.p).map_err(invalid)?;
    let setting = Kcp2Setting::new(&eis, &spec.field().map_err(invalid)?).map_err(invalid)?;
    let f = format::parse_series(setting.residue_field(), &spec.f).map_err(|e| invalid(format!("f: {e}")))?;
    let params = Kcp2Params { j1: spec.j1, j2: spec.j2, f };
    let conditions = setting.check_conditions(&params).map_err(invalid)?;

    let mut text = format!(
        "E = {}, (j1, j2) = ({}, {}), f = {}\ncond1 = {}\ncond2 = {}\n",
        poly_text(&eis),
        spec.j1,
        spec.j2,
        params.f,
        conditions.cond1,
        conditions.cond2
    );
    let mut out = json!({
        "schema": SCHEMA,
        "command": "check",
        "ring": format::ring_to_json(setting.residue_field()),
        "eisenstein": eis.coeffs().iter().map(|&c| c as i64).collect::<Vec<_>>(),
        "j1": spec.j1,
        "j2": spec.j2,
        "f": params.f.to_string(),
        "conditions": { "cond1": conditions.cond1, "cond2": conditions.cond2 },
        "verify_bk": null,
        "generic_fiber_witness": null,
    });
    if !conditions.both() {
        return Ok(Report { text, json: out, ok: false });
    }
    let module = setting.build_module(&params).map_err(invalid)?;
    let v = verify(&setting, &module)?;
    writeln!(text, "verify_bk = {}\ngeneric_fiber_witness = {}", v.verify_bk, v.generic_fiber_witness).unwrap();
    writeln!(text, "φ(e1) = {}\nφ(e2) = {}", mod_elem_text(&module.phi_e1), mod_elem_text(&module.phi_e2)).unwrap();
    out["verify_bk"] = json!(v.verify_bk);
    out["generic_fiber_witness"] = json!(v.generic_fiber_witness);
    out["phi_e1"] = mod_elem_json(&module.phi_e1);
    out["phi_e2"] = mod_elem_json(&module.phi_e2);
    let tuple = tuple_from_kcp2(&setting, &module).map_err(invalid)?;
    let tuple_ok = match verify_general_tuple(&tuple, &eis) {
        Ok(verdict) => {
            out["tuple"] = format::tuple_to_json(&tuple, &verdict);
            true
        }
        Err(Error::IdentityFails { .. }) => false,
        Err(e) => return Err(invalid(e)),
    };
    writeln!(text, "tuple = {tuple_ok}").unwrap();
    out["tuple_verified"] = json!(tuple_ok);
    Ok(Report { text, json: out, ok: v.verify_bk && v.generic_fiber_witness && tuple_ok })
}

pub fn execute(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Solve { f, h } => solve(&cli.job, f, h),
        Command::OrdersKcp => orders_kcp(&cli.job),
        Command::OrdersKcp2 => orders_kcp2(&cli.job),
        Command::Check { file } => check(file),
    }
}

/// Parses `args`, runs, writes the report, and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(Failure(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 1;
        }
    };
    let body = if cli.job.json {
        let mut s = serde_json::to_string_pretty(&report.json).expect("plain JSON values");
        s.push('\n');
        s
    } else {
        report.text
    };
    let written = match &cli.job.out {
        Some(path) => std::fs::write(path, &body),
        None => stdout.write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return 1;
    }
    if report.ok {
        0
    } else {
        let _ = writeln!(stderr, "verification failed");
        2
    }
}

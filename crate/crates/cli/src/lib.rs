//! The `spconj` command line: classification, conjugacy tests, class
//! enumeration, centralizer orders, random elements and brute-force checks.

use std::collections::{BTreeSet, HashMap};
use std::ffi::OsString;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Value};
use spconj::centralizer::{centralizer_order, classical_order, ClassicalKind};
use spconj::classify::{conjugate_in_sp, enumerate_classes, invariant, CanonicalLabel, InvariantDescriptor};
use spconj::oracle::{brute_centralizer, brute_conjugacy, enumerate_group, DEFAULT_CAP};
use spconj::symform::{random_symplectic, SkewForm, SymplecticElement};
use spconj::{Error, Field, Matrix, Poly};

#[derive(Parser, Debug)]
#[command(name = "spconj", version, about = "Conjugacy classes of finite symplectic groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub out: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(clap::Args, Debug, Clone)]
pub struct FieldArgs {
    /// Characteristic p of the base field.
    #[arg(long)]
    pub field: Option<u64>,
    /// Modulus (coefficients "c0,c1,…") of an extension of F_p.
    #[arg(long)]
    pub ext: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Descriptor and canonical label of a symplectic matrix.
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        /// "standard", inline form JSON, or a path to it.
        #[arg(long, default_value = "standard")]
        form: String,
        /// Inline matrix JSON or a path to it.
        #[arg(long)]
        matrix: String,
    },
    /// Decide conjugacy of two matrices.
    ConjTest {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "standard")]
        form: String,
        /// Give exactly twice.
        #[arg(long, num_args = 1, required = true)]
        matrix: Vec<String>,
    },
    /// List every class of Sp_n(F_q).
    EnumerateClasses {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
    /// Centralizer order of a matrix.
    Centralizer {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "standard")]
        form: String,
        #[arg(long)]
        matrix: String,
    },
    /// Seeded random element of Sp_n(F_q).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Brute-force conjugacy classes of a small group.
    OracleClasses {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Cross-check the classifier against brute force.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
}

/// Result of one invocation: exit status and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((value, table, ok)) => {
            let stdout = match cli.out {
                OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable")),
                OutputFormat::Table => table,
            };
            if ok {
                Outcome { code: 0, stdout, stderr: String::new() }
            } else {
                let err = json!({"error": "VerificationFailed", "message": "at least one check failed"});
                Outcome { code: 1, stdout, stderr: format!("{err}\n") }
            }
        }
        Err(Failure::Usage(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Domain(e)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("{}\n", json!({"error": e.code(), "message": e.to_string()})),
        },
        Err(Failure::Io(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("{}\n", json!({"error": "Io", "message": msg})),
        },
    }
}

/// Inline JSON when the argument looks like JSON, otherwise a file path.
fn load_json(arg: &str) -> Result<Value, Failure> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Io(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Domain(Error::Parse(e.to_string())))
}

fn field_from(args: &FieldArgs) -> Result<Option<Field>, Failure> {
    let Some(p) = args.field else {
        if args.ext.is_some() {
            return Err(Failure::Usage("--ext requires --field".into()));
        }
        return Ok(None);
    };
    let base = Field::prime(p)?;
    Ok(Some(match &args.ext {
        None => base,
        Some(text) => {
            let modulus = Poly::parse(&base, text)?;
            let raw: Vec<u64> = modulus.coeffs().iter().map(|c| c.raw()).collect();
            Field::extension(p, &raw)?
        }
    }))
}

fn load_matrix(arg: &str, field: Option<&Field>) -> Result<Matrix, Failure> {
    let value = load_json(arg)?;
    if value.is_object() {
        let m = Matrix::from_json(&value)?;
        if let Some(f) = field {
            if f != m.field() {
                return Err(Error::FieldMismatch.into());
            }
        }
        Ok(m)
    } else {
        let f = field.ok_or_else(|| Failure::Usage("nested-array matrices need --field".into()))?;
        Ok(Matrix::from_nested_json(f, &value)?)
    }
}

fn load_element(field: &FieldArgs, form: &str, matrix: &str) -> Result<SymplecticElement, Failure> {
    let f = field_from(field)?;
    let m = load_matrix(matrix, f.as_ref())?;
    let form = if form == "standard" {
        SkewForm::standard(m.field(), m.rows())?
    } else {
        let sf = SkewForm::from_json(&load_json(form)?)?;
        if sf.field() != m.field() {
            return Err(Error::FieldMismatch.into());
        }
        sf
    };
    Ok(SymplecticElement::new(m, form)?)
}

fn descriptor_table(d: &InvariantDescriptor) -> String {
    let mut out = format!("n = {}, p = {}\n", d.n, d.field.characteristic());
    for e in &d.split {
        out.push_str(&format!("split    pair {:<12} a = {:?}\n", e.pair.to_text(), e.a));
    }
    for e in &d.selfbar {
        out.push_str(&format!("selfbar  q    {:<12} b = {:?}\n", e.q.to_text(), e.b));
    }
    for e in &d.linear {
        let disc: Vec<String> = e.disc.iter().map(|(j, c)| format!("{j}:{}", c.short())).collect();
        out.push_str(&format!(
            "linear   X{}1{:<9} b = {:?} disc = [{}]\n",
            e.sign.symbol(),
            "",
            e.b,
            disc.join(" ")
        ));
    }
    out
}

type Executed = (Value, String, bool);

fn execute(cli: &Cli) -> Result<Executed, Failure> {
    match &cli.command {
        Command::Classify { field, form, matrix } => {
            let u = load_element(field, form, matrix)?;
            let d = invariant(&u)?;
            let label = d.label();
            let table = format!("{}label = {label}\n", descriptor_table(&d));
            Ok((json!({"descriptor": d.to_json(), "label": label.as_str()}), table, true))
        }
        Command::ConjTest { field, form, matrix } => {
            if matrix.len() != 2 {
                return Err(Failure::Usage("conj-test needs --matrix exactly twice".into()));
            }
            let u = load_element(field, form, &matrix[0])?;
            let v = load_element(field, form, &matrix[1])?;
            let conjugate = conjugate_in_sp(&u, &v)?;
            let labels = [invariant(&u)?.label(), invariant(&v)?.label()];
            let table = format!("conjugate = {conjugate}\nlabel 1 = {}\nlabel 2 = {}\n", labels[0], labels[1]);
            Ok((
                json!({"conjugate": conjugate, "labels": [labels[0].as_str(), labels[1].as_str()]}),
                table,
                true,
            ))
        }
        Command::EnumerateClasses { n, q } => {
            let field = Field::prime(*q)?;
            let classes = enumerate_classes(*n, &field)?;
            let mut table = format!("{} classes of Sp_{n}(F_{q})\n", classes.len());
            for d in &classes {
                table.push_str(&format!("{}\n", d.label()));
            }
            let list: Vec<Value> = classes.iter().map(InvariantDescriptor::to_json).collect();
            Ok((json!({"count": classes.len(), "classes": list}), table, true))
        }
        Command::Centralizer { field, form, matrix } => {
            let u = load_element(field, form, matrix)?;
            let report = centralizer_order(&invariant(&u)?)?;
            let mut table = String::new();
            for f in &report.factors {
                table.push_str(&format!("{:<16} {}\n", f.name, f.order));
            }
            table.push_str(&format!("{:<16} {}\n", "total", report.total));
            Ok((report.to_json(), table, true))
        }
        Command::Random { n, q, seed } => {
            let field = Field::prime(*q)?;
            let u = random_symplectic(*n, &field, *seed)?;
            let nested = u.matrix().to_nested_json();
            let table = format!("{nested}\n");
            Ok((u.matrix().to_json(), table, true))
        }
        Command::OracleClasses { n, q, cap } => {
            let field = Field::prime(*q)?;
            let table = enumerate_group(*n, &field, *cap)?;
            let orbits = brute_conjugacy(&table);
            let reps: Vec<Value> = orbits
                .representatives
                .iter()
                .map(|&i| table.matrix(i).to_nested_json())
                .collect();
            let mut text = format!("{} classes in a group of order {}\n", orbits.len(), table.order());
            for (k, &i) in orbits.representatives.iter().enumerate() {
                text.push_str(&format!("{:>8}  {}\n", orbits.sizes[k], table.matrix(i).to_nested_json()));
            }
            Ok((
                json!({"order": table.order(), "count": orbits.len(), "sizes": orbits.sizes, "representatives": reps}),
                text,
                true,
            ))
        }
        Command::Verify { n, q, cap } => verify(*n, *q, *cap),
    }
}

/// Classifier against brute force for one `(n, q)`.
fn verify(n: usize, q: u64, cap: u64) -> Result<Executed, Failure> {
    let field = Field::prime(q)?;
    let table = enumerate_group(n, &field, cap)?;
    let orbits = brute_conjugacy(&table);
    let form = SkewForm::standard(&field, n)?;
    let descs: Vec<InvariantDescriptor> = (0..table.order())
        .into_par_iter()
        .map(|i| invariant(&SymplecticElement::new(table.matrix(i), form.clone())?))
        .collect::<Result<_, Error>>()?;
    let labels: Vec<CanonicalLabel> = descs.iter().map(|d| d.label()).collect();

    let mut checks: Vec<(&str, bool, String)> = Vec::new();

    let mut orbit_label: HashMap<u32, &CanonicalLabel> = HashMap::new();
    let mut label_orbit: HashMap<&CanonicalLabel, u32> = HashMap::new();
    let mut partition_ok = true;
    for (i, l) in labels.iter().enumerate() {
        let o = orbits.orbit_of[i];
        partition_ok &= *orbit_label.entry(o).or_insert(l) == l;
        partition_ok &= *label_orbit.entry(l).or_insert(o) == o;
    }
    checks.push((
        "partition",
        partition_ok,
        format!("{} orbits, {} labels", orbits.len(), label_orbit.len()),
    ));

    let realized: BTreeSet<&CanonicalLabel> = labels.iter().collect();
    let enumerated: Vec<CanonicalLabel> = enumerate_classes(n, &field)?.iter().map(|d| d.label()).collect();
    let enumerated_set: BTreeSet<&CanonicalLabel> = enumerated.iter().collect();
    checks.push((
        "enumeration",
        enumerated_set == realized,
        format!("{} enumerated, {} realized", enumerated.len(), realized.len()),
    ));

    let order = BigUint::from(table.order());
    let mut matches = 0;
    let mut sum = BigUint::from(0u32);
    for &rep in &orbits.representatives {
        let formula = centralizer_order(&descs[rep])?.total;
        if formula == brute_centralizer(&table, &table.matrix(rep))? {
            matches += 1;
        }
        sum += &order / &formula;
    }
    checks.push((
        "centralizers",
        matches == orbits.len(),
        format!("{matches}/{} representatives match", orbits.len()),
    ));
    checks.push(("class-equation", sum == order, format!("sum {sum}, order {order}")));

    let formula = classical_order(ClassicalKind::Sp, n, q)?;
    checks.push(("group-order", formula == order, format!("formula {formula}, enumerated {order}")));

    let all = checks.iter().all(|c| c.1);
    let mut text = String::new();
    for (name, ok, detail) in &checks {
        text.push_str(&format!("{} {name}: {detail}\n", if *ok { "PASS" } else { "FAIL" }));
    }
    let list: Vec<Value> = checks
        .iter()
        .map(|(name, ok, detail)| json!({"name": name, "pass": ok, "detail": detail}))
        .collect();
    Ok((json!({"n": n, "q": q, "checks": list, "pass": all}), text, all))
}

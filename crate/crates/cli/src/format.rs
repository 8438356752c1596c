//! JSON file formats.
//!
//! Matrices are row-major arrays of ring elements. Elements of ℤ are
//! integers, elements of ℚ are integers or `"p/q"` strings, and elements of
//! ℤ[ℤ/k] are coefficient arrays `[a_0, …, a_{k−1}]` on `1, g, …, g^{k−1}`.
//! Maps indexed by degree are objects keyed by the degree as a string;
//! structure families are nested `{s: {r: matrix}}`. Zero-size matrices are
//! never written and absent entries read as zero.

use std::fmt;
use std::path::{Path, PathBuf};

use algsurg_core::forms::{EpsQuadraticForm, Formation};
use algsurg_core::ring::Rational;
use algsurg_core::structure::{QuadraticCobordism, SymmetricCobordism};
use algsurg_core::{
    ChainComplex, ChainMap, Family, Kind, Matrix, QuadraticComplex, QuadraticPair, Ring, RingElem, SymmetricComplex,
    SymmetricPair,
};
use serde_json::{Map, Value};

/// A command-line failure, split by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Unreadable or ill-formed input (exit code 2).
    Input(String),
    /// A well-formed input that fails a check or an operation's hypotheses (exit code 1).
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "malformed input: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl From<algsurg_core::Error> for CliError {
    fn from(e: algsurg_core::Error) -> Self {
        match e {
            algsurg_core::Error::Malformed(m) => CliError::Input(m),
            e => CliError::Failed(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn bad(at: &str, msg: impl fmt::Display) -> CliError {
    CliError::Input(format!("{at}: {msg}"))
}

/// Wrap a core error raised while assembling parsed data as an input error.
fn shape(at: &str) -> impl Fn(algsurg_core::Error) -> CliError + '_ {
    move |e| bad(at, e)
}

// ---------------------------------------------------------------- scalars

pub fn parse_ring(s: &str) -> CliResult<Ring> {
    match s.trim() {
        "Z" => Ok(Ring::Integers),
        "Q" => Ok(Ring::Rationals),
        t => t
            .strip_prefix("Z[Z/")
            .and_then(|k| k.strip_suffix(']'))
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .map(Ring::CyclicGroupRing)
            .ok_or_else(|| CliError::Input(format!("unknown ring {s:?}; expected Z, Q or Z[Z/k]"))),
    }
}

fn int(v: &Value, at: &str) -> CliResult<i64> {
    v.as_i64().ok_or_else(|| bad(at, format!("expected an integer, got {v}")))
}

fn elem(v: &Value, ring: Ring, at: &str) -> CliResult<RingElem> {
    match ring {
        Ring::Integers => int(v, at).map(RingElem::Int),
        Ring::Rationals => match v {
            Value::String(s) => {
                let (p, q) = s.split_once('/').ok_or_else(|| bad(at, format!("expected p/q, got {s:?}")))?;
                let p: i64 = p.trim().parse().map_err(|_| bad(at, format!("bad numerator in {s:?}")))?;
                let q: i64 = q.trim().parse().map_err(|_| bad(at, format!("bad denominator in {s:?}")))?;
                if q == 0 {
                    return Err(bad(at, "zero denominator"));
                }
                Ok(RingElem::Rat(Rational::new(p, q)))
            }
            v => int(v, at).map(|n| RingElem::Rat(Rational::from_integer(n))),
        },
        Ring::CyclicGroupRing(k) => match v {
            Value::Array(cs) if cs.len() == k => cs
                .iter()
                .enumerate()
                .map(|(m, c)| int(c, &format!("{at} coefficient {m}")))
                .collect::<CliResult<_>>()
                .map(RingElem::Group),
            Value::Array(cs) => Err(bad(at, format!("expected {k} coefficients, got {}", cs.len()))),
            v => int(v, at).map(|n| ring.from_int(n)),
        },
    }
}

fn elem_value(e: &RingElem) -> Value {
    match e {
        RingElem::Int(n) => Value::from(*n),
        RingElem::Rat(q) if *q.denom() == 1 => Value::from(*q.numer()),
        RingElem::Rat(q) => Value::from(format!("{}/{}", q.numer(), q.denom())),
        RingElem::Group(cs) => Value::from(cs.clone()),
    }
}

// ---------------------------------------------------------------- matrices

pub fn matrix(v: &Value, ring: Ring, rows: usize, cols: usize, at: &str) -> CliResult<Matrix> {
    let rs = v.as_array().ok_or_else(|| bad(at, "expected an array of rows"))?;
    if rows == 0 || cols == 0 {
        if rs.iter().all(|r| r.as_array().is_some_and(|r| r.is_empty())) && (rs.is_empty() || rs.len() == rows) {
            return Ok(Matrix::zeros(ring, rows, cols));
        }
        return Err(bad(at, format!("expected an empty {rows}x{cols} matrix")));
    }
    if rs.len() != rows {
        return Err(bad(at, format!("expected {rows} rows, got {}", rs.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, row) in rs.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| bad(at, format!("row {i} is not an array")))?;
        if row.len() != cols {
            return Err(bad(at, format!("row {i} has {} entries, expected {cols}", row.len())));
        }
        out.push(
            row.iter()
                .enumerate()
                .map(|(j, x)| elem(x, ring, &format!("{at} entry ({i},{j})")))
                .collect::<CliResult<Vec<_>>>()?,
        );
    }
    Matrix::from_rows(ring, cols, out).map_err(shape(at))
}

pub fn matrix_value(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(elem_value).collect())).collect())
}

/// A square or rectangular matrix whose shape is read from the data itself.
fn free_matrix(v: &Value, ring: Ring, at: &str) -> CliResult<Matrix> {
    let rs = v.as_array().ok_or_else(|| bad(at, "expected an array of rows"))?;
    let cols = rs.first().and_then(Value::as_array).map_or(0, Vec::len);
    matrix(v, ring, rs.len(), cols, at)
}

fn obj<'a>(v: &'a Value, at: &str) -> CliResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(at, "expected an object"))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, at: &str) -> CliResult<&'a Value> {
    o.get(key).ok_or_else(|| bad(at, format!("missing field {key:?}")))
}

fn degree_key(k: &str, at: &str) -> CliResult<i64> {
    k.parse().map_err(|_| bad(at, format!("degree key {k:?} is not an integer")))
}

fn ring_field(o: &Map<String, Value>, default: Option<Ring>, at: &str) -> CliResult<Ring> {
    match o.get("ring") {
        Some(Value::String(s)) => parse_ring(s),
        Some(v) => Err(bad(at, format!("ring must be a string, got {v}"))),
        None => default.ok_or_else(|| bad(at, "missing field \"ring\" (or pass --ring)")),
    }
}

// ---------------------------------------------------------------- complexes

/// Parse a complex; `d∘d = 0` is not checked here (see `validate_complex`).
pub fn complex(v: &Value, default: Option<Ring>, at: &str) -> CliResult<ChainComplex> {
    let o = obj(v, at)?;
    let ring = ring_field(o, default, at)?;
    let lo = int(field(o, "lo", at)?, &format!("{at}.lo"))?;
    let ranks: Vec<usize> = field(o, "ranks", at)?
        .as_array()
        .ok_or_else(|| bad(at, "ranks must be an array"))?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.as_u64().map(|r| r as usize).ok_or_else(|| bad(at, format!("ranks[{i}] is not a natural number")))
        })
        .collect::<CliResult<_>>()?;
    let hi = lo + ranks.len() as i64 - 1;
    let rank = |r: i64| if r < lo || r > hi { 0 } else { ranks[(r - lo) as usize] };
    let mut d: Vec<Matrix> = (lo + 1..=hi).map(|r| Matrix::zeros(ring, rank(r - 1), rank(r))).collect();
    if let Some(dv) = o.get("d") {
        for (k, m) in obj(dv, &format!("{at}.d"))? {
            let r = degree_key(k, &format!("{at}.d"))?;
            let here = format!("{at}.d[{r}]");
            if r <= lo || r > hi {
                return Err(bad(&here, format!("degree outside the window [{}, {hi}]", lo + 1)));
            }
            d[(r - lo - 1) as usize] = matrix(m, ring, rank(r - 1), rank(r), &here)?;
        }
    }
    ChainComplex::new_unchecked(ring, lo, ranks, d).map_err(shape(at))
}

pub fn complex_value(c: &ChainComplex) -> Value {
    let mut o = Map::new();
    o.insert("ring".into(), Value::from(c.ring().to_string()));
    o.insert("lo".into(), Value::from(c.lo()));
    o.insert("ranks".into(), Value::from(c.ranks().to_vec()));
    let mut d = Map::new();
    for r in c.lo() + 1..=c.hi() {
        let m = c.d(r);
        if m.rows() > 0 && m.cols() > 0 {
            d.insert(r.to_string(), matrix_value(&m));
        }
    }
    o.insert("d".into(), Value::Object(d));
    Value::Object(o)
}

fn degree_maps(v: Option<&Value>, source: &ChainComplex, target: &ChainComplex, at: &str) -> CliResult<ChainMap> {
    let ring = target.ring();
    let mut given = std::collections::BTreeMap::new();
    if let Some(v) = v {
        for (k, m) in obj(v, at)? {
            let r = degree_key(k, at)?;
            let here = format!("{at}[{r}]");
            given.insert(r, matrix(m, ring, target.rank(r), source.rank(r), &here)?);
        }
    }
    ChainMap::new_unchecked(source, target, |r| {
        given.get(&r).cloned().unwrap_or_else(|| Matrix::zeros(ring, target.rank(r), source.rank(r)))
    })
    .map_err(shape(at))
}

fn degree_maps_value(f: &ChainMap) -> Value {
    let (s, t) = (f.source(), f.target());
    let mut o = Map::new();
    let lo = s.lo().max(t.lo());
    let hi = s.hi().min(t.hi());
    for r in lo..=hi {
        let m = f.map(r);
        if m.rows() > 0 && m.cols() > 0 {
            o.insert(r.to_string(), matrix_value(&m));
        }
    }
    Value::Object(o)
}

/// A chain map file: `{"source": complex, "target": complex, "map": {r: matrix}}`.
pub fn chain_map(v: &Value, default: Option<Ring>, base: &Path, at: &str) -> CliResult<ChainMap> {
    let o = obj(v, at)?;
    let source =
        complex(&resolve(field(o, "source", at)?, base, &format!("{at}.source"))?, default, &format!("{at}.source"))?;
    let target =
        complex(&resolve(field(o, "target", at)?, base, &format!("{at}.target"))?, default, &format!("{at}.target"))?;
    degree_maps(o.get("map"), &source, &target, &format!("{at}.map"))
}

pub fn chain_map_value(f: &ChainMap) -> Value {
    let mut o = Map::new();
    o.insert("source".into(), complex_value(f.source()));
    o.insert("target".into(), complex_value(f.target()));
    o.insert("map".into(), degree_maps_value(f));
    Value::Object(o)
}

// ---------------------------------------------------------------- structures

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Symmetric => "sym",
        Kind::Quadratic => "quad",
    }
}

fn kind_field(o: &Map<String, Value>, at: &str) -> CliResult<Kind> {
    match field(o, "kind", at)?.as_str() {
        Some("sym") => Ok(Kind::Symmetric),
        Some("quad") => Ok(Kind::Quadratic),
        _ => Err(bad(at, "kind must be \"sym\" or \"quad\"")),
    }
}

fn family(v: Option<&Value>, c: &ChainComplex, kind: Kind, n: i64, at: &str) -> CliResult<Family> {
    let mut fam = Family::new();
    let Some(v) = v else { return Ok(fam) };
    for (sk, inner) in obj(v, at)? {
        let s: usize = sk.parse().map_err(|_| bad(at, format!("key {sk:?} is not a natural number s")))?;
        for (rk, m) in obj(inner, &format!("{at}[{s}]"))? {
            let r = degree_key(rk, &format!("{at}[{s}]"))?;
            let p = kind.source_degree(n, s, r);
            let here = format!("{at}[{s}][{r}]");
            fam.insert(s, r, matrix(m, c.ring(), c.rank(r), c.rank(p), &here)?);
        }
    }
    Ok(fam)
}

fn family_value(f: &Family) -> Value {
    let mut o = Map::new();
    for ((s, r), m) in f.iter() {
        let inner = o.entry(s.to_string()).or_insert_with(|| Value::Object(Map::new()));
        inner.as_object_mut().expect("object").insert(r.to_string(), matrix_value(m));
    }
    Value::Object(o)
}

/// A structured complex of either kind.
#[derive(Clone, Debug)]
pub enum Structured {
    Sym(SymmetricComplex),
    Quad(QuadraticComplex),
}

impl Structured {
    pub fn complex(&self) -> &ChainComplex {
        match self {
            Structured::Sym(x) => x.complex(),
            Structured::Quad(x) => x.complex(),
        }
    }

    pub fn n(&self) -> i64 {
        match self {
            Structured::Sym(x) => x.n(),
            Structured::Quad(x) => x.n(),
        }
    }
}

/// `complex fields + {"kind": "sym"|"quad", "n": int, "maps": {s: {r: matrix}}}`.
pub fn structured(v: &Value, default: Option<Ring>, at: &str) -> CliResult<Structured> {
    let o = obj(v, at)?;
    let c = complex(v, default, at)?;
    let kind = kind_field(o, at)?;
    let n = int(field(o, "n", at)?, &format!("{at}.n"))?;
    let fam = family(o.get("maps"), &c, kind, n, &format!("{at}.maps"))?;
    Ok(match kind {
        Kind::Symmetric => Structured::Sym(SymmetricComplex::new(c, n, fam).map_err(shape(at))?),
        Kind::Quadratic => Structured::Quad(QuadraticComplex::new(c, n, fam).map_err(shape(at))?),
    })
}

fn structured_parts(c: &ChainComplex, kind: Kind, n: i64, fam: &Family) -> Value {
    let mut v = complex_value(c);
    let o = v.as_object_mut().expect("object");
    o.insert("kind".into(), Value::from(kind_name(kind)));
    o.insert("n".into(), Value::from(n));
    o.insert("maps".into(), family_value(fam));
    v
}

pub fn symmetric_value(x: &SymmetricComplex) -> Value {
    structured_parts(x.complex(), Kind::Symmetric, x.n(), x.family())
}

pub fn quadratic_value(x: &QuadraticComplex) -> Value {
    structured_parts(x.complex(), Kind::Quadratic, x.n(), x.family())
}

pub fn structured_value(x: &Structured) -> Value {
    match x {
        Structured::Sym(x) => symmetric_value(x),
        Structured::Quad(x) => quadratic_value(x),
    }
}

// ---------------------------------------------------------------- pairs and cobordisms

/// A string field names another file, relative to the referring file's directory.
fn resolve(v: &Value, base: &Path, at: &str) -> CliResult<Value> {
    match v {
        Value::String(p) => {
            let path = base.join(p);
            read_json(&path).map_err(|e| bad(at, e))
        }
        v => Ok(v.clone()),
    }
}

/// A pair of either kind.
#[derive(Clone, Debug)]
pub enum Pair {
    Sym(SymmetricPair),
    Quad(QuadraticPair),
}

/// Surgery data: `{"boundary": structured, "target": complex, "j": {r: matrix}, "delta": {s: {r: matrix}}}`.
///
/// `boundary` and `target` may be inline objects or paths to files.
pub fn pair(v: &Value, default: Option<Ring>, base: &Path, at: &str) -> CliResult<Pair> {
    let o = obj(v, at)?;
    let x = structured(
        &resolve(field(o, "boundary", at)?, base, &format!("{at}.boundary"))?,
        default,
        &format!("{at}.boundary"),
    )?;
    let d =
        complex(&resolve(field(o, "target", at)?, base, &format!("{at}.target"))?, default, &format!("{at}.target"))?;
    let j = degree_maps(o.get("j"), x.complex(), &d, &format!("{at}.j"))?;
    let kind = match x {
        Structured::Sym(_) => Kind::Symmetric,
        Structured::Quad(_) => Kind::Quadratic,
    };
    let delta = family(o.get("delta"), &d, kind, x.n() + 1, &format!("{at}.delta"))?;
    Ok(match x {
        Structured::Sym(x) => Pair::Sym(SymmetricPair::new(j, x, delta).map_err(shape(at))?),
        Structured::Quad(x) => Pair::Quad(QuadraticPair::new(j, x, delta).map_err(shape(at))?),
    })
}

fn pair_parts(boundary: Value, j: &ChainMap, delta: &Family) -> Value {
    let mut o = Map::new();
    o.insert("boundary".into(), boundary);
    o.insert("target".into(), complex_value(j.target()));
    o.insert("j".into(), degree_maps_value(j));
    o.insert("delta".into(), family_value(delta));
    Value::Object(o)
}

pub fn pair_value(p: &Pair) -> Value {
    match p {
        Pair::Sym(p) => pair_parts(symmetric_value(p.boundary()), p.j(), p.delta_family()),
        Pair::Quad(p) => pair_parts(quadratic_value(p.boundary()), p.j(), p.delta_family()),
    }
}

/// A cobordism of either kind.
#[derive(Clone, Debug)]
pub enum Cobordism {
    Sym(SymmetricCobordism),
    Quad(QuadraticCobordism),
}

/// `{"left": structured, "right": structured, "target": complex, "f": maps, "f_prime": maps, "delta": family}`.
pub fn cobordism(v: &Value, default: Option<Ring>, base: &Path, at: &str) -> CliResult<Cobordism> {
    let o = obj(v, at)?;
    let left =
        structured(&resolve(field(o, "left", at)?, base, &format!("{at}.left"))?, default, &format!("{at}.left"))?;
    let right =
        structured(&resolve(field(o, "right", at)?, base, &format!("{at}.right"))?, default, &format!("{at}.right"))?;
    let d =
        complex(&resolve(field(o, "target", at)?, base, &format!("{at}.target"))?, default, &format!("{at}.target"))?;
    let f = degree_maps(o.get("f"), left.complex(), &d, &format!("{at}.f"))?;
    let fp = degree_maps(o.get("f_prime"), right.complex(), &d, &format!("{at}.f_prime"))?;
    match (left, right) {
        (Structured::Sym(l), Structured::Sym(r)) => {
            let delta = family(o.get("delta"), &d, Kind::Symmetric, l.n() + 1, &format!("{at}.delta"))?;
            Ok(Cobordism::Sym(SymmetricCobordism::from_maps(l, r, &f, &fp, delta).map_err(shape(at))?))
        }
        (Structured::Quad(l), Structured::Quad(r)) => {
            let delta = family(o.get("delta"), &d, Kind::Quadratic, l.n() + 1, &format!("{at}.delta"))?;
            Ok(Cobordism::Quad(QuadraticCobordism::from_maps(l, r, &f, &fp, delta).map_err(shape(at))?))
        }
        _ => Err(bad(at, "left and right ends must have the same kind")),
    }
}

pub fn cobordism_value(g: &Cobordism) -> Value {
    let (left, right, f, fp, delta) = match g {
        Cobordism::Sym(g) => {
            (symmetric_value(&g.left), symmetric_value(&g.right), g.f(), g.f_prime(), g.pair.delta_family())
        }
        Cobordism::Quad(g) => {
            (quadratic_value(&g.left), quadratic_value(&g.right), g.f(), g.f_prime(), g.pair.delta_family())
        }
    };
    let mut o = Map::new();
    o.insert("left".into(), left);
    o.insert("right".into(), right);
    o.insert("target".into(), complex_value(f.target()));
    o.insert("f".into(), degree_maps_value(&f));
    o.insert("f_prime".into(), degree_maps_value(&fp));
    o.insert("delta".into(), family_value(delta));
    Value::Object(o)
}

// ---------------------------------------------------------------- forms

/// `{"ring", "i", "lambda": matrix, "mu": [elements]}`.
pub fn form(v: &Value, default: Option<Ring>, at: &str) -> CliResult<EpsQuadraticForm> {
    let o = obj(v, at)?;
    let ring = ring_field(o, default, at)?;
    let i = int(field(o, "i", at)?, &format!("{at}.i"))?;
    let lambda = free_matrix(field(o, "lambda", at)?, ring, &format!("{at}.lambda"))?;
    let mu: Vec<RingElem> = field(o, "mu", at)?
        .as_array()
        .ok_or_else(|| bad(at, "mu must be an array"))?
        .iter()
        .enumerate()
        .map(|(k, m)| elem(m, ring, &format!("{at}.mu[{k}]")))
        .collect::<CliResult<_>>()?;
    EpsQuadraticForm::new(ring, i, lambda, mu).map_err(shape(at))
}

pub fn form_value(q: &EpsQuadraticForm) -> Value {
    let mut o = Map::new();
    o.insert("ring".into(), Value::from(q.ring().to_string()));
    o.insert("i".into(), Value::from(q.parity().0));
    o.insert("lambda".into(), matrix_value(q.lambda()));
    o.insert("mu".into(), Value::Array(q.mu().iter().map(|m| elem_value(m.rep())).collect()));
    Value::Object(o)
}

/// A formation, optionally carrying a common complement `"H"` as a triviality witness.
pub fn formation(v: &Value, default: Option<Ring>, at: &str) -> CliResult<(Formation, Option<Matrix>)> {
    let o = obj(v, at)?;
    let q = form(v, default, at)?;
    let k = q.rank();
    let cols = |key: &str| -> CliResult<Matrix> {
        let m = field(o, key, at)?;
        let c = m.as_array().and_then(|rs| rs.first()).and_then(Value::as_array).map_or(0, Vec::len);
        matrix(m, q.ring(), k, c, &format!("{at}.{key}"))
    };
    let f = cols("F")?;
    let g = cols("G")?;
    let h = if o.contains_key("H") { Some(cols("H")?) } else { None };
    Ok((Formation { form: q, f, g }, h))
}

pub fn formation_value(phi: &Formation, h: Option<&Matrix>) -> Value {
    let mut v = form_value(&phi.form);
    let o = v.as_object_mut().expect("object");
    o.insert("F".into(), matrix_value(&phi.f));
    o.insert("G".into(), matrix_value(&phi.g));
    if let Some(h) = h {
        o.insert("H".into(), matrix_value(h));
    }
    v
}

// ---------------------------------------------------------------- files

/// What a JSON document describes, judged by its keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocKind {
    Complex,
    Structured,
    ChainMap,
    Pair,
    Cobordism,
    Form,
    Formation,
}

pub fn doc_kind(v: &Value) -> CliResult<DocKind> {
    let o = obj(v, "document")?;
    let has = |k: &str| o.contains_key(k);
    Ok(if has("left") && has("right") {
        DocKind::Cobordism
    } else if has("boundary") {
        DocKind::Pair
    } else if has("source") && has("target") {
        DocKind::ChainMap
    } else if has("lambda") && has("F") {
        DocKind::Formation
    } else if has("lambda") {
        DocKind::Form
    } else if has("kind") {
        DocKind::Structured
    } else if has("ranks") {
        DocKind::Complex
    } else {
        return Err(CliError::Input("cannot tell what this document describes".into()));
    })
}

/// A parsed document and the directory its references resolve against.
pub struct FileInput {
    pub doc: Value,
    pub base: PathBuf,
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json(text: &str, name: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{name}: {e}")))
}

/// Directory against which relative references inside `path` resolve.
pub fn base_dir(path: Option<&Path>) -> PathBuf {
    path.and_then(Path::parent).map_or_else(|| PathBuf::from("."), Path::to_path_buf)
}

/// Render with one matrix row per line.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| {
            !x.is_object()
                && (!x.is_array() || x.as_array().is_some_and(|a| a.iter().all(|y| !y.is_array() && !y.is_object())))
        }),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Object(o) if o.is_empty() => out.push_str("{}"),
        Value::Object(o) => {
            out.push_str("{\n");
            for (k, (key, val)) in o.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::from(key.as_str()).to_string());
                out.push_str(": ");
                write_value(out, val, indent + 1);
                out.push_str(if k + 1 < o.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(xs) if is_flat(v) && xs.iter().any(Value::is_array) && xs.len() > 1 => {
            // a matrix: one row per line
            out.push_str("[\n");
            for (k, row) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&row.to_string());
                out.push_str(if k + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        v if is_flat(v) => out.push_str(&v.to_string()),
        Value::Array(xs) => {
            out.push_str("[\n");
            for (k, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if k + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        v => out.push_str(&v.to_string()),
    }
}

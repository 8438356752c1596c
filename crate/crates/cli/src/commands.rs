//! Subcommands. Each returns a line-oriented report and any documents it produced.

use std::path::Path;

use algsurg_core::complex::{homology, mapping_cone, validate_complex};
use algsurg_core::fixtures::{self, DoubleCover};
use algsurg_core::forms::{
    arf, check_formation, hyperbolic, hyperbolic_dual_lagrangian, hyperbolic_lagrangian, instant_obstruction,
    is_trivial_witness, signature, witt_class_z, EpsQuadraticForm, Formation, TrivialWitness,
};
use algsurg_core::sampler;
use algsurg_core::structure::{
    check_pair_quad, check_pair_sym, check_quadratic, check_symmetric, is_poincare_quad, is_poincare_sym,
};
use algsurg_core::surgery::{cobordism_to_data, cobordism_to_data_quad, surgery_quad, surgery_sym};
use algsurg_core::{ChainComplex, Matrix, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::format::{self, CliError, CliResult, Cobordism, DocKind, Pair, Structured};

/// Key/value report lines plus an overall verdict.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub lines: Vec<(String, Value)>,
    pub ok: bool,
}

impl Report {
    fn new() -> Report {
        Report { lines: Vec::new(), ok: true }
    }

    fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.lines.push((key.into(), v.into()));
    }

    /// Record a checker report under `key`, failing the overall verdict if it has failures.
    fn check(&mut self, key: &str, rep: &algsurg_core::Report) {
        self.put(key, rep.is_valid());
        for f in &rep.failures {
            self.put("failure", f.as_str());
        }
        self.ok &= rep.is_valid();
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            let v = match v {
                Value::String(s) => s.clone(),
                v => v.to_string(),
            };
            out.push_str(&format!("{k}: {v}\n"));
        }
        out
    }

    /// Repeated keys (such as `failure`) are gathered into arrays.
    pub fn json(&self) -> Value {
        let mut o = Map::new();
        for (k, v) in &self.lines {
            match o.get_mut(k) {
                None if k == "failure" => {
                    o.insert(k.clone(), Value::Array(vec![v.clone()]));
                }
                None => {
                    o.insert(k.clone(), v.clone());
                }
                Some(Value::Array(a)) if k == "failure" => a.push(v.clone()),
                Some(slot) => *slot = v.clone(),
            }
        }
        o.insert("ok".into(), Value::Bool(self.ok));
        Value::Object(o)
    }
}

/// What a command produced.
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub report: Report,
    /// Documents by file stem; the first is the primary one.
    pub documents: Vec<(String, Value)>,
}

impl Output {
    fn report(report: Report) -> Output {
        Output { report, documents: Vec::new() }
    }
}

/// Options shared by all subcommands.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub ring: Option<Ring>,
    pub n: Option<i64>,
    pub seed: u64,
}

/// Parsed input together with the directory its references resolve against.
pub struct Input<'a> {
    pub doc: Value,
    pub base: &'a Path,
}

fn complex_of(input: &Input, opts: &Options) -> CliResult<ChainComplex> {
    match format::doc_kind(&input.doc)? {
        DocKind::Complex => format::complex(&input.doc, opts.ring, "complex"),
        DocKind::Structured => Ok(format::structured(&input.doc, opts.ring, "complex")?.complex().clone()),
        DocKind::Pair => match format::pair(&input.doc, opts.ring, input.base, "pair")? {
            Pair::Sym(p) => Ok(p.target().clone()),
            Pair::Quad(p) => Ok(p.target().clone()),
        },
        k => Err(CliError::Input(format!("expected a complex, got a {k:?} document"))),
    }
}

fn window(c: &ChainComplex) -> String {
    match c.support() {
        Some((lo, hi)) => format!("[{lo}, {hi}]"),
        None => "empty".into(),
    }
}

pub fn validate(input: &Input, opts: &Options) -> CliResult<Output> {
    let mut rep = Report::new();
    let kind = format::doc_kind(&input.doc)?;
    rep.put("document", format!("{kind:?}").to_lowercase());
    match kind {
        DocKind::Complex => {
            let c = format::complex(&input.doc, opts.ring, "complex")?;
            rep.put("ring", c.ring().to_string());
            rep.put("window", window(&c));
            rep.check("complex", &validate_complex(&c));
        }
        DocKind::Structured => {
            let x = format::structured(&input.doc, opts.ring, "complex")?;
            rep.put("ring", x.complex().ring().to_string());
            rep.put("n", x.n());
            rep.put("window", window(x.complex()));
            rep.check("complex", &validate_complex(x.complex()));
            if rep.ok {
                match &x {
                    Structured::Sym(x) => {
                        rep.check("relations", &check_symmetric(x));
                        if rep.ok {
                            rep.put("poincare", is_poincare_sym(x)?);
                        }
                    }
                    Structured::Quad(x) => {
                        rep.check("relations", &check_quadratic(x));
                        if rep.ok {
                            rep.put("poincare", is_poincare_quad(x)?);
                        }
                    }
                }
            }
        }
        DocKind::ChainMap => {
            let f = format::chain_map(&input.doc, opts.ring, input.base, "map")?;
            rep.check("source", &validate_complex(f.source()));
            rep.check("target", &validate_complex(f.target()));
            rep.check("chain_map", &f.validate());
        }
        DocKind::Pair => {
            let p = format::pair(&input.doc, opts.ring, input.base, "pair")?;
            let (rel, poincare) = match &p {
                Pair::Sym(p) => (check_pair_sym(p, false)?, check_pair_sym(p, true)?),
                Pair::Quad(p) => (check_pair_quad(p, false)?, check_pair_quad(p, true)?),
            };
            rep.check("relations", &rel);
            if rep.ok {
                rep.put("poincare", poincare.is_valid());
            }
        }
        DocKind::Cobordism => {
            let g = format::cobordism(&input.doc, opts.ring, input.base, "cobordism")?;
            let r = match &g {
                Cobordism::Sym(g) => g.check(true)?,
                Cobordism::Quad(g) => g.check(true)?,
            };
            rep.check("poincare_cobordism", &r);
        }
        DocKind::Form => {
            let q = format::form(&input.doc, opts.ring, "form")?;
            rep.put("rank", q.rank());
            let ns = q.is_nonsingular()?;
            rep.put("nonsingular", ns);
            rep.ok &= ns;
        }
        DocKind::Formation => {
            let (phi, _) = format::formation(&input.doc, opts.ring, "formation")?;
            rep.check("formation", &check_formation(&phi)?);
        }
    }
    Ok(Output::report(rep))
}

pub fn homology_cmd(input: &Input, opts: &Options) -> CliResult<Output> {
    let c = complex_of(input, opts)?;
    let mut rep = Report::new();
    if let Some(d) = validate_complex(&c).failures.first() {
        return Err(CliError::Failed(format!("not a chain complex: {d}")));
    }
    let over = match c.ring() {
        Ring::CyclicGroupRing(_) => {
            rep.put("coefficients", format!("Z (restricted from {})", c.ring()));
            c.restrict_scalars()?
        }
        r => {
            rep.put("coefficients", r.to_string());
            c
        }
    };
    for h in homology(&over)? {
        rep.put(&format!("H_{}", h.degree), h.to_string());
    }
    Ok(Output::report(rep))
}

pub fn dualize(input: &Input, opts: &Options) -> CliResult<Output> {
    let (c, n) = match format::doc_kind(&input.doc)? {
        DocKind::Structured => {
            let x = format::structured(&input.doc, opts.ring, "complex")?;
            let n = opts.n.unwrap_or(x.n());
            (x.complex().clone(), n)
        }
        _ => {
            let n = opts.n.ok_or_else(|| CliError::Input("dualize needs --n for a plain complex".into()))?;
            (complex_of(input, opts)?, n)
        }
    };
    let dual = c.dual(n);
    let mut rep = Report::new();
    rep.put("n", n);
    rep.put("window", window(&dual));
    Ok(Output { report: rep, documents: vec![("dual".into(), format::complex_value(&dual))] })
}

pub fn cone(input: &Input, opts: &Options) -> CliResult<Output> {
    let f = format::chain_map(&input.doc, opts.ring, input.base, "map")?;
    let mut rep = Report::new();
    rep.check("chain_map", &f.validate());
    if !rep.ok {
        return Ok(Output::report(rep));
    }
    let c = mapping_cone(&f);
    rep.put("window", window(&c));
    Ok(Output { report: rep, documents: vec![("cone".into(), format::complex_value(&c))] })
}

pub fn surger(input: &Input, opts: &Options) -> CliResult<Output> {
    let p = format::pair(&input.doc, opts.ring, input.base, "data")?;
    let mut rep = Report::new();
    let (effect, trace, poincare, trace_rep) = match p {
        Pair::Sym(p) => {
            let out = surgery_sym(&p)?;
            let poincare = is_poincare_sym(&out.effect)?;
            let r = out.trace.check(true)?;
            (Structured::Sym(out.effect), Cobordism::Sym(out.trace), poincare, r)
        }
        Pair::Quad(p) => {
            let out = surgery_quad(&p)?;
            let poincare = is_poincare_quad(&out.effect)?;
            let r = out.trace.check(true)?;
            (Structured::Quad(out.effect), Cobordism::Quad(out.trace), poincare, r)
        }
    };
    rep.put("effect_window", window(effect.complex()));
    rep.put("effect_ranks", effect.complex().ranks().to_vec());
    rep.put("effect_poincare", poincare);
    rep.check("trace_poincare", &trace_rep);
    Ok(Output {
        report: rep,
        documents: vec![
            ("effect".into(), format::structured_value(&effect)),
            ("trace".into(), format::cobordism_value(&trace)),
        ],
    })
}

pub fn obstruction(input: &Input, opts: &Options) -> CliResult<Output> {
    let Structured::Quad(x) = format::structured(&input.doc, opts.ring, "complex")? else {
        return Err(CliError::Input("the instant obstruction needs a quadratic complex".into()));
    };
    let ob = instant_obstruction(&x)?;
    let class = witt_class_z(&ob.form)?;
    let mut rep = Report::new();
    rep.put("n", x.n());
    rep.put("rank", ob.form.rank());
    rep.put("lambda", format::matrix_value(ob.form.lambda()));
    rep.put("witt_class", class.to_string());
    Ok(Output { report: rep, documents: vec![("obstruction".into(), format::form_value(&ob.form))] })
}

pub fn invariants(input: &Input, opts: &Options) -> CliResult<Output> {
    let q = match format::doc_kind(&input.doc)? {
        DocKind::Formation => format::formation(&input.doc, opts.ring, "form")?.0.form,
        _ => format::form(&input.doc, opts.ring, "form")?,
    };
    let mut rep = Report::new();
    rep.put("rank", q.rank());
    rep.put("epsilon", q.parity().sign());
    let ns = q.is_nonsingular()?;
    rep.put("nonsingular", ns);
    if q.ring() == Ring::Integers {
        if q.parity().is_even() {
            rep.put("signature", signature(q.lambda())?);
        } else if ns {
            rep.put("arf", arf(&q)?);
        }
        if ns {
            rep.put("witt_class", witt_class_z(&q)?.to_string());
        }
    }
    rep.ok = ns;
    Ok(Output::report(rep))
}

pub fn trivial_witness(input: &Input, opts: &Options) -> CliResult<Output> {
    let (phi, h) = format::formation(&input.doc, opts.ring, "formation")?;
    let mut rep = Report::new();
    let w = match h {
        Some(h) => {
            rep.put("witness", "common complement");
            TrivialWitness::CommonComplement(h)
        }
        None => {
            rep.put("witness", "F + G = K");
            TrivialWitness::Complementary
        }
    };
    rep.check("accepted", &is_trivial_witness(&phi, &w)?);
    Ok(Output::report(rep))
}

pub fn roundtrip(input: &Input, opts: &Options) -> CliResult<Output> {
    let g = format::cobordism(&input.doc, opts.ring, input.base, "cobordism")?;
    let rt = match &g {
        Cobordism::Sym(g) => cobordism_to_data(g)?,
        Cobordism::Quad(g) => cobordism_to_data_quad(g)?,
    };
    let mut rep = Report::new();
    rep.check("data_relations", &check_pair_sym(&rt.data, false)?);
    rep.put("g_equivalence", rt.g_verdict.holds);
    rep.put("contraction_certificate", rt.g_verdict.contraction.is_some());
    rep.ok &= rt.g_verdict.holds;
    Ok(Output { report: rep, documents: vec![("data".into(), format::pair_value(&Pair::Sym(rt.data)))] })
}

/// Extra parameters for `example`.
#[derive(Clone, Debug, Default)]
pub struct ExampleParams {
    pub g: Option<usize>,
    pub i: Option<i64>,
    pub variant: Option<String>,
    pub max_rank: usize,
}

/// Fixture names with one-line descriptions.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("sphere", "symmetric n-sphere (--n, --ring)"),
    ("quadratic-sphere", "quadratic n-sphere (--n, --ring)"),
    ("hyperbolic", "quadratic complex of the hyperbolic form in degree n/2 (--n even, --g)"),
    ("e8", "quadratic complex of the E8 form in degree n/2 over Z (--n even)"),
    ("arf", "quadratic complex of the Arf-one form in degree n/2 over Z (n/2 odd)"),
    ("double-cover", "surgery data on the circle (--variant orientable|nonorientable)"),
    ("double-cover-trace", "trace of the circle double-cover surgery (--variant)"),
    ("hyperbolic-form", "hyperbolic (-1)^i-quadratic form (--g, --i)"),
    ("e8-form", "the E8 form"),
    ("arf-form", "the (-1)-quadratic form with mu = (1,1)"),
    ("hyperbolic-formation", "hyperbolic form with its standard lagrangian pair (--g, --i)"),
    ("random-symmetric", "random symmetric Poincare complex (--seed, --n, --ring)"),
    ("random-quadratic", "random quadratic Poincare complex (--seed, --n, --ring)"),
    ("random-pair", "random quadratic surgery data (--seed, --n, --ring)"),
    ("random-cobordism", "random symmetric cobordism built from traces (--seed, --n, --ring)"),
];

fn half(n: i64) -> CliResult<i64> {
    if n.rem_euclid(2) != 0 {
        return Err(CliError::Input(format!("this example needs even n, got {n}")));
    }
    Ok(n / 2)
}

fn integers_only(ring: Ring, name: &str) -> CliResult<()> {
    if ring != Ring::Integers {
        return Err(CliError::Input(format!("{name} is only defined over Z")));
    }
    Ok(())
}

pub fn example(name: &str, opts: &Options, params: &ExampleParams) -> CliResult<Output> {
    let ring = opts.ring.unwrap_or(Ring::Integers);
    let variant = match params.variant.as_deref() {
        None => DoubleCover::Orientable,
        Some(v) => DoubleCover::parse(v).ok_or_else(|| CliError::Input(format!("unknown variant {v:?}")))?,
    };
    let g = params.g.unwrap_or(1);
    let i = params.i.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let doc = match name {
        "sphere" => format::symmetric_value(&fixtures::sphere_over(ring, opts.n.unwrap_or(2))),
        "quadratic-sphere" => format::quadratic_value(&fixtures::quadratic_sphere(ring, opts.n.unwrap_or(2))),
        "hyperbolic" => format::quadratic_value(&fixtures::hyperbolic_complex(ring, half(opts.n.unwrap_or(2))?, g)),
        "e8" => {
            integers_only(ring, name)?;
            format::quadratic_value(&fixtures::e8_complex(half(opts.n.unwrap_or(4))?))
        }
        "arf" => {
            integers_only(ring, name)?;
            let i = half(opts.n.unwrap_or(2))?;
            if i.rem_euclid(2) != 1 {
                return Err(CliError::Input("the Arf example needs n/2 odd".into()));
            }
            format::quadratic_value(&fixtures::arf_one_complex(i))
        }
        "double-cover" => format::pair_value(&Pair::Quad(fixtures::double_cover_surgery(variant))),
        "double-cover-trace" => {
            let out = surgery_quad(&fixtures::double_cover_surgery(variant))?;
            format::cobordism_value(&Cobordism::Quad(out.trace))
        }
        "hyperbolic-form" => format::form_value(&hyperbolic(ring, g, i)),
        "e8-form" => {
            integers_only(ring, name)?;
            let psi = fixtures::upper_refinement(&fixtures::e8_matrix());
            format::form_value(&EpsQuadraticForm::from_psi(0, &psi)?)
        }
        "arf-form" => {
            integers_only(ring, name)?;
            format::form_value(&EpsQuadraticForm::from_psi(1, &Matrix::from_ints(ring, 2, 2, &[1, 1, 0, 1]))?)
        }
        "hyperbolic-formation" => {
            let phi = Formation {
                form: hyperbolic(ring, g, i),
                f: hyperbolic_lagrangian(ring, g),
                g: hyperbolic_dual_lagrangian(ring, g),
            };
            format::formation_value(&phi, None)
        }
        "random-symmetric" => format::symmetric_value(&sampler::random_symmetric_poincare(
            &mut rng,
            ring,
            opts.n.unwrap_or(2),
            params.max_rank,
        )),
        "random-quadratic" => format::quadratic_value(&sampler::random_quadratic_poincare(
            &mut rng,
            ring,
            opts.n.unwrap_or(2),
            params.max_rank,
        )),
        "random-pair" => {
            let n = opts.n.unwrap_or(2);
            let p = (0..64)
                .find_map(|_| {
                    let x = sampler::random_quadratic_poincare(&mut rng, ring, n, params.max_rank);
                    sampler::random_quad_pair(&mut rng, &x, params.max_rank).transpose()
                })
                .ok_or_else(|| CliError::Failed("no surgery data found for this seed".into()))??;
            format::pair_value(&Pair::Quad(p))
        }
        "random-cobordism" => {
            let n = opts.n.unwrap_or(1);
            let gamma = (0..64)
                .find_map(|_| {
                    let x = sampler::random_symmetric_poincare(&mut rng, ring, n, 2);
                    sampler::random_cobordism(&mut rng, &x, 2, 2).transpose()
                })
                .ok_or_else(|| CliError::Failed("no cobordism found for this seed".into()))??;
            format::cobordism_value(&Cobordism::Sym(gamma))
        }
        _ => {
            let names: Vec<&str> = EXAMPLES.iter().map(|(n, _)| *n).collect();
            return Err(CliError::Input(format!("unknown example {name:?}; available: {}", names.join(", "))));
        }
    };
    let mut rep = Report::new();
    rep.put("example", name);
    rep.put("document", format!("{:?}", format::doc_kind(&doc)?).to_lowercase());
    Ok(Output { report: rep, documents: vec![(name.into(), doc)] })
}

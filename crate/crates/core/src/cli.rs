//! Command-line surface of the `tbk` binary. Every command produces a JSON
//! report; [`run`] is what the binary calls, so tests can drive the same
//! code path in-process.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bogomolov::{bogomolov_example, Convention, ExampleBundle, LABEL_CAVEAT};
use crate::brauer::{
    in_b0, in_bg, in_bg_bicyclic, orbifold_dims, span_analysis, verify_cor53, SectorData,
};
use crate::cocycle::{
    cocycle_failure, from_bilinear_form, from_central_extension, h2_small, inflate, is_coboundary,
    restrict, twisted_assoc_check, BilinearForm, CoboundarySense, GSet,
};
use crate::error::{Error, Result};
use crate::grp::{abelian_structure, named, quotient_by_central, Character, FiniteGroup};
use crate::io::{
    decode_cocycle, decode_group, decode_gset, decode_model, decode_vector, display_subspace,
    encode_cocycle, encode_group, write_json, Document, GeneratorFile,
};
use crate::rep::fixed_locus_survey;

#[derive(Parser, Debug)]
#[command(
    name = "tbk",
    version,
    about = "Exact computations with twisted group cohomology"
)]
pub struct Cli {
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timings in the report
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Matrix-group closure and group summaries
    #[command(subcommand)]
    Group(GroupCmd),
    /// Schur multiplier of a small group
    H2 {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = crate::cocycle::H2_DEFAULT_CAP)]
        cap: usize,
    },
    /// Cocycle checks and constructions
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// Membership in the unramified subgroup
    #[command(subcommand)]
    B0(B0Cmd),
    /// Membership in the subgroup attached to a linear action model
    #[command(subcommand)]
    Bg(BgCmd),
    /// Linear span analysis of a catalog of classes
    #[command(subcommand)]
    Span(SpanCmd),
    /// Twisted orbifold dimension sums
    #[command(subcommand)]
    Orbifold(OrbifoldCmd),
    /// Built-in example
    #[command(subcommand)]
    Example(ExampleCmd),
    /// Twisted group algebra checks
    #[command(subcommand)]
    Twisted(TwistedCmd),
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Close a set of matrix generators
    Closure {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long, default_value_t = crate::grp::DEFAULT_CLOSURE_BOUND)]
        bound: usize,
        /// Also write the Cayley table as a group file
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Order, exponent, classes and center of a group
    Info {
        #[arg(long)]
        group: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct CocycleArg {
    #[arg(long)]
    pub cocycle: PathBuf,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Sense {
    Torus,
    ModM,
}

#[derive(Subcommand, Debug)]
pub enum CocycleCmd {
    Check(CocycleArg),
    Coboundary {
        #[command(flatten)]
        input: CocycleArg,
        #[arg(long, value_enum, default_value_t = Sense::Torus)]
        sense: Sense,
    },
    /// Restrict to the subgroup generated by the given element indices
    Restrict {
        #[command(flatten)]
        input: CocycleArg,
        #[arg(long, value_delimiter = ',')]
        subgroup: Vec<usize>,
    },
    /// Pull back along a homomorphism from another group
    Inflate {
        #[command(flatten)]
        input: CocycleArg,
        /// group file of the source group
        #[arg(long)]
        group: PathBuf,
        /// element map source → cocycle group, comma separated
        #[arg(long, value_delimiter = ',')]
        map: Vec<usize>,
    },
    /// Cocycle of a central extension `N → G → G/N` and a character of `N`
    FromExtension {
        #[arg(long)]
        group: PathBuf,
        /// generators of the central subgroup
        #[arg(long, value_delimiter = ',')]
        kernel: Vec<usize>,
        /// character values on the sorted kernel elements
        #[arg(long, value_delimiter = ',')]
        character: Vec<u64>,
        #[arg(long)]
        modulus: u64,
    },
    /// Cocycle `dlog(x)ᵀ B dlog(y)` on an abelian group
    FromBilinear {
        /// invariant factors of the group, e.g. 2,2
        #[arg(long, value_delimiter = ',')]
        factors: Vec<u64>,
        #[arg(long)]
        modulus: u64,
        /// rows separated by ';', entries by ','
        #[arg(long)]
        matrix: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum B0Cmd {
    Test(CocycleArg),
}

#[derive(Copy, Clone, Debug, ValueEnum, PartialEq, Eq)]
pub enum Method {
    Pairs,
    Bicyclic,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum BgCmd {
    Test {
        #[command(flatten)]
        input: CocycleArg,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Pairs)]
        method: Method,
    },
}

#[derive(Subcommand, Debug)]
pub enum SpanCmd {
    Analyze {
        #[arg(long, num_args = 1.., required = true)]
        cocycles: Vec<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OrbifoldCmd {
    Dims {
        #[command(flatten)]
        input: CocycleArg,
        #[arg(long)]
        model: PathBuf,
        /// per-class sector characters `{"<rep>": [literal, ..]}`
        #[arg(long)]
        characters: Option<PathBuf>,
    },
    VerifyCor53 {
        #[command(flatten)]
        input: CocycleArg,
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum ConventionArg {
    Involution,
    Literal,
}

#[derive(Subcommand, Debug)]
pub enum ExampleCmd {
    Bogomolov {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = ConventionArg::Involution)]
        convention: ConventionArg,
        /// Write generators, model and catalog files here
        #[arg(long)]
        emit_dir: Option<PathBuf>,
        /// Lift the guard on the prime
        #[arg(long)]
        allow_large: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum TwistedCmd {
    AssocCheck {
        #[command(flatten)]
        input: CocycleArg,
        /// G-set file `{"action": [..]}`; defaults to a point
        #[arg(long)]
        gset: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
}

/// Report plus a one-line summary for stderr.
pub struct Outcome {
    pub report: Value,
    pub summary: String,
}

struct Inputs(BTreeMap<String, String>);

impl Inputs {
    fn new() -> Self {
        Inputs(BTreeMap::new())
    }

    fn read(&mut self, path: &Path) -> Result<Document> {
        let doc = Document::read(path)?;
        self.0
            .insert(path.display().to_string(), doc.digest.clone());
        Ok(doc)
    }
}

fn membership_json(g: &FiniteGroup, m: &crate::brauer::Membership) -> Value {
    json!({
        "member": m.member,
        "witness": m.witness.map(|(a, b)| json!({"g": a, "h": b, "g_label": g.label(a), "h_label": g.label(b)})),
    })
}

fn labels(g: &FiniteGroup, el: &[usize]) -> Value {
    json!(el.iter().map(|&x| g.label(x)).collect::<Vec<_>>())
}

/// Runs one command and returns its report.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let start = Instant::now();
    let mut inputs = Inputs::new();
    let (mut result, summary, extra) = dispatch(&cli.command, &mut inputs)?;
    if let Value::Object(map) = &mut result {
        if let Some(Value::Object(e)) = extra {
            map.extend(e);
        }
    }
    let mut report = json!({
        "command": command_echo(&cli.command),
        "inputs": inputs.0,
        "result": result,
        "version": env!("CARGO_PKG_VERSION"),
    });
    if cli.timings {
        report["timings"] = json!({ "wall_seconds": start.elapsed().as_secs_f64() });
    }
    Ok(Outcome { report, summary })
}

fn command_echo(c: &Command) -> Value {
    // Debug output of the parsed command is stable for a given version
    json!(format!("{c:?}"))
}

type Dispatched = (Value, String, Option<Value>);

fn dispatch(cmd: &Command, inputs: &mut Inputs) -> Result<Dispatched> {
    match cmd {
        Command::Group(GroupCmd::Closure {
            generators,
            bound,
            emit,
        }) => {
            let doc = inputs.read(generators)?;
            let gf = GeneratorFile::decode(&doc.value, "")?;
            let rep = gf.close((*bound).min(crate::grp::max_order()))?;
            let g = rep.group();
            if let Some(path) = emit {
                write_json(path, &encode_group(g))?;
            }
            let res = json!({
                "order": g.order(),
                "degree": rep.degree(),
                "cyclotomic_order": rep.order(),
                "generators": g.generators(),
                "exponent": g.exponent(),
                "abelian": g.is_abelian(),
            });
            Ok((res, format!("closure: order {}", g.order()), None))
        }
        Command::Group(GroupCmd::Info { group }) => {
            let doc = inputs.read(group)?;
            let lg = decode_group(&doc.value, doc.path.parent().unwrap_or(Path::new(".")), "")?;
            let g = lg.group();
            let classes = g.conjugacy_classes();
            let mut res = json!({
                "order": g.order(),
                "exponent": g.exponent(),
                "abelian": g.is_abelian(),
                "classes": classes.len(),
                "center_order": g.center().order(),
                "generators": g.generators(),
            });
            if g.is_abelian() {
                res["invariant_factors"] =
                    json!(abelian_structure(g, &g.whole())?.invariant_factors);
            }
            Ok((
                res,
                format!(
                    "group of order {} with {} classes",
                    g.order(),
                    classes.len()
                ),
                None,
            ))
        }
        Command::H2 { group, cap } => {
            let doc = inputs.read(group)?;
            let lg = decode_group(&doc.value, doc.path.parent().unwrap_or(Path::new(".")), "")?;
            let s = h2_small(lg.group(), *cap)?;
            let res =
                json!({ "invariant_factors": s.invariant_factors, "trivial": s.is_trivial() });
            Ok((
                res,
                format!("H2 invariant factors {:?}", s.invariant_factors),
                None,
            ))
        }
        Command::Cocycle(c) => cocycle_cmd(c, inputs),
        Command::B0(B0Cmd::Test(a)) => {
            let lc = decode_cocycle(&inputs.read(&a.cocycle)?)?;
            let g = lc.group.group();
            let m = in_b0(g, &lc.cocycle)?;
            Ok((
                membership_json(g, &m),
                format!("B0 member: {}", m.member),
                None,
            ))
        }
        Command::Bg(BgCmd::Test {
            input,
            model,
            method,
        }) => {
            let lc = decode_cocycle(&inputs.read(&input.cocycle)?)?;
            let md = decode_model(&inputs.read(model)?)?;
            check_same_group(lc.group.group(), md.group())?;
            let g = md.group();
            let mut res = json!({ "method": format!("{method:?}").to_lowercase() });
            let mut verdicts = Vec::new();
            if matches!(method, Method::Pairs | Method::Both) {
                let m = in_bg(&md, &lc.cocycle)?;
                verdicts.push(m.member);
                res["pairs"] = membership_json(g, &m);
            }
            if matches!(method, Method::Bicyclic | Method::Both) {
                let b = in_bg_bicyclic(&md, &lc.cocycle)?;
                verdicts.push(b.member);
                res["bicyclic"] = json!({
                    "member": b.member,
                    "subgroups_examined": b.subgroups_examined,
                    "witness": b.witness.as_ref().map(|w| json!({
                        "A": labels(g, w.a.elements()),
                        "K": labels(g, w.k.elements()),
                        "W_dim": w.w.dim(),
                    })),
                });
            }
            if verdicts.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::Disagreement(
                    "commuting-pair and bicyclic B_G tests disagree".into(),
                ));
            }
            res["member"] = json!(verdicts[0]);
            Ok((res, format!("B_G member: {}", verdicts[0]), None))
        }
        Command::Span(SpanCmd::Analyze { cocycles, model }) => {
            let mut basis = Vec::new();
            let mut group = None;
            for path in cocycles {
                let lc = decode_cocycle(&inputs.read(path)?)?;
                if let Some(g) = &group {
                    check_same_group(g, lc.group.group())?;
                } else {
                    group = Some(lc.group.group().clone());
                }
                basis.push(lc.cocycle);
            }
            let g = group.expect("at least one cocycle");
            let md = model
                .as_ref()
                .map(|m| decode_model(&inputs.read(m)?))
                .transpose()?;
            if let Some(md) = &md {
                check_same_group(&g, md.group())?;
            }
            let r = span_analysis(&g, &basis, md.as_ref())?;
            let res = json!({
                "modulus": r.modulus,
                "conditions": r.conditions,
                "kernel": r.kernel,
                "kernel_trivial": r.kernel_trivial,
                "trivial": r.trivial,
                "invariant_factors": r.invariant_factors,
                "quotient_generators": r.quotient_generators,
            });
            Ok((
                res,
                format!("span modulo trivial classes: {:?}", r.invariant_factors),
                None,
            ))
        }
        Command::Orbifold(OrbifoldCmd::Dims {
            input,
            model,
            characters,
        }) => {
            let lc = decode_cocycle(&inputs.read(&input.cocycle)?)?;
            let md = decode_model(&inputs.read(model)?)?;
            check_same_group(lc.group.group(), md.group())?;
            let data = match characters {
                None => SectorData::Scalar,
                Some(path) => {
                    let doc = inputs.read(path)?;
                    let obj = doc.value.as_object().ok_or_else(|| {
                        Error::malformed("", "expected an object keyed by class representative")
                    })?;
                    let order = md.rep().order().max(lc.cocycle.modulus() as u32);
                    let mut map = BTreeMap::new();
                    for (k, v) in obj {
                        let rep: usize = k.parse().map_err(|_| {
                            Error::malformed(format!("/{k}"), "key must be an element index")
                        })?;
                        map.insert(rep, decode_vector(v, order, &format!("/{k}"))?);
                    }
                    SectorData::Characters(map)
                }
            };
            let r = orbifold_dims(&md, &lc.cocycle, &data)?;
            let res = json!({
                "twisted_total": r.twisted_total,
                "untwisted_total": r.untwisted_total,
                "classes": r.classes.iter().map(|c| json!({
                    "representative": c.representative,
                    "label": md.group().label(c.representative),
                    "class_size": c.class_size,
                    "meets_complement": c.meets_complement,
                    "l_trivial": c.l_trivial,
                    "supplied_dim": c.supplied_dim,
                    "twisted": c.twisted,
                    "untwisted": c.untwisted,
                })).collect::<Vec<_>>(),
            });
            Ok((
                res,
                format!(
                    "twisted total {} vs untwisted {}",
                    r.twisted_total, r.untwisted_total
                ),
                None,
            ))
        }
        Command::Orbifold(OrbifoldCmd::VerifyCor53 { input, model }) => {
            let lc = decode_cocycle(&inputs.read(&input.cocycle)?)?;
            let md = decode_model(&inputs.read(model)?)?;
            check_same_group(lc.group.group(), md.group())?;
            let g = md.group();
            let v = verify_cor53(&md, &lc.cocycle)?;
            let res = json!({
                "in_bg": v.in_bg,
                "nonempty_sectors_untwisted": v.nonempty_sectors_untwisted,
                "termwise_equal": v.termwise_equal,
                "twisted_total": v.report.twisted_total,
                "untwisted_total": v.report.untwisted_total,
                "witness": v.witness.map(|(x, h)| json!({
                    "class": x, "class_label": g.label(x), "centralizer_element": h, "element_label": g.label(h),
                })),
            });
            Ok((res, format!("termwise equal: {}", v.termwise_equal), None))
        }
        Command::Example(ExampleCmd::Bogomolov {
            p,
            convention,
            emit_dir,
            allow_large,
        }) => {
            let conv = match convention {
                ConventionArg::Involution => Convention::Involution,
                ConventionArg::Literal => Convention::Literal,
            };
            let max = if *allow_large {
                u64::MAX
            } else {
                crate::bogomolov::DEFAULT_MAX_PRIME
            };
            let bundle = bogomolov_example(*p, conv, max)?;
            let res = example_report(&bundle)?;
            if let Some(dir) = emit_dir {
                emit_example(&bundle, dir)?;
            }
            let summary = format!(
                "order {}, span modulo trivial classes {}",
                bundle.group().order(),
                res["span_analysis"]["invariant_factors"]
            );
            Ok((res, summary, Some(example_notes(&bundle))))
        }
        Command::Twisted(TwistedCmd::AssocCheck {
            input,
            gset,
            trials,
        }) => {
            let lc = decode_cocycle(&inputs.read(&input.cocycle)?)?;
            let g = lc.group.group();
            let set = match gset {
                None => GSet::point(g),
                Some(path) => decode_gset(&inputs.read(path)?.value, g)?,
            };
            let ok = twisted_assoc_check(g, &lc.cocycle, &set, *trials)?;
            Ok((
                json!({ "associative": ok, "trials": trials, "points": set.points() }),
                format!("associative: {ok}"),
                None,
            ))
        }
    }
}

fn check_same_group(a: &FiniteGroup, b: &FiniteGroup) -> Result<()> {
    if a.order() != b.order()
        || (0..a.order()).any(|x| (0..a.order()).any(|y| a.mul(x, y) != b.mul(x, y)))
    {
        return Err(Error::DimensionMismatch(
            "inputs refer to different groups (or different element numberings)".into(),
        ));
    }
    Ok(())
}

fn cocycle_cmd(c: &CocycleCmd, inputs: &mut Inputs) -> Result<Dispatched> {
    match c {
        CocycleCmd::Check(a) => {
            let lc = decode_cocycle(&inputs.read(&a.cocycle)?)?;
            let f = cocycle_failure(lc.group.group(), &lc.cocycle)?;
            Ok((
                json!({ "cocycle": f.is_none(), "failure": f.map(|(x, y, z)| [x, y, z]) }),
                format!("cocycle: {}", f.is_none()),
                None,
            ))
        }
        CocycleCmd::Coboundary { input, sense } => {
            let lc = decode_cocycle(&inputs.read(&input.cocycle)?)?;
            let s = match sense {
                Sense::Torus => CoboundarySense::Torus,
                Sense::ModM => CoboundarySense::ModM,
            };
            let w = is_coboundary(lc.group.group(), &lc.cocycle, s)?;
            Ok((
                json!({
                    "coboundary": w.is_some(),
                    "sense": format!("{sense:?}").to_lowercase(),
                    "witness": w.as_ref().map(|w| json!({"modulus": w.modulus, "values": w.values})),
                }),
                format!("coboundary: {}", w.is_some()),
                None,
            ))
        }
        CocycleCmd::Restrict { input, subgroup } => {
            let lc = decode_cocycle(&inputs.read(&input.cocycle)?)?;
            let g = lc.group.group();
            if let Some(&bad) = subgroup.iter().find(|&&x| x >= g.order()) {
                return Err(Error::malformed(
                    "/subgroup",
                    format!("element {bad} out of range"),
                ));
            }
            let h = g.subgroup_generated(subgroup);
            let r = restrict(&lc.cocycle, &h);
            let hg = h.to_group(g);
            Ok((
                json!({ "elements": h.elements(), "cocycle": encode_cocycle(&r, encode_group(&hg)) }),
                format!("restricted to a subgroup of order {}", h.order()),
                None,
            ))
        }
        CocycleCmd::Inflate { input, group, map } => {
            let lc = decode_cocycle(&inputs.read(&input.cocycle)?)?;
            let doc = inputs.read(group)?;
            let src = decode_group(&doc.value, doc.path.parent().unwrap_or(Path::new(".")), "")?;
            if map.len() != src.group().order()
                || map.iter().any(|&x| x >= lc.group.group().order())
            {
                return Err(Error::malformed(
                    "/map",
                    "map must send every source element into the cocycle's group",
                ));
            }
            let c = inflate(&lc.cocycle, lc.group.group(), src.group(), map)?;
            Ok((
                json!({ "cocycle": encode_cocycle(&c, encode_group(src.group())) }),
                format!("inflated to order {}", src.group().order()),
                None,
            ))
        }
        CocycleCmd::FromExtension {
            group,
            kernel,
            character,
            modulus,
        } => {
            let doc = inputs.read(group)?;
            let lg = decode_group(&doc.value, doc.path.parent().unwrap_or(Path::new(".")), "")?;
            let g = lg.group();
            if let Some(&bad) = kernel.iter().find(|&&x| x >= g.order()) {
                return Err(Error::malformed(
                    "/kernel",
                    format!("element {bad} out of range"),
                ));
            }
            let n = g.subgroup_generated(kernel);
            let e = quotient_by_central(g, &n)?;
            let psi = Character::new(g, &n, *modulus, character.clone())?;
            let c = from_central_extension(g, &e, &psi)?;
            Ok((
                json!({
                    "kernel": n.elements(),
                    "projection": e.projection,
                    "cocycle": encode_cocycle(&c, encode_group(&e.quotient)),
                }),
                format!(
                    "extension cocycle on a quotient of order {}",
                    e.quotient.order()
                ),
                None,
            ))
        }
        CocycleCmd::FromBilinear {
            factors,
            modulus,
            matrix,
        } => {
            if factors.is_empty() || factors.contains(&0) {
                return Err(Error::malformed("/factors", "factors must be positive"));
            }
            let g = named::abelian(factors);
            let s = abelian_structure(&g, &g.whole())?;
            let mut rows = Vec::new();
            for (i, r) in matrix.split(';').enumerate() {
                let row = r
                    .split(',')
                    .enumerate()
                    .map(|(j, x)| {
                        x.trim().parse::<u64>().map_err(|_| {
                            Error::malformed(format!("/matrix/{i}/{j}"), "expected an integer")
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
            }
            let form = BilinearForm::new(s.clone(), *modulus, rows)?;
            let c = from_bilinear_form(&form);
            Ok((
                json!({
                    "invariant_factors": s.invariant_factors,
                    "cocycle": encode_cocycle(&c, encode_group(&g)),
                }),
                "bilinear cocycle built".into(),
                None,
            ))
        }
    }
}

fn example_notes(b: &ExampleBundle) -> Value {
    json!({
        "convention": b.convention.map(|c| c.name()),
        "label_caveat": LABEL_CAVEAT,
    })
}

/// Order, relations, fixed-locus survey and catalog analysis of the example.
pub fn example_report(b: &ExampleBundle) -> Result<Value> {
    let g = b.group();
    let survey = fixed_locus_survey(&b.model);
    let forms = b.catalog[..6]
        .iter()
        .map(|e| b.inflate(&e.base))
        .collect::<Result<Vec<_>>>()?;
    let span = span_analysis(g, &forms, None)?;
    let span_bg = span_analysis(g, &forms, Some(&b.model))?;
    let p = b.p as usize;
    let catalog = b
        .catalog
        .iter()
        .zip(0..)
        .map(|(e, i)| -> Result<Value> {
            let c = if i < 6 {
                forms[i].clone()
            } else {
                b.inflate(&e.base)?
            };
            Ok(json!({
                "name": e.name,
                "coboundary": is_coboundary(g, &c, CoboundarySense::Torus)?.is_some(),
                "in_b0": in_b0(g, &c)?.member,
                "in_bg": in_bg(&b.model, &c)?.member,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "p": b.p,
        "order": g.order(),
        "degree": b.model.rep().degree(),
        "commutator_scalar_exponent": b.commutator_exponent,
        "relation_failures": b.relation_failures(),
        "threshold": b.model.threshold(),
        "arrangement_size": b.model.arrangement().len(),
        "min_nontrivial_codim": survey.min_nontrivial_codim(),
        "codim_histogram": survey.by_codim.iter().map(|(k, v)| (k.to_string(), v.len())).collect::<BTreeMap<_, _>>(),
        "codim_p_subspaces": survey.distinct_of_codim(p).iter().map(display_subspace).collect::<Vec<_>>(),
        "classes": survey.records.iter().map(|r| json!({
            "representative": g.label(r.representative),
            "class_size": r.class_size,
            "codim": r.codim,
            "meets_complement": r.meets_complement,
        })).collect::<Vec<_>>(),
        "span_analysis": {
            "invariant_factors": span.invariant_factors,
            "quotient_generators": span.quotient_generators,
            "kernel": span.kernel,
            "trivial": span.trivial,
        },
        "span_analysis_bg": { "invariant_factors": span_bg.invariant_factors },
        "catalog": catalog,
    }))
}

/// Writes `generators.json`, `group.json`, `model.json` and one cocycle
/// file per catalog form into `dir`.
pub fn emit_example(b: &ExampleBundle, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let rep = b.model.rep();
    let gens: Vec<_> = b.named.x.iter().map(|&x| rep.matrix(x).clone()).collect();
    let gf = GeneratorFile {
        degree: rep.degree(),
        cyclotomic_order: rep.order(),
        generators: gens,
        labels: Some(vec!["x1".into(), "x2".into(), "x3".into(), "x4".into()]),
    };
    write_json(&dir.join("generators.json"), &gf.encode())?;
    write_json(
        &dir.join("group.json"),
        &json!({ "generators_file": "generators.json" }),
    )?;
    write_json(
        &dir.join("model.json"),
        &json!({ "generators_file": "generators.json", "threshold": b.model.threshold() }),
    )?;
    write_json(
        &dir.join("model_open.json"),
        &json!({ "generators_file": "generators.json", "arrangement": [] }),
    )?;
    for e in &b.catalog[..6] {
        let c = b.inflate(&e.base)?;
        write_json(
            &dir.join(format!("{}.json", e.name)),
            &encode_cocycle(&c, json!("group.json")),
        )?;
    }
    Ok(())
}

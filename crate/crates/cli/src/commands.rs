use std::fs;

use clap::Parser;
use hecke_core::bqf::{enumerate_classes_with, isp, FormClassCycle, PoleSet};
use hecke_core::cfrac::{automorph_with, expansion};
use hecke_core::json::{
    AnalysisJson, CycleJson, EnumerationJson, FieldJson, GroupElementJson, PoleSetJson, RpfJson,
    VerdictJson,
};
use hecke_core::ratfun::{parse_expression, parse_field_element, parse_quad};
use hecke_core::rpf::{build_general, build_symmetric, build_theorem3, pole_at_zero, verify};
use hecke_core::{
    bqf, latex, make_field, Budget, Error, ExtendedPoint, FieldElement, GroupElement,
    QuadExtElement, QuadField, RpfExpression,
};
use serde_json::{json, Value};

use crate::manifest::{self, Manifest};
use crate::{
    BuildArgs, CfracCommand, ClassArgs, Cli, Command, FormsCommand, InputArgs, RpfCommand,
};

pub struct Outcome {
    pub json: Value,
    pub latex: String,
    pub code: u8,
}

impl Outcome {
    fn ok(json: Value, latex: String) -> Self {
        Outcome {
            json,
            latex,
            code: 0,
        }
    }

    pub fn render(&self, latex: bool) -> String {
        if latex {
            format!("{}\n", self.latex)
        } else {
            format!(
                "{}\n",
                serde_json::to_string_pretty(&self.json).expect("serializable")
            )
        }
    }
}

pub enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn run(argv: Vec<String>) -> u8 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run_cli(&cli, &argv) {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> u8 {
    match f {
        Failure::Core(Error::BudgetExceeded(n)) => {
            eprintln!("error: search budget exhausted after {n} steps; raise it with RPF_BUDGET or --budget");
            3
        }
        Failure::Core(e) => {
            eprintln!("error: {e}");
            1
        }
        Failure::Usage(m) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn run_cli(cli: &Cli, argv: &[String]) -> Res<(String, u8)> {
    let budget = Budget::parse(cli.budget.as_deref().unwrap_or(""))?;
    if let Command::Replay { path } = &cli.command {
        return replay(path, cli.latex);
    }
    let outcome = execute(&cli.command, &budget)?;
    let text = outcome.render(cli.latex);
    if let Some(path) = &cli.manifest {
        let m = Manifest::new(&argv[1..], &cli.command, &budget, &text);
        fs::write(path, m.to_json())
            .map_err(|e| Failure::Usage(format!("cannot write manifest {path}: {e}")))?;
    }
    Ok((text, outcome.code))
}

fn replay(path: &str, latex_flag: bool) -> Res<(String, u8)> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
    let m = Manifest::from_json(&text).map_err(Failure::Usage)?;
    let mut argv = vec!["hecke".to_string()];
    argv.extend(m.command_line.iter().cloned());
    argv.push("--budget".into());
    argv.push(manifest::budget_spec(&m.budget));
    let cli = Cli::try_parse_from(&argv)
        .map_err(|e| Failure::Usage(format!("manifest command does not parse: {e}")))?;
    let outcome = execute(&cli.command, &m.budget)?;
    let digest = manifest::digest(&outcome.render(cli.latex));
    let reproduced = digest == m.output_sha256;
    let out = json!({ "manifest": path, "reproduced": reproduced, "expected": m.output_sha256, "actual": digest });
    let body = if latex_flag {
        format!("{}\n", if reproduced { "reproduced" } else { "mismatch" })
    } else {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&out).expect("serializable")
        )
    };
    Ok((body, if reproduced { 0 } else { 1 }))
}

pub fn execute(cmd: &Command, budget: &Budget) -> Res<Outcome> {
    match cmd {
        Command::Field { p } => field(*p),
        Command::Group { p, word, apply } => group(*p, word, apply.as_deref()),
        Command::Forms(f) => forms(f, budget),
        Command::Cfrac(c) => cfrac(c, budget),
        Command::Rpf(RpfCommand::Build(b)) => build(b, budget),
        Command::Rpf(RpfCommand::Verify(i)) => check(i, budget, false),
        Command::Rpf(RpfCommand::Analyze(i)) => check(i, budget, true),
        Command::Replay { .. } => Err(Failure::Usage("nested replay".into())),
    }
}

fn field(p: i64) -> Res<Outcome> {
    let f = make_field(p)?;
    let j = FieldJson::new(&f);
    let mut terms: Vec<String> = vec![];
    for (i, c) in f.minimal_polynomial().iter().enumerate().rev() {
        let text = c.to_string();
        if text == "0" {
            continue;
        }
        let (neg, mag) = match text.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, text),
        };
        let mon = match i {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{{{i}}}"),
        };
        let body = if mon.is_empty() || mag != "1" {
            format!("{mag}{mon}")
        } else {
            mon
        };
        terms.push(match (terms.is_empty(), neg) {
            (true, true) => format!("-{body}"),
            (true, false) => body,
            (false, true) => format!("- {body}"),
            (false, false) => format!("+ {body}"),
        });
    }
    let tex = format!(
        r"\lambda_{{{p}}} = 2\cos(\pi/{p}), \quad {} = 0",
        terms.join(" ")
    );
    Ok(Outcome::ok(to_value(&j), tex))
}

fn point_string(x: &ExtendedPoint<QuadExtElement>) -> String {
    match x {
        ExtendedPoint::Finite(v) => v.to_expr_string(),
        ExtendedPoint::Infinity => "infinity".into(),
    }
}

fn group(p: i64, word: &str, apply: Option<&str>) -> Res<Outcome> {
    let f = make_field(p)?;
    let m = GroupElement::from_word(&f, word)?;
    let mut j = json!({ "word": word, "element": to_value(&GroupElementJson::new(&m)) });
    let mut tex = latex::group_element(&m);
    if let Some(x) = apply {
        let x = parse_quad(p, None, x)?;
        let image = m.mobius(&ExtendedPoint::Finite(x.clone()), x.quad_field());
        j["image"] = Value::String(point_string(&image));
        tex.push_str(&format!(
            r" \cdot \left({}\right) = {}",
            latex::quad_element(&x),
            image.finite().map_or(r"\infty".into(), latex::quad_element)
        ));
    }
    Ok(Outcome::ok(j, tex))
}

fn classes(
    c: &ClassArgs,
    budget: &Budget,
) -> Res<(FieldElement, Vec<FormClassCycle>, bqf::Enumeration)> {
    let d = parse_field_element(c.p, &c.disc)?;
    let e = enumerate_classes_with(c.p, &d, budget)?;
    Ok((d, e.classes.clone(), e))
}

fn pick(cs: &[FormClassCycle], i: usize) -> Res<&FormClassCycle> {
    if i == 0 || i > cs.len() {
        return Err(Failure::Usage(format!(
            "class index {i} out of range 1..={}",
            cs.len()
        )));
    }
    Ok(&cs[i - 1])
}

fn pole_set_tex(s: &PoleSet) -> String {
    let pts: Vec<String> = s.elements().iter().map(latex::quad_element).collect();
    format!(r"\left\{{ {} \right\}}", pts.join(", "))
}

fn forms(cmd: &FormsCommand, budget: &Budget) -> Res<Outcome> {
    match cmd {
        FormsCommand::Enumerate { class } => {
            let (_, cs, e) = classes(class, budget)?;
            let j = EnumerationJson::new(&e)?;
            let lines: Vec<String> = cs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let fs: Vec<String> = c.forms().iter().map(latex::form).collect();
                    format!(r"\mathcal{{A}}_{{{}}}: {}", i + 1, fs.join(", "))
                })
                .collect();
            let tex = format!(
                r"h_{{{},{}}} = {}",
                e.p,
                latex::field_element(&e.d),
                cs.len()
            ) + &lines.iter().map(|l| format!("\n{l}")).collect::<String>();
            Ok(Outcome::ok(to_value(&j), tex))
        }
        FormsCommand::Isp { class, index } => {
            let (_, cs, _) = classes(class, budget)?;
            let c = pick(&cs, *index)?;
            let s = isp(c)?;
            let j = json!({ "class": to_value(&CycleJson::new(c)?), "isp": to_value(&PoleSetJson::new(&s)) });
            Ok(Outcome::ok(
                j,
                format!(r"P_{{\mathcal{{A}}_{{{index}}}}} = {}", pole_set_tex(&s)),
            ))
        }
        FormsCommand::Symmetric { class, indices } => {
            let (d, cs, _) = classes(class, budget)?;
            let qf = QuadField::new(d)?;
            let mut set = PoleSet::new(&qf, vec![])?;
            for i in indices {
                set = set.union(&isp(pick(&cs, *i)?)?)?;
            }
            let j = json!({ "classes": indices, "union": to_value(&PoleSetJson::new(&set)) });
            let tex = format!(
                r"{} \text{{ is {}Hecke-symmetric}}",
                pole_set_tex(&set),
                if set.is_hecke_symmetric() { "" } else { "not " }
            );
            Ok(Outcome::ok(j, tex))
        }
    }
}

fn cfrac(cmd: &CfracCommand, budget: &Budget) -> Res<Outcome> {
    match cmd {
        CfracCommand::Expand { p, x } => {
            let x = parse_quad(*p, None, x)?;
            let e = expansion(&x, budget)?;
            let words =
                |ms: &[hecke_core::cfrac::Move]| ms.iter().map(|m| m.word()).collect::<Vec<_>>();
            let j = json!({
                "point": x.to_expr_string(),
                "radicand": x.radicand().to_expr_string(),
                "preperiod": words(&e.preperiod),
                "period": words(&e.period),
                "period_points": e.period_points().iter().map(|y| y.to_expr_string()).collect::<Vec<_>>(),
                "orbit": e.orbit.iter().map(|y| y.to_expr_string()).collect::<Vec<_>>(),
            });
            let tex = format!(
                r"{} = {} \cdot \overline{{{}}}",
                latex::quad_element(&x),
                if e.preperiod.is_empty() {
                    "I".into()
                } else {
                    words(&e.preperiod).join(" ")
                },
                words(&e.period).join(" ")
            );
            Ok(Outcome::ok(j, tex))
        }
        CfracCommand::Automorph { p, x } => {
            let x = parse_quad(*p, None, x)?;
            let m = automorph_with(&x, budget)?;
            let form = bqf::form_of_automorph(&m);
            let j = json!({
                "point": x.to_expr_string(),
                "automorph": to_value(&GroupElementJson::new(&m)),
                "form": to_value(&hecke_core::json::form_to_json(&form)),
            });
            Ok(Outcome::ok(
                j,
                format!(
                    "M_{{{}}} = {}",
                    latex::quad_element(&x),
                    latex::group_element(&m)
                ),
            ))
        }
    }
}

fn build(b: &BuildArgs, budget: &Budget) -> Res<Outcome> {
    let p = b.p;
    let pu = make_field(p)?.p();
    let expr = if b.pole_at_zero {
        let f = make_field(p)?;
        let qf = match &b.disc {
            Some(d) => QuadField::new(parse_field_element(p, d)?)?,
            None => QuadField::trivial(&f),
        };
        let c = |s: &str| parse_quad(p, Some(qf.radicand()), s);
        let a0 = c(b.a0.as_deref().unwrap_or("1"))?;
        let b1 = b.b1.as_deref().map(c).transpose()?;
        pole_at_zero(pu, b.k, a0, b1)?
    } else {
        let theorem = b
            .theorem
            .ok_or_else(|| Failure::Usage("choose --theorem 1|2|3 or --pole-at-zero".into()))?;
        let disc = b
            .disc
            .as_ref()
            .ok_or_else(|| Failure::Usage("--disc is required with --theorem".into()))?;
        let (d, cs, _) = classes(
            &ClassArgs {
                p,
                disc: disc.clone(),
            },
            budget,
        )?;
        if cs.is_empty() {
            return Err(Failure::Usage(format!(
                "no hyperbolic classes of discriminant {disc} on G_{p}"
            )));
        }
        if b.classes.is_empty() {
            return Err(Failure::Usage("at least one --class is required".into()));
        }
        if !b.coeffs.is_empty() && b.coeffs.len() != b.classes.len() {
            return Err(Failure::Usage("give one --coeff per --class".into()));
        }
        let coeff = |i: usize| b.coeffs.get(i).map_or("1", String::as_str);
        let chosen: Vec<FormClassCycle> = b
            .classes
            .iter()
            .map(|&i| pick(&cs, i).cloned())
            .collect::<Res<_>>()?;
        match theorem {
            3 => {
                if chosen.len() != 1 {
                    return Err(Failure::Usage(
                        "--theorem 3 takes exactly one --class".into(),
                    ));
                }
                build_theorem3(pu, b.k, &chosen[0], budget)?
            }
            2 => {
                let ds: Vec<(FormClassCycle, FieldElement)> = chosen
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| Ok((c, parse_field_element(p, coeff(i))?)))
                    .collect::<Res<_>>()?;
                let c0 = parse_field_element(p, b.c0.as_deref().unwrap_or("0"))?;
                build_symmetric(pu, b.k, &ds, c0)?
            }
            _ => {
                let qf = QuadField::new(d)?;
                let c = |s: &str| parse_quad(p, Some(qf.radicand()), s);
                let cls: Vec<(FormClassCycle, QuadExtElement)> = chosen
                    .into_iter()
                    .enumerate()
                    .map(|(i, cl)| Ok((cl, c(coeff(i))?)))
                    .collect::<Res<_>>()?;
                let c0 = c(b.c0.as_deref().unwrap_or("0"))?;
                let tail: Vec<QuadExtElement> =
                    b.tail.iter().map(|s| c(s)).collect::<Result<_, _>>()?;
                build_general(pu, b.k, &cls, c0, tail, budget)?
            }
        }
    };
    Ok(Outcome::ok(
        to_value(&RpfJson::new(&expr)),
        latex::rpf(&expr),
    ))
}

fn load(i: &InputArgs, budget: &Budget) -> Res<RpfExpression> {
    if let Some(path) = &i.input {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
        let doc: RpfJson = serde_json::from_str(&text).map_err(|e| Failure::Core(e.into()))?;
        let (expr, warnings) = doc.to_expression(budget)?;
        for w in warnings {
            eprintln!("warning: {w}");
        }
        return Ok(expr);
    }
    let (Some(e), Some(p), Some(k)) = (&i.expr, i.p, i.k) else {
        return Err(Failure::Usage(
            "give --in FILE or --expr E --p P --k K".into(),
        ));
    };
    let d = i
        .disc
        .as_deref()
        .map(|d| parse_field_element(p, d))
        .transpose()?;
    let parsed = parse_expression(p, d.as_ref(), e)?;
    Ok(RpfExpression::from_function(
        make_field(p)?.p(),
        k,
        parsed.value,
    ))
}

fn check(i: &InputArgs, budget: &Budget, analyze_only: bool) -> Res<Outcome> {
    let q = load(i, budget)?;
    let v = verify(&q, budget);
    let r = |f| latex::rational_function(f);
    if analyze_only {
        let mut j = to_value(&AnalysisJson::new(&v));
        j["rpf"] = Value::Bool(v.is_rpf());
        let isps: Vec<String> = v
            .isp_report
            .iter()
            .map(|e| {
                format!(
                    r"{}: \left\{{ {} \right\}}, \text{{ {}symmetric}}",
                    e.class.label(),
                    e.members
                        .iter()
                        .map(latex::quad_element)
                        .collect::<Vec<_>>()
                        .join(", "),
                    if e.symmetric { "" } else { "not " }
                )
            })
            .collect();
        let tex = format!(
            r"P(q) \text{{ is {}Hecke-symmetric}}",
            if v.full_pole_set_symmetric {
                ""
            } else {
                "not "
            }
        ) + &isps.iter().map(|l| format!("\n{l}")).collect::<String>();
        return Ok(Outcome::ok(j, tex));
    }
    let j = to_value(&VerdictJson::new(q.p, q.k, &v));
    let tex = format!(
        r"q + q|T = {}, \quad \sum_{{t=0}}^{{{}}} q|U^{{t}} = {}",
        r(&v.residual1),
        q.p - 1,
        r(&v.residual2)
    );
    Ok(Outcome {
        json: j,
        latex: tex,
        code: if v.is_rpf() { 0 } else { 2 },
    })
}

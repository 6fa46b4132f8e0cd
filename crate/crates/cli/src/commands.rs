use anyhow::{anyhow, bail, Context, Result};
use freeboundary::clopen::LevelFunction;
use freeboundary::coe::orbit_count;
use freeboundary::ktheory::{
    eta_apply, eta_matrix, explicit_preimage, membership_in_image, pv_k_groups, q_combination,
    sigma_residue, verify_recurrence, Coordinates, PvOptions,
};
use freeboundary::quotient::{class_of, density_witness, separating_element, separator_value};
use freeboundary::{BoundaryPoint, Int, Letter, ReducedWord, RelationSpec};
use serde_json::{json, Map, Value};

use crate::cache::DirCache;
use crate::output::render;
use crate::{Cli, Command, Outcome, VerifyCheck, WitnessMode};

pub fn run(cli: &Cli) -> Result<Outcome> {
    if cli.level == Some(0) {
        bail!("--level must be at least 1");
    }
    match &cli.command {
        Command::Kgroup => kgroup(cli),
        Command::Verify { check, coeffs } => verify(cli, *check, coeffs),
        Command::Witness { mode, x, y } => witness(cli, *mode, x, y),
        Command::Orbits => orbits(cli),
        Command::Act { g, x, class, eval } => act(cli, g, x, class.as_deref(), eval),
    }
}

fn emit(cli: &Cli, report: &Value, extra: &[(String, String)]) {
    print!("{}", render(report, extra, cli.format));
}

fn relation(cli: &Cli) -> Result<RelationSpec> {
    RelationSpec::parse(cli.d, &cli.relation).context("invalid --relation")
}

fn words_json(spec: &RelationSpec) -> Value {
    Value::Array(spec.words().iter().map(|w| json!(w.to_string())).collect())
}

fn ints_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

fn int_json(x: &Int) -> Value {
    serde_json::from_str(&x.to_string()).expect("integer literal")
}

fn kgroup(cli: &Cli) -> Result<Outcome> {
    let spec = relation(cli)?;
    let cache = cli.cache.clone().map(DirCache::new).transpose()?;
    let opts = PvOptions {
        cache: cache.as_ref().map(|c| c as _),
        cancel: None,
    };
    let k = pv_k_groups(&spec, cli.max_level, opts)?;
    let coords = match &k.coordinates {
        Coordinates::MarkedBasis(names) => names.join(","),
        Coordinates::NormalForm => "normal-form".to_string(),
    };
    let order = k.unit_order.as_ref().map_or("infinite".to_string(), Int::to_string);
    let extra = vec![
        ("coordinates".to_string(), coords),
        ("unit_order".to_string(), order),
    ];
    emit(cli, &k.to_json(), &extra);
    Ok(if k.stabilized {
        Outcome::Ok
    } else {
        Outcome::NotStabilized
    })
}

fn padded_coeffs(d: usize, coeffs: &[i64]) -> Result<Vec<Int>> {
    if coeffs.len() > d {
        bail!("--coeffs has {} entries but d = {d}", coeffs.len());
    }
    let mut out: Vec<Int> = coeffs.iter().map(|&c| Int::from(c)).collect();
    out.resize(d, Int::ZERO);
    Ok(out)
}

fn verify(cli: &Cli, check: VerifyCheck, coeffs: &[i64]) -> Result<Outcome> {
    let d = cli.d;
    let mut report = Map::new();
    report.insert("d".into(), json!(d));
    let mut items = Vec::new();
    match check {
        VerifyCheck::Recurrences => {
            report.insert("check".into(), json!("recurrences"));
            for i in 0..d {
                let s = Letter::generator(i);
                for k in 2..=6 {
                    let pass = verify_recurrence(d, s, k)?;
                    items.push(json!({"s": s.to_string(), "k": k, "pass": pass}));
                }
            }
        }
        VerifyCheck::Obstruction => {
            report.insert("check".into(), json!("obstruction"));
            let n = padded_coeffs(d, coeffs)?;
            let r = q_combination(d, &n)?;
            let total: Int = n.iter().sum();
            let expected = total.is_multiple_of(&Int::from(d - 1));
            report.insert("coeffs".into(), ints_json(&n));
            report.insert("sum".into(), int_json(&total));
            report.insert("sigma_residue".into(), int_json(&sigma_residue(&r)));
            for level in 1..=cli.level.unwrap_or(2) {
                let a = eta_matrix(d, level)?;
                let pre = membership_in_image(&r, &a)?;
                let mut pass = pre.is_some() == expected;
                if let Some(x) = &pre {
                    let img = LevelFunction::from_coeffs(d, level + 1, a.mul_vec(x)?)?;
                    pass &= img == r;
                }
                items.push(json!({
                    "level": level,
                    "in_image": pre.is_some(),
                    "expected_in_image": expected,
                    "pass": pass,
                }));
            }
            let verdict = if expected { "in image" } else { "not in image" };
            report.insert("verdict".into(), json!(verdict));
        }
        VerifyCheck::Preimage => {
            report.insert("check".into(), json!("preimage"));
            let n = padded_coeffs(d, coeffs)?;
            let r = q_combination(d, &n)?;
            report.insert("coeffs".into(), ints_json(&n));
            match explicit_preimage(d, &n)? {
                Some(g) => {
                    let direct = eta_apply(&g)? == r;
                    let a = eta_matrix(d, 1)?;
                    let x: Vec<Int> = g.iter().flat_map(|f| f.refine(1).map(|f| f.coeffs().to_vec())).flatten().collect();
                    let via_matrix = LevelFunction::from_coeffs(d, 2, a.mul_vec(&x)?)? == r;
                    report.insert(
                        "preimage".into(),
                        Value::Array(g.iter().map(LevelFunction::to_json).collect()),
                    );
                    items.push(json!({"name": "eta(g) = r", "pass": direct}));
                    items.push(json!({"name": "eta matrix at level 1", "pass": via_matrix}));
                }
                None => {
                    items.push(json!({"name": "sum divisible by d-1", "pass": false}));
                }
            }
        }
        VerifyCheck::Sigma => {
            report.insert("check".into(), json!("sigma"));
            report.insert("modulus".into(), json!(d - 1));
            let top = cli.level.unwrap_or(2);
            for level in 1..=top {
                let a = eta_matrix(d, level)?;
                let pass = a.columns().into_iter().try_fold(true, |ok, c| {
                    let f = LevelFunction::from_coeffs(d, level + 1, c)?;
                    Ok::<_, freeboundary::Error>(ok && sigma_residue(&f).is_zero())
                })?;
                items.push(json!({"name": "vanishes on eta columns", "level": level, "pass": pass}));
            }
            for i in 0..d {
                let s = ReducedWord::generator(d, i);
                let p = LevelFunction::cylinder_p(&s)?;
                let base = sigma_residue(&p);
                let pass = (1..=top + 1).all(|m| p.refine(m).map(|f| sigma_residue(&f) == base).unwrap_or(false));
                items.push(json!({"name": format!("refinement-stable on p[{s}]"), "pass": pass}));
            }
            if !coeffs.is_empty() {
                let r = q_combination(d, &padded_coeffs(d, coeffs)?)?;
                report.insert("sigma_residue".into(), int_json(&sigma_residue(&r)));
            }
        }
    }
    let all = items.iter().all(|i| i["pass"] == json!(true));
    report.insert("items".into(), Value::Array(items));
    report.insert("all_pass".into(), json!(all));
    emit(cli, &Value::Object(report), &[]);
    Ok(if all { Outcome::Ok } else { Outcome::Failed })
}

fn witness(cli: &Cli, mode: WitnessMode, x: &str, y: &str) -> Result<Outcome> {
    let d = cli.d;
    let report = match mode {
        WitnessMode::Density => {
            let (x, y) = (ReducedWord::parse(d, x)?, ReducedWord::parse(d, y)?);
            let dw = density_witness(&x, &y)?;
            let (plus, minus) = BoundaryPoint::fixed_points(&dw.h)?;
            let geodesic = ReducedWord::is_geodesic_concat(&x, &dw.w, &y)?;
            let plus_ok = plus.prefix(x.len()) == x;
            let minus_ok = minus.prefix(y.len()) == y;
            json!({
                "mode": "density",
                "x": x.to_string(),
                "y": y.to_string(),
                "w": dw.w.to_string(),
                "h": dw.h.to_string(),
                "h_plus": plus.to_string(),
                "h_minus": minus.to_string(),
                "geodesic": geodesic,
                "verified": geodesic && plus_ok && minus_ok,
            })
        }
        WitnessMode::Separate => {
            let (x, y) = (BoundaryPoint::parse(d, x)?, BoundaryPoint::parse(d, y)?);
            let sep = separating_element(&x, &y)?;
            let f = sep.function();
            let (fx, fy) = (f.evaluate(&x)?, f.evaluate(&y)?);
            let direct = separator_value(&sep, &x)? == fx && separator_value(&sep, &y)? == fy;
            json!({
                "mode": "separate",
                "x": x.to_string(),
                "y": y.to_string(),
                "g": sep.g.to_string(),
                "s": sep.s.to_string(),
                "value_x": int_json(&fx),
                "value_y": int_json(&fy),
                "verified": fx != fy && direct,
            })
        }
    };
    let ok = report["verified"] == json!(true);
    emit(cli, &report, &[]);
    Ok(if ok { Outcome::Ok } else { Outcome::Failed })
}

fn orbits(cli: &Cli) -> Result<Outcome> {
    let spec = relation(cli)?;
    let oc = orbit_count(&spec, cli.check_bound)?;
    let report = json!({
        "d": cli.d,
        "relation": words_json(&spec),
        "orbit_count": oc.count,
        "representatives": oc.representatives.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "check_bound": cli.check_bound,
        "checked": oc.checked,
        "verified": true,
    });
    emit(cli, &report, &[]);
    Ok(Outcome::Ok)
}

fn parse_cylinder(d: usize, s: &str) -> Result<LevelFunction> {
    let s = s.trim();
    let inner = |p: &str| {
        s.strip_prefix(p)
            .and_then(|r| r.strip_suffix(']'))
            .map(|w| ReducedWord::parse(d, w))
    };
    if let Some(w) = inner("p[") {
        Ok(LevelFunction::cylinder_p(&w?)?)
    } else if let Some(w) = inner("q[") {
        Ok(LevelFunction::cylinder_q(&w?)?)
    } else {
        Err(anyhow!("expected p[word] or q[word], got {s:?}"))
    }
}

fn act(cli: &Cli, g: &str, x: &str, class: Option<&str>, eval: &[String]) -> Result<Outcome> {
    let d = cli.d;
    let g = ReducedWord::parse(d, g)?;
    let x = BoundaryPoint::parse(d, x)?;
    let y = x.act(&g)?;
    let mut report = Map::new();
    report.insert("g".into(), json!(g.to_string()));
    report.insert("x".into(), json!(x.to_string()));
    report.insert("result".into(), json!(y.to_string()));
    let fixed = if g.is_identity() {
        Value::Null
    } else {
        json!(x.is_fixed_by(&g)?)
    };
    report.insert("is_fixed".into(), fixed);
    if let Some(c) = class {
        let spec = RelationSpec::parse(d, c).context("invalid --class")?;
        let rep = class_of(&y, &spec)?;
        let pts: Vec<String> = rep.points().iter().map(|p| p.to_string()).collect();
        report.insert("class".into(), json!(pts));
    }
    if !eval.is_empty() {
        let mut m = Map::new();
        for e in eval {
            let f = parse_cylinder(d, e)?;
            m.insert(e.trim().to_string(), int_json(&f.evaluate(&y)?));
        }
        report.insert("eval".into(), Value::Object(m));
    }
    emit(cli, &Value::Object(report), &[]);
    Ok(Outcome::Ok)
}

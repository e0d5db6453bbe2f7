use std::fmt::Write as _;

use param_atlas_core::census::abelian_with_permutation;
use param_atlas_core::finite_group::abelian_elements;
use param_atlas_core::invariant_rings::count_points_in;
use param_atlas_core::oracle::avoidant::avoidant_check;
use param_atlas_core::oracle::commutant::centralizer;
use param_atlas_core::oracle::jacobian::probe_random;
use param_atlas_core::oracle::{
    classify_twist, eval_identity_trials, jacobian_probe, solve_commutant, twisted_orbits_bruteforce, Mat, MatrixGroup,
};
use param_atlas_core::{
    bg_presentation, census, coverage_report, standard_levis, twisted_class_count, AtlasError, FiniteField,
    FiniteGroup, Result,
};
use serde_json::{json, Value};

use crate::config::RunConfig;

/// Rendered result of one command.
pub struct Report {
    pub text: String,
    pub json: Value,
}

/// Left-aligned table with a header row.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec(), &mut out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn ell_text(ell: Option<u64>) -> String {
    ell.map_or("-".into(), |l| l.to_string())
}

fn composition_text(c: &[usize]) -> String {
    let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

pub fn cmd_census(cfg: &RunConfig) -> Result<Report> {
    let datum = cfg.datum()?;
    let ctx = cfg.context()?;
    let entries = census(&datum, &ctx)?;
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            vec![
                e.label.clone(),
                e.class.partition.to_string(),
                e.class.rank().to_string(),
                e.component_group.describe(),
                e.twisted_class.clone(),
            ]
        })
        .collect();
    let text = format!(
        "census: {}, q={}, ell={}\n{}",
        datum.preset,
        ctx.q,
        ell_text(ctx.ell),
        table(&["label", "partition", "rank", "component_group", "twisted_class"], &rows)
    );
    let json = json!({
        "group": datum.preset.to_string(),
        "entries": entries.iter().map(|e| json!({
            "label": e.label,
            "partition": e.class.partition.parts(),
            "rank": e.class.rank(),
            "regular": e.class.regular,
            "distinguished": e.class.distinguished,
            "component_group": e.component_group.describe(),
            "component_group_order": e.component_group.order(),
            "twisted_class": e.twisted_class,
            "twisted_index": e.twisted_index,
        })).collect::<Vec<_>>(),
    });
    Ok(Report { text, json })
}

pub fn cmd_bg_ring(cfg: &RunConfig) -> Result<Report> {
    let datum = cfg.datum()?;
    let pres = bg_presentation(&datum, cfg.q)?;
    let json = json!({
        "group": pres.group,
        "generators": pres.generator_symbols,
        "invertible": pres.invertible_symbols(),
        "relations": pres.relation_strings(),
    });
    Ok(Report { text: pres.to_string(), json })
}

pub fn cmd_coverage(cfg: &RunConfig) -> Result<Report> {
    let datum = cfg.datum()?;
    let ctx = cfg.context()?;
    let family = datum.preset.family;
    let report = coverage_report(&datum, &ctx)?;
    let rows: Vec<Vec<String>> = report
        .iter()
        .map(|v| {
            vec![
                v.entry.label.clone(),
                v.entry.class.partition.to_string(),
                if v.covered { "yes" } else { "no" }.to_string(),
                v.witness_levi.as_ref().map_or("-".into(), |l| composition_text(&l.composition(family))),
                v.reason.as_str().to_string(),
            ]
        })
        .collect();
    let covered = report.iter().filter(|v| v.covered).count();
    let text = format!(
        "coverage: {}, q={}, ell={}\n{}covered: {covered} of {}\n",
        datum.preset,
        ctx.q,
        ell_text(ctx.ell),
        table(&["label", "partition", "covered", "witness", "reason"], &rows),
        report.len()
    );
    let json = json!({
        "group": datum.preset.to_string(),
        "verdicts": report.iter().map(|v| json!({
            "label": v.entry.label,
            "partition": v.entry.class.partition.parts(),
            "covered": v.covered,
            "witness_levi": v.witness_levi.as_ref().map(|l| json!({
                "simple_roots": l.simple_root_subset,
                "composition": l.composition(family),
            })),
            "reason": v.reason.as_str(),
        })).collect::<Vec<_>>(),
    });
    Ok(Report { text, json })
}

/// Parses `"1,1;0,1"` (rows split by `;`, entries by `,` or spaces). Entries are integers:
/// residues for prime fields, the base-`ell` digit encoding for extension fields.
pub fn parse_matrix(s: &str, f: &FiniteField) -> Result<Mat> {
    let rows: Vec<Vec<u32>> = s
        .split(';')
        .map(|row| {
            row.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    let v: i64 = t.parse().map_err(|_| AtlasError::InvalidInput(format!("bad matrix entry {t:?}")))?;
                    if v < 0 || v >= f.size() as i64 {
                        Ok(f.from_int(v))
                    } else {
                        Ok(v as u32)
                    }
                })
                .collect::<Result<Vec<u32>>>()
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(AtlasError::InvalidInput(format!("matrix {s:?} is not square")));
    }
    Ok(Mat::from_rows(&rows))
}

fn matrix_json(m: &Mat, f: &FiniteField) -> Value {
    json!(m.format(f))
}

fn matrix_text(m: &Mat, f: &FiniteField) -> String {
    let rows: Vec<String> = m.format(f).iter().map(|r| r.join(",")).collect();
    rows.join("; ")
}

fn oracle_group(cfg: &RunConfig) -> Result<MatrixGroup> {
    Ok(MatrixGroup::new(cfg.preset()?, cfg.field()?))
}

pub enum TwistSpec {
    Identity,
    Inverse,
    Multiply(i64),
}

impl TwistSpec {
    pub fn parse(s: &str) -> Result<TwistSpec> {
        match s {
            "id" | "identity" => Ok(TwistSpec::Identity),
            "inv" | "inverse" => Ok(TwistSpec::Inverse),
            k => k
                .parse()
                .map(TwistSpec::Multiply)
                .map_err(|_| AtlasError::InvalidInput(format!("twist {k:?} is not id, inv, or an integer"))),
        }
    }

    fn multiplier(&self) -> i64 {
        match self {
            TwistSpec::Identity => 1,
            TwistSpec::Inverse => -1,
            TwistSpec::Multiply(k) => *k,
        }
    }
}

/// Twisted classes of `Z/d_1 x ... x Z/d_k` under `a -> m a`, by the cokernel formula and by
/// orbit enumeration.
pub fn cmd_twisted(moduli: &[usize], twist: &TwistSpec, cfg: &RunConfig) -> Result<Report> {
    if moduli.is_empty() || moduli.contains(&0) {
        return Err(AtlasError::InvalidInput("group orders must be positive".into()));
    }
    let order: usize = moduli.iter().product();
    if order as u128 > cfg.budget {
        return Err(AtlasError::BudgetExceeded { required: order as u128, budget: cfg.budget });
    }
    let group = FiniteGroup::abelian(moduli);
    let elems = abelian_elements(moduli);
    let m = twist.multiplier();
    let perm: Vec<usize> = elems
        .iter()
        .map(|e| {
            let image: Vec<usize> =
                e.iter().zip(moduli).map(|(&x, &d)| (m * x as i64).rem_euclid(d as i64) as usize).collect();
            elems.iter().position(|x| *x == image).expect("image is an element")
        })
        .collect();
    if !group.is_automorphism(&perm) {
        return Err(AtlasError::NotAnAutomorphism);
    }
    let a = abelian_with_permutation(moduli, &perm)?;
    let classes = twisted_class_count(&a, None)?;
    let brute = twisted_orbits_bruteforce(&group, &perm)?;
    let text = format!(
        "group: {}\ntwist: a -> {m}*a\ntwisted classes: {}\nbrute force: {brute}\nrepresentatives: {}\n",
        group.name,
        classes.count,
        classes.representatives.join(", ")
    );
    let json = json!({
        "group": group.name,
        "order": order,
        "multiplier": m,
        "count": classes.count,
        "bruteforce_count": brute,
        "representatives": classes.representatives,
    });
    Ok(Report { text, json })
}

pub fn cmd_commutant(sigma: &str, cfg: &RunConfig) -> Result<Report> {
    let g = oracle_group(cfg)?;
    let f = &g.field;
    let s = parse_matrix(sigma, f)?;
    let sols = solve_commutant(&g, &s, cfg.q, cfg.budget)?;
    let cent = centralizer(&g, &s, cfg.budget)?;
    let torsor = sols.is_empty() || sols.len() == cent.len();
    const SHOWN: usize = 5;
    let mut text = format!(
        "commutant: {} over F_{}, q={}\nsigma: {}\nsolutions: {}\ncentralizer: {}\ntorsor: {}\n",
        g.preset,
        f.size(),
        cfg.q,
        matrix_text(&s, f),
        sols.len(),
        cent.len(),
        if torsor { "yes" } else { "no" }
    );
    for phi in sols.iter().take(SHOWN) {
        let _ = writeln!(text, "phi: {}", matrix_text(phi, f));
    }
    if sols.len() > SHOWN {
        let _ = writeln!(text, "... {} more", sols.len() - SHOWN);
    }
    let json = json!({
        "group": g.preset.to_string(),
        "field_size": f.size(),
        "sigma": matrix_json(&s, f),
        "solutions": sols.len(),
        "centralizer": cent.len(),
        "torsor": torsor,
        "sample": sols.iter().take(SHOWN).map(|m| matrix_json(m, f)).collect::<Vec<_>>(),
    });
    Ok(Report { text, json })
}

pub fn cmd_classify(sigma: &str, cfg: &RunConfig) -> Result<Report> {
    let g = oracle_group(cfg)?;
    let f = &g.field;
    let s = parse_matrix(sigma, f)?;
    let sols = solve_commutant(&g, &s, cfg.q, cfg.budget)?;
    let c = classify_twist(&g, &s, cfg.q, &sols)?;
    let detector = serde_json::to_value(c.detector).expect("detector serializes");
    let detector = detector.as_str().unwrap_or_default().to_string();
    let mut text = format!(
        "classify: {} over F_{}, q={}\nsigma: {}\ndetector: {detector}\nsolutions: {}\nclasses: {}\n",
        g.preset,
        f.size(),
        cfg.q,
        matrix_text(&s, f),
        sols.len(),
        c.class_count()
    );
    for (label, size) in c.class_sizes.iter().enumerate() {
        let first = sols.iter().zip(&c.labels).find(|(_, &l)| l == label).map(|(m, _)| matrix_text(m, f));
        let _ = writeln!(text, "class {label}: {size} solutions, e.g. {}", first.unwrap_or_else(|| "-".into()));
    }
    let json = json!({
        "group": g.preset.to_string(),
        "field_size": f.size(),
        "detector": detector,
        "solutions": sols.len(),
        "class_count": c.class_count(),
        "class_sizes": c.class_sizes,
    });
    Ok(Report { text, json })
}

pub fn cmd_avoidant(levi: &str, m: &str, r: Option<u32>, cfg: &RunConfig) -> Result<Report> {
    let g = oracle_group(cfg)?;
    let f = &g.field;
    let datum = cfg.datum()?;
    let family = datum.preset.family;
    let wanted: Vec<usize> = levi
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| AtlasError::InvalidInput(format!("bad Levi block {t:?}"))))
        .collect::<Result<_>>()?;
    let l = standard_levis(&datum)
        .into_iter()
        .find(|l| l.composition(family) == wanted)
        .ok_or_else(|| AtlasError::InvalidInput(format!("no standard Levi with blocks {levi}")))?;
    let mat = parse_matrix(m, f)?;
    let rep = avoidant_check(&g, &l, &mat, cfg.q, r)?;
    let yn = |b: bool| if b { "yes" } else { "no" };
    let text = format!(
        "avoidance: {} over F_{}, q={}, levi {}\nm: {}\ndims (levi, u, u-): ({}, {}, {})\nr: {}\nad - 1 invertible: {}\nad - q invertible: {}\nseparated: {}\navoidant: {}\n",
        g.preset,
        f.size(),
        cfg.q,
        composition_text(&wanted),
        matrix_text(&mat, f),
        rep.levi_dim,
        rep.u_dim,
        rep.u_minus_dim,
        rep.r,
        yn(rep.ad_minus_one_invertible),
        yn(rep.ad_minus_q_invertible),
        yn(rep.separated),
        yn(rep.avoidant)
    );
    let mut json = serde_json::to_value(&rep).expect("report serializes");
    json["group"] = json!(g.preset.to_string());
    json["levi"] = json!(wanted);
    Ok(Report { text, json })
}

pub fn cmd_jacobian(sigma: Option<&str>, phi: Option<&str>, attempts: usize, cfg: &RunConfig) -> Result<Report> {
    let g = oracle_group(cfg)?;
    let f = &g.field;
    match (sigma, phi) {
        (Some(s), Some(p)) => {
            let (s, p) = (parse_matrix(s, f)?, parse_matrix(p, f)?);
            let rep = jacobian_probe(&g, cfg.q, &s, &p)?;
            let text = format!(
                "jacobian: {} over F_{}, q={}\nvariables: {}\nequations: {}\njacobian rank: {}\ntangent dim: {} (group dim {} + base tangent dim {})\nrank of dCh on tangent space: {}\nsubmersive: {}\n",
                g.preset,
                f.size(),
                cfg.q,
                rep.variables,
                rep.equations,
                rep.jacobian_rank,
                rep.tangent_dim,
                rep.group_dim,
                rep.base_tangent_dim,
                rep.ch_rank,
                if rep.submersive { "yes" } else { "no" }
            );
            let mut json = serde_json::to_value(&rep).expect("report serializes");
            json["mode"] = json!("point");
            Ok(Report { text, json })
        }
        (None, None) => {
            let s = probe_random(&g, cfg.q, attempts, cfg.seed, cfg.budget)?;
            let text = format!(
                "jacobian: {} over F_{}, q={}, seed={}\nattempts: {}\nconstructed: {}\nsubmersive: {}\nrank drops: {}\n",
                g.preset,
                f.size(),
                cfg.q,
                cfg.seed,
                s.attempts,
                s.constructed,
                s.submersive,
                s.failures.len()
            );
            let json = json!({
                "mode": "random",
                "attempts": s.attempts,
                "constructed": s.constructed,
                "submersive": s.submersive,
                "rank_drops": s.failures.len(),
            });
            Ok(Report { text, json })
        }
        _ => Err(AtlasError::InvalidInput("--sigma and --phi must be given together".into())),
    }
}

pub fn cmd_eval(trials: usize, cfg: &RunConfig) -> Result<Report> {
    let datum = cfg.datum()?;
    let f = cfg.field()?;
    let rep = eval_identity_trials(&datum, cfg.q, &f, trials, cfg.seed)?;
    let mut text = format!(
        "eval: {} over F_{}, q={}, seed={}\ntrials: {}\npassed: {}\nround trip: {}\n",
        rep.group,
        rep.field_size,
        rep.q,
        cfg.seed,
        rep.trials,
        rep.passed,
        if rep.round_trip { "yes" } else { "no" }
    );
    if let Some(fail) = &rep.first_failure {
        let _ = writeln!(
            text,
            "first failure: {} at ({}): expected {}, found {}",
            fail.generator,
            fail.point.join(", "),
            fail.expected,
            fail.found
        );
    }
    let mut json = serde_json::to_value(&rep).expect("report serializes");
    json["pass"] = json!(rep.pass());
    Ok(Report { text, json })
}

pub fn cmd_count_points(cfg: &RunConfig) -> Result<Report> {
    let datum = cfg.datum()?;
    let f = cfg.field()?;
    let pres = bg_presentation(&datum, cfg.q)?;
    let pc = count_points_in(&pres, &f, cfg.budget)?;
    let mut text = format!("points of B_G({}, q={}) over F_{}: {}\n", datum.preset, cfg.q, pc.field_size, pc.points);
    if let Some(d) = pc.repeated_factor_degree {
        let _ = writeln!(text, "repeated factor degree: {d}");
    }
    let mut json = serde_json::to_value(&pc).expect("count serializes");
    json["group"] = json!(datum.preset.to_string());
    Ok(Report { text, json })
}

use std::fmt::Write as _;

use goppa_census::census::{census_report_with, census_rows, euler_phi, CensusReport, Params};
use goppa_census::goppa::{self, GoppaInstance, Subfield};
use goppa_census::group::OrbitKind;
use goppa_census::ntheory::divisors;
use goppa_census::oracle::{
    partition_census, stream_fixed_count_with, Scope, StreamOptions, DEFAULT_CHUNK,
};
use goppa_census::{build_ctx, Error, FieldCtx, Ladder, Result};
use num_bigint::BigUint;
use rand::SeedableRng;
use serde::Serialize;

use crate::report::*;
use crate::{
    BoundArgs, Format, GoppaArgs, LadderArg, Mode, OracleArgs, OracleOpts, ScopeArg, Status,
    SubfieldArg, TableArgs, Trust, VerifyArgs,
};

type Outcome = Result<(String, Status)>;

/// Values from the reference comparison table.
const REFERENCE_ROWS: [(u64, u32, u32, u64, u64); 4] = [
    (2, 5, 5, 6765, 205),
    (2, 3, 9, 266304, 29604),
    (3, 3, 7, 2128684, 76027),
    (5, 2, 6, 67930, 2667),
];

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn ladder(l: LadderArg) -> Ladder {
    match l {
        LadderArg::Exact => Ladder::Exact,
        LadderArg::Published => Ladder::Published,
    }
}

fn census_text(rep: &CensusReport) -> String {
    let p = &rep.params;
    let mut s = String::new();
    let _ = writeln!(s, "p={} t={} r={} q={}", p.p, p.t, p.r, p.q);
    let _ = writeln!(s, "|S| = {}", rep.s_size);
    let _ = writeln!(s, "affine sets = {}, projective sets = {}", rep.affine_sets, rep.projective_sets);
    for row in &rep.rows {
        let _ = writeln!(
            s,
            "  r1={:<4} rbar={:<4} {:<16} fix_affine={:<12} fix_projective={:<12} [{}; {}]",
            row.case.r1,
            row.case.rbar,
            row.case.tag.as_str(),
            row.fix_affine,
            row.fix_projective,
            row.affine_rule,
            row.projective_rule
        );
    }
    let _ = writeln!(s, "N = {}", rep.n);
    let _ = writeln!(s, "Ne = {}", rep.ne);
    s
}

pub fn bound(a: &BoundArgs) -> Outcome {
    let params = Params::new(a.field.p, a.field.t, a.field.r)?;
    let rep = census_report_with(&params, ladder(a.ladder))?;
    let out = match a.common.format {
        Format::Json => json(&rep),
        Format::Csv => format!("{}\n{}\n", CensusReport::CSV_HEADER, rep.csv_row()),
        Format::Text => census_text(&rep),
    };
    Ok((out, Status::Ok))
}

fn burnside(values: &[(u32, BigUint)], r: u32, action: &'static str) -> Result<BigUint> {
    let sum: BigUint = values
        .iter()
        .map(|(r1, v)| v * euler_phi((r / r1) as u64))
        .sum();
    let r_big = BigUint::from(r);
    if &sum % &r_big != BigUint::from(0u32) {
        return Err(Error::IntegralityViolation {
            action,
            sum: sum.to_string(),
            r,
        });
    }
    Ok(sum / r_big)
}

pub fn run_oracle(ctx: &FieldCtx, params: &Params, opts: &OracleOpts) -> Result<OracleReport> {
    let fits = ctx
        .element_count_u64()
        .is_some_and(|n| n <= opts.partition_cap);
    let partition = match opts.mode {
        Mode::Partition => true,
        Mode::Stream => false,
        Mode::Auto => fits,
    };
    if partition {
        let aff = partition_census(ctx, OrbitKind::Affine, opts.partition_cap)?;
        let proj = partition_census(ctx, OrbitKind::Projective, opts.partition_cap)?;
        let rows = aff
            .fixed_by
            .iter()
            .zip(&proj.fixed_by)
            .map(|(fa, fp)| OracleRow {
                r1: fa.r1,
                rbar: ctx.r() / fa.r1,
                fix_affine: fa.count.to_string(),
                fix_projective: fp.count.to_string(),
                affine_classes: Vec::new(),
                projective_classes: Vec::new(),
            })
            .collect();
        return Ok(OracleReport {
            params: params.clone(),
            mode: "partition",
            scope: None,
            elements_visited: (aff.elements_visited + proj.elements_visited).to_string(),
            rows,
            n: aff.orbit_count_under_g.to_string(),
            ne: proj.orbit_count_under_g.to_string(),
            orbit_count_direct: Some(DirectCounts {
                n: aff.orbit_count_direct.to_string(),
                ne: proj.orbit_count_direct.to_string(),
            }),
            affine_dependencies: None,
        });
    }

    let stream_opts = StreamOptions {
        scope: match opts.scope {
            ScopeArg::Transversal => Scope::AffineTransversal,
            ScopeArg::Full => Scope::Full,
        },
        chunk: DEFAULT_CHUNK,
        element_budget: opts.element_budget,
    };
    let mut rows = Vec::new();
    let mut visited = 0u64;
    let mut affine_deps = 0u64;
    let mut fa = Vec::new();
    let mut fp = Vec::new();
    for r1 in divisors(ctx.r() as u64) {
        let r1 = r1 as u32;
        let a = stream_fixed_count_with(ctx, r1, OrbitKind::Affine, stream_opts)?;
        let p = stream_fixed_count_with(ctx, r1, OrbitKind::Projective, stream_opts)?;
        visited += a.elements_visited + p.elements_visited;
        affine_deps += p.affine_dependencies;
        fa.push((r1, a.derived_fixed_sets.clone()));
        fp.push((r1, p.derived_fixed_sets.clone()));
        rows.push(OracleRow {
            r1,
            rbar: ctx.r() / r1,
            fix_affine: a.derived_fixed_sets.to_string(),
            fix_projective: p.derived_fixed_sets.to_string(),
            affine_classes: a.classes,
            projective_classes: p.classes,
        });
    }
    Ok(OracleReport {
        params: params.clone(),
        mode: "stream",
        scope: Some(stream_opts.scope),
        elements_visited: visited.to_string(),
        rows,
        n: burnside(&fa, ctx.r(), "affine")?.to_string(),
        ne: burnside(&fp, ctx.r(), "projective")?.to_string(),
        orbit_count_direct: None,
        affine_dependencies: Some(affine_deps.to_string()),
    })
}

fn oracle_text(rep: &OracleReport) -> String {
    let p = &rep.params;
    let mut s = String::new();
    let _ = writeln!(s, "p={} t={} r={} q={} mode={}", p.p, p.t, p.r, p.q, rep.mode);
    let _ = writeln!(s, "elements visited = {}", rep.elements_visited);
    for row in &rep.rows {
        let _ = writeln!(
            s,
            "  r1={:<4} rbar={:<4} fix_affine={:<12} fix_projective={}",
            row.r1, row.rbar, row.fix_affine, row.fix_projective
        );
    }
    let _ = writeln!(s, "N = {}", rep.n);
    let _ = writeln!(s, "Ne = {}", rep.ne);
    s
}

fn oracle_csv(rep: &OracleReport) -> String {
    let mut s = String::from("r1,rbar,fix_affine,fix_projective\n");
    for row in &rep.rows {
        let _ = writeln!(s, "{},{},{},{}", row.r1, row.rbar, row.fix_affine, row.fix_projective);
    }
    s
}

pub fn oracle(a: &OracleArgs) -> Outcome {
    let params = Params::new(a.field.p, a.field.t, a.field.r)?;
    let ctx = build_ctx(a.field.p, a.field.t, a.field.r)?;
    let rep = run_oracle(&ctx, &params, &a.opts)?;
    let out = match a.common.format {
        Format::Json => json(&rep),
        Format::Csv => oracle_csv(&rep),
        Format::Text => oracle_text(&rep),
    };
    Ok((out, Status::Ok))
}

pub fn verify(a: &VerifyArgs) -> Outcome {
    let params = Params::new(a.field.p, a.field.t, a.field.r)?;
    let ctx = build_ctx(a.field.p, a.field.t, a.field.r)?;
    let ladder = ladder(a.ladder);
    let formula_rows = census_rows(&params, ladder)?;
    let (formula, formula_error) = match census_report_with(&params, ladder) {
        Ok(rep) => (Some(rep), None),
        Err(e @ Error::IntegralityViolation { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let oracle = run_oracle(&ctx, &params, &a.opts)?;

    let mut diffs = Vec::new();
    for (f, o) in formula_rows.iter().zip(&oracle.rows) {
        debug_assert_eq!(f.case.r1, o.r1);
        for (field, fv, ov) in [
            ("fix_affine", f.fix_affine.to_string(), &o.fix_affine),
            ("fix_projective", f.fix_projective.to_string(), &o.fix_projective),
        ] {
            if fv != *ov {
                diffs.push(Diff {
                    r1: Some(o.r1),
                    field,
                    formula: Some(fv),
                    oracle: ov.clone(),
                });
            }
        }
    }
    let totals = [
        ("N", formula.as_ref().map(|f| f.n.to_string()), &oracle.n),
        ("Ne", formula.as_ref().map(|f| f.ne.to_string()), &oracle.ne),
    ];
    for (field, fv, ov) in totals {
        if fv.as_ref() != Some(ov) {
            diffs.push(Diff {
                r1: None,
                field,
                formula: fv,
                oracle: ov.clone(),
            });
        }
    }
    let summary = match a.trust {
        Trust::Formula => Summary {
            trust: "formula",
            n: formula.as_ref().map(|f| f.n.to_string()),
            ne: formula.as_ref().map(|f| f.ne.to_string()),
        },
        Trust::Oracle => Summary {
            trust: "oracle",
            n: Some(oracle.n.clone()),
            ne: Some(oracle.ne.clone()),
        },
    };
    let status = if diffs.is_empty() { Status::Ok } else { Status::Mismatch };
    let rep = VerifyReport {
        params,
        ladder,
        formula_rows,
        formula,
        formula_error,
        oracle,
        diffs,
        status: if status == Status::Ok { "match" } else { "mismatch" },
        summary,
    };
    let out = match a.common.format {
        Format::Json => json(&rep),
        Format::Csv => {
            let mut s = String::from("r1,field,formula,oracle\n");
            for d in &rep.diffs {
                let r1 = d.r1.map(|x| x.to_string()).unwrap_or_default();
                let _ = writeln!(s, "{r1},{},{},{}", d.field, d.formula.clone().unwrap_or_default(), d.oracle);
            }
            s
        }
        Format::Text => verify_text(&rep),
    };
    Ok((out, status))
}

fn verify_text(rep: &VerifyReport) -> String {
    let p = &rep.params;
    let mut s = String::new();
    let _ = writeln!(s, "p={} t={} r={} q={} oracle mode={}", p.p, p.t, p.r, p.q, rep.oracle.mode);
    for (f, o) in rep.formula_rows.iter().zip(&rep.oracle.rows) {
        let _ = writeln!(
            s,
            "  r1={:<4} rbar={:<4} {:<16} affine {} / {}  projective {} / {}",
            f.case.r1,
            f.case.rbar,
            f.case.tag.as_str(),
            f.fix_affine,
            o.fix_affine,
            f.fix_projective,
            o.fix_projective
        );
    }
    if let Some(e) = &rep.formula_error {
        let _ = writeln!(s, "formula: {e}");
    }
    let _ = writeln!(
        s,
        "summary ({}): N = {}, Ne = {}",
        rep.summary.trust,
        rep.summary.n.as_deref().unwrap_or("-"),
        rep.summary.ne.as_deref().unwrap_or("-")
    );
    let _ = writeln!(s, "status: {} ({} diffs)", rep.status, rep.diffs.len());
    s
}

pub fn table(a: &TableArgs) -> Outcome {
    let mut rows = Vec::new();
    let extra = a.rows.iter().map(|&(p, t, r)| (p, t, r, None));
    let reference = REFERENCE_ROWS
        .iter()
        .map(|&(p, t, r, n, ne)| (p, t, r, Some((n, ne))));
    for (p, t, r, expected) in reference.chain(extra) {
        let params = Params::new(p, t, r)?;
        let rep = census_report_with(&params, Ladder::Exact)?;
        let flag = match expected {
            None => "none",
            Some((n, ne)) if rep.n == BigUint::from(n) && rep.ne == BigUint::from(ne) => "agree",
            Some(_) => "disagree",
        };
        rows.push(TableRow {
            p,
            t,
            r,
            q: params.q.to_string(),
            n: rep.n.to_string(),
            ne: rep.ne.to_string(),
            reference_n: expected.map(|e| e.0.to_string()),
            reference_ne: expected.map(|e| e.1.to_string()),
            flag,
            breakdown: rep.rows,
        });
    }
    let out = match a.common.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("p,t,r,q,N,Ne,reference_N,reference_Ne,flag\n");
            for row in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    row.p,
                    row.t,
                    row.r,
                    row.q,
                    row.n,
                    row.ne,
                    row.reference_n.as_deref().unwrap_or(""),
                    row.reference_ne.as_deref().unwrap_or(""),
                    row.flag
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for row in &rows {
                let _ = writeln!(
                    s,
                    "q={}^{} r={:<3} N={:<12} Ne={:<10} reference=({}, {}) {}",
                    row.p,
                    row.t,
                    row.r,
                    row.n,
                    row.ne,
                    row.reference_n.as_deref().unwrap_or("-"),
                    row.reference_ne.as_deref().unwrap_or("-"),
                    row.flag
                );
            }
            s
        }
    };
    Ok((out, Status::Ok))
}

pub fn goppa(a: &GoppaArgs) -> Outcome {
    let ctx = build_ctx(a.field.p, a.field.t, a.field.r)?;
    let subfield = match a.subfield {
        SubfieldArg::Prime => Subfield::Prime,
        SubfieldArg::Base => Subfield::Base,
    };
    let alpha = match a.alpha_field_index {
        Some(k) => {
            let n = ctx.element_count_u64().unwrap_or(u64::MAX);
            if k >= n {
                return Err(Error::InvalidElement(format!("field index {k} is out of range")));
            }
            ctx.from_index(k)
        }
        None => ctx
            .enumerate_s(goppa::DESK_CAP)?
            .nth(a.alpha_index as usize)
            .ok_or_else(|| {
                Error::InvalidElement(format!("there is no element of degree r at position {}", a.alpha_index))
            })?,
    };
    let inst = GoppaInstance::new(&ctx, alpha, subfield)?;
    let code = goppa::dump_code(&inst)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
    let mut checks = Vec::new();
    for map in goppa::sample_maps(&ctx, a.check_maps, &mut rng) {
        checks.push(MapCheck {
            map,
            equal: goppa::codes_equal_under_map(&inst, map)?,
        });
    }
    let passed = checks.iter().filter(|c| c.equal).count();
    let status = if passed == checks.len() { Status::Ok } else { Status::Mismatch };
    let rep = GoppaReport {
        alpha_field_index: ctx.index(&inst.alpha).to_string(),
        maps_checked: checks.len(),
        maps_passed: passed,
        map_checks: checks,
        code,
    };
    let c = &rep.code;
    let distance = c.min_distance.map(|d| d.to_string()).unwrap_or_default();
    let out = match a.common.format {
        Format::Json => json(&rep),
        Format::Csv => format!(
            "p,t,r,length,dimension,extended_dimension,min_distance,fingerprint,maps_passed,maps_checked\n{},{},{},{},{},{},{},{},{},{}\n",
            c.p, c.t, c.r, c.length, c.dimension, c.extended_dimension, distance, c.fingerprint, rep.maps_passed, rep.maps_checked
        ),
        Format::Text => format!(
            "p={} t={} r={} length={} dimension={} extended_dimension={} min_distance={}\nfingerprint {}\nmaps {}/{} equal\n",
            c.p, c.t, c.r, c.length, c.dimension, c.extended_dimension,
            if distance.is_empty() { "-" } else { &distance },
            c.fingerprint, rep.maps_passed, rep.maps_checked
        ),
    };
    Ok((out, status))
}

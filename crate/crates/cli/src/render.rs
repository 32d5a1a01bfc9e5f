//! Text and CSV renderers. JSON goes straight through serde.

use std::fmt::Write;

use serde::Serialize;
use symdecomp_core::algebra::TermRecord;
use symdecomp_core::decompose::GysFamily;
use symdecomp_core::report::{
    ComplexGrid, DecompositionReportFile, FamilyEntry, VerificationEntry, VerifyReportFile,
};

use crate::DimsReport;

/// Compact complex number: `-3i`, `0.5`, `1.732051-2i`.
pub fn complex(re: f64, im: f64) -> String {
    let clean = |x: f64| if x.abs() < 1e-10 { 0.0 } else { x };
    let num = |x: f64| {
        let s = format!("{x:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".to_owned() } else { s.to_owned() }
    };
    let (re, im) = (clean(re), clean(im));
    let imag = |x: f64| match num(x).as_str() {
        "1" => "i".to_owned(),
        "-1" => "-i".to_owned(),
        s => format!("{s}i"),
    };
    match (re == 0.0, im == 0.0) {
        (_, true) => num(re),
        (true, false) => imag(im),
        (false, false) if im < 0.0 => format!("{}-{}", num(re), imag(-im)),
        (false, false) => format!("{}+{}", num(re), imag(im)),
    }
}

fn grid_text(out: &mut String, grid: &ComplexGrid, indent: &str) {
    let cells: Vec<Vec<String>> = grid
        .iter()
        .map(|row| row.iter().map(|z| complex(z[0], z[1])).collect())
        .collect();
    let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
    for row in cells {
        let padded: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        let _ = writeln!(out, "{indent}[ {} ]", padded.join("  "));
    }
}

fn verification_text(out: &mut String, v: &VerificationEntry) {
    let _ = writeln!(out, "verification (tolerance {:e}):", v.tolerance);
    let _ = writeln!(out, "  completeness   {:e}", v.completeness);
    let _ = writeln!(out, "  orthogonality  {:e}", v.orthogonality);
    if let Some((a, b)) = &v.worst_pair {
        let _ = writeln!(out, "    worst pair   {a} · {b}");
    }
    let sampling = if v.primitivity_sampled { "sampled" } else { "all elements" };
    let _ = writeln!(
        out,
        "  primitivity    {:e} ({} {sampling})",
        v.primitivity, v.primitivity_samples
    );
    let _ = writeln!(out, "  hermiticity    {:e}", v.hermiticity);
    let _ = writeln!(out, "  {}", if v.pass { "PASS" } else { "FAIL" });
}

pub fn dims_text(r: &DimsReport) -> String {
    let mut out = format!("dim u^{}(2^{}) = {}\n", r.group, r.n, r.commutant_dimension);
    if let Some(m) = &r.m_k {
        out.push_str("k  m_k\n");
        for (k, v) in m.iter().enumerate() {
            let _ = writeln!(out, "{k}  {v}");
        }
    }
    out
}

pub fn dims_csv(r: &DimsReport) -> String {
    let mut out = String::from("group,n,commutant_dimension,k,m_k\n");
    match &r.m_k {
        Some(m) => {
            for (k, v) in m.iter().enumerate() {
                let _ = writeln!(out, "{},{},{},{k},{v}", r.group, r.n, r.commutant_dimension);
            }
        }
        None => {
            let _ = writeln!(out, "{},{},{},,", r.group, r.n, r.commutant_dimension);
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct GysEntry {
    #[serde(flatten)]
    pub meta: FamilyEntry,
    pub terms: Vec<TermRecord>,
}

/// JSON form of the `gys` command.
#[derive(Debug, Serialize)]
pub struct GysListing {
    pub group: String,
    pub kind: symdecomp_core::decompose::FamilyKind,
    pub records: Vec<GysEntry>,
    pub verification: VerificationEntry,
}

impl GysListing {
    pub fn new(family: &GysFamily, report: &VerifyReportFile) -> Self {
        GysListing {
            group: family.group.name(),
            kind: family.kind,
            records: family
                .records
                .iter()
                .zip(&report.family)
                .map(|(r, meta)| GysEntry {
                    meta: meta.clone(),
                    terms: r.element.term_records(),
                })
                .collect(),
            verification: report.verification.clone(),
        }
    }
}

pub fn gys_text(family: &GysFamily, report: &VerifyReportFile) -> String {
    let mut out = format!("{} symmetrizers for {}\n", family.len(), family.group.name());
    for (r, meta) in family.records.iter().zip(&report.family) {
        let _ = writeln!(out, "{}  (class {}, image dim {})", r.label, meta.class, meta.image_dim);
        if let Some(t) = &r.tableau {
            for line in t.to_string().lines() {
                let _ = writeln!(out, "    {line}");
            }
        }
        let _ = writeln!(out, "  = {}", r.element);
    }
    verification_text(&mut out, &report.verification);
    out
}

pub fn gys_csv(family: &GysFamily) -> String {
    let mut out = String::from("label,permutation,re,im,exact\n");
    for r in &family.records {
        for t in r.element.term_records() {
            let _ = writeln!(
                out,
                "{},\"{}\",{:?},{:?},{}",
                r.label,
                t.cycles,
                t.re,
                t.im,
                t.exact.unwrap_or_default()
            );
        }
    }
    out
}

fn oracle_lines(out: &mut String, o: &symdecomp_core::report::OracleEntry) {
    let _ = writeln!(out, "commutant dimension:");
    let _ = writeln!(out, "  burnside   {}", o.burnside);
    let _ = writeln!(out, "  trace      {}", o.trace);
    match o.nullspace {
        Some(x) => {
            let _ = writeln!(out, "  nullspace  {x}");
        }
        None => out.push_str("  nullspace  skipped (too large)\n"),
    }
    let _ = writeln!(out, "  Σ d²       {}", o.class_sum);
    if let Some(c) = o.closed_form {
        let _ = writeln!(out, "  closed     {c}");
    }
    let _ = writeln!(out, "  {}", if o.agree() { "agree" } else { "MISMATCH" });
}

pub fn verify_text(r: &VerifyReportFile) -> String {
    let mut out = format!("{} on {} sites, d = {}\n", r.group.name(), r.group.degree(), r.d);
    verification_text(&mut out, &r.verification);
    oracle_lines(&mut out, &r.oracles);
    out.push_str(if r.pass { "PASS\n" } else { "FAIL\n" });
    out
}

pub fn verify_csv(r: &VerifyReportFile) -> String {
    let v = &r.verification;
    let o = &r.oracles;
    format!(
        "group,completeness,orthogonality,primitivity,hermiticity,burnside,trace,nullspace,class_sum,pass\n\
         {},{:e},{:e},{:e},{:e},{},{},{},{},{}\n",
        r.group.name(),
        v.completeness,
        v.orthogonality,
        v.primitivity,
        v.hermiticity,
        o.burnside,
        o.trace,
        o.nullspace.map(|x| x.to_string()).unwrap_or_default(),
        o.class_sum,
        r.pass
    )
}

pub fn decompose_text(r: &DecompositionReportFile) -> String {
    let mut out = format!(
        "{} model on {} sites, symmetry {}\n",
        r.config.topology,
        r.config.n,
        r.group.name()
    );
    verification_text(&mut out, &r.verification);
    if !r.classes.is_empty() {
        out.push_str("classes:\n");
        for c in &r.classes {
            let _ = writeln!(out, "  {:<12} d={} m={}  {}", c.label, c.d, c.m, c.members.join(" "));
        }
    }
    if let Some(b) = &r.basis {
        out.push_str("basis:\n");
        for (col, ket) in b.columns.iter().zip(&b.kets) {
            let class = &r.classes[col.class].label;
            let _ = writeln!(out, "  {class}[{}]_{} = {ket}", col.copy, col.index);
        }
    }
    for op in &r.operators {
        let _ = writeln!(out, "{} (leakage {:e}, copies within {:e}):", op.label, op.leakage,
            op.copy_deviation.iter().copied().fold(0.0, f64::max));
        for (c, block) in r.classes.iter().zip(&op.blocks) {
            if c.d == 0 {
                continue;
            }
            let _ = writeln!(out, "  {} ×{}:", c.label, c.m);
            grid_text(&mut out, block, "    ");
        }
    }
    if let Some(l) = &r.lie_closure {
        let _ = write!(out, "lie closure: dimension {}", l.dimension);
        if let (Some(c), Some(g)) = (l.commutant_dimension, l.gap()) {
            let _ = write!(out, " (commutant {c}, gap {g})");
        }
        out.push('\n');
        for b in &l.blocks {
            let _ = writeln!(out, "  {:<12} d={} dim={} {}", b.label, b.d, b.dimension, b.algebra);
        }
    }
    if let Some(o) = &r.oracles {
        oracle_lines(&mut out, o);
    }
    for f in &r.failures {
        let _ = writeln!(out, "failure: {f}");
    }
    out.push_str(if r.pass { "PASS\n" } else { "FAIL\n" });
    out
}

/// One row per nonzero block entry.
pub fn decompose_csv(r: &DecompositionReportFile) -> String {
    let mut out = String::from("operator,class,row,col,re,im\n");
    for op in &r.operators {
        for (c, block) in r.classes.iter().zip(&op.blocks) {
            for (i, row) in block.iter().enumerate() {
                for (j, z) in row.iter().enumerate() {
                    if z[0].abs() > r.config.tolerances.zero_tol || z[1].abs() > r.config.tolerances.zero_tol {
                        let _ = writeln!(out, "{},\"{}\",{i},{j},{:?},{:?}", op.label, c.label, z[0], z[1]);
                    }
                }
            }
        }
    }
    out
}

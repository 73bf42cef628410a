//! Command implementations. Each returns a report; input problems are errors.

use std::path::Path;

use clap::ValueEnum;
use pertopo::corpus;
use pertopo::diagram::bottleneck_distance;
use pertopo::filtration::{parse_points, CoverFiltration, FilteredComplex, Piece};
use pertopo::fpgroup::Budget;
use pertopo::homology::{barcodes, excision_check, hurewicz_check, suspension_shift_check};
use pertopo::interleaving::{
    check_interleaving, group_persistence, inclusion_interleaving, max_corollary_report, parse_witness, witness_to_text, InterleavingError,
};
use pertopo::pi1::persistent_pi1;
use pertopo::vankampen::{
    amalgamated_presentation, build_cover_square, build_r_family, n_uv_relators, verify_full_isomorphism, verify_kernel_abelianized,
    verify_surjectivity, VanKampenError,
};
use pertopo::Verdict;
use serde_json::json;

use crate::input::{self, display_name, InputError};
use crate::report::{Item, Provenance, Report};

pub fn rips(points: &Path, max_dim: usize, max_scale: f64, out: Option<&Path>) -> Result<(), InputError> {
    let pts = parse_points(&input::read(points)?).map_err(|e| InputError::Parse { path: points.to_path_buf(), message: e.to_string() })?;
    let flt = FilteredComplex::vietoris_rips(&pts, max_dim, max_scale).to_flt();
    match out {
        Some(path) => input::write(path, &flt),
        None => {
            print!("{flt}");
            Ok(())
        }
    }
}

pub fn barcode(flt: &Path, max_dim: usize, out_dir: Option<&Path>) -> Result<Report, InputError> {
    let k = input::complex(flt)?;
    let mut report = Report::new("barcode");
    report.param("input", display_name(flt));
    report.param("max_dim", max_dim);
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|source| InputError::Write { path: dir.to_path_buf(), source })?;
    }
    for (dim, diagram) in barcodes(&k, max_dim).into_iter().enumerate() {
        if let Some(dir) = out_dir {
            input::write(&dir.join(format!("h{dim}.dgm")), &diagram.to_text())?;
        }
        let summary = format!("{} bars", diagram.len());
        report.push(Item::new(format!("H{dim}"), None, Provenance::Exact, summary).details(&diagram));
    }
    Ok(report)
}

pub fn pi1(flt: &Path, basepoint: usize, levels: &str, _budget: &Budget) -> Result<Report, InputError> {
    let k = input::complex(flt)?;
    if !k.vertices().contains(&basepoint) {
        return Err(InputError::Invalid(format!("basepoint {basepoint} is not a vertex of the complex")));
    }
    let levels = input::levels(levels, &k.critical_values())?;
    let mut report = Report::new("pi1");
    report.param("input", display_name(flt));
    report.param("basepoint", basepoint);
    for (u, v) in input::pairs(&levels) {
        let id = format!("({u}, {v})");
        match persistent_pi1(&k, &u, &v, basepoint) {
            Ok(image) => {
                let details = json!({ "u": u, "v": v, "invariants": image.invariants, "images": image.images });
                report.push(Item::new(id, None, Provenance::Exact, format!("image abelianization {}", image.invariants)).details(details));
            }
            Err(e) => report.push(Item::new(id, Some(Verdict::Inapplicable), Provenance::Exact, e.to_string())),
        }
    }
    Ok(report)
}

pub fn vk(flt: &Path, a: &Path, b: &Path, basepoint: usize, levels: &str, drop: Option<usize>, budget: &Budget) -> Result<Report, InputError> {
    let cov = input::cover(input::complex(flt)?, a, b)?;
    let levels = input::levels(levels, &cov.complex().critical_values())?;
    let mut report = Report::new("vk");
    report.param("input", display_name(flt));
    report.param("cover_a", display_name(a));
    report.param("cover_b", display_name(b));
    report.param("basepoint", basepoint);
    if let Some(i) = drop {
        report.param("drop_relator", i);
        report.warnings.push(format!("relator {i} of N_uv dropped before the kernel check"));
    }
    for (u, v) in input::pairs(&levels) {
        let pair = format!("({u}, {v})");
        let sq = match build_cover_square(&cov, &u, &v, basepoint, budget) {
            Ok(sq) => sq,
            Err(e @ (VanKampenError::Disconnected { .. } | VanKampenError::BasepointAbsent { .. })) => {
                report.push(Item::new(format!("preconditions {pair}"), Some(Verdict::Inapplicable), Provenance::Exact, e.to_string()));
                continue;
            }
            Err(e) => return Err(InputError::Invalid(e.to_string())),
        };
        let nat = &sq.naturality;
        let nat_verdict = if !nat.refuted.is_empty() {
            Verdict::Refuted
        } else if nat.inconclusive > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Verified
        };
        report.push(
            Item::new(format!("naturality {pair}"), Some(nat_verdict), Provenance::Certified, format!("{} of 4 squares certified", nat.verified))
                .details(nat),
        );
        match verify_surjectivity(&sq) {
            Ok(s) => {
                let n = s.generators.len();
                report.push(Item::new(format!("surjectivity {pair}"), Some(s.verdict), Provenance::Certified, format!("{n} generators factored")).details(&s));
            }
            Err(e) => report.push(Item::new(format!("surjectivity {pair}"), Some(Verdict::Inconclusive), Provenance::Certified, e.to_string())),
        }
        let mut relators = n_uv_relators(&sq);
        if let Some(i) = drop.filter(|&i| i < relators.len()) {
            relators.remove(i);
        }
        let kernel = verify_kernel_abelianized(&sq, &relators);
        let summary = format!("pushout {} vs image {}", kernel.pushout, kernel.image);
        report.push(Item::new(format!("kernel {pair}"), Some(kernel.verdict), Provenance::Surrogate, summary).details(&kernel));
        let amalgam = amalgamated_presentation(&sq);
        match verify_full_isomorphism(&sq, &amalgam) {
            Ok(full) => {
                report.push(Item::new(format!("isomorphism {pair}"), Some(full.verdict), Provenance::Certified, full.method.clone()).details(&full))
            }
            Err(e) => report.push(Item::new(format!("isomorphism {pair}"), Some(Verdict::Inconclusive), Provenance::Certified, e.to_string())),
        }
    }
    match build_r_family(&cov, basepoint, budget) {
        Ok(fam) => {
            let rep = check_interleaving(&fam.x, &fam.q, &fam.r_witness());
            let summary = format!("{} of {} diagrams certified", rep.verified, rep.checked);
            report.push(Item::new("0-interleaving r/phi", Some(rep.verdict), Provenance::Certified, summary).details(&rep));
        }
        Err(e) => report.push(Item::new("0-interleaving r/phi", Some(Verdict::Inapplicable), Provenance::Certified, e.to_string())),
    }
    Ok(report)
}

pub fn distance(left: &Path, right: &Path) -> Result<Report, InputError> {
    let (a, b) = (input::diagram(left)?, input::diagram(right)?);
    let d = bottleneck_distance(&a, &b);
    let mut report = Report::new("interleave distance");
    report.param("left", display_name(left));
    report.param("right", display_name(right));
    report.push(Item::new("bottleneck", None, Provenance::Exact, d.to_string()).details(json!({ "distance": d.to_string() })));
    Ok(report)
}

pub fn check(
    left: &Path,
    right: &Path,
    delta: f64,
    basepoint: usize,
    witness: Option<&Path>,
    emit: Option<&Path>,
    budget: &Budget,
) -> Result<Report, InputError> {
    let (x, y) = (input::complex(left)?, input::complex(right)?);
    if delta < 0.0 {
        return Err(InputError::Invalid("delta must be nonnegative".into()));
    }
    let mut report = Report::new("interleave check");
    report.param("left", display_name(left));
    report.param("right", display_name(right));
    report.param("delta", delta);
    report.param("basepoint", basepoint);
    let invalid = |e: InterleavingError| InputError::Invalid(e.to_string());
    let w = match witness {
        Some(path) => {
            report.param("witness", display_name(path));
            None
        }
        None => Some(inclusion_interleaving(&x, &y, basepoint, &delta, budget).map_err(invalid)?),
    };
    let (g, h, w) = match (w, witness) {
        (Some(found), _) => found,
        (None, Some(path)) => {
            let g = group_persistence(&x, basepoint, budget).map_err(invalid)?;
            let h = group_persistence(&y, basepoint, budget).map_err(invalid)?;
            let w = parse_witness(&input::read(path)?, &g, &h).map_err(|e| InputError::Parse { path: path.to_path_buf(), message: e.to_string() })?;
            (g, h, w)
        }
        (None, None) => unreachable!("a witness is either given or constructed"),
    };
    if let Some(path) = emit {
        input::write(path, &witness_to_text(&w))?;
    }
    let rep = check_interleaving(&g, &h, &w);
    let summary = format!("{} of {} diagrams certified", rep.verified, rep.checked);
    report.push(Item::new("interleaving", Some(rep.verdict), Provenance::Certified, summary).details(&rep));
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
pub fn corollary(
    left: &Path,
    right: &Path,
    a: &Path,
    b: &Path,
    basepoint: usize,
    delta_a: f64,
    delta_b: f64,
    budget: &Budget,
) -> Result<Report, InputError> {
    let invalid = |e: &dyn std::fmt::Display| InputError::Invalid(e.to_string());
    let cx = build_r_family(&input::cover(input::complex(left)?, a, b)?, basepoint, budget).map_err(|e| invalid(&e))?;
    let cx2 = build_r_family(&input::cover(input::complex(right)?, a, b)?, basepoint, budget).map_err(|e| invalid(&e))?;
    let wa = cx.inclusion_witness(&cx2, Piece::A, &delta_a).map_err(|e| invalid(&e))?;
    let wb = cx.inclusion_witness(&cx2, Piece::B, &delta_b).map_err(|e| invalid(&e))?;
    let rep = max_corollary_report(&cx, &cx2, &wa, &wb).map_err(|e| invalid(&e))?;
    let mut report = Report::new("interleave corollary");
    report.param("left", display_name(left));
    report.param("right", display_name(right));
    report.param("delta_a", delta_a);
    report.param("delta_b", delta_b);
    let summary = format!("d_I <= {}", rep.bound);
    report.push(Item::new("upper bound", Some(rep.upper_bound), Provenance::Certified, summary).details(json!({
        "bound": rep.bound,
        "product": rep.product,
        "total": rep.total,
    })));
    let s = &rep.surrogate;
    let summary = format!("d_A = {}, d_B = {}, d_X = {}, equality {}", s.d_a, s.d_b, s.d_x, if s.equality_observed { "observed" } else { "not observed" });
    report.push(Item::new("abelianized distances", None, Provenance::Surrogate, summary).details(s));
    Ok(report)
}

pub fn hurewicz(flt: &Path, u: f64, v: f64, m: usize, basepoint: Option<usize>, budget: &Budget) -> Result<Report, InputError> {
    let k = input::complex(flt)?;
    let rep = hurewicz_check(&k, &u, &v, m, basepoint, budget);
    let mut report = Report::new("hurewicz");
    report.param("input", display_name(flt));
    report.param("m", m);
    report.param("u", u);
    report.param("v", v);
    let summary = match &rep.value {
        Some(value) => format!("H_{m} = {value}; {}", rep.reason),
        None => rep.reason.clone(),
    };
    report.push(Item::new(format!("hurewicz m={m} ({u}, {v})"), Some(rep.verdict), Provenance::Surrogate, summary).details(&rep));
    Ok(report)
}

pub fn suspend(flt: &Path, max_k: usize, out: Option<&Path>) -> Result<Report, InputError> {
    let k = input::complex(flt)?;
    let (s, _, _) = k.suspension();
    let mut report = Report::new("suspend");
    report.param("input", display_name(flt));
    report.param("max_k", max_k);
    for dim in 0..=max_k {
        let check = suspension_shift_check(&k, dim);
        let summary = format!("{} bars in reduced H{dim}, {} in H{} of the suspension", check.base.len(), check.suspended.len(), dim + 1);
        report.push(Item::new(format!("shift k={dim}"), Some(check.verdict), Provenance::Exact, summary).details(&check));
    }
    if let Some(path) = out {
        input::write(path, &s.to_flt())?;
        report.param("output", display_name(path));
    }
    Ok(report)
}

pub fn excise(flt: &Path, a: &Path, b: &Path, max_k: usize, levels: &str) -> Result<Report, InputError> {
    let cov = input::cover(input::complex(flt)?, a, b)?;
    let levels = input::levels(levels, &cov.complex().critical_values())?;
    let mut report = Report::new("excise");
    report.param("input", display_name(flt));
    report.param("cover_a", display_name(a));
    report.param("cover_b", display_name(b));
    for (u, v) in input::pairs(&levels) {
        for k in 0..=max_k {
            let c = excision_check(&cov, &u, &v, k);
            let summary = format!("(A, C): {}, (X, B): {}", c.left, c.right);
            report.push(Item::new(format!("H{k} ({u}, {v})"), Some(c.verdict), Provenance::Exact, summary).details(&c));
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CorpusName {
    StagedCircle,
    StagedWedge,
    WedgeWithFills,
    Cylinder,
    StagedOctahedron,
    ProjectivePlane,
}

pub fn corpus(name: CorpusName, dir: &Path) -> Result<Report, InputError> {
    let (k, cover): (FilteredComplex<f64>, Option<CoverFiltration<f64>>) = match name {
        CorpusName::StagedCircle => (corpus::staged_circle(), None),
        CorpusName::StagedWedge => (corpus::staged_wedge(), Some(corpus::wedge_cover(corpus::staged_wedge()))),
        CorpusName::WedgeWithFills => (corpus::wedge_with_fills(), Some(corpus::wedge_cover(corpus::wedge_with_fills()))),
        CorpusName::Cylinder => (corpus::cylinder(), Some(corpus::cylinder_cover())),
        CorpusName::StagedOctahedron => (corpus::staged_octahedron(), None),
        CorpusName::ProjectivePlane => (corpus::projective_plane(), None),
    };
    std::fs::create_dir_all(dir).map_err(|source| InputError::Write { path: dir.to_path_buf(), source })?;
    let name_text = name.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut report = Report::new("corpus");
    report.param("name", &name_text);
    input::write(&dir.join(format!("{name_text}.flt")), &k.to_flt())?;
    report.push(Item::new("complex", None, Provenance::Exact, format!("{name_text}.flt, {} simplices", k.len())));
    if let Some(cov) = cover {
        for (piece, file) in [(Piece::A, "a.cover"), (Piece::B, "b.cover")] {
            let text: String = cov.vertices(piece).iter().map(|v| format!("{v}\n")).collect();
            input::write(&dir.join(file), &text)?;
        }
        report.push(Item::new("cover", None, Provenance::Exact, "a.cover, b.cover"));
    }
    Ok(report)
}

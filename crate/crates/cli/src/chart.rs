//! Deterministic SVG charts: one dot per cyclic summand of each realized
//! degree, solid struts along v1-multiplications, dashed edges for hidden
//! p-extensions. Layout is a fixed function of (degree, slot index) and all
//! element ordering is stable, so charts are byte-for-byte reproducible.

use crate::Model;
use num_bigint::BigInt;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::sync::Arc;
use thh_core::arith::Prime;
use thh_core::graded::{Monomial, RealizedDegree};

struct Dot {
    degree: i64,
    slot: usize,
    exponent: u32,
    label: String,
}

struct Strut {
    from: (i64, usize),
    to: (i64, usize),
}

struct ExtEdge {
    degree: i64,
    slots: (usize, usize),
    title: String,
}

pub fn render_model(
    model: Model,
    p: Prime,
    n: Option<i32>,
    max_degree: i64,
) -> anyhow::Result<String> {
    let mut dots: Vec<Dot> = Vec::new();
    let mut struts: Vec<Strut> = Vec::new();
    let mut ext_edges: Vec<ExtEdge> = Vec::new();

    if let Some(pres) = model.presentation(p) {
        let realized: Vec<Arc<RealizedDegree>> = (0..=max_degree)
            .into_par_iter()
            .map(|d| Arc::new(pres.realize_with_reps(d)))
            .collect();
        // dots: one per summand, slots ordered by dominant label
        let mut slot_of: Vec<Vec<(Monomial, usize)>> = Vec::new();
        for (d, rd) in realized.iter().enumerate() {
            let mut summands = rd.summand_table();
            summands.sort_by(|a, b| a.1.to_string().cmp(&b.1.to_string()));
            let mut slots = Vec::new();
            for (slot, (exp, mono)) in summands.iter().enumerate() {
                dots.push(Dot {
                    degree: d as i64,
                    slot,
                    exponent: *exp,
                    label: mono.to_string(),
                });
                slots.push((mono.clone(), slot));
            }
            slot_of.push(slots);
        }
        // v1-struts: follow a summand's dominant monomial one v1-power up
        if let Some(v1d) = pres.v1_degree() {
            for d in 0..=(max_degree - v1d) {
                let rd = &realized[d as usize];
                let up = &realized[(d + v1d) as usize];
                // summand_table and summand_reps list summands in the same
                // order; re-sort both by the dot ordering used above
                let table = rd.summand_table();
                let reps = rd.summand_reps();
                let mut order: Vec<usize> = (0..table.len()).collect();
                order.sort_by(|&a, &b| table[a].1.to_string().cmp(&table[b].1.to_string()));
                for (slot, &i) in order.iter().enumerate() {
                    let mono = &table[i].1;
                    let shifted = Monomial::v1(mono.v1_exp + 1, mono.gen.clone());
                    let Some((_, target_slot)) = slot_of[(d + v1d) as usize]
                        .iter()
                        .find(|(m, _)| *m == shifted)
                    else {
                        continue;
                    };
                    // the image class must actually be nonzero
                    let image: Vec<(usize, BigInt)> = reps[i]
                        .1
                        .iter()
                        .filter_map(|(bi, c)| {
                            let m = &rd.basis[*bi];
                            up.monomial_index(&Monomial::v1(m.v1_exp + 1, m.gen.clone()))
                                .map(|j| (j, c.clone()))
                        })
                        .collect();
                    if !up.is_zero_class(&image) {
                        struts.push(Strut {
                            from: (d, slot),
                            to: (d + v1d, *target_slot),
                        });
                    }
                }
            }
        }
        // hidden extension edges from the engine's log
        if model == Model::ThhBp2Bp1 {
            let window = max_degree.max(4 * (p.get() as i64) * (p.get() as i64));
            let run = thh_core::brun::run_brun(2, p, window).map_err(|e| anyhow::anyhow!("{e}"))?;
            for e in run.extensions.iter().filter(|e| e.degree <= max_degree) {
                let count = slot_of[e.degree as usize].len();
                if count == 0 {
                    continue;
                }
                ext_edges.push(ExtEdge {
                    degree: e.degree,
                    slots: (0, count - 1),
                    title: format!(
                        "p^{} * {} = {}",
                        e.p_power,
                        e.source,
                        e.target_display(run.case.sigma_index())
                    ),
                });
            }
        }
    } else {
        // table-backed models: anonymous dots
        let table = crate::model_table(model, p, n, max_degree)?;
        for r in &table {
            let g = r.group();
            let mut slot = 0;
            for _ in 0..g.free_rank {
                dots.push(Dot {
                    degree: r.degree,
                    slot,
                    exponent: 0,
                    label: "Z".into(),
                });
                slot += 1;
            }
            for &e in &g.torsion {
                dots.push(Dot {
                    degree: r.degree,
                    slot,
                    exponent: e,
                    label: format!("Z/p^{e}"),
                });
                slot += 1;
            }
        }
    }

    Ok(render_svg(p, max_degree, &dots, &struts, &ext_edges))
}

const DX: i64 = 14;
const DY: i64 = 16;
const MARGIN: i64 = 44;

fn xy(max_slots: usize, degree: i64, slot: usize) -> (i64, i64) {
    let height = MARGIN * 2 + DY * max_slots.max(1) as i64;
    (MARGIN + degree * DX, height - MARGIN - slot as i64 * DY)
}

fn render_svg(
    p: Prime,
    max_degree: i64,
    dots: &[Dot],
    struts: &[Strut],
    ext_edges: &[ExtEdge],
) -> String {
    let max_slots = dots.iter().map(|d| d.slot + 1).max().unwrap_or(0);
    let width = MARGIN * 2 + DX * (max_degree + 1);
    let height = MARGIN * 2 + DY * max_slots.max(1) as i64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg version="1.1" width="{width}" height="{height}" xmlns="http://www.w3.org/2000/svg">"#
    );
    let _ = writeln!(s, r#"<!-- p = {p}, degrees 0..{max_degree} -->"#);
    // axis and ticks
    let axis_y = height - MARGIN + 10;
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#,
        MARGIN - 8,
        MARGIN + DX * max_degree + 8
    );
    let mut d = 0;
    while d <= max_degree {
        let x = MARGIN + d * DX;
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{axis_y}" x2="{x}" y2="{}" stroke="black"/>"#,
            axis_y + 4
        );
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{}" font-size="9" text-anchor="middle">{d}</text>"#,
            axis_y + 16
        );
        d += 5;
    }
    for strut in struts {
        let (x1, y1) = xy(max_slots, strut.from.0, strut.from.1);
        let (x2, y2) = xy(max_slots, strut.to.0, strut.to.1);
        let _ = writeln!(
            s,
            r##"<line class="strut" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#3366aa" stroke-width="1"/>"##
        );
    }
    for e in ext_edges {
        let (x1, y1) = xy(max_slots, e.degree, e.slots.0);
        let (x2, y2) = xy(max_slots, e.degree, e.slots.1);
        let (y1, y2) = if y1 == y2 { (y1, y2 - 10) } else { (y1, y2) };
        let _ = writeln!(
            s,
            r##"<line class="ext" data-degree="{}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#aa3333" stroke-width="1" stroke-dasharray="3 2"><title>{}</title></line>"##,
            e.degree, e.title
        );
    }
    for dot in dots {
        let (x, y) = xy(max_slots, dot.degree, dot.slot);
        let fill = if dot.exponent == 0 {
            "#000000"
        } else {
            "#888888"
        };
        let _ = writeln!(
            s,
            r#"<circle class="dot" data-degree="{}" data-slot="{}" data-exp="{}" cx="{x}" cy="{y}" r="4" fill="{fill}"><title>{} ({})</title></circle>"#,
            dot.degree,
            dot.slot,
            dot.exponent,
            dot.label,
            if dot.exponent == 0 {
                "Z".to_string()
            } else {
                format!("Z/p^{}", dot.exponent)
            }
        );
    }
    s.push_str("</svg>\n");
    s
}

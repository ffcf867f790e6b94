//! Static SVG output.

use std::fmt::Write;

use num_traits::{ToPrimitive, Zero};

use gamma_persist::barcodes1d::{GradedBarcode, Interval};
use gamma_persist::foundations::{ExtRat, Rat};
use gamma_persist::gamma_geometry::{HPolyhedron, HalfSpace};
use gamma_persist::{Error, Result};

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 40.0;
const ROW: f64 = 14.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn color(d: i32) -> &'static str {
    PALETTE[d.rem_euclid(PALETTE.len() as i32) as usize]
}

fn f(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// One horizontal segment per bar, grouped by degree; arrows mark infinite ends.
pub fn barcode_svg(b: &GradedBarcode) -> String {
    let mut bars: Vec<(i32, Interval)> = b.expanded();
    let len = |i: &Interval| match (i.lower(), i.upper()) {
        (ExtRat::Finite(a), ExtRat::Finite(c)) => ExtRat::Finite(c - a),
        _ => ExtRat::PosInf,
    };
    bars.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.lower().cmp(y.1.lower())).then_with(|| len(&x.1).cmp(&len(&y.1))));
    let ends: Vec<f64> = b.endpoints().iter().map(f).collect();
    let (mut lo, mut hi) = ends.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    if !lo.is_finite() {
        (lo, hi) = (-1.0, 1.0);
    }
    if hi - lo < 1e-9 {
        (lo, hi) = (lo - 1.0, hi + 1.0);
    }
    let pad = (hi - lo) * 0.1;
    let (lo, hi) = (lo - pad, hi + pad);
    let x = |v: f64| MARGIN + (v - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN);
    let height = MARGIN * 2.0 + ROW * bars.len().max(1) as f64;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height:.0}" viewBox="0 0 {WIDTH} {height:.0}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut row = 0usize;
    let mut k = 0;
    while k < bars.len() {
        let d = bars[k].0;
        let n = bars[k..].iter().take_while(|b| b.0 == d).count();
        let top = MARGIN + ROW * row as f64;
        let _ = writeln!(
            s,
            r#"<rect x="0" y="{top:.2}" width="{MARGIN}" height="{:.2}" fill="{}" fill-opacity="0.25"/><text x="4" y="{:.2}" font-size="10" font-family="sans-serif">H^{d}</text>"#,
            ROW * n as f64,
            color(d),
            top + 10.0
        );
        for (_, i) in &bars[k..k + n] {
            let y = MARGIN + ROW * row as f64 + ROW / 2.0;
            let a = match i.lower() {
                ExtRat::Finite(r) => x(f(r)),
                _ => MARGIN / 2.0,
            };
            let c = match i.upper() {
                ExtRat::Finite(r) => x(f(r)),
                _ => WIDTH - MARGIN / 2.0,
            };
            let col = color(d);
            let _ = writeln!(s, r#"<line x1="{a:.2}" y1="{y:.2}" x2="{c:.2}" y2="{y:.2}" stroke="{col}" stroke-width="3"/>"#);
            for (end, v, closed, dir) in [(i.lower(), a, i.lower_closed(), -1.0), (i.upper(), c, i.upper_closed(), 1.0)] {
                if end.is_finite() {
                    let fill = if closed { col } else { "white" };
                    let _ = writeln!(s, r#"<circle cx="{v:.2}" cy="{y:.2}" r="3" fill="{fill}" stroke="{col}"/>"#);
                } else {
                    let tip = v + dir * 6.0;
                    let _ = writeln!(
                        s,
                        r#"<polygon points="{tip:.2},{y:.2} {v:.2},{:.2} {v:.2},{:.2}" fill="{col}"/>"#,
                        y - 4.0,
                        y + 4.0
                    );
                }
            }
            row += 1;
        }
        k += n;
    }
    let axis = height - MARGIN / 2.0;
    let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{axis:.2}" x2="{:.2}" y2="{axis:.2}" stroke="black"/>"#, WIDTH - MARGIN);
    let mut ticks: Vec<Rat> = b.endpoints();
    ticks.dedup();
    for t in ticks {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="9" font-family="sans-serif" text-anchor="middle">{t}</text>"#,
            x(f(&t)),
            axis + 12.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn meet(a: &HalfSpace, b: &HalfSpace) -> Option<Vec<Rat>> {
    let (p, q, r, t) = (&a.normal[0], &a.normal[1], &b.normal[0], &b.normal[1]);
    let det = p * t - q * r;
    if det.is_zero() {
        return None;
    }
    Some(vec![(&a.offset * t - q * &b.offset) / &det, (p * &b.offset - &a.offset * r) / &det])
}

/// Outlines of planar strata, clipped to a box around all vertices.
pub fn strata_svg(strata: &[HPolyhedron]) -> Result<String> {
    if strata.iter().any(|p| p.dim != 2) {
        return Err(Error::Shape("only planar strata can be drawn".into()));
    }
    let lines: Vec<&HalfSpace> = strata.iter().flat_map(|p| &p.constraints).collect();
    let mut pts: Vec<Vec<Rat>> = Vec::new();
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            pts.extend(meet(a, b));
        }
    }
    pts.extend(strata.iter().filter_map(HPolyhedron::witness));
    let (mut lo, mut hi) = (vec![Rat::from_integer((-1).into()); 2], vec![Rat::from_integer(1.into()); 2]);
    for p in &pts {
        for k in 0..2 {
            lo[k] = lo[k].clone().min(p[k].clone());
            hi[k] = hi[k].clone().max(p[k].clone());
        }
    }
    let one = Rat::from_integer(1.into());
    let bx = HPolyhedron::box_from(&[(&lo[0] - &one, true, &hi[0] + &one, true), (&lo[1] - &one, true, &hi[1] + &one, true)]);
    let (x0, x1, y0, y1) = (f(&lo[0]) - 1.0, f(&hi[0]) + 1.0, f(&lo[1]) - 1.0, f(&hi[1]) + 1.0);
    let side = WIDTH - 2.0 * MARGIN;
    let scale = side / (x1 - x0).max(y1 - y0);
    let px = |p: &[Rat]| (MARGIN + (f(&p[0]) - x0) * scale, MARGIN + (y1 - f(&p[1])) * scale);
    let height = 2.0 * MARGIN + (y1 - y0) * scale;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height:.0}" viewBox="0 0 {WIDTH} {height:.0}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (n, z) in strata.iter().enumerate() {
        let clip = z.closure().intersect(&bx);
        let cs: Vec<&HalfSpace> = clip.constraints.iter().collect();
        let mut vs: Vec<Vec<Rat>> = Vec::new();
        for (i, a) in cs.iter().enumerate() {
            for b in &cs[i + 1..] {
                if let Some(p) = meet(a, b) {
                    if clip.contains_point(&p) && !vs.contains(&p) {
                        vs.push(p);
                    }
                }
            }
        }
        if vs.is_empty() {
            continue;
        }
        let c: Vec<f64> = (0..2).map(|k| vs.iter().map(|v| f(&v[k])).sum::<f64>() / vs.len() as f64).collect();
        vs.sort_by(|a, b| {
            let t = |v: &Vec<Rat>| (f(&v[1]) - c[1]).atan2(f(&v[0]) - c[0]);
            t(a).total_cmp(&t(b))
        });
        let col = PALETTE[n % PALETTE.len()];
        let points: Vec<String> = vs.iter().map(|v| px(v)).map(|(a, b)| format!("{a:.2},{b:.2}")).collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{col}" fill-opacity="0.3" stroke="{col}" stroke-width="1.5"/>"#,
            points.join(" ")
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

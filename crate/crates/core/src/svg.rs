//! SVG pictures of the positive cluster fan in rank at most 3.

use std::fmt::Write;

use serde::Serialize;

use crate::cluster::PositiveComplex;
use crate::error::{Error, Result};
use crate::group::CoxeterGroup;

#[derive(Clone, Debug, Serialize)]
pub struct FanSvg {
    pub svg: String,
    pub rays: usize,
    pub sectors: usize,
}

const SIZE: f64 = 400.0;
const RADIUS: f64 = 170.0;

/// Euclidean coordinates of the simple roots, from a Cholesky factor of the Gram matrix.
fn simple_root_frame(g: &CoxeterGroup) -> Vec<Vec<f64>> {
    let gram = g.gram();
    let n = gram.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][j] = (gram[i][i] as f64 - s).sqrt();
            } else {
                l[i][j] = (gram[i][j] as f64 - s) / l[j][j];
            }
        }
    }
    l
}

fn embed(frame: &[Vec<f64>], root: &[i64]) -> Vec<f64> {
    let n = frame.len();
    (0..n)
        .map(|k| root.iter().zip(frame).map(|(&c, row)| c as f64 * row[k]).sum())
        .collect()
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / norm).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_screen(p: (f64, f64)) -> (f64, f64) {
    (SIZE / 2.0 + RADIUS * p.0, SIZE / 2.0 - RADIUS * p.1)
}

/// Positive roots in the plane (rank 2), on a line (rank 1), or projected into the unit disk (rank 3).
fn project(g: &CoxeterGroup) -> Result<Vec<(f64, f64)>> {
    let n = g.rank();
    if n > 3 {
        return Err(Error::Argument(format!("fan pictures need rank at most 3, got {n}")));
    }
    let frame = simple_root_frame(g);
    let vs: Vec<Vec<f64>> = (0..g.num_reflections())
        .map(|t| normalize(&embed(&frame, g.root(t))))
        .collect();
    Ok(match n {
        1 => vs.iter().map(|v| (v[0], 0.0)).collect(),
        2 => vs.iter().map(|v| (v[0], v[1])).collect(),
        _ => {
            let sum: Vec<f64> = (0..3).map(|k| vs.iter().map(|v| v[k]).sum()).collect();
            let d = normalize(&sum);
            let mut e1: Vec<f64> = vec![1.0, 0.0, 0.0];
            if dot(&e1, &d).abs() > 0.9 {
                e1 = vec![0.0, 1.0, 0.0];
            }
            let k = dot(&e1, &d);
            let e1 = normalize(&e1.iter().zip(&d).map(|(a, b)| a - k * b).collect::<Vec<_>>());
            let e2 = vec![
                d[1] * e1[2] - d[2] * e1[1],
                d[2] * e1[0] - d[0] * e1[2],
                d[0] * e1[1] - d[1] * e1[0],
            ];
            vs.iter()
                .map(|v| {
                    let s = 1.0 + dot(v, &d);
                    (dot(v, &e1) / s, dot(v, &e2) / s)
                })
                .collect()
        }
    })
}

/// The positive part of the cluster fan: one ray per positive root, one sector per facet.
pub fn fan_svg(g: &CoxeterGroup, complex: &PositiveComplex) -> Result<FanSvg> {
    let pts = project(g)?;
    let n = g.rank();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (cx, cy) = to_screen((0.0, 0.0));
    if n == 3 {
        let _ = writeln!(
            s,
            r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{RADIUS:.3}" fill="none" stroke="gray"/>"#
        );
    }
    let facets = &complex.facets;
    let mut sectors = 0;
    for (k, verts) in facets.iter().enumerate() {
        let hue = (k * 360) / facets.len().max(1);
        let fill = format!("hsl({hue},60%,80%)");
        match n {
            2 => {
                let (a, b) = (to_screen(pts[verts[0]]), to_screen(pts[verts[1]]));
                let _ = writeln!(
                    s,
                    r#"<path d="M {cx:.3} {cy:.3} L {:.3} {:.3} A {RADIUS:.3} {RADIUS:.3} 0 0 {} {:.3} {:.3} Z" fill="{fill}" stroke="black" stroke-width="0.5"/>"#,
                    a.0,
                    a.1,
                    sweep(pts[verts[0]], pts[verts[1]]),
                    b.0,
                    b.1
                );
                sectors += 1;
            }
            3 => {
                let p: Vec<String> = verts
                    .iter()
                    .map(|&t| {
                        let q = to_screen(pts[t]);
                        format!("{:.3},{:.3}", q.0, q.1)
                    })
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="0.5"/>"#,
                    p.join(" ")
                );
                sectors += 1;
            }
            _ => {}
        }
    }
    for (t, &p) in pts.iter().enumerate() {
        let q = to_screen(p);
        if n == 3 {
            let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="black"/>"#, q.0, q.1);
        } else {
            let _ = writeln!(
                s,
                r#"<line x1="{cx:.3}" y1="{cy:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-width="1.5"/>"#,
                q.0,
                q.1
            );
        }
        let label = to_screen((p.0 * 1.1, p.1 * 1.1));
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-size="11" text-anchor="middle">{}</text>"#,
            label.0,
            label.1,
            g.reflection_name(t)
        );
    }
    s.push_str("</svg>\n");
    Ok(FanSvg {
        svg: s,
        rays: pts.len(),
        sectors,
    })
}

/// SVG arc sweep flag for the short arc from `a` to `b` (screen y points down).
fn sweep(a: (f64, f64), b: (f64, f64)) -> u8 {
    let cross = a.0 * b.1 - a.1 * b.0;
    if cross > 0.0 {
        1
    } else {
        0
    }
}

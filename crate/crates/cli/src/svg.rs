//! Deterministic SVG scenes for plane colorings and runs.
//!
//! Every coordinate is printed with four decimals and colors come from a
//! fixed golden-angle palette, so identical inputs produce identical
//! bytes — diffs of rendered scenes are then meaningful in tests and in
//! version control.

use std::fmt::Write as _;

use sphere_forcing::{Coloring, Point, Report};

use crate::CliError;

/// Fill color for an arbitrary integer color id: hues spaced by the golden
/// angle never collide for nearby ids, which matters for colorings with
/// unboundedly many colors.
pub fn fill(color: i64) -> String {
    let hue = (color as f64 * 137.508).rem_euclid(360.0);
    format!("hsl({hue:.1}, 62%, 72%)")
}

fn head(out: &mut String, view: [f64; 4]) {
    let [x0, y0, x1, y1] = view;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.4} {:.4} {:.4} {:.4}">"#,
        x0,
        y0,
        x1 - x0,
        y1 - y0
    );
}

/// World coordinates have y pointing up; SVG has y pointing down.
fn flip(view: [f64; 4], y: f64) -> f64 {
    view[1] + view[3] - y
}

fn rect(out: &mut String, view: [f64; 4], x: f64, y_top: f64, w: f64, h: f64, fill: &str) {
    let _ = writeln!(
        out,
        r#"<rect x="{:.4}" y="{:.4}" width="{w:.4}" height="{h:.4}" fill="{fill}"/>"#,
        x,
        flip(view, y_top),
    );
}

fn circle(out: &mut String, view: [f64; 4], cx: f64, cy: f64, r: f64, attrs: &str) {
    let _ = writeln!(
        out,
        r#"<circle cx="{cx:.4}" cy="{:.4}" r="{r:.4}" {attrs}/>"#,
        flip(view, cy),
    );
}

fn color_at(coloring: &Coloring, x: f64, y: f64) -> Result<i64, CliError> {
    Ok(coloring.color(&Point::floats(&[x, y]))?)
}

/// The coloring as shaded cells/bands over the view box, plus optional
/// sphere and certificate overlays from a saved report.
pub fn render_coloring(
    coloring: &Coloring,
    view: [f64; 4],
    report: Option<&Report>,
) -> Result<String, CliError> {
    if coloring.dim().is_some_and(|n| n != 2) {
        return Err(CliError::Usage(
            "plotting is only available for plane colorings".into(),
        ));
    }
    let [x0, y0, x1, y1] = view;
    let mut out = String::new();
    head(&mut out, view);
    match coloring {
        Coloring::Constant { color } => {
            rect(&mut out, view, x0, y1, x1 - x0, y1 - y0, &fill(*color));
        }
        Coloring::Strip { .. } | Coloring::MergedStrip { .. } => {
            let lo = y0.floor() as i64;
            let hi = y1.ceil() as i64;
            for band in lo..hi {
                let top = (band + 1) as f64;
                let c = color_at(coloring, 0.5 * (x0 + x1), band as f64 + 0.5)?;
                rect(&mut out, view, x0, top, x1 - x0, 1.0, &fill(c));
            }
        }
        Coloring::Grid { delta, .. } => {
            let d = delta.to_f64();
            let (ix0, ix1) = ((x0 / d).floor() as i64, (x1 / d).ceil() as i64);
            let (iy0, iy1) = ((y0 / d).floor() as i64, (y1 / d).ceil() as i64);
            for iy in iy0..iy1 {
                for ix in ix0..ix1 {
                    let c = color_at(coloring, (ix as f64 + 0.5) * d, (iy as f64 + 0.5) * d)?;
                    rect(
                        &mut out,
                        view,
                        ix as f64 * d,
                        (iy + 1) as f64 * d,
                        d,
                        d,
                        &fill(c),
                    );
                }
            }
        }
        Coloring::TwoBall => {
            rect(&mut out, view, x0, y1, x1 - x0, y1 - y0, &fill(1));
            let left = format!(r#"fill="{}" stroke="black" stroke-width="0.02""#, fill(1));
            let right = format!(r#"fill="{}" stroke="black" stroke-width="0.02""#, fill(2));
            circle(&mut out, view, -2.0, 0.0, 2.0, &left);
            circle(&mut out, view, 2.0, 0.0, 2.0, &right);
        }
        Coloring::Rational2d => {
            return Err(CliError::Usage(
                "the rational-points coloring has no area to shade".into(),
            ));
        }
    }
    if let Some(report) = report {
        overlay(&mut out, view, report)?;
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn point_xy(p: &Point) -> Result<(f64, f64), CliError> {
    let v = p.to_f64_vec();
    if v.len() != 2 {
        return Err(CliError::Usage(
            "report overlays need two-dimensional data".into(),
        ));
    }
    Ok((v[0], v[1]))
}

fn overlay(out: &mut String, view: [f64; 4], report: &Report) -> Result<(), CliError> {
    for verdict in &report.verdicts {
        let (cx, cy) = point_xy(verdict.sphere.center())?;
        let r = verdict.sphere.radius().to_f64();
        circle(
            out,
            view,
            cx,
            cy,
            r,
            r##"class="sphere" fill="none" stroke="#666666" stroke-width="0.015""##,
        );
    }
    if let Some(cert) = &report.certificate {
        let (cx, cy) = point_xy(cert.sphere.center())?;
        let r = cert.sphere.radius().to_f64();
        circle(
            out,
            view,
            cx,
            cy,
            r,
            r##"class="violation" fill="none" stroke="#cc2222" stroke-width="0.04""##,
        );
        for w in &cert.witness {
            let (x, y) = point_xy(w)?;
            circle(out, view, x, y, 0.06, r##"class="witness" fill="#cc2222""##);
        }
        circle(
            out,
            view,
            cx,
            cy,
            0.06,
            r##"class="center" fill="#2222cc""##,
        );
    }
    Ok(())
}

/// One frame of a propagation run: the configuration's points as dots,
/// colored where assigned, hollow where still blank.
pub fn render_points(
    points: &[Point],
    colors: &[Option<i64>],
    view: [f64; 4],
) -> Result<String, CliError> {
    let mut out = String::new();
    head(&mut out, view);
    for (p, c) in points.iter().zip(colors) {
        let (x, y) = point_xy(p)?;
        let attrs = match c {
            Some(c) => format!(
                r#"class="point" fill="{}" stroke="black" stroke-width="0.02""#,
                fill(*c)
            ),
            None => r#"class="point" fill="white" stroke="black" stroke-width="0.02""#.into(),
        };
        circle(&mut out, view, x, y, 0.12, &attrs);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// A view box that comfortably contains all the points.
pub fn fit_view(points: &[Point]) -> Result<[f64; 4], CliError> {
    let mut x = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        let (px, py) = point_xy(p)?;
        x = (x.0.min(px), x.1.max(px));
        y = (y.0.min(py), y.1.max(py));
    }
    Ok([x.0 - 1.0, y.0 - 1.0, x.1 + 1.0, y.1 + 1.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use sphere_forcing::Scalar;

    #[test]
    fn unit_grid_over_a_four_square_view_has_sixteen_cells() {
        let grid = Coloring::grid(2, Scalar::int(1)).unwrap();
        let svg = render_coloring(&grid, [0.0, 0.0, 4.0, 4.0], None).unwrap();
        assert_eq!(svg.matches("<rect").count(), 16);
        // determinism, byte for byte
        let again = render_coloring(&grid, [0.0, 0.0, 4.0, 4.0], None).unwrap();
        assert_eq!(svg, again);
    }

    #[test]
    fn strip_bands_cover_the_view() {
        let strip = Coloring::Strip { n: 2 };
        let svg = render_coloring(&strip, [0.0, -2.0, 1.0, 2.0], None).unwrap();
        assert_eq!(svg.matches("<rect").count(), 4);
    }

    #[test]
    fn two_ball_scene_shows_both_balls() {
        let svg = render_coloring(&Coloring::TwoBall, [-5.0, -3.0, 5.0, 3.0], None).unwrap();
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<rect").count(), 1);
    }

    #[test]
    fn palette_is_stable_and_distinguishes_neighbors() {
        assert_eq!(fill(0), fill(0));
        assert_ne!(fill(3), fill(4));
        assert!(fill(-1).starts_with("hsl("));
    }
}

//! Deterministic SVG 1.1 rendering of a region inside its window.

use std::fmt::Write;

use crate::convex::Point;
use crate::region::Region;
use crate::scenario::Window;

const WIDTH_PX: f64 = 800.0;

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    // avoid "-0.000000"
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        "0.000000".to_string()
    } else {
        s
    }
}

/// One `<path>` per component, one `<circle>` per germ location, and the
/// window frame. World y points up.
pub fn render(window: &Window, region: &Region, germs: &[Point], t: f64) -> String {
    let (w, h) = (window.max.x - window.min.x, window.max.y - window.min.y);
    let height_px = WIDTH_PX * h / w;
    let stroke = w.max(h) / 400.0;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(WIDTH_PX),
        num(height_px),
        num(window.min.x),
        num(-window.max.y),
        num(w),
        num(h)
    );
    let _ = writeln!(s, "<title>t = {}</title>", num(t));
    let _ = writeln!(s, r#"<g transform="scale(1,-1)">"#);
    let _ = writeln!(
        s,
        r##"<rect class="window" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#000000" stroke-width="{}"/>"##,
        num(window.min.x),
        num(window.min.y),
        num(w),
        num(h),
        num(stroke)
    );
    for c in region.components() {
        let mut d = String::new();
        for (i, v) in c.vertices().iter().enumerate() {
            let _ = write!(
                d,
                "{}{} {} ",
                if i == 0 { "M" } else { "L" },
                num(v.x),
                num(v.y)
            );
        }
        d.push('Z');
        let _ = writeln!(
            s,
            r##"<path class="component" d="{d}" fill="#4a7ab5" fill-opacity="0.5" stroke="#1f3f66" stroke-width="{}"/>"##,
            num(stroke)
        );
    }
    for g in germs {
        let _ = writeln!(
            s,
            r##"<circle class="germ" cx="{}" cy="{}" r="{}" fill="#c0392b"/>"##,
            num(g.x),
            num(g.y),
            num(2.0 * stroke)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::ConvexBody;

    fn window() -> Window {
        Window {
            min: Point::new(0.0, 0.0),
            max: Point::new(10.0, 5.0),
        }
    }

    #[test]
    fn empty_region_has_frame_only() {
        let s = render(&window(), &Region::empty(), &[], 0.0);
        assert_eq!(s.matches("<rect").count(), 1);
        assert_eq!(s.matches("<path").count(), 0);
        assert_eq!(s.matches("<circle").count(), 0);
    }

    #[test]
    fn one_path_per_component() {
        let r = Region::from_components(vec![
            ConvexBody::rect(1.0, 1.0, 2.0, 2.0),
            ConvexBody::rect(5.0, 1.0, 6.0, 3.0),
        ]);
        let germs = [Point::new(1.5, 1.5), Point::new(5.5, 2.0)];
        let s = render(&window(), &r, &germs, 0.5);
        assert_eq!(s.matches("<path").count(), 2);
        assert_eq!(s.matches("<circle").count(), 2);
        assert_eq!(s, render(&window(), &r, &germs, 0.5));
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(num(-0.0), "0.000000");
        assert_eq!(num(-1e-9), "0.000000");
        assert_eq!(num(-1.5), "-1.500000");
    }
}

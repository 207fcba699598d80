use eclift::emit::{write_report, write_svg, FdScene, LatticeRecord};
use eclift::lift::{build_lift_report, level_context};
use eclift::weierstrass::{validate_curve, DEFAULT_ORACLE_LIMIT};
use serde_json::Value;

fn circles(svg: &str) -> Vec<(f64, f64)> {
    svg.lines()
        .filter(|l| l.trim_start().starts_with("<circle"))
        .map(|l| {
            let attr = |k: &str| {
                let s = &l[l.find(&format!("{k}=\"")).unwrap() + k.len() + 2..];
                s[..s.find('"').unwrap()].parse::<f64>().unwrap()
            };
            (attr("cx"), attr("cy"))
        })
        .collect()
}

fn view_box(svg: &str) -> [f64; 4] {
    let s = &svg[svg.find("viewBox=\"").unwrap() + 9..];
    let v: Vec<f64> = s[..s.find('"').unwrap()].split_whitespace().map(|t| t.parse().unwrap()).collect();
    [v[0], v[1], v[2], v[3]]
}

#[test]
fn ten_point_level_draws_ten_circles_inside_the_frame() {
    let curve = validate_curve(3, 0, 5).unwrap();
    let lc = level_context(&curve, 1, DEFAULT_ORACLE_LIMIT).unwrap();
    assert_eq!(lc.level.count, 10);
    let svg = write_svg(&FdScene::from_level(&lc.level, "a3_b0 n=1"));
    let c = circles(&svg);
    assert_eq!(c.len(), 10);
    let [x0, y0, w, h] = view_box(&svg);
    assert!(c.iter().all(|&(x, y)| x >= x0 && x <= x0 + w && y >= y0 && y <= y0 + h));
    assert_eq!(svg.matches("#dc1e1e").count(), 1);
}

#[test]
fn lattice_record_lists_every_point() {
    let curve = validate_curve(0, 3, 7).unwrap();
    let lc = level_context(&curve, 2, DEFAULT_ORACLE_LIMIT).unwrap();
    let rec = LatticeRecord::from_level(&lc.level);
    assert_eq!(rec.points.len() as u64, rec.count);
    assert_eq!(rec.d1 * rec.d2, rec.count);
    let v: Value = serde_json::to_value(&rec).unwrap();
    assert_eq!(v["points"][0]["coords"], serde_json::json!(["0/1", "0/1"]));
}

#[test]
fn report_is_deterministic_and_complete() {
    let curve = validate_curve(3, 0, 5).unwrap();
    let a = write_report(&build_lift_report(&curve, 3).unwrap());
    let b = write_report(&build_lift_report(&curve, 3).unwrap());
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["curve"], serde_json::json!({"a": 3, "b": 0, "p": 5}));
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    for l in levels {
        assert_eq!(l["oracle_agrees"], true);
    }
}

#[test]
fn supersingular_report_carries_a_warning() {
    let curve = validate_curve(1, 0, 7).unwrap();
    let report = build_lift_report(&curve, 2).unwrap();
    let v: Value = serde_json::from_str(&write_report(&report)).unwrap();
    let warnings = v["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("supersingular")), "{warnings:?}");
}

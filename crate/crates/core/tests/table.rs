use qhsiegel::table::{emit_table, Grid, TableKind};
use qhsiegel::QuadratureSpec;

fn table(kind: TableKind, grid: &str) -> (String, qhsiegel::table::TableSummary) {
    let mut buf = Vec::new();
    let grid: Grid = grid.parse().unwrap();
    let summary = emit_table(kind, &grid, &QuadratureSpec::default(), &mut buf).unwrap();
    (String::from_utf8(buf).unwrap(), summary)
}

fn rows(csv: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv.as_bytes()).records().map(Result::unwrap).collect()
}

#[test]
fn heis_single_point() {
    let (out, s) = table(TableKind::Heis, "x=1;t=0;lambda=0");
    assert_eq!(s.rows, 1);
    let r = &rows(&out)[0];
    let v: f64 = r[6].parse().unwrap();
    assert!((v - 1.0 / (4.0 * std::f64::consts::PI.powi(3))).abs() < 1e-12);
    assert!((v - 8.0629e-3).abs() < 1e-7);
    assert_eq!(&r[11], "ok");
}

#[test]
fn empty_grid_is_header_only() {
    let (out, s) = table(TableKind::Klambda, "");
    assert_eq!(s.rows, 0);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("x0,x1,x2,x3,t1,t2,t3,l1,l2,l3,value_t"));
    let (out, _) = table(TableKind::Heis, "x=0.5:2:0");
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn x_zero_is_marked_skipped() {
    let (out, s) = table(TableKind::Klambda, "x=0,1;t=0.5");
    assert_eq!((s.rows, s.skipped), (2, 1));
    let r = rows(&out);
    assert_eq!(&r[0][15], "skipped");
    assert_eq!(&r[0][16], "x=0 outside reduced-representation domain");
    assert_eq!(&r[1][15], "ok");
    assert!(r[1][14].parse::<f64>().unwrap() >= 0.0);
}

#[test]
fn heis_grid_shape_and_poles() {
    let (out, s) = table(TableKind::Heis, "x=0.5:2:4;t=-2:2:5;lambda=0,2,3");
    assert_eq!(s.rows, 60);
    // λ = 2 is a pole of the closed form; λ = 3 is not.
    assert_eq!(s.skipped, 20);
    assert!(rows(&out).iter().filter(|r| &r[5] == "3").all(|r| &r[11] == "ok"));
}

#[test]
fn szego_table_matches_kernel() {
    let (out, s) = table(TableKind::Szego, "u=-1,0,1");
    assert_eq!((s.rows, s.skipped), (3, 2));
    let r = rows(&out);
    // q = (0, 1): S(q, 0) = k (1/2)⁻⁵ = 32k.
    let v: f64 = r[2][8].parse().unwrap();
    assert!((v - 32.0 * qhsiegel::szego::K).abs() < 1e-15);
}

use std::f64::consts::PI;

use holefem::{generate_disk_mesh, read_mesh, write_mesh, MeshError};
use proptest::prelude::*;

/// Interior angles of a triangle in degrees, by the law of cosines.
fn angles(p: [[f64; 2]; 3]) -> [f64; 3] {
    let d = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
    let (a, b, c) = (d(p[1], p[2]), d(p[2], p[0]), d(p[0], p[1]));
    let angle = |opp: f64, s1: f64, s2: f64| ((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2)).acos().to_degrees();
    [angle(a, b, c), angle(b, c, a), angle(c, a, b)]
}

#[test]
fn min_angle_at_least_20_degrees() {
    for level in 0..=6 {
        let mesh = generate_disk_mesh(level);
        let min = (0..mesh.num_triangles())
            .flat_map(|t| angles(mesh.triangle_points(t)))
            .fold(f64::INFINITY, f64::min);
        assert!(min >= 20.0, "level {level}: {min}");
        assert!((min - mesh.min_angle_deg()).abs() < 1e-9);
    }
}

#[test]
fn refinement_family() {
    let mut prev = generate_disk_mesh(0);
    assert_eq!((prev.num_vertices(), prev.num_triangles()), (7, 6));
    assert!((prev.h_avg() - 1.0).abs() < 1e-15);
    for level in 1..=6 {
        let mesh = generate_disk_mesh(level);
        let ratio = mesh.h_avg() / prev.h_avg();
        assert!((0.45..=0.55).contains(&ratio), "level {level}: {ratio}");
        assert_eq!(mesh.vertices()[mesh.origin_vertex()], [0.0, 0.0]);
        assert_eq!(mesh.num_triangles(), 4 * prev.num_triangles());
        // Euler characteristic of a disk
        assert_eq!(mesh.num_vertices() as i64 - mesh.num_edges() as i64 + mesh.num_triangles() as i64, 1);
        let h = mesh.h_avg();
        assert!((mesh.total_area() - PI).abs() <= 2.0 * h * h);
        prev = mesh;
    }
}

#[test]
fn boundary_vertices_on_circle() {
    let mesh = generate_disk_mesh(5);
    for e in mesh.boundary_edges() {
        for &v in e {
            let p = mesh.vertices()[v];
            assert!((p[0].hypot(p[1]) - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn base_mesh_round_trips_bit_exactly() {
    let bytes = write_mesh(&generate_disk_mesh(0));
    let text = String::from_utf8(bytes.clone()).unwrap();
    assert!(text.starts_with("holefem-mesh 1\n7 6 6\n"));
    assert_eq!(write_mesh(&read_mesh(&bytes).unwrap()), bytes);
}

#[test]
fn read_errors_carry_line_numbers() {
    let clockwise = "holefem-mesh 1\n4 1 0\n0 0\n1 0\n0 1\n0.5 0.5\n0 2 1\n";
    let err = read_mesh(clockwise.as_bytes()).unwrap_err();
    assert!(matches!(err, MeshError::InvalidAt { line: 7, .. }));
    assert_eq!(err.to_string(), "line 7: negative area, triangle 0");

    let no_origin = "holefem-mesh 1\n3 1 3\n1 0\n0 1\n-1 0\n0 1 2\n0 1\n1 2\n2 0\n";
    assert!(read_mesh(no_origin.as_bytes()).unwrap_err().to_string().contains("origin not a vertex"));

    assert!(matches!(read_mesh(b"holefem-mesh 2\n0 0 0\n"), Err(MeshError::Syntax { line: 1, .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn write_then_read_is_identity(level in 0usize..4) {
        let mesh = generate_disk_mesh(level);
        let bytes = write_mesh(&mesh);
        let back = read_mesh(&bytes).unwrap();
        prop_assert_eq!(back.vertices(), mesh.vertices());
        prop_assert_eq!(back.triangles(), mesh.triangles());
        prop_assert_eq!(back.boundary_edges(), mesh.boundary_edges());
        prop_assert_eq!(write_mesh(&back), bytes);
    }
}

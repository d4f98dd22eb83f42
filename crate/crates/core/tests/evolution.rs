use hyperiso::candidates::{abb_naive_mesh, initial_mesh, CandidateSpec, Case};
use hyperiso::evolve::{evolve_to_convergence, orthogonality_check, restore_volume, EvolveConfig, Status};
use hyperiso::functionals::{self, QuadratureRule};
use hyperiso::hyperbolic::{self, ExactFamily};
use hyperiso::mesh::{read_off, reflect_to_full_cell, write_off};

const RULE: QuadratureRule = QuadratureRule::Midpoint3;

#[test]
fn eighth_sphere_converges_to_the_closed_form() {
    let spec = CandidateSpec::new(Case::Aaa, 0.2).unwrap();
    let r = evolve_to_convergence(&initial_mesh(&spec).unwrap(), &EvolveConfig::default()).unwrap();
    assert_eq!(r.status, Status::Converged);
    let exact = hyperbolic::sphere_area_exact(0.2).unwrap() / 8.0;
    assert!((r.area - exact).abs() <= 0.00163, "area {} vs {exact}", r.area);
    assert!((r.volume - spec.target_volume).abs() <= 1e-9);
    assert!(r.area_monotone(1e-12));
    for v in &r.mesh.vertices {
        assert!((v.pos.norm() - 0.2).abs() < 0.01);
    }
}

#[test]
fn hypersphere_slab_meets_the_walls_at_right_angles() {
    let spec = CandidateSpec::with_volume(Case::Bbe, 0.02).unwrap();
    let r = evolve_to_convergence(&initial_mesh(&spec).unwrap(), &EvolveConfig::default()).unwrap();
    assert_eq!(r.status, Status::Converged);
    let exact = ExactFamily::Hypersphere(0.1).with_volume(0.02).unwrap().area_in_eighth().unwrap();
    assert!((r.area - exact).abs() < 2e-3, "area {} vs {exact}", r.area);
    assert!(r.orthogonality_deficit < 0.02);
}

#[test]
fn naive_unduloid_start_ends_above_the_adjusted_one() {
    let v = 0.03;
    let cfg = EvolveConfig::default();
    let adjusted = evolve_to_convergence(&initial_mesh(&CandidateSpec::with_volume(Case::Abb, v).unwrap()).unwrap(), &cfg).unwrap();
    let naive = evolve_to_convergence(&abb_naive_mesh(v).unwrap(), &cfg).unwrap();
    assert_eq!(adjusted.status, Status::Converged);
    let exact = ExactFamily::VerticalUnduloid(0.1).with_volume(v).unwrap().area_in_eighth().unwrap();
    assert!((adjusted.area - exact).abs() < 2e-3, "adjusted {} vs {exact}", adjusted.area);
    assert!(naive.status != Status::Converged || naive.area >= adjusted.area - 1e-6);
}

#[test]
fn lawson_below_its_volume_range_degenerates() {
    let spec = CandidateSpec::with_volume(Case::Bbd, 0.012).unwrap();
    let r = evolve_to_convergence(&initial_mesh(&spec).unwrap(), &EvolveConfig::default()).unwrap();
    assert_eq!(r.status, Status::Degenerate);
    assert!(r.reason.is_some());
}

#[test]
fn volume_restoration_hits_the_target() {
    let spec = CandidateSpec::new(Case::Ddd, 0.23).unwrap();
    let mut m = initial_mesh(&spec).unwrap();
    let cfg = EvolveConfig::default();
    let target = spec.target_volume * 1.01;
    restore_volume(&mut m, target, &cfg).unwrap();
    assert!((functionals::volume(&m, RULE) - target).abs() <= 1e-9);
    assert!(m.max_constraint_residual() <= 1e-10);
}

#[test]
fn mirror_images_multiply_area_and_volume_by_eight() {
    let spec = CandidateSpec::new(Case::Bbd, 0.22).unwrap();
    let m = initial_mesh(&spec).unwrap();
    let full = reflect_to_full_cell(&m);
    let area = functionals::area(&m, RULE);
    let vol = functionals::volume(&m, RULE);
    assert!((functionals::area(&full, RULE) - 8.0 * area).abs() <= 1e-9 * 8.0 * area);
    assert!((functionals::volume(&full, RULE) - 8.0 * vol).abs() <= 1e-9 * 8.0 * vol);
    full.validate().unwrap();
}

#[test]
fn evolved_mesh_survives_off_export() {
    let spec = CandidateSpec::new(Case::Bbe, 0.15).unwrap();
    let r = evolve_to_convergence(&initial_mesh(&spec).unwrap(), &EvolveConfig::default()).unwrap();
    let mut buf = Vec::new();
    write_off(&r.mesh, &mut buf).unwrap();
    let back = read_off(&buf[..]).unwrap();
    assert_eq!(back.target_volume, r.mesh.target_volume);
    assert!((functionals::area(&back, RULE) - r.area).abs() < 1e-12);
    assert!((orthogonality_check(&back) - r.orthogonality_deficit).abs() < 1e-9);
}

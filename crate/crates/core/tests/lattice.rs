use std::time::Instant;

use halfsph::lattice::{builtin, verify_diagram, Diagram, LatticeConfig, ProperStatus};

fn run(name: &str) -> halfsph::lattice::DiagramReport {
    let t = Instant::now();
    let r = verify_diagram(&builtin(name).unwrap(), &LatticeConfig::default()).unwrap();
    eprintln!("{name}: {:?}\n{}", t.elapsed(), r.to_markdown());
    r
}

#[test]
fn six_spheres() {
    let r = run("six-spheres");
    assert_eq!(r.inclusions_proved(), 7);
    assert!(r.intersections.iter().all(|v| v.proved));
    assert_eq!(r.certified(), 7);
    assert!(r.properness.iter().all(|v| v.reverified == Some(true)));
    assert!(!r.transitivity.is_empty() && r.ok());
}

#[test]
fn ten_spheres() {
    let r = run("ten-spheres");
    assert_eq!(r.inclusions_proved(), r.inclusions.len());
    assert!(r.reals.iter().all(|v| v.proved), "{:?}", r.reals);
    let indirect = r.properness.iter().filter(|v| v.status == ProperStatus::Indirect).count();
    assert_eq!(r.certified() + indirect, r.properness.len());
    assert!(r.ok());
}

#[test]
fn groups() {
    let r = run("groups");
    assert_eq!(r.inclusions_proved(), 7);
    assert!(r.intersections.iter().all(|v| v.proved), "{:?}", r.intersections);
}

#[test]
fn empty_diagram() {
    let r = verify_diagram(&Diagram::empty("none", 2), &LatticeConfig::default()).unwrap();
    assert!(r.is_empty() && r.ok());
    assert!(r.to_markdown().contains("Empty diagram"));
}

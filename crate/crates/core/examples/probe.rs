use gtrans::distributions::FamilySpec;
use gtrans::harness::{statistic_atoms, RefDist, StatKind};
fn main() {
    let spec = FamilySpec::binomial(40, 0.5).unwrap();
    let (atoms, _) = statistic_atoms(&spec, StatKind::G2, RefDist::ChiSq1, 1e-15).unwrap();
    for a in atoms.iter().take(12) {
        let r = (a.ref_cdf - a.lower) / (a.upper - a.lower);
        println!("stat {:8.4}  outcomes {:?} pmf {:.3e}  r = {:.4}", a.stat, a.outcomes, a.pmf, r);
    }
    let rs: Vec<f64> = atoms.iter().skip(1).map(|a| (a.ref_cdf - a.lower) / (a.upper - a.lower)).collect();
    println!("n r in (0.4,0.6): {} of {}", rs.iter().filter(|r| **r > 0.4 && **r < 0.6).count(), rs.len());
}

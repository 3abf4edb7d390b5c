use nalgebra::{Complex, DMatrix};
use pairsim::verify::{run_with, Level, Status};

#[test]
fn wrong_conjugation_fails_oracle_equivalence() {
    let identity = DMatrix::<Complex<f64>>::identity(8, 8);
    let reports = run_with(Level::Fast, &identity);
    let c3 = reports.iter().find(|r| r.id == 3).unwrap();
    println!("{c3}");
    assert_eq!(c3.status, Status::Fail);
}

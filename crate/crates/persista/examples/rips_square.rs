//! Vietoris-Rips persistence of the unit square's corner points.
//!
//! Builds the Rips filtration on the four corners of the unit square up to
//! dimension 2, reduces it, and checks that H_1 carries exactly one bar
//! `[1, sqrt(2))`: the square's loop closes once all four sides are present
//! and fills in when the diagonals arrive. Run with:
//!
//! ```text
//! cargo run --example rips_square
//! ```

use persista::algebra::PrimeField;
use persista::fixtures::unit_square_points;
use persista::io::{build_rips, write_cwf, PointCloud};
use persista::persistence::{barcode_absolute_homology, reduce};

fn main() -> persista::Result<()> {
    let cloud = PointCloud::new(unit_square_points())?;
    let f = build_rips(&cloud, 2, 2.0)?;
    println!("{} cells up to dimension {:?}", f.len(), f.max_dim());
    print!("{}", write_cwf(&f));

    let field = PrimeField::new(2)?;
    let barcode = barcode_absolute_homology(&reduce(&f, field), &f);
    println!("absolute homology:");
    for i in barcode.intervals() {
        println!("  {i}");
    }

    let loops: Vec<_> = barcode.intervals_of_dim(1).collect();
    assert_eq!(loops.len(), 1);
    assert_eq!(loops[0].birth, 1.0);
    assert_eq!(loops[0].death, 2.0f64.sqrt());
    println!(
        "the loop lives on [{}, {}), exactly the side and diagonal lengths",
        loops[0].birth, loops[0].death
    );

    Ok(())
}

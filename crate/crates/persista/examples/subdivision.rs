//! Barycentric subdivision: mesh refinement without topological change.
//!
//! Subdivides the unit equilateral triangle three times, printing simplex
//! counts and the maximum simplex diameter at each step, and checks that the
//! Betti numbers never move while the diameter contracts by the expected 2/3
//! factor per round. Run with:
//!
//! ```text
//! cargo run --example subdivision
//! ```

use persista::algebra::PrimeField;
use persista::fixtures::equilateral_triangle;
use persista::homology::{barycentric_subdivide_geometric, betti_numbers};

fn main() -> persista::Result<()> {
    let field = PrimeField::new(2)?;
    let mut g = equilateral_triangle();
    let betti = betti_numbers(g.complex(), field);
    println!(
        "step 0: {} simplices, diameter {}, betti {:?}",
        g.complex().len(),
        g.max_diameter(),
        betti.as_slice()
    );

    for step in 1..=3 {
        let (next, report) = barycentric_subdivide_geometric(&g)?;
        g = next;
        assert_eq!(betti_numbers(g.complex(), field), betti);
        assert!(report.max_diameter_after <= 2.0 / 3.0 * report.max_diameter_before + 1e-12);
        println!(
            "step {step}: {} simplices, diameter {}, betti {:?}",
            g.complex().len(),
            g.max_diameter(),
            betti_numbers(g.complex(), field).as_slice()
        );
        if step == 1 {
            // One round takes the unit triangle's diameter to sqrt(3)/3: the
            // longest edges run from a vertex to the barycenter.
            assert!((g.max_diameter() - 3.0f64.sqrt() / 3.0).abs() < 1e-12);
        }
    }

    Ok(())
}

//! The four standard barcodes of one filtration, end to end.
//!
//! Builds the 6-cell filtered 2-sphere (two vertices, two edges, two
//! triangles, one cell per step), reduces its boundary matrix over F_2, and
//! prints absolute/relative homology/cohomology barcodes, the spectrum, and
//! the concatenated barcodes. Run with:
//!
//! ```text
//! cargo run --example sphere_barcodes
//! ```

use persista::algebra::PrimeField;
use persista::fixtures::s2_filtration;
use persista::persistence::{concatenated_barcode, spectrum, standard_barcodes, Barcode};

fn print_barcode(name: &str, b: &Barcode) {
    println!("{name}:");
    for i in b.intervals() {
        println!("  {i}");
    }
}

fn main() -> persista::Result<()> {
    let f = s2_filtration();
    let field = PrimeField::new(2)?;

    // standard_barcodes re-derives cohomology by anti-transposed reduction
    // and relative barcodes by endpoint reflection, asserting along the way
    // that both routes agree with the direct ones.
    let all = standard_barcodes(&f, field)?;
    print_barcode("absolute homology", &all.absolute_homology);
    print_barcode("absolute cohomology", &all.absolute_cohomology);
    print_barcode("relative homology", &all.relative_homology);
    print_barcode("relative cohomology", &all.relative_cohomology);

    assert_eq!(all.absolute_homology.len(), 4);
    assert_eq!(all.absolute_homology, all.absolute_cohomology);
    assert_eq!(all.relative_homology, all.relative_cohomology);

    let points = spectrum(&all.absolute_homology);
    println!("spectrum: {points:?}");
    assert_eq!(points, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, f64::INFINITY]);

    // Over the doubled index set every dimension becomes purely finite:
    // essential bars close up at the barred copy of their birth.
    for k in 0..=2 {
        let conc = concatenated_barcode(&f, field, k);
        let text: Vec<String> = conc.iter().map(|i| i.to_string()).collect();
        println!("concatenated, dim {k}: {}", text.join(" "));
    }

    Ok(())
}

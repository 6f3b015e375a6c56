//! Rendering a barcode as a persistence diagram and as barcode strips.
//!
//! Computes the filtered 2-sphere's absolute barcode and writes both SVG
//! styles next to your temp directory, printing the paths. The output is
//! deterministic: rendering the same barcode twice yields identical bytes.
//! Run with:
//!
//! ```text
//! cargo run --example diagram_svg
//! ```

use persista::algebra::PrimeField;
use persista::fixtures::s2_filtration;
use persista::io::{emit_diagram_svg, DiagramStyle};
use persista::persistence::{barcode_absolute_homology, reduce};

fn main() -> persista::Result<()> {
    let f = s2_filtration();
    let barcode = barcode_absolute_homology(&reduce(&f, PrimeField::new(2)?), &f);

    let dir = std::env::temp_dir();
    for (style, name) in [
        (DiagramStyle::Diagram, "sphere-diagram.svg"),
        (DiagramStyle::BarcodeStrips, "sphere-strips.svg"),
    ] {
        let svg = emit_diagram_svg(&barcode, style);
        assert_eq!(svg, emit_diagram_svg(&barcode, style));
        let path = dir.join(name);
        std::fs::write(&path, &svg)
            .map_err(|e| persista::Error::ValidationError(format!("cannot write svg: {e}")))?;
        println!("wrote {} ({} bytes)", path.display(), svg.len());
    }

    Ok(())
}

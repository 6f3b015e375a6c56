//! Parsing and writing the two filtration formats and barcode TSV.
//!
//! Round-trips a small simplicial filtration through the `.flt` text format,
//! the same filtration through the explicit-boundary `.cwf` format, and a
//! barcode through TSV, then shows the line-numbered errors malformed input
//! produces. Run with:
//!
//! ```text
//! cargo run --example file_formats
//! ```

use persista::algebra::PrimeField;
use persista::io::{
    parse_filtration, read_barcode_tsv, write_barcode, write_cwf, BarcodeFormat, FiltrationFormat,
};
use persista::persistence::{barcode_absolute_homology, reduce};

const TRIANGLE_FLT: &str = "\
# a filled triangle, one simplex per line: birth then vertices
0 0
0 1
1 2
1 0 1
1 1 2
2 0 2
3 0 1 2
";

fn main() -> persista::Result<()> {
    let f = parse_filtration(TRIANGLE_FLT, FiltrationFormat::Simplicial)?;
    println!("parsed {} cells from the simplicial format", f.len());

    // The explicit-boundary format round-trips through the same parser.
    let cwf = write_cwf(&f);
    print!("{cwf}");
    assert_eq!(parse_filtration(&cwf, FiltrationFormat::CellComplex)?, f);

    let barcode = barcode_absolute_homology(&reduce(&f, PrimeField::new(2)?), &f);
    let tsv = write_barcode(&barcode, BarcodeFormat::Tsv);
    print!("{tsv}");
    assert_eq!(read_barcode_tsv(&tsv)?, barcode);
    println!("barcode TSV parses back to an equal barcode");

    // Errors carry the 1-based line number of the offending input line.
    let bad = "0 0\n0 0 zero\n";
    match parse_filtration(bad, FiltrationFormat::Simplicial) {
        Err(e) => println!("malformed input: {e}"),
        Ok(_) => unreachable!("parse accepted a malformed line"),
    }

    Ok(())
}

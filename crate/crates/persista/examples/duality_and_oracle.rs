//! Cross-checking reduction output on randomly generated filtrations.
//!
//! Draws seeded random filtrations, derives all four standard barcodes (the
//! constructor itself asserts the homology/cohomology and absolute/relative
//! dualities), and replays the absolute and relative barcodes through the
//! rank-invariant oracle, which recomputes every structure-map rank by dense
//! linear algebra and never touches the reduction. Run with:
//!
//! ```text
//! cargo run --example duality_and_oracle
//! ```

use persista::algebra::PrimeField;
use persista::persistence::{rank_invariant_oracle, OracleVariant};
use persista::verify::random_filtration;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> persista::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..10 {
        let f = random_filtration(&mut rng, 6, 3, 20);
        for p in [2, 5] {
            let field = PrimeField::new(p)?;
            let all = persista::persistence::standard_barcodes(&f, field)?;
            let absolute = rank_invariant_oracle(&f, field, OracleVariant::Absolute)?;
            let relative = rank_invariant_oracle(&f, field, OracleVariant::Relative)?;
            assert_eq!(all.absolute_homology, absolute);
            assert_eq!(all.relative_homology, relative);
        }
        println!(
            "case {case}: {} cells, {} absolute bars, oracle agrees over F_2 and F_5",
            f.len(),
            rank_invariant_oracle(&f, PrimeField::new(2)?, OracleVariant::Absolute)?.len()
        );
    }
    Ok(())
}

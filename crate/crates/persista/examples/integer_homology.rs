//! Integer homology with torsion, for simplicial and cell complexes.
//!
//! Runs Smith normal form over the boundary matrices of the classical
//! fixtures: spheres, a full simplex, the 6-vertex projective plane, and the
//! minimal cell structure on the projective plane (one cell per dimension,
//! 2-cell attached with degree 2). Both projective planes show H_1 = Z/2,
//! which no single field can see on its own. Run with:
//!
//! ```text
//! cargo run --example integer_homology
//! ```

use persista::core::{Cell, Chain, Filtration};
use persista::fixtures::{disjoint_triangles, full_simplex, rp2_complex, sphere_complex};
use persista::homology::{integer_homology, integer_homology_of_filtration, IntegerHomology};

fn print_groups(name: &str, h: &IntegerHomology) {
    let groups: Vec<String> = (0..h.dims()).map(|d| h.group_string(d)).collect();
    println!("{name}: {}", groups.join(", "));
}

fn main() -> persista::Result<()> {
    for d in 1..=3 {
        let h = integer_homology(&sphere_complex(d));
        print_groups(&format!("S^{d}"), &h);
        assert_eq!(h.betti(0), 1);
        assert_eq!(h.betti(d), 1);
    }

    let h = integer_homology(&full_simplex(3));
    print_groups("solid tetrahedron", &h);
    assert_eq!(h.free_ranks().as_slice(), [1, 0, 0, 0, 0]);

    let h = integer_homology(&disjoint_triangles(3));
    print_groups("three disjoint triangles", &h);
    assert_eq!(h.betti(0), 3);
    assert_eq!(h.betti(1), 0);

    let h = integer_homology(&rp2_complex());
    print_groups("projective plane (triangulated)", &h);
    assert_eq!(h.group_string(1), "Z/2");
    assert_eq!(h.betti(2), 0);

    // The same space as a cell complex: point, loop, and a 2-cell whose
    // attaching map wraps the loop twice.
    let cw_rp2 = Filtration::new(vec![
        Cell { id: 0, dim: 0, birth: 0.0, boundary: Chain::zero() },
        Cell { id: 1, dim: 1, birth: 0.0, boundary: Chain::zero() },
        Cell { id: 2, dim: 2, birth: 0.0, boundary: Chain::from_terms([(1usize, 2i64)])? },
    ])?;
    let h = integer_homology_of_filtration(&cw_rp2);
    print_groups("projective plane (3 cells)", &h);
    assert_eq!(h.group_string(0), "Z");
    assert_eq!(h.group_string(1), "Z/2");
    assert_eq!(h.group_string(2), "0");

    Ok(())
}

//! Built-in complexes, pairs, and filtrations used by tests, examples, and
//! the CLI `example` verb.
//!
//! Everything here is small and hard-coded; the values these fixtures are
//! tested against are frozen in the test suites.

use std::collections::BTreeMap;

use crate::core::{
    filtration_from_complex, Cell, Chain, Filtration, GeometricComplex, Simplex,
    SimplicialComplex,
};

/// A filtration of the 2-sphere as a CW complex with two cells in each
/// dimension 0, 1, 2, one cell per step, in cell-filtration text format.
///
/// Cell k is born at value k. The two 1-cells share the boundary
/// `v0 - v1` and the two 2-cells share the boundary `e2 - e3`, so each
/// dimension contributes one short-lived class and the whole space ends as
/// a 2-sphere.
pub const S2_CWF: &str = "\
# 2-sphere as a CW filtration: two cells in each dimension 0..2.
# id dim birth faces
0 0 0
1 0 1
2 1 2 0:1 1:-1
3 1 3 0:1 1:-1
4 2 4 2:1 3:-1
5 2 5 2:1 3:-1
";

/// The filtration described by [`S2_CWF`], built directly.
pub fn s2_filtration() -> Filtration {
    let boundaries: [&[(usize, i64)]; 6] = [
        &[],
        &[],
        &[(0, 1), (1, -1)],
        &[(0, 1), (1, -1)],
        &[(2, 1), (3, -1)],
        &[(2, 1), (3, -1)],
    ];
    let dims = [0, 0, 1, 1, 2, 2];
    let cells = boundaries
        .iter()
        .zip(dims)
        .enumerate()
        .map(|(id, (b, dim))| Cell {
            id,
            dim,
            birth: id as f64,
            boundary: Chain::from_terms(b.iter().copied()).expect("small boundary"),
        })
        .collect();
    Filtration::new(cells).expect("fixture filtration is valid")
}

/// The boundary of the (d+1)-simplex: a triangulated d-sphere on d+2
/// vertices.
pub fn sphere_complex(d: usize) -> SimplicialComplex {
    let n = (d + 2) as u32;
    let facets = subsets_of_size(n, d + 1).into_iter().map(Simplex::new);
    SimplicialComplex::from_maximal(facets)
}

/// The full d-simplex on d+1 vertices: a triangulated d-disk.
pub fn full_simplex(d: usize) -> SimplicialComplex {
    SimplicialComplex::from_maximal([Simplex::new((0..=d as u32).collect())])
}

/// The cycle graph on four vertices (the square).
pub fn four_cycle() -> SimplicialComplex {
    SimplicialComplex::from_maximal(
        [[0, 1], [1, 2], [2, 3], [0, 3]].map(|e| Simplex::new(e.to_vec())),
    )
}

/// The minimal 6-vertex triangulation of the real projective plane (the
/// hemi-icosahedron): 10 triangles, 15 edges, Euler characteristic 1.
/// Every edge lies in exactly two triangles and every vertex link is a
/// 5-cycle, so this is a closed surface.
pub fn rp2_complex() -> SimplicialComplex {
    let triangles: [[u32; 3]; 10] = [
        [0, 1, 2],
        [0, 1, 5],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [1, 2, 4],
        [1, 3, 4],
        [1, 3, 5],
        [2, 3, 5],
        [2, 4, 5],
    ];
    SimplicialComplex::from_maximal(triangles.map(|t| Simplex::new(t.to_vec())))
}

/// The projective plane with every simplex born at 0; its barcode depends on
/// the coefficient field.
pub fn rp2_filtration() -> Filtration {
    filtration_from_complex(&rp2_complex(), |_| 0.0).expect("constant births are monotone")
}

/// The pair (full triangle, its boundary circle): a disk relative to its
/// bounding circle.
pub fn disk_circle_pair() -> (SimplicialComplex, SimplicialComplex) {
    let x = full_simplex(2);
    let a = SimplicialComplex::from_maximal(
        [[0, 1], [0, 2], [1, 2]].map(|e| Simplex::new(e.to_vec())),
    );
    (x, a)
}

/// The tetrahedron boundary split into closed upper and lower hemispheres
/// of two triangles each, returned as (X, A, B) with X = A ∪ B.
pub fn tetra_cover() -> (SimplicialComplex, SimplicialComplex, SimplicialComplex) {
    let x = sphere_complex(2);
    let a = SimplicialComplex::from_maximal(
        [[0, 1, 2], [0, 1, 3]].map(|t| Simplex::new(t.to_vec())),
    );
    let b = SimplicialComplex::from_maximal(
        [[0, 2, 3], [1, 2, 3]].map(|t| Simplex::new(t.to_vec())),
    );
    (x, a, b)
}

/// `p` pairwise disjoint full triangles: a complex with exactly `p`
/// connected components.
pub fn disjoint_triangles(p: usize) -> SimplicialComplex {
    SimplicialComplex::from_maximal((0..p as u32).map(|i| {
        Simplex::new(vec![3 * i, 3 * i + 1, 3 * i + 2])
    }))
}

/// An equilateral triangle with side length 1, with its 2-simplex filled in.
pub fn equilateral_triangle() -> GeometricComplex {
    let coords: BTreeMap<u32, Vec<f64>> = [
        (0, vec![0.0, 0.0]),
        (1, vec![1.0, 0.0]),
        (2, vec![0.5, 3.0f64.sqrt() / 2.0]),
    ]
    .into_iter()
    .collect();
    GeometricComplex::new(full_simplex(2), coords).expect("coordinates are finite")
}

/// The corners of the unit square, in reading order.
pub fn unit_square_points() -> Vec<Vec<f64>> {
    vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 1.0],
    ]
}

/// All size-k subsets of {0, .., n-1}, each ascending, in lexicographic
/// order.
fn subsets_of_size(n: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(start: u32, n: u32, k: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for v in start..n {
            current.push(v);
            go(v + 1, n, k, current, out);
            current.pop();
        }
    }
    go(0, n, k, &mut current, &mut out);
    out
}

//! Standard small triangulations used by demos and tests.
//!
//! Periodic and identified surfaces (torus, Möbius strip of squares) carry flat
//! per-cell charts so their geometry is intrinsic rather than embedded.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::complex::SimplicialComplex;

fn build(v: Vec<Vec<f64>>, s: &[Vec<usize>]) -> SimplicialComplex {
    SimplicialComplex::build(v, s).expect("built-in mesh is valid")
}

/// A single vertex.
pub fn point() -> SimplicialComplex {
    build(vec![vec![0.0]], &[vec![0]])
}

/// The unit right triangle (0,0), (1,0), (0,1).
pub fn triangle() -> SimplicialComplex {
    build(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], &[vec![0, 1, 2]])
}

/// The standard tetrahedron.
pub fn tetrahedron() -> SimplicialComplex {
    build(
        vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        &[vec![0, 1, 2, 3]],
    )
}

/// Boundary of the octahedron, outward oriented.
pub fn octahedron_sphere() -> SimplicialComplex {
    let v = vec![
        vec![1.0, 0.0, 0.0],
        vec![-1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, -1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 0.0, -1.0],
    ];
    let faces = vec![
        vec![0, 2, 4],
        vec![2, 1, 4],
        vec![1, 3, 4],
        vec![3, 0, 4],
        vec![2, 0, 5],
        vec![1, 2, 5],
        vec![3, 1, 5],
        vec![0, 3, 5],
    ];
    build(v, &faces)
}

/// Annulus between a unit-ish inner square and an outer square: 8 vertices, 8 triangles.
///
/// Inner vertices are 0..4, outer vertices 4..8, both anticlockwise.
pub fn annulus() -> SimplicialComplex {
    let corners = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)];
    let mut v: Vec<Vec<f64>> = corners.iter().map(|&(x, y)| vec![x, y]).collect();
    v.extend(corners.iter().map(|&(x, y)| vec![2.0 * x, 2.0 * y]));
    let mut faces = Vec::new();
    for i in 0..4 {
        let j = (i + 1) % 4;
        faces.push(vec![i, 4 + i, 4 + j]);
        faces.push(vec![i, 4 + j, j]);
    }
    build(v, &faces)
}

/// Disk as a fan of `m` triangles around vertex 0; ring vertices 1..=m anticlockwise.
pub fn disk_fan(m: usize) -> SimplicialComplex {
    assert!(m >= 3);
    let mut v = vec![vec![0.0, 0.0]];
    for i in 0..m {
        let a = 2.0 * PI * i as f64 / m as f64;
        v.push(vec![a.cos(), a.sin()]);
    }
    let faces: Vec<Vec<usize>> = (0..m).map(|i| vec![0, 1 + i, 1 + (i + 1) % m]).collect();
    build(v, &faces)
}

/// Rectangle of `nx * ny` unit squares, each split along its (0,0)-(1,1) diagonal.
pub fn square_grid(nx: usize, ny: usize) -> SimplicialComplex {
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut v = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            v.push(vec![i as f64, j as f64]);
        }
    }
    let mut faces = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            faces.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            faces.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    build(v, &faces)
}

/// Hexagon of six unit equilateral triangles around vertex 0 (well-centered).
pub fn equilateral_hexagon() -> SimplicialComplex {
    let mut v = vec![vec![0.0, 0.0]];
    for i in 0..6 {
        let a = PI / 3.0 * i as f64;
        v.push(vec![a.cos(), a.sin()]);
    }
    let faces: Vec<Vec<usize>> = (0..6).map(|i| vec![0, 1 + i, 1 + (i + 1) % 6]).collect();
    build(v, &faces)
}

/// Periodic `m * n` torus grid (m, n >= 3) with unit-square charts, embedded in 3-space.
pub fn torus(m: usize, n: usize) -> SimplicialComplex {
    assert!(m >= 3 && n >= 3, "torus grid needs at least 3x3 vertices");
    let id = |i: usize, j: usize| (j % n) * m + (i % m);
    let mut v = Vec::new();
    for j in 0..n {
        for i in 0..m {
            let (u, w) = (2.0 * PI * i as f64 / m as f64, 2.0 * PI * j as f64 / n as f64);
            v.push(vec![(2.0 + w.cos()) * u.cos(), (2.0 + w.cos()) * u.sin(), w.sin()]);
        }
    }
    let mut faces = Vec::new();
    let mut charts = Vec::new();
    for j in 0..n {
        for i in 0..m {
            let (x, y) = (i as f64, j as f64);
            faces.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            charts.push(vec![vec![x, y], vec![x + 1.0, y], vec![x + 1.0, y + 1.0]]);
            faces.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            charts.push(vec![vec![x, y], vec![x + 1.0, y + 1.0], vec![x, y + 1.0]]);
        }
    }
    SimplicialComplex::build_with_charts(v, &faces, Some(charts)).expect("torus grid is valid")
}

/// Minimal 5-vertex Möbius strip: triangles (i, i+1, i+2) mod 5.
pub fn mobius5() -> SimplicialComplex {
    let v = (0..5)
        .map(|i| {
            let u = 4.0 * PI * i as f64 / 5.0;
            let w = if i % 2 == 0 { -0.5 } else { 0.5 };
            mobius_point(u, w)
        })
        .collect();
    let faces: Vec<Vec<usize>> = (0..5).map(|i| vec![i, (i + 1) % 5, (i + 2) % 5]).collect();
    build(v, &faces)
}

/// Möbius strip made of `k >= 3` unit squares (2k triangles), with flat unit charts.
///
/// Bottom vertices are `0..k`, top vertices `k..2k`; the last square glues column k-1
/// to column 0 with top and bottom exchanged.
pub fn mobius_strip(k: usize) -> SimplicialComplex {
    assert!(k >= 3);
    let bottom = |i: usize| if i < k { i } else { k };
    let top = |i: usize| if i < k { k + i } else { 0 };
    let mut v = Vec::new();
    for (w, _) in [(-0.5, 0), (0.5, 1)] {
        for i in 0..k {
            v.push(mobius_point(2.0 * PI * i as f64 / k as f64, w));
        }
    }
    let mut faces = Vec::new();
    let mut charts = Vec::new();
    for i in 0..k {
        let x = i as f64;
        faces.push(vec![bottom(i), bottom(i + 1), top(i + 1)]);
        charts.push(vec![vec![x, 0.0], vec![x + 1.0, 0.0], vec![x + 1.0, 1.0]]);
        faces.push(vec![bottom(i), top(i + 1), top(i)]);
        charts.push(vec![vec![x, 0.0], vec![x + 1.0, 1.0], vec![x, 1.0]]);
    }
    SimplicialComplex::build_with_charts(v, &faces, Some(charts)).expect("Möbius strip is valid")
}

fn mobius_point(u: f64, w: f64) -> Vec<f64> {
    let r = 2.0 + w * (u / 2.0).cos();
    vec![r * u.cos(), r * u.sin(), w * (u / 2.0).sin()]
}

/// One step of uniform midpoint subdivision of a 1- or 2-dimensional complex.
///
/// Input orientations of top cells are preserved by every child.
pub fn refine(complex: &SimplicialComplex) -> SimplicialComplex {
    let n = complex.dim();
    assert!((1..=2).contains(&n), "refinement implemented for curves and surfaces");
    let mut v: Vec<Vec<f64>> = complex.vertices().to_vec();
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, v: &mut Vec<Vec<f64>>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoint.entry(key).or_insert_with(|| {
            let p = v[a].iter().zip(&v[b]).map(|(x, y)| 0.5 * (x + y)).collect();
            v.push(p);
            v.len() - 1
        })
    };
    let half = |p: &[f64], q: &[f64]| -> Vec<f64> { p.iter().zip(q).map(|(x, y)| 0.5 * (x + y)).collect() };
    let mut faces = Vec::new();
    let mut charts = Vec::new();
    for (t, s) in complex.simplices(n).iter().enumerate() {
        // Restore input orientation so children inherit it.
        let mut cell = s.clone();
        let mut chart = complex.top_coords(t);
        if complex.input_orientation()[t] < 0 {
            cell.swap(0, 1);
            chart.swap(0, 1);
        }
        if n == 1 {
            let m = mid(cell[0], cell[1], &mut v);
            faces.push(vec![cell[0], m]);
            faces.push(vec![m, cell[1]]);
            let cm = half(&chart[0], &chart[1]);
            charts.push(vec![chart[0].clone(), cm.clone()]);
            charts.push(vec![cm, chart[1].clone()]);
        } else {
            let (a, b, c) = (cell[0], cell[1], cell[2]);
            let (ab, bc, ca) = (mid(a, b, &mut v), mid(b, c, &mut v), mid(c, a, &mut v));
            faces.extend([vec![a, ab, ca], vec![ab, b, bc], vec![ca, bc, c], vec![ab, bc, ca]]);
            let (pa, pb, pc) = (&chart[0], &chart[1], &chart[2]);
            let (pab, pbc, pca) = (half(pa, pb), half(pb, pc), half(pc, pa));
            charts.push(vec![pa.clone(), pab.clone(), pca.clone()]);
            charts.push(vec![pab.clone(), pb.clone(), pbc.clone()]);
            charts.push(vec![pca.clone(), pbc.clone(), pc.clone()]);
            charts.push(vec![pab, pbc, pca]);
        }
    }
    let charts = complex.has_charts().then_some(charts);
    SimplicialComplex::build_with_charts(v, &faces, charts).expect("refinement of a valid complex is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_meshes_satisfy_dd_zero() {
        for c in [
            triangle(),
            tetrahedron(),
            octahedron_sphere(),
            annulus(),
            disk_fan(8),
            square_grid(3, 2),
            equilateral_hexagon(),
            torus(3, 3),
            mobius5(),
            mobius_strip(4),
        ] {
            assert!(c.boundary_squares_to_zero());
        }
    }

    #[test]
    fn counts() {
        let m = mobius5();
        assert_eq!((m.count(0), m.count(1), m.count(2)), (5, 10, 5));
        let t = torus(3, 3);
        assert_eq!((t.count(0), t.count(1), t.count(2)), (9, 27, 18));
        let r = refine(&annulus());
        assert_eq!(r.count(2), 32);
        assert_eq!(r.euler_characteristic(), 0);
    }

    #[test]
    fn refinement_preserves_orientation_class() {
        assert!(refine(&torus(3, 3)).orientability().unwrap().orientable);
        assert!(!refine(&mobius5()).orientability().unwrap().orientable);
    }
}

use extcalc::complex::{boundary, Chain, Parity, SimplicialComplex};
use extcalc::forms_dec::{coboundary, stokes_pairing_check, twist_cochain, Cochain};
use extcalc::io::{parse_cochain, parse_mesh, write_cochain, write_mesh};
use extcalc::meshes;
use extcalc::Rational;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn grid_triangles(n: usize) -> Vec<[usize; 3]> {
    let v = |i: usize, j: usize| i * (n + 1) + j;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push([v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            out.push([v(i, j), v(i + 1, j + 1), v(i, j + 1)]);
        }
    }
    out
}

/// A random subset of a triangulated 3x3 square, vertex order shuffled per triangle.
fn random_complex() -> impl Strategy<Value = SimplicialComplex> {
    let n = 3;
    let tris = grid_triangles(n);
    let count = tris.len();
    (prop::collection::vec(any::<bool>(), count), prop::collection::vec(0..6usize, count)).prop_filter_map(
        "empty selection",
        move |(keep, perm)| {
            let mut used = BTreeMap::new();
            let mut tops = Vec::new();
            for (t, (&k, &p)) in tris.iter().zip(keep.iter().zip(&perm)) {
                if !k {
                    continue;
                }
                let order = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]][p];
                let mut top = Vec::new();
                for o in order {
                    let next = used.len();
                    top.push(*used.entry(t[o]).or_insert(next));
                }
                tops.push(top);
            }
            if tops.is_empty() {
                return None;
            }
            let mut coords = vec![Vec::new(); used.len()];
            for (&orig, &new) in &used {
                coords[new] = vec![(orig / (n + 1)) as f64, (orig % (n + 1)) as f64];
            }
            SimplicialComplex::build(coords, &tops).ok()
        },
    )
}

fn rationals(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-50i64..50, 1i64..8), len)
        .prop_map(|v| v.into_iter().map(|(a, b)| Rational::new(a.into(), b.into())).collect())
}

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Straight), Just(Parity::Twisted)]
}

/// Complex with a random cochain of degree p and a random chain of degree p + 1.
fn stokes_case() -> impl Strategy<Value = (SimplicialComplex, Cochain<Rational>, Chain)> {
    (random_complex(), 0..2usize, parity()).prop_flat_map(|(c, p, par)| {
        let nc = c.count(p);
        let nk = c.count(p + 1);
        (Just(c), rationals(nc), rationals(nk)).prop_map(move |(c, w, k)| {
            let omega = Cochain::new(&c, p, w, par).unwrap();
            let mut chain = Chain::zero(p + 1, par);
            for (i, v) in k.into_iter().enumerate() {
                chain.add_term(i, v);
            }
            (c, omega, chain)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stokes_holds_exactly((c, omega, chain) in stokes_case()) {
        let (lhs, rhs) = stokes_pairing_check(&omega, &chain, &c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coboundary_squares_to_zero(c in random_complex(), par in parity(), seed in rationals(64)) {
        let values: Vec<Rational> = (0..c.count(0)).map(|i| seed[i % seed.len()].clone()).collect();
        let omega = Cochain::new(&c, 0, values, par).unwrap();
        let dd = coboundary(&coboundary(&omega, &c).unwrap(), &c).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn boundary_squares_to_zero(c in random_complex(), par in parity(), seed in rationals(64)) {
        let mut chain = Chain::zero(2, par);
        for i in 0..c.count(2) {
            chain.add_term(i, seed[i % seed.len()].clone());
        }
        let bb = boundary(&boundary(&chain, &c).unwrap(), &c).unwrap();
        prop_assert!(bb.is_zero());
    }

    #[test]
    fn twist_round_trip(p in 0..3usize, par in parity(), flip in any::<bool>(), seed in rationals(64)) {
        let c = meshes::torus(3, 4);
        let mut signs = c.orientability().unwrap().signs.unwrap();
        if flip {
            signs.iter_mut().for_each(|s| *s = -*s);
        }
        let values: Vec<Rational> = (0..c.count(p)).map(|i| seed[i % seed.len()].clone()).collect();
        let omega = Cochain::new(&c, p, values, par).unwrap();
        let once = twist_cochain(&omega, &c, &signs).unwrap();
        prop_assert_eq!(once.parity, par.flip());
        let twice = twist_cochain(&once, &c, &signs).unwrap();
        prop_assert_eq!(twice, omega);
    }

    #[test]
    fn cochain_csv_round_trip(p in 0..3usize, par in parity(), seed in rationals(64)) {
        let c = meshes::torus(3, 3);
        let values: Vec<Rational> = (0..c.count(p)).map(|i| seed[i % seed.len()].clone()).collect();
        let omega = Cochain::new(&c, p, values, par).unwrap();
        let back = parse_cochain(&write_cochain(&omega), &c).unwrap();
        prop_assert_eq!(back, omega);
    }

    #[test]
    fn mesh_round_trip(c in random_complex()) {
        let back = parse_mesh(&write_mesh(&c)).unwrap();
        for k in 0..=c.dim() {
            prop_assert_eq!(back.simplices(k), c.simplices(k));
        }
        prop_assert_eq!(back.euler_characteristic(), c.euler_characteristic());
    }
}
